#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace leachate {

/// Sectioned key-value configuration:
///   [section]
///   key = value        # trailing comments allowed
/// Keys are addressed as "section.key"; keys before any section header
/// have no prefix.
class Config {
public:
    static Config parse(std::istream& in) {
        Config cfg;
        std::string line, section;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw std::runtime_error("config: line " + std::to_string(lineno) + ": malformed section");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config: line " + std::to_string(lineno) + ": expected key = value");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            cfg.values_[section.empty() ? key : section + "." + key] = value;
        }
        return cfg;
    }

    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file: " + path);
        return parse(in);
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
        return it->second;
    }
    std::string get(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        return has(key) ? std::stod(get(key)) : fallback;
    }
    long get_int(const std::string& key, long fallback) const {
        return has(key) ? std::stol(get(key)) : fallback;
    }
    bool get_bool(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string v = get(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw std::runtime_error("config: key '" + key + "' is not a boolean: " + v);
    }
    std::vector<long> get_int_list(const std::string& key, std::vector<long> fallback) const {
        if (!has(key)) return fallback;
        std::vector<long> out;
        std::stringstream ss(get(key));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (!tok.empty()) out.push_back(std::stol(tok));
        }
        return out;
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    const std::map<std::string, std::string>& entries() const { return values_; }

    void dump(std::ostream& out) const {
        std::string current_section;
        for (const auto& [key, value] : values_) {
            auto dot = key.find('.');
            std::string section = dot == std::string::npos ? "" : key.substr(0, dot);
            std::string bare = dot == std::string::npos ? key : key.substr(dot + 1);
            if (section != current_section) {
                out << "[" << section << "]\n";
                current_section = section;
            }
            out << bare << " = " << value << "\n";
        }
    }

private:
    static std::string trim(std::string s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
        return s;
    }

    std::map<std::string, std::string> values_;
};

}  // namespace leachate
