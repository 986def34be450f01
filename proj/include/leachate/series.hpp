#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "leachate/csv.hpp"
#include "leachate/dates.hpp"

namespace leachate {

enum class Unit { CubicMetersPerDay, WattHoursPerDay };

inline std::string unit_name(Unit u) {
    return u == Unit::CubicMetersPerDay ? "m3_per_day" : "wh_per_day";
}

/// A gap-free sequence of daily observations starting at a calendar date.
/// Values are finite and non-negative; entry i belongs to day start_date + i.
struct DailySeries {
    DayNumber start_date = 0;
    std::vector<double> values;
    Unit unit = Unit::CubicMetersPerDay;

    DailySeries() = default;
    DailySeries(DayNumber start, std::vector<double> vals, Unit u = Unit::CubicMetersPerDay)
        : start_date(start), values(std::move(vals)), unit(u) {
        for (double v : values) {
            if (!std::isfinite(v)) throw std::invalid_argument("DailySeries: non-finite value");
            if (v < 0.0) throw std::invalid_argument("DailySeries: negative value");
        }
    }

    std::size_t size() const { return values.size(); }
    DayNumber date_at(std::size_t i) const { return start_date + static_cast<DayNumber>(i); }
};

/// Date-aligned named covariate columns, one row per day.
struct ExogenousTable {
    DayNumber start_date = 0;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;  // columns[c][day]

    std::size_t days() const { return columns.empty() ? 0 : columns[0].size(); }

    void add_column(std::string name, std::vector<double> data) {
        if (!columns.empty() && data.size() != columns[0].size())
            throw std::invalid_argument("ExogenousTable: column length mismatch");
        for (const auto& n : names)
            if (n == name) throw std::invalid_argument("ExogenousTable: duplicate column " + name);
        names.push_back(std::move(name));
        columns.push_back(std::move(data));
    }

    const std::vector<double>& column(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return columns[i];
        throw std::out_of_range("ExogenousTable: no column " + name);
    }

    /// Covariate values of a single day, in column order.
    std::vector<double> row(std::size_t day) const {
        std::vector<double> r;
        r.reserve(columns.size());
        for (const auto& c : columns) r.push_back(c.at(day));
        return r;
    }

    ExogenousTable slice(std::size_t offset, std::size_t count) const {
        ExogenousTable out;
        out.start_date = start_date + static_cast<DayNumber>(offset);
        out.names = names;
        for (const auto& c : columns) {
            if (offset + count > c.size()) throw std::out_of_range("ExogenousTable::slice");
            out.columns.emplace_back(c.begin() + offset, c.begin() + offset + count);
        }
        return out;
    }
};

/// One raw measurement plus the day count to the following one
/// (terminal observation carries gap 1).
struct RawObservation {
    DayNumber timestamp = 0;
    double value = 0.0;
    int gap_to_next = 1;
};

struct DatasetSplit {
    DailySeries train;
    DailySeries validation;
    std::optional<ExogenousTable> train_exog;
    std::optional<ExogenousTable> validation_exog;
    std::size_t validation_len = 0;
};

inline std::vector<RawObservation> ingest_csv(const CsvTable& table, const std::string& value_column,
                                              const std::string& date_column,
                                              const std::string& date_format = "%Y-%m-%d") {
    int vc = table.column_index(value_column);
    int dc = table.column_index(date_column);
    if (vc < 0) throw std::runtime_error("ingest: missing column '" + value_column + "'");
    if (dc < 0) throw std::runtime_error("ingest: missing column '" + date_column + "'");
    if (table.rows.empty()) throw std::runtime_error("ingest: no observations");

    std::vector<RawObservation> obs;
    obs.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        RawObservation o;
        // data rows start at line 2 (after the header)
        const std::string where = "ingest: line " + std::to_string(i + 2);
        try {
            o.timestamp = parse_date(row[dc], date_format);
        } catch (const std::exception& e) {
            throw std::runtime_error(where + ": " + e.what());
        }
        try {
            std::size_t pos = 0;
            o.value = std::stod(row[vc], &pos);
            if (pos != row[vc].size()) throw std::invalid_argument("trailing garbage");
        } catch (const std::exception&) {
            throw std::runtime_error(where + ": cannot parse value '" + row[vc] + "'");
        }
        if (!std::isfinite(o.value)) throw std::runtime_error(where + ": non-finite value");
        if (o.value < 0.0) throw std::runtime_error(where + ": negative value '" + row[vc] + "'");
        if (!obs.empty() && o.timestamp <= obs.back().timestamp)
            throw std::runtime_error(where + ": dates must be strictly increasing (got " +
                                     format_iso(o.timestamp) + " after " + format_iso(obs.back().timestamp) + ")");
        obs.push_back(o);
    }
    for (std::size_t i = 0; i + 1 < obs.size(); ++i)
        obs[i].gap_to_next = static_cast<int>(obs[i + 1].timestamp - obs[i].timestamp);
    return obs;
}

inline std::vector<RawObservation> ingest_csv_file(const std::string& path, const std::string& value_column,
                                                   const std::string& date_column,
                                                   const std::string& date_format = "%Y-%m-%d",
                                                   char delim = ',') {
    return ingest_csv(read_csv_file(path, delim), value_column, date_column, date_format);
}

/// Fills every calendar gap by linear interpolation between the flanking
/// observations. Observed days keep their values bit-exactly.
inline DailySeries interpolate_gaps(const std::vector<RawObservation>& obs,
                                    Unit unit = Unit::CubicMetersPerDay) {
    if (obs.size() < 2) throw std::invalid_argument("interpolate_gaps: cannot interpolate fewer than 2 observations");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(obs.back().timestamp - obs.front().timestamp) + 1);
    for (std::size_t i = 0; i + 1 < obs.size(); ++i) {
        const auto& a = obs[i];
        const auto& b = obs[i + 1];
        const int gap = static_cast<int>(b.timestamp - a.timestamp);
        values.push_back(a.value);
        for (int d = 1; d < gap; ++d)
            values.push_back(a.value + (b.value - a.value) * static_cast<double>(d) / gap);
    }
    values.push_back(obs.back().value);
    return DailySeries(obs.front().timestamp, std::move(values), unit);
}

inline DatasetSplit split_holdout(const DailySeries& series, const std::optional<ExogenousTable>& exog,
                                  std::size_t validation_len = 100) {
    if (validation_len == 0) throw std::invalid_argument("split_holdout: validation_len must be >= 1");
    if (validation_len >= series.size())
        throw std::invalid_argument("split_holdout: validation_len " + std::to_string(validation_len) +
                                    " >= series length " + std::to_string(series.size()));
    const std::size_t train_len = series.size() - validation_len;
    DatasetSplit split;
    split.validation_len = validation_len;
    split.train = DailySeries(series.start_date,
                              {series.values.begin(), series.values.begin() + train_len}, series.unit);
    split.validation = DailySeries(series.date_at(train_len),
                                   {series.values.begin() + train_len, series.values.end()}, series.unit);
    if (exog) {
        if (exog->days() != series.size() || exog->start_date != series.start_date)
            throw std::invalid_argument("split_holdout: exogenous table not aligned with series");
        split.train_exog = exog->slice(0, train_len);
        split.validation_exog = exog->slice(train_len, validation_len);
    }
    return split;
}

/// Pearson product-moment correlation, two-pass.
inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("pearson: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("pearson: need at least 2 points");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) throw std::invalid_argument("pearson: undefined correlation (zero variance)");
    return sab / std::sqrt(saa * sbb);
}

inline CsvTable series_to_csv(const DailySeries& series, const std::string& value_column = "value",
                              const std::string& date_column = "date") {
    CsvTable t;
    t.header = {date_column, value_column};
    t.rows.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        t.rows.push_back({format_iso(series.date_at(i)), format_double(series.values[i])});
    return t;
}

inline CsvTable exog_to_csv(const ExogenousTable& exog, const std::string& date_column = "date") {
    CsvTable t;
    t.header.push_back(date_column);
    for (const auto& n : exog.names) t.header.push_back(n);
    for (std::size_t d = 0; d < exog.days(); ++d) {
        std::vector<std::string> row{format_iso(exog.start_date + static_cast<DayNumber>(d))};
        for (const auto& c : exog.columns) row.push_back(format_double(c[d]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline ExogenousTable exog_from_csv(const CsvTable& table, const std::string& date_column = "date",
                                    const std::string& date_format = "%Y-%m-%d") {
    int dc = table.column_index(date_column);
    if (dc < 0) throw std::runtime_error("exog: missing column '" + date_column + "'");
    if (table.rows.empty()) throw std::runtime_error("exog: no rows");
    ExogenousTable exog;
    exog.start_date = parse_date(table.rows.front()[dc], date_format);
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (static_cast<int>(c) == dc) continue;
        std::vector<double> col;
        col.reserve(table.rows.size());
        for (const auto& row : table.rows) col.push_back(std::stod(row[c]));
        exog.add_column(table.header[c], std::move(col));
    }
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (parse_date(table.rows[r][dc], date_format) != exog.start_date + static_cast<DayNumber>(r))
            throw std::runtime_error("exog: dates must be consecutive days");
    }
    return exog;
}

}  // namespace leachate
