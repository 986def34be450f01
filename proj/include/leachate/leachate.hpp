#pragma once

#include "leachate/arima.hpp"
#include "leachate/config.hpp"
#include "leachate/csv.hpp"
#include "leachate/dates.hpp"
#include "leachate/energy.hpp"
#include "leachate/evaluation.hpp"
#include "leachate/forecasters.hpp"
#include "leachate/gbt.hpp"
#include "leachate/linalg.hpp"
#include "leachate/mlp.hpp"
#include "leachate/model_factory.hpp"
#include "leachate/model_io.hpp"
#include "leachate/reservoir.hpp"
#include "leachate/savings.hpp"
#include "leachate/series.hpp"
#include "leachate/synth.hpp"
