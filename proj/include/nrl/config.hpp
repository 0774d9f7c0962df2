#pragma once

#include "nrl/backtester.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace nrl::engine {

// Config file keys mirror the engine's parameter names: rebalancing
// frequency, objective, window_k, allocation bounds, F&G filters,
// percentile range, cluster mode, hedging, fee fields. Unknown keys are
// rejected so typos fail loudly. Omitted keys take the documented defaults;
// half_life defaults to window_k / 2.
BacktestConfig config_from_json(const nlohmann::json& j);
BacktestConfig load_config(const std::string& path);

// Canonical echo: every key present, resolved values. Parsing the echo
// yields an identical config.
nlohmann::json config_to_json(const BacktestConfig& cfg);

bool operator==(const FeeModel& a, const FeeModel& b);
bool operator==(const PercentileRange& a, const PercentileRange& b);
bool operator==(const BacktestConfig& a, const BacktestConfig& b);

} // namespace nrl::engine
