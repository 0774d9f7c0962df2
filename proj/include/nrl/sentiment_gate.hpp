#pragma once

#include "nrl/market_data.hpp"

#include <optional>
#include <string>

namespace nrl::gate {

struct DeltaFilter {
    double low = 0.0;  // permitted change lower bound (index points)
    double high = 0.0; // permitted change upper bound
    int days = 1;      // trading days between observations
};

struct GateConfig {
    std::optional<double> lower;
    std::optional<double> upper;
    std::optional<DeltaFilter> delta;
    bool liquidate_on_block = false;
};

void validate_gate(const GateConfig& cfg);

enum class GateDecision { Rebalance, HoldCurrent, LiquidateToCash };

const char* decision_name(GateDecision d);

struct GateResult {
    GateDecision decision = GateDecision::Rebalance;
    std::string triggered; // name of the blocking filter, empty when passing
};

// All configured filters must pass for Rebalance:
//   lower <= s(date) <= upper  and  l <= s(date) - s(date - t) <= h.
// The delta check is skipped when no observation exists t trading days
// before `date`. On any failure the decision is LiquidateToCash when
// liquidate_on_block is set, HoldCurrent otherwise.
GateResult evaluate_gate(const market::SentimentSeries& s, const Date& date,
                         const GateConfig& cfg);

} // namespace nrl::gate
