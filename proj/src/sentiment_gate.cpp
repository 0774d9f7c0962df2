#include "nrl/sentiment_gate.hpp"

#include "nrl/errors.hpp"

#include <algorithm>

namespace nrl::gate {

void validate_gate(const GateConfig& cfg) {
    if (cfg.lower && (*cfg.lower < 0.0 || *cfg.lower > 100.0)) {
        throw ValidationError("gate: lower bound outside [0,100]");
    }
    if (cfg.upper && (*cfg.upper < 0.0 || *cfg.upper > 100.0)) {
        throw ValidationError("gate: upper bound outside [0,100]");
    }
    if (cfg.lower && cfg.upper && *cfg.lower > *cfg.upper) {
        throw ValidationError("gate: lower bound exceeds upper bound");
    }
    if (cfg.delta) {
        if (cfg.delta->low > cfg.delta->high) {
            throw ValidationError("gate: delta low exceeds delta high");
        }
        if (cfg.delta->days <= 0) {
            throw ValidationError("gate: delta days must be positive");
        }
    }
}

const char* decision_name(GateDecision d) {
    switch (d) {
    case GateDecision::Rebalance: return "rebalance";
    case GateDecision::HoldCurrent: return "hold";
    case GateDecision::LiquidateToCash: return "liquidate";
    }
    return "unknown";
}

GateResult evaluate_gate(const market::SentimentSeries& s, const Date& date,
                         const GateConfig& cfg) {
    validate_gate(cfg);
    const auto it = std::lower_bound(s.dates.begin(), s.dates.end(), date);
    if (it == s.dates.end() || *it != date) {
        throw LookupError("sentiment value for date " + format_date(date) + " not found");
    }
    const size_t idx = static_cast<size_t>(it - s.dates.begin());
    const double value = s.values[idx];

    const auto block = [&cfg](const char* filter) {
        return GateResult{cfg.liquidate_on_block ? GateDecision::LiquidateToCash
                                                 : GateDecision::HoldCurrent,
                          filter};
    };

    if (cfg.lower && value < *cfg.lower) {
        return block("lower");
    }
    if (cfg.upper && value > *cfg.upper) {
        return block("upper");
    }
    if (cfg.delta && idx >= static_cast<size_t>(cfg.delta->days)) {
        const double prior = s.values[idx - static_cast<size_t>(cfg.delta->days)];
        const double change = value - prior;
        if (change < cfg.delta->low || change > cfg.delta->high) {
            return block("delta");
        }
    }
    return GateResult{GateDecision::Rebalance, ""};
}

} // namespace nrl::gate
