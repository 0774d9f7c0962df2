#pragma once

#include "nrl/dates.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nrl::metrics {

// Trading days per year used for every annualization in the engine.
inline constexpr double kTradingDaysPerYear = 252.0;

struct ReturnSeries {
    std::vector<Date> dates;
    std::vector<double> returns; // simple per-period returns, each > -1
};

// The six performance statistics. Ratio metrics whose denominator
// degenerates are tagged undefined (nullopt) instead of NaN so serialized
// reports stay machine-readable.
struct MetricsReport {
    std::optional<double> annualized_return;
    std::optional<double> volatility;
    std::optional<double> sharpe;
    std::optional<double> sortino;
    std::optional<double> max_drawdown;
    std::optional<double> calmar;
    double period_years = 0.0;
};

// (prod (1+r_t))^(1/years) - 1
double annualized_return(std::span<const double> returns, double years);

// Sample standard deviation (T-1 divisor), annualized by sqrt(252).
double volatility(std::span<const double> returns);

// mean(r - rf) / std(r - rf) * sqrt(252). Throws UndefinedMetricError when
// the excess series has zero standard deviation.
double sharpe(std::span<const double> returns, std::span<const double> risk_free);

// mean(r - rf) / sigma_d * sqrt(252), sigma_d = sample std of the raw
// returns on days where r_t < rf_t. Undefined with fewer than two downside
// observations or zero downside deviation.
double sortino(std::span<const double> returns, std::span<const double> risk_free);

// max over t of (running_max - V_t) / running_max, in [0, 1].
double max_drawdown(std::span<const double> equity);

// annualized / mdd; undefined when mdd is zero.
double calmar(double annualized, double mdd);

// Derives per-period returns from the equity curve and computes all six
// metrics; per-metric undefined conditions become tagged fields.
// period_years = number of return periods / 252.
MetricsReport compute_report(std::span<const double> equity,
                             std::span<const double> risk_free);

// Serialization contract: exactly the six metric keys.
std::string report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const std::string& text);
std::string report_csv_header();
std::string report_csv_row(const MetricsReport& report);

// Simple returns between consecutive equity values.
std::vector<double> returns_from_equity(std::span<const double> equity);

} // namespace nrl::metrics
