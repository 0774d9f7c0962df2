#include "nrl/metrics.hpp"

#include "nrl/csv.hpp"
#include "nrl/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace nrl::metrics {

namespace {

double mean(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
    const double m = mean(values);
    double sum = 0.0;
    for (double v : values) {
        const double d = v - m;
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

} // namespace

double annualized_return(std::span<const double> returns, double years) {
    if (returns.empty()) {
        throw ValidationError("annualized_return: empty return series");
    }
    if (years <= 0.0) {
        throw ValidationError("annualized_return: years must be positive");
    }
    double growth = 1.0;
    for (double r : returns) {
        if (r <= -1.0) {
            throw DomainError("annualized_return: return <= -1");
        }
        growth *= 1.0 + r;
    }
    return std::pow(growth, 1.0 / years) - 1.0;
}

double volatility(std::span<const double> returns) {
    if (returns.size() < 2) {
        throw ValidationError("volatility: need at least 2 returns");
    }
    return sample_std(returns) * std::sqrt(kTradingDaysPerYear);
}

double sharpe(std::span<const double> returns, std::span<const double> risk_free) {
    if (returns.size() != risk_free.size()) {
        throw ValidationError("sharpe: return/risk-free length mismatch");
    }
    if (returns.size() < 2) {
        throw ValidationError("sharpe: need at least 2 returns");
    }
    std::vector<double> excess(returns.size());
    for (size_t i = 0; i < returns.size(); ++i) {
        excess[i] = returns[i] - risk_free[i];
    }
    const double sd = sample_std(excess);
    if (sd == 0.0) {
        throw UndefinedMetricError("sharpe: zero excess-return deviation");
    }
    return mean(excess) / sd * std::sqrt(kTradingDaysPerYear);
}

double sortino(std::span<const double> returns, std::span<const double> risk_free) {
    if (returns.size() != risk_free.size()) {
        throw ValidationError("sortino: return/risk-free length mismatch");
    }
    if (returns.size() < 2) {
        throw ValidationError("sortino: need at least 2 returns");
    }
    std::vector<double> downside;
    downside.reserve(returns.size());
    double excess_sum = 0.0;
    for (size_t i = 0; i < returns.size(); ++i) {
        excess_sum += returns[i] - risk_free[i];
        if (returns[i] < risk_free[i]) {
            downside.push_back(returns[i]);
        }
    }
    if (downside.size() < 2) {
        throw UndefinedMetricError("sortino: fewer than two downside observations");
    }
    const double sigma_d = sample_std(downside);
    if (sigma_d == 0.0) {
        throw UndefinedMetricError("sortino: zero downside deviation");
    }
    const double excess_mean = excess_sum / static_cast<double>(returns.size());
    return excess_mean / sigma_d * std::sqrt(kTradingDaysPerYear);
}

double max_drawdown(std::span<const double> equity) {
    if (equity.empty()) {
        throw ValidationError("max_drawdown: empty equity curve");
    }
    double peak = 0.0;
    double mdd = 0.0;
    for (double v : equity) {
        if (v <= 0.0) {
            throw DomainError("max_drawdown: nonpositive equity value");
        }
        peak = std::max(peak, v);
        mdd = std::max(mdd, (peak - v) / peak);
    }
    return mdd;
}

double calmar(double annualized, double mdd) {
    if (mdd < 0.0) {
        throw DomainError("calmar: negative drawdown");
    }
    if (mdd == 0.0) {
        throw UndefinedMetricError("calmar: zero max drawdown");
    }
    return annualized / mdd;
}

std::vector<double> returns_from_equity(std::span<const double> equity) {
    std::vector<double> out;
    if (equity.size() < 2) {
        return out;
    }
    out.reserve(equity.size() - 1);
    for (size_t i = 1; i < equity.size(); ++i) {
        if (equity[i - 1] <= 0.0) {
            throw DomainError("returns_from_equity: nonpositive equity value");
        }
        out.push_back(equity[i] / equity[i - 1] - 1.0);
    }
    return out;
}

MetricsReport compute_report(std::span<const double> equity,
                             std::span<const double> risk_free) {
    if (equity.size() < 3) {
        throw ValidationError("compute_report: equity curve needs at least 3 points");
    }
    const auto returns = returns_from_equity(equity);
    if (!risk_free.empty() && risk_free.size() != returns.size()) {
        throw ValidationError("compute_report: risk-free length mismatch");
    }
    std::vector<double> rf(returns.size(), 0.0);
    if (!risk_free.empty()) {
        rf.assign(risk_free.begin(), risk_free.end());
    }

    MetricsReport report;
    report.period_years = static_cast<double>(returns.size()) / kTradingDaysPerYear;
    report.annualized_return = annualized_return(returns, report.period_years);
    report.volatility = volatility(returns);
    report.max_drawdown = max_drawdown(equity);
    try {
        report.sharpe = sharpe(returns, rf);
    } catch (const UndefinedMetricError&) {
    }
    try {
        report.sortino = sortino(returns, rf);
    } catch (const UndefinedMetricError&) {
    }
    try {
        report.calmar = calmar(*report.annualized_return, *report.max_drawdown);
    } catch (const UndefinedMetricError&) {
    }
    return report;
}

namespace {

const char* const kMetricKeys[6] = {"annualized_return", "volatility", "sharpe",
                                    "sortino",           "max_drawdown", "calmar"};

std::optional<double> MetricsReport::*const kMetricFields[6] = {
    &MetricsReport::annualized_return, &MetricsReport::volatility,
    &MetricsReport::sharpe,            &MetricsReport::sortino,
    &MetricsReport::max_drawdown,      &MetricsReport::calmar};

} // namespace

std::string report_to_json(const MetricsReport& report) {
    nlohmann::json j;
    for (size_t i = 0; i < 6; ++i) {
        const auto& field = report.*kMetricFields[i];
        if (field) {
            j[kMetricKeys[i]] = *field;
        } else {
            j[kMetricKeys[i]] = nullptr;
        }
    }
    return j.dump(2) + "\n";
}

MetricsReport report_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    MetricsReport report;
    for (size_t i = 0; i < 6; ++i) {
        if (!j.contains(kMetricKeys[i])) {
            throw ParseError(std::string("metrics JSON missing key '") + kMetricKeys[i] + "'");
        }
        if (!j[kMetricKeys[i]].is_null()) {
            report.*kMetricFields[i] = j[kMetricKeys[i]].get<double>();
        }
    }
    return report;
}

std::string report_csv_header() {
    std::string out;
    for (size_t i = 0; i < 6; ++i) {
        if (i > 0) {
            out.push_back(',');
        }
        out += kMetricKeys[i];
    }
    return out;
}

std::string report_csv_row(const MetricsReport& report) {
    std::string out;
    for (size_t i = 0; i < 6; ++i) {
        if (i > 0) {
            out.push_back(',');
        }
        const auto& field = report.*kMetricFields[i];
        if (field) {
            out += csv::format_double(*field);
        }
    }
    return out;
}

} // namespace nrl::metrics
