#include "nrl/allocation.hpp"

#include "nrl/errors.hpp"
#include "nrl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace nrl::alloc {

void validate_allocation(const AllocationVector& a) {
    if (a.weights.empty()) {
        throw ValidationError("allocation: empty weight vector");
    }
    double sum = 0.0;
    for (double w : a.weights) {
        if (w < 0.0 || w > 1.0) {
            throw ValidationError("allocation: weight " + std::to_string(w) + " outside [0,1]");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > kSimplexTol) {
        throw ValidationError("allocation: weights sum to " + std::to_string(sum));
    }
}

AllocationVector all_cash_allocation(size_t n_assets) {
    AllocationVector a;
    a.weights.assign(n_assets, 0.0);
    a.weights[0] = 1.0;
    return a;
}

void validate_constraints(const ConstraintConfig& c) {
    if (c.a_min < 0.0 || c.a_max > 1.0 || c.a_min > c.a_max) {
        throw ValidationError("constraints: need 0 <= a_min <= a_max <= 1");
    }
    if (c.grid_step <= 0.0 || c.grid_step > 1.0) {
        throw ValidationError("constraints: grid_step must be in (0,1]");
    }
    const double span = c.a_max - c.a_min;
    const double ratio = span / c.grid_step;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
        throw ValidationError("constraints: grid_step does not evenly divide a_max - a_min");
    }
}

void validate_lookback(const LookbackConfig& lb) {
    if (lb.window_k <= 0) {
        throw ValidationError("lookback: window_k must be positive");
    }
    if (lb.exponential) {
        if (lb.half_life <= 0) {
            throw ValidationError("lookback: half_life must be positive");
        }
        if (lb.half_life > lb.window_k) {
            throw ValidationError("lookback: half_life must not exceed window_k");
        }
    }
}

const char* objective_name(Objective o) {
    switch (o) {
    case Objective::AnnualizedReturn: return "annualized_return";
    case Objective::Sharpe: return "sharpe";
    case Objective::Sortino: return "sortino";
    case Objective::Calmar: return "calmar";
    }
    return "unknown";
}

Objective objective_from_name(const std::string& name) {
    std::string n;
    n.reserve(name.size());
    for (char c : name) {
        n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (n == "annualized_return" || n == "return" || n == "annualizedreturn") {
        return Objective::AnnualizedReturn;
    }
    if (n == "sharpe") {
        return Objective::Sharpe;
    }
    if (n == "sortino") {
        return Objective::Sortino;
    }
    if (n == "calmar") {
        return Objective::Calmar;
    }
    throw ValidationError("unknown objective '" + name + "'");
}

namespace {

std::vector<double> grid_points(const ConstraintConfig& c) {
    const int n = static_cast<int>(std::round((c.a_max - c.a_min) / c.grid_step)) + 1;
    std::vector<double> points(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        points[static_cast<size_t>(i)] = c.a_min + static_cast<double>(i) * c.grid_step;
    }
    points.back() = c.a_max;
    return points;
}

// Clamps rounding noise into [0,1] and rescales the vector to sum exactly
// to 1. Exact inputs (sum == 1.0) pass through bitwise unchanged.
bool finalize_candidate(std::vector<double>& w) {
    double sum = 0.0;
    for (double& v : w) {
        if (v < 0.0) {
            if (v < -1e-9) {
                return false;
            }
            v = 0.0;
        } else if (v > 1.0) {
            if (v > 1.0 + 1e-9) {
                return false;
            }
            v = 1.0;
        }
        sum += v;
    }
    if (sum <= 0.0) {
        return false;
    }
    if (sum != 1.0) {
        for (double& v : w) {
            v /= sum;
        }
    }
    return true;
}

} // namespace

ActionSet generate_actions(const AllocationVector& baseline, const ConstraintConfig& c,
                           std::span<const size_t> active) {
    validate_allocation(baseline);
    validate_constraints(c);
    if (active.empty()) {
        throw ValidationError("generate_actions: active set is empty");
    }
    std::vector<size_t> targets(active.begin(), active.end());
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    if (targets.front() != 0) {
        throw ValidationError("generate_actions: active set must include cash");
    }
    for (size_t i : targets) {
        if (i >= baseline.size()) {
            throw ValidationError("generate_actions: active index out of range");
        }
    }
    std::set<size_t> active_set(targets.begin(), targets.end());
    for (size_t i = 0; i < baseline.size(); ++i) {
        if (baseline[i] > 0.0 && active_set.count(i) == 0) {
            throw ValidationError("generate_actions: baseline holds inactive asset index " +
                                  std::to_string(i));
        }
    }

    ActionSet set;
    std::set<std::vector<double>> seen;
    set.actions.push_back(Action{baseline, -1, 0.0});
    seen.insert(baseline.weights);

    const auto points = grid_points(c);
    for (size_t target : targets) {
        if (!c.uniform_adjustment && target == 0) {
            continue; // cash is the residual absorber; cannot perturb itself
        }
        const double current = baseline[target];
        for (double w_new : points) {
            std::vector<double> w = baseline.weights;
            if (!c.uniform_adjustment) {
                w[target] = w_new;
                w[0] = baseline[0] + (current - w_new);
            } else {
                const double remaining = 1.0 - current;
                if (remaining <= 0.0) {
                    if (w_new != current) {
                        continue; // no other invested asset can absorb the residual
                    }
                    w[target] = w_new;
                } else {
                    const double factor = (1.0 - w_new) / remaining;
                    for (size_t j = 0; j < w.size(); ++j) {
                        w[j] = baseline[j] * factor;
                    }
                    w[target] = w_new;
                }
            }
            if (!finalize_candidate(w)) {
                continue;
            }
            if (seen.insert(w).second) {
                set.actions.push_back(Action{AllocationVector{std::move(w)}, static_cast<int>(target), w_new});
            }
        }
    }
    return set;
}

ReturnWindow window_returns(const market::PricePanel& panel, const Date& date, int k,
                            std::span<const size_t> active) {
    if (k <= 0) {
        throw ValidationError("window_returns: k must be positive");
    }
    const size_t t_end = panel.date_index(date);
    if (t_end < static_cast<size_t>(k)) {
        throw ValidationError("window_returns: insufficient history before " + format_date(date) +
                              " (need " + std::to_string(k + 1) + " rows)");
    }
    const size_t t_start = t_end - static_cast<size_t>(k);

    ReturnWindow window;
    window.k = k;
    std::vector<size_t> cols(active.begin(), active.end());
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    for (size_t a : cols) {
        bool ok = true;
        for (size_t t = t_start; t <= t_end; ++t) {
            if (!panel.is_active(t, a)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            window.assets.push_back(a);
        }
    }
    window.returns.resize(static_cast<size_t>(k) * window.assets.size());
    for (int t = 0; t < k; ++t) {
        for (size_t col = 0; col < window.assets.size(); ++col) {
            const size_t a = window.assets[col];
            const double prev = panel.price(t_start + static_cast<size_t>(t), a);
            const double cur = panel.price(t_start + static_cast<size_t>(t) + 1, a);
            window.returns[static_cast<size_t>(t) * window.assets.size() + col] = cur / prev - 1.0;
        }
    }
    return window;
}

namespace {

struct Weighted {
    std::vector<double> w; // per-day aggregation weights, most recent = 1
    double sum = 0.0;
};

Weighted day_weights(int k, const LookbackConfig& lb) {
    Weighted out;
    out.w.resize(static_cast<size_t>(k));
    for (int t = 0; t < k; ++t) {
        const int age = k - 1 - t;
        out.w[static_cast<size_t>(t)] =
            lb.exponential ? std::exp2(-static_cast<double>(age) / lb.half_life) : 1.0;
        out.sum += out.w[static_cast<size_t>(t)];
    }
    return out;
}

double weighted_mean(std::span<const double> x, const Weighted& wt) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        s += wt.w[i] * x[i];
    }
    return s / wt.sum;
}

// Weighted deviation with the small-sample correction n/(n-1); reduces to
// the plain T-1 sample deviation under uniform weights.
double weighted_std(std::span<const double> x, std::span<const double> w, double w_sum) {
    const size_t n = x.size();
    double mu = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mu += w[i] * x[i];
    }
    mu /= w_sum;
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = x[i] - mu;
        s += w[i] * d * d;
    }
    return std::sqrt(s / w_sum * static_cast<double>(n) / static_cast<double>(n - 1));
}

double weighted_annualized(std::span<const double> r, const Weighted& wt) {
    double s = 0.0;
    for (size_t i = 0; i < r.size(); ++i) {
        s += wt.w[i] * std::log1p(r[i]);
    }
    return std::exp(metrics::kTradingDaysPerYear * s / wt.sum) - 1.0;
}

double window_drawdown(std::span<const double> r) {
    double value = 1.0;
    double peak = 1.0;
    double mdd = 0.0;
    for (double x : r) {
        value *= 1.0 + x;
        peak = std::max(peak, value);
        mdd = std::max(mdd, (peak - value) / peak);
    }
    return mdd;
}

Score score_exponential(std::span<const double> r, std::span<const double> rf, Objective obj,
                        const Weighted& wt) {
    const size_t n = r.size();
    switch (obj) {
    case Objective::AnnualizedReturn:
        return weighted_annualized(r, wt);
    case Objective::Sharpe: {
        if (n < 2) {
            return std::nullopt;
        }
        std::vector<double> excess(n);
        for (size_t i = 0; i < n; ++i) {
            excess[i] = r[i] - rf[i];
        }
        const double sd = weighted_std(excess, wt.w, wt.sum);
        if (sd == 0.0) {
            return std::nullopt;
        }
        return weighted_mean(excess, wt) / sd * std::sqrt(metrics::kTradingDaysPerYear);
    }
    case Objective::Sortino: {
        if (n < 2) {
            return std::nullopt;
        }
        std::vector<double> down, down_w;
        double down_wsum = 0.0;
        std::vector<double> excess(n);
        for (size_t i = 0; i < n; ++i) {
            excess[i] = r[i] - rf[i];
            if (r[i] < rf[i]) {
                down.push_back(r[i]);
                down_w.push_back(wt.w[i]);
                down_wsum += wt.w[i];
            }
        }
        if (down.size() < 2) {
            return std::nullopt;
        }
        const double sigma_d = weighted_std(down, down_w, down_wsum);
        if (sigma_d == 0.0) {
            return std::nullopt;
        }
        return weighted_mean(excess, wt) / sigma_d * std::sqrt(metrics::kTradingDaysPerYear);
    }
    case Objective::Calmar: {
        const double mdd = window_drawdown(r);
        if (mdd == 0.0) {
            return std::nullopt;
        }
        return weighted_annualized(r, wt) / mdd;
    }
    }
    return std::nullopt;
}

Score score_uniform(std::span<const double> r, std::span<const double> rf, Objective obj) {
    const double years = static_cast<double>(r.size()) / metrics::kTradingDaysPerYear;
    try {
        switch (obj) {
        case Objective::AnnualizedReturn:
            return metrics::annualized_return(r, years);
        case Objective::Sharpe:
            if (r.size() < 2) {
                return std::nullopt;
            }
            return metrics::sharpe(r, rf);
        case Objective::Sortino:
            if (r.size() < 2) {
                return std::nullopt;
            }
            return metrics::sortino(r, rf);
        case Objective::Calmar: {
            const double mdd = window_drawdown(r);
            if (mdd == 0.0) {
                return std::nullopt;
            }
            return metrics::annualized_return(r, years) / mdd;
        }
        }
    } catch (const UndefinedMetricError&) {
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace

Score evaluate_action(const AllocationVector& a, const ReturnWindow& window, Objective obj,
                      const LookbackConfig& lb, std::span<const double> risk_free) {
    validate_lookback(lb);
    if (static_cast<int>(risk_free.size()) != window.k) {
        throw ValidationError("evaluate_action: risk-free window length mismatch");
    }
    const size_t n_cols = window.assets.size();
    std::vector<double> r(static_cast<size_t>(window.k), 0.0);
    for (int t = 0; t < window.k; ++t) {
        double day = 0.0;
        for (size_t col = 0; col < n_cols; ++col) {
            const double w = a[window.assets[col]];
            if (w != 0.0) {
                day += w * window.at(t, col);
            }
        }
        r[static_cast<size_t>(t)] = day;
    }
    if (!lb.exponential) {
        return score_uniform(r, risk_free, obj);
    }
    return score_exponential(r, risk_free, obj, day_weights(window.k, lb));
}

std::vector<Score> score_actions_serial(const ActionSet& actions, const ReturnWindow& window,
                                        Objective obj, const LookbackConfig& lb,
                                        std::span<const double> risk_free) {
    std::vector<Score> scores(actions.size());
    for (size_t i = 0; i < actions.size(); ++i) {
        scores[i] = evaluate_action(actions[i].allocation, window, obj, lb, risk_free);
    }
    return scores;
}

std::vector<Score> score_actions_parallel(const ActionSet& actions, const ReturnWindow& window,
                                          Objective obj, const LookbackConfig& lb,
                                          std::span<const double> risk_free) {
    std::vector<Score> scores(actions.size());
    const std::int64_t n = static_cast<std::int64_t>(actions.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        scores[static_cast<size_t>(i)] =
            evaluate_action(actions[static_cast<size_t>(i)].allocation, window, obj, lb, risk_free);
    }
    return scores;
}

std::vector<Score> score_actions(const ActionSet& actions, const ReturnWindow& window,
                                 Objective obj, const LookbackConfig& lb,
                                 std::span<const double> risk_free, bool parallel) {
    return parallel ? score_actions_parallel(actions, window, obj, lb, risk_free)
                    : score_actions_serial(actions, window, obj, lb, risk_free);
}

size_t argmax_score(std::span<const Score> scores) {
    size_t best = 0;
    bool have = false;
    double best_value = 0.0;
    for (size_t i = 0; i < scores.size(); ++i) {
        if (!scores[i]) {
            continue;
        }
        if (!have || *scores[i] > best_value) {
            have = true;
            best = i;
            best_value = *scores[i];
        }
    }
    return best;
}

const Action& select_leader(const ActionSet& actions, const ReturnWindow& window, Objective obj,
                            const LookbackConfig& lb, std::span<const double> risk_free,
                            bool parallel) {
    if (actions.empty()) {
        throw ValidationError("select_leader: empty action set");
    }
    const auto scores = score_actions(actions, window, obj, lb, risk_free, parallel);
    return actions[argmax_score(scores)];
}

std::vector<size_t> percentile_filter(const market::PricePanel& panel, const Date& date, int k,
                                      double lo_pct, double hi_pct,
                                      std::span<const size_t> active) {
    if (lo_pct < 0.0 || hi_pct > 100.0 || lo_pct >= hi_pct) {
        throw ValidationError("percentile_filter: need 0 <= lo < hi <= 100");
    }
    const size_t t_end = panel.date_index(date);
    if (t_end < static_cast<size_t>(k)) {
        throw ValidationError("percentile_filter: insufficient history before " +
                              format_date(date));
    }
    const size_t t_start = t_end - static_cast<size_t>(k);

    std::vector<size_t> in(active.begin(), active.end());
    std::sort(in.begin(), in.end());
    in.erase(std::unique(in.begin(), in.end()), in.end());

    struct Ranked {
        size_t asset;
        double cum_return;
    };
    std::vector<Ranked> rankable;
    for (size_t a : in) {
        if (panel.asset_ids[a] == market::kCashId) {
            continue;
        }
        bool ok = true;
        for (size_t t = t_start; t <= t_end; ++t) {
            if (!panel.is_active(t, a)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            rankable.push_back(Ranked{a, panel.price(t_end, a) / panel.price(t_start, a) - 1.0});
        }
    }
    if (rankable.size() < 3) {
        return in;
    }
    std::stable_sort(rankable.begin(), rankable.end(), [](const Ranked& x, const Ranked& y) {
        if (x.cum_return != y.cum_return) {
            return x.cum_return < y.cum_return;
        }
        return x.asset < y.asset;
    });

    std::vector<size_t> out;
    for (size_t a : in) {
        if (panel.asset_ids[a] == market::kCashId) {
            out.push_back(a); // cash always retained
        }
    }
    const double denom = static_cast<double>(rankable.size() - 1);
    for (size_t pos = 0; pos < rankable.size(); ++pos) {
        const double pct = 100.0 * static_cast<double>(pos) / denom;
        if (pct >= lo_pct && pct <= hi_pct) {
            out.push_back(rankable[pos].asset);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double hindsight_regret(std::span<const size_t> played_indices, const ActionSet& actions,
                        std::span<const RegretStep> steps, Objective obj,
                        const LookbackConfig& lb) {
    if (actions.empty()) {
        throw ValidationError("hindsight_regret: empty action set");
    }
    if (played_indices.size() != steps.size() || steps.empty()) {
        throw ValidationError("hindsight_regret: played/steps length mismatch");
    }
    for (size_t idx : played_indices) {
        if (idx >= actions.size()) {
            throw ValidationError("hindsight_regret: played index out of range");
        }
    }

    // Undefined scores contribute zero so the best-fixed comparator stays
    // well-defined over the whole horizon.
    const size_t T = steps.size();
    std::vector<std::vector<double>> m(actions.size(), std::vector<double>(T, 0.0));
    for (size_t t = 0; t < T; ++t) {
        for (size_t i = 0; i < actions.size(); ++i) {
            const Score s = evaluate_action(actions[i].allocation, steps[t].window, obj, lb,
                                            steps[t].risk_free);
            m[i][t] = s.value_or(0.0);
        }
    }
    size_t star = 0;
    double star_sum = 0.0;
    for (size_t i = 0; i < actions.size(); ++i) {
        double s = 0.0;
        for (size_t t = 0; t < T; ++t) {
            s += m[i][t];
        }
        if (i == 0 || s > star_sum) {
            star = i;
            star_sum = s;
        }
    }
    double gap = 0.0;
    for (size_t t = 0; t < T; ++t) {
        gap += m[star][t] - m[played_indices[t]][t];
    }
    return gap / static_cast<double>(T);
}

} // namespace nrl::alloc
