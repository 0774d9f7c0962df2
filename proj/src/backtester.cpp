#include "nrl/backtester.hpp"

#include "nrl/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace nrl::engine {

const char* frequency_name(Frequency f) {
    switch (f) {
    case Frequency::Monthly: return "monthly";
    case Frequency::Quarterly: return "quarterly";
    case Frequency::Yearly: return "yearly";
    }
    return "unknown";
}

Frequency frequency_from_name(const std::string& name) {
    std::string n;
    for (char c : name) {
        n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (n == "monthly" || n == "m") {
        return Frequency::Monthly;
    }
    if (n == "quarterly" || n == "q") {
        return Frequency::Quarterly;
    }
    if (n == "yearly" || n == "y" || n == "annual") {
        return Frequency::Yearly;
    }
    throw ValidationError("unknown rebalancing frequency '" + name + "'");
}

void validate_config(const BacktestConfig& cfg) {
    alloc::validate_constraints(cfg.constraints);
    alloc::validate_lookback(cfg.lookback);
    gate::validate_gate(cfg.gate);
    if (cfg.initial_capital <= 0.0) {
        throw ValidationError("config: initial_capital must be positive");
    }
    if (cfg.fees.pct_rate < 0.0 || cfg.fees.per_share < 0.0) {
        throw ValidationError("config: fee rates must be nonnegative");
    }
    if (cfg.percentile) {
        if (cfg.percentile->lo < 0.0 || cfg.percentile->hi > 100.0 ||
            cfg.percentile->lo >= cfg.percentile->hi) {
            throw ValidationError("config: percentile range must satisfy 0 <= lo < hi <= 100");
        }
    }
    if (cfg.cluster_mode == ClusterMode::StaticList && cfg.static_sectors.empty()) {
        throw ValidationError("config: static cluster mode needs at least one sector");
    }
    if (cfg.hedge_eta <= 0.0) {
        throw ValidationError("config: hedge_eta must be positive");
    }
    if (cfg.n_votes <= 0) {
        throw ValidationError("config: n_votes must be positive");
    }
    if (cfg.bond_maturity_years <= 0.0) {
        throw ValidationError("config: bond_maturity_years must be positive");
    }
}

double mark_to_market(const PortfolioState& state, const market::PricePanel& panel,
                      size_t date_idx) {
    double value = state.cash;
    for (size_t a = 1; a < state.shares.size(); ++a) {
        if (state.shares[a] != 0.0) {
            const double p = panel.price(date_idx, a);
            if (p == market::kInactivePrice) {
                throw ValidationError("held asset '" + panel.asset_ids[a] +
                                      "' has no price on " +
                                      format_date(panel.dates[date_idx]));
            }
            value += state.shares[a] * p;
        }
    }
    return value;
}

alloc::AllocationVector state_weights(const PortfolioState& state,
                                      const market::PricePanel& panel, size_t date_idx) {
    const double value = mark_to_market(state, panel, date_idx);
    alloc::AllocationVector w;
    w.weights.assign(panel.n_assets(), 0.0);
    w.weights[0] = state.cash / value;
    for (size_t a = 1; a < state.shares.size(); ++a) {
        if (state.shares[a] != 0.0) {
            w.weights[a] = state.shares[a] * panel.price(date_idx, a) / value;
        }
    }
    return w;
}

namespace {

Date period_start(const Date& d, Frequency f) {
    switch (f) {
    case Frequency::Monthly: return Date{d.year, d.month, 1};
    case Frequency::Quarterly: return Date{d.year, ((d.month - 1) / 3) * 3 + 1, 1};
    case Frequency::Yearly: return Date{d.year, 1, 1};
    }
    return d;
}

Date next_period(const Date& boundary, Frequency f) {
    int months = 1;
    if (f == Frequency::Quarterly) {
        months = 3;
    } else if (f == Frequency::Yearly) {
        months = 12;
    }
    int m = boundary.month - 1 + months;
    return Date{boundary.year + m / 12, m % 12 + 1, 1};
}

} // namespace

std::vector<size_t> rebalance_dates(const std::vector<Date>& dates, Frequency frequency) {
    std::vector<size_t> out;
    if (dates.empty()) {
        return out;
    }
    out.push_back(0); // initial allocation date
    Date boundary = next_period(period_start(dates.front(), frequency), frequency);
    while (boundary <= dates.back()) {
        const auto it = std::lower_bound(dates.begin(), dates.end(), boundary);
        if (it != dates.end()) {
            const size_t idx = static_cast<size_t>(it - dates.begin());
            if (out.empty() || out.back() != idx) {
                out.push_back(idx);
            }
        }
        boundary = next_period(boundary, frequency);
    }
    return out;
}

RebalanceOutcome execute_rebalance(PortfolioState& state, const alloc::AllocationVector& target,
                                   const market::PricePanel& panel, size_t date_idx,
                                   const FeeModel& fees) {
    alloc::validate_allocation(target);
    if (target.size() != panel.n_assets()) {
        throw ValidationError("rebalance: target size mismatch");
    }
    if (state.shares.size() != panel.n_assets()) {
        state.shares.resize(panel.n_assets(), 0.0);
    }
    for (size_t a = 1; a < target.size(); ++a) {
        if (target[a] > 0.0 && !panel.is_active(date_idx, a)) {
            throw ValidationError("rebalance: target weights inactive asset '" +
                                  panel.asset_ids[a] + "' on " +
                                  format_date(panel.dates[date_idx]));
        }
    }

    const double value = mark_to_market(state, panel, date_idx);

    // Fee on the pre-fee deltas (single pass), then shares recomputed from
    // the post-fee value.
    struct Turnover {
        double notional = 0.0;
        double traded_shares = 0.0;
        double fee = 0.0;
    };
    const auto turnover_for_scale = [&](double scale) {
        Turnover out;
        for (size_t a = 1; a < target.size(); ++a) {
            const double tv = scale * target[a] * value;
            const double cv =
                state.shares[a] != 0.0 ? state.shares[a] * panel.price(date_idx, a) : 0.0;
            const double dv = tv - cv;
            if (dv != 0.0) {
                out.notional += std::abs(dv);
                out.traded_shares += std::abs(dv) / panel.price(date_idx, a);
            }
        }
        out.fee = fees.pct_rate * out.notional + fees.per_share * out.traded_shares;
        return out;
    };

    double scale = 1.0;
    Turnover turnover = turnover_for_scale(1.0);
    bool scaled = false;
    if (turnover.notional == 0.0) {
        return RebalanceOutcome{0.0, false}; // target equals holdings: no-op
    }
    double fee = turnover.fee;
    if (fee >= value) {
        if (turnover_for_scale(0.0).fee >= value) {
            throw ValidationError("rebalance: fees exceed portfolio value on " +
                                  format_date(panel.dates[date_idx]));
        }
        double lo = 0.0, hi = 1.0;
        for (int iter = 0; iter < 80; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (turnover_for_scale(mid).fee < value) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        scale = lo;
        fee = turnover_for_scale(scale).fee;
        scaled = true;
    }

    const double post_value = value - fee;
    double risky_value = 0.0;
    for (size_t a = 1; a < target.size(); ++a) {
        const double w = scale * target[a];
        if (w > 0.0) {
            state.shares[a] = w * post_value / panel.price(date_idx, a);
            risky_value += state.shares[a] * panel.price(date_idx, a);
        } else {
            state.shares[a] = 0.0;
        }
    }
    double cash = post_value - risky_value;
    if (cash < 0.0) {
        if (cash < -1e-9 * std::max(1.0, post_value)) {
            throw ValidationError("rebalance: negative cash after trade");
        }
        cash = 0.0;
    }
    state.cash = cash;
    return RebalanceOutcome{fee, scaled};
}

std::vector<std::string> handle_delisting(PortfolioState& state,
                                          const market::PricePanel& panel, size_t date_idx) {
    std::vector<std::string> liquidated;
    if (state.shares.size() != panel.n_assets()) {
        state.shares.resize(panel.n_assets(), 0.0);
    }
    for (size_t a = 1; a < state.shares.size(); ++a) {
        if (state.shares[a] == 0.0 || panel.is_active(date_idx, a)) {
            continue;
        }
        // Last valid (forward-filled pre-exit) price.
        double last = 0.0;
        for (size_t t = date_idx; t-- > 0;) {
            if (panel.is_active(t, a)) {
                last = panel.price(t, a);
                break;
            }
        }
        if (last <= 0.0) {
            throw ValidationError("delisting: no valid price for '" + panel.asset_ids[a] + "'");
        }
        state.cash += state.shares[a] * last;
        state.shares[a] = 0.0;
        state.blacklist.insert(panel.asset_ids[a]);
        liquidated.push_back(panel.asset_ids[a]);
    }
    return liquidated;
}

namespace {

std::string join_names(const std::vector<std::string>& names, char sep) {
    std::string out;
    for (size_t i = 0; i < names.size(); ++i) {
        if (i > 0) {
            out.push_back(sep);
        }
        out += names[i];
    }
    return out;
}

struct UniverseSelection {
    std::vector<size_t> active;
    std::set<size_t> sell_only; // held assets that may only shrink
    std::string advisor_summary = "-";
    std::optional<AdvisorRecord> record;
};

// Restricts the active set to the allowed sectors; held assets outside the
// cluster stay sellable but not buyable. Assets without a sector tag (cash,
// bond, unmapped supplements) are always investable.
void restrict_to_sectors(UniverseSelection& sel, const market::PricePanel& panel,
                         const market::SectorMap& sectors,
                         const std::set<std::string>& allowed, const PortfolioState& state) {
    std::vector<size_t> kept;
    for (size_t a : sel.active) {
        if (a == 0) {
            kept.push_back(a);
            continue;
        }
        const auto sector = sectors.sector_of(panel.asset_ids[a]);
        if (!sector || allowed.count(*sector) > 0) {
            kept.push_back(a);
            continue;
        }
        if (state.shares[a] > 0.0) {
            kept.push_back(a);
            sel.sell_only.insert(a);
        }
    }
    sel.active = std::move(kept);
}

UniverseSelection select_universe(const BacktestConfig& cfg, const market::PricePanel& panel,
                                  const market::SectorMap& sectors,
                                  const market::SentimentSeries& aligned, size_t date_idx,
                                  const PortfolioState& state, llm::AdvisorProvider& provider,
                                  const llm::PromptTemplates& templates,
                                  std::vector<size_t> active) {
    UniverseSelection sel;
    sel.active = std::move(active);
    if (cfg.cluster_mode == ClusterMode::All) {
        return sel;
    }

    std::vector<std::string> selected;
    AdvisorRecord record;
    record.date = panel.dates[date_idx];
    bool consulted = false;

    if (cfg.cluster_mode == ClusterMode::StaticList) {
        selected = cfg.static_sectors;
        sel.advisor_summary = "clusters=" + join_names(selected, '|');
    } else {
        // Trailing 12 months of sentiment (up to 252 trading days).
        const size_t count = std::min<size_t>(date_idx + 1, 252);
        market::SentimentSeries trailing;
        trailing.dates.assign(aligned.dates.begin() + static_cast<long>(date_idx + 1 - count),
                              aligned.dates.begin() + static_cast<long>(date_idx + 1));
        trailing.values.assign(aligned.values.begin() + static_cast<long>(date_idx + 1 - count),
                               aligned.values.begin() + static_cast<long>(date_idx + 1));
        try {
            record.clusters = llm::recommend_clusters(provider, trailing, sectors.taxonomy,
                                                      templates, cfg.n_votes);
            consulted = true;
        } catch (const ValidationError&) {
            record.clusters.fallback_all = true; // not enough sentiment history yet
            consulted = true;
        }
        if (record.clusters.fallback_all) {
            sel.advisor_summary = "fallback_all";
            sel.record = std::move(record);
            return sel;
        }
        selected = record.clusters.sectors;
        sel.advisor_summary = "clusters=" + join_names(selected, '|');
    }

    std::set<std::string> allowed(selected.begin(), selected.end());
    if (cfg.hedging) {
        try {
            record.hedges = llm::recommend_hedges(provider, selected, sectors.taxonomy, templates);
            consulted = true;
        } catch (const std::exception&) {
            // provider failure: continue without hedges
        }
        if (!record.hedges.hedges.empty()) {
            std::vector<std::string> parts;
            for (const auto& [sector, hs] : record.hedges.hedges) {
                parts.push_back(sector + ">" + join_names(hs, '+'));
                for (const auto& h : hs) {
                    allowed.insert(h);
                }
            }
            sel.advisor_summary += ";hedges=" + join_names(parts, '|');
        }
    }

    restrict_to_sectors(sel, panel, sectors, allowed, state);
    if (consulted) {
        sel.record = std::move(record);
    }
    return sel;
}

} // namespace

BacktestResult run_backtest(const BacktestConfig& cfg, const market::PricePanel& input_panel,
                            const market::SentimentSeries& sentiment,
                            const market::YieldSeries& yields, const market::SectorMap& sectors,
                            llm::AdvisorProvider& provider, const llm::PromptTemplates& templates) {
    validate_config(cfg);
    if (input_panel.n_dates() == 0 || input_panel.n_assets() == 0) {
        throw ValidationError("run_backtest: empty price panel");
    }

    market::PricePanel panel = input_panel;
    market::inject_cash_column(panel);
    if (!panel.find_asset(cfg.bond_ticker) && !yields.dates.empty()) {
        market::append_column(panel, cfg.bond_ticker,
                              market::synthesize_bond_asset(yields, panel.dates,
                                                            cfg.bond_maturity_years));
    }
    const size_t n_dates = panel.n_dates();

    // Daily risk-free returns from the synthetic bond column (zeros when a
    // bond column is unavailable).
    std::vector<double> rf_daily(n_dates, 0.0);
    if (auto bond = panel.find_asset(cfg.bond_ticker)) {
        for (size_t t = 1; t < n_dates; ++t) {
            rf_daily[t] = panel.price(t, *bond) / panel.price(t - 1, *bond) - 1.0;
        }
    }

    const bool gate_configured = cfg.gate.lower || cfg.gate.upper || cfg.gate.delta;
    const bool needs_sentiment = gate_configured || cfg.cluster_mode == ClusterMode::Dynamic;
    market::SentimentSeries aligned;
    if (needs_sentiment) {
        aligned = market::align_sentiment(panel, sentiment);
    }

    const auto schedule = rebalance_dates(panel.dates, cfg.frequency);
    std::set<size_t> scheduled(schedule.begin(), schedule.end());

    PortfolioState state;
    state.cash = cfg.initial_capital;
    state.shares.assign(panel.n_assets(), 0.0);

    BacktestResult result;
    result.dates = panel.dates;
    result.equity.resize(n_dates);

    const int k = cfg.lookback.window_k;
    for (size_t t = 0; t < n_dates; ++t) {
        handle_delisting(state, panel, t);

        if (scheduled.count(t) > 0) {
            TradeLogEntry entry;
            entry.date = panel.dates[t];
            entry.advisor = "-";

            gate::GateResult gate_result;
            if (gate_configured) {
                gate_result = gate::evaluate_gate(aligned, panel.dates[t], cfg.gate);
            }
            entry.gate = gate_result.triggered.empty() ? "pass"
                                                       : "blocked:" + gate_result.triggered;

            if (gate_result.decision == gate::GateDecision::LiquidateToCash) {
                const auto outcome = execute_rebalance(
                    state, alloc::all_cash_allocation(panel.n_assets()), panel, t, cfg.fees);
                entry.decision = "liquidate";
                entry.fee = outcome.fee;
                entry.allocation = state_weights(state, panel, t);
            } else if (gate_result.decision == gate::GateDecision::HoldCurrent ||
                       t < static_cast<size_t>(k)) {
                // Blocked, or not enough lookback history yet: keep holdings.
                entry.decision = "hold";
                entry.allocation = state_weights(state, panel, t);
            } else {
                auto sel = select_universe(cfg, panel, sectors, aligned, t, state, provider,
                                           templates, market::active_assets(panel, panel.dates[t],
                                                                            state.blacklist));
                entry.advisor = sel.advisor_summary;
                if (sel.record) {
                    result.advisor_log.push_back(std::move(*sel.record));
                }

                if (cfg.percentile) {
                    auto filtered = alloc::percentile_filter(panel, panel.dates[t], k,
                                                             cfg.percentile->lo,
                                                             cfg.percentile->hi, sel.active);
                    // Held assets dropped by the filter stay sellable.
                    std::set<size_t> in_filter(filtered.begin(), filtered.end());
                    for (size_t a : sel.active) {
                        if (in_filter.count(a) == 0 && state.shares[a] > 0.0) {
                            filtered.push_back(a);
                            sel.sell_only.insert(a);
                        }
                    }
                    std::sort(filtered.begin(), filtered.end());
                    sel.active = std::move(filtered);
                }

                const auto window = alloc::window_returns(panel, panel.dates[t], k, sel.active);
                for (size_t a = 1; a < state.shares.size(); ++a) {
                    if (state.shares[a] > 0.0 &&
                        std::find(window.assets.begin(), window.assets.end(), a) ==
                            window.assets.end()) {
                        throw ValidationError("held asset '" + panel.asset_ids[a] +
                                              "' lacks lookback data on " +
                                              format_date(panel.dates[t]));
                    }
                }

                const auto baseline = state_weights(state, panel, t);
                auto actions = alloc::generate_actions(baseline, cfg.constraints, window.assets);
                if (!sel.sell_only.empty()) {
                    alloc::ActionSet kept;
                    for (auto& action : actions.actions) {
                        bool ok = true;
                        for (size_t a : sel.sell_only) {
                            if (action.allocation[a] > baseline[a] + 1e-12) {
                                ok = false;
                                break;
                            }
                        }
                        if (ok) {
                            kept.actions.push_back(std::move(action));
                        }
                    }
                    actions = std::move(kept);
                }

                std::vector<double> rf_window(rf_daily.begin() + static_cast<long>(t) - k + 1,
                                              rf_daily.begin() + static_cast<long>(t) + 1);
                const auto scores = alloc::score_actions(actions, window, cfg.objective,
                                                         cfg.lookback, rf_window,
                                                         cfg.parallel_scoring);
                const auto& leader = actions[alloc::argmax_score(scores)];
                const auto outcome = execute_rebalance(state, leader.allocation, panel, t,
                                                       cfg.fees);
                entry.decision = outcome.scaled ? "rebalance_scaled" : "rebalance";
                entry.fee = outcome.fee;
                entry.allocation = leader.allocation;
            }
            result.trades.push_back(std::move(entry));
        }

        result.equity[t] = mark_to_market(state, panel, t);
    }

    if (n_dates >= 3) {
        std::vector<double> rf_tail(rf_daily.begin() + 1, rf_daily.end());
        result.report = metrics::compute_report(result.equity, rf_tail);
    }
    return result;
}

std::vector<double> benchmark_buy_and_hold(const market::PricePanel& panel,
                                           const std::string& asset_id, double initial_capital) {
    const size_t a = panel.asset_index(asset_id);
    for (size_t t = 0; t < panel.n_dates(); ++t) {
        if (!panel.is_active(t, a)) {
            throw ValidationError("buy-and-hold: '" + asset_id + "' inactive on " +
                                  format_date(panel.dates[t]));
        }
    }
    const double shares = initial_capital / panel.price(0, a);
    std::vector<double> curve(panel.n_dates());
    for (size_t t = 0; t < panel.n_dates(); ++t) {
        curve[t] = shares * panel.price(t, a);
    }
    return curve;
}

std::vector<double> hedge_update(const std::vector<double>& weights,
                                 const std::vector<double>& relatives, double eta) {
    if (weights.size() != relatives.size() || weights.empty()) {
        throw ValidationError("hedge_update: weight/relative length mismatch");
    }
    double dot = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        dot += weights[i] * relatives[i];
    }
    if (dot <= 0.0) {
        throw ValidationError("hedge_update: nonpositive portfolio relative");
    }
    std::vector<double> next(weights.size());
    double z = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        next[i] = weights[i] * std::exp(eta * relatives[i] / dot);
        z += next[i];
    }
    for (double& w : next) {
        w /= z;
    }
    return next;
}

std::vector<double> benchmark_hedge(const market::PricePanel& panel, double eta,
                                    const std::vector<size_t>& schedule, double initial_capital,
                                    const FeeModel& fees) {
    if (eta <= 0.0) {
        throw ValidationError("benchmark_hedge: eta must be positive");
    }
    // Experts are the assets quoted on every panel date (cash included).
    std::vector<size_t> assets;
    for (size_t a = 0; a < panel.n_assets(); ++a) {
        bool full = true;
        for (size_t t = 0; t < panel.n_dates() && full; ++t) {
            full = panel.is_active(t, a);
        }
        if (full) {
            assets.push_back(a);
        }
    }
    if (assets.empty()) {
        throw ValidationError("benchmark_hedge: no asset active over the full range");
    }

    std::vector<double> weights(assets.size(), 1.0 / static_cast<double>(assets.size()));
    PortfolioState state;
    state.cash = initial_capital;
    state.shares.assign(panel.n_assets(), 0.0);

    std::vector<double> curve(panel.n_dates());
    std::optional<size_t> prev_sched;
    for (size_t t = 0; t < panel.n_dates(); ++t) {
        if (std::find(schedule.begin(), schedule.end(), t) != schedule.end()) {
            if (prev_sched) {
                std::vector<double> relatives(assets.size());
                for (size_t i = 0; i < assets.size(); ++i) {
                    relatives[i] = panel.price(t, assets[i]) / panel.price(*prev_sched, assets[i]);
                }
                weights = hedge_update(weights, relatives, eta);
            }
            alloc::AllocationVector target;
            target.weights.assign(panel.n_assets(), 0.0);
            for (size_t i = 0; i < assets.size(); ++i) {
                target.weights[assets[i]] = weights[i];
            }
            execute_rebalance(state, target, panel, t, fees);
            prev_sched = t;
        }
        curve[t] = mark_to_market(state, panel, t);
    }
    return curve;
}

MadScore mad_score(const alloc::AllocationVector& a, const alloc::ReturnWindow& window) {
    MadScore s;
    s.cash_distance = 1.0 - a[0];
    std::vector<double> r(static_cast<size_t>(window.k), 0.0);
    double sum = 0.0;
    for (int t = 0; t < window.k; ++t) {
        double day = 0.0;
        for (size_t col = 0; col < window.assets.size(); ++col) {
            const double w = a[window.assets[col]];
            if (w != 0.0) {
                day += w * window.at(t, col);
            }
        }
        r[static_cast<size_t>(t)] = day;
        sum += day;
    }
    s.mean = sum / static_cast<double>(window.k);
    double dev = 0.0;
    for (double x : r) {
        dev += std::abs(x - s.mean);
    }
    s.mad = dev / static_cast<double>(window.k);
    return s;
}

size_t mad_select(const std::vector<MadScore>& scores, bool& relaxed) {
    if (scores.empty()) {
        throw ValidationError("mad_select: no candidates");
    }
    const auto better = [](const MadScore& x, const MadScore& y) {
        if (x.mad != y.mad) {
            return x.mad < y.mad;
        }
        if (x.mean != y.mean) {
            return x.mean > y.mean;
        }
        return x.cash_distance < y.cash_distance;
    };
    size_t best = scores.size();
    for (size_t i = 0; i < scores.size(); ++i) {
        if (scores[i].mean < 0.0) {
            continue;
        }
        if (best == scores.size() || better(scores[i], scores[best])) {
            best = i;
        }
    }
    relaxed = best == scores.size();
    if (relaxed) {
        best = 0;
        for (size_t i = 1; i < scores.size(); ++i) {
            if (better(scores[i], scores[best])) {
                best = i;
            }
        }
    }
    return best;
}

std::vector<double> benchmark_mad(const market::PricePanel& panel, int window_k,
                                  const std::vector<size_t>& schedule,
                                  const alloc::ConstraintConfig& constraints,
                                  double initial_capital, const FeeModel& fees) {
    PortfolioState state;
    state.cash = initial_capital;
    state.shares.assign(panel.n_assets(), 0.0);

    std::vector<double> curve(panel.n_dates());
    for (size_t t = 0; t < panel.n_dates(); ++t) {
        handle_delisting(state, panel, t);
        const bool is_sched =
            std::find(schedule.begin(), schedule.end(), t) != schedule.end();
        if (is_sched && t >= static_cast<size_t>(window_k)) {
            const auto active = market::active_assets(panel, panel.dates[t], state.blacklist);
            const auto window = alloc::window_returns(panel, panel.dates[t], window_k, active);
            const auto baseline = state_weights(state, panel, t);
            const auto actions = alloc::generate_actions(baseline, constraints, window.assets);
            std::vector<MadScore> scores(actions.size());
            for (size_t i = 0; i < actions.size(); ++i) {
                scores[i] = mad_score(actions[i].allocation, window);
            }
            bool relaxed = false;
            const size_t pick = mad_select(scores, relaxed);
            execute_rebalance(state, actions[pick].allocation, panel, t, fees);
        }
        curve[t] = mark_to_market(state, panel, t);
    }
    return curve;
}

} // namespace nrl::engine
