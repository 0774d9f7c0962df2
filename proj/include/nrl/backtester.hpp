#pragma once

#include "nrl/advisor.hpp"
#include "nrl/allocation.hpp"
#include "nrl/market_data.hpp"
#include "nrl/metrics.hpp"
#include "nrl/sentiment_gate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nrl::engine {

enum class Frequency { Monthly, Quarterly, Yearly };

const char* frequency_name(Frequency f);
Frequency frequency_from_name(const std::string& name);

struct FeeModel {
    double pct_rate = 0.0;  // fraction of traded notional
    double per_share = 0.0; // currency per share traded
};

enum class ClusterMode { All, StaticList, Dynamic };

struct PercentileRange {
    double lo = 0.0;
    double hi = 100.0;
};

struct BacktestConfig {
    Frequency frequency = Frequency::Quarterly;
    alloc::Objective objective = alloc::Objective::AnnualizedReturn;
    alloc::ConstraintConfig constraints;
    alloc::LookbackConfig lookback;
    gate::GateConfig gate;
    ClusterMode cluster_mode = ClusterMode::All;
    std::vector<std::string> static_sectors;
    bool hedging = false;
    std::optional<PercentileRange> percentile;
    FeeModel fees;
    double initial_capital = 100000.0;

    // Plumbing: synthetic/benchmark asset ids and advisor settings.
    std::string bond_ticker = "BOND10Y";
    double bond_maturity_years = 10.0;
    std::string spy_ticker = "SPY";
    std::string gold_ticker = "GLD";
    double hedge_eta = 0.05; // multiplicative-weights benchmark learning rate
    int n_votes = 5;
    std::string prompts_dir = "prompts";
    bool parallel_scoring = true;
    std::uint64_t seed = 0;
};

void validate_config(const BacktestConfig& cfg);

// Cash plus per-asset share counts (fractional, long-only). shares[0] is
// unused; cash is tracked separately.
struct PortfolioState {
    double cash = 0.0;
    std::vector<double> shares;
    market::Blacklist blacklist;
};

double mark_to_market(const PortfolioState& state, const market::PricePanel& panel,
                      size_t date_idx);

// Current weights of the state at the given date's prices.
alloc::AllocationVector state_weights(const PortfolioState& state,
                                      const market::PricePanel& panel, size_t date_idx);

struct TradeLogEntry {
    Date date;
    std::string decision; // rebalance | rebalance_scaled | hold | liquidate
    alloc::AllocationVector allocation;
    double fee = 0.0;
    std::string gate;    // pass | blocked:<filter>
    std::string advisor; // "-" | clusters=..;hedges=.. | fallback_all
};

struct AdvisorRecord {
    Date date;
    llm::ClusterRecommendation clusters;
    llm::HedgeRecommendation hedges;
};

struct BacktestResult {
    std::vector<Date> dates;
    std::vector<double> equity;
    std::vector<TradeLogEntry> trades;
    std::vector<AdvisorRecord> advisor_log;
    metrics::MetricsReport report;
};

// First panel date plus the first trading day on or after each calendar
// period boundary (quarters start Jan/Apr/Jul/Oct 1).
std::vector<size_t> rebalance_dates(const std::vector<Date>& dates, Frequency frequency);

struct RebalanceOutcome {
    double fee = 0.0;
    bool scaled = false; // risky exposure reduced so fees stayed payable
};

// Marks to market, retargets holdings to `target` weights and deducts the
// fee computed on the pre-fee deltas from the post-trade value. Identical
// target and holdings short-circuit to a true no-op.
RebalanceOutcome execute_rebalance(PortfolioState& state, const alloc::AllocationVector& target,
                                   const market::PricePanel& panel, size_t date_idx,
                                   const FeeModel& fees);

// Sells any held asset whose price is -1 at `date_idx` at its last valid
// price and blacklists it. Returns the liquidated asset ids.
std::vector<std::string> handle_delisting(PortfolioState& state,
                                          const market::PricePanel& panel, size_t date_idx);

// Full simulation: schedule, gating, advisor, allocation, execution with
// fees, delisting handling, daily equity tracking.
BacktestResult run_backtest(const BacktestConfig& cfg, const market::PricePanel& input_panel,
                            const market::SentimentSeries& sentiment,
                            const market::YieldSeries& yields, const market::SectorMap& sectors,
                            llm::AdvisorProvider& provider,
                            const llm::PromptTemplates& templates = llm::default_templates());

// --- benchmark strategies -----------------------------------------------

std::vector<double> benchmark_buy_and_hold(const market::PricePanel& panel,
                                           const std::string& asset_id, double initial_capital);

// Exponentiated-gradient update w_i <- w_i * exp(eta * x_i / (w.x)) / Z at
// each scheduled date, starting uniform over assets active on every date.
std::vector<double> benchmark_hedge(const market::PricePanel& panel, double eta,
                                    const std::vector<size_t>& schedule, double initial_capital,
                                    const FeeModel& fees = {});

// Per-weight trace of the multiplicative-weights update, for tests.
std::vector<double> hedge_update(const std::vector<double>& weights,
                                 const std::vector<double>& relatives, double eta);

// Minimum mean-absolute-deviation portfolio over the same perturbation grid,
// subject to nonnegative window mean return (relaxed to the global minimizer
// when no candidate qualifies). Ties prefer higher mean, then lower cash
// distance, then set order.
std::vector<double> benchmark_mad(const market::PricePanel& panel, int window_k,
                                  const std::vector<size_t>& schedule,
                                  const alloc::ConstraintConfig& constraints,
                                  double initial_capital, const FeeModel& fees = {});

// Scoring internals exposed for the oracle tests.
struct MadScore {
    double mad = 0.0;
    double mean = 0.0;
    double cash_distance = 0.0;
};
MadScore mad_score(const alloc::AllocationVector& a, const alloc::ReturnWindow& window);
size_t mad_select(const std::vector<MadScore>& scores, bool& relaxed);

} // namespace nrl::engine
