#pragma once

#include "nrl/market_data.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nrl::alloc {

// Simplex tolerance for allocation vectors.
inline constexpr double kSimplexTol = 1e-12;

// Portfolio weights over the panel's assets, cash at index 0. Each weight
// lies in [0,1] and the vector sums to 1 within kSimplexTol.
struct AllocationVector {
    std::vector<double> weights;

    size_t size() const { return weights.size(); }
    double operator[](size_t i) const { return weights[i]; }
};

// Throws ValidationError if the simplex constraints are violated.
void validate_allocation(const AllocationVector& a);

AllocationVector all_cash_allocation(size_t n_assets);

// One candidate produced by the perturbation procedure. target < 0 marks
// the unperturbed baseline.
struct Action {
    AllocationVector allocation;
    int target = -1;        // perturbed asset index
    double new_weight = 0.0; // weight assigned to the target
};

struct ActionSet {
    std::vector<Action> actions; // baseline first, deterministic order

    size_t size() const { return actions.size(); }
    bool empty() const { return actions.empty(); }
    const Action& operator[](size_t i) const { return actions[i]; }
};

struct ConstraintConfig {
    double a_min = 0.0;
    double a_max = 1.0;
    double grid_step = 0.05;
    bool uniform_adjustment = false; // residual into cash when false
};

void validate_constraints(const ConstraintConfig& c);

struct LookbackConfig {
    int window_k = 30;
    bool exponential = false;
    int half_life = 15; // trading days; required <= window_k when exponential
};

void validate_lookback(const LookbackConfig& lb);

enum class Objective { AnnualizedReturn, Sharpe, Sortino, Calmar };

const char* objective_name(Objective o);
Objective objective_from_name(const std::string& name);

// Candidate generation: perturb one active asset at a time across the
// [a_min, a_max] grid and absorb the residual either into cash or
// proportionally across the other invested assets. Infeasible candidates
// are skipped; duplicates removed; baseline is always action 0.
// Precondition: every asset with nonzero baseline weight is active.
ActionSet generate_actions(const AllocationVector& baseline, const ConstraintConfig& c,
                           std::span<const size_t> active);

// k daily simple returns per surviving asset, using rows (date-k .. date]
// only. Assets hitting the -1 sentinel inside the window are dropped.
struct ReturnWindow {
    std::vector<size_t> assets;  // panel indices of surviving columns
    std::vector<double> returns; // row-major [k][assets]
    int k = 0;

    double at(int t, size_t col) const { return returns[static_cast<size_t>(t) * assets.size() + col]; }
};

ReturnWindow window_returns(const market::PricePanel& panel, const Date& date, int k,
                            std::span<const size_t> active);

// Score of a candidate allocation over a window: simulate the fixed
// allocation day by day and compute the objective metric on the resulting
// series. nullopt = metric undefined on this window; ranks below every
// defined score.
using Score = std::optional<double>;

Score evaluate_action(const AllocationVector& a, const ReturnWindow& window, Objective obj,
                      const LookbackConfig& lb, std::span<const double> risk_free);

// Scoring kernels. The parallel kernel partitions candidates across OpenMP
// threads; each score is computed independently so results are bitwise
// identical to the serial reference.
std::vector<Score> score_actions_serial(const ActionSet& actions, const ReturnWindow& window,
                                        Objective obj, const LookbackConfig& lb,
                                        std::span<const double> risk_free);
std::vector<Score> score_actions_parallel(const ActionSet& actions, const ReturnWindow& window,
                                          Objective obj, const LookbackConfig& lb,
                                          std::span<const double> risk_free);
std::vector<Score> score_actions(const ActionSet& actions, const ReturnWindow& window,
                                 Objective obj, const LookbackConfig& lb,
                                 std::span<const double> risk_free, bool parallel);

// Index of the best-scoring action; ties and all-undefined fall back to the
// earliest position (baseline).
size_t argmax_score(std::span<const Score> scores);

const Action& select_leader(const ActionSet& actions, const ReturnWindow& window, Objective obj,
                            const LookbackConfig& lb, std::span<const double> risk_free,
                            bool parallel = false);

// Keep active assets whose k-day cumulative-return percent rank lies in
// [lo_pct, hi_pct]; cash is always retained. With fewer than 3 rankable
// assets the filter is a no-op.
std::vector<size_t> percentile_filter(const market::PricePanel& panel, const Date& date, int k,
                                      double lo_pct, double hi_pct,
                                      std::span<const size_t> active);

// Average hindsight gap (1/T) sum_t [M(a*, t) - M(a(t), t)] against the best
// fixed action over the same set. Undefined scores contribute zero.
struct RegretStep {
    ReturnWindow window;
    std::vector<double> risk_free;
};

double hindsight_regret(std::span<const size_t> played_indices, const ActionSet& actions,
                        std::span<const RegretStep> steps, Objective obj,
                        const LookbackConfig& lb);

} // namespace nrl::alloc
