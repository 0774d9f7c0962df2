#include "nrl/config.hpp"

#include "nrl/errors.hpp"

#include <fstream>
#include <set>

namespace nrl::engine {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "rebalancing_frequency", "objective",       "window_k",
        "exponential_weighting", "half_life",       "min_allocation",
        "max_allocation",        "grid_step",       "uniform_adjustment",
        "fg_lower",              "fg_upper",        "fg_delta",
        "liquidate_on_block",    "percentile_lo",   "percentile_hi",
        "cluster_mode",          "hedging",         "fee_pct_rate",
        "fee_per_share",         "initial_capital", "bond_ticker",
        "bond_maturity_years",   "spy_ticker",      "gold_ticker",
        "hedge_eta",             "n_votes",         "prompts_dir",
        "parallel_scoring",      "seed"};
    return keys;
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
    if (!j.contains(key) || j[key].is_null()) {
        return fallback;
    }
    try {
        return j[key].get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError(std::string("config: bad value for '") + key + "'");
    }
}

} // namespace

BacktestConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ValidationError("config: expected a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (known_keys().count(key) == 0) {
            throw ValidationError("config: unknown key '" + key + "'");
        }
    }

    BacktestConfig cfg;
    cfg.frequency = frequency_from_name(get_or<std::string>(j, "rebalancing_frequency", "quarterly"));
    cfg.objective = alloc::objective_from_name(get_or<std::string>(j, "objective", "annualized_return"));

    cfg.lookback.window_k = get_or<int>(j, "window_k", 30);
    cfg.lookback.exponential = get_or<bool>(j, "exponential_weighting", false);
    cfg.lookback.half_life = get_or<int>(j, "half_life", std::max(1, cfg.lookback.window_k / 2));

    cfg.constraints.a_min = get_or<double>(j, "min_allocation", 0.0);
    cfg.constraints.a_max = get_or<double>(j, "max_allocation", 1.0);
    cfg.constraints.grid_step = get_or<double>(j, "grid_step", 0.05);
    cfg.constraints.uniform_adjustment = get_or<bool>(j, "uniform_adjustment", false);

    if (j.contains("fg_lower") && !j["fg_lower"].is_null()) {
        cfg.gate.lower = j["fg_lower"].get<double>();
    }
    if (j.contains("fg_upper") && !j["fg_upper"].is_null()) {
        cfg.gate.upper = j["fg_upper"].get<double>();
    }
    if (j.contains("fg_delta") && !j["fg_delta"].is_null()) {
        const auto& d = j["fg_delta"];
        if (!d.is_array() || d.size() != 3) {
            throw ValidationError("config: fg_delta must be [low, high, days]");
        }
        cfg.gate.delta = gate::DeltaFilter{d[0].get<double>(), d[1].get<double>(), d[2].get<int>()};
    }
    cfg.gate.liquidate_on_block = get_or<bool>(j, "liquidate_on_block", false);

    const bool has_lo = j.contains("percentile_lo") && !j["percentile_lo"].is_null();
    const bool has_hi = j.contains("percentile_hi") && !j["percentile_hi"].is_null();
    if (has_lo != has_hi) {
        throw ValidationError("config: percentile_lo and percentile_hi must be set together");
    }
    if (has_lo) {
        cfg.percentile = PercentileRange{j["percentile_lo"].get<double>(),
                                         j["percentile_hi"].get<double>()};
    }

    if (j.contains("cluster_mode") && !j["cluster_mode"].is_null()) {
        const auto& cm = j["cluster_mode"];
        if (cm.is_string()) {
            std::string mode = cm.get<std::string>();
            for (char& c : mode) {
                c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            }
            if (mode == "all") {
                cfg.cluster_mode = ClusterMode::All;
            } else if (mode == "dynamic") {
                cfg.cluster_mode = ClusterMode::Dynamic;
            } else {
                throw ValidationError("config: cluster_mode must be \"all\", \"dynamic\", or a "
                                      "sector list");
            }
        } else if (cm.is_array()) {
            cfg.cluster_mode = ClusterMode::StaticList;
            for (const auto& s : cm) {
                cfg.static_sectors.push_back(s.get<std::string>());
            }
        } else {
            throw ValidationError("config: bad cluster_mode");
        }
    }
    cfg.hedging = get_or<bool>(j, "hedging", false);

    cfg.fees.pct_rate = get_or<double>(j, "fee_pct_rate", 0.0);
    cfg.fees.per_share = get_or<double>(j, "fee_per_share", 0.0);
    cfg.initial_capital = get_or<double>(j, "initial_capital", 100000.0);

    cfg.bond_ticker = get_or<std::string>(j, "bond_ticker", "BOND10Y");
    cfg.bond_maturity_years = get_or<double>(j, "bond_maturity_years", 10.0);
    cfg.spy_ticker = get_or<std::string>(j, "spy_ticker", "SPY");
    cfg.gold_ticker = get_or<std::string>(j, "gold_ticker", "GLD");
    cfg.hedge_eta = get_or<double>(j, "hedge_eta", 0.05);
    cfg.n_votes = get_or<int>(j, "n_votes", 5);
    cfg.prompts_dir = get_or<std::string>(j, "prompts_dir", "prompts");
    cfg.parallel_scoring = get_or<bool>(j, "parallel_scoring", true);
    cfg.seed = get_or<std::uint64_t>(j, "seed", 0);

    validate_config(cfg);
    return cfg;
}

BacktestConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open config '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("config '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

nlohmann::json config_to_json(const BacktestConfig& cfg) {
    nlohmann::json j;
    j["rebalancing_frequency"] = frequency_name(cfg.frequency);
    j["objective"] = alloc::objective_name(cfg.objective);
    j["window_k"] = cfg.lookback.window_k;
    j["exponential_weighting"] = cfg.lookback.exponential;
    j["half_life"] = cfg.lookback.half_life;
    j["min_allocation"] = cfg.constraints.a_min;
    j["max_allocation"] = cfg.constraints.a_max;
    j["grid_step"] = cfg.constraints.grid_step;
    j["uniform_adjustment"] = cfg.constraints.uniform_adjustment;
    j["fg_lower"] = cfg.gate.lower ? nlohmann::json(*cfg.gate.lower) : nlohmann::json(nullptr);
    j["fg_upper"] = cfg.gate.upper ? nlohmann::json(*cfg.gate.upper) : nlohmann::json(nullptr);
    if (cfg.gate.delta) {
        j["fg_delta"] = {cfg.gate.delta->low, cfg.gate.delta->high, cfg.gate.delta->days};
    } else {
        j["fg_delta"] = nullptr;
    }
    j["liquidate_on_block"] = cfg.gate.liquidate_on_block;
    j["percentile_lo"] =
        cfg.percentile ? nlohmann::json(cfg.percentile->lo) : nlohmann::json(nullptr);
    j["percentile_hi"] =
        cfg.percentile ? nlohmann::json(cfg.percentile->hi) : nlohmann::json(nullptr);
    switch (cfg.cluster_mode) {
    case ClusterMode::All:
        j["cluster_mode"] = "all";
        break;
    case ClusterMode::Dynamic:
        j["cluster_mode"] = "dynamic";
        break;
    case ClusterMode::StaticList:
        j["cluster_mode"] = cfg.static_sectors;
        break;
    }
    j["hedging"] = cfg.hedging;
    j["fee_pct_rate"] = cfg.fees.pct_rate;
    j["fee_per_share"] = cfg.fees.per_share;
    j["initial_capital"] = cfg.initial_capital;
    j["bond_ticker"] = cfg.bond_ticker;
    j["bond_maturity_years"] = cfg.bond_maturity_years;
    j["spy_ticker"] = cfg.spy_ticker;
    j["gold_ticker"] = cfg.gold_ticker;
    j["hedge_eta"] = cfg.hedge_eta;
    j["n_votes"] = cfg.n_votes;
    j["prompts_dir"] = cfg.prompts_dir;
    j["parallel_scoring"] = cfg.parallel_scoring;
    j["seed"] = cfg.seed;
    return j;
}

bool operator==(const FeeModel& a, const FeeModel& b) {
    return a.pct_rate == b.pct_rate && a.per_share == b.per_share;
}

bool operator==(const PercentileRange& a, const PercentileRange& b) {
    return a.lo == b.lo && a.hi == b.hi;
}

bool operator==(const BacktestConfig& a, const BacktestConfig& b) {
    return config_to_json(a) == config_to_json(b);
}

} // namespace nrl::engine
