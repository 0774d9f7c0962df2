#pragma once

#include "nrl/dates.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace nrl::market {

// Sentinel for "not listed on this date" after preprocessing.
inline constexpr double kInactivePrice = -1.0;

// Synthetic asset ids injected by the engine. Cash is always column 0.
inline constexpr const char* kCashId = "CASH";

// Date-indexed close-price matrix. Raw panels (straight from CSV) may hold
// missing cells as NaN; preprocess() turns edge-missing into the -1 sentinel
// and forward-fills interior gaps so each asset's active span is contiguous.
struct PricePanel {
    std::vector<Date> dates;
    std::vector<std::string> asset_ids;
    std::vector<double> prices; // row-major [date][asset]

    size_t n_dates() const { return dates.size(); }
    size_t n_assets() const { return asset_ids.size(); }

    double price(size_t date_idx, size_t asset_idx) const {
        return prices[date_idx * asset_ids.size() + asset_idx];
    }
    double& price(size_t date_idx, size_t asset_idx) {
        return prices[date_idx * asset_ids.size() + asset_idx];
    }

    bool is_active(size_t date_idx, size_t asset_idx) const {
        return price(date_idx, asset_idx) != kInactivePrice;
    }

    // Index of `date`; throws LookupError if absent.
    size_t date_index(const Date& date) const;
    std::optional<size_t> find_date(const Date& date) const;

    // Index of asset id; throws LookupError if absent.
    size_t asset_index(const std::string& id) const;
    std::optional<size_t> find_asset(const std::string& id) const;
};

struct SentimentSeries {
    std::vector<Date> dates;
    std::vector<double> values; // Fear & Greed readings in [0, 100]
};

struct SectorMap {
    // Parallel to taxonomy order: first appearance order in the sector CSV.
    std::vector<std::string> taxonomy;
    std::vector<std::pair<std::string, std::string>> entries; // asset -> sector
    // Optional style tags ("defensive"/"cyclical") per sector, used by the
    // deterministic mock advisor.
    std::vector<std::pair<std::string, std::string>> styles; // sector -> style

    std::optional<std::string> sector_of(const std::string& asset_id) const;
    std::optional<std::string> style_of(const std::string& sector_id) const;
    std::optional<size_t> taxonomy_index(const std::string& sector_id) const;
};

struct YieldSeries {
    std::vector<Date> dates;
    std::vector<double> yields; // annualized decimal fractions, e.g. 0.05
};

// Assets permanently excluded after delisting.
using Blacklist = std::set<std::string>;

// Per-asset active span discovered by preprocess().
struct AssetSpan {
    std::string asset_id;
    size_t entry_idx = 0; // first non-missing row
    size_t exit_idx = 0;  // last non-missing row
};

struct PreprocessResult {
    PricePanel panel;
    std::vector<AssetSpan> spans; // one per asset, panel order
};

// --- loading -----------------------------------------------------------

// Header must be `date,TICKER1,...`; cells are decimal prices or empty.
// Empty cells come back as NaN (missing, not yet -1). Rows are sorted by
// date; duplicate dates are a validation error.
PricePanel load_price_csv(const std::string& path);

SentimentSeries load_sentiment_csv(const std::string& path);
YieldSeries load_yield_csv(const std::string& path);
SectorMap load_sector_csv(const std::string& path);

// --- preprocessing pipeline --------------------------------------------

// 1. drop rows where every asset is missing
// 2. record each asset's first/last non-missing date as entry/exit
// 3. set cells before entry / after exit to -1
// 4. forward-fill interior gaps
// An asset with zero non-missing prices is a validation error.
PreprocessResult preprocess(const PricePanel& raw);

// Zero-coupon price per 100 face, annual compounding.
double price_bond(double yield_value, double maturity_years);

// Daily bond price column for the panel's dates, constant 10y maturity.
// Yields are forward-filled onto panel dates; a panel date before the first
// yield observation is a validation error.
std::vector<double> synthesize_bond_asset(const YieldSeries& yields,
                                          const std::vector<Date>& panel_dates,
                                          double maturity_years = 10.0);

// One sentiment value per panel date, forward-filled. A panel date earlier
// than the first sentiment observation is a validation error.
SentimentSeries align_sentiment(const PricePanel& panel, const SentimentSeries& s);

// Assets tradable on `date`: price != -1 and not blacklisted; cash (column 0
// when present) is always included.
std::vector<size_t> active_assets(const PricePanel& panel, const Date& date,
                                  const Blacklist& blacklist);

// Inserts the constant-price cash column at index 0 (no-op if present).
void inject_cash_column(PricePanel& panel);

// Appends a fully-active synthetic column (used for the bond asset).
void append_column(PricePanel& panel, const std::string& asset_id,
                   const std::vector<double>& column);

} // namespace nrl::market
