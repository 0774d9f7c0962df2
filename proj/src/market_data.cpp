#include "nrl/market_data.hpp"

#include "nrl/csv.hpp"
#include "nrl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nrl::market {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

bool is_missing(double v) {
    return std::isnan(v);
}

double parse_price_cell(const std::string& cell, size_t row, const std::string& column) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &pos);
    } catch (const std::exception&) {
        throw ParseError("non-numeric price '" + cell + "' at row " + std::to_string(row) +
                         ", column " + column);
    }
    if (pos != cell.size()) {
        throw ParseError("non-numeric price '" + cell + "' at row " + std::to_string(row) +
                         ", column " + column);
    }
    return v;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

size_t PricePanel::date_index(const Date& date) const {
    auto idx = find_date(date);
    if (!idx) {
        throw LookupError("date " + format_date(date) + " not in panel");
    }
    return *idx;
}

std::optional<size_t> PricePanel::find_date(const Date& date) const {
    auto it = std::lower_bound(dates.begin(), dates.end(), date);
    if (it == dates.end() || *it != date) {
        return std::nullopt;
    }
    return static_cast<size_t>(it - dates.begin());
}

size_t PricePanel::asset_index(const std::string& id) const {
    auto idx = find_asset(id);
    if (!idx) {
        throw LookupError("asset '" + id + "' not in panel");
    }
    return *idx;
}

std::optional<size_t> PricePanel::find_asset(const std::string& id) const {
    auto it = std::find(asset_ids.begin(), asset_ids.end(), id);
    if (it == asset_ids.end()) {
        return std::nullopt;
    }
    return static_cast<size_t>(it - asset_ids.begin());
}

std::optional<std::string> SectorMap::sector_of(const std::string& asset_id) const {
    for (const auto& [asset, sector] : entries) {
        if (asset == asset_id) {
            return sector;
        }
    }
    return std::nullopt;
}

std::optional<std::string> SectorMap::style_of(const std::string& sector_id) const {
    for (const auto& [sector, style] : styles) {
        if (sector == sector_id) {
            return style;
        }
    }
    return std::nullopt;
}

std::optional<size_t> SectorMap::taxonomy_index(const std::string& sector_id) const {
    auto it = std::find(taxonomy.begin(), taxonomy.end(), sector_id);
    if (it == taxonomy.end()) {
        return std::nullopt;
    }
    return static_cast<size_t>(it - taxonomy.begin());
}

PricePanel load_price_csv(const std::string& path) {
    auto table = csv::read_file(path);
    if (table.header.empty() || lower(trim(table.header[0])) != "date") {
        throw ParseError("price CSV '" + path + "': first column header must be 'date'");
    }
    if (table.header.size() < 2) {
        throw ParseError("price CSV '" + path + "': no asset columns");
    }

    PricePanel panel;
    panel.asset_ids.assign(table.header.begin() + 1, table.header.end());
    for (auto& id : panel.asset_ids) {
        id = trim(id);
    }

    struct Row {
        Date date;
        std::vector<double> prices;
    };
    std::vector<Row> rows;
    rows.reserve(table.rows.size());
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& fields = table.rows[r];
        const size_t file_row = r + 2; // 1-based, after header
        if (fields.size() != table.header.size()) {
            throw ParseError("price CSV '" + path + "': row " + std::to_string(file_row) +
                             " has " + std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(table.header.size()));
        }
        Row row;
        try {
            row.date = parse_date(trim(fields[0]));
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()).substr(7) + " at row " +
                             std::to_string(file_row));
        }
        row.prices.reserve(panel.asset_ids.size());
        for (size_t c = 1; c < fields.size(); ++c) {
            const std::string cell = trim(fields[c]);
            if (cell.empty()) {
                row.prices.push_back(kMissing);
            } else {
                row.prices.push_back(parse_price_cell(cell, file_row, panel.asset_ids[c - 1]));
            }
        }
        rows.push_back(std::move(row));
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    for (size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].date == rows[i - 1].date) {
            throw ValidationError("price CSV '" + path + "': duplicate date " +
                                  format_date(rows[i].date));
        }
    }

    panel.dates.reserve(rows.size());
    panel.prices.reserve(rows.size() * panel.asset_ids.size());
    for (auto& row : rows) {
        panel.dates.push_back(row.date);
        panel.prices.insert(panel.prices.end(), row.prices.begin(), row.prices.end());
    }
    return panel;
}

SentimentSeries load_sentiment_csv(const std::string& path) {
    auto table = csv::read_file(path);
    if (table.header.size() < 2 || lower(trim(table.header[0])) != "date" ||
        lower(trim(table.header[1])) != "value") {
        throw ParseError("sentiment CSV '" + path + "': expected header 'date,value'");
    }
    struct Row {
        Date date;
        double value;
    };
    std::vector<Row> rows;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const size_t file_row = r + 2;
        const auto& fields = table.rows[r];
        if (fields.size() < 2) {
            throw ParseError("sentiment CSV '" + path + "': row " + std::to_string(file_row) +
                             " missing value");
        }
        Row row{parse_date(trim(fields[0])), parse_price_cell(trim(fields[1]), file_row, "value")};
        if (row.value < 0.0 || row.value > 100.0) {
            throw ValidationError("sentiment CSV '" + path + "': value " +
                                  std::to_string(row.value) + " outside [0,100] at row " +
                                  std::to_string(file_row));
        }
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    SentimentSeries out;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].date == rows[i - 1].date) {
            throw ValidationError("sentiment CSV '" + path + "': duplicate date " +
                                  format_date(rows[i].date));
        }
        out.dates.push_back(rows[i].date);
        out.values.push_back(rows[i].value);
    }
    return out;
}

YieldSeries load_yield_csv(const std::string& path) {
    auto table = csv::read_file(path);
    if (table.header.size() < 2 || lower(trim(table.header[0])) != "date" ||
        lower(trim(table.header[1])) != "yield10y") {
        throw ParseError("yield CSV '" + path + "': expected header 'date,yield10y'");
    }
    struct Row {
        Date date;
        double value;
    };
    std::vector<Row> rows;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const size_t file_row = r + 2;
        const auto& fields = table.rows[r];
        if (fields.size() < 2) {
            throw ParseError("yield CSV '" + path + "': row " + std::to_string(file_row) +
                             " missing value");
        }
        Row row{parse_date(trim(fields[0])), parse_price_cell(trim(fields[1]), file_row, "yield10y")};
        if (row.value <= -1.0) {
            throw ValidationError("yield CSV '" + path + "': yield must be > -1 at row " +
                                  std::to_string(file_row));
        }
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    YieldSeries out;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].date == rows[i - 1].date) {
            throw ValidationError("yield CSV '" + path + "': duplicate date " +
                                  format_date(rows[i].date));
        }
        out.dates.push_back(rows[i].date);
        out.yields.push_back(rows[i].value);
    }
    return out;
}

SectorMap load_sector_csv(const std::string& path) {
    auto table = csv::read_file(path);
    if (table.header.size() < 2 || lower(trim(table.header[0])) != "ticker" ||
        lower(trim(table.header[1])) != "sector") {
        throw ParseError("sector CSV '" + path + "': expected header 'ticker,sector[,style]'");
    }
    const bool has_style = table.header.size() >= 3 && lower(trim(table.header[2])) == "style";
    SectorMap map;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& fields = table.rows[r];
        if (fields.size() < 2) {
            throw ParseError("sector CSV '" + path + "': row " + std::to_string(r + 2) +
                             " missing sector");
        }
        const std::string ticker = trim(fields[0]);
        const std::string sector = trim(fields[1]);
        if (ticker.empty() || sector.empty()) {
            throw ParseError("sector CSV '" + path + "': empty ticker or sector at row " +
                             std::to_string(r + 2));
        }
        if (map.sector_of(ticker)) {
            throw ValidationError("sector CSV '" + path + "': ticker '" + ticker +
                                  "' mapped twice");
        }
        if (!map.taxonomy_index(sector)) {
            map.taxonomy.push_back(sector);
        }
        map.entries.emplace_back(ticker, sector);
        if (has_style && fields.size() >= 3) {
            const std::string style = lower(trim(fields[2]));
            if (!style.empty() && !map.style_of(sector)) {
                map.styles.emplace_back(sector, style);
            }
        }
    }
    return map;
}

PreprocessResult preprocess(const PricePanel& raw) {
    const size_t n_assets = raw.n_assets();

    // 1. drop rows where every asset is missing or inactive
    std::vector<size_t> kept_rows;
    kept_rows.reserve(raw.n_dates());
    for (size_t t = 0; t < raw.n_dates(); ++t) {
        bool any = false;
        for (size_t a = 0; a < n_assets; ++a) {
            const double v = raw.price(t, a);
            if (!is_missing(v) && v != kInactivePrice) {
                any = true;
                break;
            }
        }
        if (any) {
            kept_rows.push_back(t);
        }
    }

    PricePanel panel;
    panel.asset_ids = raw.asset_ids;
    panel.dates.reserve(kept_rows.size());
    panel.prices.reserve(kept_rows.size() * n_assets);
    for (size_t t : kept_rows) {
        panel.dates.push_back(raw.dates[t]);
        for (size_t a = 0; a < n_assets; ++a) {
            double v = raw.price(t, a);
            if (v == kInactivePrice) {
                v = kMissing; // re-derive spans from scratch; idempotent
            }
            panel.prices.push_back(v);
        }
    }

    // 2.-4. spans, sentinels, forward fill
    PreprocessResult result;
    result.spans.reserve(n_assets);
    const size_t n = panel.n_dates();
    for (size_t a = 0; a < n_assets; ++a) {
        size_t entry = n, exit = n;
        for (size_t t = 0; t < n; ++t) {
            if (!is_missing(panel.price(t, a))) {
                if (entry == n) {
                    entry = t;
                }
                exit = t;
            }
        }
        if (entry == n) {
            throw ValidationError("asset '" + panel.asset_ids[a] + "' has no prices");
        }
        double last = 0.0;
        for (size_t t = 0; t < n; ++t) {
            double& v = panel.price(t, a);
            if (t < entry || t > exit) {
                v = kInactivePrice;
            } else if (is_missing(v)) {
                v = last;
            } else {
                if (v <= 0.0) {
                    throw ValidationError("asset '" + panel.asset_ids[a] +
                                          "' has nonpositive price on " +
                                          format_date(panel.dates[t]));
                }
                last = v;
            }
        }
        result.spans.push_back(AssetSpan{panel.asset_ids[a], entry, exit});
    }
    result.panel = std::move(panel);
    return result;
}

double price_bond(double yield_value, double maturity_years) {
    if (yield_value <= -1.0) {
        throw DomainError("bond yield must be > -1, got " + std::to_string(yield_value));
    }
    if (maturity_years <= 0.0) {
        throw DomainError("bond maturity must be positive");
    }
    return 100.0 / std::pow(1.0 + yield_value, maturity_years);
}

std::vector<double> synthesize_bond_asset(const YieldSeries& yields,
                                          const std::vector<Date>& panel_dates,
                                          double maturity_years) {
    if (yields.dates.empty()) {
        throw ValidationError("yield series is empty");
    }
    std::vector<double> out;
    out.reserve(panel_dates.size());
    size_t j = 0;
    double last_yield = 0.0;
    bool have_yield = false;
    for (const Date& d : panel_dates) {
        while (j < yields.dates.size() && yields.dates[j] <= d) {
            last_yield = yields.yields[j];
            have_yield = true;
            ++j;
        }
        if (!have_yield) {
            throw ValidationError("panel date " + format_date(d) +
                                  " precedes first yield observation");
        }
        out.push_back(price_bond(last_yield, maturity_years));
    }
    return out;
}

SentimentSeries align_sentiment(const PricePanel& panel, const SentimentSeries& s) {
    if (s.dates.empty()) {
        throw ValidationError("sentiment series is empty");
    }
    SentimentSeries out;
    out.dates = panel.dates;
    out.values.reserve(panel.n_dates());
    size_t j = 0;
    double last = 0.0;
    bool have = false;
    for (const Date& d : panel.dates) {
        while (j < s.dates.size() && s.dates[j] <= d) {
            last = s.values[j];
            have = true;
            ++j;
        }
        if (!have) {
            throw ValidationError("panel date " + format_date(d) +
                                  " precedes first sentiment observation");
        }
        out.values.push_back(last);
    }
    return out;
}

std::vector<size_t> active_assets(const PricePanel& panel, const Date& date,
                                  const Blacklist& blacklist) {
    const size_t t = panel.date_index(date);
    std::vector<size_t> out;
    out.reserve(panel.n_assets());
    for (size_t a = 0; a < panel.n_assets(); ++a) {
        if (panel.asset_ids[a] == kCashId) {
            out.push_back(a);
            continue;
        }
        if (!panel.is_active(t, a)) {
            continue;
        }
        if (blacklist.count(panel.asset_ids[a]) > 0) {
            continue;
        }
        out.push_back(a);
    }
    return out;
}

void inject_cash_column(PricePanel& panel) {
    if (!panel.asset_ids.empty() && panel.asset_ids[0] == kCashId) {
        return;
    }
    if (panel.find_asset(kCashId)) {
        throw ValidationError("cash column present but not at index 0");
    }
    const size_t n_assets = panel.n_assets();
    std::vector<double> prices;
    prices.reserve(panel.n_dates() * (n_assets + 1));
    for (size_t t = 0; t < panel.n_dates(); ++t) {
        prices.push_back(1.0);
        for (size_t a = 0; a < n_assets; ++a) {
            prices.push_back(panel.price(t, a));
        }
    }
    panel.asset_ids.insert(panel.asset_ids.begin(), kCashId);
    panel.prices = std::move(prices);
}

void append_column(PricePanel& panel, const std::string& asset_id,
                   const std::vector<double>& column) {
    if (column.size() != panel.n_dates()) {
        throw ValidationError("column '" + asset_id + "' length " +
                              std::to_string(column.size()) + " != panel length " +
                              std::to_string(panel.n_dates()));
    }
    if (panel.find_asset(asset_id)) {
        throw ValidationError("asset '" + asset_id + "' already in panel");
    }
    const size_t n_assets = panel.n_assets();
    std::vector<double> prices;
    prices.reserve(panel.n_dates() * (n_assets + 1));
    for (size_t t = 0; t < panel.n_dates(); ++t) {
        for (size_t a = 0; a < n_assets; ++a) {
            prices.push_back(panel.price(t, a));
        }
        prices.push_back(column[t]);
    }
    panel.asset_ids.push_back(asset_id);
    panel.prices = std::move(prices);
}

} // namespace nrl::market
