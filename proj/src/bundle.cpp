#include "nrl/bundle.hpp"

#include "nrl/csv.hpp"
#include "nrl/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nrl::engine {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& data) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

namespace {

// Full round-trip precision so reloading a bundle reproduces the exact
// doubles written by ingest.
std::string exact_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string panel_csv_text(const market::PricePanel& panel) {
    std::string out = "date";
    for (const auto& id : panel.asset_ids) {
        out.push_back(',');
        out += csv::quote_field(id);
    }
    out.push_back('\n');
    for (size_t t = 0; t < panel.n_dates(); ++t) {
        out += format_date(panel.dates[t]);
        for (size_t a = 0; a < panel.n_assets(); ++a) {
            out.push_back(',');
            out += exact_double(panel.price(t, a));
        }
        out.push_back('\n');
    }
    return out;
}

std::string sentiment_csv_text(const market::SentimentSeries& s) {
    std::string out = "date,value\n";
    for (size_t i = 0; i < s.dates.size(); ++i) {
        out += format_date(s.dates[i]);
        out.push_back(',');
        out += exact_double(s.values[i]);
        out.push_back('\n');
    }
    return out;
}

std::string sectors_csv_text(const market::SectorMap& sectors) {
    std::string out = "ticker,sector,style\n";
    for (const auto& [ticker, sector] : sectors.entries) {
        out += csv::quote_field(ticker);
        out.push_back(',');
        out += csv::quote_field(sector);
        out.push_back(',');
        out += csv::quote_field(sectors.style_of(sector).value_or(""));
        out.push_back('\n');
    }
    return out;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write '" + path.string() + "'");
    }
    out << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path.string() + "'");
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

void write_bundle(const std::string& dir, const Bundle& bundle) {
    fs::create_directories(dir);
    const std::string panel_text = panel_csv_text(bundle.panel);
    const std::string sentiment_text = sentiment_csv_text(bundle.sentiment);
    const std::string sectors_text = sectors_csv_text(bundle.sectors);
    write_file(fs::path(dir) / "panel.csv", panel_text);
    write_file(fs::path(dir) / "sentiment.csv", sentiment_text);
    write_file(fs::path(dir) / "sectors.csv", sectors_text);

    nlohmann::json meta;
    meta["digest"] = fnv1a64_hex(panel_text + sentiment_text + sectors_text);
    meta["bond_ticker"] = bundle.bond_ticker;
    meta["assets"] = nlohmann::json::array();
    for (const auto& span : bundle.spans) {
        nlohmann::json a;
        a["id"] = span.asset_id;
        a["entry"] = format_date(bundle.panel.dates[span.entry_idx]);
        a["exit"] = format_date(bundle.panel.dates[span.exit_idx]);
        meta["assets"].push_back(a);
    }
    meta["taxonomy"] = bundle.sectors.taxonomy;
    write_file(fs::path(dir) / "meta.json", meta.dump(2) + "\n");
}

Bundle load_bundle(const std::string& dir) {
    Bundle bundle;
    bundle.panel = market::load_price_csv((fs::path(dir) / "panel.csv").string());
    for (double v : bundle.panel.prices) {
        if (std::isnan(v)) {
            throw ValidationError("bundle panel has missing cells; re-run ingest");
        }
    }
    if (bundle.panel.asset_ids.empty() || bundle.panel.asset_ids[0] != market::kCashId) {
        throw ValidationError("bundle panel must have CASH as its first column");
    }
    auto raw_sentiment = market::load_sentiment_csv((fs::path(dir) / "sentiment.csv").string());
    bundle.sentiment = market::align_sentiment(bundle.panel, raw_sentiment);
    bundle.sectors = market::load_sector_csv((fs::path(dir) / "sectors.csv").string());

    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_file(fs::path(dir) / "meta.json"));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bundle meta.json: " + std::string(e.what()));
    }
    bundle.digest = meta.value("digest", "");
    bundle.bond_ticker = meta.value("bond_ticker", "");

    // Re-derive spans and check the active intervals are contiguous.
    for (size_t a = 0; a < bundle.panel.n_assets(); ++a) {
        market::AssetSpan span;
        span.asset_id = bundle.panel.asset_ids[a];
        const size_t n = bundle.panel.n_dates();
        size_t entry = n, exit = n;
        for (size_t t = 0; t < n; ++t) {
            if (bundle.panel.is_active(t, a)) {
                if (entry == n) {
                    entry = t;
                }
                exit = t;
            }
        }
        if (entry == n) {
            throw ValidationError("bundle asset '" + span.asset_id + "' has no active prices");
        }
        for (size_t t = entry; t <= exit; ++t) {
            if (!bundle.panel.is_active(t, a)) {
                throw ValidationError("bundle asset '" + span.asset_id +
                                      "' has a gap inside its active interval");
            }
        }
        span.entry_idx = entry;
        span.exit_idx = exit;
        bundle.spans.push_back(span);
    }
    return bundle;
}

} // namespace nrl::engine
