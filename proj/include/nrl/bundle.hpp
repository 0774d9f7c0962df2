#pragma once

#include "nrl/market_data.hpp"

#include <string>
#include <vector>

namespace nrl::engine {

// Preprocessed inputs written by `ingest` and consumed by `backtest`/`grid`:
//   panel.csv      date,CASH,<tickers...>,<bond> with explicit -1 sentinels
//   sentiment.csv  date,value aligned to the panel dates
//   sectors.csv    ticker,sector[,style] echo
//   meta.json      per-asset entry/exit, taxonomy, content digest
struct Bundle {
    market::PricePanel panel;
    market::SentimentSeries sentiment;
    market::SectorMap sectors;
    std::vector<market::AssetSpan> spans;
    std::string digest;
    std::string bond_ticker;
};

std::uint64_t fnv1a64(const std::string& data);
std::string fnv1a64_hex(const std::string& data);

void write_bundle(const std::string& dir, const Bundle& bundle);
Bundle load_bundle(const std::string& dir);

} // namespace nrl::engine
