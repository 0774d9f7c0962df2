#pragma once

#include "nrl/market_data.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace nrl::llm {

// Text-completion provider. Implementations may throw nrl::Error on
// failure; the advisor pipeline degrades instead of aborting the backtest.
class AdvisorProvider {
public:
    virtual ~AdvisorProvider() = default;
    virtual std::string complete(const std::string& prompt) = 0;
};

struct PromptTemplates {
    std::string cluster; // placeholders: {{series}}, {{sectors}}
    std::string hedge;   // placeholders: {{sector}}, {{sectors}}
};

PromptTemplates default_templates();
PromptTemplates load_templates(const std::string& dir);

struct ClusterRecommendation {
    std::vector<std::string> sectors; // exactly 3 unless fallback_all
    std::map<std::string, int> votes;
    std::vector<std::string> raw_responses;
    bool fallback_all = false; // no parseable votes: keep the full universe
};

struct HedgeRecommendation {
    std::map<std::string, std::vector<std::string>> hedges;
    std::map<std::string, std::string> raw_responses;
    std::vector<std::string> unhedged; // sectors whose responses parsed empty
};

// Deterministic prompt embedding the trailing sentiment series (one
// `date,value` line per day) and the closed sector list. Requires at least
// 200 trading days of history.
std::string build_cluster_prompt(const market::SentimentSeries& trailing,
                                 const std::vector<std::string>& taxonomy,
                                 const PromptTemplates& templates);

std::string build_hedge_prompt(const std::string& sector,
                               const std::vector<std::string>& taxonomy,
                               const PromptTemplates& templates);

// Case-insensitive scan for taxonomy names, ordered by first occurrence,
// duplicates removed. Unmatched text is ignored.
std::vector<std::string> parse_sectors(const std::string& response,
                                       const std::vector<std::string>& taxonomy);

// Issues the identical cluster prompt n_votes times, tallies parsed sectors
// and returns the top 3 by count (ties broken by taxonomy order). A failed
// vote is retried once and then dropped; if every vote parses empty the
// result is the flagged full-universe fallback.
ClusterRecommendation recommend_clusters(AdvisorProvider& provider,
                                         const market::SentimentSeries& trailing,
                                         const std::vector<std::string>& taxonomy,
                                         const PromptTemplates& templates, int n_votes = 5);

// One date-free prompt per selected sector. Hedges never include the
// selected sectors themselves; a sector whose response parses empty is
// recorded as unhedged and the run continues.
HedgeRecommendation recommend_hedges(AdvisorProvider& provider,
                                     const std::vector<std::string>& selected,
                                     const std::vector<std::string>& taxonomy,
                                     const PromptTemplates& templates);

// Deterministic provider used for tests and offline runs. Cluster prompts
// are answered from the mean of the embedded sentiment values: below 40 the
// first three sectors tagged defensive in the sector CSV, otherwise the
// first three tagged cyclical. Hedge prompts are answered from a fixed
// complement table.
class MockProvider : public AdvisorProvider {
public:
    MockProvider(market::SectorMap sectors,
                 std::map<std::string, std::vector<std::string>> hedge_table = {});

    std::string complete(const std::string& prompt) override;

    // Complement table derived from style tags: each sector is hedged by the
    // first opposite-style sector in taxonomy order.
    static std::map<std::string, std::vector<std::string>>
    default_hedge_table(const market::SectorMap& sectors);

private:
    market::SectorMap sectors_;
    std::map<std::string, std::vector<std::string>> hedge_table_;
};

// Thin HTTP adapter: POSTs {"prompt": ...} to the configured endpoint and
// expects {"text": ...} (falls back to the raw body). Never used in tests.
class HttpProvider : public AdvisorProvider {
public:
    HttpProvider(std::string endpoint, std::string api_key);
    std::string complete(const std::string& prompt) override;

private:
    std::string endpoint_;
    std::string api_key_;
};

// HttpProvider when NRL_LLM_ENDPOINT is set, MockProvider otherwise.
std::unique_ptr<AdvisorProvider> make_provider_from_env(const market::SectorMap& sectors);

} // namespace nrl::llm
