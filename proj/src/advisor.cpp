#include "nrl/advisor.hpp"

#include "nrl/csv.hpp"
#include "nrl/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace nrl::llm {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string replace_all(std::string text, const std::string& key, const std::string& value) {
    size_t pos = 0;
    while ((pos = text.find(key, pos)) != std::string::npos) {
        text.replace(pos, key.size(), value);
        pos += value.size();
    }
    return text;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += parts[i];
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open prompt template '" + path + "'");
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

constexpr const char* kHedgeMarker = "Sector to hedge:";

} // namespace

PromptTemplates default_templates() {
    PromptTemplates t;
    t.cluster =
        "You are advising a long-only sector-rotation portfolio.\n"
        "\n"
        "Sentiment series (date,value):\n"
        "{{series}}\n"
        "\n"
        "Allowed sectors: {{sectors}}\n"
        "\n"
        "Considering the sentiment trend above, pick the three most promising\n"
        "sectors for the coming rebalancing period. Answer with exactly three\n"
        "sector names from the allowed list, comma-separated, and nothing else.\n";
    t.hedge =
        "You are advising a long-only sector-rotation portfolio.\n"
        "\n"
        "Sector to hedge: {{sector}}\n"
        "\n"
        "Allowed sectors: {{sectors}}\n"
        "\n"
        "Suggest one or two complementary hedge sectors from the allowed list\n"
        "whose returns are least correlated with the sector above. Answer with\n"
        "the sector names only, comma-separated.\n";
    return t;
}

PromptTemplates load_templates(const std::string& dir) {
    PromptTemplates t;
    t.cluster = read_text_file(dir + "/cluster.txt");
    t.hedge = read_text_file(dir + "/hedge.txt");
    return t;
}

std::string build_cluster_prompt(const market::SentimentSeries& trailing,
                                 const std::vector<std::string>& taxonomy,
                                 const PromptTemplates& templates) {
    if (trailing.dates.size() < 200) {
        throw ValidationError("cluster prompt needs >= 200 trading days of sentiment, got " +
                              std::to_string(trailing.dates.size()));
    }
    std::string series;
    for (size_t i = 0; i < trailing.dates.size(); ++i) {
        series += format_date(trailing.dates[i]);
        series.push_back(',');
        series += csv::format_double(trailing.values[i]);
        if (i + 1 < trailing.dates.size()) {
            series.push_back('\n');
        }
    }
    std::string prompt = replace_all(templates.cluster, "{{series}}", series);
    prompt = replace_all(prompt, "{{sectors}}", join(taxonomy, ", "));
    return prompt;
}

std::string build_hedge_prompt(const std::string& sector,
                               const std::vector<std::string>& taxonomy,
                               const PromptTemplates& templates) {
    std::string prompt = replace_all(templates.hedge, "{{sector}}", sector);
    prompt = replace_all(prompt, "{{sectors}}", join(taxonomy, ", "));
    return prompt;
}

std::vector<std::string> parse_sectors(const std::string& response,
                                       const std::vector<std::string>& taxonomy) {
    const std::string haystack = lower(response);
    std::vector<std::pair<size_t, std::string>> found;
    for (const auto& sector : taxonomy) {
        const size_t pos = haystack.find(lower(sector));
        if (pos != std::string::npos) {
            found.emplace_back(pos, sector);
        }
    }
    std::stable_sort(found.begin(), found.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::string> out;
    out.reserve(found.size());
    for (auto& [pos, sector] : found) {
        out.push_back(std::move(sector));
    }
    return out;
}

ClusterRecommendation recommend_clusters(AdvisorProvider& provider,
                                         const market::SentimentSeries& trailing,
                                         const std::vector<std::string>& taxonomy,
                                         const PromptTemplates& templates, int n_votes) {
    const std::string prompt = build_cluster_prompt(trailing, taxonomy, templates);
    ClusterRecommendation rec;
    for (int vote = 0; vote < n_votes; ++vote) {
        std::string response;
        bool ok = false;
        for (int attempt = 0; attempt < 2 && !ok; ++attempt) {
            try {
                response = provider.complete(prompt);
                ok = true;
            } catch (const std::exception&) {
            }
        }
        if (!ok) {
            continue; // vote dropped after one retry
        }
        rec.raw_responses.push_back(response);
        for (const auto& sector : parse_sectors(response, taxonomy)) {
            rec.votes[sector] += 1;
        }
    }
    if (rec.votes.empty()) {
        rec.fallback_all = true;
        return rec;
    }

    std::vector<std::string> ranked;
    ranked.reserve(rec.votes.size());
    for (const auto& [sector, count] : rec.votes) {
        ranked.push_back(sector);
    }
    auto taxonomy_pos = [&taxonomy](const std::string& s) {
        return static_cast<size_t>(std::find(taxonomy.begin(), taxonomy.end(), s) -
                                   taxonomy.begin());
    };
    std::sort(ranked.begin(), ranked.end(), [&](const std::string& a, const std::string& b) {
        const int ca = rec.votes.at(a), cb = rec.votes.at(b);
        if (ca != cb) {
            return ca > cb;
        }
        return taxonomy_pos(a) < taxonomy_pos(b);
    });
    for (const auto& s : ranked) {
        if (rec.sectors.size() == 3) {
            break;
        }
        rec.sectors.push_back(s);
    }
    // Fewer than three distinct sectors voted: pad in taxonomy order so the
    // recommendation is always a three-sector cluster.
    for (const auto& s : taxonomy) {
        if (rec.sectors.size() == 3) {
            break;
        }
        if (std::find(rec.sectors.begin(), rec.sectors.end(), s) == rec.sectors.end()) {
            rec.sectors.push_back(s);
        }
    }
    return rec;
}

HedgeRecommendation recommend_hedges(AdvisorProvider& provider,
                                     const std::vector<std::string>& selected,
                                     const std::vector<std::string>& taxonomy,
                                     const PromptTemplates& templates) {
    if (selected.empty()) {
        throw ValidationError("recommend_hedges: no selected sectors");
    }
    HedgeRecommendation rec;
    for (const auto& sector : selected) {
        std::string response;
        try {
            response = provider.complete(build_hedge_prompt(sector, taxonomy, templates));
        } catch (const std::exception&) {
            rec.unhedged.push_back(sector);
            continue;
        }
        rec.raw_responses[sector] = response;
        std::vector<std::string> hedges;
        for (const auto& h : parse_sectors(response, taxonomy)) {
            if (h == sector) {
                continue; // a sector never hedges itself
            }
            if (std::find(selected.begin(), selected.end(), h) != selected.end()) {
                continue; // already in the cluster; adds no diversification
            }
            hedges.push_back(h);
        }
        if (hedges.empty()) {
            rec.unhedged.push_back(sector);
        } else {
            rec.hedges[sector] = std::move(hedges);
        }
    }
    return rec;
}

MockProvider::MockProvider(market::SectorMap sectors,
                           std::map<std::string, std::vector<std::string>> hedge_table)
    : sectors_(std::move(sectors)), hedge_table_(std::move(hedge_table)) {
    if (hedge_table_.empty()) {
        hedge_table_ = default_hedge_table(sectors_);
    }
}

std::map<std::string, std::vector<std::string>>
MockProvider::default_hedge_table(const market::SectorMap& sectors) {
    std::map<std::string, std::vector<std::string>> table;
    for (const auto& sector : sectors.taxonomy) {
        const std::string style = sectors.style_of(sector).value_or("");
        const std::string want = style == "cyclical" ? "defensive" : "cyclical";
        std::string fallback;
        for (const auto& candidate : sectors.taxonomy) {
            if (candidate == sector) {
                continue;
            }
            if (fallback.empty()) {
                fallback = candidate;
            }
            if (sectors.style_of(candidate).value_or("") == want) {
                table[sector] = {candidate};
                break;
            }
        }
        if (table.count(sector) == 0 && !fallback.empty()) {
            table[sector] = {fallback};
        }
    }
    return table;
}

std::string MockProvider::complete(const std::string& prompt) {
    const size_t marker = prompt.find(kHedgeMarker);
    if (marker != std::string::npos) {
        size_t start = marker + std::string(kHedgeMarker).size();
        size_t end = prompt.find('\n', start);
        if (end == std::string::npos) {
            end = prompt.size();
        }
        std::string sector = prompt.substr(start, end - start);
        sector.erase(0, sector.find_first_not_of(" \t"));
        sector.erase(sector.find_last_not_of(" \t\r") + 1);
        const auto it = hedge_table_.find(sector);
        if (it == hedge_table_.end()) {
            return "";
        }
        std::string out;
        for (size_t i = 0; i < it->second.size(); ++i) {
            if (i > 0) {
                out += ", ";
            }
            out += it->second[i];
        }
        return out;
    }

    // Cluster prompt: average the embedded `date,value` series lines.
    double sum = 0.0;
    size_t count = 0;
    std::istringstream lines(prompt);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.size() < 12 || line[4] != '-' || line[7] != '-' || line[10] != ',') {
            continue;
        }
        try {
            parse_date(line.substr(0, 10));
        } catch (const ParseError&) {
            continue;
        }
        try {
            sum += std::stod(line.substr(11));
            ++count;
        } catch (const std::exception&) {
        }
    }
    const double mean = count > 0 ? sum / static_cast<double>(count) : 50.0;
    const std::string want = mean < 40.0 ? "defensive" : "cyclical";

    std::vector<std::string> picks;
    for (const auto& sector : sectors_.taxonomy) {
        if (picks.size() == 3) {
            break;
        }
        if (sectors_.style_of(sector).value_or("") == want) {
            picks.push_back(sector);
        }
    }
    for (const auto& sector : sectors_.taxonomy) {
        if (picks.size() == 3) {
            break;
        }
        if (std::find(picks.begin(), picks.end(), sector) == picks.end()) {
            picks.push_back(sector);
        }
    }
    std::string out;
    for (size_t i = 0; i < picks.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += picks[i];
    }
    return out;
}

std::unique_ptr<AdvisorProvider> make_provider_from_env(const market::SectorMap& sectors) {
    const char* endpoint = std::getenv("NRL_LLM_ENDPOINT");
    if (endpoint != nullptr && *endpoint != '\0') {
        const char* key = std::getenv("NRL_LLM_API_KEY");
        return std::make_unique<HttpProvider>(endpoint, key ? key : "");
    }
    return std::make_unique<MockProvider>(sectors);
}

} // namespace nrl::llm
