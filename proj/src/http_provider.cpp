#include "nrl/advisor.hpp"

#include "nrl/errors.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace nrl::llm {

HttpProvider::HttpProvider(std::string endpoint, std::string api_key)
    : endpoint_(std::move(endpoint)), api_key_(std::move(api_key)) {}

std::string HttpProvider::complete(const std::string& prompt) {
    // Split "http://host:port/path" into client base and path.
    std::string base = endpoint_;
    std::string path = "/";
    const size_t scheme = base.find("://");
    const size_t slash = base.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (slash != std::string::npos) {
        path = base.substr(slash);
        base = base.substr(0, slash);
    }

    httplib::Client client(base);
    client.set_read_timeout(60, 0);
    httplib::Headers headers;
    if (!api_key_.empty()) {
        headers.emplace("Authorization", "Bearer " + api_key_);
    }
    nlohmann::json body;
    body["prompt"] = prompt;
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res || res->status != 200) {
        throw Error("llm provider request failed" +
                    (res ? " (status " + std::to_string(res->status) + ")" : ""));
    }
    try {
        auto j = nlohmann::json::parse(res->body);
        if (j.contains("text")) {
            return j["text"].get<std::string>();
        }
        if (j.contains("completion")) {
            return j["completion"].get<std::string>();
        }
    } catch (const nlohmann::json::exception&) {
    }
    return res->body;
}

} // namespace nrl::llm
