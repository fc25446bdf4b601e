#pragma once

#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "ragprobe/answerer.hpp"
#include "ragprobe/common.hpp"

namespace ragprobe {

/// Connection settings for an OpenAI-compatible chat-completions endpoint.
/// The API key resolves from the environment first (api_key_env, then
/// OPENAI_API_KEY) and the config value last; it is never logged.
struct EndpointConfig {
    std::string base_url = "http://localhost:11434/v1";
    std::string model = "qwen3:8b";
    std::string api_key;
    std::string api_key_env = "RAGPROBE_API_KEY";
    double temperature = 0.0;
    int timeout_s = 120;
    int max_attempts = 3;
    int backoff_ms = 250;  // doubled per retry
    int max_in_flight = 4;

    std::string resolved_api_key() const {
        if (const char* v = std::getenv(api_key_env.c_str()); v && *v) return v;
        if (const char* v = std::getenv("OPENAI_API_KEY"); v && *v) return v;
        return api_key;
    }
};

namespace detail {

struct SplitUrl {
    std::string origin;       // scheme://host[:port]
    std::string path_prefix;  // leading path, may be empty
};

inline SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("endpoint URL must start with http:// or https://: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, ""};
    std::string path = url.substr(path_start);
    while (!path.empty() && path.back() == '/') path.pop_back();
    return {url.substr(0, path_start), path};
}

inline bool retryable_status(int status) {
    return status == 429 || (status >= 500 && status < 600);
}

}  // namespace detail

/// POST the prompt to {base_url}/chat/completions at the configured
/// temperature and return the completion text. Transport failures and
/// 429/5xx replies are retried with exponential backoff up to max_attempts;
/// any other non-success status raises StatusError with a body excerpt.
inline std::string query_model(const EndpointConfig& cfg, const std::string& prompt) {
    const auto url = detail::split_url(cfg.base_url);
    std::string path = url.path_prefix;
    if (path.size() < 17 || path.substr(path.size() - 17) != "/chat/completions")
        path += "/chat/completions";

    nlohmann::json body;
    body["model"] = cfg.model;
    body["temperature"] = cfg.temperature;
    body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(cfg.backoff_ms << (attempt - 1)));
        }
        httplib::Client client(url.origin);
        client.set_connection_timeout(cfg.timeout_s, 0);
        client.set_read_timeout(cfg.timeout_s, 0);
        client.set_write_timeout(cfg.timeout_s, 0);
        httplib::Headers headers;
        if (const std::string key = cfg.resolved_api_key(); !key.empty())
            headers.emplace("Authorization", "Bearer " + key);

        auto res = client.Post(path, headers, payload, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 200 && res->status < 300) {
            const auto reply = nlohmann::json::parse(res->body, nullptr, false);
            if (reply.is_discarded() || !reply.contains("choices") ||
                reply["choices"].empty() ||
                !reply["choices"][0].contains("message") ||
                !reply["choices"][0]["message"].contains("content"))
                throw StatusError(res->status,
                                  "endpoint returned 2xx without choices[0].message.content: " +
                                      res->body.substr(0, 200));
            return reply["choices"][0]["message"]["content"].get<std::string>();
        }
        if (detail::retryable_status(res->status)) {
            last_error = "status " + std::to_string(res->status);
            continue;
        }
        throw StatusError(res->status, "endpoint returned status " +
                                           std::to_string(res->status) + ": " +
                                           res->body.substr(0, 200));
    }
    throw TransportError("endpoint unreachable after " + std::to_string(cfg.max_attempts) +
                         " attempts (" + last_error + ")");
}

/// Answerer backed by a live chat-completions endpoint.
class EndpointAnswerer : public Answerer {
public:
    explicit EndpointAnswerer(EndpointConfig cfg) : cfg_(std::move(cfg)) {}

    std::string model_name() const override { return cfg_.model; }

    std::string complete(const Example& /*example*/, const std::vector<Chunk>& /*provided*/,
                         bool /*zero_context*/, const std::string& prompt) override {
        return query_model(cfg_, prompt);
    }

    const EndpointConfig& config() const { return cfg_; }

private:
    EndpointConfig cfg_;
};

}  // namespace ragprobe
