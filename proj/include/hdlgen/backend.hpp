// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace hdlgen {

enum class Role { System, User, Assistant };

struct Message {
    Role role = Role::User;
    std::string content;
};

struct GenerationRequest {
    std::vector<Message> messages;
    double temperature = 0.5;
    std::size_t max_context_tokens = 4096;

    /// Throws ContractViolation without a user message or with negative temperature.
    void validate() const;
};

/// chars / 4, rounded up, summed over all messages.
std::size_t estimate_tokens(const GenerationRequest &request);

/// Throws ContextOverflow when the prompt estimate exceeds the context limit.
void check_context(const GenerationRequest &request);

class Backend {
public:
    virtual ~Backend() = default;

    /// Returns the assistant reply text.
    virtual std::string complete(const GenerationRequest &request) = 0;
};

struct ScriptEntry {
    std::string response;
    /// When set, the last user message must contain this substring.
    std::optional<std::string> expect;
};

/// Replays a fixed list of responses in order.
class ScriptedBackend : public Backend {
public:
    explicit ScriptedBackend(std::vector<ScriptEntry> entries);
    explicit ScriptedBackend(const std::vector<std::string> &responses);

    std::string complete(const GenerationRequest &request) override;

    std::size_t cursor() const { return cursor_; }
    std::size_t size() const { return entries_.size(); }
    /// Prompts seen so far, in call order.
    const std::vector<std::string> &prompts() const { return prompts_; }

private:
    std::vector<ScriptEntry> entries_;
    std::size_t cursor_ = 0;
    std::vector<std::string> prompts_;
};

/// Script file contents: either one shared script or one script per task id.
struct ScriptFile {
    std::vector<ScriptEntry> shared;
    std::map<std::string, std::vector<ScriptEntry>> per_task;
    bool keyed_by_task = false;
};

/// Accepts `[...]` or `{"tasks": {"id": [...]}}`; entries are strings or
/// `{"response": ..., "expect": ...}` objects. Throws InputError.
ScriptFile parse_script(const nlohmann::json &doc);
ScriptFile load_script(const std::filesystem::path &path);

struct HttpResponse {
    int status = 0;
    std::string body;
    /// Transport failure (connection refused, timeout, TLS); status is meaningless.
    std::optional<std::string> transport_error;
};

/// Minimal POST transport, swappable in tests.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse post(
        const std::string &path,
        const std::map<std::string, std::string> &headers,
        const std::string &body)
        = 0;
};

/// cpp-httplib transport bound to a scheme://host[:port] origin.
std::unique_ptr<HttpTransport> make_http_transport(const std::string &origin, std::chrono::seconds timeout);

struct RemoteConfig {
    std::string base_url = "https://api.openai.com/v1";
    std::string model = "gpt-4-0613";
    std::string api_key;
    int retries = 3;
    std::chrono::milliseconds initial_backoff{1000};
    double backoff_multiplier = 2.0;
    /// Requests per minute across all users of the backend; 0 disables limiting.
    int rate_limit_per_minute = 0;
    std::chrono::seconds request_timeout{120};
};

/// Spaces calls at least 60/rpm seconds apart.
class RateLimiter {
public:
    using Clock = std::chrono::steady_clock;
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    RateLimiter(int requests_per_minute, Sleeper sleeper);

    void acquire();

private:
    std::mutex mutex_;
    std::chrono::milliseconds interval_;
    std::optional<Clock::time_point> next_slot_;
    Sleeper sleep_;
};

/// Chat-completions request body for `request`.
nlohmann::json build_chat_body(const GenerationRequest &request, const std::string &model);

/// Client for chat-completions-compatible endpoints. Retries transport failures,
/// 429 and 5xx with exponential backoff; shareable between threads.
class RemoteBackend : public Backend {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    explicit RemoteBackend(RemoteConfig config);
    RemoteBackend(RemoteConfig config, std::unique_ptr<HttpTransport> transport, Sleeper sleeper);

    std::string complete(const GenerationRequest &request) override;

    const RemoteConfig &config() const { return config_; }

private:
    RemoteConfig config_;
    std::string path_prefix_;
    std::unique_ptr<HttpTransport> transport_;
    Sleeper sleep_;
    RateLimiter limiter_;
};

/// Splits "https://host:port/v1" into origin and path prefix.
std::pair<std::string, std::string> split_base_url(const std::string &base_url);

} // namespace hdlgen
