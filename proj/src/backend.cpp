// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "hdlgen/backend.hpp"

#include "hdlgen/errors.hpp"

#include <fstream>
#include <thread>

namespace hdlgen {
namespace {

using json = nlohmann::json;

std::string_view role_name(Role role)
{
    switch (role) {
    case Role::System:
        return "system";
    case Role::User:
        return "user";
    case Role::Assistant:
        return "assistant";
    }
    return "user";
}

void default_sleep(std::chrono::milliseconds d)
{
    std::this_thread::sleep_for(d);
}

std::vector<ScriptEntry> parse_entries(const json &array, const std::string &where)
{
    if (!array.is_array())
        throw InputError(where + ": expected an array of responses");
    std::vector<ScriptEntry> entries;
    for (std::size_t i = 0; i < array.size(); ++i) {
        const auto &item = array[i];
        if (item.is_string()) {
            entries.push_back({item.get<std::string>(), std::nullopt});
        } else if (item.is_object() && item.contains("response") && item["response"].is_string()) {
            ScriptEntry e{item["response"].get<std::string>(), std::nullopt};
            if (item.contains("expect")) {
                if (!item["expect"].is_string())
                    throw InputError(where + "[" + std::to_string(i) + "]: 'expect' must be a string");
                e.expect = item["expect"].get<std::string>();
            }
            entries.push_back(std::move(e));
        } else {
            throw InputError(where + "[" + std::to_string(i) + "]: expected a string or {\"response\": ...}");
        }
    }
    return entries;
}

class HttplibTransport : public HttpTransport {
public:
    HttplibTransport(const std::string &origin, std::chrono::seconds timeout)
        : client_(origin)
    {
        client_.set_connection_timeout(std::chrono::seconds(30));
        client_.set_read_timeout(timeout);
        client_.set_write_timeout(timeout);
    }

    HttpResponse post(
        const std::string &path, const std::map<std::string, std::string> &headers, const std::string &body) override
    {
        httplib::Headers h;
        for (const auto &[k, v] : headers)
            h.emplace(k, v);
        std::lock_guard lock(mutex_);
        auto res = client_.Post(path, h, body, "application/json");
        HttpResponse out;
        if (!res) {
            out.transport_error = httplib::to_string(res.error());
            return out;
        }
        out.status = res->status;
        out.body = res->body;
        return out;
    }

private:
    std::mutex mutex_;
    httplib::Client client_;
};

} // namespace

void GenerationRequest::validate() const
{
    bool has_user = false;
    for (const auto &m : messages)
        has_user = has_user || m.role == Role::User;
    if (!has_user)
        throw ContractViolation("generation request has no user message");
    if (temperature < 0)
        throw ContractViolation("temperature must be non-negative");
}

std::size_t estimate_tokens(const GenerationRequest &request)
{
    std::size_t total = 0;
    for (const auto &m : request.messages)
        total += (m.content.size() + 3) / 4;
    return total;
}

void check_context(const GenerationRequest &request)
{
    auto estimate = estimate_tokens(request);
    if (estimate > request.max_context_tokens)
        throw ContextOverflow(estimate, request.max_context_tokens);
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptEntry> entries)
    : entries_(std::move(entries))
{}

ScriptedBackend::ScriptedBackend(const std::vector<std::string> &responses)
{
    for (const auto &r : responses)
        entries_.push_back({r, std::nullopt});
}

std::string ScriptedBackend::complete(const GenerationRequest &request)
{
    request.validate();
    check_context(request);
    if (cursor_ >= entries_.size())
        throw ScriptExhausted("script exhausted after " + std::to_string(entries_.size()) + " responses");
    std::string prompt;
    for (auto it = request.messages.rbegin(); it != request.messages.rend(); ++it)
        if (it->role == Role::User) {
            prompt = it->content;
            break;
        }
    const auto &entry = entries_[cursor_];
    if (entry.expect && prompt.find(*entry.expect) == std::string::npos)
        throw ScriptMismatch(
            "script entry " + std::to_string(cursor_) + " expected a prompt containing '" + *entry.expect + "'");
    prompts_.push_back(std::move(prompt));
    ++cursor_;
    return entry.response;
}

ScriptFile parse_script(const json &doc)
{
    ScriptFile file;
    if (doc.is_array()) {
        file.shared = parse_entries(doc, "script");
        return file;
    }
    if (doc.is_object() && doc.contains("tasks") && doc["tasks"].is_object()) {
        file.keyed_by_task = true;
        for (const auto &[id, entries] : doc["tasks"].items())
            file.per_task[id] = parse_entries(entries, "tasks." + id);
        if (doc.contains("shared"))
            file.shared = parse_entries(doc["shared"], "shared");
        return file;
    }
    throw InputError("script: expected an array or an object with a 'tasks' map");
}

ScriptFile load_script(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open script file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw InputError("script file " + path.string() + ": " + e.what());
    }
    return parse_script(doc);
}

std::unique_ptr<HttpTransport> make_http_transport(const std::string &origin, std::chrono::seconds timeout)
{
    return std::make_unique<HttplibTransport>(origin, timeout);
}

RateLimiter::RateLimiter(int requests_per_minute, Sleeper sleeper)
    : interval_(requests_per_minute > 0 ? std::chrono::milliseconds(60'000 / requests_per_minute)
                                        : std::chrono::milliseconds(0))
    , sleep_(std::move(sleeper))
{}

void RateLimiter::acquire()
{
    if (interval_.count() == 0)
        return;
    std::chrono::milliseconds wait{0};
    {
        std::lock_guard lock(mutex_);
        auto now = Clock::now();
        auto slot = next_slot_ && *next_slot_ > now ? *next_slot_ : now;
        wait = std::chrono::duration_cast<std::chrono::milliseconds>(slot - now);
        next_slot_ = slot + interval_;
    }
    if (wait.count() > 0)
        sleep_(wait);
}

json build_chat_body(const GenerationRequest &request, const std::string &model)
{
    json messages = json::array();
    for (const auto &m : request.messages)
        messages.push_back({{"role", role_name(m.role)}, {"content", m.content}});
    auto prompt_tokens = estimate_tokens(request);
    auto completion_budget =
        request.max_context_tokens > prompt_tokens ? request.max_context_tokens - prompt_tokens : 0;
    return json{
        {"model", model},
        {"messages", std::move(messages)},
        {"temperature", request.temperature},
        {"max_tokens", completion_budget},
    };
}

std::pair<std::string, std::string> split_base_url(const std::string &base_url)
{
    auto scheme = base_url.find("://");
    std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
    auto slash = base_url.find('/', host_start);
    if (slash == std::string::npos)
        return {base_url, ""};
    std::string prefix = base_url.substr(slash);
    while (!prefix.empty() && prefix.back() == '/')
        prefix.pop_back();
    return {base_url.substr(0, slash), prefix};
}

RemoteBackend::RemoteBackend(RemoteConfig config)
    : RemoteBackend(
          config,
          make_http_transport(split_base_url(config.base_url).first, config.request_timeout),
          default_sleep)
{}

RemoteBackend::RemoteBackend(RemoteConfig config, std::unique_ptr<HttpTransport> transport, Sleeper sleeper)
    : config_(std::move(config))
    , path_prefix_(split_base_url(config_.base_url).second)
    , transport_(std::move(transport))
    , sleep_(sleeper ? std::move(sleeper) : Sleeper(default_sleep))
    , limiter_(config_.rate_limit_per_minute, sleep_)
{}

std::string RemoteBackend::complete(const GenerationRequest &request)
{
    request.validate();
    check_context(request);

    const std::string body = build_chat_body(request, config_.model).dump();
    std::map<std::string, std::string> headers;
    if (!config_.api_key.empty())
        headers["Authorization"] = "Bearer " + config_.api_key;

    auto backoff = config_.initial_backoff;
    std::string last_error;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        if (attempt > 0) {
            sleep_(backoff);
            backoff = std::chrono::milliseconds(
                static_cast<long>(static_cast<double>(backoff.count()) * config_.backoff_multiplier));
        }
        limiter_.acquire();
        auto res = transport_->post(path_prefix_ + "/chat/completions", headers, body);
        if (res.transport_error) {
            last_error = "transport error: " + *res.transport_error;
            continue;
        }
        if (res.status == 429 || res.status >= 500) {
            last_error = "HTTP " + std::to_string(res.status);
            continue;
        }
        if (res.status != 200)
            throw RemoteError("HTTP " + std::to_string(res.status) + ": " + res.body.substr(0, 500), res.status);
        try {
            auto doc = json::parse(res.body);
            const auto &content = doc.at("choices").at(0).at("message").at("content");
            if (content.is_null())
                return {};
            return content.get<std::string>();
        } catch (const json::exception &e) {
            throw RemoteError(std::string("malformed completion response: ") + e.what(), res.status);
        }
    }
    throw RemoteError(
        "giving up after " + std::to_string(config_.retries + 1) + " attempts: " + last_error);
}

} // namespace hdlgen
