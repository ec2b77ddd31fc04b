// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/prompts.hpp"

#include "hdlgen/errors.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace hdlgen {

// Generated at configure time from prompts/*.txt.
const std::map<std::string, std::string> &embedded_prompt_texts();

namespace {

/// Calls `visit(key, begin, end)` for each well-formed {{key}} in `body`.
template <typename Visit>
void scan_placeholders(const std::string &body, Visit visit)
{
    std::size_t pos = 0;
    while ((pos = body.find("{{", pos)) != std::string::npos) {
        auto close = body.find("}}", pos + 2);
        if (close == std::string::npos)
            return;
        std::string key = body.substr(pos + 2, close - pos - 2);
        bool ok = !key.empty();
        for (char c : key)
            ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
        if (ok) {
            visit(key, pos, close + 2);
            pos = close + 2;
        } else {
            pos += 2;
        }
    }
}

} // namespace

PromptTemplate::PromptTemplate(std::string name, std::string body)
    : name_(std::move(name))
    , body_(std::move(body))
{
    scan_placeholders(body_, [this](const std::string &key, std::size_t, std::size_t) { required_.insert(key); });
}

std::string PromptTemplate::render(const Bindings &bindings) const
{
    for (const auto &key : required_)
        if (!bindings.count(key))
            throw MissingPlaceholder(key);
    std::string out;
    std::size_t last = 0;
    scan_placeholders(body_, [&](const std::string &key, std::size_t begin, std::size_t end) {
        out.append(body_, last, begin - last);
        out += bindings.at(key);
        last = end;
    });
    out.append(body_, last, std::string::npos);
    return out;
}

std::string render(const PromptTemplate &tmpl, const Bindings &bindings)
{
    return tmpl.render(bindings);
}

PromptLibrary::PromptLibrary()
{
    for (const auto &[name, body] : defaults())
        set(name, body);
}

const std::map<std::string, std::string> &PromptLibrary::defaults()
{
    return embedded_prompt_texts();
}

void PromptLibrary::load_overrides(const std::filesystem::path &dir)
{
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec))
        throw InputError("prompt directory " + dir.string() + " does not exist");
    for (const auto &entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt")
            continue;
        std::ifstream in(entry.path());
        std::ostringstream body;
        body << in.rdbuf();
        set(entry.path().stem().string(), body.str());
    }
}

void PromptLibrary::set(std::string name, std::string body)
{
    PromptTemplate tmpl(name, std::move(body));
    templates_.insert_or_assign(std::move(name), std::move(tmpl));
}

const PromptTemplate &PromptLibrary::get(std::string_view name) const
{
    auto it = templates_.find(name);
    if (it == templates_.end())
        throw ContractViolation("no prompt template named '" + std::string(name) + "'");
    return it->second;
}

std::string LlmSession::ask(std::string_view template_name, const Bindings &bindings) const
{
    GenerationRequest request;
    request.messages.push_back({Role::User, prompts_->get(template_name).render(bindings)});
    request.temperature = settings_.temperature;
    request.max_context_tokens = settings_.max_context_tokens;
    return backend_->complete(request);
}

} // namespace hdlgen
