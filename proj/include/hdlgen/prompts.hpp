// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include "hdlgen/backend.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace hdlgen {

using Bindings = std::map<std::string, std::string>;

/// Prompt text with `{{name}}` placeholders.
class PromptTemplate {
public:
    PromptTemplate(std::string name, std::string body);

    const std::string &name() const { return name_; }
    const std::string &body() const { return body_; }
    const std::set<std::string> &required_placeholders() const { return required_; }

    /// Substitutes every placeholder in one pass. Throws MissingPlaceholder.
    std::string render(const Bindings &bindings) const;

private:
    std::string name_;
    std::string body_;
    std::set<std::string> required_;
};

std::string render(const PromptTemplate &tmpl, const Bindings &bindings);

/// Named templates; starts from the built-in defaults (the files under prompts/).
class PromptLibrary {
public:
    PromptLibrary();

    static const std::map<std::string, std::string> &defaults();

    /// Replaces templates with any `<name>.txt` found in `dir`.
    void load_overrides(const std::filesystem::path &dir);
    void set(std::string name, std::string body);

    /// Throws ContractViolation for an unknown name.
    const PromptTemplate &get(std::string_view name) const;

private:
    std::map<std::string, PromptTemplate, std::less<>> templates_;
};

struct GenerationSettings {
    double temperature = 0.5;
    std::size_t max_context_tokens = 4096;
};

/// Backend + prompts + sampling settings: everything a procedure needs to ask a question.
class LlmSession {
public:
    LlmSession(Backend &backend, const PromptLibrary &prompts, GenerationSettings settings = {})
        : backend_(&backend)
        , prompts_(&prompts)
        , settings_(settings)
    {}

    /// Renders `template_name` and sends it as a fresh single-message conversation.
    std::string ask(std::string_view template_name, const Bindings &bindings) const;

    Backend &backend() const { return *backend_; }
    const PromptLibrary &prompts() const { return *prompts_; }
    const GenerationSettings &settings() const { return settings_; }

private:
    Backend *backend_;
    const PromptLibrary *prompts_;
    GenerationSettings settings_;
};

} // namespace hdlgen
