// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/config.hpp"

#include "hdlgen/errors.hpp"

#include <fstream>

namespace hdlgen {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path resolve(const fs::path &base, const std::string &p)
{
    fs::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

template <typename T>
void read(const json &section, const char *key, T &out)
{
    if (section.contains(key) && !section.at(key).is_null())
        out = section.at(key).get<T>();
}

Rational read_rational(const json &v)
{
    if (v.is_string())
        return Rational::parse(v.get<std::string>());
    if (v.is_number_integer())
        return Rational(v.get<std::int64_t>());
    if (v.is_number())
        return Rational::from_double(v.get<double>());
    throw InputError("expected a number or \"m/n\" fraction");
}

const json &section(const json &doc, const char *name)
{
    static const json empty = json::object();
    if (!doc.contains(name))
        return empty;
    if (!doc.at(name).is_object())
        throw InputError(std::string("config section '") + name + "' must be an object");
    return doc.at(name);
}

} // namespace

RunConfig parse_config(const json &doc, const fs::path &base_dir)
{
    if (!doc.is_object())
        throw InputError("config must be a JSON object");
    RunConfig cfg;
    try {
        const auto &b = section(doc, "backend");
        std::string kind = "scripted";
        read(b, "kind", kind);
        if (kind == "scripted")
            cfg.backend.kind = BackendKind::Scripted;
        else if (kind == "remote")
            cfg.backend.kind = BackendKind::Remote;
        else
            throw InputError("backend.kind must be 'scripted' or 'remote'");
        if (b.contains("script"))
            cfg.backend.script = resolve(base_dir, b.at("script").get<std::string>());
        if (b.contains("prompt_dir"))
            cfg.backend.prompt_dir = resolve(base_dir, b.at("prompt_dir").get<std::string>());
        read(b, "base_url", cfg.backend.remote.base_url);
        read(b, "model", cfg.backend.remote.model);
        read(b, "api_key_env", cfg.backend.api_key_env);
        read(b, "temperature", cfg.backend.generation.temperature);
        read(b, "max_context", cfg.backend.generation.max_context_tokens);
        read(b, "retries", cfg.backend.remote.retries);
        read(b, "rate_limit", cfg.backend.remote.rate_limit_per_minute);
        int request_timeout = static_cast<int>(cfg.backend.remote.request_timeout.count());
        read(b, "request_timeout_s", request_timeout);
        cfg.backend.remote.request_timeout = std::chrono::seconds(request_timeout);
        if (cfg.backend.kind == BackendKind::Scripted && cfg.backend.script.empty())
            throw InputError("backend.script is required for the scripted backend");

        const auto &s = section(doc, "search");
        read(s, "N_s", cfg.search.samples_per_iteration);
        if (s.contains("C_s")) {
            const auto &cs = s.at("C_s");
            if (!cs.is_array())
                throw InputError("search.C_s must be an array");
            cfg.search.top_candidates.clear();
            for (std::size_t i = 0; i < cs.size(); ++i)
                cfg.search.top_candidates.push_back(cs[i].is_null() ? 1 : cs[i].get<int>());
        } else {
            cfg.search.top_candidates.assign(cfg.search.samples_per_iteration.size(), 1);
            for (std::size_t i = 1; i + 1 < cfg.search.samples_per_iteration.size(); ++i)
                cfg.search.top_candidates[i] = cfg.search.samples_per_iteration[i];
        }
        if (s.contains("W"))
            cfg.search.shortcut_threshold = read_rational(s.at("W"));
        read(s, "E_f", cfg.search.max_format_errors);
        read(s, "stop_on_pass", cfg.search.stop_on_pass);
        read(s, "failsafe_format_error_limit", cfg.search.failsafe_format_error_limit);
        cfg.search.validate();

        const auto &m = section(doc, "sim");
        std::string sim_kind = "iverilog";
        read(m, "kind", sim_kind);
        if (sim_kind == "iverilog")
            cfg.sim.kind = SimulatorKind::Iverilog;
        else if (sim_kind == "mock")
            cfg.sim.kind = SimulatorKind::Mock;
        else
            throw InputError("sim.kind must be 'iverilog' or 'mock'");
        read(m, "path", cfg.sim.iverilog.compiler);
        read(m, "runtime", cfg.sim.iverilog.runtime);
        read(m, "flags", cfg.sim.iverilog.extra_flags);
        int timeout = static_cast<int>(cfg.sim.iverilog.timeout.count());
        read(m, "timeout_s", timeout);
        if (timeout < 1)
            throw InputError("sim.timeout_s must be positive");
        cfg.sim.iverilog.timeout = std::chrono::seconds(timeout);
        read(m, "protocol_patterns", cfg.sim.iverilog.protocol_patterns);
        if (m.contains("mock"))
            cfg.sim.mock = resolve(base_dir, m.at("mock").get<std::string>());
        if (cfg.sim.kind == SimulatorKind::Mock && cfg.sim.mock.empty())
            throw InputError("sim.mock is required for the mock simulator");

        const auto &r = section(doc, "run");
        read(r, "workers", cfg.run.workers);
        read(r, "seed", cfg.run.seed);
        std::string method = "pipeline";
        read(r, "method", method);
        if (method == "pipeline")
            cfg.run.method = Method::Pipeline;
        else if (method == "baseline")
            cfg.run.method = Method::Baseline;
        else
            throw InputError("run.method must be 'pipeline' or 'baseline'");
        read(r, "baseline_executions", cfg.run.baseline_executions);
        read(r, "tasks", cfg.run.tasks);
        if (cfg.run.workers < 1)
            throw InputError("run.workers must be at least 1");
        if (cfg.run.baseline_executions < 1)
            throw InputError("run.baseline_executions must be at least 1");
    } catch (const json::exception &e) {
        throw InputError(std::string("config: ") + e.what());
    } catch (const ContractViolation &e) {
        throw InputError(std::string("config: ") + e.what());
    }
    return cfg;
}

RunConfig load_config(const fs::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot read config " + path.string());
    auto doc = json::parse(in, nullptr, false);
    if (doc.is_discarded())
        throw InputError("config is not valid JSON: " + path.string());
    return parse_config(doc, path.parent_path());
}

json search_config_json(const BudgetConfig &config)
{
    return json{
        {"N_s", config.samples_per_iteration},
        {"C_s", config.top_candidates},
        {"W", config.shortcut_threshold.to_string()},
        {"E_f", config.max_format_errors},
        {"stop_on_pass", config.stop_on_pass},
    };
}

} // namespace hdlgen
