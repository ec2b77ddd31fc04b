// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/report.hpp"

#include "hdlgen/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hdlgen {
using json = nlohmann::json;

namespace {

constexpr int kReportedK[] = {1, 5, 10};

json sample_json(const ExecutedSample &e)
{
    const auto &o = e.outcome;
    return json{
        {"iteration", e.sample.iteration},
        {"procedure", std::string(to_string(e.sample.procedure))},
        {"info_list_id", e.sample.info_list_id ? json(*e.sample.info_list_id) : json(nullptr)},
        {"status", std::string(to_string(o.status))},
        {"m", o.passed},
        {"n", o.total},
        {"p", o.pass_rate().to_string()},
        {"mode", std::string(to_string(e.mode))},
    };
}

std::vector<TaskSummary> ran(const std::vector<TaskSummary> &tasks)
{
    std::vector<TaskSummary> out;
    for (const auto &t : tasks)
        if (!t.failed && t.n > 0)
            out.push_back(t);
    return out;
}

} // namespace

TaskSummary summarize(const TaskResult &result)
{
    TaskSummary s;
    s.task_id = result.task_id;
    s.failed = result.error.has_value() || !result.state;
    if (result.state) {
        const auto &executed = result.state->executed;
        s.n = static_cast<int>(executed.size());
        s.c = static_cast<int>(std::count_if(executed.begin(), executed.end(), [](const ExecutedSample &e) {
            return e.outcome.status == TestStatus::Pass;
        }));
        s.best_error_rate = best_error_rate(executed);
    }
    return s;
}

std::optional<double> aggregate_if_defined(const std::vector<TaskSummary> &tasks, int k)
{
    std::vector<TaskCounts> counts;
    for (const auto &t : ran(tasks)) {
        if (t.n < k)
            return std::nullopt;
        counts.push_back({t.n, t.c});
    }
    if (counts.empty())
        return std::nullopt;
    return aggregate_pass_at_k(counts, k);
}

json build_report(const std::vector<TaskResult> &results, const std::string &method, const json &settings)
{
    json tasks = json::array();
    std::vector<TaskSummary> summaries;
    for (const auto &r : results) {
        TaskSummary s = summarize(r);
        summaries.push_back(s);
        json t{
            {"task_id", r.task_id},
            {"budget", r.budget},
            {"n", s.n},
            {"c", s.c},
            {"best_error_rate", s.best_error_rate.to_string()},
            {"error", r.error ? json(*r.error) : json(nullptr)},
        };
        if (r.state) {
            const auto &st = *r.state;
            t["circuit_kind"] = st.circuit_kind ? json(std::string(to_string(*st.circuit_kind))) : json(nullptr);
            t["solved"] = st.solved;
            t["abandoned"] = st.abandoned;
            t["format_errors"] = st.format_errors;
            t["reduced_n"] = s.n < r.budget;
            json samples = json::array();
            for (const auto &e : st.executed)
                samples.push_back(sample_json(e));
            t["samples"] = std::move(samples);
            json cluster = json::array();
            for (const auto &l : st.cluster) {
                json history = json::array();
                for (const auto &p : l.pass_rate_history)
                    history.push_back(p.to_string());
                cluster.push_back(json{
                    {"id", l.id},
                    {"origin_iteration", l.origin_iteration},
                    {"history", std::move(history)},
                    {"score", l.score().to_string()},
                });
            }
            t["cluster"] = std::move(cluster);
        }
        tasks.push_back(std::move(t));
    }

    json pass_at = json::object();
    std::vector<Rational> rates;
    for (const auto &s : ran(summaries))
        rates.push_back(s.best_error_rate);
    for (int k : kReportedK) {
        auto v = aggregate_if_defined(summaries, k);
        pass_at[std::to_string(k)] = v ? json(*v) : json(nullptr);
    }
    auto histogram = error_rate_histogram(rates);

    return json{
        {"schema_version", kReportSchemaVersion},
        {"method", method},
        {"settings", settings},
        {"tasks", std::move(tasks)},
        {"aggregate",
         {
             {"tasks", results.size()},
             {"tasks_failed", std::count_if(summaries.begin(), summaries.end(), [](const TaskSummary &s) { return s.failed; })},
             {"pass_at_k", std::move(pass_at)},
             {"histogram", histogram},
         }},
    };
}

std::string samples_jsonl(const std::vector<TaskResult> &results)
{
    std::string out;
    for (const auto &r : results) {
        if (!r.state)
            continue;
        for (const auto &e : r.state->executed) {
            json rec = sample_json(e);
            rec["task_id"] = r.task_id;
            rec["wall_ms"] = std::llround(e.wall_seconds * 1000.0);
            out += rec.dump() + "\n";
        }
    }
    return out;
}

std::vector<TaskSummary> parse_report(const json &doc)
{
    try {
        if (!doc.is_object() || !doc.contains("tasks") || !doc.at("tasks").is_array())
            throw InputError("report has no task array");
        if (doc.value("schema_version", 0) != kReportSchemaVersion)
            throw InputError("unsupported report schema_version");
        std::vector<TaskSummary> out;
        for (const auto &t : doc.at("tasks")) {
            TaskSummary s;
            s.task_id = t.at("task_id").get<std::string>();
            s.n = t.at("n").get<int>();
            s.c = t.at("c").get<int>();
            s.best_error_rate = Rational::parse(t.at("best_error_rate").get<std::string>());
            s.failed = t.contains("error") && !t.at("error").is_null();
            if (s.n < 0 || s.c < 0 || s.c > s.n)
                throw InputError("task '" + s.task_id + "' has inconsistent counts");
            out.push_back(std::move(s));
        }
        return out;
    } catch (const json::exception &e) {
        throw InputError(std::string("malformed report: ") + e.what());
    } catch (const ContractViolation &e) {
        throw InputError(std::string("malformed report: ") + e.what());
    }
}

} // namespace hdlgen
