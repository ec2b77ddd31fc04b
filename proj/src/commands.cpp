// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/commands.hpp"

#include "hdlgen/comb.hpp"
#include "hdlgen/config.hpp"
#include "hdlgen/dataset.hpp"
#include "hdlgen/errors.hpp"
#include "hdlgen/eval.hpp"
#include "hdlgen/report.hpp"
#include "hdlgen/search.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace hdlgen {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string read_text(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw InfrastructureError("cannot write " + path.string());
}

json read_json(const fs::path &path)
{
    auto doc = json::parse(read_text(path), nullptr, false);
    if (doc.is_discarded())
        throw InputError(path.string() + " is not valid JSON");
    return doc;
}

/// Hands out one backend per task: per-task scripts, or one shared backend.
class BackendPool {
public:
    BackendPool(const BackendSettings &settings)
    {
        if (settings.kind == BackendKind::Remote) {
            const char *key = std::getenv(settings.api_key_env.c_str());
            if (!key || !*key)
                throw InputError("environment variable " + settings.api_key_env + " is not set");
            RemoteConfig remote = settings.remote;
            remote.api_key = key;
            shared_ = std::make_unique<RemoteBackend>(std::move(remote));
            return;
        }
        script_ = load_script(settings.script);
        if (!script_.keyed_by_task)
            shared_ = std::make_unique<ScriptedBackend>(script_.shared);
    }

    /// Single-consumer scripts cannot be shared by concurrent workers.
    bool shared_script() const { return !script_.keyed_by_task && !remote(); }
    bool remote() const { return dynamic_cast<RemoteBackend *>(shared_.get()) != nullptr; }

    Backend &for_task(const std::string &id)
    {
        if (shared_)
            return *shared_;
        std::lock_guard lock(mutex_);
        auto it = script_.per_task.find(id);
        auto entries = it == script_.per_task.end() ? std::vector<ScriptEntry>{} : it->second;
        return *per_task_.emplace(id, std::make_unique<ScriptedBackend>(std::move(entries))).first->second;
    }

private:
    ScriptFile script_;
    std::unique_ptr<Backend> shared_;
    std::mutex mutex_;
    std::map<std::string, std::unique_ptr<Backend>> per_task_;
};

std::unique_ptr<Simulator> make_simulator(const SimSettings &settings, const fs::path &out_dir)
{
    if (settings.kind == SimulatorKind::Mock)
        return std::make_unique<MockSimulator>(load_mock_simulator(settings.mock));
    IverilogConfig cfg = settings.iverilog;
    cfg.scratch_root = out_dir / "scratch";
    return std::make_unique<IverilogSimulator>(std::move(cfg));
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void print_histogram(std::ostream &out, const std::array<int, kHistogramBuckets> &h)
{
    static const char *labels[] = {"[0.0, 0.2)", "[0.2, 0.4)", "[0.4, 0.6)", "[0.6, 0.8)", "[0.8, 1.0]"};
    out << "error-rate histogram:\n";
    for (int b = 0; b < kHistogramBuckets; ++b)
        out << "  " << labels[b] << ": " << h[static_cast<std::size_t>(b)] << "\n";
}

} // namespace

int cmd_run(const fs::path &dataset, const fs::path &config, const fs::path &out_dir, std::ostream &out, std::ostream &err)
{
    RunConfig cfg;
    std::vector<Task> tasks;
    PromptLibrary prompts;
    std::unique_ptr<BackendPool> backends;
    try {
        cfg = load_config(config);
        tasks = filter_tasks(load_dataset(dataset), cfg.run.tasks);
        if (cfg.backend.prompt_dir)
            prompts.load_overrides(*cfg.backend.prompt_dir);
        backends = std::make_unique<BackendPool>(cfg.backend);
    } catch (const InputError &e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    std::unique_ptr<Simulator> simulator;
    try {
        fs::create_directories(out_dir);
        simulator = make_simulator(cfg.sim, out_dir);
    } catch (const InputError &e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }

    const bool baseline = cfg.run.method == Method::Baseline;
    const int budget = baseline ? cfg.run.baseline_executions : cfg.search.total_budget();
    int workers = std::min<int>(cfg.run.workers, static_cast<int>(tasks.size()));
    if (backends->shared_script())
        workers = 1;

    Classifier classifier;
    std::vector<TaskResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex fatal_mutex;
    std::optional<std::string> fatal;

    auto work = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size())
                return;
            {
                std::lock_guard lock(fatal_mutex);
                if (fatal)
                    return;
            }
            const Task &task = tasks[i];
            TaskResult &r = results[i];
            r.task_id = task.id;
            r.budget = budget;
            try {
                LlmSession session(backends->for_task(task.id), prompts, cfg.backend.generation);
                if (baseline) {
                    r.state = run_baseline(task, budget, session, *simulator, cfg.search.stop_on_pass);
                } else {
                    LlmProcedures procedures(session, &classifier);
                    r.state = run_task(task, cfg.search, procedures, *simulator);
                }
            } catch (const InfrastructureError &e) {
                std::lock_guard lock(fatal_mutex);
                if (!fatal)
                    fatal = "task " + task.id + ": " + e.what();
            } catch (const std::exception &e) {
                r.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    for (auto &t : pool)
        t.join();

    if (fatal) {
        err << "error: " << *fatal << "\n";
        return kExitRuntime;
    }

    json settings = search_config_json(cfg.search);
    settings["seed"] = cfg.run.seed;
    if (baseline)
        settings["baseline_executions"] = cfg.run.baseline_executions;
    json report = build_report(results, baseline ? "baseline" : "pipeline", settings);
    try {
        write_text(out_dir / "report.json", report.dump(2) + "\n");
        write_text(out_dir / "samples.jsonl", samples_jsonl(results));
    } catch (const InfrastructureError &e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }

    bool any_failed = false;
    for (const auto &r : results) {
        auto s = summarize(r);
        if (r.error) {
            any_failed = true;
            out << r.task_id << ": error: " << *r.error << "\n";
        } else {
            out << r.task_id << ": " << s.c << "/" << s.n << " passing samples\n";
        }
    }
    for (const char *k : {"1", "5", "10"}) {
        const auto &v = report["aggregate"]["pass_at_k"][k];
        out << "pass@" << k << ": " << (v.is_null() ? std::string("n/a") : format_double(v.get<double>())) << "\n";
    }
    out << "report: " << (out_dir / "report.json").string() << "\n";
    return any_failed ? kExitRuntime : kExitOk;
}

int cmd_filter_hard(
    const fs::path &baseline_report,
    const std::optional<fs::path> &dataset,
    int required_samples,
    std::ostream &out,
    std::ostream &err)
{
    try {
        auto tasks = parse_report(read_json(baseline_report));
        std::optional<std::set<std::string>> known;
        if (dataset) {
            known.emplace();
            for (const auto &t : load_dataset(*dataset))
                known->insert(t.id);
        }
        for (const auto &t : tasks) {
            if (known && !known->count(t.task_id)) {
                err << "warning: " << t.task_id << " is not in the dataset; skipped\n";
                continue;
            }
            if (t.failed || t.n < required_samples) {
                err << "warning: " << t.task_id << " has " << t.n << " samples (needs " << required_samples
                    << "); skipped\n";
                continue;
            }
            if (t.c == 0)
                out << t.task_id << "\n";
        }
        return kExitOk;
    } catch (const InputError &e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

int cmd_minimize(
    const fs::path &table_file,
    const std::optional<fs::path> &header_file,
    const std::string &module_name,
    std::ostream &out,
    std::ostream &err)
{
    TruthTable table;
    std::string header;
    try {
        table = parse_truth_table(read_json(table_file));
        header = header_file ? read_text(*header_file) : synthesize_header(table, module_name);
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    std::vector<SopExpression> exprs;
    try {
        for (const auto &o : table.outputs)
            exprs.push_back(minimize(table, o));
    } catch (const ContractViolation &e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    std::size_t care_points = 0;
    for (const auto &row : table.rows) {
        std::map<std::string, bool> assignment;
        for (std::size_t i = 0; i < table.inputs.size(); ++i)
            assignment[table.inputs[i]] = row[i] == Cell::One;
        for (std::size_t o = 0; o < table.outputs.size(); ++o) {
            Cell want = row[table.inputs.size() + o];
            if (want == Cell::DontCare)
                continue;
            ++care_points;
            if (evaluate_sop(exprs[o], assignment) != (want == Cell::One)) {
                err << "error: minimized " << table.outputs[o] << " disagrees with the table\n";
                return kExitRuntime;
            }
        }
    }

    for (const auto &e : exprs)
        out << e.to_string() << "\n";
    out << "// checked against " << care_points << " care points\n";
    try {
        out << emit_verilog(header, exprs);
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}

int cmd_passk(const fs::path &report_file, const std::vector<int> &ks, std::ostream &out, std::ostream &err)
{
    std::vector<TaskSummary> tasks;
    try {
        for (auto &t : parse_report(read_json(report_file))) {
            if (t.failed || t.n == 0) {
                err << "warning: " << t.task_id << " has no executed samples; excluded\n";
                continue;
            }
            tasks.push_back(std::move(t));
        }
        if (tasks.empty())
            throw InputError("report has no tasks with executed samples");
    } catch (const InputError &e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    std::vector<TaskCounts> counts;
    std::vector<Rational> rates;
    for (const auto &t : tasks) {
        counts.push_back({t.n, t.c});
        rates.push_back(t.best_error_rate);
    }
    for (int k : ks) {
        for (const auto &t : tasks)
            if (k < 1 || k > t.n) {
                err << "error: k=" << k << " is out of range for task '" << t.task_id << "' with n=" << t.n << "\n";
                return kExitInput;
            }
        out << "pass@" << k << ": " << format_double(aggregate_pass_at_k(counts, k)) << " ("
            << aggregate_pass_at_k_exact(counts, k).to_string() << ")\n";
    }
    print_histogram(out, error_rate_histogram(rates));
    return kExitOk;
}

int cmd_dump_prompts(const fs::path &dir, std::ostream &out, std::ostream &err)
{
    try {
        fs::create_directories(dir);
        for (const auto &[name, body] : PromptLibrary::defaults()) {
            write_text(dir / (name + ".txt"), body);
            out << (dir / (name + ".txt")).string() << "\n";
        }
        return kExitOk;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace hdlgen
