// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/sim.hpp"

#include "hdlgen/errors.hpp"

#include <boost/regex.hpp>

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

namespace hdlgen {
namespace fs = std::filesystem;

namespace {

void write_file(const fs::path &path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw InfrastructureError("cannot write " + path.string());
}

std::string read_file(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Task ids become directory names; keep them to a safe alphabet.
std::string safe_component(std::string_view s)
{
    std::string out;
    for (char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
    if (out.empty() || out == "." || out == "..")
        out = "_" + out;
    return out;
}

TestOutcome parse_rule_outcome(const nlohmann::json &rule)
{
    if (rule.contains("status")) {
        auto status = rule.at("status").get<std::string>();
        if (status == "compile_error")
            return compile_error_outcome();
        if (status == "timeout")
            return timeout_outcome();
        if (status != "pass" && status != "partial_fail")
            throw InputError("unknown mock status '" + status + "'");
    }
    return make_outcome(rule.at("passed").get<int>(), rule.at("total").get<int>());
}

std::vector<MockRule> parse_rules(const nlohmann::json &arr)
{
    if (!arr.is_array())
        throw InputError("mock simulator rules must be an array");
    std::vector<MockRule> rules;
    for (const auto &r : arr) {
        try {
            rules.push_back({r.at("key").get<std::string>(), parse_rule_outcome(r)});
        } catch (const nlohmann::json::exception &e) {
            throw InputError(std::string("malformed mock rule: ") + e.what());
        } catch (const ContractViolation &e) {
            throw InputError(std::string("malformed mock rule: ") + e.what());
        }
    }
    return rules;
}

} // namespace

PassCountProtocol::PassCountProtocol()
    : PassCountProtocol(default_patterns())
{}

PassCountProtocol::PassCountProtocol(std::vector<std::string> patterns)
    : patterns_(std::move(patterns))
{
    for (const auto &p : patterns_) {
        try {
            boost::regex re(p);
            if (p.find("(?<mismatches>") == std::string::npos || p.find("(?<total>") == std::string::npos)
                throw InputError("protocol pattern needs named groups 'mismatches' and 'total': " + p);
        } catch (const boost::regex_error &e) {
            throw InputError("invalid protocol pattern '" + p + "': " + e.what());
        }
    }
}

const std::vector<std::string> &PassCountProtocol::default_patterns()
{
    static const std::vector<std::string> patterns{
        R"(Total mismatched samples is (?<mismatches>\d+) out of (?<total>\d+) samples)",
        R"(Mismatches: (?<mismatches>\d+) in (?<total>\d+) samples)",
    };
    return patterns;
}

std::optional<std::pair<long, long>> PassCountProtocol::parse(std::string_view output) const
{
    std::optional<std::pair<long, long>> result;
    std::size_t best_pos = 0;
    for (const auto &p : patterns_) {
        boost::regex re(p);
        auto begin = output.begin();
        boost::match_results<std::string_view::const_iterator> m;
        while (boost::regex_search(begin, output.end(), m, re)) {
            auto pos = static_cast<std::size_t>(m[0].first - output.begin());
            if (!result || pos >= best_pos) {
                best_pos = pos;
                result = std::pair{std::stol(m["mismatches"].str()), std::stol(m["total"].str())};
            }
            begin = m[0].second;
        }
    }
    return result;
}

TestOutcome PassCountProtocol::outcome(std::string_view output, int exit_code) const
{
    if (auto counts = parse(output); counts && counts->second > 0) {
        long total = counts->second;
        long mismatches = std::min(counts->first, total);
        return make_outcome(static_cast<int>(total - mismatches), static_cast<int>(total));
    }
    return exit_code == 0 ? make_outcome(1, 1) : make_outcome(0, 1);
}

std::optional<fs::path> find_executable(const std::string &program)
{
    auto executable = [](const fs::path &p) { return fs::is_regular_file(p) && ::access(p.c_str(), X_OK) == 0; };
    if (program.find('/') != std::string::npos) {
        if (executable(program))
            return fs::absolute(program);
        return std::nullopt;
    }
    const char *path = std::getenv("PATH");
    std::string_view dirs = path ? path : "/usr/bin:/bin";
    while (!dirs.empty()) {
        auto colon = dirs.find(':');
        fs::path candidate = fs::path(std::string(dirs.substr(0, colon))) / program;
        if (executable(candidate))
            return candidate;
        if (colon == std::string_view::npos)
            break;
        dirs.remove_prefix(colon + 1);
    }
    return std::nullopt;
}

ProcessResult run_process(
    const std::vector<std::string> &argv,
    const fs::path &cwd,
    const fs::path &output_file,
    std::chrono::milliseconds timeout)
{
    if (argv.empty())
        throw ContractViolation("run_process needs a program");
    auto program = find_executable(argv[0]);
    if (!program)
        throw InfrastructureError("executable not found: " + argv[0]);

    int out_fd = ::open(output_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (out_fd < 0)
        throw InfrastructureError("cannot open " + output_file.string() + ": " + std::strerror(errno));
    int status_pipe[2];
    if (::pipe2(status_pipe, O_CLOEXEC) != 0) {
        ::close(out_fd);
        throw InfrastructureError(std::string("pipe failed: ") + std::strerror(errno));
    }

    std::vector<char *> args;
    for (const auto &a : argv)
        args.push_back(const_cast<char *>(a.c_str()));
    args.push_back(nullptr);

    pid_t pid = ::fork();
    if (pid < 0) {
        ::close(out_fd);
        ::close(status_pipe[0]);
        ::close(status_pipe[1]);
        throw InfrastructureError(std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        int err = 0;
        if (::chdir(cwd.c_str()) != 0 || ::dup2(out_fd, STDOUT_FILENO) < 0 || ::dup2(out_fd, STDERR_FILENO) < 0) {
            err = errno;
        } else {
            ::execv(program->c_str(), args.data());
            err = errno;
        }
        [[maybe_unused]] auto n = ::write(status_pipe[1], &err, sizeof err);
        ::_exit(127);
    }
    ::close(out_fd);
    ::close(status_pipe[1]);
    int child_errno = 0;
    auto got = ::read(status_pipe[0], &child_errno, sizeof child_errno);
    ::close(status_pipe[0]);
    if (got == sizeof child_errno) {
        ::waitpid(pid, nullptr, 0);
        throw InfrastructureError("cannot start " + argv[0] + ": " + std::strerror(child_errno));
    }

    auto deadline = std::chrono::steady_clock::now() + timeout;
    auto pause = std::chrono::milliseconds(2);
    ProcessResult result;
    while (true) {
        int status = 0;
        pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) {
            result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
            return result;
        }
        if (r < 0 && errno != EINTR)
            throw InfrastructureError(std::string("waitpid failed: ") + std::strerror(errno));
        if (std::chrono::steady_clock::now() >= deadline) {
            ::kill(-pid, SIGKILL);
            ::kill(pid, SIGKILL);
            ::waitpid(pid, nullptr, 0);
            result.timed_out = true;
            return result;
        }
        std::this_thread::sleep_for(pause);
        pause = std::min(pause * 2, std::chrono::milliseconds(50));
    }
}

IverilogSimulator::IverilogSimulator(IverilogConfig config)
    : config_(std::move(config))
    , protocol_(config_.protocol_patterns)
{
    auto compiler = find_executable(config_.compiler);
    if (!compiler)
        throw InfrastructureError("simulator compiler not found: " + config_.compiler);
    auto runtime = find_executable(config_.runtime);
    if (!runtime)
        throw InfrastructureError("simulator runtime not found: " + config_.runtime);
    compiler_ = *compiler;
    runtime_ = *runtime;
}

TestOutcome IverilogSimulator::run(const CodeSample &sample, const Task &task, std::string_view sample_key)
{
    fs::path dir = config_.scratch_root / safe_component(task.id) / safe_component(sample_key);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw InfrastructureError("cannot create scratch directory " + dir.string() + ": " + ec.message());
    write_file(dir / "candidate.v", sample.verilog_src);
    write_file(dir / "tb.v", task.testbench_src);

    std::vector<std::string> compile{compiler_.string()};
    compile.insert(compile.end(), config_.extra_flags.begin(), config_.extra_flags.end());
    compile.insert(compile.end(), {"-o", "sim.vvp", "tb.v", "candidate.v"});
    auto timeout = std::chrono::duration_cast<std::chrono::milliseconds>(config_.timeout);
    auto built = run_process(compile, dir, dir / "compile.out", timeout);
    if (built.timed_out || built.exit_code != 0)
        return compile_error_outcome();

    auto ran = run_process({runtime_.string(), "sim.vvp"}, dir, dir / "sim.out", timeout);
    if (ran.timed_out)
        return timeout_outcome();
    return protocol_.outcome(read_file(dir / "sim.out"), ran.exit_code);
}

MockSimulator::MockSimulator(std::vector<MockRule> shared, std::map<std::string, std::vector<MockRule>> per_task)
    : shared_(std::move(shared))
    , per_task_(std::move(per_task))
{}

TestOutcome MockSimulator::run(const CodeSample &sample, const Task &task, std::string_view)
{
    return simulate(sample.verilog_src, task.id);
}

TestOutcome MockSimulator::simulate(std::string_view code, const std::string &task_id) const
{
    if (auto it = per_task_.find(task_id); it != per_task_.end())
        for (const auto &rule : it->second)
            if (code.find(rule.key) != std::string_view::npos)
                return rule.outcome;
    for (const auto &rule : shared_)
        if (code.find(rule.key) != std::string_view::npos)
            return rule.outcome;
    return compile_error_outcome();
}

MockSimulator parse_mock_simulator(const nlohmann::json &doc)
{
    if (doc.is_array())
        return MockSimulator(parse_rules(doc));
    if (!doc.is_object())
        throw InputError("mock simulator file must be an array or object");
    std::vector<MockRule> shared;
    std::map<std::string, std::vector<MockRule>> per_task;
    if (doc.contains("default"))
        shared = parse_rules(doc.at("default"));
    if (doc.contains("tasks")) {
        if (!doc.at("tasks").is_object())
            throw InputError("mock simulator 'tasks' must be an object");
        for (const auto &[id, rules] : doc.at("tasks").items())
            per_task.emplace(id, parse_rules(rules));
    }
    return MockSimulator(std::move(shared), std::move(per_task));
}

MockSimulator load_mock_simulator(const fs::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot read mock simulator file " + path.string());
    auto doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded())
        throw InputError("mock simulator file is not valid JSON: " + path.string());
    return parse_mock_simulator(doc);
}

} // namespace hdlgen
