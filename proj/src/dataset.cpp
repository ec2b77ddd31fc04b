// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/dataset.hpp"

#include "hdlgen/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace hdlgen {
namespace fs = std::filesystem;

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

std::string field(const nlohmann::json &rec, std::initializer_list<const char *> names, bool required, std::size_t line)
{
    for (const char *n : names)
        if (rec.contains(n) && rec.at(n).is_string())
            return rec.at(n).get<std::string>();
    if (required)
        throw InputError("line " + std::to_string(line) + ": missing field '" + *names.begin() + "'");
    return {};
}

std::vector<Task> load_directory(const fs::path &dir)
{
    std::vector<fs::path> entries;
    for (const auto &e : fs::directory_iterator(dir))
        if (e.is_directory())
            entries.push_back(e.path());
    std::sort(entries.begin(), entries.end());

    std::vector<Task> tasks;
    for (const auto &d : entries) {
        if (!fs::exists(d / "spec.txt"))
            continue;
        Task t;
        t.id = d.filename().string();
        t.spec_text = read_text(d / "spec.txt");
        t.testbench_src = read_text(d / "testbench.v");
        if (fs::exists(d / "header.v"))
            t.module_header = read_text(d / "header.v");
        if (fs::exists(d / "split.txt")) {
            std::string split = read_text(d / "split.txt");
            split.erase(split.find_last_not_of(" \n\r\t") + 1);
            t.split = parse_split(split);
        }
        tasks.push_back(std::move(t));
    }
    return tasks;
}

std::vector<Task> load_jsonl(const fs::path &file)
{
    std::ifstream in(file);
    if (!in)
        throw InputError("cannot read " + file.string());
    std::vector<Task> tasks;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        auto rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object())
            throw InputError("line " + std::to_string(number) + ": not a JSON object");
        Task t;
        t.id = field(rec, {"task_id", "id"}, true, number);
        t.spec_text = field(rec, {"prompt", "spec", "detail_description"}, true, number);
        t.testbench_src = field(rec, {"testbench", "test"}, true, number);
        t.module_header = field(rec, {"module_header", "header"}, false, number);
        if (auto split = field(rec, {"split"}, false, number); !split.empty())
            t.split = parse_split(split);
        tasks.push_back(std::move(t));
    }
    return tasks;
}

} // namespace

std::vector<Task> load_dataset(const fs::path &path)
{
    std::vector<Task> tasks;
    try {
        if (fs::is_directory(path))
            tasks = load_directory(path);
        else if (fs::is_regular_file(path))
            tasks = load_jsonl(path);
        else
            throw InputError("dataset not found: " + path.string());
        std::set<std::string> seen;
        for (const auto &t : tasks) {
            t.validate();
            if (!seen.insert(t.id).second)
                throw InputError("duplicate task id '" + t.id + "'");
        }
    } catch (const ContractViolation &e) {
        throw InputError(std::string("dataset: ") + e.what());
    } catch (const fs::filesystem_error &e) {
        throw InputError(std::string("dataset: ") + e.what());
    }
    if (tasks.empty())
        throw InputError("dataset has no tasks: " + path.string());
    return tasks;
}

std::vector<Task> filter_tasks(std::vector<Task> tasks, const std::vector<std::string> &ids)
{
    if (ids.empty())
        return tasks;
    for (const auto &id : ids)
        if (std::none_of(tasks.begin(), tasks.end(), [&](const Task &t) { return t.id == id; }))
            throw InputError("unknown task id '" + id + "'");
    std::erase_if(tasks, [&](const Task &t) { return std::find(ids.begin(), ids.end(), t.id) == ids.end(); });
    return tasks;
}

} // namespace hdlgen
