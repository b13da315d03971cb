// Copyright (c) 2026 The crlbench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crl/harness/analysis.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace crl::harness {

namespace fs = std::filesystem;
using nlohmann::json;

RunRecord load_run(const fs::path& dir) {
    RunRecord run;
    run.dir = dir;
    std::ifstream scores(dir / "scores.json");
    if (!scores) throw std::runtime_error("no scores.json in " + dir.string());
    run.scores = ScoreTable::from_json(json::parse(scores));

    std::ifstream episodes(dir / "episodes.csv");
    if (!episodes) throw std::runtime_error("no episodes.csv in " + dir.string());
    run.episodes = read_episodes_csv(episodes);

    for (const auto& st : run.scores.subtasks) {
        std::ifstream trace(dir / "traces" / ("eval_subtask_" + std::to_string(st.id) + ".csv"));
        run.eval_traces.push_back(trace ? sim::read_trajectory_csv(trace) : std::vector<sim::TrajectoryRow>{});
    }
    return run;
}

std::vector<ScoreTable> compare_runs(const std::vector<RunRecord>& runs) {
    std::vector<std::string> labels;
    for (const auto& r : runs) {
        bool seen = false;
        for (const auto& l : labels) seen = seen || l == r.scores.label;
        if (!seen) labels.push_back(r.scores.label);
    }
    std::vector<ScoreTable> out;
    for (const auto& label : labels) {
        std::vector<ScoreTable> group;
        for (const auto& r : runs)
            if (r.scores.label == label) group.push_back(r.scores);
        out.push_back(aggregate(group));
    }
    return out;
}

TableFormat table_format_from_string(const std::string& name) {
    if (name == "csv") return TableFormat::csv;
    if (name == "json") return TableFormat::json;
    if (name == "markdown" || name == "md") return TableFormat::markdown;
    throw std::invalid_argument("unknown format '" + name + "' (expected csv, json or markdown)");
}

namespace {

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::vector<std::string> header_cells(const ScoreTable& t) {
    std::vector<std::string> cells{"method", "runs"};
    for (const auto& st : t.subtasks) {
        cells.push_back("history_" + std::to_string(st.id));
        cells.push_back("last_policy_" + std::to_string(st.id));
    }
    cells.push_back("history_overall");
    cells.push_back("last_policy_overall");
    return cells;
}

std::vector<std::string> row_cells(const ScoreTable& t) {
    std::vector<std::string> cells{t.label, std::to_string(t.runs)};
    for (const auto& st : t.subtasks) {
        cells.push_back(number(st.history));
        cells.push_back(number(st.last_policy));
    }
    cells.push_back(number(t.overall_history()));
    cells.push_back(number(t.overall_last_policy()));
    return cells;
}

void write_row(std::ostream& out, const std::vector<std::string>& cells, bool markdown) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (markdown)
            out << "| " << cells[i] << ' ';
        else
            out << (i ? "," : "") << cells[i];
    }
    out << (markdown ? "|\n" : "\n");
}

}  // namespace

void write_comparison(std::ostream& out, const std::vector<ScoreTable>& tables, TableFormat format) {
    if (format == TableFormat::json) {
        json arr = json::array();
        for (const auto& t : tables) arr.push_back(t.to_json());
        out << arr.dump(2) << '\n';
        return;
    }
    if (tables.empty()) return;
    const bool md = format == TableFormat::markdown;
    const auto header = header_cells(tables.front());
    write_row(out, header, md);
    if (md) {
        std::vector<std::string> rule(header.size(), "---");
        write_row(out, rule, true);
    }
    for (const auto& t : tables) {
        if (t.subtasks.size() != tables.front().subtasks.size())
            throw std::invalid_argument("compare: runs have different sub-task counts");
        write_row(out, row_cells(t), md);
    }
}

void write_action_frequency(std::ostream& out, const RunRecord& run) {
    out << "subtask,action_index,category,count\n";
    for (std::size_t k = 0; k < run.eval_traces.size(); ++k) {
        const ActionFrequency f = action_frequency(run.eval_traces[k]);
        for (std::size_t a = 0; a < sim::kActionCount; ++a)
            out << run.scores.subtasks[k].id << ',' << sim::action(a).index << ','
                << sim::to_string(sim::action(a).category) << ',' << f.counts[a] << '\n';
    }
}

void write_deviation_trace(std::ostream& out, const RunRecord& run) {
    out << "subtask,step,deviation\n";
    char buf[32];
    for (std::size_t k = 0; k < run.eval_traces.size(); ++k) {
        const auto trace = deviation_trace(run.eval_traces[k]);
        for (std::size_t i = 0; i < trace.size(); ++i) {
            out << run.scores.subtasks[k].id << ',' << run.eval_traces[k][i].step << ',';
            if (trace[i]) {
                std::snprintf(buf, sizeof buf, "%.6g", *trace[i]);
                out << buf;
            }
            out << '\n';
        }
    }
}

void write_score_curve(std::ostream& out, const RunRecord& run, double smoothing) {
    out << "subtask,episode,sigma_e,smoothed\n";
    char buf[64];
    for (const auto& st : run.scores.subtasks) {
        std::vector<const EpisodeRecord*> eps;
        std::vector<double> sigma;
        for (const auto& e : run.episodes)
            if (e.subtask == st.id && e.phase == Phase::train) {
                eps.push_back(&e);
                sigma.push_back(e.sigma);
            }
        if (sigma.empty()) continue;
        const auto smoothed = smooth(sigma, smoothing);
        for (std::size_t i = 0; i < eps.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.6g,%.6g", sigma[i], smoothed[i]);
            out << st.id << ',' << eps[i]->episode << ',' << buf << '\n';
        }
    }
}

}  // namespace crl::harness
