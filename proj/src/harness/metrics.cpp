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

#include "crl/harness/metrics.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "crl/sim/camera.hpp"

namespace crl::harness {

using nlohmann::json;

std::string to_string(Phase p) { return p == Phase::train ? "train" : "eval"; }

Phase phase_from_string(const std::string& name) {
    if (name == "train") return Phase::train;
    if (name == "eval") return Phase::eval;
    throw std::invalid_argument("unknown phase '" + name + "'");
}

void write_episodes_csv(std::ostream& out, const std::vector<EpisodeRecord>& records) {
    out << "subtask,phase,episode,sigma_e,length\n";
    char buf[64];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%.17g", r.sigma);
        out << r.subtask << ',' << to_string(r.phase) << ',' << r.episode << ',' << buf << ',' << r.length << '\n';
    }
}

std::vector<EpisodeRecord> read_episodes_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "subtask,phase,episode,sigma_e,length")
        throw std::runtime_error("episodes csv: unexpected header");
    std::vector<EpisodeRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string subtask, phase, episode, sigma, length;
        if (!std::getline(ss, subtask, ',') || !std::getline(ss, phase, ',') || !std::getline(ss, episode, ',') ||
            !std::getline(ss, sigma, ',') || !std::getline(ss, length))
            throw std::runtime_error("episodes csv: malformed row '" + line + "'");
        out.push_back({std::stoi(subtask), phase_from_string(phase), std::stoul(episode), std::stod(sigma),
                       std::stoul(length)});
    }
    return out;
}

double score(const std::vector<EpisodeRecord>& records, int subtask, Phase phase) {
    double total = 0.0;
    bool any = false;
    for (const auto& r : records) {
        if (r.subtask != subtask || r.phase != phase) continue;
        total += r.sigma;
        any = true;
    }
    if (!any)
        throw std::invalid_argument("no " + to_string(phase) + " episodes for sub-task " + std::to_string(subtask));
    return total;
}

double ScoreTable::overall_history() const {
    double s = 0.0;
    for (const auto& t : subtasks) s += t.history;
    return s;
}

double ScoreTable::overall_last_policy() const {
    double s = 0.0;
    for (const auto& t : subtasks) s += t.last_policy;
    return s;
}

json ScoreTable::to_json() const {
    json j;
    j["label"] = label;
    j["runs"] = runs;
    json rows = json::array();
    for (const auto& t : subtasks)
        rows.push_back({{"id", t.id}, {"track", t.track}, {"history", t.history}, {"last_policy", t.last_policy}});
    j["subtasks"] = rows;
    j["overall"] = {{"history", overall_history()}, {"last_policy", overall_last_policy()}};
    return j;
}

ScoreTable ScoreTable::from_json(const json& j) {
    ScoreTable t;
    t.label = j.at("label").get<std::string>();
    t.runs = j.value("runs", std::size_t{1});
    for (const auto& row : j.at("subtasks"))
        t.subtasks.push_back({row.at("id").get<int>(), row.at("track").get<std::string>(),
                              row.at("history").get<double>(), row.at("last_policy").get<double>()});
    return t;
}

ScoreTable aggregate(const std::vector<ScoreTable>& runs) {
    if (runs.empty()) throw std::invalid_argument("aggregate: no runs");
    ScoreTable out = runs.front();
    out.runs = 0;
    for (auto& t : out.subtasks) t.history = t.last_policy = 0.0;
    for (const auto& r : runs) {
        if (r.subtasks.size() != out.subtasks.size())
            throw std::invalid_argument("aggregate: runs have different sub-task counts");
        for (std::size_t i = 0; i < r.subtasks.size(); ++i) {
            if (r.subtasks[i].id != out.subtasks[i].id || r.subtasks[i].track != out.subtasks[i].track)
                throw std::invalid_argument("aggregate: runs have different schedules");
            out.subtasks[i].history += r.subtasks[i].history * static_cast<double>(r.runs);
            out.subtasks[i].last_policy += r.subtasks[i].last_policy * static_cast<double>(r.runs);
        }
        out.runs += r.runs;
    }
    for (auto& t : out.subtasks) {
        t.history /= static_cast<double>(out.runs);
        t.last_policy /= static_cast<double>(out.runs);
    }
    return out;
}

std::vector<double> smooth(const std::vector<double>& series, double factor) {
    if (series.empty()) throw std::invalid_argument("smooth: empty series");
    if (!(factor > 0.0 && factor <= 1.0)) throw std::invalid_argument("smooth: factor must lie in (0, 1]");
    std::vector<double> out(series.size());
    out[0] = series[0];
    // Incremental form, so a constant series stays exactly constant.
    for (std::size_t i = 1; i < series.size(); ++i) out[i] = out[i - 1] + factor * (series[i] - out[i - 1]);
    return out;
}

std::size_t ActionFrequency::total() const {
    std::size_t n = 0;
    for (auto c : counts) n += c;
    return n;
}

ActionFrequency action_frequency(const std::vector<sim::TrajectoryRow>& trajectory) {
    ActionFrequency f;
    for (const auto& row : trajectory) {
        if (row.action_index < 1 || row.action_index > static_cast<int>(sim::kActionCount))
            throw std::out_of_range("action index " + std::to_string(row.action_index) + " outside 1..9");
        ++f.counts[static_cast<std::size_t>(row.action_index - 1)];
    }
    return f;
}

std::vector<std::optional<double>> deviation_trace(const std::vector<sim::TrajectoryRow>& trajectory) {
    std::vector<std::optional<double>> out;
    out.reserve(trajectory.size());
    for (const auto& row : trajectory) {
        if (row.deviation)
            out.emplace_back(sim::normalized_deviation(*row.deviation));
        else
            out.emplace_back(std::nullopt);
    }
    return out;
}

}  // namespace crl::harness
