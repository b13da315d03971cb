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

#include "crl/agents/tabular.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace crl::agents {

std::size_t discretize(int deviation, int width, std::size_t bins) {
    if (width <= 0 || bins == 0) throw std::invalid_argument("discretize: width and bins must be positive");
    if (deviation < 0 || deviation > width)
        throw std::out_of_range("discretize: deviation " + std::to_string(deviation) + " outside [0, " +
                                std::to_string(width) + "]");
    // (x + 1) / 2 == d / W for x = (d - W/2) / (W/2); integer arithmetic keeps bin edges exact.
    const std::size_t bin = static_cast<std::size_t>(deviation) * bins / static_cast<std::size_t>(width);
    return std::min(bin, bins - 1);
}

QTable::QTable(std::size_t states, std::size_t actions, double fill)
    : states_(states), actions_(actions), values_(states * actions, fill) {
    if (states == 0 || actions == 0) throw std::invalid_argument("q-table dimensions must be positive");
}

void QTable::check(std::size_t s, std::size_t a) const {
    if (s >= states_ || a >= actions_)
        throw std::out_of_range("q-table index (" + std::to_string(s) + ", " + std::to_string(a) + ") out of range");
}

double& QTable::at(std::size_t s, std::size_t a) {
    check(s, a);
    return values_[s * actions_ + a];
}

double QTable::at(std::size_t s, std::size_t a) const {
    check(s, a);
    return values_[s * actions_ + a];
}

std::span<const double> QTable::row(std::size_t s) const {
    check(s, 0);
    return {values_.data() + s * actions_, actions_};
}

double QTable::max_value(std::size_t s) const {
    auto r = row(s);
    return *std::max_element(r.begin(), r.end());
}

std::string QTable::to_csv() const {
    std::string out;
    char buf[32];
    for (std::size_t s = 0; s < states_; ++s) {
        for (std::size_t a = 0; a < actions_; ++a) {
            std::snprintf(buf, sizeof buf, "%.17g", values_[s * actions_ + a]);
            if (a) out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

QTable QTable::from_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("q-table csv: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("q-table csv: empty");
    QTable q(rows.size(), rows.front().size());
    for (std::size_t s = 0; s < rows.size(); ++s)
        for (std::size_t a = 0; a < rows[s].size(); ++a) q.at(s, a) = rows[s][a];
    return q;
}

void qtable_update(QTable& q, std::size_t s, std::size_t a, double reward, std::size_t next_s, bool terminal,
                   double alpha, double gamma) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("qtable_update: alpha must be in (0, 1]");
    const double bootstrap = terminal ? 0.0 : gamma * q.max_value(next_s);
    double& entry = q.at(s, a);
    entry = (1.0 - alpha) * entry + alpha * (reward + bootstrap);
}

void qtable_update_speedy(QTable& q, QTable& q_prev, std::size_t s, std::size_t a, double reward,
                          std::size_t next_s, bool terminal, double alpha, double gamma) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("qtable_update_speedy: alpha must be in (0, 1]");
    if (q.states() != q_prev.states() || q.actions() != q_prev.actions())
        throw std::invalid_argument("qtable_update_speedy: previous table has a different shape");
    const double t_prev = reward + (terminal ? 0.0 : gamma * q_prev.max_value(next_s));
    const double t_curr = reward + (terminal ? 0.0 : gamma * q.max_value(next_s));
    const double current = q.at(s, a);
    const double updated = current + alpha * (t_prev - current) + (1.0 - alpha) * (t_curr - t_prev);
    q_prev = q;
    q.at(s, a) = updated;
}

QTableAgent::QTableAgent(QTableConfig config, Rng& rng)
    : config_(config), q_(config.bins, 9) {
    if (config_.init_scale > 0.0)
        for (auto& v : q_.values()) v = rng.uniform(0.0, config_.init_scale);
    q_prev_ = q_;
}

QTableAgent::QTableAgent(QTableConfig config, QTable table)
    : config_(config), q_(std::move(table)), q_prev_(q_) {}

void QTableAgent::update(std::size_t s, std::size_t a, double reward, std::size_t next_s, bool terminal) {
    if (config_.rule == TabularRule::original)
        qtable_update(q_, s, a, reward, next_s, terminal, config_.learning_rate, config_.discount);
    else
        qtable_update_speedy(q_, q_prev_, s, a, reward, next_s, terminal, config_.learning_rate, config_.discount);
}

}  // namespace crl::agents
