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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "crl/rng.hpp"

namespace crl::agents {

// Maps a deviation d in [0, width] to one of `bins` equal-width bins over
// the normalized deviation (d - W/2) / (W/2) in [-1, 1].
std::size_t discretize(int deviation, int width = 100, std::size_t bins = 33);

class QTable {
public:
    QTable() = default;
    QTable(std::size_t states, std::size_t actions, double fill = 0.0);

    std::size_t states() const { return states_; }
    std::size_t actions() const { return actions_; }

    double& at(std::size_t s, std::size_t a);
    double at(std::size_t s, std::size_t a) const;
    std::span<const double> row(std::size_t s) const;
    double max_value(std::size_t s) const;

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    // Comma-separated, one state per line, %.17g.
    std::string to_csv() const;
    static QTable from_csv(const std::string& text);

    friend bool operator==(const QTable&, const QTable&) = default;

private:
    void check(std::size_t s, std::size_t a) const;

    std::size_t states_ = 0;
    std::size_t actions_ = 0;
    std::vector<double> values_;
};

// Q(s,a) <- (1 - alpha) Q(s,a) + alpha (r + gamma max_b Q(s',b)); the
// bootstrap term is dropped for terminal transitions.
void qtable_update(QTable& q, std::size_t s, std::size_t a, double reward, std::size_t next_s, bool terminal,
                   double alpha, double gamma);

// Speedy Q-learning with the empirical Bellman operator TQ = r + gamma max_b Q(s',b):
// Q_{k+1}(s,a) = Q_k(s,a) + alpha (TQ_{k-1} - Q_k(s,a)) + (1 - alpha)(TQ_k - TQ_{k-1}).
// `q` holds Q_k and `q_prev` Q_{k-1}; afterwards q_prev = Q_k and q = Q_{k+1}.
void qtable_update_speedy(QTable& q, QTable& q_prev, std::size_t s, std::size_t a, double reward,
                          std::size_t next_s, bool terminal, double alpha, double gamma);

enum class TabularRule { original, speedy };

struct QTableConfig {
    std::size_t bins = 33;
    double learning_rate = 0.5;
    double discount = 0.75;
    TabularRule rule = TabularRule::original;
    // Initial values are drawn uniformly from [0, init_scale); 0 gives a zero table.
    double init_scale = 1e-3;
};

class QTableAgent {
public:
    QTableAgent(QTableConfig config, Rng& rng);
    QTableAgent(QTableConfig config, QTable table);

    const QTableConfig& config() const { return config_; }
    const QTable& table() const { return q_; }

    std::span<const double> q_values(std::size_t state) const { return q_.row(state); }
    void update(std::size_t s, std::size_t a, double reward, std::size_t next_s, bool terminal);

private:
    QTableConfig config_;
    QTable q_;
    QTable q_prev_;
};

}  // namespace crl::agents
