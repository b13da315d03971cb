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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "crl/rng.hpp"
#include "crl/replay/transition.hpp"

namespace crl::replay {

// Algorithm R. After n arrivals (n >= capacity) every arrival is held with
// probability capacity / n.
template <class T>
class ReservoirBuffer {
public:
    explicit ReservoirBuffer(std::size_t capacity = 0) : capacity_(capacity) {}

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    std::uint64_t seen() const { return seen_; }
    const std::vector<T>& items() const { return items_; }
    std::vector<T>& items() { return items_; }

    // Slot the next arrival would take given a draw uniform in [0, seen()],
    // or nothing when it is discarded.
    std::optional<std::size_t> slot_for(std::uint64_t draw) const {
        if (items_.size() < capacity_) return items_.size();
        if (draw < capacity_) return static_cast<std::size_t>(draw);
        return std::nullopt;
    }

    void insert_with_draw(T item, std::uint64_t draw) {
        const auto slot = slot_for(draw);
        ++seen_;
        if (!slot) return;
        if (*slot == items_.size())
            items_.push_back(std::move(item));
        else
            items_[*slot] = std::move(item);
    }

    void insert(T item, Rng& rng) {
        // Draw only once the buffer is full so the fill phase consumes no randomness.
        const std::uint64_t draw = items_.size() < capacity_ ? 0 : rng.below(seen_ + 1);
        insert_with_draw(std::move(item), draw);
    }

    // Keeps a uniformly chosen subset of `new_capacity` items, in their
    // current order, and lowers the capacity.
    void downsample(std::size_t new_capacity, Rng& rng) {
        if (items_.size() > new_capacity) {
            std::vector<std::size_t> idx(items_.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            for (std::size_t i = 0; i < new_capacity; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
                std::swap(idx[i], idx[j]);
            }
            idx.resize(new_capacity);
            std::sort(idx.begin(), idx.end());
            std::vector<T> kept;
            kept.reserve(new_capacity);
            for (auto i : idx) kept.push_back(std::move(items_[i]));
            items_ = std::move(kept);
        }
        capacity_ = new_capacity;
    }

private:
    std::size_t capacity_;
    std::uint64_t seen_ = 0;
    std::vector<T> items_;
};

template <class T>
void reservoir_insert(ReservoirBuffer<T>& buf, T item, Rng& rng) {
    buf.insert(std::move(item), rng);
}

// `size` indices drawn uniformly with replacement from [0, population).
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t size, Rng& rng);
// `size` distinct indices (size <= population), in draw order.
std::vector<std::size_t> sample_distinct(std::size_t population, std::size_t size, Rng& rng);

// Uniform mini-batch with replacement. Throws std::invalid_argument when empty.
template <class T>
std::vector<const T*> sample_minibatch(const std::vector<T>& items, std::size_t size, Rng& rng) {
    if (items.empty()) throw std::invalid_argument("sample_minibatch: empty buffer");
    std::vector<const T*> out;
    out.reserve(size);
    for (auto i : sample_indices(items.size(), size, rng)) out.push_back(&items[i]);
    return out;
}

// Memory split into one reservoir per sub-task. Entering sub-task t shrinks
// every earlier partition to floor(M / t) by uniform down-sampling; the new
// partition fills by reservoir sampling up to the same size.
class PartitionedBuffer {
public:
    explicit PartitionedBuffer(std::size_t capacity = 0) : capacity_(capacity) {}

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const;
    bool empty() const { return size() == 0; }
    int subtasks() const { return static_cast<int>(partitions_.size()); }
    std::size_t partition_capacity() const;

    const std::map<int, ReservoirBuffer<Transition>>& partitions() const { return partitions_; }
    // All held items, partition by partition.
    std::vector<const Transition*> all() const;

    void begin_subtask(int subtask, Rng& rng);

private:
    friend void gem_store(PartitionedBuffer&, Transition, int, Rng&);

    std::size_t capacity_;
    std::map<int, ReservoirBuffer<Transition>> partitions_;
};

void gem_store(PartitionedBuffer& buf, Transition item, int subtask, Rng& rng);

// Keeps the M highest-loss transitions seen so far. Each item carries the
// loss from its most recent evaluation.
class WorstBuffer {
public:
    struct Entry {
        Transition item;
        double loss = 0.0;
        std::uint64_t sequence = 0;  // arrival order; smaller wins loss ties
    };

    explicit WorstBuffer(std::size_t capacity = 0) : capacity_(capacity) {}

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::vector<Entry>& entries() const { return entries_; }
    std::vector<const Transition*> items() const;

    // Replace cached losses (same order as entries()).
    void refresh(const std::vector<double>& losses);

private:
    friend void nsr_update(WorstBuffer&, std::vector<std::pair<Transition, double>>);

    std::size_t capacity_;
    std::uint64_t next_sequence_ = 0;
    std::vector<Entry> entries_;
};

// Merge incoming (transition, loss) pairs into the buffer and retain the M
// highest losses; ties keep the earlier-stored item.
void nsr_update(WorstBuffer& buf, std::vector<std::pair<Transition, double>> incoming);

// current + ceil(ratio * |current|) items drawn uniformly from the buffer,
// without replacement when the buffer is large enough.
std::vector<const Transition*> nsr_compose_batch(const WorstBuffer& buf, const std::vector<const Transition*>& current,
                                                 double ratio, Rng& rng);

}  // namespace crl::replay
