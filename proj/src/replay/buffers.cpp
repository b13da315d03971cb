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

#include "crl/replay/buffers.hpp"

namespace crl::replay {

std::vector<std::size_t> sample_indices(std::size_t population, std::size_t size, Rng& rng) {
    if (population == 0) throw std::invalid_argument("sample_indices: empty population");
    std::vector<std::size_t> out(size);
    for (auto& i : out) i = static_cast<std::size_t>(rng.below(population));
    return out;
}

std::vector<std::size_t> sample_distinct(std::size_t population, std::size_t size, Rng& rng) {
    if (size > population) throw std::invalid_argument("sample_distinct: more draws than items");
    std::vector<std::size_t> idx(population);
    for (std::size_t i = 0; i < population; ++i) idx[i] = i;
    for (std::size_t i = 0; i < size; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(population - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(size);
    return idx;
}

std::size_t PartitionedBuffer::size() const {
    std::size_t n = 0;
    for (const auto& [t, p] : partitions_) n += p.size();
    return n;
}

std::size_t PartitionedBuffer::partition_capacity() const {
    return partitions_.empty() ? capacity_ : capacity_ / partitions_.size();
}

std::vector<const Transition*> PartitionedBuffer::all() const {
    std::vector<const Transition*> out;
    out.reserve(size());
    for (const auto& [t, p] : partitions_)
        for (const auto& item : p.items()) out.push_back(&item);
    return out;
}

void PartitionedBuffer::begin_subtask(int subtask, Rng& rng) {
    if (subtask < 1) throw std::invalid_argument("partitioned buffer: sub-task ids start at 1");
    if (partitions_.count(subtask)) return;
    const std::size_t m = capacity_ / (partitions_.size() + 1);
    for (auto& [t, p] : partitions_) p.downsample(m, rng);
    partitions_.emplace(subtask, ReservoirBuffer<Transition>(m));
}

void gem_store(PartitionedBuffer& buf, Transition item, int subtask, Rng& rng) {
    buf.begin_subtask(subtask, rng);
    buf.partitions_.at(subtask).insert(std::move(item), rng);
}

std::vector<const Transition*> WorstBuffer::items() const {
    std::vector<const Transition*> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(&e.item);
    return out;
}

void WorstBuffer::refresh(const std::vector<double>& losses) {
    if (losses.size() != entries_.size()) throw std::invalid_argument("worst buffer: loss count mismatch");
    for (std::size_t i = 0; i < losses.size(); ++i) entries_[i].loss = losses[i];
}

void nsr_update(WorstBuffer& buf, std::vector<std::pair<Transition, double>> incoming) {
    for (auto& [item, loss] : incoming) buf.entries_.push_back({std::move(item), loss, buf.next_sequence_++});
    std::stable_sort(buf.entries_.begin(), buf.entries_.end(), [](const auto& a, const auto& b) {
        if (a.loss != b.loss) return a.loss > b.loss;
        return a.sequence < b.sequence;
    });
    if (buf.entries_.size() > buf.capacity_) buf.entries_.resize(buf.capacity_);
}

std::vector<const Transition*> nsr_compose_batch(const WorstBuffer& buf, const std::vector<const Transition*>& current,
                                                 double ratio, Rng& rng) {
    if (!(ratio >= 0.0)) throw std::invalid_argument("nsr: replay ratio must be non-negative");
    std::vector<const Transition*> batch = current;
    if (buf.empty() || ratio == 0.0) return batch;
    const auto wanted = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(current.size())));
    const auto& entries = buf.entries();
    const auto picks = wanted <= entries.size() ? sample_distinct(entries.size(), wanted, rng)
                                                : sample_indices(entries.size(), wanted, rng);
    for (auto i : picks) batch.push_back(&entries[i].item);
    return batch;
}

}  // namespace crl::replay
