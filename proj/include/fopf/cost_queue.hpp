// Copyright 2026 The fopf Authors
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

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fopf/dataset.hpp"

namespace fopf {

enum class QueueOrder { min_first, max_first };

// Indexed binary heap over dense node ids [0, capacity).
//
// Entries with equal priority leave in insertion order. Changing an entry's
// priority counts as a fresh insertion for tie-breaking purposes, matching
// the remove-then-insert step of the optimum-path competitions.
template <class Priority, QueueOrder Order = QueueOrder::min_first>
class CostQueue {
public:
    explicit CostQueue(std::size_t capacity) : pos_(capacity, kAbsent), prio_(capacity) {}

    bool empty() const noexcept { return heap_.empty(); }
    std::size_t size() const noexcept { return heap_.size(); }
    std::size_t capacity() const noexcept { return pos_.size(); }

    bool contains(NodeId node) const noexcept { return node < pos_.size() && pos_[node] != kAbsent; }

    const Priority& priority(NodeId node) const {
        if (!contains(node)) throw std::out_of_range("CostQueue::priority: node not queued");
        return prio_[node];
    }

    void push(NodeId node, Priority p) {
        if (node >= pos_.size()) throw std::out_of_range("CostQueue::push: node out of range");
        if (contains(node)) throw std::logic_error("CostQueue::push: node already queued");
        prio_[node] = std::move(p);
        heap_.push_back({node, counter_++});
        pos_[node] = heap_.size() - 1;
        sift_up(heap_.size() - 1);
    }

    // Works in either direction (decrease or increase).
    void update(NodeId node, Priority p) {
        if (!contains(node)) throw std::logic_error("CostQueue::update: node not queued");
        std::size_t i = pos_[node];
        prio_[node] = std::move(p);
        heap_[i].seq = counter_++;
        sift_up(i);
        sift_down(pos_[node]);
    }

    void push_or_update(NodeId node, Priority p) {
        if (contains(node)) update(node, std::move(p));
        else push(node, std::move(p));
    }

    NodeId top() const {
        if (heap_.empty()) throw std::logic_error("CostQueue::top: empty queue");
        return heap_.front().node;
    }

    NodeId pop() {
        NodeId node = top();
        remove_at(0);
        return node;
    }

    void remove(NodeId node) {
        if (!contains(node)) throw std::logic_error("CostQueue::remove: node not queued");
        remove_at(pos_[node]);
    }

private:
    static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

    struct Entry {
        NodeId node;
        std::uint64_t seq;
    };

    // True when a must leave before b.
    bool before(const Entry& a, const Entry& b) const {
        const Priority& pa = prio_[a.node];
        const Priority& pb = prio_[b.node];
        if constexpr (Order == QueueOrder::min_first) {
            if (pa < pb) return true;
            if (pb < pa) return false;
        } else {
            if (pb < pa) return true;
            if (pa < pb) return false;
        }
        return a.seq < b.seq;
    }

    void place(std::size_t i, Entry e) {
        heap_[i] = e;
        pos_[e.node] = i;
    }

    void sift_up(std::size_t i) {
        Entry e = heap_[i];
        while (i > 0) {
            std::size_t parent = (i - 1) / 2;
            if (!before(e, heap_[parent])) break;
            place(i, heap_[parent]);
            i = parent;
        }
        place(i, e);
    }

    void sift_down(std::size_t i) {
        Entry e = heap_[i];
        const std::size_t n = heap_.size();
        while (true) {
            std::size_t child = 2 * i + 1;
            if (child >= n) break;
            if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
            if (!before(heap_[child], e)) break;
            place(i, heap_[child]);
            i = child;
        }
        place(i, e);
    }

    void remove_at(std::size_t i) {
        NodeId gone = heap_[i].node;
        Entry last = heap_.back();
        heap_.pop_back();
        pos_[gone] = kAbsent;
        if (i < heap_.size()) {
            place(i, last);
            sift_up(i);
            sift_down(pos_[last.node]);
        }
    }

    std::vector<Entry> heap_;
    std::vector<std::size_t> pos_;
    std::vector<Priority> prio_;
    std::uint64_t counter_ = 0;
};

} // namespace fopf
