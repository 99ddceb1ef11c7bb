#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace nearzero {

/// Limits for a bounded search. max_nodes counts candidates tested.
struct SearchBudget {
  std::uint64_t max_N = 16;
  std::uint64_t max_nodes = 1'000'000;
  std::optional<std::chrono::milliseconds> wall_time;
};

struct SearchOptions {
  unsigned workers = 1;
};

/// Honest failure: the budget ran out before any candidate was accepted.
/// Never a claim that no witness exists.
struct Exhausted {
  std::uint64_t nodes_visited = 0;
  std::uint64_t max_N_reached = 0;
  bool timed_out = false;

  friend bool operator==(const Exhausted&, const Exhausted&) = default;
};

template <class Witness>
using SearchOutcome = std::variant<Witness, Exhausted>;

template <class Candidate>
struct Accepted {
  Candidate candidate;
  std::uint64_t nodes_visited = 0;  // position of the candidate in enumeration order, 1-based
  std::uint64_t depth = 0;
};

template <class Candidate>
using RunResult = std::variant<Accepted<Candidate>, Exhausted>;

/// Enumerators push candidates in canonical order into a sink and stop when
/// the sink returns false.
template <class Candidate>
using Sink = std::function<bool(Candidate)>;

/// Returns the first candidate, in enumeration order, that passes accept.
///
/// Candidates are collected into batches (sizes 1, 2, 4, ... capped) and each
/// batch is tested by `options.workers` threads. The winner is always the
/// lowest-indexed accepted candidate, so the outcome does not depend on the
/// worker count or on scheduling; workers skip only candidates ordered after
/// the current best. At most budget.max_nodes candidates are ever tested.
///
/// depth_of maps a candidate to its search depth (usually N), reported in
/// Exhausted::max_N_reached.
template <class Candidate, class Enumerate, class Accept, class DepthOf>
RunResult<Candidate> run_search(Enumerate&& enumerate, Accept&& accept, DepthOf&& depth_of,
                                const SearchBudget& budget, const SearchOptions& options = {}) {
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  const unsigned workers = std::max(1u, options.workers);
  constexpr std::size_t kMaxBatch = 4096;

  std::vector<Candidate> batch;
  std::size_t batch_limit = 1;
  std::uint64_t base = 0;  // candidates tested in earlier batches
  std::uint64_t max_depth = 0;
  std::optional<Accepted<Candidate>> found;
  bool timed_out = false;

  auto out_of_time = [&] {
    return budget.wall_time && Clock::now() - started >= *budget.wall_time;
  };

  auto test_batch = [&] {
    if (batch.empty()) return;
    const std::size_t n = batch.size();
    std::atomic<std::size_t> best{n};
    if (workers == 1 || n < 2 * static_cast<std::size_t>(workers)) {
      for (std::size_t i = 0; i < n; ++i) {
        if (accept(std::as_const(batch[i]))) {
          best = i;
          break;
        }
      }
    } else {
      std::atomic<std::size_t> next{0};
      auto work = [&] {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= n || i > best.load()) return;
          if (accept(std::as_const(batch[i]))) {
            std::size_t cur = best.load();
            while (i < cur && !best.compare_exchange_weak(cur, i)) {
            }
          }
        }
      };
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    const std::size_t b = best.load();
    if (b < n) {
      found = Accepted<Candidate>{std::move(batch[b]), base + b + 1, depth_of(batch[b])};
    } else {
      base += n;
    }
    batch.clear();
    batch_limit = std::min(kMaxBatch, batch_limit * 2);
    if (!found && out_of_time()) timed_out = true;
  };

  std::uint64_t queued = 0;
  if (budget.max_nodes > 0 && !out_of_time()) {
    enumerate(Sink<Candidate>([&](Candidate c) -> bool {
      if (queued >= budget.max_nodes) return false;
      max_depth = std::max<std::uint64_t>(max_depth, depth_of(c));
      batch.push_back(std::move(c));
      ++queued;
      if (batch.size() >= batch_limit) test_batch();
      return !found && !timed_out && queued < budget.max_nodes;
    }));
    if (!found && !timed_out) test_batch();
  } else if (budget.max_nodes > 0) {
    timed_out = true;
  }

  if (found) return *std::move(found);
  return Exhausted{base, max_depth, timed_out};
}

/// Same as above with every candidate at depth 0.
template <class Candidate, class Enumerate, class Accept>
RunResult<Candidate> run_search(Enumerate&& enumerate, Accept&& accept, const SearchBudget& budget,
                                const SearchOptions& options = {}) {
  return run_search<Candidate>(std::forward<Enumerate>(enumerate), std::forward<Accept>(accept),
                               [](const Candidate&) { return std::uint64_t{0}; }, budget, options);
}

/// Budget left after `used` nodes and the time already spent since `started`.
inline SearchBudget remaining_budget(const SearchBudget& budget, std::uint64_t used,
                                     std::chrono::steady_clock::time_point started) {
  SearchBudget rest = budget;
  rest.max_nodes = used >= budget.max_nodes ? 0 : budget.max_nodes - used;
  if (budget.wall_time) {
    auto spent = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    rest.wall_time = spent >= *budget.wall_time ? std::chrono::milliseconds(0) : *budget.wall_time - spent;
  }
  return rest;
}

/// Thread-safe memo of a pure function. The table is cleared whenever it
/// reaches capacity; since the wrapped function is pure this affects only
/// speed.
template <class Key, class Value, class Hash = std::hash<Key>>
class MemoCache {
 public:
  explicit MemoCache(std::size_t capacity = 1 << 16) : capacity_(std::max<std::size_t>(1, capacity)) {}

  template <class Fn>
  Value get(const Key& key, Fn&& compute) {
    {
      std::lock_guard lock(mu_);
      auto it = table_.find(key);
      if (it != table_.end()) return it->second;
    }
    Value v = compute(key);
    std::lock_guard lock(mu_);
    if (table_.size() >= capacity_) table_.clear();
    table_.emplace(key, v);
    return v;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return table_.size();
  }

 private:
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::unordered_map<Key, Value, Hash> table_;
};

}  // namespace nearzero
