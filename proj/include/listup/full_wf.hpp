#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "listup/core.hpp"
#include "listup/permutations.hpp"

namespace listup {

/// State-space cap from LISTUP_MAX_STATES, or `fallback` when unset.
inline std::size_t max_states(std::size_t fallback) {
  if (const char* env = std::getenv("LISTUP_MAX_STATES")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (...) {
      throw Error("LISTUP_MAX_STATES is not a number");
    }
  }
  return fallback;
}

/// Work function over all orders of a fixed item set. Slot k stands for
/// items[k]; values are kept as offsets above an accumulated minimum.
struct FullWorkFunction {
  std::vector<ItemId> items;
  std::vector<std::int32_t> offset;  // indexed by permutation rank
  std::int64_t minimum = 0;

  int n() const { return static_cast<int>(items.size()); }
  std::int64_t value(std::size_t rank) const { return minimum + offset[rank]; }

  /// Work function before any request: the swap distance from `initial`.
  static FullWorkFunction initial(const ListState& initial) {
    FullWorkFunction f;
    f.items = initial.order();
    const auto& space = permutation_space(f.n());
    f.offset.resize(space.size());
    for (std::size_t r = 0; r < space.size(); ++r) f.offset[r] = space.inversions(r);
    return f;
  }

  int slot_of(ItemId x) const {
    auto it = std::find(items.begin(), items.end(), x);
    if (it == items.end()) throw AbsentItem("item " + std::to_string(x) + " outside work function");
    return static_cast<int>(it - items.begin());
  }

  /// Rank of the permutation matching `list`.
  std::size_t rank_of(const ListState& list) const {
    if (list.size() != items.size()) throw UniverseMismatch("list size differs from work function");
    std::vector<std::uint8_t> p;
    p.reserve(items.size());
    for (ItemId x : list.order()) p.push_back(static_cast<std::uint8_t>(slot_of(x)));
    return permutation_space(n()).rank(p);
  }

  ListState list_of(std::size_t rank) const {
    std::vector<ItemId> order;
    for (auto s : permutation_space(n()).at(rank)) order.push_back(items[s]);
    return ListState(std::move(order));
  }
};

/// Min-plus closure of `g` under the swap metric, in place: afterwards
/// g[p] = min_q g[q] + d(q, p). Buckets by value, expanding one adjacent
/// transposition at a time.
inline void relax_under_swaps(const PermutationSpace& space, std::vector<std::int32_t>& g) {
  if (space.n() == 1) return;
  std::int32_t lo = *std::min_element(g.begin(), g.end());
  std::int32_t hi = *std::max_element(g.begin(), g.end());
  std::vector<std::vector<std::uint32_t>> buckets(static_cast<std::size_t>(hi - lo + 1));
  for (std::size_t r = 0; r < g.size(); ++r) buckets[static_cast<std::size_t>(g[r] - lo)].push_back(static_cast<std::uint32_t>(r));
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    auto level = static_cast<std::int32_t>(b) + lo;
    for (std::size_t i = 0; i < buckets[b].size(); ++i) {
      std::uint32_t r = buckets[b][i];
      if (g[r] != level) continue;
      for (std::uint32_t q : space.neighbors(r)) {
        if (g[q] > level + 1) {
          g[q] = level + 1;
          buckets[b + 1].push_back(q);
        }
      }
    }
  }
}

/// Serves one request: F'(p) = min_q F(q) + access(q, requested) + d(q, p).
inline FullWorkFunction full_wf_update(const FullWorkFunction& f, ItemId requested, CostModel model) {
  const auto& space = permutation_space(f.n());
  const int slot = f.slot_of(requested);
  const std::int32_t extra = model == CostModel::Full ? 1 : 0;
  FullWorkFunction out;
  out.items = f.items;
  out.offset.resize(space.size());
  for (std::size_t r = 0; r < space.size(); ++r) out.offset[r] = f.offset[r] + space.position(r, slot) + extra;
  relax_under_swaps(space, out.offset);
  std::int32_t m = *std::min_element(out.offset.begin(), out.offset.end());
  for (auto& v : out.offset) v -= m;
  out.minimum = f.minimum + m;
  return out;
}

/// Exact offline optimum by dynamic programming over all list orders.
/// `max_n` bounds the list length (n! states).
inline std::int64_t opt_exact(const RequestSequence& seq, CostModel model = CostModel::Partial,
                              std::optional<int> max_n = std::nullopt) {
  if (!seq.access_only()) throw InvalidSequence("opt_exact handles access-only sequences");
  const int n = static_cast<int>(seq.initial.size());
  const int bound = max_n.value_or(7);
  std::size_t states = 1;
  for (int i = 2; i <= n; ++i) states *= static_cast<std::size_t>(i);
  if (n > bound || states > max_states(std::numeric_limits<std::size_t>::max()))
    throw StateSpaceExceeded("opt_exact: " + std::to_string(n) + " items (" + std::to_string(states) +
                             " orders) exceeds the configured bound");
  if (seq.events.empty()) return 0;
  FullWorkFunction f = FullWorkFunction::initial(seq.initial);
  for (const Event& e : seq.events) f = full_wf_update(f, e.item, model);
  return f.minimum;
}

}  // namespace listup
