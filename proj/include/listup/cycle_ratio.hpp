#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "listup/algorithm.hpp"
#include "listup/full_wf.hpp"
#include "listup/numeric.hpp"
#include "listup/pair_wf.hpp"

namespace listup {

struct CycleRatioResult {
  bool infinite = false;
  /// Ratio of algorithm cost to pair-based OPT over the witness cycle;
  /// `ratio` is num/den with den counted in whole OPT units.
  Rational ratio;
  std::int64_t cycle_alg = 0;
  HalfInteger cycle_opt;
  /// Requested list positions (1-based) around the witness cycle.
  std::vector<std::size_t> cycle_positions;
  /// Concrete requests: a path from the initial state followed by one lap of the cycle.
  RequestSequence witness;
  std::size_t prefix_length = 0;
  std::size_t vertices = 0;

  double value() const { return infinite ? std::numeric_limits<double>::infinity() : ratio.value(); }
};

namespace detail {

/// Algorithm state together with the pair work functions, both over a
/// concrete list; equality is up to renaming items by list position.
class ProductState {
 public:
  ProductState(const OnlineAlgorithm& proto, std::size_t n) : n_(n), alg_(proto.clone()), wf_(n * n) {
    alg_->reset(ListState::identity(n), n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) wf_[i * n + j] = pair_wf_init(PairOrder::XY);
  }
  ProductState(const ProductState& o) : n_(o.n_), alg_(o.alg_->clone()), wf_(o.wf_) {}

  const ListState& list() const { return alg_->list(); }

  std::string key() const {
    auto k = alg_->state_key();
    if (!k) throw Error("algorithm '" + alg_->name() + "' does not expose a finite state");
    std::string out = *k;
    out += '|';
    const auto& o = list().order();
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) out += static_cast<char>('1' + gap(o[i], o[j]));
    return out;
  }

  /// Serves a request to the item at `position`; returns (alg cost, OPT halves).
  std::pair<std::int64_t, std::int64_t> request(std::size_t position, CostModel model) {
    const ItemId z = list().at(position);
    const std::int64_t alg = alg_->on_event(Event::access(z), model).total_cost;
    std::int64_t halves = model == CostModel::Full ? 2 : 0;
    for (std::size_t y = 0; y < n_; ++y) {
      if (static_cast<ItemId>(y) == z) continue;
      auto lo = std::min<std::size_t>(static_cast<std::size_t>(z), y), hi = std::max<std::size_t>(static_cast<std::size_t>(z), y);
      PairWorkFunction& w = wf_[lo * n_ + hi];
      PairWorkFunction next = pair_wf_update(w, static_cast<std::size_t>(z) == lo ? PairRequest::X : PairRequest::Y);
      halves += next.average_halves() - w.average_halves();
      const std::int64_t m = std::min(next.xy, next.yx);
      w = {next.xy - m, next.yx - m};
    }
    return {alg, halves};
  }

 private:
  /// W(a before b) - W(b before a).
  int gap(ItemId a, ItemId b) const {
    auto lo = static_cast<std::size_t>(std::min(a, b)), hi = static_cast<std::size_t>(std::max(a, b));
    const PairWorkFunction& w = wf_[lo * n_ + hi];
    const std::int64_t d = w.xy - w.yx;
    return static_cast<int>(a < b ? d : -d);
  }

  std::size_t n_;
  std::unique_ptr<OnlineAlgorithm> alg_;
  std::vector<PairWorkFunction> wf_;
};

struct CycleEdge {
  std::uint32_t to;
  std::int64_t alg;
  std::int64_t halves;
};

struct ProductGraph {
  std::size_t n = 0;
  std::vector<ProductState> reps;
  std::vector<std::string> keys;
  std::vector<std::vector<CycleEdge>> out;  // out[v][p-1]: request at position p
  std::vector<std::pair<std::int64_t, std::uint32_t>> bfs_parent;  // (parent, position) for witness prefixes
};

inline ProductGraph build_product_graph(const OnlineAlgorithm& proto, std::size_t n, CostModel model,
                                        std::size_t max_vertices) {
  ProductGraph g;
  g.n = n;
  std::unordered_map<std::string, std::uint32_t> index;
  ProductState init(proto, n);
  index.emplace(init.key(), 0);
  g.keys.push_back(init.key());
  g.reps.push_back(init);
  g.bfs_parent.push_back({-1, 0});
  for (std::size_t v = 0; v < g.reps.size(); ++v) {
    std::vector<CycleEdge> edges;
    for (std::size_t p = 1; p <= n; ++p) {
      ProductState next = g.reps[v];
      auto [alg, halves] = next.request(p, model);
      std::string k = next.key();
      auto [it, fresh] = index.emplace(k, static_cast<std::uint32_t>(g.reps.size()));
      if (fresh) {
        if (g.reps.size() >= max_vertices)
          throw StateSpaceExceeded("product graph exceeds " + std::to_string(max_vertices) + " vertices");
        g.keys.push_back(std::move(k));
        g.reps.push_back(std::move(next));
        g.bfs_parent.push_back({static_cast<std::int64_t>(v), static_cast<std::uint32_t>(p)});
      }
      edges.push_back({it->second, alg, halves});
    }
    g.out.push_back(std::move(edges));
  }
  return g;
}

using CycleWalk = std::vector<std::pair<std::uint32_t, std::uint32_t>>;  // (vertex, position)

/// A cycle with positive total 2*alg*q - p*halves, or nothing.
inline std::optional<CycleWalk> positive_cycle(const ProductGraph& g, std::int64_t p, std::int64_t q) {
  const std::size_t V = g.out.size();
  std::vector<std::int64_t> dist(V, 0);
  std::vector<std::pair<std::int64_t, std::uint32_t>> parent(V, {-1, 0});
  std::vector<char> queued(V, 1);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t v = 0; v < V; ++v) queue.push_back(v);

  auto parent_cycle = [&]() -> std::optional<CycleWalk> {
    std::vector<std::uint32_t> stamp(V, 0);
    for (std::uint32_t s = 0; s < V; ++s) {
      std::int64_t v = s;
      while (v >= 0 && stamp[static_cast<std::size_t>(v)] == 0) {
        stamp[static_cast<std::size_t>(v)] = s + 1;
        v = parent[static_cast<std::size_t>(v)].first;
      }
      if (v >= 0 && stamp[static_cast<std::size_t>(v)] == s + 1) {
        CycleWalk walk;
        std::int64_t u = v;
        do {
          auto [par, pos] = parent[static_cast<std::size_t>(u)];
          walk.push_back({static_cast<std::uint32_t>(par), pos});
          u = par;
        } while (u != v);
        std::reverse(walk.begin(), walk.end());
        return walk;
      }
    }
    return std::nullopt;
  };

  std::size_t relaxations = 0;
  while (!queue.empty()) {
    std::uint32_t u = queue.front();
    queue.pop_front();
    queued[u] = 0;
    for (std::uint32_t k = 0; k < g.out[u].size(); ++k) {
      const CycleEdge& e = g.out[u][k];
      const std::int64_t w = 2 * e.alg * q - p * e.halves;
      if (dist[u] + w <= dist[e.to]) continue;
      dist[e.to] = dist[u] + w;
      parent[e.to] = {u, k + 1};
      if (++relaxations % V == 0)
        if (auto c = parent_cycle()) return c;
      if (!queued[e.to]) {
        queued[e.to] = 1;
        queue.push_back(e.to);
      }
    }
  }
  return std::nullopt;
}

/// A cycle of zero-OPT edges containing an edge of positive algorithm cost.
inline std::optional<CycleWalk> unbounded_cycle(const ProductGraph& g) {
  const std::size_t V = g.out.size();
  // Tarjan's SCC over zero-OPT edges, iterative.
  std::vector<std::int64_t> idx(V, -1), low(V, 0), comp(V, -1);
  std::vector<char> on_stack(V, 0);
  std::vector<std::uint32_t> stack;
  std::int64_t counter = 0, comps = 0;
  for (std::uint32_t s = 0; s < V; ++s) {
    if (idx[s] >= 0) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> call{{s, 0}};
    idx[s] = low[s] = counter++;
    stack.push_back(s);
    on_stack[s] = 1;
    while (!call.empty()) {
      auto& [v, k] = call.back();
      if (k < g.out[v].size()) {
        const CycleEdge& e = g.out[v][k++];
        if (e.halves != 0) continue;
        if (idx[e.to] < 0) {
          idx[e.to] = low[e.to] = counter++;
          stack.push_back(e.to);
          on_stack[e.to] = 1;
          call.push_back({e.to, 0});
        } else if (on_stack[e.to]) {
          low[v] = std::min(low[v], idx[e.to]);
        }
        continue;
      }
      if (low[v] == idx[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
      std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  for (std::uint32_t v = 0; v < V; ++v)
    for (std::uint32_t k = 0; k < g.out[v].size(); ++k) {
      const CycleEdge& e = g.out[v][k];
      if (e.halves != 0 || e.alg <= 0 || comp[e.to] != comp[v]) continue;
      // Close the cycle with a zero-OPT path from e.to back to v.
      std::vector<std::pair<std::int64_t, std::uint32_t>> par(V, {-2, 0});
      std::deque<std::uint32_t> bfs{e.to};
      par[e.to] = {-1, 0};
      while (!bfs.empty() && par[v].first == -2) {
        std::uint32_t u = bfs.front();
        bfs.pop_front();
        for (std::uint32_t j = 0; j < g.out[u].size(); ++j) {
          const CycleEdge& f = g.out[u][j];
          if (f.halves != 0 || comp[f.to] != comp[v] || par[f.to].first != -2) continue;
          par[f.to] = {u, j + 1};
          bfs.push_back(f.to);
        }
      }
      CycleWalk back;
      for (std::uint32_t u = v; u != e.to;) {
        auto [pu, pos] = par[u];
        back.push_back({static_cast<std::uint32_t>(pu), pos});
        u = static_cast<std::uint32_t>(pu);
      }
      std::reverse(back.begin(), back.end());
      CycleWalk walk{{v, k + 1}};
      walk.insert(walk.end(), back.begin(), back.end());
      return walk;
    }
  return std::nullopt;
}

}  // namespace detail

/// Replays `positions` from the state reached by `prefix` and returns the
/// algorithm cost and OPT halves; throws unless the walk closes a cycle.
inline std::pair<std::int64_t, std::int64_t> replay_cycle(const OnlineAlgorithm& proto, std::size_t n, CostModel model,
                                                          const std::vector<std::size_t>& prefix,
                                                          const std::vector<std::size_t>& positions) {
  detail::ProductState s(proto, n);
  for (auto p : prefix) s.request(p, model);
  const std::string start = s.key();
  std::int64_t alg = 0, halves = 0;
  for (auto p : positions) {
    auto [a, h] = s.request(p, model);
    alg += a;
    halves += h;
  }
  if (s.key() != start) throw InvariantViolation("witness walk does not return to its start state");
  return {alg, halves};
}

/// Supremum over reachable cycles of algorithm cost divided by pair-based
/// OPT, for a deterministic algorithm with a finite state. Candidate ratios
/// come from successive witness cycles, each strictly better than the last,
/// so the search ends exactly.
inline CycleRatioResult max_ratio_cycle(const OnlineAlgorithm& proto, std::size_t n,
                                        CostModel model = CostModel::Partial,
                                        std::optional<std::size_t> max_vertices = std::nullopt) {
  if (n < 1) throw InvalidSequence("max_ratio_cycle needs n >= 1");
  auto g = detail::build_product_graph(proto, n, model, max_vertices.value_or(max_states(2000000)));
  CycleRatioResult res;
  res.vertices = g.out.size();

  std::optional<detail::CycleWalk> best;
  if (auto inf = detail::unbounded_cycle(g)) {
    res.infinite = true;
    best = inf;
  } else {
    std::int64_t p = 0, q = 1;  // current ratio p/q, compared as 2*alg/halves
    while (auto c = detail::positive_cycle(g, p, q)) {
      std::int64_t a = 0, h = 0;
      for (auto [v, pos] : *c) {
        a += g.out[v][pos - 1].alg;
        h += g.out[v][pos - 1].halves;
      }
      if (h <= 0 || 2 * a * q <= p * h) throw InvariantViolation("cycle search returned a non-improving cycle");
      p = 2 * a;
      q = h;
      best = c;
    }
    res.ratio = Rational::make(p, q);
  }
  if (!best) return res;  // no cycle with positive algorithm cost

  // Witness: BFS path to the cycle start, then one lap.
  std::vector<std::size_t> prefix;
  for (std::int64_t v = (*best)[0].first; g.bfs_parent[static_cast<std::size_t>(v)].first >= 0;
       v = g.bfs_parent[static_cast<std::size_t>(v)].first)
    prefix.push_back(g.bfs_parent[static_cast<std::size_t>(v)].second);
  std::reverse(prefix.begin(), prefix.end());
  for (auto [v, pos] : *best) res.cycle_positions.push_back(pos);
  auto [a, h] = replay_cycle(proto, n, model, prefix, res.cycle_positions);
  res.cycle_alg = a;
  res.cycle_opt = HalfInteger::from_halves(h);
  if (!res.infinite && !(Rational::make(2 * a, h) == res.ratio))
    throw InvariantViolation("witness replay disagrees with the cycle search");
  if (res.infinite) res.ratio = {1, 0};

  // Concrete request sequence for the witness.
  auto alg = proto.clone();
  alg->reset(ListState::identity(n), n);
  res.witness = {Universe::letters(n), ListState::identity(n), {}};
  res.prefix_length = prefix.size();
  std::vector<std::size_t> all = prefix;
  all.insert(all.end(), res.cycle_positions.begin(), res.cycle_positions.end());
  for (auto pos : all) {
    ItemId z = alg->list().at(pos);
    res.witness.events.push_back(Event::access(z));
    alg->on_event(Event::access(z), model);
  }
  return res;
}

}  // namespace listup
