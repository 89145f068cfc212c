#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "listup/algorithm.hpp"
#include "listup/full_wf.hpp"
#include "listup/numeric.hpp"
#include "listup/permutations.hpp"

namespace listup {

struct NoTightEdge : Error { using Error::Error; };

enum class WfKind { FullWf, PairBasedWf };

inline const char* to_string(WfKind k) { return k == WfKind::FullWf ? "full-wf" : "pair-wf"; }

inline WfKind parse_wf_kind(std::string_view s) {
  if (s == "full-wf" || s == "full") return WfKind::FullWf;
  if (s == "pair-wf" || s == "pair") return WfKind::PairBasedWf;
  throw Error("unknown work-function kind '" + std::string(s) + "'");
}

/// Which list reorganizations the algorithm may choose. Orders are given as
/// permutations of the current list positions (0-based), front first.
struct Restriction {
  enum class Kind { All, WfaClass, StayOrMtf, Custom };
  Kind kind = Kind::All;
  std::function<bool(std::size_t request, std::span<const std::uint8_t> order)> custom;
  std::string label = "all";

  static Restriction all() { return {}; }
  static Restriction wfa_class() { return {Kind::WfaClass, {}, "wfa"}; }
  static Restriction stay_or_mtf() { return {Kind::StayOrMtf, {}, "stay-or-mtf"}; }
  static Restriction custom_rule(std::string name, std::function<bool(std::size_t, std::span<const std::uint8_t>)> f) {
    return {Kind::Custom, std::move(f), std::move(name)};
  }
  const std::string& name() const { return label; }
};

inline Restriction parse_restriction(std::string_view s) {
  if (s == "all" || s == "none") return Restriction::all();
  if (s == "wfa") return Restriction::wfa_class();
  if (s == "stay-or-mtf") return Restriction::stay_or_mtf();
  throw Error("unknown restriction '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Work-function states with items named by list position
// ---------------------------------------------------------------------------

namespace detail {

/// Full kind: one offset byte per permutation rank. Pair kind: one byte per
/// pair i < j holding W(i before j) - W(j before i) + 1.
class WfCodec {
 public:
  WfCodec(int n, WfKind kind, CostModel model) : n_(n), kind_(kind), model_(model), space_(permutation_space(n)) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs_.push_back({i, j});
  }

  int n() const { return n_; }
  const PermutationSpace& space() const { return space_; }

  std::string initial() const {
    std::string s;
    if (kind_ == WfKind::FullWf) {
      for (std::size_t r = 0; r < space_.size(); ++r) s += static_cast<char>(space_.inversions(r));
    } else {
      s.assign(pairs_.size(), static_cast<char>(0));  // gap -1: identity order is cheaper
    }
    return s;
  }

  /// Serves a request to the item at 0-based position `slot`; returns the
  /// new state and the OPT cost in halves.
  std::pair<std::string, std::int64_t> update(const std::string& s, int slot) const {
    if (kind_ == WfKind::FullWf) {
      std::vector<std::int32_t> g(space_.size());
      const std::int32_t extra = model_ == CostModel::Full ? 1 : 0;
      for (std::size_t r = 0; r < g.size(); ++r)
        g[r] = static_cast<unsigned char>(s[r]) + space_.position(r, slot) + extra;
      relax_under_swaps(space_, g);
      const std::int32_t m = *std::min_element(g.begin(), g.end());
      std::string out(g.size(), '\0');
      for (std::size_t r = 0; r < g.size(); ++r) out[r] = static_cast<char>(g[r] - m);
      return {out, 2 * static_cast<std::int64_t>(m)};
    }
    std::string out = s;
    std::int64_t halves = model_ == CostModel::Full ? 2 : 0;
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      auto [i, j] = pairs_[k];
      if (i != slot && j != slot) continue;
      PairWorkFunction w = pair_of(s[k]);
      PairWorkFunction next = pair_wf_update(w, i == slot ? PairRequest::X : PairRequest::Y);
      halves += next.average_halves() - w.average_halves();
      out[k] = static_cast<char>(next.xy - next.yx + 1);
    }
    return {out, halves};
  }

  /// State after the list becomes `order`, renaming positions so that
  /// `order` is the new identity.
  std::string relabel(const std::string& s, std::size_t order) const {
    if (kind_ == WfKind::FullWf) {
      std::string out(s.size(), '\0');
      for (std::size_t q = 0; q < space_.size(); ++q) out[space_.relabel(q, order)] = s[q];
      return out;
    }
    auto perm = space_.at(order);
    std::string out(pairs_.size(), '\0');
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      auto [a, b] = pairs_[k];
      int sa = perm[static_cast<std::size_t>(a)], sb = perm[static_cast<std::size_t>(b)];
      int g = sa < sb ? gap(s, sa, sb) : -gap(s, sb, sa);
      out[k] = static_cast<char>(g + 1);
    }
    return out;
  }

  /// Work-function value (normalized) of the list order `order`. For the pair
  /// kind this is the sum of the pair work functions.
  std::int64_t value(const std::string& s, std::size_t order) const {
    if (kind_ == WfKind::FullWf) return static_cast<unsigned char>(s[order]);
    std::int64_t v = 0;
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      auto [i, j] = pairs_[k];
      PairWorkFunction w = pair_of(s[k]);
      v += space_.position(order, i) < space_.position(order, j) ? w.xy : w.yx;
    }
    return v;
  }

 private:
  static PairWorkFunction pair_of(char c) {
    int g = static_cast<int>(c) - 1;
    return g < 0 ? PairWorkFunction{0, 1} : g == 0 ? PairWorkFunction{0, 0} : PairWorkFunction{1, 0};
  }
  int gap(const std::string& s, int i, int j) const {
    // index of pair (i, j), i < j, in lexicographic pair order
    std::size_t k = static_cast<std::size_t>(i * (2 * n_ - i - 1) / 2 + (j - i - 1));
    return static_cast<int>(s[k]) - 1;
  }

  int n_;
  WfKind kind_;
  CostModel model_;
  const PermutationSpace& space_;
  std::vector<std::pair<int, int>> pairs_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Game graph
// ---------------------------------------------------------------------------

/// Bipartite graph of OPT vertices (list, work function) and ALG vertices
/// (list, updated work function, request). The algorithm's list is always
/// the identity: items are named by their positions.
struct GameGraph {
  struct AlgEdge {
    std::uint32_t next;   // OPT vertex
    std::uint32_t order;  // permutation rank of the new list
    std::int32_t cost;    // access plus swaps
  };

  int n = 0;
  CostModel model = CostModel::Partial;
  WfKind kind = WfKind::FullWf;
  std::string restriction = "all";

  std::vector<std::string> opt_state;
  std::vector<std::uint32_t> opt_alg;      // n entries per OPT vertex
  std::vector<std::int32_t> opt_halves;    // n entries per OPT vertex
  std::vector<std::uint8_t> alg_request;   // 1-based position
  std::vector<std::string> alg_state;
  std::vector<std::uint32_t> alg_begin;    // CSR offsets into alg_edges
  std::vector<AlgEdge> alg_edges;

  std::size_t opt_count() const { return opt_state.size(); }
  std::size_t alg_count() const { return alg_request.size(); }
  std::uint32_t alg_of(std::uint32_t v, std::size_t request) const { return opt_alg[v * static_cast<std::size_t>(n) + request - 1]; }
  std::int32_t halves_of(std::uint32_t v, std::size_t request) const {
    return opt_halves[v * static_cast<std::size_t>(n) + request - 1];
  }
  std::span<const AlgEdge> edges(std::uint32_t a) const {
    return {alg_edges.data() + alg_begin[a], alg_begin[a + 1] - alg_begin[a]};
  }

  /// FNV-1a over the vertex states and edges.
  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](const void* p, std::size_t len) {
      auto* b = static_cast<const unsigned char*>(p);
      for (std::size_t i = 0; i < len; ++i) h = (h ^ b[i]) * 1099511628211ull;
    };
    for (auto& s : opt_state) mix(s.data(), s.size());
    mix(opt_alg.data(), opt_alg.size() * sizeof(opt_alg[0]));
    mix(opt_halves.data(), opt_halves.size() * sizeof(opt_halves[0]));
    mix(alg_request.data(), alg_request.size());
    for (auto& e : alg_edges) {
      mix(&e.next, sizeof e.next);
      mix(&e.order, sizeof e.order);
      mix(&e.cost, sizeof e.cost);
    }
    return h;
  }
};

/// Default vertex cap: 4 items with full work functions, 5 with pair ones.
inline std::size_t default_graph_bound(int n, WfKind kind) {
  const int limit = kind == WfKind::FullWf ? 4 : 5;
  return n <= limit ? std::size_t{20'000'000} : 0;
}

/// Builds the reachable graph from the identity list with the initial work
/// function.
inline GameGraph build_graph(int n, CostModel model, WfKind kind, const Restriction& restriction = {},
                             std::optional<std::size_t> max_vertices = std::nullopt) {
  if (n < 1 || n > 6) throw StateSpaceExceeded("game graph for " + std::to_string(n) + " items");
  const std::size_t cap = max_vertices.value_or(max_states(default_graph_bound(n, kind)));
  if (cap == 0)
    throw StateSpaceExceeded("game graph for " + std::to_string(n) + " items needs an explicit vertex bound");
  detail::WfCodec codec(n, kind, model);
  const auto& space = codec.space();

  GameGraph g;
  g.n = n;
  g.model = model;
  g.kind = kind;
  g.restriction = restriction.name();
  g.alg_begin.push_back(0);

  std::unordered_map<std::string, std::uint32_t> opt_index, alg_index;
  auto check_cap = [&] {
    if (g.opt_state.size() + g.alg_request.size() > cap)
      throw StateSpaceExceeded("game graph exceeds " + std::to_string(cap) + " vertices (" +
                               std::to_string(g.opt_state.size()) + " OPT, " + std::to_string(g.alg_request.size()) +
                               " ALG)");
  };
  auto opt_id = [&](std::string s) {
    auto [it, fresh] = opt_index.emplace(s, static_cast<std::uint32_t>(g.opt_state.size()));
    if (fresh) {
      g.opt_state.push_back(std::move(s));
      check_cap();
    }
    return it->second;
  };

  std::vector<std::uint8_t> stay(static_cast<std::size_t>(n));
  opt_id(codec.initial());
  for (std::uint32_t v = 0; v < g.opt_state.size(); ++v) {
    for (int r = 1; r <= n; ++r) {
      auto [next, halves] = codec.update(g.opt_state[v], r - 1);
      std::string akey = next;
      akey += static_cast<char>(r);
      auto [it, fresh] = alg_index.emplace(akey, static_cast<std::uint32_t>(g.alg_request.size()));
      g.opt_alg.push_back(it->second);
      g.opt_halves.push_back(static_cast<std::int32_t>(halves));
      if (!fresh) continue;
      g.alg_request.push_back(static_cast<std::uint8_t>(r));
      g.alg_state.push_back(next);
      check_cap();

      const std::int32_t access = static_cast<std::int32_t>(position_cost(static_cast<std::size_t>(r), model));
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      if (restriction.kind == Restriction::Kind::WfaClass)
        for (std::size_t q = 0; q < space.size(); ++q) best = std::min(best, codec.value(next, q) + space.inversions(q));
      for (std::size_t q = 0; q < space.size(); ++q) {
        auto perm = space.at(q);
        bool ok = true;
        switch (restriction.kind) {
          case Restriction::Kind::All: break;
          case Restriction::Kind::WfaClass: ok = codec.value(next, q) + space.inversions(q) == best; break;
          case Restriction::Kind::StayOrMtf: {
            // identity, or the requested item moved to the front
            ok = space.inversions(q) == 0 ||
                 (perm[0] == r - 1 && static_cast<std::size_t>(space.inversions(q)) == static_cast<std::size_t>(r - 1) &&
                  std::is_sorted(perm.begin() + 1, perm.end()));
            break;
          }
          case Restriction::Kind::Custom: ok = restriction.custom(static_cast<std::size_t>(r), perm); break;
        }
        if (!ok) continue;
        std::uint32_t to = opt_id(codec.relabel(next, q));
        g.alg_edges.push_back({to, static_cast<std::uint32_t>(q), access + space.inversions(q)});
      }
      if (g.alg_edges.size() == g.alg_begin.back())
        throw InvariantViolation("restriction '" + restriction.name() + "' leaves an ALG vertex without moves");
      g.alg_begin.push_back(static_cast<std::uint32_t>(g.alg_edges.size()));
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Potential iteration
// ---------------------------------------------------------------------------

/// Potentials scaled by 2q for a ratio p/q, so every quantity is an integer:
/// an ALG edge of cost c weighs 2q*c and OPT growth of h halves weighs p*h.
struct PotentialAssignment {
  enum class Status { Verified, Diverged };
  Status status = Status::Diverged;
  Rational rho;
  std::int64_t scale = 1;
  std::vector<std::int64_t> opt;
  std::vector<std::int64_t> alg;
  std::size_t rounds = 0;
  std::int64_t max_value = 0;
  /// OPT vertex that first exceeded the cap, when diverged.
  std::int64_t witness = -1;

  bool verified() const { return status == Status::Verified; }
  /// Additive constant of the competitive bound, in cost units.
  double additive() const { return opt.empty() ? 0.0 : static_cast<double>(opt[0]) / static_cast<double>(scale); }
  std::int64_t range() const {
    if (opt.empty()) return 0;
    auto [lo, hi] = std::minmax_element(opt.begin(), opt.end());
    return *hi - *lo;
  }
};

inline const char* to_string(PotentialAssignment::Status s) {
  return s == PotentialAssignment::Status::Verified ? "verified" : "diverged";
}

struct IterationLimits {
  std::size_t max_rounds = 100000;
  /// Cap on any potential, in cost units; defaults to 10 n^2 rho.
  std::optional<double> divergence_cap;
};

/// Value iteration from all-zero potentials: ALG vertices take the cheapest
/// move, OPT vertices the worst request net of rho times OPT's cost, never
/// below zero. A fixed point is a verified assignment.
inline PotentialAssignment potential_iteration(const GameGraph& g, Rational rho, IterationLimits limits = {}) {
  if (rho.num <= rho.den) throw Error("potential iteration needs rho > 1");
  PotentialAssignment out;
  out.rho = rho;
  out.scale = 2 * rho.den;
  const std::int64_t p = rho.num, D = out.scale;
  const double cap_units = limits.divergence_cap.value_or(10.0 * g.n * g.n * rho.value());
  const auto cap = static_cast<std::int64_t>(cap_units * static_cast<double>(D));
  out.opt.assign(g.opt_count(), 0);
  out.alg.assign(g.alg_count(), 0);
  const auto n = static_cast<std::size_t>(g.n);

  for (out.rounds = 1; out.rounds <= limits.max_rounds; ++out.rounds) {
    bool changed = false;
    for (std::uint32_t a = 0; a < g.alg_count(); ++a) {
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (const auto& e : g.edges(a)) best = std::min(best, D * e.cost + out.opt[e.next]);
      if (best != out.alg[a]) {
        out.alg[a] = best;
        changed = true;
      }
    }
    for (std::uint32_t v = 0; v < g.opt_count(); ++v) {
      std::int64_t val = 0;
      for (std::size_t r = 0; r < n; ++r)
        val = std::max(val, out.alg[g.opt_alg[v * n + r]] - p * g.opt_halves[v * n + r]);
      if (val != out.opt[v]) {
        out.opt[v] = val;
        changed = true;
        out.max_value = std::max(out.max_value, val);
        if (val > cap) {
          out.status = PotentialAssignment::Status::Diverged;
          out.witness = v;
          return out;
        }
      }
    }
    if (!changed) {
      out.status = PotentialAssignment::Status::Verified;
      return out;
    }
  }
  out.rounds = limits.max_rounds;
  out.status = PotentialAssignment::Status::Diverged;
  return out;
}

struct AuditResult {
  bool ok = true;
  std::string failure;
};

/// Exact re-check of the inequalities a verified assignment must satisfy:
/// OPT potentials are non-negative, no request lifts an ALG vertex above its
/// OPT vertex plus rho times OPT's cost, and every ALG vertex has a move
/// within its potential.
inline AuditResult audit(const GameGraph& g, const PotentialAssignment& a) {
  AuditResult res;
  if (a.opt.size() != g.opt_count() || a.alg.size() != g.alg_count()) return {false, "potential vector sizes differ from graph"};
  if (a.scale != 2 * a.rho.den) return {false, "scale does not match rho"};
  const std::int64_t p = a.rho.num, D = a.scale;
  const auto n = static_cast<std::size_t>(g.n);
  for (std::uint32_t v = 0; v < g.opt_count(); ++v) {
    if (a.opt[v] < 0) return {false, "negative potential at OPT vertex " + std::to_string(v)};
    for (std::size_t r = 0; r < n; ++r)
      if (a.alg[g.opt_alg[v * n + r]] > a.opt[v] + p * g.opt_halves[v * n + r])
        return {false, "request " + std::to_string(r + 1) + " at OPT vertex " + std::to_string(v) + " breaks the bound"};
  }
  for (std::uint32_t u = 0; u < g.alg_count(); ++u) {
    bool any = false;
    for (const auto& e : g.edges(u)) any = any || D * e.cost + a.opt[e.next] <= a.alg[u];
    if (!any) return {false, "ALG vertex " + std::to_string(u) + " has no move within its potential"};
  }
  return res;
}

// ---------------------------------------------------------------------------
// Extracted algorithm
// ---------------------------------------------------------------------------

/// Per ALG vertex, the index into its edges of the first tight move.
inline std::vector<std::uint32_t> tight_policy(const GameGraph& g, const PotentialAssignment& a) {
  std::vector<std::uint32_t> policy(g.alg_count());
  for (std::uint32_t u = 0; u < g.alg_count(); ++u) {
    auto es = g.edges(u);
    auto it = std::find_if(es.begin(), es.end(),
                           [&](const GameGraph::AlgEdge& e) { return a.scale * e.cost + a.opt[e.next] <= a.alg[u]; });
    if (it == es.end()) throw NoTightEdge("ALG vertex " + std::to_string(u) + " has no tight move");
    policy[u] = static_cast<std::uint32_t>(it - es.begin());
  }
  return policy;
}

/// Table-driven algorithm following a policy on a game graph. Handles
/// access-only sequences on lists of the graph's size.
class GraphAlgorithm : public OnlineAlgorithm {
 public:
  GraphAlgorithm(std::shared_ptr<const GameGraph> graph, std::vector<std::uint32_t> policy)
      : graph_(std::move(graph)), policy_(std::make_shared<const std::vector<std::uint32_t>>(std::move(policy))) {}

  std::string name() const override { return "verified"; }
  std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<GraphAlgorithm>(*this); }
  const ListState& list() const override { return list_; }

  void reset(const ListState& initial, std::size_t) override {
    if (static_cast<int>(initial.size()) != graph_->n)
      throw UniverseMismatch("graph algorithm built for " + std::to_string(graph_->n) + " items");
    list_ = initial;
    vertex_ = 0;
  }

  StepReport on_event(const Event& e, CostModel model) override {
    if (e.kind != EventKind::Access) throw InvalidSequence("graph algorithm handles access-only sequences");
    if (model != graph_->model) throw Error("graph algorithm built for the " + to_string(graph_->model) + " cost model");
    StepReport r;
    r.event = e;
    const std::size_t pos = list_.position(e.item);
    const std::uint32_t a = graph_->alg_of(vertex_, pos);
    const auto& edge = graph_->edges(a)[(*policy_)[a]];
    auto perm = permutation_space(graph_->n).at(edge.order);
    std::vector<ItemId> next;
    for (auto s : perm) next.push_back(list_.order()[s]);
    r.access_cost = position_cost(pos, model);
    r.swap_count = edge.cost - r.access_cost;
    r.total_cost = edge.cost;
    list_ = ListState(std::move(next));
    vertex_ = edge.next;
    r.list_after = list_;
    return r;
  }

  std::optional<std::string> state_key() const override { return std::to_string(vertex_); }

 private:
  std::shared_ptr<const GameGraph> graph_;
  std::shared_ptr<const std::vector<std::uint32_t>> policy_;
  ListState list_;
  std::uint32_t vertex_ = 0;
};

inline GraphAlgorithm extract_algorithm(std::shared_ptr<const GameGraph> graph, const PotentialAssignment& a) {
  if (!a.verified()) throw Error("extract_algorithm needs a verified assignment");
  auto policy = tight_policy(*graph, a);
  return GraphAlgorithm(std::move(graph), std::move(policy));
}

// ---------------------------------------------------------------------------
// Lower bounds for restricted classes
// ---------------------------------------------------------------------------

struct ClassLowerBound {
  bool certified = false;
  Rational rho;
  /// Request (1-based) per OPT vertex; 0 where the strategy never goes.
  std::vector<std::uint8_t> strategy;
  std::size_t strategy_vertices = 0;
  /// Smallest cycle ratio ALG/OPT in the strategy's subgraph.
  Rational worst_cycle;
  bool worst_unbounded = false;
  std::string note;
};

namespace detail {

struct StrategyEdge {
  std::uint32_t to;
  std::int64_t cost;
  std::int64_t halves;
};

/// OPT-to-OPT edges under a fixed adversary strategy, reachable part only.
inline std::vector<std::vector<StrategyEdge>> strategy_graph(const GameGraph& g, const std::vector<std::uint8_t>& s,
                                                             std::vector<char>& reached) {
  std::vector<std::vector<StrategyEdge>> out(g.opt_count());
  reached.assign(g.opt_count(), 0);
  std::deque<std::uint32_t> q{0};
  reached[0] = 1;
  while (!q.empty()) {
    std::uint32_t v = q.front();
    q.pop_front();
    const std::size_t r = s[v];
    const std::uint32_t a = g.alg_of(v, r);
    const std::int64_t h = g.halves_of(v, r);
    for (const auto& e : g.edges(a)) {
      out[v].push_back({e.next, e.cost, h});
      if (!reached[e.next]) {
        reached[e.next] = 1;
        q.push_back(e.next);
      }
    }
  }
  return out;
}

/// A reachable cycle with negative total 2q*cost - p*halves, as vertices.
inline std::optional<std::vector<std::uint32_t>> negative_cycle(const std::vector<std::vector<StrategyEdge>>& adj,
                                                                const std::vector<char>& reached, std::int64_t p,
                                                                std::int64_t q) {
  const std::size_t V = adj.size();
  std::vector<std::int64_t> dist(V, 0);
  std::vector<std::int64_t> parent(V, -1);
  std::vector<char> queued(V, 0);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t v = 0; v < V; ++v)
    if (reached[v]) {
      queue.push_back(v);
      queued[v] = 1;
    }
  auto parent_cycle = [&]() -> std::optional<std::vector<std::uint32_t>> {
    std::vector<std::uint32_t> stamp(V, 0);
    for (std::uint32_t s = 0; s < V; ++s) {
      std::int64_t v = s;
      while (v >= 0 && stamp[static_cast<std::size_t>(v)] == 0) {
        stamp[static_cast<std::size_t>(v)] = s + 1;
        v = parent[static_cast<std::size_t>(v)];
      }
      if (v >= 0 && stamp[static_cast<std::size_t>(v)] == s + 1) {
        std::vector<std::uint32_t> cyc;
        std::int64_t u = v;
        do {
          cyc.push_back(static_cast<std::uint32_t>(u));
          u = parent[static_cast<std::size_t>(u)];
        } while (u != v);
        std::reverse(cyc.begin(), cyc.end());
        return cyc;
      }
    }
    return std::nullopt;
  };
  std::size_t relax = 0;
  while (!queue.empty()) {
    std::uint32_t u = queue.front();
    queue.pop_front();
    queued[u] = 0;
    for (const auto& e : adj[u]) {
      const std::int64_t w = 2 * q * e.cost - p * e.halves;
      if (dist[u] + w >= dist[e.to]) continue;
      dist[e.to] = dist[u] + w;
      parent[e.to] = u;
      if (++relax % V == 0)
        if (auto c = parent_cycle()) return c;
      if (!queued[e.to]) {
        queued[e.to] = 1;
        queue.push_back(e.to);
      }
    }
  }
  return std::nullopt;
}

/// Whether a reachable cycle uses only edges with zero cost and zero OPT growth.
inline bool has_free_cycle(const std::vector<std::vector<StrategyEdge>>& adj) {
  const std::size_t V = adj.size();
  std::vector<char> color(V, 0);
  for (std::uint32_t s = 0; s < V; ++s) {
    if (color[s]) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> st{{s, 0}};
    color[s] = 1;
    while (!st.empty()) {
      auto& [v, k] = st.back();
      if (k == adj[v].size()) {
        color[v] = 2;
        st.pop_back();
        continue;
      }
      const auto& e = adj[v][k++];
      if (e.cost != 0 || e.halves != 0) continue;
      if (color[e.to] == 1) return true;
      if (color[e.to] == 0) {
        color[e.to] = 1;
        st.push_back({e.to, 0});
      }
    }
  }
  return false;
}

/// Cost and OPT halves of the cheapest-ratio edge between consecutive cycle vertices.
inline std::pair<std::int64_t, std::int64_t> cycle_totals(const std::vector<std::vector<StrategyEdge>>& adj,
                                                          const std::vector<std::uint32_t>& cyc, std::int64_t p,
                                                          std::int64_t q) {
  std::int64_t c = 0, h = 0;
  for (std::size_t i = 0; i < cyc.size(); ++i) {
    std::uint32_t u = cyc[i], v = cyc[(i + 1) % cyc.size()];
    const StrategyEdge* best = nullptr;
    for (const auto& e : adj[u])
      if (e.to == v && (!best || 2 * q * e.cost - p * e.halves < 2 * q * best->cost - p * best->halves)) best = &e;
    c += best->cost;
    h += best->halves;
  }
  return {c, h};
}

}  // namespace detail

/// Checks one adversary strategy exactly: every cycle the restricted
/// algorithm can close must have ALG >= rho * OPT, and none may be free.
inline ClassLowerBound certify_strategy(const GameGraph& g, Rational rho, std::vector<std::uint8_t> strategy) {
  ClassLowerBound res;
  res.rho = rho;
  std::vector<char> reached;
  auto adj = detail::strategy_graph(g, strategy, reached);
  for (std::size_t v = 0; v < strategy.size(); ++v)
    if (!reached[v]) strategy[v] = 0;
  res.strategy = std::move(strategy);
  res.strategy_vertices = static_cast<std::size_t>(std::count(reached.begin(), reached.end(), 1));
  if (detail::has_free_cycle(adj)) {
    res.note = "the algorithm can cycle at zero cost";
    return res;
  }
  if (auto c = detail::negative_cycle(adj, reached, rho.num, rho.den)) {
    auto [cost, h] = detail::cycle_totals(adj, *c, rho.num, rho.den);
    res.note = "cycle with ratio " + Rational::make(2 * cost, h).to_string() + " below rho";
    return res;
  }
  res.certified = true;
  // Worst cycle: walk the ratio down from rho until no cheaper cycle exists.
  std::int64_t p = rho.num, q = rho.den;
  bool found = false;
  // Start just above the largest conceivable finite ratio.
  std::int64_t max_cost = 1;
  for (auto& es : adj)
    for (auto& e : es) max_cost = std::max(max_cost, e.cost);
  p = 2 * max_cost * static_cast<std::int64_t>(adj.size()) + 1;
  q = 1;
  while (auto c = detail::negative_cycle(adj, reached, p, q)) {
    auto [cost, h] = detail::cycle_totals(adj, *c, p, q);
    p = 2 * cost;
    q = h;
    found = true;
  }
  if (found) res.worst_cycle = Rational::make(p, q);
  else res.worst_unbounded = true;
  return res;
}

/// Searches for an adversary strategy certifying that every algorithm
/// allowed by the graph's restriction has ratio at least rho. Candidates are
/// the greedy request choices of undamped value iteration at a few ratios at
/// or above rho; each candidate is certified exactly.
inline ClassLowerBound class_lower_bound(const GameGraph& g, Rational rho, std::size_t rounds = 4000) {
  ClassLowerBound last;
  last.rho = rho;
  last.note = "no candidate strategy";
  const auto n = static_cast<std::size_t>(g.n);
  std::vector<Rational> tries = {rho, Rational::make(rho.num * 100 + rho.den, rho.den * 100),
                                 Rational::make(rho.num * 10 + rho.den, rho.den * 10)};
  for (const Rational& t : tries) {
    const std::int64_t p = t.num, D = 2 * t.den;
    std::vector<std::int64_t> opt(g.opt_count(), 0), alg(g.alg_count(), 0);
    std::vector<std::uint8_t> strat(g.opt_count(), 1);
    for (std::size_t round = 1; round <= rounds; ++round) {
      for (std::uint32_t a = 0; a < g.alg_count(); ++a) {
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (const auto& e : g.edges(a)) best = std::min(best, D * e.cost + opt[e.next]);
        alg[a] = best;
      }
      for (std::uint32_t v = 0; v < g.opt_count(); ++v) {
        std::int64_t val = std::numeric_limits<std::int64_t>::min();
        for (std::size_t r = n; r >= 1; --r) {
          std::int64_t x = alg[g.opt_alg[v * n + r - 1]] - p * g.opt_halves[v * n + r - 1];
          if (x > val) {
            val = x;
            strat[v] = static_cast<std::uint8_t>(r);
          }
        }
        opt[v] = val;
      }
      // Keep values bounded: shift so the initial vertex sits at zero.
      const std::int64_t base = opt[0];
      for (auto& x : opt) x -= base;
      if ((round & (round - 1)) == 0 && round >= 16) {
        ClassLowerBound c = certify_strategy(g, rho, strat);
        if (c.certified) return c;
        last = std::move(c);
      }
    }
  }
  last.certified = false;
  return last;
}

}  // namespace listup
