#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "listup/algorithm.hpp"
#include "listup/baselines.hpp"
#include "listup/core.hpp"
#include "listup/fpm.hpp"

namespace listup {

class TraceMismatch : public Error {
 public:
  TraceMismatch(std::size_t step, const std::string& what)
      : Error("trace diverges at step " + std::to_string(step) + ": " + what), step_(step) {}
  /// 1-based index of the first divergent request.
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

// ---------------------------------------------------------------------------
// Offline schedules
// ---------------------------------------------------------------------------

/// Reorders the list to `list` right before event `before_event` (0-based;
/// equal to the sequence length for a final reorder).
struct Rearrangement {
  std::size_t before_event = 0;
  ListState list;
};

struct ScheduleRun {
  std::int64_t access = 0;
  std::int64_t swaps = 0;
  ListState final_list;
  std::int64_t total() const { return access + swaps; }
};

/// Cost of serving an access-only sequence with the given reorders.
inline ScheduleRun run_schedule(const RequestSequence& seq, CostModel model, const std::vector<Rearrangement>& plan) {
  if (!seq.access_only()) throw InvalidSequence("offline schedules handle access-only sequences");
  ScheduleRun out;
  ListState list = seq.initial;
  std::size_t next = 0;
  auto apply_until = [&](std::size_t t) {
    while (next < plan.size() && plan[next].before_event <= t) {
      if (plan[next].before_event < t) throw InvalidSequence("schedule reorders out of order");
      out.swaps += static_cast<std::int64_t>(swap_distance(list, plan[next].list));
      list = plan[next].list;
      ++next;
    }
  };
  for (std::size_t t = 0; t < seq.events.size(); ++t) {
    apply_until(t);
    out.access += access_cost(list, seq.events[t].item, model);
  }
  apply_until(seq.events.size());
  if (next != plan.size()) throw InvalidSequence("schedule reorders past the end of the sequence");
  out.final_list = list;
  return out;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct LowerBoundReport {
  std::string generator;
  std::string algorithm;
  CostModel model = CostModel::Partial;
  RequestSequence sequence;
  std::int64_t alg_cost = 0;
  /// Cost of the constructed offline schedule.
  std::int64_t opt_bound = 0;
  std::optional<std::int64_t> predicted_alg;
  std::optional<std::int64_t> predicted_opt;
  std::vector<Rearrangement> schedule;
  ListState alg_final;
  ListState opt_final;

  double ratio() const { return opt_bound == 0 ? 0.0 : static_cast<double>(alg_cost) / static_cast<double>(opt_bound); }
};

namespace detail {

inline std::int64_t run_cost(OnlineAlgorithm& alg, const RequestSequence& seq, CostModel model, ListState* final_list) {
  alg.reset(seq.initial, seq.universe.size());
  std::int64_t total = 0;
  for (const Event& e : seq.events) total += alg.on_event(e, model).total_cost;
  if (final_list) *final_list = alg.list();
  return total;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// DBIT, full cost model
// ---------------------------------------------------------------------------

/// Closed forms for one round with |A| = a, as integers.
inline std::int64_t dbit_full_round_cost(std::int64_t n, std::int64_t a) {
  return (12 * n * n - 8 * a * n + a * a + 3 * a - 4 * n) / 2;
}
inline std::int64_t dbit_full_round_opt(std::int64_t n, std::int64_t a) { return 2 * n * n - 2 * a * n + a * a + 2 * n - a; }

/// Each round requests the first `a` items back to front, then every other
/// item twice from the back, and repeats that once more. Later rounds rename
/// items by the list reached so far.
inline LowerBoundReport gen_dbit_full_split(std::size_t n, std::size_t a, std::size_t rounds = 1) {
  if (n < 2 || a < 1 || a >= n) throw InvalidSequence("dbit-full needs 0 < a < n");
  if (rounds < 1) throw InvalidSequence("dbit-full needs at least one round");
  LowerBoundReport r;
  r.generator = "dbit-full";
  r.algorithm = "dbit";
  r.model = CostModel::Full;
  r.sequence = {Universe::indexed(n), ListState::identity(n), {}};

  DeterministicBit dbit;
  ListState list = r.sequence.initial;  // both lists agree at round boundaries
  for (std::size_t round = 0; round < rounds; ++round) {
    const auto& x = list.order();
    auto push = [&](ItemId item) { r.sequence.events.push_back(Event::access(item)); };
    const std::size_t start = r.sequence.events.size();
    for (int half = 0; half < 2; ++half) {
      for (std::size_t i = a; i-- > 0;) push(x[i]);
      for (std::size_t i = n; i-- > a;) {
        push(x[i]);
        push(x[i]);
      }
    }
    // Offline: after the first pass over A, put B ahead of A.
    std::vector<ItemId> ba(x.begin() + static_cast<std::ptrdiff_t>(a), x.end());
    ba.insert(ba.end(), x.begin(), x.begin() + static_cast<std::ptrdiff_t>(a));
    r.schedule.push_back({start + a, ListState(ba)});
    list = ListState(std::move(ba));
  }
  r.alg_cost = detail::run_cost(dbit, r.sequence, r.model, &r.alg_final);
  auto opt = run_schedule(r.sequence, r.model, r.schedule);
  r.opt_bound = opt.total();
  r.opt_final = opt.final_list;
  const auto N = static_cast<std::int64_t>(n), A = static_cast<std::int64_t>(a), K = static_cast<std::int64_t>(rounds);
  r.predicted_alg = K * dbit_full_round_cost(N, A);
  r.predicted_opt = K * dbit_full_round_opt(N, A);
  return r;
}

/// As above with |A| = c*n, which must be integral.
inline LowerBoundReport gen_dbit_full(std::size_t n, double c, std::size_t rounds = 1) {
  const double cn = c * static_cast<double>(n);
  const double a = std::round(cn);
  if (std::abs(cn - a) > 1e-9) throw InvalidSequence("dbit-full: c*n = " + std::to_string(cn) + " is not an integer");
  return gen_dbit_full_split(n, static_cast<std::size_t>(a), rounds);
}

/// Size of A closest to the ratio-maximizing split for a list of n items.
inline std::size_t dbit_full_best_split(std::size_t n) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(n) * (5 - std::sqrt(13.0)) / 3));
}

// ---------------------------------------------------------------------------
// DBIT, partial cost model
// ---------------------------------------------------------------------------

namespace detail {

struct DbitPartialPlan {
  std::vector<int> requests;  // abstract item indices
  std::vector<int> level;     // m when the request is the first request of x_{m-1} in a σ_m block, else 0
};

/// DBIT's final list (front to back) after serving `req` from the list m-1, ..., 0.
inline std::vector<int> dbit_final(int m, const std::vector<int>& req) {
  std::vector<ItemId> init;
  for (int i = m - 1; i >= 0; --i) init.push_back(i);
  RequestSequence s{Universe::indexed(static_cast<std::size_t>(m)), ListState(init), {}};
  for (int x : req) s.events.push_back(Event::access(x));
  DeterministicBit d;
  ListState fin;
  run_cost(d, s, CostModel::Partial, &fin);
  return {fin.order().begin(), fin.order().end()};
}

inline DbitPartialPlan dbit_partial_plan(int m) {
  if (m == 2) return {{1, 0, 0, 1, 0, 0}, {2, 0, 0, 0, 0, 0}};
  DbitPartialPlan inner = dbit_partial_plan(m - 1);
  std::vector<int> fin = dbit_final(m - 1, inner.requests);
  // fin[k] = x_{π(m-2-k)}
  std::vector<int> pi(static_cast<std::size_t>(m - 1));
  for (int k = 0; k < m - 1; ++k) pi[static_cast<std::size_t>(m - 2 - k)] = fin[static_cast<std::size_t>(k)];
  DbitPartialPlan out;
  auto append = [&](const DbitPartialPlan& p, bool relabel) {
    for (std::size_t t = 0; t < p.requests.size(); ++t) {
      out.requests.push_back(relabel ? pi[static_cast<std::size_t>(p.requests[t])] : p.requests[t]);
      out.level.push_back(p.level[t]);
    }
  };
  out.requests.push_back(m - 1);
  out.level.push_back(m);
  append(inner, false);
  out.requests.push_back(m - 1);
  out.level.push_back(0);
  append(inner, true);
  return out;
}

}  // namespace detail

/// The recursive sequence on n items starting from the list x_{n-1}, ..., x_0.
/// The offline schedule moves the item opening each block from the front to
/// the end of that block right after its first request.
inline LowerBoundReport gen_dbit_partial(std::size_t n) {
  if (n < 2) throw InvalidSequence("dbit-partial needs n >= 2");
  if (n > 20) throw StateSpaceExceeded("dbit-partial: sequence length 2^(n+1) - 2 too large");
  LowerBoundReport r;
  r.generator = "dbit-partial";
  r.algorithm = "dbit";
  r.model = CostModel::Partial;
  std::vector<ItemId> init;
  for (auto i = static_cast<ItemId>(n); i-- > 0;) init.push_back(i);
  r.sequence = {Universe::indexed(n), ListState(init), {}};
  auto plan = detail::dbit_partial_plan(static_cast<int>(n));
  for (int x : plan.requests) r.sequence.events.push_back(Event::access(x));

  ListState list = r.sequence.initial;
  for (std::size_t t = 0; t < plan.requests.size(); ++t) {
    if (plan.level[t] == 0) continue;
    ItemId x = plan.requests[t];
    if (list.position(x) != 1) throw InvariantViolation("dbit-partial schedule: block opener not at the front");
    list.move_to(x, static_cast<std::size_t>(plan.level[t]));
    r.schedule.push_back({t + 1, list});
  }
  DeterministicBit dbit;
  r.alg_cost = detail::run_cost(dbit, r.sequence, r.model, &r.alg_final);
  auto opt = run_schedule(r.sequence, r.model, r.schedule);
  r.opt_bound = opt.total();
  r.opt_final = opt.final_list;
  return r;
}

// ---------------------------------------------------------------------------
// Half-Move
// ---------------------------------------------------------------------------

/// Requests the back half of the list from the last item forward, k times.
/// The offline schedule moves the back half to the front before the first
/// request and stays put.
inline LowerBoundReport gen_halfmove(std::size_t n, std::size_t k) {
  if (n < 2 || n % 2 != 0) throw InvalidSequence("halfmove needs an even n >= 2");
  if (k < 1) throw InvalidSequence("halfmove needs k >= 1");
  LowerBoundReport r;
  r.generator = "halfmove";
  r.algorithm = "halfmove";
  r.model = CostModel::Full;
  r.sequence = {Universe::indexed(n), ListState::identity(n), {}};
  const std::size_t h = n / 2;
  for (std::size_t round = 0; round < k; ++round)
    for (std::size_t i = n; i-- > h;) r.sequence.events.push_back(Event::access(static_cast<ItemId>(i)));
  std::vector<ItemId> front_back;
  for (std::size_t i = h; i < n; ++i) front_back.push_back(static_cast<ItemId>(i));
  for (std::size_t i = 0; i < h; ++i) front_back.push_back(static_cast<ItemId>(i));
  r.schedule.push_back({0, ListState(front_back)});
  HalfMove hm;
  r.alg_cost = detail::run_cost(hm, r.sequence, r.model, &r.alg_final);
  auto opt = run_schedule(r.sequence, r.model, r.schedule);
  r.opt_bound = opt.total();
  r.opt_final = opt.final_list;
  const auto H = static_cast<std::int64_t>(h), K = static_cast<std::int64_t>(k);
  r.predicted_alg = K * H * (3 * H - 1);
  r.predicted_opt = H * H + K * H * (H + 1) / 2;
  return r;
}

// ---------------------------------------------------------------------------
// Last-item workload
// ---------------------------------------------------------------------------

/// Best static list for an access-only sequence: items by decreasing request
/// count, ties in initial order, reached with one rearrangement up front.
inline std::vector<Rearrangement> static_schedule(const RequestSequence& seq) {
  if (!seq.access_only()) throw InvalidSequence("static schedules handle access-only sequences");
  std::vector<std::size_t> count(seq.universe.size(), 0);
  for (const Event& e : seq.events) ++count[static_cast<std::size_t>(e.item)];
  std::vector<ItemId> order = seq.initial.order();
  std::stable_sort(order.begin(), order.end(), [&](ItemId a, ItemId b) {
    return count[static_cast<std::size_t>(a)] > count[static_cast<std::size_t>(b)];
  });
  return {{0, ListState(std::move(order))}};
}

/// Always requests the item at the back of `alg`'s list. The OPT bound is
/// the best static schedule.
inline LowerBoundReport gen_last_item(const OnlineAlgorithm& proto, std::size_t n, std::size_t length,
                                      CostModel model = CostModel::Partial) {
  if (n < 1) throw InvalidSequence("last-item workload needs n >= 1");
  LowerBoundReport r;
  r.generator = "last-item";
  r.algorithm = proto.name();
  r.model = model;
  r.sequence = {Universe::letters(n), ListState::identity(n), {}};
  auto alg = proto.clone();
  alg->reset(r.sequence.initial, n);
  for (std::size_t t = 0; t < length; ++t) {
    Event e = Event::access(alg->list().at(n));
    r.alg_cost += alg->on_event(e, model).total_cost;
    r.sequence.events.push_back(e);
  }
  r.alg_final = alg->list();
  r.schedule = static_schedule(r.sequence);
  auto opt = run_schedule(r.sequence, model, r.schedule);
  r.opt_bound = opt.total();
  r.opt_final = opt.final_list;
  return r;
}

// ---------------------------------------------------------------------------
// FPM lower-bound cycle
// ---------------------------------------------------------------------------

/// The repeated 16-request cycle over items a..e and the two warm-up requests.
inline const std::string& fpm_lb_cycle() {
  static const std::string s = "ceedcdeedccbbdaa";
  return s;
}
inline const std::string& fpm_lb_warmup() {
  static const std::string s = "da";
  return s;
}

/// Expected cumulative FPM cost within one cycle.
inline const std::array<std::int64_t, 16>& fpm_lb_expected_trace() {
  static const std::array<std::int64_t, 16> t = {2, 6, 14, 20, 28, 33, 35, 39, 42, 44, 48, 52, 60, 64, 68, 76};
  return t;
}

struct FpmLbReport {
  LowerBoundReport base;
  ListState start;
  bool searched = false;
  std::int64_t warmup_cost = 0;
  HalfInteger warmup_pair_opt;
  std::vector<std::int64_t> cycle_costs;
  std::vector<HalfInteger> cycle_pair_opt;
  std::vector<std::int64_t> first_cycle_trace;
  HalfInteger pair_opt;
  /// Explicit offline schedule cost for the cycles alone.
  std::int64_t cycle_schedule_cost = 0;

  std::int64_t steady_cost() const { return base.alg_cost - warmup_cost; }
  HalfInteger steady_pair_opt() const { return pair_opt - warmup_pair_opt; }
  double total_ratio() const { return static_cast<double>(base.alg_cost) / pair_opt.value(); }
  double steady_ratio() const { return static_cast<double>(steady_cost()) / steady_pair_opt().value(); }
};

namespace detail {

/// Cumulative FPM costs over the first cycle after the warm-up from `start`;
/// returns the first divergent step (1-based) or 0.
inline std::size_t fpm_lb_divergence(const ListState& start, std::vector<std::int64_t>* trace) {
  FpmEngine fpm(start, 5);
  for (char ch : fpm_lb_warmup()) fpm.access(ch - 'a');
  std::int64_t cum = 0;
  std::size_t first_bad = 0;
  for (std::size_t t = 0; t < fpm_lb_cycle().size(); ++t) {
    cum += fpm.access(fpm_lb_cycle()[t] - 'a').total_cost;
    if (trace) trace->push_back(cum);
    if (!first_bad && cum != fpm_lb_expected_trace()[t]) first_bad = t + 1;
  }
  return first_bad;
}

}  // namespace detail

/// Warm-up then k cycles. The start order defaults to a, b, c, d, e; if
/// that does not reproduce the expected trace, every start order is tried.
inline FpmLbReport gen_fpm_lb(std::size_t k, bool allow_search = true) {
  if (k < 1) throw InvalidSequence("fpm-lb needs at least one cycle");
  FpmLbReport out;
  out.start = ListState::identity(5);
  std::size_t bad = detail::fpm_lb_divergence(out.start, nullptr);
  if (bad) {
    if (!allow_search) throw TraceMismatch(bad, "cumulative cost differs from the expected trace");
    std::vector<ItemId> p = {0, 1, 2, 3, 4};
    bool found = false;
    while (std::next_permutation(p.begin(), p.end())) {
      if (!detail::fpm_lb_divergence(ListState(p), nullptr)) {
        out.start = ListState(p);
        found = true;
        break;
      }
    }
    if (!found) throw TraceMismatch(bad, "no start order reproduces the expected trace");
    out.searched = true;
  }
  detail::fpm_lb_divergence(out.start, &out.first_cycle_trace);

  auto& r = out.base;
  r.generator = "fpm-lb";
  r.algorithm = "fpm";
  r.model = CostModel::Partial;
  r.sequence = {Universe::letters(5), out.start, {}};
  for (char ch : fpm_lb_warmup()) r.sequence.events.push_back(Event::access(ch - 'a'));
  for (std::size_t i = 0; i < k; ++i)
    for (char ch : fpm_lb_cycle()) r.sequence.events.push_back(Event::access(ch - 'a'));

  FpmAlgorithm fpm;
  RunResult run = run_algorithm(fpm, r.sequence, r.model);
  r.alg_cost = run.total_cost;
  r.alg_final = fpm.list();
  out.pair_opt = run.pair_opt;
  const std::size_t w = fpm_lb_warmup().size(), c = fpm_lb_cycle().size();
  for (std::size_t t = 0; t < w; ++t) out.warmup_cost += run.steps[t].total_cost;
  out.warmup_pair_opt = run.cumulative_pair_opt[w - 1];
  for (std::size_t i = 0; i < k; ++i) {
    std::int64_t cost = 0;
    for (std::size_t t = w + i * c; t < w + (i + 1) * c; ++t) cost += run.steps[t].total_cost;
    out.cycle_costs.push_back(cost);
    out.cycle_pair_opt.push_back(run.cumulative_pair_opt[w + (i + 1) * c - 1] -
                                 run.cumulative_pair_opt[w + i * c - 1]);
  }

  // Offline: hold c, d, e, a, b; after each cycle's first request put c third,
  // after its ninth bring c back to the front.
  auto L = [](const char* s) {
    std::vector<ItemId> v;
    for (; *s; ++s) v.push_back(*s - 'a');
    return ListState(v);
  };
  r.schedule.push_back({0, L("cdeab")});
  for (std::size_t i = 0; i < k; ++i) {
    r.schedule.push_back({w + i * c + 1, L("decab")});
    r.schedule.push_back({w + i * c + 9, L("cdeab")});
  }
  auto opt = run_schedule(r.sequence, r.model, r.schedule);
  r.opt_bound = opt.total();
  r.opt_final = opt.final_list;

  RequestSequence cycles{Universe::letters(5), L("cdeab"), {}};
  std::vector<Rearrangement> cycle_plan;
  for (std::size_t i = 0; i < k; ++i) {
    for (char ch : fpm_lb_cycle()) cycles.events.push_back(Event::access(ch - 'a'));
    cycle_plan.push_back({i * c + 1, L("decab")});
    cycle_plan.push_back({i * c + 9, L("cdeab")});
  }
  out.cycle_schedule_cost = run_schedule(cycles, r.model, cycle_plan).total();
  return out;
}

}  // namespace listup
