// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"
#include "listup/certificate.hpp"
#include "listup/listup.hpp"

using namespace listup;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

// ---------------------------------------------------------------------------

Outcome fpm_cycle() {
  auto t0 = Clock::now();
  Outcome o;
  FpmLbReport r;
  try {
    r = gen_fpm_lb(3, true);
  } catch (const TraceMismatch& e) {
    return {false, e.what()};
  }
  const auto& want = fpm_lb_expected_trace();
  o.pass = std::equal(want.begin(), want.end(), r.first_cycle_trace.begin(), r.first_cycle_trace.end());
  for (auto c : r.cycle_costs) o.pass = o.pass && c == 76;
  for (auto h : r.cycle_pair_opt) o.pass = o.pass && h == HalfInteger::from_int(25);
  const double t = seconds_since(t0);
  o.pass = o.pass && t < 1.0;
  std::ostringstream d;
  d << "per-cycle cost " << r.cycle_costs.front() << ", pair OPT " << r.cycle_pair_opt.front()
    << ", trace " << (o.pass ? "matches" : "differs") << (r.searched ? " (start order searched)" : " (default start)")
    << ", " << t << " s";
  o.detail = d.str();
  return o;
}

// Replays `seq` with an audited engine; returns false on the first step where
// cost + change of potential exceeds R times the pair-OPT growth.
bool amortized_run(const RequestSequence& seq, std::size_t& steps, std::size_t& membership, std::string& why) {
  FpmEngine e(seq.initial, seq.universe.size());
  PairTracker opt(seq.universe.size());
  ListState shadow = seq.initial;
  opt.activate_all(shadow);
  const double R = e.params().R;
  try {
    for (const Event& ev : seq.events) {
      const double before = e.potential();
      HalfInteger dopt;
      auto r = e.step(ev, CostModel::Partial, true);
      if (ev.kind == EventKind::Insert) {
        opt.on_insert(ev.item, shadow);
        shadow.push_back(ev.item);
        ++membership;
        if (r.total_cost != 0 || std::abs(r.membership_dphi) > 1e-9) {
          why = "insertion with nonzero adjusted cost or potential change";
          return false;
        }
      } else {
        dopt = opt.on_access(ev.item, shadow);
        if (ev.kind == EventKind::Delete) {
          opt.on_remove(ev.item, shadow);
          shadow.erase(ev.item);
          ++membership;
          if (std::abs(r.membership_dphi) > 1e-9) {
            why = "removal changed the potential";
            return false;
          }
        }
      }
      if (static_cast<double>(r.total_cost) + e.potential() - before > R * dopt.value() + 1e-9) {
        why = "amortized cost exceeds R times pair-OPT growth";
        return false;
      }
      ++steps;
    }
  } catch (const InvariantViolation& err) {
    why = err.what();
    return false;
  }
  return true;
}

Outcome amortized_suite() {
  auto t0 = Clock::now();
  std::size_t steps = 0, membership = 0;
  std::string why;
  for (std::uint64_t seed = 1; steps < 100000; ++seed) {
    RandomSpec spec;
    spec.items = 3 + seed % 4;
    spec.length = 1000;
    spec.seed = seed;
    spec.insert_prob = 0.1;
    spec.delete_prob = 0.1;
    spec.max_items = 7;
    if (!amortized_run(random_sequence(spec), steps, membership, why))
      return {false, "seed " + std::to_string(seed) + ": " + why};
  }
  const double t = seconds_since(t0);
  std::ostringstream d;
  d << steps << " steps (" << membership << " insert/delete), all inequalities, states and transitions valid, " << t
    << " s";
  return {t < 120, d.str()};
}

Outcome gain_algebra() {
  PotentialParams p;
  auto g = gain_vectors(p);
  auto pm = default_pm_closed_form(), fm = default_fm_closed_form();
  double worst_closed = 0, worst_comb = 0;
  for (int i = 0; i < kPairStates; ++i) {
    worst_closed = std::max({worst_closed, std::abs(g.pm[i] - pm[i].value()), std::abs(g.fm[i] - fm[i].value())});
    worst_comb = std::max(worst_comb, std::abs(p.c * g.pm[i] + (1 - p.c) * g.fm[i] - p.R * g.opt[i]));
  }
  std::mt19937_64 rng(2024);
  std::size_t bad = 0;
  for (int t = 0; t < 10000; ++t) {
    CountVector v{};
    for (auto& x : v) x = static_cast<std::int64_t>(rng() % 20);
    const double lhs = std::min(dot(g.pm, v), dot(g.fm, v));
    const double rhs = p.R * dot(g.opt, v);
    if (lhs > rhs + 1e-9 * (1 + std::abs(rhs))) ++bad;
  }
  std::ostringstream d;
  d << "closed-form error " << worst_closed << ", combination error " << worst_comb << ", " << bad
    << " of 10000 random V above R*G_OPT";
  return {worst_closed <= 1e-12 && worst_comb <= 1e-12 && bad == 0, d.str()};
}

// Shortest path over explicit lists: every schedule is some walk through
// these layers.
std::int64_t layered_opt(const RequestSequence& seq) {
  std::vector<ItemId> v = seq.initial.order();
  std::sort(v.begin(), v.end());
  std::vector<ListState> lists;
  do lists.emplace_back(v);
  while (std::next_permutation(v.begin(), v.end()));
  std::vector<std::int64_t> cost(lists.size());
  for (std::size_t i = 0; i < lists.size(); ++i) cost[i] = static_cast<std::int64_t>(swap_distance(seq.initial, lists[i]));
  for (const Event& e : seq.events) {
    std::vector<std::int64_t> next(lists.size(), std::numeric_limits<std::int64_t>::max());
    for (std::size_t a = 0; a < lists.size(); ++a) {
      const std::int64_t served = cost[a] + access_cost(lists[a], e.item, CostModel::Partial);
      for (std::size_t b = 0; b < lists.size(); ++b)
        next[b] = std::min(next[b], served + static_cast<std::int64_t>(swap_distance(lists[a], lists[b])));
    }
    cost = std::move(next);
  }
  return *std::min_element(cost.begin(), cost.end());
}

Outcome oracle_soundness() {
  std::mt19937_64 rng(77);
  std::size_t mismatches = 0, pair_above = 0;
  for (int t = 0; t < 1000; ++t) {
    RandomSpec spec;
    spec.items = 1 + rng() % 4;
    spec.length = rng() % 11;
    spec.seed = rng();
    auto seq = random_sequence(spec);
    const auto exact = opt_exact(seq);
    mismatches += exact != layered_opt(seq);
    pair_above += pair_based_opt(seq).value() > static_cast<double>(exact);
  }
  std::ostringstream d;
  d << "1000 sequences: " << mismatches << " opt_exact mismatches, " << pair_above << " with pair OPT above exact";
  return {mismatches == 0 && pair_above == 0, d.str()};
}

Outcome dbit_bounds() {
  auto t0 = Clock::now();
  const std::size_t n = 300;
  auto full = gen_dbit_full_split(n, dbit_full_best_split(n));
  auto partial = gen_dbit_partial(8);
  auto s2 = gen_dbit_partial(2);
  const double t = seconds_since(t0);
  std::ostringstream d;
  d << "full n=300 |A|=" << dbit_full_best_split(n) << " ratio " << full.ratio() << "; partial n=8 ratio "
    << partial.ratio() << "; sigma_2 " << s2.alg_cost << " vs " << s2.opt_bound << "; " << t << " s";
  const bool closed = full.alg_cost == *full.predicted_alg && full.opt_bound == *full.predicted_opt;
  return {full.ratio() >= 3.25 && partial.ratio() >= 3.9 && s2.alg_cost == 8 && s2.opt_bound == 2 && closed && t < 30,
          d.str()};
}

Outcome halfmove_bound() {
  auto r = gen_halfmove(40, 100);
  const bool closed = r.alg_cost == *r.predicted_alg && r.opt_bound == *r.predicted_opt;
  std::ostringstream d;
  d << "cost " << r.alg_cost << " vs schedule " << r.opt_bound << ", ratio " << r.ratio() << ", closed forms "
    << (closed ? "match" : "differ");
  return {r.ratio() >= 5.5 && closed, d.str()};
}

Outcome verifier() {
  std::ostringstream d;
  bool pass = true;
  const Rational three = Rational::make(3, 1);
  for (WfKind k : {WfKind::FullWf, WfKind::PairBasedWf}) {
    auto t0 = Clock::now();
    auto g = build_graph(3, CostModel::Partial, k);
    auto a = potential_iteration(g, three);
    const double t = seconds_since(t0);
    const bool ok = a.verified() && audit(g, a).ok && check_certificate(make_certificate(g, a)).ok;
    pass = pass && ok && t < 10;
    d << "n=3 " << to_string(k) << " " << to_string(a.status) << " in " << t << " s; ";
  }
  {
    auto t0 = Clock::now();
    auto g = build_graph(4, CostModel::Partial, WfKind::FullWf);
    auto a = potential_iteration(g, three);
    const double t = seconds_since(t0);
    auto cert = make_certificate(g, a);
    auto back = certificate_from_json(nlohmann::json::parse(to_json(cert).dump()));
    const bool ok = a.verified() && audit(g, a).ok && check_certificate(back).ok;
    pass = pass && ok && t < 600;
    d << "n=4 full-wf " << to_string(a.status) << " in " << t << " s; ";
  }
  auto g = std::make_shared<GameGraph>(build_graph(3, CostModel::Partial, WfKind::FullWf));
  auto a = potential_iteration(*g, three);
  auto alg = extract_algorithm(g, a);
  const double range = static_cast<double>(a.range()) / static_cast<double>(a.scale);
  std::size_t violations = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    RandomSpec spec;
    spec.items = 3;
    spec.length = 200;
    spec.seed = 5000 + s;
    auto seq = random_sequence(spec);
    auto run = run_algorithm(alg, seq, CostModel::Partial);
    violations += static_cast<double>(run.total_cost) > 3.0 * static_cast<double>(opt_exact(seq)) + range + 1e-9;
  }
  pass = pass && violations == 0;
  d << "extracted n=3 algorithm: " << violations << " of 10000 sequences above 3*OPT + " << range;
  return {pass, d.str()};
}

Outcome class_bounds() {
  std::ostringstream d;
  auto stay = build_graph(3, CostModel::Partial, WfKind::FullWf, Restriction::stay_or_mtf());
  auto lb = class_lower_bound(stay, Rational::make(13, 4));
  bool pass = lb.certified;
  d << "stay-or-mtf n=3 at 13/4 " << (lb.certified ? "certified" : "inconclusive");
  if (lb.certified) d << " (worst cycle " << lb.worst_cycle.to_string() << ")";
  for (int n : {3, 4}) {
    auto g = build_graph(n, CostModel::Partial, WfKind::FullWf, Restriction::wfa_class());
    auto w = class_lower_bound(g, Rational::make(301, 100));
    pass = pass && !w.certified;
    d << "; wfa n=" << n << " at 301/100 " << (w.certified ? "certified" : "inconclusive");
  }
  return {pass, d.str()};
}

Outcome mtf_sanity() {
  auto r = gen_last_item(MoveToFront(), 50, 10000);
  std::ostringstream d;
  d << "MTF " << r.alg_cost << " vs static schedule " << r.opt_bound << ", ratio " << r.ratio();
  return {r.ratio() >= 3.5, d.str()};
}

Outcome dynamic_variant() {
  std::size_t steps = 0, membership = 0;
  std::string why;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    RandomSpec spec;
    spec.items = 2 + s % 5;
    spec.length = 60;
    spec.seed = 90000 + s;
    spec.insert_prob = 0.2;
    spec.delete_prob = 0.2;
    spec.max_items = 8;
    if (!amortized_run(random_sequence(spec), steps, membership, why))
      return {false, "sequence " + std::to_string(s) + ": " + why};
  }
  std::ostringstream d;
  d << "1000 sequences, " << steps << " steps, " << membership << " insert/delete steps with zero potential change";
  return {membership > 0, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {"fpm lower-bound cycle trace", fpm_cycle},
      {"amortized inequalities and transitions", amortized_suite},
      {"gain-vector algebra", gain_algebra},
      {"offline oracle soundness", oracle_soundness},
      {"dbit lower bounds", dbit_bounds},
      {"half-move lower bound", halfmove_bound},
      {"game-graph verifier", verifier},
      {"class lower bounds", class_bounds},
      {"mtf last-item workload", mtf_sanity},
      {"dynamic list accounting", dynamic_variant},
  };
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Outcome o;
    try {
      o = all[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, all[i].name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", all.size() - static_cast<std::size_t>(failed), all.size());
  return failed == 0 ? 0 : 1;
}
