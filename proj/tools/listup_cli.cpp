// listup: simulate list-update algorithms, compare them with offline optima,
// build adversarial sequences and verify competitive ratios on small lists.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "listup/certificate.hpp"
#include "listup/listup.hpp"

using namespace listup;
using nlohmann::json;

namespace {

struct SourceOpts {
  std::string file;
  std::string gen;
  bool random = false;
  std::size_t n = 5;
  std::size_t k = 1;
  std::size_t cycles = 1;
  std::size_t a = 0;
  double c = 0;
  std::size_t length = 100;
  std::uint64_t seed = 1;
  double insert = 0;
  double remove = 0;
  double zipf = 0;
};

struct Source {
  RequestSequence seq;
  std::optional<LowerBoundReport> report;
  std::optional<FpmLbReport> fpm;
};

void add_source_options(CLI::App* cmd, SourceOpts& o) {
  auto* file = cmd->add_option("--seq", o.file, "Sequence file")->check(CLI::ExistingFile);
  auto* gen = cmd->add_option("--gen", o.gen, "Generator: fpm-lb, dbit-full, dbit-partial, halfmove, last-item")
                  ->check(CLI::IsMember({"fpm-lb", "dbit-full", "dbit-partial", "halfmove", "last-item"}));
  auto* rnd = cmd->add_flag("--random", o.random, "Random sequence");
  file->excludes(gen)->excludes(rnd);
  gen->excludes(rnd);
  cmd->add_option("--n", o.n, "List length");
  cmd->add_option("--k", o.k, "Rounds (dbit-full, halfmove)");
  cmd->add_option("--cycles", o.cycles, "Cycles (fpm-lb)");
  cmd->add_option("--a", o.a, "Size of the front block (dbit-full)");
  cmd->add_option("--c", o.c, "Front block fraction (dbit-full)");
  cmd->add_option("--length", o.length, "Number of events (random, last-item)");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--insert", o.insert, "Insertion probability (random)")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--delete", o.remove, "Deletion probability (random)")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--zipf", o.zipf, "Zipf exponent for skewed requests (random)")->check(CLI::NonNegativeNumber);
}

RandomSpec random_spec(const SourceOpts& o, std::uint64_t seed) {
  RandomSpec r;
  r.items = o.n;
  r.length = o.length;
  r.seed = seed;
  r.insert_prob = o.insert;
  r.delete_prob = o.remove;
  r.zipf = o.zipf;
  r.max_items = std::max<std::size_t>(o.n + 3, 8);
  return r;
}

Source load_source(const SourceOpts& o, const std::string& alg) {
  Source s;
  if (!o.file.empty()) {
    std::ifstream in(o.file);
    s.seq = parse_sequence(in);
  } else if (o.gen == "fpm-lb") {
    s.fpm = gen_fpm_lb(o.cycles);
    s.report = s.fpm->base;
  } else if (o.gen == "dbit-full") {
    if (o.a) s.report = gen_dbit_full_split(o.n, o.a, o.k);
    else if (o.c > 0) s.report = gen_dbit_full(o.n, o.c, o.k);
    else s.report = gen_dbit_full_split(o.n, dbit_full_best_split(o.n), o.k);
  } else if (o.gen == "dbit-partial") {
    s.report = gen_dbit_partial(o.n);
  } else if (o.gen == "halfmove") {
    s.report = gen_halfmove(o.n, o.k);
  } else if (o.gen == "last-item") {
    s.report = gen_last_item(*make_algorithm(alg.empty() ? "mtf" : alg), o.n, o.length);
  } else {
    s.seq = random_sequence(random_spec(o, o.seed));
  }
  if (s.report) s.seq = s.report->sequence;
  return s;
}

json ratio_or_undefined(double num, double den) {
  if (den == 0) return num == 0 ? json("undefined") : json("infinite");
  return num / den;
}

json report_json(const LowerBoundReport& r) {
  json j{{"generator", r.generator}, {"opt_bound", r.opt_bound}, {"generated_for", r.algorithm}};
  if (r.predicted_alg) j["predicted_alg"] = *r.predicted_alg;
  if (r.predicted_opt) j["predicted_opt"] = *r.predicted_opt;
  return j;
}

std::ostream& output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw Error("cannot write " + path);
  return file;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOpts {
  SourceOpts src;
  std::string alg;
  std::string model = "partial";
  std::string format = "csv";
  std::string out;
  bool adjusted = false;
  bool audit = false;
};

int cmd_simulate(const SimulateOpts& o) {
  Source s = load_source(o.src, o.alg);
  const std::string alg_name = !o.alg.empty() ? o.alg : s.report ? s.report->algorithm : "mtf";
  CostModel model = s.report && o.model == "partial" && s.report->model == CostModel::Full ? CostModel::Full
                                                                                         : parse_cost_model(o.model);
  std::ofstream file;
  std::ostream& os = output(o.out, file);

  if (o.format == "jsonl") {
    if (alg_name != "fpm") throw Error("jsonl step traces are available for fpm only");
    s.seq.validate();
    FpmEngine e(s.seq.initial, s.seq.universe.size(), {}, o.audit);
    for (const Event& ev : s.seq.events) os << to_json_line(e.step(ev, model, o.adjusted), s.seq.universe) << '\n';
    return 0;
  }

  auto alg = make_algorithm(alg_name, {}, o.audit);
  RunResult run = run_algorithm(*alg, s.seq, model, o.adjusted);
  if (o.format == "csv") {
    write_steps_csv(os, run, s.seq.universe);
    return 0;
  }
  json j{{"algorithm", alg_name},
         {"model", to_string(model)},
         {"events", s.seq.events.size()},
         {"total_cost", run.total_cost},
         {"pair_opt", run.pair_opt.value()}};
  if (s.report) j["generator"] = report_json(*s.report);
  if (s.fpm) {
    const std::size_t w = fpm_lb_warmup().size(), c = fpm_lb_cycle().size();
    std::vector<std::int64_t> costs;
    std::vector<double> opts;
    for (std::size_t i = 0; i < o.src.cycles; ++i) {
      std::int64_t sum = 0;
      for (std::size_t t = w + i * c; t < w + (i + 1) * c; ++t) sum += run.steps[t].total_cost;
      costs.push_back(sum);
      opts.push_back((run.cumulative_pair_opt[w + (i + 1) * c - 1] - run.cumulative_pair_opt[w + i * c - 1]).value());
    }
    j["cycle_costs"] = costs;
    j["cycle_pair_opt"] = opts;
    if (std::adjacent_find(costs.begin(), costs.end(), std::not_equal_to<>()) == costs.end())
      j["per_cycle_cost"] = costs.front();
    if (std::adjacent_find(opts.begin(), opts.end(), std::not_equal_to<>()) == opts.end())
      j["per_cycle_pair_opt"] = opts.front();
    j["start_order_searched"] = s.fpm->searched;
  }
  os << j.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// ratio
// ---------------------------------------------------------------------------

struct RatioOpts {
  SourceOpts src;
  std::string alg = "fpm";
  std::string model = "partial";
  std::size_t trials = 1;
  std::size_t threads = 0;
};

struct RatioRow {
  std::int64_t alg = 0;
  std::optional<std::int64_t> exact;
  HalfInteger pair;
};

RatioRow measure(const std::string& alg_name, const RequestSequence& seq, CostModel model) {
  RatioRow r;
  auto alg = make_algorithm(alg_name);
  RunResult run = run_algorithm(*alg, seq, model);
  r.alg = run.total_cost;
  r.pair = run.pair_opt;
  if (seq.access_only() && seq.initial.size() <= 7) r.exact = opt_exact(seq, model);
  return r;
}

int cmd_ratio(const RatioOpts& o) {
  CostModel model = parse_cost_model(o.model);
  json j{{"algorithm", o.alg}, {"model", to_string(model)}};
  if (o.trials <= 1 || !o.src.random) {
    Source s = load_source(o.src, o.alg);
    if (s.report && s.report->model != model) model = s.report->model;
    RatioRow r = measure(o.alg, s.seq, model);
    j["model"] = to_string(model);
    j["alg_cost"] = r.alg;
    j["pair_opt"] = r.pair.value();
    j["ratio_pair"] = ratio_or_undefined(static_cast<double>(r.alg), r.pair.value());
    if (r.exact) {
      j["opt_exact"] = *r.exact;
      j["ratio_exact"] = ratio_or_undefined(static_cast<double>(r.alg), static_cast<double>(*r.exact));
    } else {
      j["opt_exact"] = nullptr;
    }
    if (s.report) {
      j["generator"] = report_json(*s.report);
      j["ratio_opt_bound"] = ratio_or_undefined(static_cast<double>(r.alg), static_cast<double>(s.report->opt_bound));
    }
    if (s.fpm && o.alg == "fpm") {
      j["warmup_cost"] = s.fpm->warmup_cost;
      j["warmup_pair_opt"] = s.fpm->warmup_pair_opt.value();
      j["steady_ratio_pair"] = s.fpm->steady_ratio();
    }
    std::cout << j.dump(2) << '\n';
    return 0;
  }

  // Independent random runs, one seed each, spread over worker threads.
  std::vector<RatioRow> rows(o.trials);
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < o.trials;) {
      try {
        rows[i] = measure(o.alg, random_sequence(random_spec(o.src, o.src.seed + i)), model);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        errors.push_back(e.what());
      }
    }
  };
  const std::size_t hw = o.threads ? o.threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < std::min(hw, o.trials); ++t) pool.emplace_back(worker);
  pool.clear();
  if (!errors.empty()) throw Error(errors.front());

  double max_exact = 0, max_pair = 0, sum_alg = 0, sum_exact = 0;
  std::size_t with_exact = 0;
  for (const auto& r : rows) {
    if (r.pair.halves() > 0) max_pair = std::max(max_pair, static_cast<double>(r.alg) / r.pair.value());
    if (r.exact) {
      ++with_exact;
      sum_alg += static_cast<double>(r.alg);
      sum_exact += static_cast<double>(*r.exact);
      if (*r.exact > 0) max_exact = std::max(max_exact, static_cast<double>(r.alg) / static_cast<double>(*r.exact));
    }
  }
  j["trials"] = o.trials;
  j["max_ratio_pair"] = max_pair;
  if (with_exact) {
    j["max_ratio_exact"] = max_exact;
    j["aggregate_ratio_exact"] = ratio_or_undefined(sum_alg, sum_exact);
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct CheckOpts {
  std::string what;
  std::size_t steps = 100000;
  std::size_t n = 5;
  std::uint64_t seed = 1;
};

bool check_params() {
  PotentialParams p;
  bool ok = true;
  for (const auto& c : parameter_constraints(p)) {
    std::cout << (c.holds ? "pass " : "FAIL ") << c.name << "  (" << c.lhs << " vs " << c.rhs << ")\n";
    ok = ok && c.holds;
  }
  const bool equality = std::abs(p.alpha_oe - (p.beta_ne + p.R / 2)) <= 1e-12;
  std::cout << (equality ? "pass " : "FAIL ") << "alpha^oe = beta^ne + R/2 holds with equality\n";
  return ok && equality;
}

bool check_gain_identity() {
  PotentialParams p;
  auto g = gain_vectors(p);
  auto pm = default_pm_closed_form(), fm = default_fm_closed_form();
  bool ok = true;
  const double s17 = std::sqrt(17.0);
  for (int i = 0; i < kPairStates; ++i) {
    const double comb = 16 * (p.c * g.pm[i] + (1 - p.c) * g.fm[i]);
    const double want = i < 5 ? 23 + s17 : 0;
    const bool row = std::abs(comb - want) <= 1e-12 && std::abs(g.pm[i] - pm[i].value()) <= 1e-12 &&
                     std::abs(g.fm[i] - fm[i].value()) <= 1e-12;
    std::cout << (row ? "pass " : "FAIL ") << to_string(static_cast<PairState>(i)) << ": G_PM=" << g.pm[i]
              << " G_FM=" << g.fm[i] << " 16*G_COMB=" << comb << '\n';
    ok = ok && row;
  }
  return ok;
}

const char* class_name(PairClass c) {
  return c == PairClass::Predecessor ? "predecessor" : c == PairClass::Successor ? "successor" : "other";
}

bool check_tables() {
  for (int c = 0; c < 3; ++c)
    for (int m = 0; m < 2; ++m) {
      if (c == 2 && m == 1) continue;
      std::cout << class_name(static_cast<PairClass>(c));
      if (c == 0) std::cout << ", " << to_string(static_cast<Move>(m)) << " move";
      std::cout << ":\n";
      for (int a = 0; a < kPairStates; ++a) {
        std::cout << "  " << to_string(static_cast<PairState>(a)) << " ->";
        for (int b = 0; b < kPairStates; ++b)
          if (transition_allowed(static_cast<PairClass>(c), static_cast<PairState>(a), static_cast<Move>(m),
                                 static_cast<PairState>(b)))
            std::cout << ' ' << to_string(static_cast<PairState>(b));
        std::cout << '\n';
      }
    }
  return true;
}

bool check_transitions(const CheckOpts& o) {
  // Audited engine over mixed dynamic runs; any unlisted transition or
  // violated inequality throws.
  std::size_t done = 0, runs = 0;
  TransitionCounts seen{};
  while (done < o.steps) {
    RandomSpec spec;
    spec.items = o.n;
    spec.length = std::min<std::size_t>(1000, o.steps - done);
    spec.seed = o.seed + runs++;
    spec.insert_prob = 0.05;
    spec.delete_prob = 0.05;
    spec.max_items = o.n + 2;
    auto seq = random_sequence(spec);
    FpmEngine e(seq.initial, seq.universe.size());
    try {
      for (const Event& ev : seq.events) e.step(ev, CostModel::Partial, true);
    } catch (const Error& err) {
      std::cout << "FAIL run " << runs << ": " << err.what() << '\n';
      return false;
    }
    for (int c = 0; c < 3; ++c)
      for (int m = 0; m < 2; ++m)
        for (int a = 0; a < kPairStates; ++a)
          for (int b = 0; b < kPairStates; ++b) seen[c][m][a][b] += e.transitions()[c][m][a][b];
    done += seq.events.size();
  }
  std::size_t distinct = 0;
  for (auto& x : seen)
    for (auto& y : x)
      for (auto& z : y)
        for (auto v : z) distinct += v > 0;
  std::cout << "pass " << done << " steps in " << runs << " runs, " << distinct
            << " distinct listed transitions observed, 0 violations\n";
  return true;
}

int cmd_check(const CheckOpts& o) {
  bool ok = false;
  if (o.what == "params") ok = check_params();
  else if (o.what == "gain-identity") ok = check_gain_identity();
  else if (o.what == "tables") ok = check_tables();
  else if (o.what == "transitions") ok = check_transitions(o);
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyOpts {
  std::size_t n = 3;
  std::string rho = "3";
  std::string kind = "full-wf";
  std::string restrict = "all";
  std::string mode = "upper-bound";
  std::string model = "partial";
  std::string cert;
  std::string cert_out;
  std::size_t max_states = 0;
  std::size_t max_rounds = 100000;
};

int cmd_verify(const VerifyOpts& o) {
  std::optional<std::size_t> bound;
  if (o.max_states) bound = o.max_states;
  if (!o.cert.empty()) {
    Certificate c = load_certificate(o.cert);
    AuditResult a = check_certificate(c, bound);
    json j{{"certificate", o.cert}, {"audit", a.ok ? "pass" : "fail"}, {"n", c.n}, {"rho", c.rho.to_string()}};
    if (!a.ok) j["failure"] = a.failure;
    std::cout << j.dump(2) << '\n';
    return a.ok ? 0 : 1;
  }
  const Rational rho = Rational::parse(o.rho);
  GameGraph g = build_graph(static_cast<int>(o.n), parse_cost_model(o.model), parse_wf_kind(o.kind),
                            parse_restriction(o.restrict), bound);
  json j{{"n", o.n},
         {"rho", rho.to_string()},
         {"kind", to_string(g.kind)},
         {"restriction", g.restriction},
         {"model", to_string(g.model)},
         {"opt_vertices", g.opt_count()},
         {"alg_vertices", g.alg_count()},
         {"alg_edges", g.alg_edges.size()}};
  if (o.mode == "lower-bound") {
    ClassLowerBound lb = class_lower_bound(g, rho);
    j["result"] = lb.certified ? "certified" : "inconclusive";
    if (lb.certified) {
      j["strategy_vertices"] = lb.strategy_vertices;
      j["worst_cycle_ratio"] = lb.worst_unbounded ? json("infinite") : json(lb.worst_cycle.to_string());
    } else {
      j["note"] = lb.note;
    }
    std::cout << j.dump(2) << '\n';
    return lb.certified ? 0 : 1;
  }
  IterationLimits lim;
  lim.max_rounds = o.max_rounds;
  PotentialAssignment a = potential_iteration(g, rho, lim);
  j["result"] = to_string(a.status);
  j["rounds"] = a.rounds;
  if (a.verified()) {
    AuditResult audit_res = audit(g, a);
    j["audit"] = audit_res.ok ? "pass" : "fail";
    j["additive"] = a.additive();
    j["potential_range"] = static_cast<double>(a.range()) / static_cast<double>(a.scale);
    if (!o.cert_out.empty()) {
      save_certificate(make_certificate(g, a), o.cert_out);
      j["certificate"] = o.cert_out;
    }
    std::cout << j.dump(2) << '\n';
    return audit_res.ok ? 0 : 1;
  }
  j["max_potential"] = static_cast<double>(a.max_value) / static_cast<double>(a.scale);
  j["witness_vertex"] = a.witness;
  std::cout << j.dump(2) << '\n';
  return 1;
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateOpts {
  SourceOpts src;
  std::string alg;
  std::string out;
};

int cmd_generate(const GenerateOpts& o) {
  if (o.src.gen.empty() && !o.src.random) throw Error("generate needs --gen or --random");
  Source s = load_source(o.src, o.alg);
  std::ofstream file;
  std::ostream& os = output(o.out, file);
  if (s.report) {
    const auto& r = *s.report;
    os << "# generator: " << r.generator << "\n# model: " << to_string(r.model) << "\n# alg_cost: " << r.alg_cost
       << "\n# opt_bound: " << r.opt_bound << '\n';
    if (r.predicted_alg) os << "# predicted_alg: " << *r.predicted_alg << '\n';
    if (r.predicted_opt) os << "# predicted_opt: " << *r.predicted_opt << '\n';
  }
  os << serialize_sequence(s.seq);
  if (!o.out.empty() && s.report) {
    json j = report_json(*s.report);
    j["alg_cost"] = s.report->alg_cost;
    j["events"] = s.seq.events.size();
    j["file"] = o.out;
    std::cout << j.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"List update laboratory"};
  app.require_subcommand(1);

  SimulateOpts sim;
  auto* simulate = app.add_subcommand("simulate", "Run an algorithm and report per-step costs");
  add_source_options(simulate, sim.src);
  simulate->add_option("--alg", sim.alg, "Algorithm")->check(CLI::IsMember(algorithm_names()));
  simulate->add_option("--model", sim.model, "Cost model")->check(CLI::IsMember({"partial", "full"}));
  simulate->add_option("--format", sim.format, "csv, json or jsonl")->check(CLI::IsMember({"csv", "json", "jsonl"}));
  simulate->add_option("--out", sim.out, "Output file");
  simulate->add_flag("--adjusted", sim.adjusted, "Drop the access cost of insertions");
  simulate->add_flag("--audit", sim.audit, "Check every amortized inequality (fpm)");

  RatioOpts rat;
  auto* ratio = app.add_subcommand("ratio", "Compare an algorithm with the offline optimum");
  add_source_options(ratio, rat.src);
  ratio->add_option("--alg", rat.alg, "Algorithm")->check(CLI::IsMember(algorithm_names()));
  ratio->add_option("--model", rat.model, "Cost model")->check(CLI::IsMember({"partial", "full"}));
  ratio->add_option("--trials", rat.trials, "Random sequences, seeds seed..seed+trials-1");
  ratio->add_option("--threads", rat.threads, "Worker threads (default: all cores)");

  CheckOpts chk;
  auto* check = app.add_subcommand("check", "Check parameters, gain identities and transition tables");
  check->add_option("what", chk.what)->required()->check(CLI::IsMember({"params", "gain-identity", "tables", "transitions"}));
  check->add_option("--steps", chk.steps, "Steps for the transition run");
  check->add_option("--n", chk.n, "Initial list length for the transition run");
  check->add_option("--seed", chk.seed, "Random seed");

  VerifyOpts ver;
  auto* verify = app.add_subcommand("verify", "Certify a competitive ratio on the game graph");
  verify->add_option("--n", ver.n, "List length");
  verify->add_option("--rho", ver.rho, "Ratio, e.g. 3, 13/4 or 3.25");
  verify->add_option("--kind", ver.kind, "full-wf or pair-wf")->check(CLI::IsMember({"full-wf", "pair-wf"}));
  verify->add_option("--restrict", ver.restrict, "all, wfa or stay-or-mtf")
      ->check(CLI::IsMember({"all", "wfa", "stay-or-mtf"}));
  verify->add_option("--mode", ver.mode, "upper-bound or lower-bound")
      ->check(CLI::IsMember({"upper-bound", "lower-bound"}));
  verify->add_option("--model", ver.model, "Cost model")->check(CLI::IsMember({"partial", "full"}));
  verify->add_option("--cert", ver.cert, "Audit an existing certificate")->check(CLI::ExistingFile);
  verify->add_option("--cert-out", ver.cert_out, "Write a certificate when verified");
  verify->add_option("--max-states", ver.max_states, "Vertex bound (default from LISTUP_MAX_STATES)");
  verify->add_option("--max-rounds", ver.max_rounds, "Iteration bound");

  GenerateOpts gen;
  auto* generate = app.add_subcommand("generate", "Write an adversarial or random sequence");
  add_source_options(generate, gen.src);
  generate->add_option("--alg", gen.alg, "Algorithm to adapt to (last-item)")->check(CLI::IsMember(algorithm_names()));
  generate->add_option("--out", gen.out, "Output file");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*simulate) return cmd_simulate(sim);
    if (*ratio) return cmd_ratio(rat);
    if (*check) return cmd_check(chk);
    if (*verify) return cmd_verify(ver);
    if (*generate) return cmd_generate(gen);
  } catch (const std::exception& e) {
    std::cerr << "listup: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
