#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "listup/algorithm.hpp"
#include "listup/core.hpp"
#include "listup/numeric.hpp"
#include "listup/pair_wf.hpp"
#include "listup/sequence_io.hpp"

namespace listup {

struct OrderViolation : Error { using Error::Error; };
struct ConstraintViolation : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// States and parameters
// ---------------------------------------------------------------------------

enum class Flavor { D, O, E, N };

inline const char* to_string(Flavor f) {
  switch (f) {
    case Flavor::D: return "d";
    case Flavor::O: return "o";
    case Flavor::E: return "e";
    case Flavor::N: return "n";
  }
  return "?";
}

/// The six reachable combinations of mode and flavor, in count-vector order.
enum class PairState { AlphaD, BetaD, AlphaOE, BetaO, BetaNE, GammaNE };
inline constexpr int kPairStates = 6;

inline const char* to_string(PairState s) {
  static const char* names[] = {"alpha^d", "beta^d", "alpha^oe", "beta^o", "beta^ne", "gamma^ne"};
  return names[static_cast<int>(s)];
}

/// Combines mode and flavor; throws on alpha^n, gamma^d and gamma^o.
inline PairState combine(Mode m, Flavor f) {
  switch (m) {
    case Mode::Alpha:
      if (f == Flavor::D) return PairState::AlphaD;
      if (f == Flavor::N) throw InvariantViolation("forbidden state alpha^n");
      return PairState::AlphaOE;
    case Mode::Beta:
      if (f == Flavor::D) return PairState::BetaD;
      if (f == Flavor::O) return PairState::BetaO;
      return PairState::BetaNE;
    case Mode::Gamma:
      if (f == Flavor::D) throw InvariantViolation("forbidden state gamma^d");
      if (f == Flavor::O) throw InvariantViolation("forbidden state gamma^o");
      return PairState::GammaNE;
  }
  throw InvariantViolation("unknown mode");
}

using CountVector = std::array<std::int64_t, kPairStates>;
using GainVector = std::array<double, kPairStates>;

inline double dot(const GainVector& g, const CountVector& v) {
  double s = 0;
  for (int i = 0; i < kPairStates; ++i) s += g[static_cast<std::size_t>(i)] * static_cast<double>(v[static_cast<std::size_t>(i)]);
  return s;
}

struct PotentialParams {
  double alpha_d = 0;
  double beta_d = (5 + 3 * std::sqrt(17.0)) / 16;
  double alpha_oe = 2;
  double beta_o = (1 + 7 * std::sqrt(17.0)) / 16;
  double beta_ne = (9 - std::sqrt(17.0)) / 16;
  double gamma_ne = 2;
  /// Target competitive ratio and mixing coefficient of the two moves.
  double R = (23 + std::sqrt(17.0)) / 8;
  double c = (std::sqrt(17.0) - 1) / 4;

  double operator[](PairState s) const {
    switch (s) {
      case PairState::AlphaD: return alpha_d;
      case PairState::BetaD: return beta_d;
      case PairState::AlphaOE: return alpha_oe;
      case PairState::BetaO: return beta_o;
      case PairState::BetaNE: return beta_ne;
      case PairState::GammaNE: return gamma_ne;
    }
    return 0;
  }
};

struct ConstraintCheck {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

/// The parameter constraints the amortized analysis relies on.
inline std::vector<ConstraintCheck> parameter_constraints(const PotentialParams& p, double tol = 1e-12) {
  std::vector<ConstraintCheck> out;
  auto le = [&](std::string name, double l, double r) { out.push_back({std::move(name), l, r, l <= r + tol}); };
  auto ge = [&](std::string name, double l, double r) { out.push_back({std::move(name), l, r, l + tol >= r}); };
  out.push_back({"alpha^d = 0", p.alpha_d, 0, std::abs(p.alpha_d) <= tol});
  ge("alpha^d >= 0", p.alpha_d, 0);
  ge("beta^d >= 0", p.beta_d, 0);
  ge("alpha^oe >= 0", p.alpha_oe, 0);
  ge("beta^o >= 0", p.beta_o, 0);
  ge("beta^ne >= 0", p.beta_ne, 0);
  ge("gamma^ne >= 0", p.gamma_ne, 0);
  le("alpha^oe <= beta^ne + R/2", p.alpha_oe, p.beta_ne + p.R / 2);
  le("beta^ne + R/2 <= beta^o + R/2", p.beta_ne + p.R / 2, p.beta_o + p.R / 2);
  le("max(beta^d, beta^o) <= gamma^ne + R/2", std::max(p.beta_d, p.beta_o), p.gamma_ne + p.R / 2);
  return out;
}

inline void validate_params(const PotentialParams& p) {
  for (const auto& c : parameter_constraints(p))
    if (!c.holds)
      throw ConstraintViolation("parameter constraint violated: " + c.name + " (" + std::to_string(c.lhs) +
                                " vs " + std::to_string(c.rhs) + ")");
}

struct GainVectors {
  GainVector pm{};
  GainVector fm{};
  GainVector opt{};
};

/// Per-predecessor amortized cost of each move and pair-based OPT growth,
/// indexed by the predecessor's state before the request.
inline GainVectors gain_vectors(const PotentialParams& p) {
  validate_params(p);
  GainVectors g;
  g.pm = {1 + p.beta_ne,
          1 + p.gamma_ne - p.beta_d,
          2 + std::max(p.beta_d, p.beta_o) - p.alpha_oe,
          2 + p.alpha_oe - p.beta_o,
          2 - p.beta_ne,
          2 - p.gamma_ne};
  g.fm = {2 + p.beta_d, 2 - p.beta_d, 2 + p.beta_d - p.alpha_oe, 2 - p.beta_o, 2 - p.beta_ne, 2 - p.gamma_ne};
  g.opt = {0.5, 0.5, 0.5, 0.5, 0.5, 0};
  return g;
}

/// A number (a + b*sqrt(17)) / 16.
struct Surd17 {
  int a = 0;
  int b = 0;
  double value() const { return (a + b * std::sqrt(17.0)) / 16; }
};

/// Closed forms of the default gain vectors.
inline std::array<Surd17, kPairStates> default_pm_closed_form() {
  return {{{25, -1}, {43, -3}, {1, 7}, {63, -7}, {23, 1}, {0, 0}}};
}
inline std::array<Surd17, kPairStates> default_fm_closed_form() {
  return {{{37, 3}, {27, -3}, {5, 3}, {31, -7}, {23, 1}, {0, 0}}};
}

enum class Move { Partial, Full };

inline const char* to_string(Move m) { return m == Move::Partial ? "partial" : "full"; }

/// Move selection from the count vector alone; ties go to the partial move.
inline Move choose_move_by_gain(const GainVectors& g, const CountVector& v, double tol = 1e-9) {
  return dot(g.pm, v) <= dot(g.fm, v) + tol ? Move::Partial : Move::Full;
}

// ---------------------------------------------------------------------------
// Transition tables
// ---------------------------------------------------------------------------

enum class PairClass { Predecessor, Successor, Other };

namespace detail {

constexpr unsigned bit(PairState s) { return 1u << static_cast<unsigned>(s); }

// Allowed successor states, indexed by the state before the request.
inline constexpr std::array<unsigned, kPairStates> kPredPartial = {
    bit(PairState::BetaNE), bit(PairState::GammaNE),
    bit(PairState::BetaD) | bit(PairState::BetaO) | bit(PairState::BetaNE),
    bit(PairState::AlphaOE), bit(PairState::AlphaD), bit(PairState::AlphaD)};
inline constexpr std::array<unsigned, kPairStates> kPredFull = {
    bit(PairState::BetaD), bit(PairState::AlphaD), bit(PairState::BetaD),
    bit(PairState::AlphaD), bit(PairState::AlphaD), bit(PairState::AlphaD)};
inline constexpr std::array<unsigned, kPairStates> kSucc = {
    bit(PairState::AlphaD), bit(PairState::AlphaD), bit(PairState::AlphaD), bit(PairState::AlphaD),
    bit(PairState::AlphaD) | bit(PairState::AlphaOE),
    bit(PairState::BetaD) | bit(PairState::BetaO) | bit(PairState::BetaNE)};
inline constexpr std::array<unsigned, kPairStates> kOther = {
    bit(PairState::AlphaD), bit(PairState::BetaD), bit(PairState::AlphaOE),
    bit(PairState::BetaO) | bit(PairState::BetaNE), bit(PairState::BetaNE), bit(PairState::GammaNE)};

}  // namespace detail

/// Whether (class, before, move, after) is a listed transition.
inline bool transition_allowed(PairClass cls, PairState before, Move move, PairState after) {
  auto i = static_cast<std::size_t>(before);
  unsigned mask = 0;
  switch (cls) {
    case PairClass::Predecessor: mask = move == Move::Partial ? detail::kPredPartial[i] : detail::kPredFull[i]; break;
    case PairClass::Successor: mask = detail::kSucc[i]; break;
    case PairClass::Other: mask = detail::kOther[i]; break;
  }
  return (mask & detail::bit(after)) != 0;
}

/// Observed transition counts: [class][move][before][after].
using TransitionCounts = std::array<std::array<std::array<std::array<std::int64_t, kPairStates>, kPairStates>, 2>, 3>;

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

/// Flavor of the pair {x, y} with y before x, given each item's target.
inline Flavor classify_flavor(ItemId x, ItemId y, const ListState& list, const std::vector<ItemId>& targets) {
  const std::size_t px = list.position(x), py = list.position(y);
  if (px <= py) throw OrderViolation("classify_flavor expects the second item to precede the first");
  const std::size_t tx = list.position(targets[static_cast<std::size_t>(x)]);
  const std::size_t ty = list.position(targets[static_cast<std::size_t>(y)]);
  if (tx > py) return Flavor::D;
  if (ty < tx) return Flavor::O;
  if (ty == tx) return Flavor::E;
  return Flavor::N;
}

struct FpmStepReport {
  Event event;
  Move move = Move::Partial;
  std::int64_t access_cost = 0;
  std::int64_t swap_count = 0;
  std::int64_t total_cost = 0;
  CountVector v{};
  /// Potential and averaged work-function growth per pair class.
  std::array<double, 3> dphi{};
  std::array<HalfInteger, 3> dw{};
  /// Swaps plus predecessor potential after each candidate move.
  double partial_value = 0;
  double full_value = 0;
  double gain_pm = 0;
  double gain_fm = 0;
  /// Potential change caused by adding or removing an item.
  double membership_dphi = 0;
  ListState list_after;

  StepReport basic() const { return {event, access_cost, swap_count, total_cost, list_after}; }
};

/// Result of evaluating both candidate moves for a request.
struct MoveEvaluation {
  Move chosen = Move::Partial;
  double partial_value = 0;
  double full_value = 0;
  std::size_t partial_target = 1;
  CountVector v{};
};

class FpmEngine {
 public:
  FpmEngine() = default;
  FpmEngine(const ListState& initial, std::size_t universe, PotentialParams params = {}, bool audit = true)
      : list_(initial), targets_(universe, kNoItem), tracker_(universe), params_(params), audit_(audit) {
    validate_params(params_);
    gains_ = gain_vectors(params_);
    for (ItemId x : list_.order()) targets_[static_cast<std::size_t>(x)] = x;
    tracker_.activate_all(list_);
  }

  const ListState& list() const { return list_; }
  ItemId target(ItemId x) const { return targets_.at(static_cast<std::size_t>(x)); }
  const std::vector<ItemId>& targets() const { return targets_; }
  const PairTracker& tracker() const { return tracker_; }
  const PotentialParams& params() const { return params_; }
  const GainVectors& gains() const { return gains_; }
  const TransitionCounts& transitions() const { return transitions_; }

  Flavor flavor(ItemId x, ItemId y) const { return classify_flavor(x, y, list_, targets_); }

  /// State of the active pair {a, b}.
  PairState state(ItemId a, ItemId b) const {
    if (tracker_.activity(a, b) != PairActivity::Active) throw InvariantViolation("pair is not active");
    const auto pos = positions(list_);
    return state_at(a, b, pos, targets_, tracker_);
  }

  double pair_potential(ItemId a, ItemId b) const { return params_[state(a, b)]; }

  /// Sum of pair potentials over active pairs.
  double potential() const {
    const auto pos = positions(list_);
    double s = 0;
    for (std::size_t i = 0; i < list_.size(); ++i)
      for (std::size_t j = i + 1; j < list_.size(); ++j)
        s += params_[state_at(list_.order()[i], list_.order()[j], pos, targets_, tracker_)];
    return s + frozen_potential_;
  }

  /// Predecessors of `z` counted by the state of their pair with `z`.
  CountVector count_vector(ItemId z) const {
    const auto pos = positions(list_);
    CountVector v{};
    for (std::size_t i = 0; i + 1 < list_.position(z); ++i)
      ++v[static_cast<std::size_t>(state_at(list_.order()[i], z, pos, targets_, tracker_))];
    return v;
  }

  /// Which move a request to `z` would trigger from the current state.
  MoveEvaluation evaluate_moves(ItemId z) const {
    FpmEngine copy = *this;
    copy.update_pairs(z);
    copy.cleanup_targets(z);
    return copy.evaluate(z, count_vector(z));
  }

  Move choose_move(ItemId z) const { return evaluate_moves(z).chosen; }

  FpmStepReport step(const Event& e, CostModel model = CostModel::Partial, bool adjusted = false) {
    switch (e.kind) {
      case EventKind::Access: return access(e.item, model);
      case EventKind::Insert: return insert(e.item, model, adjusted);
      case EventKind::Delete: return remove(e.item, model);
    }
    throw InvalidSequence("unknown event kind");
  }

  FpmStepReport access(ItemId z, CostModel model = CostModel::Partial) {
    if (!list_.contains(z)) throw AbsentItem("access to absent item " + std::to_string(z));
    FpmStepReport r;
    r.event = Event::access(z);
    serve(z, model, r);
    return r;
  }

  FpmStepReport insert(ItemId z, CostModel model = CostModel::Partial, bool adjusted = false) {
    if (z < 0 || static_cast<std::size_t>(z) >= targets_.size()) throw AbsentItem("item outside universe");
    if (list_.contains(z)) throw InvalidSequence("insert of present item " + std::to_string(z));
    const double before = audit_ ? potential() : 0;
    tracker_.on_insert(z, list_);
    list_.push_back(z);
    targets_[static_cast<std::size_t>(z)] = z;
    FpmStepReport r;
    r.event = Event::insert(z);
    r.access_cost = adjusted ? 0 : position_cost(list_.size(), model);
    r.total_cost = r.access_cost;
    if (audit_) {
      r.membership_dphi = potential() - before;
      if (std::abs(r.membership_dphi) > 1e-9) throw InvariantViolation("insertion changed the potential");
    }
    r.list_after = list_;
    return r;
  }

  /// Serves `z` as an access, then removes it; its pairs freeze.
  FpmStepReport remove(ItemId z, CostModel model = CostModel::Partial) {
    if (!list_.contains(z)) throw AbsentItem("delete of absent item " + std::to_string(z));
    if (list_.size() == 1) throw InvalidSequence("delete would empty the list");
    FpmStepReport r;
    r.event = Event::remove(z);
    serve(z, model, r);
    const double before = audit_ ? potential() : 0;
    // Freeze the potential of the departing item's pairs.
    const auto pos = positions(list_);
    for (ItemId y : list_.order())
      if (y != z) frozen_potential_ += params_[state_at(y, z, pos, targets_, tracker_)];
    tracker_.on_remove(z, list_);
    list_.erase(z);
    for (ItemId y : list_.order())
      if (targets_[static_cast<std::size_t>(y)] == z) throw InvariantViolation("removed item is still a target");
    targets_[static_cast<std::size_t>(z)] = kNoItem;
    if (audit_) {
      r.membership_dphi = potential() - before;
      if (std::abs(r.membership_dphi) > 1e-9) throw InvariantViolation("removal changed the potential");
    }
    r.list_after = list_;
    return r;
  }

 private:
  static std::vector<int> positions(const ListState& list) {
    ItemId hi = 0;
    for (ItemId x : list.order()) hi = std::max(hi, x);
    std::vector<int> pos(static_cast<std::size_t>(hi) + 1, -1);
    for (std::size_t i = 0; i < list.size(); ++i) pos[static_cast<std::size_t>(list.order()[i])] = static_cast<int>(i);
    return pos;
  }

  /// State of {a, b} under the given positions and targets.
  PairState state_at(ItemId a, ItemId b, const std::vector<int>& pos, const std::vector<ItemId>& targets,
                     const PairTracker& tracker) const {
    auto p = [&](ItemId x) { return pos[static_cast<std::size_t>(x)]; };
    ItemId y = a, x = b;  // y before x
    if (p(a) > p(b)) std::swap(x, y);
    const int tx = p(targets[static_cast<std::size_t>(x)]);
    const int ty = p(targets[static_cast<std::size_t>(y)]);
    Flavor f = tx > p(y) ? Flavor::D : ty < tx ? Flavor::O : ty == tx ? Flavor::E : Flavor::N;
    return combine(tracker.mode(y, x), f);
  }

  void update_pairs(ItemId z) { last_dw_ = tracker_.on_access(z, list_); }

  void cleanup_targets(ItemId z) {
    const std::size_t pz = list_.position(z);
    for (ItemId y : list_.order()) {
      if (y == z || targets_[static_cast<std::size_t>(y)] != z) continue;
      targets_[static_cast<std::size_t>(y)] = list_.at(pz + 1);
    }
  }

  /// Compares both moves on the post-cleanup state; `v` is taken before the request.
  MoveEvaluation evaluate(ItemId z, const CountVector& v) const {
    MoveEvaluation ev;
    ev.v = v;
    const std::size_t pz = list_.position(z);
    ev.partial_target = list_.position(targets_[static_cast<std::size_t>(z)]);
    auto value = [&](std::size_t target) {
      ListState moved = list_;
      const std::size_t swaps = moved.move_to(z, target);
      std::vector<ItemId> t = targets_;
      t[static_cast<std::size_t>(z)] = moved.front();
      const auto pos = positions(moved);
      double phi = 0;
      for (std::size_t i = 0; i + 1 < pz; ++i) phi += params_[state_at(list_.order()[i], z, pos, t, tracker_)];
      return static_cast<double>(swaps) + phi;
    };
    ev.partial_value = value(ev.partial_target);
    ev.full_value = value(1);
    ev.chosen = ev.partial_value <= ev.full_value + 1e-9 ? Move::Partial : Move::Full;
    return ev;
  }

  struct Snapshot {
    std::vector<std::pair<ItemId, ItemId>> pairs;  // (front, back) in list order
    std::vector<PairState> states;
  };

  Snapshot snapshot() const {
    Snapshot s;
    const auto pos = positions(list_);
    for (std::size_t i = 0; i < list_.size(); ++i)
      for (std::size_t j = i + 1; j < list_.size(); ++j) {
        ItemId a = list_.order()[i], b = list_.order()[j];
        s.pairs.emplace_back(a, b);
        s.states.push_back(state_at(a, b, pos, targets_, tracker_));
      }
    return s;
  }

  void serve(ItemId z, CostModel model, FpmStepReport& r) {
    const std::size_t pz = list_.position(z);
    const CountVector v = count_vector(z);
    Snapshot before;
    std::vector<PairWorkFunction> wf_before;
    if (audit_) {
      before = snapshot();
      for (auto [a, b] : before.pairs) wf_before.push_back(tracker_.wf(a, b));
    }

    update_pairs(z);
    cleanup_targets(z);
    const MoveEvaluation ev = evaluate(z, v);
    const std::size_t swaps = list_.move_to(z, ev.chosen == Move::Partial ? ev.partial_target : 1);
    targets_[static_cast<std::size_t>(z)] = list_.front();

    r.move = ev.chosen;
    r.access_cost = position_cost(pz, model);
    r.swap_count = static_cast<std::int64_t>(swaps);
    r.total_cost = r.access_cost + r.swap_count;
    r.v = v;
    r.partial_value = ev.partial_value;
    r.full_value = ev.full_value;
    r.gain_pm = dot(gains_.pm, v);
    r.gain_fm = dot(gains_.fm, v);
    r.list_after = list_;

    if (audit_) audit(z, pz, before, wf_before, r);
  }

  void audit(ItemId z, std::size_t pz, const Snapshot& before, const std::vector<PairWorkFunction>& wf_before,
             FpmStepReport& r) {
    constexpr double tol = 1e-9;
    const auto pos = positions(list_);
    for (std::size_t k = 0; k < before.pairs.size(); ++k) {
      auto [a, b] = before.pairs[k];  // a before b prior to the request
      PairClass cls = b == z ? PairClass::Predecessor : a == z ? PairClass::Successor : PairClass::Other;
      PairState after = state_at(a, b, pos, targets_, tracker_);
      PairState prior = before.states[k];
      if (!transition_allowed(cls, prior, r.move, after))
        throw InvariantViolation(std::string("unlisted transition ") + to_string(prior) + " -> " + to_string(after) +
                                 " (" + to_string(r.move) + " move)");
      ++transitions_[static_cast<std::size_t>(cls)][static_cast<std::size_t>(r.move)][static_cast<std::size_t>(prior)]
                    [static_cast<std::size_t>(after)];
      auto c = static_cast<std::size_t>(cls);
      r.dphi[c] += params_[after] - params_[prior];
      r.dw[c] += delta_w(wf_before[k], tracker_.wf(a, b));
    }
    for (ItemId x : list_.order())
      if (list_.position(targets_[static_cast<std::size_t>(x)]) > list_.position(x))
        throw InvariantViolation("target follows its item");

    const double R = params_.R;
    const double fpm = static_cast<double>(pz - 1) + static_cast<double>(r.swap_count);
    auto fail = [&](const std::string& what) {
      throw InvariantViolation(what + " at request to item " + std::to_string(z));
    };
    if (fpm + r.dphi[0] > R * r.dw[0].value() + tol) fail("predecessor-pair amortized bound violated");
    if (r.dphi[1] > R * r.dw[1].value() + tol) fail("successor-pair amortized bound violated");
    if (r.dphi[2] > R * r.dw[2].value() + tol) fail("unrelated-pair amortized bound violated");

    std::int64_t halves = 0;
    for (int i = 0; i < 5; ++i) halves += r.v[static_cast<std::size_t>(i)];
    if (r.dw[0].halves() != halves) fail("predecessor work-function growth differs from its count-vector form");

    double phi_before_p1 = 0;
    for (int i = 0; i < kPairStates; ++i)
      phi_before_p1 += params_[static_cast<PairState>(i)] * static_cast<double>(r.v[static_cast<std::size_t>(i)]);
    const double access = static_cast<double>(pz - 1);
    const double partial_diff = access + r.partial_value - phi_before_p1;
    const double full_diff = access + r.full_value - phi_before_p1;
    if (std::abs(full_diff - r.gain_fm) > tol) fail("full-move amortized cost differs from its gain-vector form");
    if (partial_diff > r.gain_pm + tol) fail("partial-move amortized cost exceeds its gain-vector bound");
    if (fpm + r.dphi[0] > std::min(r.gain_pm, r.gain_fm) + tol) fail("chosen move exceeds the gain-vector minimum");
  }

  ListState list_;
  std::vector<ItemId> targets_;
  PairTracker tracker_;
  PotentialParams params_;
  GainVectors gains_;
  bool audit_ = true;
  double frozen_potential_ = 0;
  HalfInteger last_dw_;
  TransitionCounts transitions_{};
};

/// One JSON object per step with stable field names.
inline std::string to_json_line(const FpmStepReport& r, const Universe& u) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "{\"event\":\"" << event_to_string(r.event, u) << "\",\"move\":\"" << to_string(r.move)
     << "\",\"access\":" << r.access_cost << ",\"swaps\":" << r.swap_count << ",\"total\":" << r.total_cost
     << ",\"v\":[";
  for (int i = 0; i < kPairStates; ++i) os << (i ? "," : "") << r.v[static_cast<std::size_t>(i)];
  os << "],\"dphi\":[" << r.dphi[0] << ',' << r.dphi[1] << ',' << r.dphi[2] << "],\"dw\":[" << r.dw[0].value() << ','
     << r.dw[1].value() << ',' << r.dw[2].value() << "],\"partial_value\":" << r.partial_value
     << ",\"full_value\":" << r.full_value << ",\"gain_pm\":" << r.gain_pm << ",\"gain_fm\":" << r.gain_fm
     << ",\"list\":[";
  for (std::size_t i = 0; i < r.list_after.size(); ++i) os << (i ? "," : "") << '"' << u.label(r.list_after.order()[i]) << '"';
  os << "]}";
  return os.str();
}

/// FPM behind the generic algorithm interface.
class FpmAlgorithm : public OnlineAlgorithm {
 public:
  explicit FpmAlgorithm(PotentialParams params = {}, bool audit = false) : params_(params), audit_(audit) {}

  std::string name() const override { return "fpm"; }
  void reset(const ListState& initial, std::size_t universe) override {
    engine_ = FpmEngine(initial, universe, params_, audit_);
  }
  StepReport on_event(const Event& e, CostModel model) override { return engine_.step(e, model).basic(); }
  const ListState& list() const override { return engine_.list(); }
  std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<FpmAlgorithm>(*this); }

  /// Target positions, then pair modes relative to the list.
  std::optional<std::string> state_key() const override {
    const auto& l = engine_.list();
    std::string key;
    for (ItemId x : l.order()) key += static_cast<char>('0' + l.position(engine_.target(x)));
    key += '|';
    for (std::size_t i = 0; i < l.size(); ++i)
      for (std::size_t j = i + 1; j < l.size(); ++j)
        key += static_cast<char>('0' + static_cast<int>(engine_.tracker().mode(l.order()[i], l.order()[j])));
    return key;
  }

  const FpmEngine& engine() const { return engine_; }

 private:
  PotentialParams params_;
  bool audit_;
  FpmEngine engine_;
};

}  // namespace listup
