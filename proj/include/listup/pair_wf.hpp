#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "listup/core.hpp"
#include "listup/numeric.hpp"

namespace listup {

struct CorruptWorkFunction : Error { using Error::Error; };

/// Work function of a two-item instance {x, y}: `xy` is the optimal cost of
/// serving the projected requests and ending with x before y, `yx` likewise.
struct PairWorkFunction {
  std::int64_t xy = 0;
  std::int64_t yx = 0;

  /// Twice the average (w_xy + w_yx) / 2, i.e. the sum.
  std::int64_t average_halves() const { return xy + yx; }
  bool operator==(const PairWorkFunction& o) const { return xy == o.xy && yx == o.yx; }
};

enum class PairOrder { XY, YX };
enum class PairRequest { X, Y };

enum class Mode { Alpha, Beta, Gamma };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::Alpha: return "alpha";
    case Mode::Beta: return "beta";
    case Mode::Gamma: return "gamma";
  }
  return "?";
}

/// Value 0 at the initial order and 1 at the swapped order.
inline PairWorkFunction pair_wf_init(PairOrder initial) {
  return initial == PairOrder::XY ? PairWorkFunction{0, 1} : PairWorkFunction{1, 0};
}

/// One dynamic-programming step: W'(p) = min_q W(q) + access(q) + d(q, p).
inline PairWorkFunction pair_wf_update(const PairWorkFunction& w, PairRequest requested,
                                       CostModel model = CostModel::Partial) {
  const std::int64_t base = model == CostModel::Full ? 1 : 0;
  // access cost of the requested item in configuration xy / yx
  const std::int64_t in_xy = base + (requested == PairRequest::X ? 0 : 1);
  const std::int64_t in_yx = base + (requested == PairRequest::Y ? 0 : 1);
  PairWorkFunction out;
  out.xy = std::min(w.xy + in_xy, w.yx + in_yx + 1);
  out.yx = std::min(w.yx + in_yx, w.xy + in_xy + 1);
  return out;
}

/// Mode of {x, y} given which order the online list currently holds.
inline Mode classify_mode(const PairWorkFunction& w, PairOrder online) {
  const std::int64_t here = online == PairOrder::XY ? w.xy : w.yx;
  const std::int64_t other = online == PairOrder::XY ? w.yx : w.xy;
  if (here + 1 == other) return Mode::Alpha;
  if (here == other) return Mode::Beta;
  if (here - 1 == other) return Mode::Gamma;
  throw CorruptWorkFunction("pair work function gap " + std::to_string(here - other) + " outside {-1,0,1}");
}

/// Growth of the averaged work function, 0 or 1/2.
inline HalfInteger delta_w(const PairWorkFunction& before, const PairWorkFunction& after) {
  return HalfInteger::from_halves(after.average_halves() - before.average_halves());
}

enum class PairActivity { Dormant, Active, Inactive };

/// Work functions for every unordered pair of a universe, with the
/// dormant/active/inactive lifecycle used when items come and go.
/// Pair {i, j} with i < j is stored with x = i and y = j.
class PairTracker {
 public:
  PairTracker() = default;
  explicit PairTracker(std::size_t universe) : n_(universe), wf_(universe * universe), act_(universe * universe) {}

  std::size_t universe() const { return n_; }

  /// Activates every pair of the list's items in its current relative order.
  void activate_all(const ListState& list) {
    const auto& o = list.order();
    for (std::size_t i = 0; i < o.size(); ++i)
      for (std::size_t j = i + 1; j < o.size(); ++j) activate(o[i], o[j]);
  }

  /// Activates {front, back} with `front` currently before `back`.
  void activate(ItemId front, ItemId back) {
    std::size_t k = index(front, back);
    if (act_[k] != PairActivity::Dormant) throw InvariantViolation("pair activated twice");
    act_[k] = PairActivity::Active;
    wf_[k] = pair_wf_init(front < back ? PairOrder::XY : PairOrder::YX);
  }

  /// New item appended at the end of `list_before`.
  void on_insert(ItemId z, const ListState& list_before) {
    for (ItemId y : list_before.order()) activate(y, z);
  }

  /// Request to `z`: updates every active pair containing it; returns the
  /// summed growth of the averaged work functions.
  HalfInteger on_access(ItemId z, const ListState& list) {
    HalfInteger total;
    for (ItemId y : list.order()) {
      if (y == z) continue;
      std::size_t k = index(z, y);
      if (act_[k] != PairActivity::Active) continue;
      PairWorkFunction before = wf_[k];
      wf_[k] = pair_wf_update(before, z < y ? PairRequest::X : PairRequest::Y);
      total += delta_w(before, wf_[k]);
    }
    return total;
  }

  /// `z` left the list: its active pairs freeze.
  void on_remove(ItemId z, const ListState& list) {
    for (ItemId y : list.order()) {
      if (y == z) continue;
      std::size_t k = index(z, y);
      if (act_[k] == PairActivity::Active) act_[k] = PairActivity::Inactive;
    }
  }

  const PairWorkFunction& wf(ItemId a, ItemId b) const { return wf_[index(a, b)]; }
  PairActivity activity(ItemId a, ItemId b) const { return act_[index(a, b)]; }

  /// Mode of {a, b} where `first` precedes `second` in the online list.
  Mode mode(ItemId first, ItemId second) const {
    return classify_mode(wf(first, second), first < second ? PairOrder::XY : PairOrder::YX);
  }

 private:
  std::size_t index(ItemId a, ItemId b) const {
    if (a == b || a < 0 || b < 0 || static_cast<std::size_t>(a) >= n_ || static_cast<std::size_t>(b) >= n_)
      throw InvariantViolation("invalid item pair");
    auto lo = static_cast<std::size_t>(std::min(a, b)), hi = static_cast<std::size_t>(std::max(a, b));
    return lo * n_ + hi;
  }

  std::size_t n_ = 0;
  std::vector<PairWorkFunction> wf_;
  std::vector<PairActivity> act_;
};

/// Pair-based lower bound on OPT: the summed growth of averaged pair work
/// functions over each pair's active period. Under the full cost model one
/// unit per access is added, since every access costs one more than the
/// number of items ahead of it.
inline HalfInteger pair_based_opt(const RequestSequence& seq, CostModel model = CostModel::Partial) {
  PairTracker tracker(seq.universe.size());
  ListState list = seq.initial;
  tracker.activate_all(list);
  HalfInteger total;
  for (const Event& e : seq.events) {
    switch (e.kind) {
      case EventKind::Access:
        total += tracker.on_access(e.item, list);
        if (model == CostModel::Full) total += HalfInteger::from_int(1);
        break;
      case EventKind::Insert:
        tracker.on_insert(e.item, list);
        list.push_back(e.item);
        break;
      case EventKind::Delete:
        total += tracker.on_access(e.item, list);
        if (model == CostModel::Full) total += HalfInteger::from_int(1);
        tracker.on_remove(e.item, list);
        list.erase(e.item);
        break;
    }
  }
  return total;
}

}  // namespace listup
