#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "listup/algorithm.hpp"
#include "listup/full_wf.hpp"

namespace listup {

/// Move-to-front.
class MoveToFront : public ListAlgorithm {
 public:
  std::string name() const override { return "mtf"; }
  std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<MoveToFront>(*this); }
  std::optional<std::string> state_key() const override { return std::string(); }

 protected:
  std::size_t serve(ItemId z) override { return list_.move_to(z, 1); }
};

/// Never reorganizes.
class StaticList : public ListAlgorithm {
 public:
  std::string name() const override { return "static"; }
  std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<StaticList>(*this); }
  std::optional<std::string> state_key() const override { return std::string(); }

 protected:
  std::size_t serve(ItemId) override { return 0; }
};

/// Deterministic BIT: a marked item moves to the front and is unmarked, an
/// unmarked item only gets marked.
class DeterministicBit : public ListAlgorithm {
 public:
  std::string name() const override { return "dbit"; }
  std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<DeterministicBit>(*this); }

  std::optional<std::string> state_key() const override {
    std::string key;
    for (ItemId x : list_.order()) key += marked(x) ? '1' : '0';
    return key;
  }

  bool marked(ItemId x) const { return marks_.at(static_cast<std::size_t>(x)) != 0; }

 protected:
  void on_reset() override { marks_.assign(universe_, 0); }
  void on_insert(ItemId z) override { marks_.at(static_cast<std::size_t>(z)) = 0; }

  std::size_t serve(ItemId z) override {
    char& m = marks_.at(static_cast<std::size_t>(z));
    if (!m) {
      m = 1;
      return 0;
    }
    m = 0;
    return list_.move_to(z, 1);
  }

 private:
  std::vector<char> marks_;
};

/// Target position of Half-Move for an item at position `p`: the middle
/// between p and the front, the later of two middles.
inline std::size_t half_move_target(std::size_t p) { return (p + 2) / 2; }

/// Moves the requested item halfway to the front.
class HalfMove : public ListAlgorithm {
 public:
  std::string name() const override { return "halfmove"; }
  std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<HalfMove>(*this); }
  std::optional<std::string> state_key() const override { return std::string(); }

 protected:
  std::size_t serve(ItemId z) override { return list_.move_to(z, half_move_target(list_.position(z))); }
};

/// Moves allowed to a Stay-or-MTF algorithm: leave the item or move it to the front.
inline bool stay_or_mtf_allows(std::size_t from, std::size_t to) { return to == from || to == 1; }

/// Work function algorithm: after each request moves to a list minimizing
/// the updated work function plus the swap distance from the current list.
/// Ties go to the smaller work-function value, then to the lexicographically
/// smallest list of item ids.
class WorkFunctionAlgorithm : public OnlineAlgorithm {
 public:
  explicit WorkFunctionAlgorithm(int max_n = 7) : max_n_(max_n) {}

  std::string name() const override { return "wfa"; }
  std::unique_ptr<OnlineAlgorithm> clone() const override { return std::make_unique<WorkFunctionAlgorithm>(*this); }

  void reset(const ListState& initial, std::size_t) override {
    if (static_cast<int>(initial.size()) > max_n_)
      throw StateSpaceExceeded("wfa: list of " + std::to_string(initial.size()) + " items exceeds the bound");
    list_ = initial;
    wf_ = FullWorkFunction::initial(initial);
    current_ = wf_.rank_of(list_);
  }

  const ListState& list() const override { return list_; }
  const FullWorkFunction& work_function() const { return wf_; }

  StepReport on_event(const Event& e, CostModel model) override {
    if (e.kind != EventKind::Access) throw InvalidSequence("wfa handles access-only sequences");
    StepReport r;
    r.event = e;
    r.access_cost = access_cost(list_, e.item, model);
    wf_ = full_wf_update(wf_, e.item, model);
    const auto& space = permutation_space(wf_.n());
    std::size_t best = current_;
    std::int64_t best_value = std::numeric_limits<std::int64_t>::max();
    std::vector<ItemId> best_list;
    std::int64_t best_wf = 0;
    for (std::size_t q = 0; q < space.size(); ++q) {
      std::int64_t v = wf_.offset[q] + space.distance(q, current_);
      if (v > best_value) continue;
      std::vector<ItemId> cand = wf_.list_of(q).order();
      const bool better = v < best_value || wf_.offset[q] < best_wf || (wf_.offset[q] == best_wf && cand < best_list);
      if (better) {
        best_value = v;
        best_wf = wf_.offset[q];
        best = q;
        best_list = std::move(cand);
      }
    }
    r.swap_count = space.distance(best, current_);
    current_ = best;
    list_ = ListState(std::move(best_list));
    r.total_cost = r.access_cost + r.swap_count;
    r.list_after = list_;
    return r;
  }

 private:
  int max_n_;
  ListState list_;
  FullWorkFunction wf_;
  std::size_t current_ = 0;
};

}  // namespace listup
