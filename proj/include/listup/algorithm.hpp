#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "listup/core.hpp"
#include "listup/numeric.hpp"
#include "listup/pair_wf.hpp"
#include "listup/sequence_io.hpp"

namespace listup {

/// A deterministic online list-update algorithm.
class OnlineAlgorithm {
 public:
  virtual ~OnlineAlgorithm() = default;

  virtual std::string name() const = 0;
  virtual void reset(const ListState& initial, std::size_t universe) = 0;
  virtual StepReport on_event(const Event& e, CostModel model) = 0;
  virtual const ListState& list() const = 0;
  virtual std::unique_ptr<OnlineAlgorithm> clone() const = 0;

  /// Serialized internal memory with items renamed by list position, for
  /// algorithms whose behaviour depends on a finite abstract state. Two
  /// instances with equal keys behave identically up to that renaming.
  virtual std::optional<std::string> state_key() const { return std::nullopt; }
};

/// Base for algorithms that only move the requested item. Insertions append
/// without reorganizing; deletions access the item and remove it.
class ListAlgorithm : public OnlineAlgorithm {
 public:
  void reset(const ListState& initial, std::size_t universe) override {
    list_ = initial;
    universe_ = universe;
    on_reset();
  }

  const ListState& list() const override { return list_; }

  StepReport on_event(const Event& e, CostModel model) override {
    StepReport r;
    r.event = e;
    switch (e.kind) {
      case EventKind::Access:
        r.access_cost = access_cost(list_, e.item, model);
        r.swap_count = static_cast<std::int64_t>(serve(e.item));
        break;
      case EventKind::Insert:
        list_.push_back(e.item);
        r.access_cost = position_cost(list_.size(), model);
        on_insert(e.item);
        break;
      case EventKind::Delete:
        r.access_cost = access_cost(list_, e.item, model);
        on_delete(e.item);
        list_.erase(e.item);
        break;
    }
    r.total_cost = r.access_cost + r.swap_count;
    r.list_after = list_;
    return r;
  }

 protected:
  virtual void on_reset() {}
  /// Reorganizes after an access to `z`; returns the number of swaps.
  virtual std::size_t serve(ItemId z) = 0;
  virtual void on_insert(ItemId) {}
  virtual void on_delete(ItemId) {}

  ListState list_;
  std::size_t universe_ = 0;
};

struct RunResult {
  std::int64_t total_cost = 0;
  std::vector<StepReport> steps;
  /// Pair-based OPT accumulated after each step.
  std::vector<HalfInteger> cumulative_pair_opt;
  HalfInteger pair_opt;
};

/// Runs `alg` over `seq`. With `adjusted` the access component of insertions
/// is dropped from the reported cost.
inline RunResult run_algorithm(OnlineAlgorithm& alg, const RequestSequence& seq, CostModel model,
                               bool adjusted = false) {
  seq.validate();
  alg.reset(seq.initial, seq.universe.size());
  PairTracker tracker(seq.universe.size());
  ListState shadow = seq.initial;
  tracker.activate_all(shadow);

  RunResult out;
  out.steps.reserve(seq.events.size());
  for (const Event& e : seq.events) {
    StepReport r = alg.on_event(e, model);
    if (adjusted && e.kind == EventKind::Insert) {
      r.access_cost = 0;
      r.total_cost = r.swap_count;
    }
    switch (e.kind) {
      case EventKind::Access:
        out.pair_opt += tracker.on_access(e.item, shadow);
        if (model == CostModel::Full) out.pair_opt += HalfInteger::from_int(1);
        break;
      case EventKind::Insert:
        tracker.on_insert(e.item, shadow);
        shadow.push_back(e.item);
        break;
      case EventKind::Delete:
        out.pair_opt += tracker.on_access(e.item, shadow);
        if (model == CostModel::Full) out.pair_opt += HalfInteger::from_int(1);
        tracker.on_remove(e.item, shadow);
        shadow.erase(e.item);
        break;
    }
    out.total_cost += r.total_cost;
    out.cumulative_pair_opt.push_back(out.pair_opt);
    out.steps.push_back(std::move(r));
  }
  return out;
}

/// CSV with columns step,event,access,swaps,total,cum_alg,cum_pairopt.
inline void write_steps_csv(std::ostream& os, const RunResult& run, const Universe& universe) {
  os << "step,event,access,swaps,total,cum_alg,cum_pairopt\n";
  std::int64_t cum = 0;
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    const auto& s = run.steps[i];
    cum += s.total_cost;
    os << (i + 1) << ',' << event_to_string(s.event, universe) << ',' << s.access_cost << ',' << s.swap_count << ','
       << s.total_cost << ',' << cum << ',' << run.cumulative_pair_opt[i] << '\n';
  }
}

}  // namespace listup
