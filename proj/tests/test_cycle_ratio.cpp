#include <gtest/gtest.h>

#include <functional>
#include <limits>
#include <map>
#include <set>

#include "listup/baselines.hpp"
#include "listup/cycle_ratio.hpp"
#include "listup/fpm.hpp"

using namespace listup;

namespace {

struct Concrete {
  std::unique_ptr<OnlineAlgorithm> alg;
  PairTracker tracker;
  std::size_t n;

  Concrete(const OnlineAlgorithm& proto, std::size_t n_) : alg(proto.clone()), tracker(n_), n(n_) {
    alg->reset(ListState::identity(n), n);
    tracker.activate_all(ListState::identity(n));
  }
  Concrete(const Concrete& o) : alg(o.alg->clone()), tracker(o.tracker), n(o.n) {}

  // Relabel by list position: per position pair, the normalized pair work
  // function oriented front-first.
  std::vector<std::int64_t> canon() const {
    std::vector<std::int64_t> c;
    const auto& o = alg->list().order();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        auto w = tracker.wf(o[i], o[j]);
        std::int64_t front_first = o[i] < o[j] ? w.xy : w.yx;
        std::int64_t back_first = o[i] < o[j] ? w.yx : w.xy;
        c.push_back(front_first - back_first);
      }
    return c;
  }

  std::pair<std::int64_t, HalfInteger> request(std::size_t pos) {
    ItemId z = alg->list().at(pos);
    HalfInteger h = tracker.on_access(z, alg->list());
    return {alg->on_event(Event::access(z), CostModel::Partial).total_cost, h};
  }
};

// Largest alg/opt over closed walks of length <= max_len from any state
// reachable within `depth` requests; +inf if a closed walk has zero OPT.
double brute_cycle_ratio(const OnlineAlgorithm& proto, std::size_t n, std::size_t depth, std::size_t max_len) {
  std::map<std::vector<std::int64_t>, Concrete> reps;
  std::vector<Concrete> frontier{Concrete(proto, n)};
  reps.emplace(frontier[0].canon(), frontier[0]);
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<Concrete> next;
    for (auto& s : frontier)
      for (std::size_t p = 1; p <= n; ++p) {
        Concrete t = s;
        t.request(p);
        if (reps.emplace(t.canon(), t).second) next.push_back(t);
      }
    frontier = std::move(next);
  }
  double best = 0;
  for (auto& [key, rep] : reps) {
    std::vector<std::size_t> word;
    std::function<void(const Concrete&, std::int64_t, HalfInteger)> go = [&](const Concrete& s, std::int64_t a,
                                                                              HalfInteger h) {
      if (!word.empty() && s.canon() == key) {
        if (h.halves() == 0 && a > 0) best = std::numeric_limits<double>::infinity();
        else if (h.halves() > 0) best = std::max(best, static_cast<double>(a) / h.value());
      }
      if (word.size() == max_len) return;
      for (std::size_t p = 1; p <= n; ++p) {
        Concrete t = s;
        auto [ca, ch] = t.request(p);
        word.push_back(p);
        go(t, a + ca, h + ch);
        word.pop_back();
      }
    };
    go(rep, 0, HalfInteger());
  }
  return best;
}

}  // namespace

TEST(CycleRatio, StaticTwoItemsIsUnbounded) {
  // Repeating the back item costs 1 each time while the pair work function
  // stops growing, so no finite ratio exists.
  StaticList s;
  auto r = max_ratio_cycle(s, 2);
  EXPECT_TRUE(r.infinite);
  EXPECT_GT(r.cycle_alg, 0);
  EXPECT_EQ(r.cycle_opt.halves(), 0);
  EXPECT_EQ(brute_cycle_ratio(s, 2, 6, 8), std::numeric_limits<double>::infinity());
}

TEST(CycleRatio, MtfTwoItemsMatchesBruteForce) {
  MoveToFront m;
  auto r = max_ratio_cycle(m, 2);
  ASSERT_FALSE(r.infinite);
  EXPECT_DOUBLE_EQ(r.value(), brute_cycle_ratio(m, 2, 6, 8));
  EXPECT_DOUBLE_EQ(r.value(), 4.0);
}

TEST(CycleRatio, MtfThreeItemsAtLeastThree) {
  MoveToFront m;
  auto r = max_ratio_cycle(m, 3);
  ASSERT_FALSE(r.infinite);
  EXPECT_GE(r.value(), 3.0);
  EXPECT_DOUBLE_EQ(r.value(), brute_cycle_ratio(m, 3, 6, 6));
}

TEST(CycleRatio, DbitTwoItemsMatchesBruteForce) {
  DeterministicBit d;
  auto r = max_ratio_cycle(d, 2);
  EXPECT_DOUBLE_EQ(r.value(), brute_cycle_ratio(d, 2, 8, 8));
}

TEST(CycleRatio, WitnessReplays) {
  MoveToFront m;
  auto r = max_ratio_cycle(m, 3);
  std::vector<std::size_t> prefix;
  // Re-derive the positions of the prefix from the concrete witness.
  MoveToFront replay;
  replay.reset(ListState::identity(3), 3);
  for (std::size_t t = 0; t < r.prefix_length; ++t) {
    ItemId z = r.witness.events[t].item;
    prefix.push_back(replay.list().position(z));
    replay.on_event(r.witness.events[t], CostModel::Partial);
  }
  auto [a, h] = replay_cycle(m, 3, CostModel::Partial, prefix, r.cycle_positions);
  EXPECT_EQ(a, r.cycle_alg);
  EXPECT_EQ(h, r.cycle_opt.halves());
}

TEST(CycleRatio, FpmFiveItemsReachesLowerBound) {
  FpmAlgorithm f;
  auto r = max_ratio_cycle(f, 5);
  ASSERT_FALSE(r.infinite);
  EXPECT_GE(r.value(), 3.04 - 1e-9);
  EXPECT_LE(r.value(), PotentialParams{}.R + 1e-9);
}

TEST(CycleRatio, NoStateKeyIsRejected) {
  WorkFunctionAlgorithm w;
  EXPECT_THROW(max_ratio_cycle(w, 2), Error);
}
