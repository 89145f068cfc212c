#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <limits>
#include <random>

#include "listup/adversary.hpp"
#include "listup/full_wf.hpp"
#include "listup/pair_wf.hpp"

using namespace listup;

namespace {

std::vector<ListState> all_orders(const ListState& base) {
  std::vector<ItemId> v = base.order();
  std::sort(v.begin(), v.end());
  std::vector<ListState> out;
  do out.emplace_back(v);
  while (std::next_permutation(v.begin(), v.end()));
  return out;
}

// Layered shortest path over explicit lists: rearrange freely (paying the
// swap distance), then pay the access.
std::int64_t layered_opt(const RequestSequence& seq, CostModel model) {
  auto lists = all_orders(seq.initial);
  std::vector<std::int64_t> cost(lists.size());
  for (std::size_t i = 0; i < lists.size(); ++i) cost[i] = static_cast<std::int64_t>(swap_distance(seq.initial, lists[i]));
  for (const Event& e : seq.events) {
    std::vector<std::int64_t> next(lists.size(), std::numeric_limits<std::int64_t>::max());
    for (std::size_t p = 0; p < lists.size(); ++p) {
      const std::int64_t served = cost[p] + access_cost(lists[p], e.item, model);
      for (std::size_t q = 0; q < lists.size(); ++q)
        next[q] = std::min(next[q], served + static_cast<std::int64_t>(swap_distance(lists[p], lists[q])));
    }
    cost = std::move(next);
  }
  return *std::min_element(cost.begin(), cost.end());
}

// Depth-first enumeration of every schedule: before each request pick any
// list, pay the rearrangement and the access.
std::int64_t enumerate_opt(const RequestSequence& seq, CostModel model) {
  auto lists = all_orders(seq.initial);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::function<void(std::size_t, const ListState&, std::int64_t)> go = [&](std::size_t t, const ListState& cur,
                                                                            std::int64_t acc) {
    if (acc >= best) return;
    if (t == seq.events.size()) {
      best = acc;
      return;
    }
    for (const auto& l : lists)
      go(t + 1, l, acc + static_cast<std::int64_t>(swap_distance(cur, l)) + access_cost(l, seq.events[t].item, model));
  };
  go(0, seq.initial, 0);
  return best;
}

RequestSequence random_access_sequence(std::size_t n, std::size_t len, std::mt19937_64& rng) {
  RequestSequence s{Universe::letters(n), ListState::identity(n), {}};
  for (std::size_t t = 0; t < len; ++t) s.events.push_back(Event::access(static_cast<ItemId>(rng() % n)));
  return s;
}

}  // namespace

TEST(PairWf, InitialValues) {
  EXPECT_EQ(pair_wf_init(PairOrder::XY), (PairWorkFunction{0, 1}));
  EXPECT_EQ(pair_wf_init(PairOrder::YX), (PairWorkFunction{1, 0}));
  EXPECT_EQ(pair_wf_init(PairOrder::XY).average_halves(), 1);
}

TEST(PairWf, UpdateExamples) {
  PairWorkFunction w{0, 1};
  EXPECT_EQ(pair_wf_update(w, PairRequest::X), (PairWorkFunction{0, 1}));
  EXPECT_EQ(pair_wf_update(w, PairRequest::Y), (PairWorkFunction{1, 1}));
  EXPECT_EQ(pair_wf_update({1, 1}, PairRequest::Y), (PairWorkFunction{2, 1}));
}

TEST(PairWf, ModeAlongRepeatedRequests) {
  // Online list keeps y before x while x is requested twice: alpha, beta, gamma.
  PairWorkFunction w{1, 0};
  EXPECT_EQ(classify_mode(w, PairOrder::YX), Mode::Alpha);
  w = pair_wf_update(w, PairRequest::X);
  EXPECT_EQ(w, (PairWorkFunction{1, 1}));
  EXPECT_EQ(classify_mode(w, PairOrder::YX), Mode::Beta);
  w = pair_wf_update(w, PairRequest::X);
  EXPECT_EQ(w, (PairWorkFunction{1, 2}));
  EXPECT_EQ(classify_mode(w, PairOrder::YX), Mode::Gamma);
  EXPECT_EQ(classify_mode({0, 1}, PairOrder::YX), Mode::Gamma);
  EXPECT_THROW(classify_mode({0, 3}, PairOrder::XY), CorruptWorkFunction);
}

TEST(PairWf, DeltaW) {
  EXPECT_EQ(delta_w({0, 1}, {0, 1}).halves(), 0);
  EXPECT_EQ(delta_w({0, 1}, {1, 1}).halves(), 1);
  EXPECT_EQ(delta_w({1, 1}, {2, 1}).halves(), 1);
}

TEST(PairWf, MatchesTwoItemExactOptimum) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    auto s = random_access_sequence(2, 1 + rng() % 12, rng);
    PairWorkFunction w = pair_wf_init(PairOrder::XY);
    for (const Event& e : s.events) w = pair_wf_update(w, e.item == 0 ? PairRequest::X : PairRequest::Y);
    EXPECT_EQ(std::min(w.xy, w.yx), opt_exact(s));
  }
}

TEST(PairBasedOpt, EmptyAndSigmaTwo) {
  RequestSequence empty{Universe::letters(3), ListState::identity(3), {}};
  EXPECT_EQ(pair_based_opt(empty).halves(), 0);
  auto sigma2 = gen_dbit_partial(2).sequence;
  EXPECT_LE(pair_based_opt(sigma2).value(), 2.0);
  EXPECT_EQ(opt_exact(sigma2), 2);
}

TEST(PairBasedOpt, CycleOfTheFpmConstruction) {
  auto rep = gen_fpm_lb(2);
  EXPECT_EQ(rep.cycle_pair_opt[0], HalfInteger::from_int(25));
}

TEST(FullWf, SingleItemNeverChanges) {
  auto f = FullWorkFunction::initial(ListState::identity(1));
  auto g = full_wf_update(f, 0, CostModel::Partial);
  EXPECT_EQ(g.offset, f.offset);
  EXPECT_EQ(g.minimum, 0);
}

TEST(FullWf, TwoItemsReproducePairUpdate) {
  std::mt19937_64 rng(2);
  auto f = FullWorkFunction::initial(ListState::identity(2));
  PairWorkFunction w = pair_wf_init(PairOrder::XY);
  for (int t = 0; t < 100; ++t) {
    ItemId z = static_cast<ItemId>(rng() % 2);
    f = full_wf_update(f, z, CostModel::Partial);
    w = pair_wf_update(w, z == 0 ? PairRequest::X : PairRequest::Y);
    EXPECT_EQ(f.value(f.rank_of(ListState({0, 1}))), w.xy);
    EXPECT_EQ(f.value(f.rank_of(ListState({1, 0}))), w.yx);
  }
}

TEST(FullWf, ThreeItemsAfterRequestToLast) {
  auto f = full_wf_update(FullWorkFunction::initial(ListState::identity(3)), 2, CostModel::Partial);
  EXPECT_EQ(f.value(f.rank_of(ListState({0, 1, 2}))), 2);
  EXPECT_EQ(f.value(f.rank_of(ListState({2, 0, 1}))), 2);
  // Any order costs at most access from the start plus the move there.
  for (const auto& l : all_orders(ListState::identity(3))) {
    RequestSequence s{Universe::letters(3), ListState::identity(3), {Event::access(2)}};
    EXPECT_GE(f.value(f.rank_of(l)), opt_exact(s));
  }
}

TEST(OptExact, EmptyIsZero) {
  RequestSequence s{Universe::letters(4), ListState::identity(4), {}};
  EXPECT_EQ(opt_exact(s), 0);
}

TEST(OptExact, MatchesScheduleEnumeration) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    auto s = random_access_sequence(3, 1 + rng() % 6, rng);
    for (CostModel m : {CostModel::Partial, CostModel::Full}) EXPECT_EQ(opt_exact(s, m), enumerate_opt(s, m));
  }
}

TEST(OptExact, MatchesLayeredOracleAndBoundsPairOpt) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 2 + rng() % 3;
    auto s = random_access_sequence(n, rng() % 11, rng);
    const auto exact = opt_exact(s);
    EXPECT_EQ(exact, layered_opt(s, CostModel::Partial));
    EXPECT_LE(pair_based_opt(s).value(), static_cast<double>(exact));
    EXPECT_LE(pair_based_opt(s, CostModel::Full).value(), static_cast<double>(opt_exact(s, CostModel::Full)));
  }
}

TEST(OptExact, BoundAndDynamicSequencesRejected) {
  RequestSequence s{Universe::letters(8), ListState::identity(8), {Event::access(0)}};
  EXPECT_THROW(opt_exact(s), StateSpaceExceeded);
  RequestSequence d{Universe::letters(3), ListState::identity(2), {Event::insert(2)}};
  EXPECT_THROW(opt_exact(d), InvalidSequence);
}
