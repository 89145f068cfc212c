#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "listup/adversary.hpp"
#include "listup/fpm.hpp"

using namespace listup;

namespace {

PairState state_of(const FpmEngine& e, char a, char b) { return e.state(a - 'a', b - 'a'); }

}  // namespace

TEST(Flavor, FreshPairIsDisjoint) {
  ListState l = ListState::identity(2);
  std::vector<ItemId> t = {0, 1};
  EXPECT_EQ(classify_flavor(1, 0, l, t), Flavor::D);
}

TEST(Flavor, SharedTargetIsEqual) {
  ListState l = ListState::identity(3);  // a b c
  std::vector<ItemId> t = {0, 0, 0};
  EXPECT_EQ(classify_flavor(2, 1, l, t), Flavor::E);
}

TEST(Flavor, EarlierTargetIsNested) {
  ListState l = ListState::identity(3);
  std::vector<ItemId> t = {0, 1, 0};  // θ_c = a before θ_b = b
  EXPECT_EQ(classify_flavor(2, 1, l, t), Flavor::N);
}

TEST(Flavor, LaterTargetIsOverlapping) {
  ListState l = ListState::identity(3);
  std::vector<ItemId> t = {0, 0, 1};  // θ_b = a before θ_c = b = b
  EXPECT_EQ(classify_flavor(2, 1, l, t), Flavor::O);
}

TEST(Flavor, WrongOrderThrows) {
  ListState l = ListState::identity(2);
  std::vector<ItemId> t = {0, 1};
  EXPECT_THROW(classify_flavor(0, 1, l, t), OrderViolation);
  EXPECT_THROW(classify_flavor(0, 0, l, t), OrderViolation);
}

TEST(Combine, ForbiddenStatesThrow) {
  EXPECT_THROW(combine(Mode::Alpha, Flavor::N), InvariantViolation);
  EXPECT_THROW(combine(Mode::Gamma, Flavor::D), InvariantViolation);
  EXPECT_THROW(combine(Mode::Gamma, Flavor::O), InvariantViolation);
  EXPECT_EQ(combine(Mode::Alpha, Flavor::E), PairState::AlphaOE);
  EXPECT_EQ(combine(Mode::Beta, Flavor::E), PairState::BetaNE);
}

TEST(Params, DefaultPotentialValues) {
  PotentialParams p;
  EXPECT_EQ(p[PairState::AlphaD], 0.0);
  EXPECT_EQ(p[PairState::GammaNE], 2.0);
  EXPECT_NEAR(p[PairState::BetaNE], 0.305, 1e-3);
  EXPECT_NEAR(p.R, 3.3904, 1e-4);
}

TEST(Params, DefaultsSatisfyConstraintsWithEquality) {
  PotentialParams p;
  for (const auto& c : parameter_constraints(p)) EXPECT_TRUE(c.holds) << c.name;
  EXPECT_NEAR(p.alpha_oe, p.beta_ne + p.R / 2, 1e-12);
}

TEST(Params, ViolationNamesTheInequality) {
  PotentialParams p;
  p.alpha_oe = 5;
  try {
    validate_params(p);
    FAIL();
  } catch (const ConstraintViolation& e) {
    EXPECT_NE(std::string(e.what()).find("alpha^oe <= beta^ne + R/2"), std::string::npos);
  }
  p = {};
  p.alpha_d = 0.1;
  EXPECT_THROW(gain_vectors(p), ConstraintViolation);
}

TEST(Gain, ClosedForms) {
  auto g = gain_vectors(PotentialParams{});
  auto pm = default_pm_closed_form(), fm = default_fm_closed_form();
  for (int i = 0; i < kPairStates; ++i) {
    EXPECT_NEAR(g.pm[i], pm[i].value(), 1e-12);
    EXPECT_NEAR(g.fm[i], fm[i].value(), 1e-12);
  }
  PotentialParams p;
  for (int i = 0; i < kPairStates; ++i)
    EXPECT_NEAR(p.c * g.pm[i] + (1 - p.c) * g.fm[i], p.R * g.opt[i], 1e-12);
}

TEST(Gain, MoveChoiceExamples) {
  auto g = gain_vectors(PotentialParams{});
  EXPECT_EQ(choose_move_by_gain(g, {0, 0, 0, 0, 1, 0}), Move::Partial);
  EXPECT_EQ(choose_move_by_gain(g, {1, 0, 0, 0, 0, 0}), Move::Partial);
  EXPECT_EQ(choose_move_by_gain(g, {0, 1, 0, 0, 0, 0}), Move::Full);
}

TEST(Engine, CountVector) {
  FpmEngine e(ListState::identity(3), 3);
  EXPECT_EQ(e.count_vector(0), (CountVector{0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(e.count_vector(2), (CountVector{2, 0, 0, 0, 0, 0}));
}

TEST(Engine, TwoItemAccessToBack) {
  FpmEngine e(ListState::identity(2), 2);  // [y, x] = [a, b]
  auto r = e.access(1);
  EXPECT_EQ(r.move, Move::Partial);
  EXPECT_EQ(r.total_cost, 1);
  EXPECT_EQ(r.swap_count, 0);
  EXPECT_EQ(e.list(), ListState::identity(2));
  EXPECT_EQ(state_of(e, 'a', 'b'), PairState::BetaNE);
}

TEST(Engine, FrontAccessIsFree) {
  FpmEngine e(ListState::identity(4), 4);
  auto r = e.access(0);
  EXPECT_EQ(r.total_cost, 0);
  EXPECT_EQ(r.move, Move::Partial);
  EXPECT_EQ(r.v, (CountVector{}));
  EXPECT_EQ(r.dphi[0], 0.0);
  EXPECT_EQ(e.list(), ListState::identity(4));
}

TEST(Engine, InsertAppendsFreshItem) {
  FpmEngine e(ListState::identity(3), 6);
  auto r = e.insert(5);
  EXPECT_EQ(e.list(), ListState({0, 1, 2, 5}));
  EXPECT_EQ(e.target(5), 5);
  for (ItemId y : {0, 1, 2}) EXPECT_EQ(e.state(y, 5), PairState::AlphaD);
  EXPECT_EQ(r.membership_dphi, 0.0);
  EXPECT_EQ(r.access_cost, 3);
  EXPECT_EQ(e.insert(4, CostModel::Partial, true).access_cost, 0);
}

TEST(Engine, DeleteFrontItemFreezesPairs) {
  FpmEngine e(ListState::identity(3), 3);
  auto r = e.remove(0);
  EXPECT_EQ(r.access_cost, 0);
  EXPECT_EQ(r.move, Move::Partial);
  EXPECT_EQ(e.list(), ListState({1, 2}));
  EXPECT_EQ(e.tracker().activity(0, 1), PairActivity::Inactive);
  EXPECT_EQ(e.tracker().activity(0, 2), PairActivity::Inactive);
  EXPECT_EQ(e.tracker().activity(1, 2), PairActivity::Active);
}

TEST(Engine, InsertThenDeleteLeavesPotential) {
  FpmEngine e(ListState::identity(3), 4);
  e.access(2);
  e.access(1);
  const double before = e.potential();
  e.insert(3);
  auto r = e.remove(3);
  // The deletion's access part may change potential; the removal itself may not.
  EXPECT_NEAR(r.membership_dphi, 0.0, 1e-12);
  EXPECT_NEAR(e.potential() - before, r.dphi[0] + r.dphi[1] + r.dphi[2], 1e-12);
}

TEST(Engine, ChooseMoveMatchesStep) {
  std::mt19937_64 rng(7);
  FpmEngine e(ListState::identity(5), 5);
  for (int t = 0; t < 2000; ++t) {
    ItemId z = static_cast<ItemId>(rng() % 5);
    Move predicted = e.choose_move(z);
    EXPECT_EQ(e.access(z).move, predicted);
  }
}

TEST(Engine, AppendixTraceFromWarmStart) {
  auto rep = gen_fpm_lb(3);
  EXPECT_FALSE(rep.searched);
  std::vector<std::int64_t> expected = {2, 6, 14, 20, 28, 33, 35, 39, 42, 44, 48, 52, 60, 64, 68, 76};
  EXPECT_EQ(rep.first_cycle_trace, expected);
  for (auto c : rep.cycle_costs) EXPECT_EQ(c, 76);
  for (auto h : rep.cycle_pair_opt) EXPECT_EQ(h, HalfInteger::from_int(25));
  EXPECT_EQ(rep.warmup_cost, 3);
  EXPECT_EQ(rep.warmup_pair_opt, HalfInteger::from_int(2));
  EXPECT_EQ(rep.cycle_schedule_cost, 25 * 3);
}
