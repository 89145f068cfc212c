#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "listup/core.hpp"

namespace listup {

struct RandomSpec {
  std::size_t items = 5;
  std::size_t length = 100;
  std::uint64_t seed = 1;
  /// Probabilities of an insertion / deletion per event; zero for access-only.
  double insert_prob = 0;
  double delete_prob = 0;
  /// Zipf exponent over the live items in order of arrival; zero picks
  /// items uniformly.
  double zipf = 0;
  std::size_t min_items = 2;
  std::size_t max_items = 8;
};

/// Random sequence starting from the list a, b, ... Inserted items are
/// fresh; a deleted item never returns.
inline RequestSequence random_sequence(const RandomSpec& spec) {
  if (spec.items < 1) throw InvalidSequence("random sequence needs at least one item");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const bool dynamic = spec.insert_prob > 0 || spec.delete_prob > 0;
  std::size_t inserts = 0;
  std::vector<char> kinds;
  if (dynamic) {
    // Decide event kinds first so the universe is known up front.
    std::size_t live = spec.items;
    for (std::size_t t = 0; t < spec.length; ++t) {
      double u = coin(rng);
      if (u < spec.insert_prob && live < spec.max_items) {
        kinds.push_back('+');
        ++live;
        ++inserts;
      } else if (u < spec.insert_prob + spec.delete_prob && live > spec.min_items) {
        kinds.push_back('-');
        --live;
      } else {
        kinds.push_back('a');
      }
    }
  } else {
    kinds.assign(spec.length, 'a');
  }

  RequestSequence s{Universe::letters(spec.items + inserts), ListState::identity(spec.items), {}};
  ListState live = s.initial;
  auto next_fresh = static_cast<ItemId>(spec.items);
  std::vector<double> weights;
  auto pick = [&]() -> ItemId {
    if (spec.zipf <= 0) return live.order()[rng() % live.size()];
    weights.resize(live.size());
    for (std::size_t i = 0; i < live.size(); ++i) weights[i] = 1.0 / std::pow(static_cast<double>(i + 1), spec.zipf);
    std::discrete_distribution<std::size_t> d(weights.begin(), weights.end());
    return live.order()[d(rng)];
  };
  for (char k : kinds) {
    if (k == '+') {
      s.events.push_back(Event::insert(next_fresh));
      live.push_back(next_fresh++);
    } else if (k == '-') {
      ItemId x = live.order()[rng() % live.size()];
      s.events.push_back(Event::remove(x));
      live.erase(x);
    } else {
      s.events.push_back(Event::access(pick()));
    }
  }
  return s;
}

}  // namespace listup
