#pragma once

#include "listup/adversary.hpp"
#include "listup/algorithm.hpp"
#include "listup/baselines.hpp"
#include "listup/core.hpp"
#include "listup/cycle_ratio.hpp"
#include "listup/fpm.hpp"
#include "listup/full_wf.hpp"
#include "listup/numeric.hpp"
#include "listup/pair_wf.hpp"
#include "listup/permutations.hpp"
#include "listup/sequence_io.hpp"
#include "listup/random_seq.hpp"
#include "listup/verifier.hpp"

namespace listup {

inline const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {"mtf", "dbit", "halfmove", "static", "wfa", "fpm"};
  return names;
}

/// Builds an algorithm by its short name.
inline std::unique_ptr<OnlineAlgorithm> make_algorithm(std::string_view name, const PotentialParams& params = {},
                                                       bool audit = false) {
  if (name == "mtf") return std::make_unique<MoveToFront>();
  if (name == "dbit") return std::make_unique<DeterministicBit>();
  if (name == "halfmove") return std::make_unique<HalfMove>();
  if (name == "static") return std::make_unique<StaticList>();
  if (name == "wfa") return std::make_unique<WorkFunctionAlgorithm>();
  if (name == "fpm") return std::make_unique<FpmAlgorithm>(params, audit);
  throw Error("unknown algorithm '" + std::string(name) + "'");
}

}  // namespace listup
