#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <vector>

#include "listup/core.hpp"

namespace listup {

/// All permutations of {0..n-1} in lexicographic order, with the tables the
/// work-function code needs. A permutation is a list order of slot indices.
class PermutationSpace {
 public:
  static constexpr int kMaxN = 9;

  explicit PermutationSpace(int n) : n_(n) {
    if (n < 1 || n > kMaxN) throw StateSpaceExceeded("permutation space of size " + std::to_string(n));
    std::vector<std::uint8_t> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), std::uint8_t{0});
    do {
      perms_.insert(perms_.end(), p.begin(), p.end());
    } while (std::next_permutation(p.begin(), p.end()));
    count_ = perms_.size() / static_cast<std::size_t>(n);

    pos_.resize(count_ * static_cast<std::size_t>(n));
    inversions_.resize(count_);
    for (std::size_t r = 0; r < count_; ++r) {
      auto perm = at(r);
      int inv = 0;
      for (int i = 0; i < n; ++i) {
        pos_[r * static_cast<std::size_t>(n) + perm[static_cast<std::size_t>(i)]] = static_cast<std::uint8_t>(i);
        for (int j = i + 1; j < n; ++j) inv += perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)];
      }
      inversions_[r] = inv;
    }

    if (n > 1) {
      neighbors_.resize(count_ * static_cast<std::size_t>(n - 1));
      std::vector<std::uint8_t> q(static_cast<std::size_t>(n));
      for (std::size_t r = 0; r < count_; ++r) {
        auto perm = at(r);
        for (int i = 0; i + 1 < n; ++i) {
          std::copy(perm.begin(), perm.end(), q.begin());
          std::swap(q[static_cast<std::size_t>(i)], q[static_cast<std::size_t>(i) + 1]);
          neighbors_[r * static_cast<std::size_t>(n - 1) + static_cast<std::size_t>(i)] =
              static_cast<std::uint32_t>(rank(q));
        }
      }
    }
  }

  int n() const { return n_; }
  std::size_t size() const { return count_; }

  std::span<const std::uint8_t> at(std::size_t rank) const {
    return {perms_.data() + rank * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }

  /// Lexicographic rank (Lehmer code).
  std::size_t rank(std::span<const std::uint8_t> perm) const {
    std::size_t r = 0;
    for (int i = 0; i < n_; ++i) {
      std::size_t smaller = 0;
      for (int j = i + 1; j < n_; ++j) smaller += perm[static_cast<std::size_t>(j)] < perm[static_cast<std::size_t>(i)];
      r = r * static_cast<std::size_t>(n_ - i) + smaller;
    }
    return r;
  }

  /// 0-based position of slot `s` in permutation `rank`.
  int position(std::size_t rank, int s) const {
    return pos_[rank * static_cast<std::size_t>(n_) + static_cast<std::size_t>(s)];
  }

  /// Swap distance from the identity permutation.
  int inversions(std::size_t rank) const { return inversions_[rank]; }

  /// Ranks reachable by one adjacent transposition.
  std::span<const std::uint32_t> neighbors(std::size_t rank) const {
    if (n_ == 1) return {};
    return {neighbors_.data() + rank * static_cast<std::size_t>(n_ - 1), static_cast<std::size_t>(n_ - 1)};
  }

  /// Kendall-tau distance between two ranks.
  int distance(std::size_t a, std::size_t b) const {
    int d = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        d += (position(a, i) < position(a, j)) != (position(b, i) < position(b, j));
    return d;
  }

  /// Rank of `perm` after renaming slots so that `relabel_by` becomes the
  /// identity: slot relabel_by[k] is renamed k.
  std::size_t relabel(std::size_t perm, std::size_t relabel_by) const {
    std::uint8_t q[kMaxN];
    auto p = at(perm);
    for (int j = 0; j < n_; ++j) q[j] = static_cast<std::uint8_t>(position(relabel_by, p[static_cast<std::size_t>(j)]));
    return rank({q, static_cast<std::size_t>(n_)});
  }

 private:
  int n_;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> perms_;
  std::vector<std::uint8_t> pos_;
  std::vector<int> inversions_;
  std::vector<std::uint32_t> neighbors_;
};

/// Shared, lazily built permutation space for `n`.
inline const PermutationSpace& permutation_space(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<PermutationSpace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<PermutationSpace>(n);
  return *slot;
}

}  // namespace listup
