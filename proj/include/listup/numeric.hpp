#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "listup/core.hpp"

namespace listup {

/// Exact multiple of 1/2, stored as a count of halves.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;
  static constexpr HalfInteger from_halves(std::int64_t h) { return HalfInteger(h); }
  static constexpr HalfInteger from_int(std::int64_t v) { return HalfInteger(2 * v); }

  constexpr std::int64_t halves() const { return halves_; }
  constexpr double value() const { return static_cast<double>(halves_) / 2.0; }

  constexpr HalfInteger& operator+=(HalfInteger o) {
    halves_ += o.halves_;
    return *this;
  }
  constexpr HalfInteger& operator-=(HalfInteger o) {
    halves_ -= o.halves_;
    return *this;
  }
  friend constexpr HalfInteger operator+(HalfInteger a, HalfInteger b) { return a += b; }
  friend constexpr HalfInteger operator-(HalfInteger a, HalfInteger b) { return a -= b; }
  friend constexpr auto operator<=>(HalfInteger, HalfInteger) = default;

  std::string to_string() const {
    std::int64_t whole = halves_ / 2;
    if (halves_ % 2 == 0) return std::to_string(whole);
    if (halves_ < 0 && whole == 0) return "-0.5";
    return std::to_string(whole) + ".5";
  }

 private:
  constexpr explicit HalfInteger(std::int64_t h) : halves_(h) {}
  std::int64_t halves_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, HalfInteger h) { return os << h.to_string(); }

/// Positive rational used for competitive ratios, kept exact for audits.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t n, std::int64_t d) {
    if (d == 0) throw Error("rational with zero denominator");
    if (d < 0) n = -n, d = -d;
    std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) g = 1;
    return {n / g, d / g};
  }

  /// Accepts "3", "13/4" or a terminating decimal like "3.25".
  static Rational parse(std::string_view s) {
    auto to_i = [&](std::string_view p) -> std::int64_t {
      if (p.empty()) throw Error("malformed rational '" + std::string(s) + "'");
      std::size_t used = 0;
      std::int64_t v = std::stoll(std::string(p), &used);
      if (used != p.size()) throw Error("malformed rational '" + std::string(s) + "'");
      return v;
    };
    if (auto slash = s.find('/'); slash != std::string_view::npos)
      return make(to_i(s.substr(0, slash)), to_i(s.substr(slash + 1)));
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      std::string_view whole = s.substr(0, dot), frac = s.substr(dot + 1);
      std::int64_t den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      std::int64_t w = whole.empty() ? 0 : to_i(whole);
      std::int64_t f = frac.empty() ? 0 : to_i(frac);
      return make(w * den + (w < 0 ? -f : f), den);
    }
    return make(to_i(s), 1);
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

}  // namespace listup
