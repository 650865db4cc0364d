#pragma once

/** @file cubes.hpp
 *  @brief Configurations of little 1-cubes with exact rational endpoints.
 */

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "opforge/permutation.hpp"
#include "opforge/rational.hpp"

namespace opforge {

struct Interval {
  Rational lo, hi;
  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;

  // Affine embedding [0,1] -> [lo,hi] and its inverse.
  Rational apply(const Rational& t) const { return lo + (hi - lo) * t; }
  Rational unapply(const Rational& t) const { return (t - lo) / (hi - lo); }
  bool contains_open(const Rational& t) const { return lo < t && t < hi; }
  bool contains_closed(const Rational& t) const { return lo <= t && t <= hi; }
};

// A point of C_1(n): cubes with 0 <= lo < hi <= 1 and disjoint interiors.
class CubeConfig {
 public:
  CubeConfig() = default;
  explicit CubeConfig(std::vector<Interval> cubes) : cubes_(std::move(cubes)) { validate(); }

  static CubeConfig unit() { return CubeConfig({Interval{Rational(0), Rational(1)}}); }

  std::size_t arity() const { return cubes_.size(); }
  const std::vector<Interval>& cubes() const { return cubes_; }
  const Interval& operator[](std::size_t i) const { return cubes_.at(i - 1); }

  bool is_increasing() const {
    for (std::size_t i = 1; i < cubes_.size(); ++i)
      if (cubes_[i - 1].hi > cubes_[i].lo) return false;
    return true;
  }

  friend bool operator==(const CubeConfig&, const CubeConfig&) = default;

 private:
  void validate() const {
    for (const auto& c : cubes_) {
      if (!(Rational(0) <= c.lo && c.lo < c.hi && c.hi <= Rational(1)))
        throw std::invalid_argument("cube endpoints must satisfy 0 <= a < b <= 1");
    }
    std::vector<Interval> s = cubes_;
    std::sort(s.begin(), s.end());
    for (std::size_t i = 1; i < s.size(); ++i)
      if (s[i - 1].hi > s[i].lo) throw std::invalid_argument("cube interiors overlap");
  }
  std::vector<Interval> cubes_;
};

// (c.s)_j = c_{s(j)}.
inline CubeConfig act_cubes(const CubeConfig& c, const Permutation& s) {
  if (s.size() != c.arity()) throw std::invalid_argument("cube action: size mismatch");
  std::vector<Interval> v;
  for (std::size_t j = 1; j <= c.arity(); ++j) v.push_back(c[s(j)]);
  return CubeConfig(std::move(v));
}

// Replaces cube i by the images c_i o d_j; d empty forgets cube i.
inline CubeConfig compose_cubes(const CubeConfig& c, std::size_t i, const CubeConfig& d) {
  if (i < 1 || i > c.arity()) throw std::out_of_range("compose_cubes: index out of range");
  std::vector<Interval> v;
  for (std::size_t j = 1; j <= c.arity(); ++j) {
    if (j != i) {
      v.push_back(c[j]);
      continue;
    }
    for (const auto& e : d.cubes()) v.push_back({c[i].apply(e.lo), c[i].apply(e.hi)});
  }
  return CubeConfig(std::move(v));
}

// Returns (sorted, s) with sorted = c.s.
inline std::pair<CubeConfig, Permutation> sort_to_increasing(const CubeConfig& c) {
  std::vector<std::size_t> idx(c.arity());
  for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = j;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return c.cubes()[a] < c.cubes()[b]; });
  Permutation s(idx);
  return {act_cubes(c, s), s};
}

// h_0 = [0, c_1(0)], h_i = [c_i(1), c_{i+1}(0)], h_n = [c_n(1), 1].
inline std::vector<Interval> gaps(const CubeConfig& c) {
  if (!c.is_increasing()) throw std::invalid_argument("gaps: configuration not sorted");
  std::vector<Interval> out;
  Rational prev(0);
  for (const auto& q : c.cubes()) {
    out.push_back({prev, q.lo});
    prev = q.hi;
  }
  out.push_back({prev, Rational(1)});
  return out;
}

}  // namespace opforge
