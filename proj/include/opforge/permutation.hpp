#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace opforge {

// Bijection of {1..n}; stored 0-based. Product is composition: (s*t)(j) = s(t(j)).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> zero_based) : img_(std::move(zero_based)) {
    std::vector<bool> seen(img_.size(), false);
    for (std::size_t v : img_) {
      if (v >= img_.size() || seen[v]) throw std::invalid_argument("not a permutation");
      seen[v] = true;
    }
  }
  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return Permutation(std::move(v), Unchecked{});
  }
  // From 1-based images, as in the paper's one-line notation.
  static Permutation from_one_based(const std::vector<std::size_t>& imgs) {
    std::vector<std::size_t> v;
    v.reserve(imgs.size());
    for (std::size_t x : imgs) {
      if (x == 0) throw std::invalid_argument("permutation entries are 1-based");
      v.push_back(x - 1);
    }
    return Permutation(std::move(v));
  }
  static Permutation transposition(std::size_t n, std::size_t a, std::size_t b) {
    Permutation p = identity(n);
    std::swap(p.img_.at(a - 1), p.img_.at(b - 1));
    return p;
  }

  std::size_t size() const { return img_.size(); }
  // 1-based application.
  std::size_t operator()(std::size_t j) const { return img_.at(j - 1) + 1; }
  const std::vector<std::size_t>& images() const { return img_; }
  std::vector<std::size_t> one_based() const {
    std::vector<std::size_t> v(img_);
    for (auto& x : v) ++x;
    return v;
  }
  bool is_identity() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<std::size_t> v(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) v[img_[i]] = i;
    return Permutation(std::move(v), Unchecked{});
  }
  friend Permutation operator*(const Permutation& s, const Permutation& t) {
    if (s.size() != t.size()) throw std::invalid_argument("permutation size mismatch");
    std::vector<std::size_t> v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = s.img_[t.img_[i]];
    return Permutation(std::move(v), Unchecked{});
  }

  // Block permutation s o_i t: the permutation rho with
  // (x.s) o_i (y.t) = (x o_{s(i)} y).rho for operations acted on the right.
  static Permutation block(const Permutation& s, std::size_t i, const Permutation& t) {
    const std::size_t n = s.size(), m = t.size();
    if (i < 1 || i > n) throw std::out_of_range("block index");
    const std::size_t si = s(i);
    std::vector<std::size_t> v;
    v.reserve(n + m - 1);
    auto shift = [&](std::size_t a) { return a < si ? a : a + m - 1; };
    for (std::size_t j = 1; j < i; ++j) v.push_back(shift(s(j)) - 1);
    for (std::size_t r = 1; r <= m; ++r) v.push_back(si - 1 + t(r) - 1);
    for (std::size_t j = i + 1; j <= n; ++j) v.push_back(shift(s(j)) - 1);
    return Permutation(std::move(v), Unchecked{});
  }

  // tau with (a.s)(x_1..x_n) = a(x_{s^-1(1)}..x_{s^-1(n)}).tau, where
  // sizes[j] is the arity of x_{j+1}.
  static Permutation over_blocks(const Permutation& s, const std::vector<std::size_t>& sizes) {
    const std::size_t n = s.size();
    if (sizes.size() != n) throw std::invalid_argument("over_blocks: size mismatch");
    const Permutation inv = s.inverse();
    std::vector<std::size_t> start(n + 1, 0);  // start[k]: offset of block k in the permuted order
    for (std::size_t k = 1; k <= n; ++k) start[k] = start[k - 1] + sizes[inv(k) - 1];
    std::vector<std::size_t> v;
    for (std::size_t j = 1; j <= n; ++j)
      for (std::size_t r = 0; r < sizes[j - 1]; ++r) v.push_back(start[s(j) - 1] + r);
    return Permutation(std::move(v), Unchecked{});
  }

  // Block-diagonal sum t_1 + ... + t_n.
  static Permutation direct_sum(const std::vector<Permutation>& ts) {
    std::vector<std::size_t> v;
    std::size_t off = 0;
    for (const auto& t : ts) {
      for (std::size_t x : t.img_) v.push_back(x + off);
      off += t.size();
    }
    return Permutation(std::move(v), Unchecked{});
  }

  static std::vector<Permutation> all(std::size_t n) {
    std::vector<Permutation> out;
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    do {
      out.push_back(Permutation(v, Unchecked{}));
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < img_.size(); ++i) {
      if (i) s += ' ';
      s += std::to_string(img_[i] + 1);
    }
    return s + ")";
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  struct Unchecked {};
  Permutation(std::vector<std::size_t> v, Unchecked) : img_(std::move(v)) {}
  std::vector<std::size_t> img_;
};

inline std::size_t factorial(std::size_t n) {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace opforge
