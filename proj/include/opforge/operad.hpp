#pragma once

/** @file operad.hpp
 *  @brief Operad interface, the built-in finite operads, operad maps,
 *  truncation, and exhaustive law validation.
 */

#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opforge/permutation.hpp"
#include "opforge/report.hpp"
#include "opforge/tree.hpp"

namespace opforge {

// Right action convention: input j of x.s is input s(j) of x, so that
// (x.s).t = x.(s*t).
template <class O>
concept Operad = requires(const O& o, const typename O::element_type& a, std::size_t i, const Permutation& s,
                          const Json& j) {
  typename O::element_type;
  requires std::totally_ordered<typename O::element_type>;
  { o.name() } -> std::convertible_to<std::string>;
  { o.arity(a) } -> std::convertible_to<std::size_t>;
  { o.unit() } -> std::same_as<typename O::element_type>;
  { o.compose(a, i, a) } -> std::same_as<typename O::element_type>;
  { o.act(a, s) } -> std::same_as<typename O::element_type>;
  { o.truncation() } -> std::same_as<std::optional<std::size_t>>;
  { o.to_json(a) } -> std::same_as<Json>;
  { o.from_json(j) } -> std::same_as<typename O::element_type>;
};

template <class O>
concept EnumerableOperad = Operad<O> && requires(const O& o, std::size_t n) {
  { o.elements(n) } -> std::same_as<std::vector<typename O::element_type>>;
};

template <Operad O>
using Elem = typename O::element_type;

struct TruncationError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

inline void require_index(std::size_t i, std::size_t n, const char* what) {
  if (i < 1 || i > n) throw std::out_of_range(std::string(what) + ": index " + std::to_string(i) + " not in 1.." +
                                              std::to_string(n));
}

// x(y_1..y_n) = (...(x o_n y_n)...) o_1 y_1.
template <Operad O>
Elem<O> compose_full(const O& op, Elem<O> x, const std::vector<Elem<O>>& ys) {
  if (ys.size() != op.arity(x)) throw std::invalid_argument("compose_full: arity mismatch");
  for (std::size_t j = ys.size(); j >= 1; --j) x = op.compose(x, j, ys[j - 1]);
  return x;
}

// ---------------------------------------------------------------------------
// Com

struct ComElement {
  std::size_t arity = 0;
  friend bool operator==(const ComElement&, const ComElement&) = default;
  friend auto operator<=>(const ComElement&, const ComElement&) = default;
};

class Com {
 public:
  using element_type = ComElement;
  std::string name() const { return "com"; }
  std::size_t arity(const ComElement& a) const { return a.arity; }
  ComElement unit() const { return {1}; }
  ComElement point(std::size_t n) const { return {n}; }
  ComElement compose(const ComElement& x, std::size_t i, const ComElement& y) const {
    require_index(i, x.arity, "com compose");
    return {x.arity + y.arity - 1};
  }
  ComElement act(const ComElement& x, const Permutation& s) const {
    if (s.size() != x.arity) throw std::invalid_argument("com act: size mismatch");
    return x;
  }
  std::vector<ComElement> elements(std::size_t n) const { return {ComElement{n}}; }
  std::optional<std::size_t> truncation() const { return std::nullopt; }
  Json to_json(const ComElement& a) const { return a.arity; }
  ComElement from_json(const Json& j) const {
    if (!j.is_number_unsigned()) throw std::invalid_argument("com element must be a nonnegative arity");
    return {j.get<std::size_t>()};
  }
};

// ---------------------------------------------------------------------------
// Assoc: a word w of length n using each letter 1..n once, read as the
// operation y -> y_{w_1} ... y_{w_n}.

struct AssocElement {
  std::vector<std::size_t> word;
  friend bool operator==(const AssocElement&, const AssocElement&) = default;
  friend auto operator<=>(const AssocElement&, const AssocElement&) = default;
};

class Assoc {
 public:
  using element_type = AssocElement;
  std::string name() const { return "assoc"; }
  std::size_t arity(const AssocElement& a) const { return a.word.size(); }
  AssocElement unit() const { return {{1}}; }
  AssocElement identity(std::size_t n) const {
    AssocElement a;
    for (std::size_t j = 1; j <= n; ++j) a.word.push_back(j);
    return a;
  }
  AssocElement compose(const AssocElement& x, std::size_t i, const AssocElement& y) const {
    const std::size_t n = x.word.size(), m = y.word.size();
    require_index(i, n, "assoc compose");
    AssocElement r;
    r.word.reserve(n + m - 1);
    for (std::size_t l : x.word) {
      if (l < i) {
        r.word.push_back(l);
      } else if (l > i) {
        r.word.push_back(l + m - 1);
      } else {
        for (std::size_t u : y.word) r.word.push_back(u + i - 1);
      }
    }
    return r;
  }
  AssocElement act(const AssocElement& x, const Permutation& s) const {
    if (s.size() != x.word.size()) throw std::invalid_argument("assoc act: size mismatch");
    Permutation inv = s.inverse();
    AssocElement r;
    for (std::size_t l : x.word) r.word.push_back(inv(l));
    return r;
  }
  std::vector<AssocElement> elements(std::size_t n) const {
    std::vector<AssocElement> out;
    for (const auto& p : Permutation::all(n)) out.push_back({p.one_based()});
    return out;
  }
  std::optional<std::size_t> truncation() const { return std::nullopt; }
  Json to_json(const AssocElement& a) const { return a.word; }
  AssocElement from_json(const Json& j) const {
    if (!j.is_array()) throw std::invalid_argument("assoc element must be a word array");
    AssocElement a{j.get<std::vector<std::size_t>>()};
    Permutation::from_one_based(a.word);  // validates
    return a;
  }
};

// Reversal of words; an automorphism of Assoc.
inline AssocElement assoc_reverse(const AssocElement& a) {
  return {std::vector<std::size_t>(a.word.rbegin(), a.word.rend())};
}

// ---------------------------------------------------------------------------
// End(X) for X = {0..q-1}: tables of functions X^n -> X, indexed in mixed
// radix with the first argument most significant.

struct EndElement {
  std::size_t arity = 0;
  std::vector<std::uint8_t> table;
  friend bool operator==(const EndElement&, const EndElement&) = default;
  friend auto operator<=>(const EndElement&, const EndElement&) = default;
};

class End {
 public:
  using element_type = EndElement;
  explicit End(std::size_t q = 2) : q_(q) {
    if (q < 1 || q > 255) throw std::invalid_argument("End(X) needs 1 <= |X| <= 255");
  }
  std::size_t base() const { return q_; }
  std::string name() const { return "end:" + std::to_string(q_); }
  std::size_t arity(const EndElement& a) const { return a.arity; }

  std::size_t table_size(std::size_t n) const {
    std::size_t s = 1;
    for (std::size_t j = 0; j < n; ++j) s *= q_;
    return s;
  }
  std::vector<std::size_t> decode(std::size_t index, std::size_t n) const {
    std::vector<std::size_t> y(n);
    for (std::size_t j = n; j-- > 0;) {
      y[j] = index % q_;
      index /= q_;
    }
    return y;
  }
  std::size_t encode(const std::vector<std::size_t>& y) const {
    std::size_t idx = 0;
    for (std::size_t v : y) idx = idx * q_ + v;
    return idx;
  }
  std::size_t eval(const EndElement& f, const std::vector<std::size_t>& y) const { return f.table.at(encode(y)); }

  EndElement unit() const {
    EndElement e{1, {}};
    for (std::size_t v = 0; v < q_; ++v) e.table.push_back(static_cast<std::uint8_t>(v));
    return e;
  }
  EndElement from_function(std::size_t n, const std::function<std::size_t(const std::vector<std::size_t>&)>& f) const {
    EndElement e{n, {}};
    const std::size_t s = table_size(n);
    e.table.resize(s);
    for (std::size_t idx = 0; idx < s; ++idx) {
      std::size_t v = f(decode(idx, n));
      if (v >= q_) throw std::invalid_argument("End: value outside X");
      e.table[idx] = static_cast<std::uint8_t>(v);
    }
    return e;
  }
  EndElement compose(const EndElement& f, std::size_t i, const EndElement& g) const {
    const std::size_t n = f.arity, m = g.arity;
    require_index(i, n, "end compose");
    return from_function(n + m - 1, [&](const std::vector<std::size_t>& z) {
      std::vector<std::size_t> inner(z.begin() + static_cast<std::ptrdiff_t>(i - 1),
                                     z.begin() + static_cast<std::ptrdiff_t>(i - 1 + m));
      std::vector<std::size_t> y(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(i - 1));
      y.push_back(eval(g, inner));
      y.insert(y.end(), z.begin() + static_cast<std::ptrdiff_t>(i - 1 + m), z.end());
      return eval(f, y);
    });
  }
  EndElement act(const EndElement& f, const Permutation& s) const {
    if (s.size() != f.arity) throw std::invalid_argument("end act: size mismatch");
    Permutation inv = s.inverse();
    return from_function(f.arity, [&](const std::vector<std::size_t>& z) {
      std::vector<std::size_t> y(z.size());
      for (std::size_t j = 1; j <= z.size(); ++j) y[j - 1] = z[inv(j) - 1];
      return eval(f, y);
    });
  }
  std::vector<EndElement> elements(std::size_t n) const {
    const std::size_t s = table_size(n);
    std::size_t count = 1;
    for (std::size_t j = 0; j < s; ++j) {
      if (count > (std::size_t{1} << 24) / q_) throw std::length_error("End(X) arity too large to enumerate");
      count *= q_;
    }
    std::vector<EndElement> out;
    out.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
      EndElement e{n, std::vector<std::uint8_t>(s)};
      std::size_t r = c;
      for (std::size_t j = s; j-- > 0;) {
        e.table[j] = static_cast<std::uint8_t>(r % q_);
        r /= q_;
      }
      out.push_back(std::move(e));
    }
    return out;
  }
  std::optional<std::size_t> truncation() const { return std::nullopt; }
  Json to_json(const EndElement& a) const {
    std::vector<std::size_t> t(a.table.begin(), a.table.end());
    return {{"arity", a.arity}, {"table", t}};
  }
  EndElement from_json(const Json& j) const {
    EndElement e;
    e.arity = j.at("arity").get<std::size_t>();
    auto t = j.at("table").get<std::vector<std::size_t>>();
    if (t.size() != table_size(e.arity)) throw std::invalid_argument("End: table has wrong size");
    for (std::size_t v : t) {
      if (v >= q_) throw std::invalid_argument("End: value outside X");
      e.table.push_back(static_cast<std::uint8_t>(v));
    }
    return e;
  }

 private:
  std::size_t q_;
};

// ---------------------------------------------------------------------------
// FreeTrunc: the free operad on generators of arity >= 2, kept to arities <= N.
// Elements are planar generator-labeled trees with a leaf labeling; the unit
// is the bare leaf.

struct Generator {
  std::string name;
  std::size_t arity;
};

using FreeElement = Node<std::size_t, Empty>;

class FreeTrunc {
 public:
  using element_type = FreeElement;
  FreeTrunc(std::vector<Generator> gens, std::size_t bound) : gens_(std::move(gens)), bound_(bound) {
    for (const auto& g : gens_)
      if (g.arity < 2) throw std::invalid_argument("free operad generators need arity >= 2");
    if (bound_ < 1) throw std::invalid_argument("free operad truncation bound must be >= 1");
  }
  const std::vector<Generator>& generators() const { return gens_; }
  std::string name() const {
    std::string s = "free:";
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      if (g) s += ',';
      s += gens_[g].name + std::to_string(gens_[g].arity);
    }
    return s + ":" + std::to_string(bound_);
  }
  std::size_t arity(const FreeElement& a) const { return leaf_count(a); }
  FreeElement unit() const { return FreeElement::make_leaf(1); }
  FreeElement generator(std::size_t g) const {
    FreeElement v;
    v.label = g;
    for (std::size_t j = 1; j <= gens_.at(g).arity; ++j) v.inputs.push_back(FreeElement::make_leaf(j));
    if (gens_[g].arity > bound_) throw TruncationError("generator exceeds truncation bound");
    return v;
  }
  FreeElement compose(const FreeElement& x, std::size_t i, const FreeElement& y) const {
    require_index(i, arity(x), "free compose");
    if (arity(x) + arity(y) - 1 > bound_) throw TruncationError("free compose exceeds truncation bound");
    return graft_at_label(x, i, y);
  }
  FreeElement act(const FreeElement& x, const Permutation& s) const {
    if (s.size() != arity(x)) throw std::invalid_argument("free act: size mismatch");
    Permutation inv = s.inverse();
    FreeElement r = x;
    map_leaves(r, [&](std::size_t l) { return inv(l); });
    return r;
  }
  std::vector<FreeElement> elements(std::size_t n) const {
    if (n == 0 || n > bound_) return {};
    std::vector<FreeElement> out;
    for (const auto& shape : planar_shapes(n)) {
      for (const auto& p : Permutation::all(n)) out.push_back(with_sigma(shape, p));
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  std::optional<std::size_t> truncation() const { return bound_; }
  Json to_json(const FreeElement& a) const {
    if (a.is_leaf()) return {{"leaf", a.leaf}};
    Json in = Json::array();
    for (const auto& c : a.inputs) in.push_back(to_json(c));
    return {{"gen", gens_.at(a.label).name}, {"inputs", in}};
  }
  FreeElement from_json(const Json& j) const {
    FreeElement e = parse(j);
    if (!leaf_labels_are_permutation(e)) throw std::invalid_argument("free element leaves must be labeled 1..n");
    if (arity(e) > bound_) throw TruncationError("free element exceeds truncation bound");
    return e;
  }

 private:
  FreeElement parse(const Json& j) const {
    if (j.contains("leaf")) return FreeElement::make_leaf(j.at("leaf").get<std::size_t>());
    const std::string name = j.at("gen").get<std::string>();
    FreeElement v;
    bool found = false;
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      if (gens_[g].name == name) {
        v.label = g;
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("unknown generator " + name);
    for (const auto& c : j.at("inputs")) v.inputs.push_back(parse(c));
    if (v.inputs.size() != gens_[v.label].arity) throw std::invalid_argument("generator arity mismatch");
    return v;
  }
  // Planar generator trees with exactly n leaves, labeled 1..n.
  std::vector<FreeElement> planar_shapes(std::size_t n) const {
    std::vector<std::vector<FreeElement>> by_leaves(n + 1);
    by_leaves[1].push_back(FreeElement::make_leaf(1));
    for (std::size_t total = 2; total <= n; ++total) {
      for (std::size_t g = 0; g < gens_.size(); ++g) {
        const std::size_t a = gens_[g].arity;
        if (a > total) continue;
        // Distribute `total` leaves over a ordered inputs, each >= 1.
        std::function<void(std::size_t, std::size_t, FreeElement&)> fill = [&](std::size_t slot, std::size_t left,
                                                                               FreeElement& cur) {
          if (slot == a) {
            if (left == 0) by_leaves[total].push_back(planarize(cur));
            return;
          }
          const std::size_t remaining_slots = a - slot - 1;
          for (std::size_t take = 1; take + remaining_slots <= left; ++take) {
            for (const auto& sub : by_leaves[take]) {
              cur.inputs.push_back(sub);
              fill(slot + 1, left - take, cur);
              cur.inputs.pop_back();
            }
          }
        };
        FreeElement cur;
        cur.label = g;
        fill(0, total, cur);
      }
    }
    return by_leaves[n];
  }

  std::vector<Generator> gens_;
  std::size_t bound_;
};

// ---------------------------------------------------------------------------
// Truncation T_k

template <Operad O>
class Truncated {
 public:
  using element_type = Elem<O>;
  Truncated(O base, std::size_t k) : base_(std::move(base)), k_(k) {}
  const O& base() const { return base_; }
  std::string name() const { return "T" + std::to_string(k_) + "(" + base_.name() + ")"; }
  std::size_t arity(const element_type& a) const { return base_.arity(a); }
  element_type unit() const {
    if (k_ < 1) throw TruncationError("T_0 has no unit");
    return base_.unit();
  }
  element_type compose(const element_type& x, std::size_t i, const element_type& y) const {
    if (arity(x) > k_ || arity(y) > k_ || arity(x) + arity(y) - 1 > k_)
      throw TruncationError("composition leaves the truncation");
    return base_.compose(x, i, y);
  }
  element_type act(const element_type& x, const Permutation& s) const {
    if (arity(x) > k_) throw TruncationError("element outside the truncation");
    return base_.act(x, s);
  }
  std::vector<element_type> elements(std::size_t n) const
    requires EnumerableOperad<O>
  {
    if (n > k_) return {};
    return base_.elements(n);
  }
  std::optional<std::size_t> truncation() const {
    auto b = base_.truncation();
    return b ? std::min(*b, k_) : k_;
  }
  Json to_json(const element_type& a) const { return base_.to_json(a); }
  element_type from_json(const Json& j) const {
    auto a = base_.from_json(j);
    if (arity(a) > k_) throw TruncationError("element outside the truncation");
    return a;
  }

 private:
  O base_;
  std::size_t k_;
};

// ---------------------------------------------------------------------------
// Operad maps

template <Operad O, Operad P>
struct OperadMap {
  std::string name;
  std::function<Elem<P>(const Elem<O>&)> f;
  Elem<P> operator()(const Elem<O>& a) const { return f(a); }
};

template <Operad O>
OperadMap<O, O> identity_map() {
  return {"id", [](const Elem<O>& a) { return a; }};
}

inline OperadMap<Assoc, Com> assoc_to_com() {
  return {"assoc->com", [](const AssocElement& a) { return ComElement{a.word.size()}; }};
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationBudget {
  std::size_t max_arity = 3;
};

namespace detail {

template <EnumerableOperad O>
std::size_t arity_cap(const O& op, std::size_t budget) {
  auto t = op.truncation();
  return t ? std::min(*t, budget) : budget;
}

}  // namespace detail

// Exhaustive check of unit, action, associativity (sequential and parallel)
// and equivariance laws on all elements whose arities stay within budget.
template <EnumerableOperad O>
Report validate_operad(const O& op, ValidationBudget budget) {
  Report rep;
  const std::size_t cap = detail::arity_cap(op, budget.max_arity);
  std::vector<std::vector<Elem<O>>> els(cap + 1);
  for (std::size_t n = 0; n <= cap; ++n) els[n] = op.elements(n);
  auto J = [&](const Elem<O>& a) { return op.to_json(a); };

  const bool has_unit = cap >= 1;
  if (has_unit) {
    const Elem<O> one = op.unit();
    rep.check("unit_arity", op.arity(one) == 1);
    for (std::size_t n = 0; n <= cap; ++n) {
      for (const auto& x : els[n]) {
        rep.check("left_unit", op.compose(one, 1, x) == x, [&] { return Json{{"x", J(x)}}; });
        for (std::size_t i = 1; i <= n; ++i)
          rep.check("right_unit", op.compose(x, i, one) == x, [&] { return Json{{"x", J(x)}, {"i", i}}; });
      }
    }
  }
  for (std::size_t n = 0; n <= cap; ++n) {
    const auto perms = Permutation::all(n);
    for (const auto& x : els[n]) {
      rep.check("action_identity", op.act(x, Permutation::identity(n)) == x, [&] { return Json{{"x", J(x)}}; });
      for (const auto& s : perms)
        for (const auto& t : perms)
          rep.check("action_associative", op.act(op.act(x, s), t) == op.act(x, s * t),
                    [&] { return Json{{"x", J(x)}, {"s", s.one_based()}, {"t", t.one_based()}}; });
    }
  }
  for (std::size_t n = 1; n <= cap; ++n) {
    for (std::size_t m = 0; n + m - 1 <= cap; ++m) {
      for (std::size_t p = 0; p <= cap; ++p) {
        // sequential: (x o_i y) o_j z = x o_i (y o_{j-i+1} z)
        if (m >= 1 && n + m + p - 2 <= cap && m + p - 1 <= cap) {
          for (const auto& x : els[n])
            for (const auto& y : els[m])
              for (const auto& z : els[p])
                for (std::size_t i = 1; i <= n; ++i)
                  for (std::size_t j = i; j <= i + m - 1; ++j)
                    rep.check("sequential_associativity",
                              op.compose(op.compose(x, i, y), j, z) == op.compose(x, i, op.compose(y, j - i + 1, z)),
                              [&] { return Json{{"x", J(x)}, {"y", J(y)}, {"z", J(z)}, {"i", i}, {"j", j}}; });
        }
        // parallel: (x o_i y) o_{j+m-1} z = (x o_j z) o_i y for i < j
        if (n >= 2 && n + m + p - 2 <= cap && n + p - 1 <= cap) {
          for (const auto& x : els[n])
            for (const auto& y : els[m])
              for (const auto& z : els[p])
                for (std::size_t i = 1; i <= n; ++i)
                  for (std::size_t j = i + 1; j <= n; ++j)
                    rep.check("parallel_associativity",
                              op.compose(op.compose(x, i, y), j + m - 1, z) == op.compose(op.compose(x, j, z), i, y),
                              [&] { return Json{{"x", J(x)}, {"y", J(y)}, {"z", J(z)}, {"i", i}, {"j", j}}; });
        }
      }
      // equivariance
      const auto pn = Permutation::all(n);
      const auto pm = Permutation::all(m);
      for (const auto& x : els[n])
        for (const auto& y : els[m])
          for (std::size_t i = 1; i <= n; ++i)
            for (const auto& s : pn)
              for (const auto& t : pm)
                rep.check("equivariance",
                          op.compose(op.act(x, s), i, op.act(y, t)) ==
                              op.act(op.compose(x, s(i), y), Permutation::block(s, i, t)),
                          [&] {
                            return Json{{"x", J(x)}, {"y", J(y)}, {"i", i}, {"s", s.one_based()}, {"t", t.one_based()}};
                          });
    }
  }
  return rep;
}

// Preservation of unit, composition and action by eta, exhaustively within budget.
template <EnumerableOperad O, Operad P>
Report validate_operad_map(const O& src, const P& dst, const OperadMap<O, P>& eta, ValidationBudget budget) {
  Report rep;
  const std::size_t cap = detail::arity_cap(src, budget.max_arity);
  std::vector<std::vector<Elem<O>>> els(cap + 1);
  for (std::size_t n = 0; n <= cap; ++n) els[n] = src.elements(n);
  auto J = [&](const Elem<O>& a) { return src.to_json(a); };
  if (cap >= 1) rep.check("preserves_unit", eta(src.unit()) == dst.unit());
  for (std::size_t n = 0; n <= cap; ++n) {
    for (const auto& x : els[n]) {
      rep.check("preserves_arity", dst.arity(eta(x)) == n, [&] { return Json{{"x", J(x)}}; });
      for (const auto& s : Permutation::all(n))
        rep.check("preserves_action", eta(src.act(x, s)) == dst.act(eta(x), s),
                  [&] { return Json{{"x", J(x)}, {"s", s.one_based()}}; });
    }
  }
  for (std::size_t n = 1; n <= cap; ++n)
    for (std::size_t m = 0; n + m - 1 <= cap; ++m)
      for (const auto& x : els[n])
        for (const auto& y : els[m])
          for (std::size_t i = 1; i <= n; ++i)
            rep.check("preserves_composition", eta(src.compose(x, i, y)) == dst.compose(eta(x), i, eta(y)),
                      [&] { return Json{{"x", J(x)}, {"y", J(y)}, {"i", i}}; });
  return rep;
}

}  // namespace opforge
