#pragma once

/** @file bv.hpp
 *  @brief Points of the Boardman-Vogt resolution of an operad, kept as normal
 *  forms of the unit / symmetry / contraction rewriting system.
 */

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "opforge/operad.hpp"
#include "opforge/rational.hpp"
#include "opforge/tree.hpp"

namespace opforge {

// Vertex labels in O, inner edges carry a length in [0,1].
template <class E>
using BVTree = Node<E, Rational>;

namespace detail {
struct NormalFormTag {
  explicit NormalFormTag() = default;
};
}  // namespace detail

template <class E>
class BVPoint {
 public:
  BVPoint() = default;
  BVPoint(detail::NormalFormTag, BVTree<E> t) : t_(std::move(t)) {}

  const BVTree<E>& tree() const { return t_; }
  std::size_t arity() const { return leaf_count(t_); }

  friend bool operator==(const BVPoint& a, const BVPoint& b) { return tree_compare(a.t_, b.t_) == 0; }
  friend std::strong_ordering operator<=>(const BVPoint& a, const BVPoint& b) { return tree_compare(a.t_, b.t_); }

 private:
  BVTree<E> t_;
};

template <Operad O>
using BVOf = BVPoint<Elem<O>>;

enum class BVRewrite { unit, contract };

struct BVRedex {
  BVRewrite kind;
  std::size_t vertex;  // preorder id
};

// Picks one of `count` applicable rewrites; the default always takes the first.
using RedexChooser = std::function<std::size_t(std::size_t count)>;

// Deleting a bivalent unit vertex between two inner edges leaves one edge.
inline Rational bv_merge_unit_edges(const Rational& below, const Rational& above) { return max(below, above); }

template <Operad O>
void bv_check_raw(const O& op, const BVTree<Elem<O>>& t) {
  if (t.is_leaf()) throw std::invalid_argument("bv point needs at least one vertex");
  std::function<void(const BVTree<Elem<O>>&, bool)> go = [&](const BVTree<Elem<O>>& n, bool root) {
    if (n.is_leaf()) return;
    if (op.arity(n.label) != n.inputs.size())
      throw std::invalid_argument("bv point: vertex label arity " + std::to_string(op.arity(n.label)) +
                                  " does not match " + std::to_string(n.inputs.size()) + " inputs");
    if (!root && !n.edge.in_unit_interval())
      throw std::invalid_argument("bv point: edge parameter " + n.edge.str() + " outside [0,1]");
    for (const auto& c : n.inputs) go(c, false);
  };
  go(t, true);
  if (!leaf_labels_are_permutation(t)) throw std::invalid_argument("bv point: leaf labels are not a permutation");
}

template <Operad O>
std::vector<BVRedex> bv_redexes(const O& op, const BVTree<Elem<O>>& t) {
  std::vector<BVRedex> out;
  const auto vs = preorder(t);
  const Elem<O> u = op.unit();
  for (std::size_t id = 0; id < vs.size(); ++id) {
    const auto* v = vs[id];
    if (v->arity() == 1 && v->label == u) {
      const bool lone = id == 0 && v->inputs[0].is_leaf();
      if (!lone) out.push_back({BVRewrite::unit, id});
    }
    if (id != 0 && v->edge.is_zero()) out.push_back({BVRewrite::contract, id});
  }
  return out;
}

template <Operad O>
void bv_apply(const O& op, BVTree<Elem<O>>& t, const BVRedex& r) {
  using T = BVTree<Elem<O>>;
  if (r.vertex == 0) {
    if (r.kind != BVRewrite::unit || t.inputs.size() != 1 || t.inputs[0].is_leaf())
      throw std::logic_error("bv_apply: not a redex at the root");
    T child = std::move(t.inputs[0]);
    child.edge = Rational(0);
    t = std::move(child);
    return;
  }
  std::size_t next = 1;
  std::function<bool(T&)> visit = [&](T& p) {
    for (std::size_t j = 0; j < p.inputs.size(); ++j) {
      T& c = p.inputs[j];
      if (c.is_leaf()) continue;
      if (next++ == r.vertex) {
        if (r.kind == BVRewrite::unit) {
          T d = std::move(c.inputs[0]);
          if (!d.is_leaf()) d.edge = bv_merge_unit_edges(c.edge, d.edge);
          p.inputs[j] = std::move(d);
        } else {
          p.label = op.compose(p.label, j + 1, c.label);
          std::vector<T> spliced;
          spliced.reserve(p.inputs.size() + c.inputs.size() - 1);
          for (std::size_t q = 0; q < j; ++q) spliced.push_back(std::move(p.inputs[q]));
          for (auto& g : c.inputs) spliced.push_back(std::move(g));
          for (std::size_t q = j + 1; q < p.inputs.size(); ++q) spliced.push_back(std::move(p.inputs[q]));
          p.inputs = std::move(spliced);
        }
        return true;
      }
      if (visit(c)) return true;
    }
    return false;
  };
  if (!visit(t)) throw std::logic_error("bv_apply: vertex id out of range");
}

namespace detail {

template <Operad O>
BVOf<O> bv_seal(const O& op, BVTree<Elem<O>> t) {
  canonicalize_children(t, [&](const Elem<O>& a, const Permutation& s) { return op.act(a, s); });
  t.edge = Rational(0);
  return BVOf<O>(NormalFormTag{}, std::move(t));
}

}  // namespace detail

template <Operad O>
BVOf<O> bv_normalize(const O& op, BVTree<Elem<O>> t, const RedexChooser& choose = {}) {
  bv_check_raw(op, t);
  t.edge = Rational(0);
  for (;;) {
    auto rs = bv_redexes(op, t);
    if (rs.empty()) break;
    std::size_t k = choose ? choose(rs.size()) : 0;
    if (k >= rs.size()) throw std::out_of_range("redex chooser returned an invalid index");
    bv_apply(op, t, rs[k]);
  }
  return detail::bv_seal(op, std::move(t));
}

template <Operad O>
BVOf<O> iota(const O& op, const Elem<O>& a) {
  BVTree<Elem<O>> t;
  t.label = a;
  for (std::size_t j = 1; j <= op.arity(a); ++j) t.inputs.push_back(BVTree<Elem<O>>::make_leaf(j));
  return bv_normalize(op, std::move(t));
}

template <Operad O>
BVOf<O> bv_unit(const O& op) {
  return iota(op, op.unit());
}

template <Operad O>
bool bv_is_unit(const O& op, const BVOf<O>& x) {
  const auto& t = x.tree();
  return t.inputs.size() == 1 && t.inputs[0].is_leaf() && t.label == op.unit();
}

// Forgets edge lengths: the composite of all labels along the tree.
template <Operad O>
Elem<O> mu(const O& op, const BVOf<O>& x) {
  std::function<Elem<O>(const BVTree<Elem<O>>&)> eval = [&](const BVTree<Elem<O>>& n) {
    Elem<O> v = n.label;
    for (std::size_t j = n.inputs.size(); j >= 1; --j)
      if (!n.inputs[j - 1].is_leaf()) v = op.compose(v, j, eval(n.inputs[j - 1]));
    return v;
  };
  return op.act(eval(x.tree()), leaf_sigma(x.tree()).inverse());
}

template <Operad O>
BVOf<O> bv_act(const O& op, const BVOf<O>& x, const Permutation& s) {
  if (s.size() != x.arity()) throw std::invalid_argument("bv_act: permutation size mismatch");
  BVTree<Elem<O>> t = x.tree();
  const Permutation inv = s.inverse();
  map_leaves(t, [&](std::size_t l) { return inv(l); });
  return detail::bv_seal(op, std::move(t));
}

template <Operad O>
BVOf<O> bv_compose(const O& op, const BVOf<O>& x, std::size_t i, const BVOf<O>& y) {
  require_index(i, x.arity(), "bv_compose");
  return bv_normalize(op, graft_at_label(x.tree(), i, y.tree(), Rational(1)));
}

// ---------------------------------------------------------------------------
// Prime decomposition: cutting the edges of length 1 of the planar
// representative.

template <class E>
struct BVDecomposition {
  std::vector<BVPoint<E>> components;  // planar classes; component 0 holds the root
  std::vector<std::size_t> parent;     // parent component, npos for component 0
  std::vector<std::size_t> slot;       // input of the parent component it is grafted to
  Permutation sigma;                   // the point is the planar assembly acted on by sigma
};

inline constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

template <class E>
bool bv_is_prime(const BVPoint<E>& x) {
  const auto vs = preorder(x.tree());
  for (std::size_t id = 1; id < vs.size(); ++id)
    if (vs[id]->edge.is_one()) return false;
  return true;
}

template <Operad O>
BVDecomposition<Elem<O>> bv_decompose(const O& op, const BVOf<O>& x) {
  using T = BVTree<Elem<O>>;
  BVDecomposition<Elem<O>> d;
  const T planar = planarize(x.tree());
  const std::size_t n = leaf_count(planar);
  d.sigma = leaf_sigma(x.tree()).inverse();
  std::vector<T> comps;
  std::function<T(const T&, std::size_t)> cut = [&](const T& node, std::size_t comp) {
    T out;
    out.label = node.label;
    for (const auto& c : node.inputs) {
      if (c.is_leaf()) {
        out.inputs.push_back(c);
      } else if (c.edge.is_one()) {
        const std::size_t id = comps.size();
        comps.emplace_back();
        d.parent.push_back(comp);
        T sub = cut(c, id);
        comps[id] = std::move(sub);
        out.inputs.push_back(T::make_leaf(n + 1 + id));
      } else {
        T sub = cut(c, comp);
        sub.edge = c.edge;
        out.inputs.push_back(std::move(sub));
      }
    }
    return out;
  };
  comps.emplace_back();
  d.parent.push_back(kNoParent);
  T root = cut(planar, 0);
  comps[0] = std::move(root);
  d.slot.assign(comps.size(), 0);
  for (const auto& c : comps) {
    const auto ls = leaf_labels(c);
    for (std::size_t p = 0; p < ls.size(); ++p)
      if (ls[p] > n) d.slot[ls[p] - n - 1] = p + 1;
  }
  for (auto& c : comps) d.components.push_back(bv_normalize(op, planarize(std::move(c))));
  return d;
}

template <Operad O>
BVOf<O> bv_reassemble(const O& op, const BVDecomposition<Elem<O>>& d) {
  const std::size_t m = d.components.size();
  std::vector<std::vector<std::size_t>> kids(m);
  for (std::size_t c = 1; c < m; ++c) kids[d.parent[c]].push_back(c);
  std::function<BVOf<O>(std::size_t)> build = [&](std::size_t c) {
    auto ks = kids[c];
    std::sort(ks.begin(), ks.end(), [&](std::size_t a, std::size_t b) { return d.slot[a] > d.slot[b]; });
    BVOf<O> p = d.components[c];
    for (std::size_t k : ks) p = bv_compose(op, p, d.slot[k], build(k));
    return p;
  };
  return bv_act(op, build(0), d.sigma);
}

template <Operad O>
std::vector<BVOf<O>> bv_prime_components(const O& op, const BVOf<O>& x) {
  return bv_decompose(op, x).components;
}

// ---------------------------------------------------------------------------
// Filtrations

template <class E>
std::size_t bv_geometric_inputs(const BVPoint<E>& x) {
  return geometric_inputs(x.tree());
}

inline bool prime_in_level(std::size_t gi, std::size_t vertices, std::size_t k, std::size_t l) {
  return gi + 1 <= k || (gi == k && vertices <= l);
}

// Membership in the l-th term of the k-th filtration level.
template <Operad O>
bool bv_filtration(const O& op, const BVOf<O>& x, std::size_t k, std::size_t l) {
  if (bv_is_unit(op, x)) return true;
  for (const auto& c : bv_prime_components(op, x))
    if (!prime_in_level(geometric_inputs(c.tree()), vertex_count(c.tree()), k, l)) return false;
  return true;
}

// Membership in the k-th filtration level (any number of vertices).
template <Operad O>
bool bv_in_level(const O& op, const BVOf<O>& x, std::size_t k) {
  if (bv_is_unit(op, x)) return true;
  for (const auto& c : bv_prime_components(op, x))
    if (geometric_inputs(c.tree()) > k) return false;
  return true;
}

enum class XCell { interior, boundary, outside };

inline const char* to_string(XCell c) {
  switch (c) {
    case XCell::interior: return "interior";
    case XCell::boundary: return "boundary";
    case XCell::outside: return "outside";
  }
  return "?";
}

// Classifies raw data against the cell indexed by trees with k geometric
// inputs and l vertices.
template <Operad O>
XCell x_cell_membership(const O& op, const BVTree<Elem<O>>& raw, std::size_t k, std::size_t l) {
  bv_check_raw(op, raw);
  if (geometric_inputs(raw) != k || vertex_count(raw) != l) return XCell::outside;
  const auto vs = preorder(raw);
  const Elem<O> u = op.unit();
  for (std::size_t id = 0; id < vs.size(); ++id) {
    if (vs[id]->arity() == 1 && vs[id]->label == u) return XCell::boundary;
    if (id != 0 && (vs[id]->edge.is_zero() || vs[id]->edge.is_one())) return XCell::boundary;
  }
  return XCell::interior;
}

}  // namespace opforge
