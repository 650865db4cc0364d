#pragma once

/** @file wb.hpp
 *  @brief Points of the bimodule resolution WB(O): main trees with monotone
 *  heights and BV(O)-labels, kept as normal forms.
 */

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "opforge/bv.hpp"
#include "opforge/cubes.hpp"

namespace opforge {

template <class E>
struct WBLabel {
  Rational height;
  BVPoint<E> x;
  friend bool operator==(const WBLabel& a, const WBLabel& b) { return a.height == b.height && a.x == b.x; }
  friend std::strong_ordering operator<=>(const WBLabel& a, const WBLabel& b) {
    if (auto c = a.height <=> b.height; c != 0) return c;
    return a.x <=> b.x;
  }
};

// Main tree: heights never decrease from the root towards the leaves. A bare
// leaf root is the trivial point, the unit of the bimodule.
template <class E>
using WBTree = Node<WBLabel<E>, Empty>;

// Raw input: auxiliary data given as un-normalized BV trees.
template <class E>
struct WBRawLabel {
  Rational height;
  BVTree<E> aux;
};
template <class E>
using WBRawTree = Node<WBRawLabel<E>, Empty>;

template <class E>
class WBPoint {
 public:
  WBPoint() : t_(WBTree<E>::make_leaf(1)) {}
  WBPoint(detail::NormalFormTag, WBTree<E> t) : t_(std::move(t)) {}

  const WBTree<E>& tree() const { return t_; }
  std::size_t arity() const { return leaf_count(t_); }
  bool is_trivial() const { return t_.is_leaf(); }

  friend bool operator==(const WBPoint& a, const WBPoint& b) { return tree_compare(a.t_, b.t_) == 0; }
  friend std::strong_ordering operator<=>(const WBPoint& a, const WBPoint& b) { return tree_compare(a.t_, b.t_); }

 private:
  WBTree<E> t_;
};

template <Operad O>
using WBOf = WBPoint<Elem<O>>;
template <Operad O>
using WBTreeOf = WBTree<Elem<O>>;

template <Operad O>
void wb_check_raw(const O& op, const WBTree<Elem<O>>& t) {
  (void)op;
  if (t.is_leaf()) {
    if (t.leaf != 1) throw std::invalid_argument("trivial wb point must carry leaf label 1");
    return;
  }
  std::function<void(const WBTree<Elem<O>>&, const Rational&)> go = [&](const WBTree<Elem<O>>& n,
                                                                          const Rational& floor) {
    if (n.is_leaf()) return;
    if (n.label.x.arity() != n.inputs.size())
      throw std::invalid_argument("wb point: label arity " + std::to_string(n.label.x.arity()) + " does not match " +
                                  std::to_string(n.inputs.size()) + " inputs");
    if (!n.label.height.in_unit_interval())
      throw std::invalid_argument("wb point: height " + n.label.height.str() + " outside [0,1]");
    if (n.label.height < floor)
      throw std::invalid_argument("wb point: height " + n.label.height.str() + " below its parent " + floor.str());
    for (const auto& c : n.inputs) go(c, n.label.height);
  };
  go(t, Rational(0));
  if (!leaf_labels_are_permutation(t)) throw std::invalid_argument("wb point: leaf labels are not a permutation");
}

template <Operad O>
WBTree<Elem<O>> wb_from_raw(const O& op, const WBRawTree<Elem<O>>& raw, const RedexChooser& choose = {}) {
  std::function<WBTree<Elem<O>>(const WBRawTree<Elem<O>>&)> go = [&](const WBRawTree<Elem<O>>& n) {
    if (n.is_leaf()) return WBTree<Elem<O>>::make_leaf(n.leaf);
    WBTree<Elem<O>> out;
    out.label = {n.label.height, bv_normalize(op, n.label.aux, choose)};
    for (const auto& c : n.inputs) out.inputs.push_back(go(c));
    return out;
  };
  return go(raw);
}

enum class WBRewrite { unit, merge, collapse };

struct WBRedex {
  WBRewrite kind;
  std::size_t vertex;  // preorder id
};

// Labels of the form iota(a) are exactly the one-vertex points.
template <class E>
bool wb_is_collapsed(const BVPoint<E>& x) {
  return vertex_count(x.tree()) == 1;
}

template <Operad O>
std::vector<WBRedex> wb_redexes(const O& op, const WBTree<Elem<O>>& t) {
  std::vector<WBRedex> out;
  const auto vs = preorder(t);
  const auto par = parents(t);
  for (std::size_t id = 0; id < vs.size(); ++id) {
    const auto& lab = vs[id]->label;
    if (bv_is_unit(op, lab.x)) out.push_back({WBRewrite::unit, id});
    if (id != 0 && vs[par[id]]->label.height == lab.height) out.push_back({WBRewrite::merge, id});
    if ((lab.height.is_zero() || lab.height.is_one()) && !wb_is_collapsed(lab.x))
      out.push_back({WBRewrite::collapse, id});
  }
  return out;
}

template <Operad O>
void wb_apply(const O& op, WBTree<Elem<O>>& t, const WBRedex& r) {
  using T = WBTree<Elem<O>>;
  auto ref = locate_vertex(t, r.vertex);
  switch (r.kind) {
    case WBRewrite::unit: {
      T child = std::move(ref.self->inputs.at(0));
      if (ref.parent == nullptr) {
        t = std::move(child);
      } else {
        ref.parent->inputs[ref.slot] = std::move(child);
      }
      return;
    }
    case WBRewrite::merge: {
      T& p = *ref.parent;
      T c = std::move(p.inputs[ref.slot]);
      p.label.x = bv_compose(op, p.label.x, ref.slot + 1, c.label.x);
      std::vector<T> spliced;
      for (std::size_t q = 0; q < ref.slot; ++q) spliced.push_back(std::move(p.inputs[q]));
      for (auto& g : c.inputs) spliced.push_back(std::move(g));
      for (std::size_t q = ref.slot + 1; q < p.inputs.size(); ++q) spliced.push_back(std::move(p.inputs[q]));
      p.inputs = std::move(spliced);
      return;
    }
    case WBRewrite::collapse:
      ref.self->label.x = iota(op, mu(op, ref.self->label.x));
      return;
  }
}

namespace detail {

template <Operad O>
WBOf<O> wb_seal(const O& op, WBTree<Elem<O>> t) {
  canonicalize_children(t, [&](const WBLabel<Elem<O>>& a, const Permutation& s) {
    return WBLabel<Elem<O>>{a.height, bv_act(op, a.x, s)};
  });
  return WBOf<O>(NormalFormTag{}, std::move(t));
}

}  // namespace detail

template <Operad O>
WBOf<O> wb_normalize(const O& op, WBTree<Elem<O>> t, const RedexChooser& choose = {}) {
  wb_check_raw(op, t);
  for (;;) {
    auto rs = wb_redexes(op, t);
    if (rs.empty()) break;
    std::size_t k = choose ? choose(rs.size()) : 0;
    if (k >= rs.size()) throw std::out_of_range("redex chooser returned an invalid index");
    wb_apply(op, t, rs[k]);
  }
  return detail::wb_seal(op, std::move(t));
}

template <Operad O>
WBOf<O> wb_normalize(const O& op, const WBRawTree<Elem<O>>& raw, const RedexChooser& choose = {}) {
  return wb_normalize(op, wb_from_raw(op, raw, choose), choose);
}

template <Operad O>
WBOf<O> wb_trivial(const O&) {
  return WBOf<O>();
}

// A single main vertex (x; t).
template <Operad O>
WBOf<O> wb_corolla(const O& op, const BVOf<O>& x, const Rational& t) {
  WBTree<Elem<O>> n;
  n.label = {t, x};
  for (std::size_t j = 1; j <= x.arity(); ++j) n.inputs.push_back(WBTree<Elem<O>>::make_leaf(j));
  return wb_normalize(op, std::move(n));
}

template <Operad O>
WBOf<O> wb_gamma0(const O& op, const Elem<O>& a) {
  if (op.arity(a) != 0) throw std::invalid_argument("wb_gamma0: element must have arity 0");
  return wb_corolla(op, iota(op, a), Rational(0));
}

template <Operad O>
WBOf<O> wb_right(const O& op, const WBOf<O>& x, std::size_t i, const Elem<O>& a) {
  require_index(i, x.arity(), "wb_right");
  WBTree<Elem<O>> scion;
  scion.label = {Rational(1), iota(op, a)};
  for (std::size_t j = 1; j <= op.arity(a); ++j) scion.inputs.push_back(WBTree<Elem<O>>::make_leaf(j));
  return wb_normalize(op, graft_at_label(x.tree(), i, scion));
}

template <Operad O>
WBOf<O> wb_left(const O& op, const Elem<O>& a, const std::vector<WBOf<O>>& xs) {
  if (xs.size() != op.arity(a)) throw std::invalid_argument("wb_left: arity mismatch");
  WBTree<Elem<O>> root;
  root.label = {Rational(0), iota(op, a)};
  std::size_t offset = 0;
  for (const auto& x : xs) {
    WBTree<Elem<O>> c = x.tree();
    map_leaves(c, [&](std::size_t l) { return l + offset; });
    offset += x.arity();
    root.inputs.push_back(std::move(c));
  }
  return wb_normalize(op, std::move(root));
}

template <Operad O>
WBOf<O> wb_act(const O& op, const WBOf<O>& x, const Permutation& s) {
  if (s.size() != x.arity()) throw std::invalid_argument("wb_act: permutation size mismatch");
  WBTree<Elem<O>> t = x.tree();
  const Permutation inv = s.inverse();
  map_leaves(t, [&](std::size_t l) { return inv(l); });
  return detail::wb_seal(op, std::move(t));
}

// Sends every height to 0: the composite of the mu's of all labels.
template <Operad O>
Elem<O> mu_tilde(const O& op, const WBOf<O>& x) {
  if (x.is_trivial()) return op.unit();
  std::function<Elem<O>(const WBTree<Elem<O>>&)> eval = [&](const WBTree<Elem<O>>& n) {
    Elem<O> v = mu(op, n.label.x);
    for (std::size_t j = n.inputs.size(); j >= 1; --j)
      if (!n.inputs[j - 1].is_leaf()) v = op.compose(v, j, eval(n.inputs[j - 1]));
    return v;
  };
  return op.act(eval(x.tree()), leaf_sigma(x.tree()).inverse());
}

// The bimodule structure of O over itself.
template <Operad O>
Elem<O> o_left(const O& op, const Elem<O>& a, const std::vector<Elem<O>>& ys) {
  return compose_full(op, a, ys);
}
template <Operad O>
Elem<O> o_right(const O& op, const Elem<O>& x, std::size_t i, const Elem<O>& a) {
  return op.compose(x, i, a);
}

// Re-scales every height from the cube c back onto [0,1].
template <Operad O>
WBOf<O> rescale(const O& op, const WBOf<O>& z, const Interval& c) {
  WBTree<Elem<O>> t = z.tree();
  for_each_vertex(t, [&](WBTree<Elem<O>>& v) {
    if (!c.contains_open(v.label.height))
      throw std::invalid_argument("rescale: height " + v.label.height.str() + " not inside the cube");
    v.label.height = c.unapply(v.label.height);
  });
  return wb_normalize(op, std::move(t));
}

// ---------------------------------------------------------------------------
// Prime decomposition: removing the main vertices at heights 0 and 1.

template <class E>
struct WBPiece {
  WBPoint<E> point;                               // prime or trivial
  std::vector<std::pair<std::size_t, E>> tops;    // (input of point, element at height 1)
};

template <class E>
struct WBDecomposition {
  std::optional<E> root;  // element of the root vertex at height 0
  std::vector<WBPiece<E>> pieces;
  Permutation sigma;  // the point is the planar assembly acted on by sigma
};

template <class E>
bool wb_is_prime(const WBPoint<E>& x) {
  const auto vs = preorder(x.tree());
  for (const auto* v : vs)
    if (v->label.height.is_zero() || v->label.height.is_one()) return false;
  return true;
}

template <Operad O>
WBDecomposition<Elem<O>> wb_decompose(const O& op, const WBOf<O>& x) {
  using T = WBTree<Elem<O>>;
  WBDecomposition<Elem<O>> d;
  const T planar = planarize(x.tree());
  d.sigma = leaf_sigma(x.tree()).inverse();
  auto piece = [&](const T& s) {
    WBPiece<Elem<O>> p;
    if (s.is_leaf()) return p;
    if (s.label.height.is_one()) {
      p.tops.emplace_back(1, mu(op, s.label.x));
      return p;
    }
    std::size_t pos = 0;
    std::function<T(const T&)> cut = [&](const T& n) {
      T out;
      out.label = n.label;
      for (const auto& c : n.inputs) {
        if (c.is_leaf()) {
          out.inputs.push_back(T::make_leaf(++pos));
        } else if (c.label.height.is_one()) {
          out.inputs.push_back(T::make_leaf(++pos));
          p.tops.emplace_back(pos, mu(op, c.label.x));
        } else {
          out.inputs.push_back(cut(c));
        }
      }
      return out;
    };
    T body = cut(s);
    p.point = wb_normalize(op, std::move(body));
    return p;
  };
  if (!planar.is_leaf() && planar.label.height.is_zero()) {
    d.root = mu(op, planar.label.x);
    for (const auto& c : planar.inputs) d.pieces.push_back(piece(c));
  } else {
    d.pieces.push_back(piece(planar));
  }
  return d;
}

template <Operad O>
WBOf<O> wb_reassemble(const O& op, const WBDecomposition<Elem<O>>& d) {
  std::vector<WBOf<O>> qs;
  for (const auto& p : d.pieces) {
    auto tops = p.tops;
    std::sort(tops.begin(), tops.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    WBOf<O> q = p.point;
    for (const auto& [i, a] : tops) q = wb_right(op, q, i, a);
    qs.push_back(std::move(q));
  }
  WBOf<O> r;
  if (d.root) {
    r = wb_left(op, *d.root, qs);
  } else {
    if (qs.size() != 1) throw std::logic_error("wb_reassemble: a rootless decomposition has one piece");
    r = qs[0];
  }
  return wb_act(op, r, d.sigma);
}

template <Operad O>
std::vector<WBOf<O>> wb_prime_components(const O& op, const WBOf<O>& x) {
  if (x.is_trivial()) return {x};
  std::vector<WBOf<O>> out;
  for (const auto& p : wb_decompose(op, x).pieces)
    if (!p.point.is_trivial()) out.push_back(p.point);
  return out;
}

// ---------------------------------------------------------------------------
// Filtrations

template <class E>
std::size_t wb_geometric_inputs(const WBPoint<E>& x) {
  std::size_t n = leaf_count(x.tree());
  for (const auto* v : preorder(x.tree())) n += univalent_count(v->label.x.tree());
  return n;
}

template <class E>
std::size_t wb_aux_vertices(const WBPoint<E>& x) {
  std::size_t n = 0;
  for (const auto* v : preorder(x.tree())) n += vertex_count(v->label.x.tree());
  return n;
}

// Every piece of the decomposition, trivial ones included, must lie in the
// level; a trivial piece has one geometric input and no auxiliary vertex.
template <Operad O>
bool wb_filtration(const O& op, const WBOf<O>& x, std::size_t k, std::size_t l) {
  for (const auto& p : wb_decompose(op, x).pieces)
    if (!prime_in_level(wb_geometric_inputs(p.point), wb_aux_vertices(p.point), k, l)) return false;
  return true;
}

template <Operad O>
bool wb_in_level(const O& op, const WBOf<O>& x, std::size_t k) {
  for (const auto& p : wb_decompose(op, x).pieces)
    if (wb_geometric_inputs(p.point) > k) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Index set of the cells: a main tree with one auxiliary planar tree per
// main vertex (preorder).

struct UpsilonIndex {
  Tree main;
  std::vector<PlanarTree> aux;

  friend bool operator==(const UpsilonIndex& a, const UpsilonIndex& b) {
    return a.main == b.main && a.aux == b.aux;
  }
  friend std::strong_ordering operator<=>(const UpsilonIndex& a, const UpsilonIndex& b) {
    if (auto c = tree_compare(a.main, b.main); c != 0) return c;
    if (auto c = a.aux.size() <=> b.aux.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.aux.size(); ++i)
      if (auto c = tree_compare(a.aux[i], b.aux[i]); c != 0) return c;
    return std::strong_ordering::equal;
  }
};

inline bool upsilon_valid(const UpsilonIndex& u) {
  const auto vs = preorder(u.main);
  if (vs.empty() || vs.size() != u.aux.size()) return false;
  for (std::size_t v = 0; v < vs.size(); ++v)
    if (u.aux[v].is_leaf() || leaf_count(u.aux[v]) != vs[v]->arity() || !is_planar(u.aux[v])) return false;
  return true;
}

inline std::size_t upsilon_geometric_inputs(const UpsilonIndex& u) {
  std::size_t n = leaf_count(u.main);
  for (const auto& a : u.aux) n += univalent_count(a);
  return n;
}

inline std::size_t upsilon_aux_vertices(const UpsilonIndex& u) {
  std::size_t n = 0;
  for (const auto& a : u.aux) n += vertex_count(a);
  return n;
}

template <class E>
Tree strip(const Node<E, Rational>& t) {
  if (t.is_leaf()) return Tree::make_leaf(t.leaf);
  Tree out;
  for (const auto& c : t.inputs) out.inputs.push_back(strip(c));
  return out;
}

template <class E>
UpsilonIndex upsilon_of(const WBRawTree<E>& raw) {
  UpsilonIndex u;
  std::function<Tree(const WBRawTree<E>&)> go = [&](const WBRawTree<E>& n) {
    if (n.is_leaf()) return Tree::make_leaf(n.leaf);
    u.aux.push_back(planarize(strip(n.label.aux)));
    Tree out;
    for (const auto& c : n.inputs) out.inputs.push_back(go(c));
    return out;
  };
  u.main = go(raw);
  return u;
}

struct YFlags {
  bool in_cell = false;   // index in the (k,l) census
  bool interior = false;  // in the cell and not on its boundary
  bool boundary = false;  // the boundary conditions on heights, aux edges and units
  bool y1 = false;
  bool y2 = false;
  bool y12 = false;
  bool dprime = false;  // y1 or y2

  friend bool operator==(const YFlags&, const YFlags&) = default;
};

template <Operad O>
void wb_check_raw(const O& op, const WBRawTree<Elem<O>>& raw) {
  std::function<void(const WBRawTree<Elem<O>>&, const Rational&)> go = [&](const WBRawTree<Elem<O>>& n,
                                                                            const Rational& floor) {
    if (n.is_leaf()) return;
    bv_check_raw(op, n.label.aux);
    if (leaf_count(n.label.aux) != n.inputs.size()) throw std::invalid_argument("wb raw: aux arity mismatch");
    if (!n.label.height.in_unit_interval() || n.label.height < floor)
      throw std::invalid_argument("wb raw: heights must be monotone in [0,1]");
    for (const auto& c : n.inputs) go(c, n.label.height);
  };
  go(raw, Rational(0));
  if (!leaf_labels_are_permutation(raw)) throw std::invalid_argument("wb raw: leaf labels are not a permutation");
}

// Classifies raw data for the cell indexed by Upsilon_k[l]. A corolla main
// tree at height 0 or 1 with an aux inner edge at 1 lies in the intersection,
// hence also in Y1.
template <Operad O>
YFlags y_cell_membership(const O& op, const WBRawTree<Elem<O>>& raw, std::size_t k, std::size_t l) {
  wb_check_raw(op, raw);
  YFlags f;
  if (raw.is_leaf()) return f;
  const UpsilonIndex u = upsilon_of(raw);
  if (upsilon_geometric_inputs(u) != k || upsilon_aux_vertices(u) != l) return f;
  f.in_cell = true;
  const auto vs = preorder(raw);
  const Elem<O> unit = op.unit();
  bool aux_edge_one = false;
  for (const auto* v : vs) {
    const Rational& h = v->label.height;
    if (h.is_zero() || h.is_one()) f.boundary = true;
    const auto avs = preorder(v->label.aux);
    for (std::size_t a = 0; a < avs.size(); ++a) {
      if (a != 0 && avs[a]->edge.is_zero()) f.boundary = true;
      if (a != 0 && avs[a]->edge.is_one()) aux_edge_one = true;
      if (avs[a]->arity() == 1 && avs[a]->label == unit) f.boundary = true;
    }
  }
  f.interior = !f.boundary;
  const bool corolla = vs.size() == 1;
  const Rational& h0 = vs[0]->label.height;
  const bool eps = h0.is_zero() || h0.is_one();
  bool all_equal_eps = eps;
  for (const auto* v : vs)
    if (v->label.height != h0) all_equal_eps = false;
  if (corolla) {
    f.y2 = eps;
    f.y12 = eps && aux_edge_one;
    f.y1 = f.y12;
  } else {
    f.y1 = true;
    f.y12 = all_equal_eps;
    f.y2 = all_equal_eps;
  }
  f.dprime = f.y1 || f.y2;
  return f;
}

}  // namespace opforge
