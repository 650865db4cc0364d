#pragma once

/** @file tree.hpp
 *  @brief Rooted planar trees with leaf labels, grafting, enumeration and
 *  non-planar isomorphism.
 */

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "opforge/permutation.hpp"

namespace opforge {

struct Empty {
  friend bool operator==(const Empty&, const Empty&) { return true; }
  friend std::strong_ordering operator<=>(const Empty&, const Empty&) { return std::strong_ordering::equal; }
};

template <class T>
std::strong_ordering strong_compare(const T& a, const T& b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

// A node is either a leaf (leaf != 0, carrying its label) or a vertex with
// ordered inputs. `edge` decorates the edge below a vertex and is ignored at
// the root; leaves carry neither label nor edge data.
template <class V, class E>
struct Node {
  std::size_t leaf = 0;
  V label{};
  E edge{};
  std::vector<Node> inputs;

  bool is_leaf() const { return leaf != 0; }
  std::size_t arity() const { return inputs.size(); }

  static Node make_leaf(std::size_t label_) {
    Node n;
    n.leaf = label_;
    return n;
  }
};

namespace detail {

template <class V, class E>
std::strong_ordering compare_below(const Node<V, E>& a, const Node<V, E>& b, bool with_edge) {
  if (a.is_leaf() != b.is_leaf()) return a.is_leaf() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.is_leaf()) return a.leaf <=> b.leaf;
  if (with_edge) {
    if (auto c = strong_compare(a.edge, b.edge); c != 0) return c;
  }
  if (auto c = strong_compare(a.label, b.label); c != 0) return c;
  if (auto c = a.inputs.size() <=> b.inputs.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.inputs.size(); ++i) {
    if (auto c = compare_below(a.inputs[i], b.inputs[i], true); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

}  // namespace detail

// Structural order of whole trees; the root edge decoration is not compared.
template <class V, class E>
std::strong_ordering tree_compare(const Node<V, E>& a, const Node<V, E>& b) {
  return detail::compare_below(a, b, false);
}
// Order of subtrees as children: includes the decoration of their root edge.
template <class V, class E>
std::strong_ordering subtree_compare(const Node<V, E>& a, const Node<V, E>& b) {
  return detail::compare_below(a, b, true);
}

template <class V, class E>
bool operator==(const Node<V, E>& a, const Node<V, E>& b) {
  return tree_compare(a, b) == 0;
}
template <class V, class E>
std::strong_ordering operator<=>(const Node<V, E>& a, const Node<V, E>& b) {
  return tree_compare(a, b);
}

// Shapes: leaves carry labels, vertices carry nothing. A planar tree is a
// shape whose leaves are labeled 1..n left to right.
using Tree = Node<Empty, Empty>;
using PlanarTree = Tree;

// ---------------------------------------------------------------------------
// Traversal

template <class V, class E>
std::size_t leaf_count(const Node<V, E>& t) {
  if (t.is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& c : t.inputs) n += leaf_count(c);
  return n;
}

template <class V, class E>
std::size_t vertex_count(const Node<V, E>& t) {
  if (t.is_leaf()) return 0;
  std::size_t n = 1;
  for (const auto& c : t.inputs) n += vertex_count(c);
  return n;
}

template <class V, class E>
std::size_t univalent_count(const Node<V, E>& t) {
  if (t.is_leaf()) return 0;
  if (t.inputs.empty()) return 1;
  std::size_t n = 0;
  for (const auto& c : t.inputs) n += univalent_count(c);
  return n;
}

// Leaves plus univalent vertices.
template <class V, class E>
std::size_t geometric_inputs(const Node<V, E>& t) {
  return leaf_count(t) + univalent_count(t);
}

template <class V, class E>
std::size_t inner_edge_count(const Node<V, E>& t) {
  std::size_t v = vertex_count(t);
  return v == 0 ? 0 : v - 1;
}

// Vertices in preorder; index in this list is the vertex's identifier.
template <class V, class E>
void preorder_into(const Node<V, E>& t, std::vector<const Node<V, E>*>& out) {
  if (t.is_leaf()) return;
  out.push_back(&t);
  for (const auto& c : t.inputs) preorder_into(c, out);
}
template <class V, class E>
std::vector<const Node<V, E>*> preorder(const Node<V, E>& t) {
  std::vector<const Node<V, E>*> out;
  preorder_into(t, out);
  return out;
}

template <class V, class E, class F>
void for_each_vertex(Node<V, E>& t, F&& f) {
  if (t.is_leaf()) return;
  f(t);
  for (auto& c : t.inputs) for_each_vertex(c, f);
}

// Parent preorder id of each vertex (root: npos).
template <class V, class E>
std::vector<std::size_t> parents(const Node<V, E>& t) {
  std::vector<std::size_t> par;
  std::function<void(const Node<V, E>&, std::size_t)> go = [&](const Node<V, E>& n, std::size_t p) {
    if (n.is_leaf()) return;
    std::size_t me = par.size();
    par.push_back(p);
    for (const auto& c : n.inputs) go(c, me);
  };
  go(t, static_cast<std::size_t>(-1));
  return par;
}

// The vertex with preorder id `id`, its parent (null at the root) and its
// 0-based slot in the parent.
template <class V, class E>
struct VertexRef {
  Node<V, E>* parent = nullptr;
  std::size_t slot = 0;
  Node<V, E>* self = nullptr;
};
template <class V, class E>
VertexRef<V, E> locate_vertex(Node<V, E>& t, std::size_t id) {
  if (t.is_leaf()) throw std::out_of_range("locate_vertex: tree has no vertices");
  if (id == 0) return {nullptr, 0, &t};
  std::size_t next = 1;
  VertexRef<V, E> found;
  std::function<bool(Node<V, E>&)> go = [&](Node<V, E>& p) {
    for (std::size_t j = 0; j < p.inputs.size(); ++j) {
      if (p.inputs[j].is_leaf()) continue;
      if (next++ == id) {
        found = {&p, j, &p.inputs[j]};
        return true;
      }
      if (go(p.inputs[j])) return true;
    }
    return false;
  };
  if (!go(t)) throw std::out_of_range("locate_vertex: id out of range");
  return found;
}

// Leaf labels in planar order.
template <class V, class E>
void leaf_labels_into(const Node<V, E>& t, std::vector<std::size_t>& out) {
  if (t.is_leaf()) {
    out.push_back(t.leaf);
    return;
  }
  for (const auto& c : t.inputs) leaf_labels_into(c, out);
}
template <class V, class E>
std::vector<std::size_t> leaf_labels(const Node<V, E>& t) {
  std::vector<std::size_t> out;
  leaf_labels_into(t, out);
  return out;
}

// sigma with sigma(j) = label of the j-th planar leaf.
template <class V, class E>
Permutation leaf_sigma(const Node<V, E>& t) {
  return Permutation::from_one_based(leaf_labels(t));
}

template <class V, class E>
bool is_planar(const Node<V, E>& t) {
  auto ls = leaf_labels(t);
  for (std::size_t i = 0; i < ls.size(); ++i)
    if (ls[i] != i + 1) return false;
  return true;
}

template <class V, class E, class F>
void map_leaves(Node<V, E>& t, F&& f) {
  if (t.is_leaf()) {
    t.leaf = f(t.leaf);
    return;
  }
  for (auto& c : t.inputs) map_leaves(c, f);
}

// Relabels leaves 1..n in planar order.
template <class V, class E>
Node<V, E> planarize(Node<V, E> t) {
  std::size_t next = 0;
  map_leaves(t, [&](std::size_t) { return ++next; });
  return t;
}

// Relabels the j-th planar leaf by sigma(j).
template <class V, class E>
Node<V, E> with_sigma(Node<V, E> t, const Permutation& sigma) {
  if (sigma.size() != leaf_count(t)) throw std::invalid_argument("sigma size does not match leaf count");
  std::size_t next = 0;
  map_leaves(t, [&](std::size_t) { return sigma(++next); });
  return t;
}

template <class V, class E>
bool leaf_labels_are_permutation(const Node<V, E>& t) {
  auto ls = leaf_labels(t);
  std::vector<bool> seen(ls.size() + 1, false);
  for (std::size_t l : ls) {
    if (l == 0 || l > ls.size() || seen[l]) return false;
    seen[l] = true;
  }
  return true;
}

// Replaces the leaf labeled i by `scion`, whose root edge gets decoration
// `edge`. Labels are shifted so the result is labeled 1..n+m-1 with the
// scion's labels occupying i..i+m-1.
template <class V, class E>
Node<V, E> graft_at_label(Node<V, E> base, std::size_t i, Node<V, E> scion, const E& edge = E{}) {
  const std::size_t n = leaf_count(base), m = leaf_count(scion);
  if (i < 1 || i > n) throw std::out_of_range("graft index out of range");
  map_leaves(scion, [&](std::size_t l) { return l + i - 1; });
  if (!scion.is_leaf()) scion.edge = edge;
  bool done = false;
  std::function<void(Node<V, E>&)> go = [&](Node<V, E>& t) {
    if (t.is_leaf()) {
      if (t.leaf == i && !done) {
        done = true;
        t = scion;
      } else if (t.leaf > i) {
        t.leaf += m - 1;
      }
      return;
    }
    for (auto& c : t.inputs) go(c);
  };
  if (m == 0) {
    // Arity-0 scion: labels above i move down by one.
    std::function<void(Node<V, E>&)> go0 = [&](Node<V, E>& t) {
      if (t.is_leaf()) {
        if (t.leaf == i) {
          t = scion;
        } else if (t.leaf > i) {
          t.leaf -= 1;
        }
        return;
      }
      for (auto& c : t.inputs) go0(c);
    };
    go0(base);
    return base;
  }
  go(base);
  return base;
}

inline Tree corolla(std::size_t n) {
  Tree t;
  for (std::size_t j = 1; j <= n; ++j) t.inputs.push_back(Tree::make_leaf(j));
  return t;
}

inline Tree trivial_tree() { return Tree::make_leaf(1); }

// Grafts `scion` at the i-th planar leaf of `base`.
inline PlanarTree graft(const PlanarTree& base, std::size_t i, const PlanarTree& scion) {
  const std::size_t n = leaf_count(base);
  if (i < 1 || i > n) throw std::out_of_range("graft index out of range");
  return graft_at_label(planarize(base), i, planarize(scion));
}

// ---------------------------------------------------------------------------
// Symmetric canonicalization of decorated trees

// Bottom-up: sorts the inputs of every vertex by subtree_compare and moves the
// reordering into the vertex label through `act`, using the relation
// (a; d_1..d_k) ~ (a.s; d_{s(1)}..d_{s(k)}). Identical siblings (only possible
// for leafless subtrees) are resolved by the least resulting label.
template <class V, class E, class Act>
void canonicalize_children(Node<V, E>& t, const Act& act) {
  if (t.is_leaf()) {
    t.label = V{};
    t.edge = E{};
    t.inputs.clear();
    return;
  }
  for (auto& c : t.inputs) canonicalize_children(c, act);
  const std::size_t k = t.inputs.size();
  if (k == 0) return;
  std::vector<std::size_t> order(k);
  for (std::size_t j = 0; j < k; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return subtree_compare(t.inputs[a], t.inputs[b]) < 0;
  });
  std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [begin, end) of identical runs
  for (std::size_t p = 0; p < k;) {
    std::size_t q = p + 1;
    while (q < k && subtree_compare(t.inputs[order[p]], t.inputs[order[q]]) == 0) ++q;
    if (q - p > 1) blocks.emplace_back(p, q);
    p = q;
  }
  std::vector<std::size_t> best_order = order;
  V best = act(t.label, Permutation(order));
  if (!blocks.empty()) {
    std::vector<std::size_t> cur = order;
    std::function<void(std::size_t)> go = [&](std::size_t b) {
      if (b == blocks.size()) {
        V cand = act(t.label, Permutation(cur));
        if (cand < best) {
          best = std::move(cand);
          best_order = cur;
        }
        return;
      }
      auto [lo, hi] = blocks[b];
      std::sort(cur.begin() + static_cast<std::ptrdiff_t>(lo), cur.begin() + static_cast<std::ptrdiff_t>(hi));
      do {
        go(b + 1);
      } while (std::next_permutation(cur.begin() + static_cast<std::ptrdiff_t>(lo),
                                     cur.begin() + static_cast<std::ptrdiff_t>(hi)));
    };
    go(0);
  }
  std::vector<Node<V, E>> sorted;
  sorted.reserve(k);
  for (std::size_t p = 0; p < k; ++p) sorted.push_back(std::move(t.inputs[best_order[p]]));
  t.inputs = std::move(sorted);
  t.label = std::move(best);
}

// ---------------------------------------------------------------------------
// Enumeration of tree[k;l]

namespace detail {

struct TreeEnumerator {
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Tree>> trees;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<Tree>>> seqs;

  // Trees with exactly k geometric inputs and l >= 1 vertices.
  const std::vector<Tree>& gen(std::size_t k, std::size_t l) {
    auto key = std::make_pair(k, l);
    if (auto it = trees.find(key); it != trees.end()) return it->second;
    std::vector<Tree> out;
    if (k == 1 && l == 1) out.push_back(Tree{});
    if (l >= 1 && k >= 1) {
      for (const auto& items : seq(k, l - 1)) {
        if (items.empty()) continue;
        Tree t;
        t.inputs = items;
        out.push_back(std::move(t));
      }
    }
    return trees[key] = std::move(out);
  }

  // Ordered lists of inputs (leaves or trees) with the given totals.
  const std::vector<std::vector<Tree>>& seq(std::size_t k, std::size_t l) {
    auto key = std::make_pair(k, l);
    if (auto it = seqs.find(key); it != seqs.end()) return it->second;
    std::vector<std::vector<Tree>> out;
    if (k == 0) {
      if (l == 0) out.push_back({});
      return seqs[key] = std::move(out);
    }
    for (const auto& rest : seq(k - 1, l)) {
      std::vector<Tree> items{Tree::make_leaf(1)};
      items.insert(items.end(), rest.begin(), rest.end());
      out.push_back(std::move(items));
    }
    for (std::size_t k1 = 1; k1 <= k; ++k1) {
      for (std::size_t l1 = 1; l1 <= l; ++l1) {
        const auto heads = gen(k1, l1);
        const auto tails = seq(k - k1, l - l1);
        for (const auto& h : heads) {
          for (const auto& rest : tails) {
            std::vector<Tree> items{h};
            items.insert(items.end(), rest.begin(), rest.end());
            out.push_back(std::move(items));
          }
        }
      }
    }
    return seqs[key] = std::move(out);
  }
};

}  // namespace detail

// All planar trees with k geometric inputs and l vertices, ordered by tree_compare.
inline std::vector<PlanarTree> enumerate_trees(std::size_t k, std::size_t l) {
  if (k == 0 || l == 0) return {};
  detail::TreeEnumerator en;
  std::vector<PlanarTree> out;
  for (const auto& t : en.gen(k, l)) out.push_back(planarize(t));
  std::sort(out.begin(), out.end(), [](const Tree& a, const Tree& b) { return tree_compare(a, b) < 0; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphisms

// vertexMap[v] = image of vertex v (preorder ids); inputPerms[v](j) = slot of
// vertexMap[v] receiving slot j of v.
struct TreeIso {
  std::vector<std::size_t> vertexMap;
  std::vector<Permutation> inputPerms;

  friend bool operator==(const TreeIso&, const TreeIso&) = default;
  friend auto operator<=>(const TreeIso&, const TreeIso&) = default;

  // (g * f) = g after f.
  friend TreeIso operator*(const TreeIso& g, const TreeIso& f) {
    TreeIso r;
    r.vertexMap.resize(f.vertexMap.size());
    r.inputPerms.resize(f.vertexMap.size());
    for (std::size_t v = 0; v < f.vertexMap.size(); ++v) {
      std::size_t w = f.vertexMap[v];
      r.vertexMap[v] = g.vertexMap.at(w);
      r.inputPerms[v] = g.inputPerms.at(w) * f.inputPerms[v];
    }
    return r;
  }
  TreeIso inverse() const {
    TreeIso r;
    r.vertexMap.resize(vertexMap.size());
    r.inputPerms.resize(vertexMap.size());
    for (std::size_t v = 0; v < vertexMap.size(); ++v) {
      r.vertexMap[vertexMap[v]] = v;
      r.inputPerms[vertexMap[v]] = inputPerms[v].inverse();
    }
    return r;
  }
};

inline TreeIso identity_iso(const Tree& t) {
  TreeIso r;
  for (const Tree* v : preorder(t)) {
    r.vertexMap.push_back(r.vertexMap.size());
    r.inputPerms.push_back(Permutation::identity(v->arity()));
  }
  return r;
}

// Checks that `iso` maps a onto b; with respect_labels, leaf labels must match.
inline bool is_isomorphism(const Tree& a, const Tree& b, const TreeIso& iso, bool respect_labels) {
  auto va = preorder(a);
  auto vb = preorder(b);
  if (va.size() != vb.size() || iso.vertexMap.size() != va.size() || iso.inputPerms.size() != va.size()) return false;
  if (va.empty()) return !respect_labels || a.leaf == b.leaf;
  std::map<const Tree*, std::size_t> ida, idb;
  for (std::size_t i = 0; i < va.size(); ++i) ida[va[i]] = i;
  for (std::size_t i = 0; i < vb.size(); ++i) idb[vb[i]] = i;
  std::vector<bool> hit(vb.size(), false);
  for (std::size_t v : iso.vertexMap) {
    if (v >= vb.size() || hit[v]) return false;
    hit[v] = true;
  }
  if (iso.vertexMap[0] != 0) return false;
  for (std::size_t v = 0; v < va.size(); ++v) {
    const Tree& x = *va[v];
    const Tree& y = *vb[iso.vertexMap[v]];
    if (x.arity() != y.arity() || iso.inputPerms[v].size() != x.arity()) return false;
    for (std::size_t j = 1; j <= x.arity(); ++j) {
      const Tree& cx = x.inputs[j - 1];
      const Tree& cy = y.inputs[iso.inputPerms[v](j) - 1];
      if (cx.is_leaf() != cy.is_leaf()) return false;
      if (cx.is_leaf()) {
        if (respect_labels && cx.leaf != cy.leaf) return false;
      } else if (iso.vertexMap[ida.at(&cx)] != idb.at(&cy)) {
        return false;
      }
    }
  }
  return true;
}

namespace detail {

// Canonical representative plus the iso from the input to it.
struct CanonState {
  Tree canon;
  std::vector<std::size_t> vmap;  // input preorder -> canon preorder
  std::vector<Permutation> perms;
};

inline CanonState canonicalize_with_iso(const Tree& t, bool respect_labels) {
  CanonState st;
  if (t.is_leaf()) {
    st.canon = respect_labels ? t : Tree::make_leaf(1);
    return st;
  }
  std::vector<CanonState> kids;
  for (const auto& c : t.inputs) kids.push_back(canonicalize_with_iso(c, respect_labels));
  std::vector<std::size_t> order(kids.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return subtree_compare(kids[x].canon, kids[y].canon) < 0;
  });
  // order[p] = original slot placed at canonical slot p.
  std::vector<std::size_t> slot_of(kids.size());
  for (std::size_t p = 0; p < order.size(); ++p) slot_of[order[p]] = p;
  std::vector<std::size_t> offset(kids.size());
  std::size_t acc = 1;
  for (std::size_t p = 0; p < order.size(); ++p) {
    offset[order[p]] = acc;
    acc += vertex_count(kids[order[p]].canon);
  }
  st.canon.inputs.reserve(kids.size());
  for (std::size_t p = 0; p < order.size(); ++p) st.canon.inputs.push_back(kids[order[p]].canon);
  st.vmap.push_back(0);
  st.perms.push_back(Permutation(slot_of));
  for (std::size_t j = 0; j < kids.size(); ++j) {
    for (std::size_t q = 0; q < kids[j].vmap.size(); ++q) {
      st.vmap.push_back(offset[j] + kids[j].vmap[q]);
      st.perms.push_back(kids[j].perms[q]);
    }
  }
  return st;
}

}  // namespace detail

// Canonical representative of the non-planar isomorphism class (leaf labels respected).
inline Tree canonical_form(const Tree& t) { return detail::canonicalize_with_iso(t, true).canon; }

// Canonical representative ignoring leaf labels (leaves become label 1).
inline Tree shape_canonical_form(const Tree& t) { return detail::canonicalize_with_iso(t, false).canon; }

inline std::optional<TreeIso> nonplanar_iso(const Tree& a, const Tree& b, bool respect_labels = true) {
  auto ca = detail::canonicalize_with_iso(a, respect_labels);
  auto cb = detail::canonicalize_with_iso(b, respect_labels);
  if (!(ca.canon == cb.canon)) return std::nullopt;
  TreeIso fa{ca.vmap, ca.perms};
  TreeIso fb{cb.vmap, cb.perms};
  return fb.inverse() * fa;
}

namespace detail {

// All isomorphisms a -> b between shapes (labels ignored), built from the
// class decomposition of children: isomorphic children are permuted among
// themselves, each carrying an iso of its subtree.
inline std::vector<TreeIso> all_isos(const Tree& a, const Tree& b) {
  if (a.is_leaf() || b.is_leaf()) {
    if (a.is_leaf() && b.is_leaf()) return {TreeIso{}};
    return {};
  }
  if (a.arity() != b.arity()) return {};
  if (!(shape_canonical_form(a) == shape_canonical_form(b))) return {};
  const std::size_t n = a.arity();
  std::vector<Tree> ca, cb;
  for (const auto& c : a.inputs) ca.push_back(shape_canonical_form(c));
  for (const auto& c : b.inputs) cb.push_back(shape_canonical_form(c));
  std::vector<std::size_t> va(n), vb(n);
  for (std::size_t j = 0, acc = 1; j < n; ++j) {
    va[j] = acc;
    acc += vertex_count(a.inputs[j]);
  }
  for (std::size_t j = 0, acc = 1; j < n; ++j) {
    vb[j] = acc;
    acc += vertex_count(b.inputs[j]);
  }
  std::vector<TreeIso> out;
  std::vector<std::size_t> target(n);
  std::vector<bool> used(n, false);
  std::function<void(std::size_t)> choose = [&](std::size_t j) {
    if (j == n) {
      // Cartesian product over children of their isos.
      std::vector<std::vector<TreeIso>> per(n);
      for (std::size_t x = 0; x < n; ++x) per[x] = all_isos(a.inputs[x], b.inputs[target[x]]);
      std::vector<std::size_t> idx(n, 0);
      while (true) {
        TreeIso iso;
        iso.vertexMap.assign(vertex_count(a), 0);
        iso.inputPerms.assign(vertex_count(a), Permutation{});
        iso.vertexMap[0] = 0;
        iso.inputPerms[0] = Permutation(target);
        for (std::size_t x = 0; x < n; ++x) {
          const TreeIso& sub = per[x][idx[x]];
          for (std::size_t q = 0; q < sub.vertexMap.size(); ++q) {
            iso.vertexMap[va[x] + q] = vb[target[x]] + sub.vertexMap[q];
            iso.inputPerms[va[x] + q] = sub.inputPerms[q];
          }
        }
        out.push_back(std::move(iso));
        std::size_t x = 0;
        while (x < n && ++idx[x] == per[x].size()) idx[x++] = 0;
        if (x == n) break;
      }
      return;
    }
    for (std::size_t y = 0; y < n; ++y) {
      if (used[y] || !(ca[j] == cb[y])) continue;
      used[y] = true;
      target[j] = y;
      choose(j + 1);
      used[y] = false;
    }
  };
  choose(0);
  return out;
}

}  // namespace detail

// The full automorphism group of the shape (leaf labels ignored), sorted.
inline std::vector<TreeIso> automorphisms(const PlanarTree& t) {
  if (t.is_leaf()) throw std::invalid_argument("automorphisms need at least one vertex");
  auto out = detail::all_isos(t, t);
  std::sort(out.begin(), out.end());
  return out;
}

// |Aut(T)| from the recursive product: prod_i |Aut(T^i)|^{n_i} * prod_i n_i!.
inline std::size_t automorphism_count(const PlanarTree& t) {
  if (t.is_leaf()) return 1;
  std::map<Tree, std::size_t> classes;
  for (const auto& c : t.inputs) ++classes[shape_canonical_form(c)];
  std::size_t total = 1;
  for (const auto& [shape, mult] : classes) {
    std::size_t a = automorphism_count(shape);
    for (std::size_t r = 0; r < mult; ++r) total *= a;
    total *= factorial(mult);
  }
  return total;
}

}  // namespace opforge
