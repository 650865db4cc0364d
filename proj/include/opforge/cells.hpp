#pragma once

/** @file cells.hpp
 *  @brief Index data of the cellular decompositions: Upsilon censuses,
 *  classes up to non-planar isomorphism, Stab sets, contraction graphs,
 *  their Reedy categories and the height polytopes with their contraction.
 */

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opforge/io.hpp"
#include "opforge/wb.hpp"

namespace opforge {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A main tree whose vertices carry their auxiliary planar trees; aux leaf j
// sits over main input j.
using IndexTree = Node<PlanarTree, Empty>;

inline IndexTree index_tree(const UpsilonIndex& u) {
  if (!upsilon_valid(u)) throw std::invalid_argument("invalid Upsilon index");
  std::size_t next = 0;
  std::function<IndexTree(const Tree&)> go = [&](const Tree& n) {
    if (n.is_leaf()) return IndexTree::make_leaf(n.leaf);
    IndexTree v;
    v.label = u.aux[next++];
    for (const auto& c : n.inputs) v.inputs.push_back(go(c));
    return v;
  };
  return go(u.main);
}

// Main tree planarized, aux trees in preorder.
inline UpsilonIndex index_of(const IndexTree& t) {
  UpsilonIndex u;
  std::function<Tree(const IndexTree&)> go = [&](const IndexTree& n) {
    if (n.is_leaf()) return Tree::make_leaf(n.leaf);
    u.aux.push_back(n.label);
    Tree out;
    for (const auto& c : n.inputs) out.inputs.push_back(go(c));
    return out;
  };
  u.main = planarize(go(t));
  return u;
}

// Planar montage string: a main vertex is [..] around its aux tree, an aux
// vertex is (..), a main leaf is |.
inline std::string index_string(const UpsilonIndex& u) {
  std::function<std::string(const IndexTree&)> go = [&](const IndexTree& n) -> std::string {
    if (n.is_leaf()) return "|";
    std::function<std::string(const PlanarTree&)> aux = [&](const PlanarTree& a) -> std::string {
      if (a.is_leaf()) return go(n.inputs.at(a.leaf - 1));
      std::string s = "(";
      for (const auto& c : a.inputs) s += aux(c);
      return s + ")";
    };
    return "[" + aux(n.label) + "]";
  };
  return go(index_tree(u));
}

inline Json upsilon_to_json(const UpsilonIndex& u) {
  Json aux = Json::array();
  for (const auto& a : u.aux) aux.push_back(shape_to_json(a));
  return {{"main", shape_to_json(u.main)}, {"aux", aux}, {"montage", index_string(u)}};
}

inline UpsilonIndex upsilon_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("main") || !j.contains("aux") || !j["aux"].is_array())
    throw ParseError("an Upsilon index needs \"main\" and \"aux\"");
  UpsilonIndex u;
  u.main = planarize(shape_from_json<Empty, Empty>(j["main"]));
  for (const auto& a : j["aux"]) u.aux.push_back(planarize(shape_from_json<Empty, Empty>(a)));
  if (!upsilon_valid(u)) throw ParseError("aux trees must match the main vertex arities");
  return u;
}

// ---------------------------------------------------------------------------
// Census

namespace detail {

// Planar trees with a leaves and n vertices.
struct AuxPool {
  std::map<std::pair<std::size_t, std::size_t>, std::vector<PlanarTree>> cache;
  const std::vector<PlanarTree>& get(std::size_t a, std::size_t n) {
    auto key = std::make_pair(a, n);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    std::vector<PlanarTree> out;
    for (std::size_t g = std::max<std::size_t>(a, 1); g <= a + n; ++g)
      for (const auto& t : enumerate_trees(g, n))
        if (leaf_count(t) == a) out.push_back(t);
    return cache[key] = std::move(out);
  }
};

}  // namespace detail

// All planar indices with k geometric inputs and l aux vertices, sorted.
inline std::vector<UpsilonIndex> enumerate_upsilon(std::size_t k, std::size_t l, bool require_nontrivial_main,
                                                   std::size_t budget = std::numeric_limits<std::size_t>::max()) {
  std::vector<UpsilonIndex> out;
  if (k == 0 || l == 0) return out;
  detail::AuxPool pool;
  for (std::size_t m = require_nontrivial_main ? 2 : 1; m <= l; ++m) {
    for (std::size_t g = 1; g <= k + m; ++g) {
      for (const auto& main : enumerate_trees(g, m)) {
        const std::size_t leaves = leaf_count(main);
        if (leaves > k) continue;
        const auto vs = preorder(main);
        std::vector<PlanarTree> chosen;
        std::function<void(std::size_t, std::size_t, std::size_t)> go = [&](std::size_t v, std::size_t verts,
                                                                            std::size_t uni) {
          if (v == vs.size()) {
            if (verts == 0 && uni == 0) {
              if (out.size() >= budget) throw BudgetExceeded("Upsilon census exceeds the enumeration budget");
              out.push_back({main, chosen});
            }
            return;
          }
          const std::size_t rest = vs.size() - v - 1;
          for (std::size_t n = 1; n + rest <= verts; ++n) {
            for (const auto& a : pool.get(vs[v]->arity(), n)) {
              const std::size_t u = univalent_count(a);
              if (u > uni) continue;
              chosen.push_back(a);
              go(v + 1, verts - n, uni - u);
              chosen.pop_back();
            }
          }
        };
        go(0, l, k - leaves);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Classes up to non-planar isomorphism

namespace detail {

// Isomorphism-invariant code: aux children are sorted, main boundaries are
// bracketed, and aux leaves are replaced by the codes of the main inputs.
inline std::string class_code(const IndexTree& v) {
  if (v.is_leaf()) return "L";
  std::vector<std::string> kids;
  for (const auto& c : v.inputs) kids.push_back(class_code(c));
  std::function<std::string(const PlanarTree&)> aux = [&](const PlanarTree& a) -> std::string {
    if (a.is_leaf()) return kids.at(a.leaf - 1);
    std::vector<std::string> cs;
    for (const auto& c : a.inputs) cs.push_back(aux(c));
    std::sort(cs.begin(), cs.end());
    std::string s = "(";
    for (const auto& c : cs) s += c;
    return s + ")";
  };
  return "[" + aux(v.label) + "]";
}

// Reorders every aux vertex by child code; the main inputs follow the new
// aux leaf order. Equal codes give equal subtrees, so ties are harmless.
inline IndexTree canonical_index_tree(const IndexTree& v) {
  if (v.is_leaf()) return v;
  std::vector<IndexTree> kids;
  std::vector<std::string> codes;
  for (const auto& c : v.inputs) {
    kids.push_back(canonical_index_tree(c));
    codes.push_back(class_code(kids.back()));
  }
  std::function<std::pair<PlanarTree, std::string>(const PlanarTree&)> aux =
      [&](const PlanarTree& a) -> std::pair<PlanarTree, std::string> {
    if (a.is_leaf()) return {a, codes.at(a.leaf - 1)};
    std::vector<std::pair<PlanarTree, std::string>> cs;
    for (const auto& c : a.inputs) cs.push_back(aux(c));
    std::stable_sort(cs.begin(), cs.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
    PlanarTree out;
    std::string s = "(";
    for (auto& [t, c] : cs) {
      out.inputs.push_back(std::move(t));
      s += c;
    }
    return {out, s + ")"};
  };
  PlanarTree a = aux(v.label).first;
  IndexTree out;
  for (std::size_t j : leaf_labels(a)) out.inputs.push_back(kids.at(j - 1));
  out.label = planarize(a);
  return out;
}

// prod over aux vertices of prod over equal-code child groups of mult!, and
// prod over aux vertices of arity!.
inline std::pair<std::size_t, std::size_t> aut_and_orderings(const IndexTree& v) {
  std::size_t aut = 1, ord = 1;
  std::function<void(const IndexTree&)> go = [&](const IndexTree& n) {
    if (n.is_leaf()) return;
    std::vector<std::string> kids;
    for (const auto& c : n.inputs) {
      kids.push_back(class_code(c));
      go(c);
    }
    std::function<std::string(const PlanarTree&)> aux = [&](const PlanarTree& a) -> std::string {
      if (a.is_leaf()) return kids.at(a.leaf - 1);
      std::vector<std::string> cs;
      for (const auto& c : a.inputs) cs.push_back(aux(c));
      std::sort(cs.begin(), cs.end());
      std::map<std::string, std::size_t> mult;
      for (const auto& c : cs) ++mult[c];
      for (const auto& [c, m] : mult) aut *= factorial(m);
      ord *= factorial(cs.size());
      std::string s = "(";
      for (const auto& c : cs) s += c;
      return s + ")";
    };
    aux(n.label);
  };
  go(v);
  return {aut, ord};
}

}  // namespace detail

inline std::string class_key(const UpsilonIndex& u) { return detail::class_code(index_tree(u)); }

inline UpsilonIndex canonical_index(const UpsilonIndex& u) {
  return index_of(detail::canonical_index_tree(index_tree(u)));
}

struct TreeClass {
  UpsilonIndex rep;                  // canonical representative
  std::string key;                   // isomorphism-invariant code
  std::size_t aut_order = 1;         // |Aut|
  std::size_t orbit_size = 1;        // planar indices in the class
  std::vector<std::size_t> members;  // positions in the classified list

  std::size_t main_vertices() const { return rep.aux.size(); }
  std::size_t aux_vertices() const { return upsilon_aux_vertices(rep); }
  // l - |V(T)|: zero exactly when every aux tree is a corolla.
  std::size_t level() const { return aux_vertices() - main_vertices(); }
};

inline TreeClass make_class(const UpsilonIndex& u) {
  TreeClass c;
  c.rep = canonical_index(u);
  c.key = class_key(c.rep);
  auto [aut, ord] = detail::aut_and_orderings(index_tree(c.rep));
  c.aut_order = aut;
  c.orbit_size = ord / aut;
  return c;
}

// Classes ordered by canonical representative.
inline std::vector<TreeClass> classify(const std::vector<UpsilonIndex>& xs) {
  std::map<std::string, std::size_t> at;
  std::vector<TreeClass> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::string key = class_key(xs[i]);
    auto it = at.find(key);
    if (it == at.end()) {
      it = at.emplace(key, out.size()).first;
      out.push_back(make_class(xs[i]));
    }
    out[it->second].members.push_back(i);
  }
  std::sort(out.begin(), out.end(), [](const TreeClass& a, const TreeClass& b) { return a.rep < b.rep; });
  return out;
}

// One representative per class of Sigma_{|v'|} modulo reorderings of the
// inputs of aux vertex v' (in the aux tree of main vertex v) that are
// automorphisms; the identity comes first.
inline std::vector<Permutation> stab(const TreeClass& c, std::size_t v, std::size_t vprime) {
  const IndexTree t = index_tree(c.rep);
  const auto vs = preorder(t);
  if (v >= vs.size()) throw std::out_of_range("stab: main vertex out of range");
  const IndexTree& mv = *vs[v];
  const auto avs = preorder(mv.label);
  if (vprime >= avs.size()) throw std::out_of_range("stab: aux vertex out of range");
  std::vector<std::string> kids;
  for (const auto& ch : mv.inputs) kids.push_back(detail::class_code(ch));
  std::function<std::string(const PlanarTree&)> aux = [&](const PlanarTree& a) -> std::string {
    if (a.is_leaf()) return kids.at(a.leaf - 1);
    std::vector<std::string> cs;
    for (const auto& ch : a.inputs) cs.push_back(aux(ch));
    std::sort(cs.begin(), cs.end());
    std::string s = "(";
    for (const auto& ch : cs) s += ch;
    return s + ")";
  };
  std::vector<std::string> codes;
  for (const auto& ch : avs[vprime]->inputs) codes.push_back(aux(ch));
  std::vector<Permutation> out;
  std::set<std::vector<std::string>> seen;
  for (const auto& s : Permutation::all(codes.size())) {
    // p -> code of s^-1(p) is constant on the coset s.A.
    const Permutation inv = s.inverse();
    std::vector<std::string> key;
    for (std::size_t p = 1; p <= codes.size(); ++p) key.push_back(codes[inv(p) - 1]);
    if (seen.insert(key).second) out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Contraction of a main inner edge

struct Contraction {
  UpsilonIndex result;
  std::size_t slot = 0;  // e = e_slot(t(e)), 1-based
};

// Contracts the inner edge below main vertex `source` (preorder id > 0):
// the merged aux tree is T_{t(e)} o_slot T_{s(e)}.
inline Contraction contract_edge(const UpsilonIndex& u, std::size_t source) {
  IndexTree t = index_tree(u);
  if (source == 0) throw std::invalid_argument("contract_edge: the root has no edge below it");
  auto ref = locate_vertex(t, source);
  IndexTree& parent = *ref.parent;
  IndexTree scion = *ref.self;
  const std::size_t i = ref.slot + 1;
  IndexTree merged;
  merged.label = graft_at_label(parent.label, i, scion.label);
  for (std::size_t j = 0; j < ref.slot; ++j) merged.inputs.push_back(parent.inputs[j]);
  for (auto& c : scion.inputs) merged.inputs.push_back(c);
  for (std::size_t j = ref.slot + 1; j < parent.inputs.size(); ++j) merged.inputs.push_back(parent.inputs[j]);
  parent = std::move(merged);
  return {index_of(t), i};
}

// ---------------------------------------------------------------------------
// Directed graphs and their Reedy categories

struct Digraph {
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // sorted, no duplicates
};

struct EdgeWitness {
  UpsilonIndex representative;  // a member of the source class
  std::size_t contracted = 0;   // preorder id of s(e) in the representative
  std::size_t slot = 0;         // e = e_slot(t(e))
};

struct ContractionGraph {
  std::size_t k = 0, l = 0;
  std::optional<std::size_t> level_filter;  // i for G^i_k[l]
  std::vector<TreeClass> classes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  // One witness per edge for G_k[l]; for G^i_k[l] the contraction path.
  std::vector<std::vector<EdgeWitness>> witnesses;

  Digraph shape() const { return {classes.size(), edges}; }

  std::vector<std::size_t> in_degree() const {
    std::vector<std::size_t> d(classes.size(), 0);
    for (const auto& [a, b] : edges) ++d[b];
    return d;
  }
  std::vector<std::size_t> initial_elements() const {
    std::vector<std::size_t> out;
    const auto d = in_degree();
    for (std::size_t v = 0; v < classes.size(); ++v)
      if (d[v] == 0) out.push_back(v);
    return out;
  }
  // Weakly connected component id of each vertex.
  std::vector<std::size_t> components() const {
    std::vector<std::size_t> root(classes.size());
    for (std::size_t v = 0; v < root.size(); ++v) root[v] = v;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      while (root[x] != x) x = root[x] = root[root[x]];
      return x;
    };
    for (const auto& [a, b] : edges) root[find(a)] = find(b);
    std::map<std::size_t, std::size_t> ids;
    std::vector<std::size_t> out(classes.size());
    for (std::size_t v = 0; v < root.size(); ++v) out[v] = ids.emplace(find(v), ids.size()).first->second;
    return out;
  }
};

// G_k[l] over the classes of the phi^p_k[l] census. Every inner main edge of
// every planar member is contracted; a contraction to a corolla main tree
// leaves phi^p and gives no edge.
inline ContractionGraph build_graph(std::size_t k, std::size_t l,
                                    std::size_t budget = std::numeric_limits<std::size_t>::max()) {
  if (k == 0 || l == 0) throw std::invalid_argument("build_graph needs k, l >= 1");
  ContractionGraph g;
  g.k = k;
  g.l = l;
  const auto census = enumerate_upsilon(k, l, true, budget);
  g.classes = classify(census);
  std::map<std::string, std::size_t> id;
  for (std::size_t c = 0; c < g.classes.size(); ++c) id[g.classes[c].key] = c;
  std::map<std::pair<std::size_t, std::size_t>, EdgeWitness> found;
  for (std::size_t c = 0; c < g.classes.size(); ++c) {
    for (std::size_t m : g.classes[c].members) {
      const UpsilonIndex& x = census[m];
      if (x.aux.size() < 3) continue;
      for (std::size_t e = 1; e < x.aux.size(); ++e) {
        auto r = contract_edge(x, e);
        const std::size_t to = id.at(class_key(r.result));
        found.emplace(std::make_pair(c, to), EdgeWitness{x, e, r.slot});
      }
    }
  }
  for (auto& [edge, w] : found) {
    g.edges.push_back(edge);
    g.witnesses.push_back({w});
  }
  return g;
}

// G^i_k[l]: classes of level 0 or i, with an edge wherever G_k[l] has a
// path between them. Only existence is recorded; the witness is one path.
inline ContractionGraph subgraph_i(const ContractionGraph& g, std::size_t i) {
  if (g.level_filter) throw std::invalid_argument("subgraph_i expects the full graph G_k[l]");
  if (g.l < 2 || i > g.l - 2) throw std::invalid_argument("subgraph_i needs 0 <= i <= l - 2");
  ContractionGraph s;
  s.k = g.k;
  s.l = g.l;
  s.level_filter = i;
  std::vector<std::size_t> keep, new_id(g.classes.size(), static_cast<std::size_t>(-1));
  for (std::size_t v = 0; v < g.classes.size(); ++v) {
    const std::size_t lv = g.classes[v].level();
    if (lv == 0 || lv == i) {
      new_id[v] = keep.size();
      keep.push_back(v);
      s.classes.push_back(g.classes[v]);
    }
  }
  std::vector<std::vector<std::size_t>> out(g.classes.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) out[g.edges[e].first].push_back(e);
  for (std::size_t a : keep) {
    // Breadth-first search from a, remembering the edge that reached each vertex.
    std::vector<std::size_t> via(g.classes.size(), static_cast<std::size_t>(-1));
    std::vector<bool> seen(g.classes.size(), false);
    std::vector<std::size_t> queue{a};
    seen[a] = true;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (std::size_t e : out[queue[q]]) {
        const std::size_t b = g.edges[e].second;
        if (seen[b]) continue;
        seen[b] = true;
        via[b] = e;
        queue.push_back(b);
      }
    for (std::size_t b : keep) {
      if (b == a || !seen[b]) continue;
      std::vector<EdgeWitness> path;
      for (std::size_t x = b; x != a; x = g.edges[via[x]].first) path.push_back(g.witnesses[via[x]].front());
      std::reverse(path.begin(), path.end());
      s.edges.emplace_back(new_id[a], new_id[b]);
      s.witnesses.push_back(std::move(path));
    }
  }
  std::vector<std::size_t> order(s.edges.size());
  for (std::size_t e = 0; e < order.size(); ++e) order[e] = e;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return s.edges[x] < s.edges[y]; });
  ContractionGraph sorted = s;
  for (std::size_t e = 0; e < order.size(); ++e) {
    sorted.edges[e] = s.edges[order[e]];
    sorted.witnesses[e] = s.witnesses[order[e]];
  }
  return sorted;
}

// The full connected subgraph containing vertex v.
inline ContractionGraph component_of(const ContractionGraph& g, std::size_t v) {
  if (v >= g.classes.size()) throw std::out_of_range("component_of: vertex out of range");
  const auto comp = g.components();
  ContractionGraph s;
  s.k = g.k;
  s.l = g.l;
  s.level_filter = g.level_filter;
  std::vector<std::size_t> new_id(g.classes.size(), static_cast<std::size_t>(-1));
  for (std::size_t x = 0; x < g.classes.size(); ++x)
    if (comp[x] == comp[v]) {
      new_id[x] = s.classes.size();
      s.classes.push_back(g.classes[x]);
    }
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (comp[g.edges[e].first] == comp[v]) {
      s.edges.emplace_back(new_id[g.edges[e].first], new_id[g.edges[e].second]);
      s.witnesses.push_back(g.witnesses[e]);
    }
  return s;
}

// Objects: one of degree 1 per vertex, one of degree 0 per ordered pair.
// Non-identity morphisms go from a pair (g1;g2) to g1 (d0) and to g2 (d1).
struct ReedyData {
  struct Object {
    bool is_pair = false;
    std::size_t vertex = 0;  // for vertex objects
    std::size_t edge = 0;    // for pair objects, index into the edge list
    std::size_t degree = 1;
  };
  struct Morphism {
    std::string name;  // "d0" or "d1"
    std::size_t source = 0, target = 0;
  };
  std::vector<Object> objects;
  std::vector<Morphism> morphisms;  // identities are implicit
  std::vector<std::vector<std::size_t>> latching;  // per object: morphisms into it

  std::size_t vertex_count = 0;

  std::size_t vertex_object(std::size_t v) const { return v; }
  std::size_t pair_object(std::size_t e) const { return vertex_count + e; }
};

inline ReedyData reedy_of(const Digraph& g) {
  ReedyData r;
  r.vertex_count = g.vertices;
  for (std::size_t v = 0; v < g.vertices; ++v) r.objects.push_back({false, v, 0, 1});
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (g.edges[e].first >= g.vertices || g.edges[e].second >= g.vertices)
      throw std::invalid_argument("reedy_of: edge endpoint out of range");
    r.objects.push_back({true, 0, e, 0});
  }
  r.latching.assign(r.objects.size(), {});
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const std::size_t src = g.vertices + e;
    r.morphisms.push_back({"d0", src, g.edges[e].first});
    r.latching[g.edges[e].first].push_back(r.morphisms.size() - 1);
    r.morphisms.push_back({"d1", src, g.edges[e].second});
    r.latching[g.edges[e].second].push_back(r.morphisms.size() - 1);
  }
  return r;
}

inline ReedyData reedy_of(const ContractionGraph& g) { return reedy_of(g.shape()); }

// Index set of the latching object at object d: the non-identity morphisms
// into d, as (source object, morphism name).
inline std::vector<std::pair<std::size_t, std::string>> latching_index(const ReedyData& r, std::size_t d) {
  if (d >= r.objects.size()) throw std::out_of_range("latching_index: unknown object");
  std::vector<std::pair<std::size_t, std::string>> out;
  for (std::size_t m : r.latching[d]) out.emplace_back(r.morphisms[m].source, r.morphisms[m].name);
  return out;
}

// The star D_n: a hub g0 and pairs (g0; g_j) for j = 1..n.
inline Digraph star_graph(std::size_t n) {
  Digraph g;
  g.vertices = n + 1;
  for (std::size_t j = 1; j <= n; ++j) g.edges.emplace_back(0, j);
  return g;
}

// ---------------------------------------------------------------------------
// Height polytopes

// heights[v] for main vertex v (preorder); aux[v][e] for the edge below aux
// vertex e+1 (preorder) of the aux tree of v.
struct HeightPoint {
  std::vector<Rational> heights;
  std::vector<std::vector<Rational>> aux;

  friend bool operator==(const HeightPoint&, const HeightPoint&) = default;
};

enum class HVariant { H, HMinus, HPair, HMinusPair };

inline void check_shape(const UpsilonIndex& u, const HeightPoint& p) {
  if (p.heights.size() != u.aux.size() || p.aux.size() != u.aux.size())
    throw std::invalid_argument("height point: one height and one aux family per main vertex");
  for (std::size_t v = 0; v < u.aux.size(); ++v)
    if (p.aux[v].size() + 1 != vertex_count(u.aux[v]))
      throw std::invalid_argument("height point: one parameter per aux inner edge");
}

inline bool h_membership(const UpsilonIndex& u, const HeightPoint& p, HVariant variant) {
  check_shape(u, p);
  for (const auto& h : p.heights)
    if (!h.in_unit_interval()) return false;
  for (const auto& a : p.aux)
    for (const auto& x : a)
      if (!x.in_unit_interval()) return false;
  const auto par = parents(u.main);
  for (std::size_t v = 1; v < par.size(); ++v)
    if (p.heights[v] < p.heights[par[v]]) return false;
  auto any_aux = [&](bool one) {
    for (const auto& a : p.aux)
      for (const auto& x : a)
        if (one ? x.is_one() : x.is_zero()) return true;
    return false;
  };
  bool minus = any_aux(false);
  for (const auto& h : p.heights)
    if (h.is_zero() || h.is_one()) minus = true;
  switch (variant) {
    case HVariant::H: return true;
    case HVariant::HMinus: return minus;
    case HVariant::HPair: return any_aux(true);
    case HVariant::HMinusPair: return minus && any_aux(true);
  }
  return false;
}

// Main vertices all of whose inputs are leaves.
inline std::vector<std::size_t> max_vertices(const UpsilonIndex& u) {
  std::vector<std::size_t> out;
  const auto vs = preorder(u.main);
  for (std::size_t v = 0; v < vs.size(); ++v)
    if (std::all_of(vs[v]->inputs.begin(), vs[v]->inputs.end(), [](const Tree& c) { return c.is_leaf(); }))
      out.push_back(v);
  return out;
}

// For u <= 1/2 with s = 2u: Max heights go to 1, the root to 0, the rest to
// 1/2. For u >= 1/2 with s = 2u - 1: that endpoint, then aux parameters to 1.
inline HeightPoint homotopy_H(const UpsilonIndex& u, const HeightPoint& p, const Rational& time) {
  if (u.aux.size() < 2) throw std::invalid_argument("homotopy_H: the main tree is a corolla");
  if (!time.in_unit_interval()) throw std::invalid_argument("homotopy_H: time outside [0,1]");
  if (!h_membership(u, p, HVariant::H)) throw std::invalid_argument("homotopy_H: point outside H");
  const Rational half(1, 2), one(1);
  const Rational s1 = time <= half ? time * Rational(2) : one;
  const auto maxv = max_vertices(u);
  HeightPoint out = p;
  for (std::size_t v = 0; v < p.heights.size(); ++v) {
    const Rational& t = p.heights[v];
    if (v == 0) {
      out.heights[v] = (one - s1) * t;
    } else if (std::binary_search(maxv.begin(), maxv.end(), v)) {
      out.heights[v] = (one - t) * s1 + t;
    } else {
      out.heights[v] = (half - t) * s1 + t;
    }
  }
  if (time > half) {
    const Rational s2 = time * Rational(2) - one;
    for (auto& a : out.aux)
      for (auto& x : a) x = (one - x) * s2 + x;
  }
  return out;
}

inline Json height_point_to_json(const HeightPoint& p) {
  Json hs = Json::array(), aux = Json::array();
  for (const auto& h : p.heights) hs.push_back(rational_to_json(h));
  for (const auto& a : p.aux) {
    Json xs = Json::array();
    for (const auto& x : a) xs.push_back(rational_to_json(x));
    aux.push_back(xs);
  }
  return {{"heights", hs}, {"aux", aux}};
}

inline HeightPoint height_point_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("heights") || !j["heights"].is_array())
    throw ParseError("a height point needs a \"heights\" array");
  HeightPoint p;
  for (const auto& h : j["heights"]) p.heights.push_back(rational_from_json(h));
  for (const auto& a : j.value("aux", Json::array())) {
    if (!a.is_array()) throw ParseError("aux parameters are arrays per main vertex");
    std::vector<Rational> xs;
    for (const auto& x : a) xs.push_back(rational_from_json(x));
    p.aux.push_back(std::move(xs));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Export

inline Json graph_to_json(const ContractionGraph& g) {
  const auto initial = g.initial_elements();
  const auto comp = g.components();
  Json vs = Json::array();
  for (std::size_t v = 0; v < g.classes.size(); ++v) {
    const auto& c = g.classes[v];
    vs.push_back({{"id", v},
                  {"index", upsilon_to_json(c.rep)},
                  {"level", c.level()},
                  {"aut", c.aut_order},
                  {"classSize", c.orbit_size},
                  {"component", comp[v]},
                  {"initial", std::binary_search(initial.begin(), initial.end(), v)}});
  }
  Json es = Json::array();
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    Json path = Json::array();
    for (const auto& w : g.witnesses[e])
      path.push_back({{"representative", upsilon_to_json(w.representative)},
                      {"contracted", w.contracted},
                      {"slot", w.slot}});
    es.push_back({{"source", g.edges[e].first}, {"target", g.edges[e].second}, {"witness", path}});
  }
  Json out = {{"k", g.k}, {"l", g.l}, {"vertices", vs}, {"edges", es}};
  if (g.level_filter) out["i"] = *g.level_filter;
  return out;
}

inline std::string graph_to_dot(const ContractionGraph& g) {
  const auto initial = g.initial_elements();
  std::ostringstream os;
  os << "digraph G {\n  node [shape=box];\n";
  for (std::size_t v = 0; v < g.classes.size(); ++v) {
    os << "  c" << v << " [label=\"" << dot_escape(index_string(g.classes[v].rep)) << "\"";
    if (std::binary_search(initial.begin(), initial.end(), v)) os << ",style=filled,fillcolor=lightgray,peripheries=2";
    os << "];\n";
  }
  for (const auto& [a, b] : g.edges) os << "  c" << a << " -> c" << b << ";\n";
  os << "}\n";
  return os.str();
}

inline Json reedy_to_json(const ReedyData& r) {
  Json os = Json::array(), ms = Json::array();
  for (std::size_t o = 0; o < r.objects.size(); ++o) {
    const auto& x = r.objects[o];
    Json lat = Json::array();
    for (const auto& [src, name] : latching_index(r, o)) lat.push_back({{"source", src}, {"morphism", name}});
    Json j = {{"id", o}, {"degree", x.degree}, {"latching", lat}};
    if (x.is_pair)
      j["pair"] = x.edge;
    else
      j["vertex"] = x.vertex;
    os.push_back(j);
  }
  for (const auto& m : r.morphisms) ms.push_back({{"name", m.name}, {"source", m.source}, {"target", m.target}});
  return {{"objects", os}, {"morphisms", ms}};
}

}  // namespace opforge
