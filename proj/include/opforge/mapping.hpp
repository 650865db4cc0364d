#pragma once

/** @file mapping.hpp
 *  @brief Loops of operad maps BV(O) -> O', bimodule maps WB(O) -> O', the
 *  little-interval action on both and the delooping map xi.
 *
 *  Kernels are opaque functions; the validators only vouch for the inputs
 *  they were run on.
 */

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opforge/bv.hpp"
#include "opforge/cubes.hpp"
#include "opforge/io.hpp"
#include "opforge/operad.hpp"
#include "opforge/report.hpp"
#include "opforge/wb.hpp"

namespace opforge {

// A point of the loop space based at eta o mu: kernel(x, t) for t in [0,1].
template <Operad O, Operad P>
struct LoopElement {
  std::string name;
  OperadMap<O, P> eta;
  std::function<Elem<P>(const BVOf<O>&, const Rational&)> kernel;
  std::optional<std::size_t> bound;  // arities above it are rejected

  Elem<P> operator()(const BVOf<O>& x, const Rational& t) const {
    if (bound && x.arity() > *bound) throw TruncationError("loop evaluated above its truncation");
    if (!t.in_unit_interval()) throw std::invalid_argument("loop parameter outside [0,1]");
    return kernel(x, t);
  }
};

// A map of O-bimodules WB(O) -> O', where O' is a bimodule through eta.
template <Operad O, Operad P>
struct BimodMapElement {
  std::string name;
  OperadMap<O, P> eta;
  std::function<Elem<P>(const WBOf<O>&)> kernel;
  std::optional<std::size_t> bound;

  Elem<P> operator()(const WBOf<O>& y) const {
    if (bound && y.arity() > *bound) throw TruncationError("bimodule map evaluated above its truncation");
    return kernel(y);
  }
};

// Left and right actions of O on O' through eta.
template <Operad O, Operad P>
Elem<P> target_left(const P& tgt, const OperadMap<O, P>& eta, const Elem<O>& a, const std::vector<Elem<P>>& ys) {
  return compose_full(tgt, eta(a), ys);
}
template <Operad O, Operad P>
Elem<P> target_right(const P& tgt, const OperadMap<O, P>& eta, const Elem<P>& x, std::size_t i, const Elem<O>& a) {
  return tgt.compose(x, i, eta(a));
}

// ---------------------------------------------------------------------------
// Built-in kernels

template <Operad O, Operad P>
LoopElement<O, P> constant_loop(const O& op, const OperadMap<O, P>& eta) {
  return {"constant", eta, [op, eta](const BVOf<O>& x, const Rational&) { return eta(mu(op, x)); }, std::nullopt};
}

template <Operad O, Operad P>
BimodMapElement<O, P> eta_mu_tilde(const O& op, const OperadMap<O, P>& eta) {
  return {"constant", eta, [op, eta](const WBOf<O>& y) { return eta(mu_tilde(op, y)); }, std::nullopt};
}

// Value at a point p from a value at q = p.s, found by searching the orbit.
template <class Point, class V, class Find, class ActPoint, class ActValue>
std::optional<V> orbit_lookup(const Point& p, std::size_t n, const Find& find, const ActPoint& act_point,
                              const ActValue& act_value) {
  for (const auto& s : Permutation::all(n)) {
    if (auto v = find(act_point(p, s))) return act_value(*v, s.inverse());
  }
  return std::nullopt;
}

// Multiplicative extension of values on prime points: the value at x is the
// composite of the values on its prime components. Parameters 0 and 1 give
// eta o mu.
template <Operad O, Operad P>
LoopElement<O, P> extend_loop(const O& op, const P& tgt, const OperadMap<O, P>& eta, std::string name,
                              std::function<Elem<P>(const BVOf<O>&, const Rational&)> on_prime) {
  auto k = [op, tgt, eta, on_prime](const BVOf<O>& x, const Rational& t) -> Elem<P> {
    if (t.is_zero() || t.is_one()) return eta(mu(op, x));
    if (bv_is_unit(op, x)) return tgt.unit();
    const auto d = bv_decompose(op, x);
    const std::size_t m = d.components.size();
    std::vector<std::vector<std::size_t>> kids(m);
    for (std::size_t c = 1; c < m; ++c) kids[d.parent[c]].push_back(c);
    std::function<Elem<P>(std::size_t)> build = [&](std::size_t c) {
      auto ks = kids[c];
      std::sort(ks.begin(), ks.end(), [&](std::size_t a, std::size_t b) { return d.slot[a] > d.slot[b]; });
      Elem<P> v = on_prime(d.components[c], t);
      for (std::size_t j : ks) v = tgt.compose(v, d.slot[j], build(j));
      return v;
    };
    return tgt.act(build(0), d.sigma);
  };
  return {std::move(name), eta, k, std::nullopt};
}

// Extension of values on prime points and on the trivial tree along the
// decomposition at heights 0 and 1.
template <Operad O, Operad P>
BimodMapElement<O, P> extend_bimodule_map(const O& op, const P& tgt, const OperadMap<O, P>& eta, std::string name,
                                          std::function<Elem<P>(const WBOf<O>&)> on_prime, Elem<P> on_trivial) {
  auto k = [op, tgt, eta, on_prime, on_trivial](const WBOf<O>& y) -> Elem<P> {
    const auto d = wb_decompose(op, y);
    std::vector<Elem<P>> vals;
    for (const auto& p : d.pieces) {
      Elem<P> v = p.point.is_trivial() ? on_trivial : on_prime(p.point);
      auto tops = p.tops;
      std::sort(tops.begin(), tops.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
      for (const auto& [i, a] : tops) v = target_right(tgt, eta, v, i, a);
      vals.push_back(std::move(v));
    }
    Elem<P> r = d.root ? target_left(tgt, eta, *d.root, vals) : vals.at(0);
    return tgt.act(r, d.sigma);
  };
  return {std::move(name), eta, k, std::nullopt};
}

// Finite tables keyed by prime points up to the symmetric action. Loop
// entries may be restricted to an open window of parameters.
template <Operad O, Operad P>
struct LoopTable {
  struct Entry {
    BVOf<O> point;
    std::optional<Interval> window;
    Elem<P> value;
  };
  std::vector<Entry> entries;
};

template <Operad O, Operad P>
struct BimodTable {
  std::vector<std::pair<WBOf<O>, Elem<P>>> entries;
  std::optional<Elem<P>> trivial;  // defaults to the unit
};

template <Operad O, Operad P>
LoopElement<O, P> table_loop(const O& op, const P& tgt, const OperadMap<O, P>& eta, const LoopTable<O, P>& table) {
  auto on_prime = [op, tgt, eta, table](const BVOf<O>& p, const Rational& t) {
    auto find = [&](const BVOf<O>& q) -> std::optional<Elem<P>> {
      for (const auto& e : table.entries)
        if (e.point == q && (!e.window || e.window->contains_open(t))) return e.value;
      return std::nullopt;
    };
    auto v = orbit_lookup<BVOf<O>, Elem<P>>(
        p, p.arity(), find, [&](const BVOf<O>& q, const Permutation& s) { return bv_act(op, q, s); },
        [&](const Elem<P>& a, const Permutation& s) { return tgt.act(a, s); });
    return v ? *v : eta(mu(op, p));
  };
  return extend_loop<O, P>(op, tgt, eta, "table", on_prime);
}

template <Operad O, Operad P>
BimodMapElement<O, P> table_bimodule_map(const O& op, const P& tgt, const OperadMap<O, P>& eta,
                                         const BimodTable<O, P>& table) {
  auto on_prime = [op, tgt, eta, table](const WBOf<O>& p) {
    auto find = [&](const WBOf<O>& q) -> std::optional<Elem<P>> {
      for (const auto& [pt, v] : table.entries)
        if (pt == q) return v;
      return std::nullopt;
    };
    auto v = orbit_lookup<WBOf<O>, Elem<P>>(
        p, p.arity(), find, [&](const WBOf<O>& q, const Permutation& s) { return wb_act(op, q, s); },
        [&](const Elem<P>& a, const Permutation& s) { return tgt.act(a, s); });
    return v ? *v : eta(mu_tilde(op, p));
  };
  return extend_bimodule_map<O, P>(op, tgt, eta, "table", on_prime, table.trivial ? *table.trivial : tgt.unit());
}

// ---------------------------------------------------------------------------
// Subdivision of a point along a cube configuration

// Bands in increasing height: gap h_0, cube c_1, gap h_1, ..., gap h_n. A
// height on a cube endpoint lies in the neighbouring closed gap.
template <class E>
struct Subdivision {
  std::vector<std::vector<WBPoint<E>>> gaps;   // n + 1 lists
  std::vector<std::vector<WBPoint<E>>> cubes;  // n lists
  Permutation sigma;                           // the point is the planar assembly acted on by sigma

  std::size_t band_count() const { return gaps.size() + cubes.size(); }
  const std::vector<WBPoint<E>>& band(std::size_t b) const { return b % 2 == 0 ? gaps[b / 2] : cubes[b / 2]; }
};

inline std::size_t band_of(const CubeConfig& c, const Rational& t) {
  for (std::size_t k = 0; k < c.arity(); ++k)
    if (c.cubes()[k].contains_open(t)) return 2 * k + 1;
  const auto hs = gaps(c);
  for (std::size_t k = 0; k < hs.size(); ++k)
    if (hs[k].contains_closed(t)) return 2 * k;
  throw std::invalid_argument("band_of: height outside [0,1]");
}

template <Operad O>
Subdivision<Elem<O>> subdivide(const O& op, const WBOf<O>& y, const CubeConfig& c) {
  using T = WBTree<Elem<O>>;
  if (!c.is_increasing()) throw std::invalid_argument("subdivide: cube configuration not sorted");
  Subdivision<Elem<O>> s;
  s.gaps.resize(c.arity() + 1);
  s.cubes.resize(c.arity());
  s.sigma = leaf_sigma(y.tree()).inverse();
  const T planar = planarize(y.tree());
  std::vector<const T*> open{&planar};
  for (std::size_t b = 0; b < s.band_count(); ++b) {
    auto& out = b % 2 == 0 ? s.gaps[b / 2] : s.cubes[b / 2];
    std::vector<const T*> next;
    for (const T* n : open) {
      if (n->is_leaf() || band_of(c, n->label.height) != b) {
        out.push_back(wb_trivial(op));
        next.push_back(n);
        continue;
      }
      std::size_t pos = 0;
      std::function<T(const T&)> cut = [&](const T& v) {
        T r;
        r.label = v.label;
        for (const auto& ch : v.inputs) {
          if (ch.is_leaf() || band_of(c, ch.label.height) != b) {
            r.inputs.push_back(T::make_leaf(++pos));
            next.push_back(&ch);
          } else {
            r.inputs.push_back(cut(ch));
          }
        }
        return r;
      };
      out.push_back(wb_normalize(op, cut(*n)));
    }
    open = std::move(next);
  }
  for (const T* n : open)
    if (!n->is_leaf()) throw std::logic_error("subdivide: a vertex was left above the last band");
  return s;
}

// Grafts the sub-points back together band by band.
template <Operad O>
WBOf<O> subdivision_reassemble(const O& op, const Subdivision<Elem<O>>& s) {
  using T = WBTree<Elem<O>>;
  T cur = s.band(0).at(0).tree();
  for (std::size_t b = 1; b < s.band_count(); ++b) {
    const auto& ps = s.band(b);
    if (ps.size() != leaf_count(cur)) throw std::logic_error("subdivision_reassemble: band size mismatch");
    for (std::size_t j = ps.size(); j >= 1; --j) cur = graft_at_label(cur, j, ps[j - 1].tree());
  }
  return wb_act(op, wb_normalize(op, std::move(cur)), s.sigma);
}

// ---------------------------------------------------------------------------
// The little-interval action

template <class M>
void require_shared_eta(const std::vector<M>& fs, const char* what) {
  for (const auto& f : fs)
    if (f.eta.name != fs.front().eta.name) throw std::invalid_argument(std::string(what) + ": mismatched etas");
}

// Sorts the cubes increasingly, carrying the maps along.
template <class M>
std::pair<CubeConfig, std::vector<M>> sort_with(const CubeConfig& c, const std::vector<M>& fs) {
  if (fs.size() != c.arity()) throw std::invalid_argument("cube configuration and map list differ in length");
  auto [sorted, s] = sort_to_increasing(c);
  std::vector<M> out;
  for (std::size_t j = 1; j <= c.arity(); ++j) out.push_back(fs[s(j) - 1]);
  return {sorted, out};
}

template <Operad O, Operad P>
BimodMapElement<O, P> alpha(const O& op, const P& tgt, const CubeConfig& c, const std::vector<BimodMapElement<O, P>>& fs) {
  if (fs.empty()) throw std::invalid_argument("alpha: needs at least one cube");
  require_shared_eta(fs, "alpha");
  auto [sc, sf] = sort_with(c, fs);
  const auto eta = fs.front().eta;
  auto k = [op, tgt, eta, sc, sf](const WBOf<O>& y) -> Elem<P> {
    const auto s = subdivide(op, y, sc);
    Elem<P> v = eta(mu_tilde(op, s.gaps[0].at(0)));
    for (std::size_t b = 1; b < s.band_count(); ++b) {
      const auto& ps = s.band(b);
      if (ps.size() != tgt.arity(v)) throw std::logic_error("alpha: arity bookkeeping failed");
      std::vector<Elem<P>> vals;
      for (const auto& p : ps) {
        if (b % 2 == 0) {
          vals.push_back(eta(mu_tilde(op, p)));
        } else {
          const std::size_t i = b / 2;
          vals.push_back(sf[i](p.is_trivial() ? p : rescale(op, p, sc.cubes()[i])));
        }
      }
      v = compose_full(tgt, v, vals);
    }
    return tgt.act(v, s.sigma);
  };
  return {"alpha", eta, k, std::nullopt};
}

// Concatenation of loops: g_i reparametrized inside cube i, the basepoint
// elsewhere.
template <Operad O, Operad P>
LoopElement<O, P> loop_alpha(const O& op, const CubeConfig& c, const std::vector<LoopElement<O, P>>& gs) {
  if (gs.empty()) throw std::invalid_argument("loop_alpha: needs at least one cube");
  require_shared_eta(gs, "loop_alpha");
  auto [sc, sg] = sort_with(c, gs);
  const auto eta = gs.front().eta;
  auto k = [op, eta, sc, sg](const BVOf<O>& x, const Rational& t) -> Elem<P> {
    for (std::size_t i = 0; i < sc.arity(); ++i)
      if (sc.cubes()[i].contains_open(t)) return sg[i](x, sc.cubes()[i].unapply(t));
    return eta(mu(op, x));
  };
  return {"loop_alpha", eta, k, std::nullopt};
}

// ---------------------------------------------------------------------------
// Delooping

// The composite of g(x_v; t_v) over the main tree.
template <Operad O, Operad P>
Elem<P> xi_value(const O& op, const P& tgt, const LoopElement<O, P>& g, const WBOf<O>& y) {
  (void)op;
  if (y.is_trivial()) return tgt.unit();
  std::function<Elem<P>(const WBTree<Elem<O>>&)> eval = [&](const WBTree<Elem<O>>& n) {
    Elem<P> v = g(n.label.x, n.label.height);
    for (std::size_t j = n.inputs.size(); j >= 1; --j)
      if (!n.inputs[j - 1].is_leaf()) v = tgt.compose(v, j, eval(n.inputs[j - 1]));
    return v;
  };
  return tgt.act(eval(y.tree()), leaf_sigma(y.tree()).inverse());
}

template <Operad O, Operad P>
BimodMapElement<O, P> xi(const O& op, const P& tgt, const LoopElement<O, P>& g) {
  return {"xi(" + g.name + ")", g.eta, [op, tgt, g](const WBOf<O>& y) { return xi_value(op, tgt, g, y); },
          g.bound};
}

// Restriction to arities <= k and to the level WB_k.
template <Operad O, Operad P>
BimodMapElement<O, P> xi_k(const O& op, const P& tgt, const LoopElement<O, P>& g, std::size_t k) {
  auto k_fn = [op, tgt, g, k](const WBOf<O>& y) {
    if (y.arity() > k || !wb_in_level(op, y, k)) throw TruncationError("xi_k: point outside WB_k");
    return xi_value(op, tgt, g, y);
  };
  return {"xi_" + std::to_string(k) + "(" + g.name + ")", g.eta, k_fn, k};
}

template <class E>
struct MainSplit {
  WBTree<E> lower, upper;  // planar leaf labels
  std::size_t slot = 0;    // leaf of lower receiving upper
};

// Cuts the planar representative at the inner edge below vertex `id`
// (preorder, id >= 1).
template <class E>
MainSplit<E> split_main_tree(const WBTree<E>& planar, std::size_t id) {
  using T = WBTree<E>;
  MainSplit<E> s;
  s.lower = planar;
  auto ref = locate_vertex(s.lower, id);
  if (ref.parent == nullptr) throw std::invalid_argument("split_main_tree: the root has no edge below it");
  s.upper = planarize(*ref.self);
  constexpr std::size_t mark = static_cast<std::size_t>(-1);
  *ref.self = T::make_leaf(mark);
  std::size_t pos = 0;
  map_leaves(s.lower, [&](std::size_t l) {
    ++pos;
    if (l == mark) s.slot = pos;
    return pos;
  });
  return s;
}

template <Operad O, Operad P>
Elem<P> xi_split(const O& op, const P& tgt, const LoopElement<O, P>& g, const WBOf<O>& y, std::size_t edge_id,
                 const RedexChooser& choose = {});

// The inductive route: a single vertex gives g(x_r; t_r), otherwise split
// along an inner edge picked by `choose` and recurse.
template <Operad O, Operad P>
Elem<P> xi_by_splitting(const O& op, const P& tgt, const LoopElement<O, P>& g, const WBOf<O>& y,
                        const RedexChooser& choose = {}) {
  if (y.is_trivial()) return tgt.unit();
  const auto vs = preorder(y.tree());
  if (vs.size() == 1) return tgt.act(g(vs[0]->label.x, vs[0]->label.height), leaf_sigma(y.tree()).inverse());
  const std::size_t pick = choose ? choose(vs.size() - 1) : 0;
  return xi_split(op, tgt, g, y, pick + 1, choose);
}

// One application of the splitting formula at the edge below vertex
// `edge_id` of the planar representative.
template <Operad O, Operad P>
Elem<P> xi_split(const O& op, const P& tgt, const LoopElement<O, P>& g, const WBOf<O>& y, std::size_t edge_id,
                 const RedexChooser& choose) {
  const auto s = split_main_tree(planarize(y.tree()), edge_id);
  const Elem<P> lo = xi_by_splitting(op, tgt, g, wb_normalize(op, s.lower), choose);
  const Elem<P> up = xi_by_splitting(op, tgt, g, wb_normalize(op, s.upper), choose);
  return tgt.act(tgt.compose(lo, s.slot, up), leaf_sigma(y.tree()).inverse());
}

// ---------------------------------------------------------------------------
// Validation

inline std::vector<Permutation> sample_permutations(std::size_t n) {
  if (n <= 3) return Permutation::all(n);
  std::vector<std::size_t> cyc(n), rev(n);
  for (std::size_t j = 0; j < n; ++j) {
    cyc[j] = (j + 1) % n;
    rev[j] = n - 1 - j;
  }
  return {Permutation::identity(n), Permutation(cyc), Permutation(rev), Permutation::transposition(n, 1, 2)};
}

// Checks the loop laws on every sample point and parameter; compositions
// pair consecutive samples at every input.
template <Operad O, Operad P>
Report validate_loop(const O& op, const P& tgt, const LoopElement<O, P>& g, const std::vector<BVOf<O>>& xs,
                     const std::vector<Rational>& ts) {
  Report r;
  auto w = [&](std::vector<BVOf<O>> ps, const Rational& t) {
    return [&op, ps = std::move(ps), t] {
      Json j = {{"t", rational_to_json(t)}, {"points", Json::array()}};
      for (const auto& p : ps) j["points"].push_back(bv_to_json(op, p));
      return j;
    };
  };
  const auto u = bv_unit(op);
  for (const auto& t : ts) r.check("loop.unit", g(u, t) == tgt.unit(), w({u}, t));
  for (std::size_t a = 0; a < xs.size(); ++a) {
    const auto& x = xs[a];
    const Elem<P> base = g.eta(mu(op, x));
    r.check("loop.boundary", g(x, Rational(0)) == base, w({x}, Rational(0)));
    r.check("loop.boundary", g(x, Rational(1)) == base, w({x}, Rational(1)));
    for (const auto& t : ts) {
      const Elem<P> gx = g(x, t);
      r.check("loop.arity", tgt.arity(gx) == x.arity(), w({x}, t));
      for (const auto& s : sample_permutations(x.arity()))
        r.check("loop.equivariance", g(bv_act(op, x, s), t) == tgt.act(gx, s), w({x}, t));
      if (a + 1 < xs.size()) {
        const auto& y = xs[a + 1];
        const Elem<P> gy = g(y, t);
        for (std::size_t i = 1; i <= x.arity(); ++i)
          r.check("loop.composition", g(bv_compose(op, x, i, y), t) == tgt.compose(gx, i, gy), w({x, y}, t));
      }
    }
  }
  return r;
}

// Checks the bimodule-map laws: equivariance, the arity-0 generators, the
// right action at every input and the left action of each element on
// consecutive samples.
template <Operad O, Operad P>
Report validate_bimodule_map(const O& op, const P& tgt, const BimodMapElement<O, P>& f,
                             const std::vector<WBOf<O>>& ys, const std::vector<Elem<O>>& elems) {
  Report r;
  auto w = [&](std::vector<WBOf<O>> ps, std::vector<Elem<O>> es) {
    return [&op, ps = std::move(ps), es = std::move(es)] {
      Json j = {{"points", Json::array()}, {"elements", Json::array()}};
      for (const auto& p : ps) j["points"].push_back(wb_to_json(op, p));
      for (const auto& e : es) j["elements"].push_back(op.to_json(e));
      return j;
    };
  };
  for (const auto& a : elems)
    if (op.arity(a) == 0) r.check("bimod.gamma0", f(wb_gamma0(op, a)) == f.eta(a), w({}, {a}));
  for (std::size_t q = 0; q < ys.size(); ++q) {
    const auto& y = ys[q];
    const Elem<P> fy = f(y);
    r.check("bimod.arity", tgt.arity(fy) == y.arity(), w({y}, {}));
    for (const auto& s : sample_permutations(y.arity()))
      r.check("bimod.equivariance", f(wb_act(op, y, s)) == tgt.act(fy, s), w({y}, {}));
    for (const auto& a : elems)
      for (std::size_t i = 1; i <= y.arity(); ++i)
        r.check("bimod.right", f(wb_right(op, y, i, a)) == target_right(tgt, f.eta, fy, i, a), w({y}, {a}));
  }
  if (!ys.empty()) {
    std::size_t next = 0;
    for (const auto& a : elems) {
      std::vector<WBOf<O>> xs;
      std::vector<Elem<P>> vals;
      for (std::size_t j = 0; j < op.arity(a); ++j) {
        xs.push_back(ys[next++ % ys.size()]);
        vals.push_back(f(xs.back()));
      }
      r.check("bimod.left", f(wb_left(op, a, xs)) == target_left(tgt, f.eta, a, vals), [&, xs, a] {
        return w(xs, {a})();
      });
    }
  }
  return r;
}

}  // namespace opforge
