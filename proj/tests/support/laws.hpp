#pragma once

// Per-instance checks of the operad laws of BV(O) and the bimodule laws of
// WB(O), recorded into a Report.

#include <vector>

#include "opforge/io.hpp"
#include "opforge/report.hpp"
#include "support/random.hpp"

namespace opforge::laws {

template <Operad O>
void bv_laws(const O& op, const BVOf<O>& x, const BVOf<O>& y, const BVOf<O>& z, gen::Rng& rng, Report& r) {
  auto w = [&](std::initializer_list<BVOf<O>> ps) {
    return [&op, ps = std::vector<BVOf<O>>(ps)] {
      Json j = Json::array();
      for (const auto& p : ps) j.push_back(bv_to_json(op, p));
      return j;
    };
  };
  const auto u = bv_unit(op);
  r.check("bv.unit_left", bv_compose(op, u, 1, x) == x, w({x}));
  for (std::size_t i = 1; i <= x.arity(); ++i) r.check("bv.unit_right", bv_compose(op, x, i, u) == x, w({x}));
  if (x.arity() == 0) return;
  const std::size_t i = gen::uniform(rng, 1, x.arity());
  const auto xy = bv_compose(op, x, i, y);
  r.check("mu.composition", mu(op, xy) == op.compose(mu(op, x), i, mu(op, y)), w({x, y}));
  if (y.arity() > 0) {
    const std::size_t j = gen::uniform(rng, 1, y.arity());
    r.check("bv.sequential", bv_compose(op, xy, i + j - 1, z) == bv_compose(op, x, i, bv_compose(op, y, j, z)),
            w({x, y, z}));
  }
  if (x.arity() >= 2) {
    const std::size_t k = gen::uniform(rng, 1, x.arity() - 1);
    r.check("bv.parallel",
            bv_compose(op, bv_compose(op, x, k + 1, z), k, y) ==
                bv_compose(op, bv_compose(op, x, k, y), k + y.arity(), z),
            w({x, y, z}));
  }
  const auto sx = gen::permutation(rng, x.arity()), sy = gen::permutation(rng, y.arity());
  r.check("bv.equivariance",
          bv_compose(op, bv_act(op, x, sx), i, bv_act(op, y, sy)) ==
              bv_act(op, bv_compose(op, x, sx(i), y), Permutation::block(sx, i, sy)),
          w({x, y}));
  r.check("mu.action", mu(op, bv_act(op, x, sx)) == op.act(mu(op, x), sx), w({x}));
}

template <Operad O>
Json wb_witness(const O& op, const std::vector<WBOf<O>>& ps, const std::vector<Elem<O>>& es) {
  Json j = {{"points", Json::array()}, {"elements", Json::array()}};
  for (const auto& p : ps) j["points"].push_back(wb_to_json(op, p));
  for (const auto& e : es) j["elements"].push_back(op.to_json(e));
  return j;
}

template <Operad O>
bool monotone(const O& op, const WBOf<O>& x) {
  try {
    wb_check_raw(op, x.tree());
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

// Right-module laws for x and elements a, b; index choices are exhaustive.
template <Operad O>
void wb_right_laws(const O& op, const WBOf<O>& x, const Elem<O>& a, const Elem<O>& b, Report& r) {
  const std::size_t n = x.arity(), m = op.arity(a);
  auto w = [&] { return wb_witness(op, {x}, {a, b}); };
  for (std::size_t i = 1; i <= n; ++i) {
    const auto xa = wb_right(op, x, i, a);
    r.check("wb.monotone", monotone(op, xa), w);
    r.check("wb.right_unit", wb_right(op, x, i, op.unit()) == x, w);
    r.check("mu_tilde.right", mu_tilde(op, xa) == o_right(op, mu_tilde(op, x), i, a), w);
    for (std::size_t j = 1; j <= m; ++j)
      r.check("wb.right_assoc", wb_right(op, xa, i + j - 1, b) == wb_right(op, x, i, op.compose(a, j, b)), w);
    for (std::size_t k = i + 1; k <= n; ++k)
      r.check("wb.right_commute", wb_right(op, wb_right(op, x, k, b), i, a) == wb_right(op, xa, k + m - 1, b), w);
  }
}

template <Operad O>
void wb_right_equivariance(const O& op, const WBOf<O>& x, const Elem<O>& a, gen::Rng& rng, Report& r) {
  const std::size_t n = x.arity(), m = op.arity(a);
  if (n == 0) return;
  const std::size_t i = gen::uniform(rng, 1, n);
  const auto s = gen::permutation(rng, n), t = gen::permutation(rng, m);
  auto w = [&] { return wb_witness(op, {x}, {a}); };
  r.check("wb.right_equivariance",
          wb_right(op, wb_act(op, x, s), i, a) ==
              wb_act(op, wb_right(op, x, s(i), a), Permutation::block(s, i, Permutation::identity(m))),
          w);
  r.check("wb.right_equivariance",
          wb_right(op, x, i, op.act(a, t)) ==
              wb_act(op, wb_right(op, x, i, a), Permutation::block(Permutation::identity(n), i, t)),
          w);
  r.check("mu_tilde.action", mu_tilde(op, wb_act(op, x, s)) == op.act(mu_tilde(op, x), s), w);
}

// Left-module laws: a(xs) with |xs| = |a|; b is grafted into input i of a
// for associativity with the operad, c is a right operand.
template <Operad O>
void wb_left_laws(const O& op, const Elem<O>& a, const std::vector<WBOf<O>>& xs, const Elem<O>& c, gen::Rng& rng,
                  Report& r) {
  auto w = [&] { return wb_witness(op, xs, {a, c}); };
  const auto ax = wb_left(op, a, xs);
  r.check("wb.monotone", monotone(op, ax), w);
  std::vector<Elem<O>> mus;
  std::vector<std::size_t> sizes;
  for (const auto& x : xs) {
    mus.push_back(mu_tilde(op, x));
    sizes.push_back(x.arity());
  }
  r.check("mu_tilde.left", mu_tilde(op, ax) == o_left(op, a, mus), w);
  if (xs.size() == 1) r.check("wb.left_unit", wb_left(op, op.unit(), {xs[0]}) == xs[0], w);
  // Compatibility with the right action on each input.
  std::size_t off = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    for (std::size_t p = 1; p <= xs[k].arity(); ++p) {
      auto ys = xs;
      ys[k] = wb_right(op, xs[k], p, c);
      r.check("wb.left_right_compat", wb_right(op, ax, off + p, c) == wb_left(op, a, ys), w);
    }
    off += xs[k].arity();
  }
  // Equivariance.
  if (!xs.empty()) {
    const auto s = gen::permutation(rng, xs.size());
    const auto inv = s.inverse();
    std::vector<WBOf<O>> perm_xs;
    for (std::size_t k = 1; k <= xs.size(); ++k) perm_xs.push_back(xs[inv(k) - 1]);
    r.check("wb.left_equivariance",
            wb_left(op, op.act(a, s), xs) == wb_act(op, wb_left(op, a, perm_xs), Permutation::over_blocks(s, sizes)),
            w);
    std::vector<Permutation> ts;
    std::vector<WBOf<O>> acted;
    for (const auto& x : xs) {
      ts.push_back(gen::permutation(rng, x.arity()));
      acted.push_back(wb_act(op, x, ts.back()));
    }
    r.check("wb.left_equivariance", wb_left(op, a, acted) == wb_act(op, ax, Permutation::direct_sum(ts)), w);
  }
}

// Associativity of the left action with the operad: (a o_i b)(xs) =
// a(x_1..x_{i-1}, b(x_i..), ...).
template <Operad O>
void wb_left_assoc(const O& op, const Elem<O>& a, std::size_t i, const Elem<O>& b, const std::vector<WBOf<O>>& xs,
                   Report& r) {
  const std::size_t m = op.arity(b);
  std::vector<WBOf<O>> outer, inner;
  for (std::size_t k = 0; k < i - 1; ++k) outer.push_back(xs[k]);
  for (std::size_t k = i - 1; k < i - 1 + m; ++k) inner.push_back(xs[k]);
  outer.push_back(wb_left(op, b, inner));
  for (std::size_t k = i - 1 + m; k < xs.size(); ++k) outer.push_back(xs[k]);
  r.check("wb.left_assoc", wb_left(op, op.compose(a, i, b), xs) == wb_left(op, a, outer),
          [&] { return wb_witness(op, xs, {a, b}); });
}

}  // namespace opforge::laws
