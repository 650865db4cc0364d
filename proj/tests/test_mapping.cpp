#include <gtest/gtest.h>

#include "opforge/mapping.hpp"
#include "support/kernels.hpp"
#include "support/random.hpp"
#include "support/worked.hpp"

using namespace opforge;

namespace {

using AE = AssocElement;
using WT = WBTree<AE>;
using AMap = BimodMapElement<Assoc, Assoc>;
using ALoop = LoopElement<Assoc, Assoc>;

void expect_ok(const Report& r) { EXPECT_TRUE(r.ok()) << r.to_json().dump(2); }

// Renumbers leaves in planar order.
template <class E>
WBTree<E> numbered(WBTree<E> t) {
  return planarize(std::move(t));
}

}  // namespace

TEST(Mapping, ConstantKernelsPassValidation) {
  gen::Rng rng(101);
  Assoc op;
  const auto eta = identity_map<Assoc>();
  expect_ok(validate_loop(op, op, constant_loop(op, eta), kernels::bv_samples(op, rng, 60), kernels::time_samples()));
  expect_ok(validate_bimodule_map(op, op, eta_mu_tilde(op, eta), kernels::wb_samples(op, rng, 500),
                                  kernels::element_samples(op, rng, 1, 2)));
  End end(2);
  expect_ok(validate_bimodule_map(end, end, eta_mu_tilde(end, identity_map<End>()), kernels::wb_samples(end, rng, 150),
                                  kernels::element_samples(end, rng, 1, 2)));
  // Through Assoc -> Com.
  Com com;
  expect_ok(validate_bimodule_map(op, com, eta_mu_tilde(op, assoc_to_com()), kernels::wb_samples(op, rng, 100),
                                  kernels::element_samples(op, rng, 1, 2)));
}

TEST(Mapping, TableKernelsPassValidation) {
  gen::Rng rng(103);
  Assoc op;
  const auto eta = identity_map<Assoc>();
  const auto xs = kernels::bv_samples(op, rng, 60);
  const auto ys = kernels::wb_samples(op, rng, 120);
  const auto es = kernels::element_samples(op, rng, 1, 2);
  for (int s = 0; s < 3; ++s) {
    auto g = table_loop(op, op, eta, kernels::random_loop_table(op, rng, 6));
    expect_ok(validate_loop(op, op, g, xs, kernels::time_samples()));
    expect_ok(validate_bimodule_map(op, op, xi(op, op, g), ys, es));
    expect_ok(validate_bimodule_map(op, op, table_bimodule_map(op, op, eta, kernels::random_bimod_table(op, rng, 6)),
                                    ys, es));
  }
  auto rev = kernels::reversal_loop(op, Interval{Rational(1, 4), Rational(3, 4)});
  expect_ok(validate_loop(op, op, rev, xs, kernels::time_samples()));
  expect_ok(validate_bimodule_map(op, op, xi(op, op, rev), ys, es));
  End end(2);
  expect_ok(validate_bimodule_map(end, end, kernels::trivial_twist(end, kernels::end_not(end)),
                                  kernels::wb_samples(end, rng, 150), kernels::element_samples(end, rng, 1, 2)));
}

TEST(Mapping, MutantsAreFlagged) {
  gen::Rng rng(107);
  End end(2);
  auto bad = validate_loop(end, end, kernels::mutant_loop_unit(end, kernels::end_not(end)),
                           kernels::bv_samples(end, rng, 20), kernels::time_samples());
  ASSERT_FALSE(bad.ok());
  EXPECT_GT(bad.failed["loop.unit"], 0u);
  const auto& w = bad.violations.front();
  EXPECT_EQ(w.law, "loop.unit");
  EXPECT_EQ(bv_normalize(end, bv_tree_from_json(end, w.witness["points"][0])), bv_unit(end));

  Assoc op;
  auto mult = validate_loop(op, op, kernels::mutant_loop_multiplicative<Assoc>(op, assoc_reverse),
                            kernels::bv_samples(op, rng, 40), kernels::time_samples());
  EXPECT_GT(mult.failed["loop.composition"], 0u);
  auto bu = validate_bimodule_map(end, end, kernels::mutant_bimod_unit(end, kernels::end_not(end)),
                                  kernels::wb_samples(end, rng, 40), kernels::element_samples(end, rng, 1, 2));
  EXPECT_GT(bu.failed["bimod.right"], 0u);
  auto bm = validate_bimodule_map(op, op, kernels::mutant_bimod_multiplicative<Assoc>(op, assoc_reverse),
                                  kernels::wb_samples(op, rng, 40), kernels::element_samples(op, rng, 1, 2));
  EXPECT_GT(bm.failed["bimod.left"], 0u);
}

TEST(Mapping, SubdivideSingleVertex) {
  Assoc op;
  const AE a{{2, 3, 1}};
  auto y = wb_corolla(op, iota(op, a), Rational(1, 2));
  CubeConfig c({{Rational(1, 4), Rational(3, 4)}});
  auto s = subdivide(op, y, c);
  ASSERT_EQ(s.gaps.size(), 2u);
  EXPECT_EQ(s.gaps[0], std::vector{wb_trivial(op)});
  EXPECT_EQ(s.cubes[0], std::vector{y});
  EXPECT_EQ(s.gaps[1], std::vector<WBOf<Assoc>>(3, wb_trivial(op)));
  // All heights in gaps: the cube list is trivial only.
  auto s2 = subdivide(op, y, CubeConfig({{Rational(0), Rational(1, 3)}}));
  EXPECT_EQ(s2.cubes[0], std::vector{wb_trivial(op)});
  EXPECT_EQ(s2.gaps[1], std::vector{y});
  // A height on a cube endpoint lies in the gap.
  auto s3 = subdivide(op, y, CubeConfig({{Rational(0), Rational(1, 2)}}));
  EXPECT_EQ(s3.gaps[1], std::vector{y});
  EXPECT_THROW(subdivide(op, y, CubeConfig({{Rational(1, 2), Rational(1)}, {Rational(0), Rational(1, 4)}})),
               std::invalid_argument);
}

TEST(Mapping, SubdivisionPartitionsAndReassembles) {
  gen::Rng rng(109);
  auto run = [&](const auto& op) {
    for (int s = 0; s < 200; ++s) {
      auto y = gen::wb(op, rng);
      auto c = gen::cubes(rng, gen::uniform(rng, 1, 3));
      auto sub = subdivide(op, y, c);
      std::size_t vs = 0;
      for (std::size_t b = 0; b < sub.band_count(); ++b)
        for (const auto& p : sub.band(b)) vs += vertex_count(p.tree());
      EXPECT_EQ(vs, vertex_count(y.tree()));
      EXPECT_EQ(subdivision_reassemble(op, sub), y);
      const auto hs = gaps(c);
      for (std::size_t k = 0; k < c.arity(); ++k)
        for (const auto& p : sub.cubes[k])
          for (const auto* v : preorder(p.tree())) EXPECT_TRUE(c.cubes()[k].contains_open(v->label.height));
      for (std::size_t k = 0; k < hs.size(); ++k)
        for (const auto& p : sub.gaps[k])
          for (const auto* v : preorder(p.tree())) EXPECT_TRUE(hs[k].contains_closed(v->label.height));
    }
  };
  run(Assoc{});
  run(End(2));
}

TEST(Mapping, AlphaUnitLaw) {
  gen::Rng rng(113);
  Assoc op;
  auto f = table_bimodule_map(op, op, identity_map<Assoc>(), kernels::random_bimod_table(op, rng, 8));
  auto a = alpha(op, op, CubeConfig::unit(), {f});
  for (int s = 0; s < 200; ++s) {
    auto y = gen::wb(op, rng);
    EXPECT_EQ(a(y), f(y));
  }
  End end(2);
  auto g = kernels::trivial_twist(end, kernels::end_not(end));
  auto b = alpha(end, end, CubeConfig::unit(), {g});
  for (int s = 0; s < 200; ++s) {
    auto y = gen::wb(end, rng);
    EXPECT_EQ(b(y), g(y));
  }
}

TEST(Mapping, AlphaEquivarianceAndComposition) {
  gen::Rng rng(127);
  Assoc op;
  const auto eta = identity_map<Assoc>();
  std::vector<AMap> pool;
  for (int j = 0; j < 4; ++j) pool.push_back(table_bimodule_map(op, op, eta, kernels::random_bimod_table(op, rng, 6)));
  pool.push_back(xi(op, op, kernels::reversal_loop(op, {Rational(1, 3), Rational(2, 3)})));
  pool.push_back(eta_mu_tilde(op, eta));
  auto pick = [&](std::size_t n) {
    std::vector<AMap> fs;
    for (std::size_t j = 0; j < n; ++j) fs.push_back(pool[gen::uniform(rng, 0, pool.size() - 1)]);
    return fs;
  };
  for (int s = 0; s < 60; ++s) {
    const std::size_t n = gen::uniform(rng, 1, 3);
    auto c = gen::cubes(rng, n, false);
    auto fs = pick(n);
    const auto sg = gen::permutation(rng, n);
    std::vector<AMap> fs_s;
    for (std::size_t j = 1; j <= n; ++j) fs_s.push_back(fs[sg(j) - 1]);
    auto lhs = alpha(op, op, act_cubes(c, sg), fs_s), rhs = alpha(op, op, c, fs);
    const std::size_t i = gen::uniform(rng, 1, n), m = gen::uniform(rng, 1, 2);
    auto d = gen::cubes(rng, m, false);
    auto inner = pick(m);
    std::vector<AMap> spliced(fs.begin(), fs.begin() + static_cast<std::ptrdiff_t>(i - 1));
    spliced.insert(spliced.end(), inner.begin(), inner.end());
    spliced.insert(spliced.end(), fs.begin() + static_cast<std::ptrdiff_t>(i), fs.end());
    auto nested = fs;
    nested[i - 1] = alpha(op, op, d, inner);
    auto flat = alpha(op, op, compose_cubes(c, i, d), spliced), outer = alpha(op, op, c, nested);
    for (int r = 0; r < 4; ++r) {
      auto y = gen::wb(op, rng);
      EXPECT_EQ(lhs(y), rhs(y));
      EXPECT_EQ(flat(y), outer(y));
      const auto t = gen::permutation(rng, y.arity());
      EXPECT_EQ(rhs(wb_act(op, y, t)), op.act(rhs(y), t));
    }
  }
}

TEST(Mapping, AlphaIsABimoduleMap) {
  gen::Rng rng(131);
  Assoc op;
  const auto eta = identity_map<Assoc>();
  auto f1 = table_bimodule_map(op, op, eta, kernels::random_bimod_table(op, rng, 6));
  auto f2 = xi(op, op, kernels::reversal_loop(op, {Rational(1, 5), Rational(4, 5)}));
  auto a = alpha(op, op, CubeConfig({{Rational(1, 6), Rational(1, 2)}, {Rational(7, 12), Rational(1)}}), {f1, f2});
  expect_ok(validate_bimodule_map(op, op, a, kernels::wb_samples(op, rng, 80), kernels::element_samples(op, rng, 1, 2)));
}

TEST(Mapping, AlphaWorkedExample) {
  gen::Rng rng(137);
  Assoc op;
  auto f1 = xi(op, op, kernels::reversal_loop(op, {Rational(0), Rational(1)}));
  auto f2 = table_bimodule_map(op, op, identity_map<Assoc>(), kernels::random_bimod_table(op, rng, 4));
  Report r;
  for (int s = 0; s < 5; ++s) worked::alpha_worked_example(op, f1, f2, rng, r);
  // Over End({0,1}) the trivial tree has a nontrivial image.
  End end(2);
  auto g2 = kernels::trivial_twist(end, kernels::end_not(end));
  ASSERT_EQ(g2(wb_trivial(end)), kernels::end_not(end));
  for (int s = 0; s < 5; ++s) worked::alpha_worked_example(end, eta_mu_tilde(end, identity_map<End>()), g2, rng, r);
  expect_ok(r);
}

TEST(Mapping, LoopAlphaExamples) {
  gen::Rng rng(139);
  Assoc op;
  const auto eta = identity_map<Assoc>();
  auto cst = constant_loop(op, eta);
  auto g = table_loop(op, op, eta, kernels::random_loop_table(op, rng, 6));
  auto c = gen::cubes(rng, 2);
  auto both_const = loop_alpha(op, c, std::vector{cst, cst});
  auto unit = loop_alpha(op, CubeConfig::unit(), std::vector{g});
  auto mixed = loop_alpha(op, c, std::vector{g, cst});
  for (int s = 0; s < 100; ++s) {
    auto x = gen::bv(op, rng);
    auto t = gen::parameter(rng);
    EXPECT_EQ(both_const(x, t), cst(x, t));
    EXPECT_EQ(unit(x, t), g(x, t));
    EXPECT_EQ(mixed(x, Rational(0)), mu(op, x));
    EXPECT_EQ(mixed(x, Rational(1)), mu(op, x));
  }
  expect_ok(validate_loop(op, op, mixed, kernels::bv_samples(op, rng, 40), kernels::time_samples()));
}

TEST(Mapping, XiOfConstantLoop) {
  gen::Rng rng(149);
  Assoc op;
  auto f = xi(op, op, constant_loop(op, identity_map<Assoc>()));
  for (int s = 0; s < 300; ++s) {
    auto y = gen::wb(op, rng);
    EXPECT_EQ(f(y), mu_tilde(op, y));
  }
  End end(2);
  auto h = xi(end, end, constant_loop(end, identity_map<End>()));
  for (int s = 0; s < 100; ++s) {
    auto y = gen::wb(end, rng);
    EXPECT_EQ(h(y), mu_tilde(end, y));
  }
}

TEST(Mapping, XiWorkedExample) {
  gen::Rng rng(151);
  Assoc op;
  auto g = table_loop(op, op, identity_map<Assoc>(), kernels::random_loop_table(op, rng, 8));
  auto rev = kernels::reversal_loop(op, {Rational(1, 4), Rational(3, 4)});
  Report r;
  for (const auto& loop : {g, rev})
    for (int s = 0; s < 20; ++s) worked::xi_worked_example(op, op, loop, rng, r);
  expect_ok(r);
}

TEST(Mapping, XiDecompositionIndependence) {
  gen::Rng rng(157);
  Assoc op;
  auto g = table_loop(op, op, identity_map<Assoc>(), kernels::random_loop_table(op, rng, 10));
  std::size_t splits = 0;
  for (std::size_t v = 2; v <= 4; ++v) {
    for (std::size_t k = 1; k <= 5; ++k) {
      for (const auto& shape : enumerate_trees(k, v)) {
        for (int rep = 0; rep < 3; ++rep) {
          std::function<WT(const Tree&, const Rational&)> go = [&](const Tree& n, const Rational& floor) {
            if (n.is_leaf()) return WT::make_leaf(1);
            const Rational h = floor + (Rational(1) - floor) * gen::open_parameter(rng);
            std::vector<WT> in;
            for (const auto& c : n.inputs) in.push_back(go(c, h));
            auto x = bv_normalize(op, gen::raw_bv_of_arity(op, rng, n.inputs.size(), 2, 0.0));
            return worked::vtx<AE>(h, x, std::move(in));
          };
          auto raw = numbered(go(shape, Rational(0)));
          auto y = wb_act(op, wb_normalize(op, raw), gen::permutation(rng, leaf_count(raw)));
          const auto direct = xi_value(op, op, g, y);
          const std::size_t nv = vertex_count(y.tree());
          for (std::size_t e = 1; e < nv; ++e) {
            EXPECT_EQ(xi_split(op, op, g, y, e), direct);
            ++splits;
          }
          EXPECT_EQ(xi_by_splitting(op, op, g, y, gen::random_chooser(rng)), direct);
        }
      }
    }
  }
  EXPECT_GT(splits, 100u);
}

TEST(Mapping, XiIsAMorphismOfIntervalAlgebras) {
  gen::Rng rng(163);
  Assoc op;
  const auto eta = identity_map<Assoc>();
  for (int s = 0; s < 40; ++s) {
    const std::size_t n = gen::uniform(rng, 1, 3);
    auto c = gen::cubes(rng, n, gen::coin(rng, 0.5));
    std::vector<ALoop> gs;
    std::vector<AMap> fs;
    for (std::size_t j = 0; j < n; ++j) {
      gs.push_back(table_loop(op, op, eta, kernels::random_loop_table(op, rng, 5)));
      fs.push_back(xi(op, op, gs.back()));
    }
    auto lhs = xi(op, op, loop_alpha(op, c, gs));
    auto rhs = alpha(op, op, c, fs);
    for (int r = 0; r < 5; ++r) {
      auto y = gen::wb(op, rng);
      EXPECT_EQ(lhs(y), rhs(y));
    }
  }
}

TEST(Mapping, TruncatedXi) {
  gen::Rng rng(167);
  Assoc op;
  auto g = kernels::reversal_loop(op, {Rational(1, 4), Rational(3, 4)});
  auto f3 = xi_k(op, op, g, 3);
  auto f = xi(op, op, g);
  for (int s = 0; s < 200; ++s) {
    auto y = gen::wb(op, rng);
    if (y.arity() <= 3 && wb_in_level(op, y, 3)) {
      EXPECT_EQ(f3(y), f(y));
    } else {
      EXPECT_THROW(f3(y), TruncationError);
    }
  }
}

TEST(Mapping, BottomStratum) {
  // Arity 0 at height 0 and the trivial tree.
  gen::Rng rng(173);
  Assoc op;
  auto f = xi(op, op, kernels::reversal_loop(op, {Rational(0), Rational(1)}));
  EXPECT_EQ(f(wb_gamma0(op, AE{})), AE{});
  EXPECT_EQ(f(wb_trivial(op)), op.unit());
  // h_1(*_1; t) is the unit for every t.
  for (int s = 0; s < 10; ++s) EXPECT_EQ(f(wb_corolla(op, bv_unit(op), gen::parameter(rng))), op.unit());
}
