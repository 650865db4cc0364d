#include <gtest/gtest.h>

#include <random>
#include <set>

#include "opforge/tree.hpp"
#include "support/tree_oracles.hpp"

using namespace opforge;

namespace {

Tree caterpillar() { return graft(corolla(2), 1, corolla(2)); }

std::vector<Tree> census(std::size_t max_k, std::size_t max_l) {
  std::vector<Tree> all;
  for (std::size_t k = 1; k <= max_k; ++k)
    for (std::size_t l = 1; l <= max_l; ++l)
      for (const auto& t : enumerate_trees(k, l)) all.push_back(t);
  return all;
}

Tree random_relabel(const Tree& t, std::mt19937_64& rng) {
  auto perms = Permutation::all(leaf_count(t));
  std::uniform_int_distribution<std::size_t> d(0, perms.size() - 1);
  return with_sigma(t, perms[d(rng)]);
}

// Random planar presentation of the same labeled tree.
Tree random_twist(const Tree& t, std::mt19937_64& rng) {
  if (t.is_leaf()) return t;
  Tree r;
  for (const auto& c : t.inputs) r.inputs.push_back(random_twist(c, rng));
  std::shuffle(r.inputs.begin(), r.inputs.end(), rng);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// graft

TEST(Graft, UnitShapeAddsBivalentRoot) {
  Tree t = corolla(3);
  Tree g = graft(corolla(1), 1, t);
  ASSERT_EQ(g.arity(), 1u);
  EXPECT_EQ(g.inputs[0], t);
  EXPECT_EQ(vertex_count(g), 2u);
}

TEST(Graft, CaterpillarShape) {
  Tree c = caterpillar();
  EXPECT_EQ(leaf_count(c), 3u);
  EXPECT_EQ(vertex_count(c), 2u);
  EXPECT_FALSE(c.inputs[0].is_leaf());
  EXPECT_TRUE(c.inputs[1].is_leaf());
}

TEST(Graft, LeafCountArithmetic) { EXPECT_EQ(leaf_count(graft(corolla(3), 2, corolla(2))), 4u); }

TEST(Graft, IndexOutOfRange) {
  EXPECT_THROW(graft(corolla(2), 3, corolla(2)), std::out_of_range);
  EXPECT_THROW(graft(corolla(2), 0, corolla(2)), std::out_of_range);
}

TEST(Graft, ArityZeroScionRemovesLeaf) {
  Tree g = graft(corolla(3), 2, corolla(0));
  EXPECT_EQ(leaf_count(g), 2u);
  EXPECT_TRUE(is_planar(g));
  EXPECT_EQ(univalent_count(g), 1u);
}

TEST(Graft, AssociativityExhaustive) {
  std::vector<Tree> small;
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t l = 1; l <= 2; ++l)
      for (const auto& t : enumerate_trees(k, l)) small.push_back(t);
  small.push_back(trivial_tree());
  std::size_t checks = 0;
  for (const auto& a : small)
    for (const auto& b : small)
      for (const auto& c : small) {
        if (vertex_count(a) + vertex_count(b) + vertex_count(c) > 4) continue;
        const std::size_t n = leaf_count(a), m = leaf_count(b);
        for (std::size_t i = 1; i <= n; ++i) {
          if (m == 0) continue;
          for (std::size_t j = i; j <= i + m - 1; ++j) {
            EXPECT_EQ(graft(graft(a, i, b), j, c), graft(a, i, graft(b, j - i + 1, c)));
            ++checks;
          }
          for (std::size_t j = i + 1; j <= n; ++j) {
            EXPECT_EQ(graft(graft(a, i, b), j + m - 1, c), graft(graft(a, j, c), i, b));
            ++checks;
          }
        }
      }
  EXPECT_GT(checks, 100u);
}

// ---------------------------------------------------------------------------
// enumerate_trees

TEST(Enumerate, SmallValues) {
  auto t11 = enumerate_trees(1, 1);
  ASSERT_EQ(t11.size(), 2u);
  EXPECT_EQ(t11[0], corolla(0));
  EXPECT_EQ(t11[1], corolla(1));
  auto t21 = enumerate_trees(2, 1);
  ASSERT_EQ(t21.size(), 1u);
  EXPECT_EQ(t21[0], corolla(2));
  EXPECT_TRUE(enumerate_trees(3, 0).empty());
}

TEST(Enumerate, AgreesWithFilterOracle) {
  for (std::size_t k = 1; k <= 6; ++k) {
    for (std::size_t l = 1; k + l <= 7; ++l) {
      auto got = enumerate_trees(k, l);
      auto want = oracle::trees_by_filter(k, l);
      std::set<Tree> g(got.begin(), got.end()), w(want.begin(), want.end());
      EXPECT_EQ(g.size(), got.size()) << "duplicates at k=" << k << " l=" << l;
      EXPECT_EQ(g, w) << "k=" << k << " l=" << l;
      for (const auto& t : got) {
        EXPECT_EQ(geometric_inputs(t), k);
        EXPECT_EQ(vertex_count(t), l);
      }
    }
  }
}

TEST(Enumerate, DeterministicOrder) {
  auto a = enumerate_trees(4, 3);
  auto b = enumerate_trees(4, 3);
  EXPECT_EQ(a, b);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
}

// ---------------------------------------------------------------------------
// isomorphism and canonical forms

TEST(Iso, MirrorCaterpillarsWithMatchingLabels) {
  Tree a = caterpillar();  // ((1 2) 3)
  Tree b;                  // (3 (1 2))
  b.inputs.push_back(Tree::make_leaf(3));
  b.inputs.push_back(corolla(2));
  auto iso = nonplanar_iso(a, b);
  ASSERT_TRUE(iso.has_value());
  EXPECT_TRUE(is_isomorphism(a, b, *iso, true));
}

TEST(Iso, DifferentVertexCounts) { EXPECT_FALSE(nonplanar_iso(corolla(3), caterpillar()).has_value()); }

TEST(Iso, SelfIsIdentity) {
  Tree a = caterpillar();
  auto iso = nonplanar_iso(a, a);
  ASSERT_TRUE(iso);
  EXPECT_EQ(*iso, identity_iso(a));
}

TEST(Iso, CorollaLabelSwapMatchesBruteForce) {
  // Swapping the two inputs of a 2-corolla carries (1 2) onto (2 1).
  Tree a = corolla(2);
  Tree b = with_sigma(corolla(2), Permutation::from_one_based({2, 1}));
  EXPECT_EQ(nonplanar_iso(a, b).has_value(), oracle::brute_iso(a, b));
  EXPECT_TRUE(oracle::brute_iso(a, b));
}

TEST(Iso, AgreesWithBruteForceOnCensus) {
  std::mt19937_64 rng(7);
  auto trees = census(3, 3);
  std::vector<Tree> labeled;
  for (const auto& t : trees)
    for (const auto& p : Permutation::all(leaf_count(t))) labeled.push_back(with_sigma(t, p));
  for (std::size_t r = 0; r < 400; ++r) {
    const Tree& a = labeled[rng() % labeled.size()];
    const Tree b = rng() % 2 ? random_twist(a, rng) : labeled[rng() % labeled.size()];
    auto iso = nonplanar_iso(a, b);
    EXPECT_EQ(iso.has_value(), oracle::brute_iso(a, b));
    if (iso) {
      EXPECT_TRUE(is_isomorphism(a, b, *iso, true));
    }
  }
}

TEST(Canonical, CorollaIsFixed) { EXPECT_EQ(canonical_form(corolla(4)), corolla(4)); }

TEST(Canonical, TwoPresentationsAgree) {
  Tree a = caterpillar();
  Tree b;
  b.inputs.push_back(Tree::make_leaf(3));
  b.inputs.push_back(with_sigma(corolla(2), Permutation::from_one_based({2, 1})));
  EXPECT_EQ(canonical_form(a), canonical_form(b));
}

TEST(Canonical, IdempotentOnRandomTrees) {
  std::mt19937_64 rng(11);
  auto trees = census(4, 3);
  for (std::size_t r = 0; r < 200; ++r) {
    Tree t = random_twist(random_relabel(trees[rng() % trees.size()], rng), rng);
    Tree c = canonical_form(t);
    EXPECT_EQ(canonical_form(c), c);
    EXPECT_TRUE(oracle::brute_iso(t, c));
  }
}

TEST(Canonical, ClassInvariantAndInjectiveOnCensus) {
  std::vector<Tree> labeled;
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t l = 1; l <= 4; ++l)
      for (const auto& t : enumerate_trees(k, l))
        for (const auto& p : Permutation::all(leaf_count(t))) labeled.push_back(with_sigma(t, p));
  std::mt19937_64 rng(5);
  for (std::size_t r = 0; r < 600; ++r) {
    const Tree& a = labeled[rng() % labeled.size()];
    const Tree& b = labeled[rng() % labeled.size()];
    EXPECT_EQ(canonical_form(a) == canonical_form(b), oracle::brute_iso(a, b));
    Tree tw = random_twist(a, rng);
    EXPECT_EQ(canonical_form(tw), canonical_form(a));
  }
}

// ---------------------------------------------------------------------------
// automorphisms

TEST(Automorphisms, CorollaIsSymmetricGroup) {
  for (std::size_t n = 0; n <= 4; ++n) EXPECT_EQ(automorphisms(corolla(n)).size(), factorial(n));
}

TEST(Automorphisms, CaterpillarMatchesBruteForce) {
  // Only the two leaves of the upper vertex can be exchanged.
  Tree c = caterpillar();
  EXPECT_EQ(oracle::brute_automorphism_count(c), 2u);
  EXPECT_EQ(automorphisms(c).size(), 2u);
  EXPECT_EQ(automorphism_count(c), 2u);
}

TEST(Automorphisms, AsymmetricTreeIsTrivial) {
  // 1-ary chain over a 2-corolla whose inputs differ.
  Tree top = graft(corolla(2), 1, corolla(1));
  Tree t = graft(corolla(1), 1, top);
  EXPECT_EQ(automorphisms(t).size(), 1u);
}

TEST(Automorphisms, GroupMatchesBruteForceAndCloses) {
  for (std::size_t k = 1; k <= 4; ++k)
    for (std::size_t l = 1; l <= 4; ++l)
      for (const auto& t : enumerate_trees(k, l)) {
        auto g = automorphisms(t);
        ASSERT_EQ(g.size(), oracle::brute_automorphism_count(t));
        ASSERT_EQ(g.size(), automorphism_count(t));
        std::set<TreeIso> s(g.begin(), g.end());
        EXPECT_EQ(s.size(), g.size());
        for (const auto& f : g) {
          EXPECT_TRUE(is_isomorphism(t, t, f, false));
          EXPECT_TRUE(s.count(f.inverse()));
        }
        if (g.size() <= 24) {
          for (const auto& f : g)
            for (const auto& h : g) EXPECT_TRUE(s.count(f * h));
        }
      }
}
