#include <gtest/gtest.h>

#include <random>
#include <set>

#include "causal_rnr/relation.hpp"

using namespace causal_rnr;

namespace {

using PairSet = std::set<Edge>;

PairSet as_set(const Relation& r) {
  auto e = r.edges();
  return {e.begin(), e.end()};
}

// Reference closure by repeated composition until nothing changes; loops dropped.
PairSet slow_closure(PairSet s) {
  for (bool grew = true; grew;) {
    grew = false;
    PairSet next = s;
    for (auto [a, b] : s)
      for (auto [c, d] : s)
        if (b == c && a != d) grew |= next.insert({a, d}).second;
    s = std::move(next);
  }
  return s;
}

// Reference reduction of a closed acyclic set: drop (a, c) when some b gives a->b->c.
PairSet slow_reduction(const PairSet& closed) {
  PairSet out;
  for (auto [a, c] : closed) {
    bool implied = false;
    for (auto [x, b] : closed)
      if (x == a && b != c && closed.count({b, c})) implied = true;
    if (!implied) out.insert({a, c});
  }
  return out;
}

Relation random_dag(std::mt19937& rng, std::size_t n, double density) {
  Relation r = Relation::over_domain(n);
  std::vector<OpId> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<OpId>(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::bernoulli_distribution coin(density);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) r.insert(perm[i], perm[j]);
  return r;
}

}  // namespace

TEST(Relation, InsertEraseAndUniverse) {
  Relation r(5, std::vector<OpId>{0, 3});
  EXPECT_TRUE(r.empty());
  EXPECT_THROW(r.insert(0, 1), std::invalid_argument);
  r.insert(0, 3);
  EXPECT_TRUE(r.contains(0, 3));
  EXPECT_FALSE(r.contains(3, 0));
  EXPECT_FALSE(r.in_universe(1));
  EXPECT_EQ(r.size(), 1u);
  r.erase(0, 3);
  EXPECT_TRUE(r.empty());
  EXPECT_EQ(r.universe(), (std::vector<OpId>{0, 3}));
}

TEST(Relation, LeqIsReflexive) {
  Relation r = Relation::over_domain(3);
  r.insert(0, 1);
  EXPECT_TRUE(r.leq(2, 2));
  EXPECT_TRUE(r.leq(0, 1));
  EXPECT_FALSE(r.leq(1, 0));
}

TEST(Relation, SelfLoopsAreNeverStored) {
  Relation r = Relation::over_domain(3);
  EXPECT_THROW(r.insert(1, 1), std::invalid_argument);
  EXPECT_FALSE(r.contains(1, 1));
  EXPECT_TRUE(r.empty());
}

TEST(Relation, ChainIsClosedTotalOrder) {
  const std::vector<OpId> seq{2, 0, 3};
  const Relation c = Relation::chain(4, seq);
  EXPECT_EQ(as_set(c), (PairSet{{2, 0}, {2, 3}, {0, 3}}));
  EXPECT_TRUE(is_total_order(c));
  EXPECT_FALSE(c.in_universe(1));
}

TEST(Relation, ClosureOfPath) {
  Relation r = Relation::over_domain(4);
  r.insert(0, 1);
  r.insert(1, 2);
  r.insert(2, 3);
  EXPECT_EQ(as_set(transitive_closure(r)), (PairSet{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
}

TEST(Relation, ReductionOfDiamond) {
  Relation r = Relation::over_domain(4);
  for (auto [a, b] : std::vector<Edge>{{0, 1}, {0, 2}, {1, 3}, {2, 3}, {0, 3}}) r.insert(a, b);
  EXPECT_EQ(as_set(transitive_reduction(transitive_closure(r))), (PairSet{{0, 1}, {0, 2}, {1, 3}, {2, 3}}));
}

TEST(Relation, CycleDetectionAndClosureDropsDiagonal) {
  Relation r = Relation::over_domain(3);
  r.insert(0, 1);
  r.insert(1, 2);
  EXPECT_FALSE(has_cycle(r));
  r.insert(2, 0);
  EXPECT_TRUE(has_cycle(r));
  const Relation c = transitive_closure(r);
  for (OpId a = 0; a < 3; ++a) EXPECT_FALSE(c.contains(a, a));
  EXPECT_EQ(c.size(), 6u);
}

TEST(Relation, SetOperations) {
  Relation a = Relation::over_domain(4), b = Relation::over_domain(4);
  a.insert(0, 1);
  a.insert(1, 2);
  b.insert(1, 2);
  b.insert(2, 3);
  EXPECT_EQ(as_set(set_difference(a, b)), (PairSet{{0, 1}}));
  EXPECT_EQ(as_set(union_closed(a, b)), (PairSet{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
  EXPECT_TRUE(set_difference(a, b).subset_of(a));
  EXPECT_FALSE(a.subset_of(b));
}

TEST(Relation, RestrictKeepsOnlyInnerPairs) {
  Relation r = Relation::over_domain(4);
  r.insert(0, 1);
  r.insert(1, 2);
  r.insert(0, 3);
  const std::vector<OpId> keep{0, 1, 3};
  const Relation s = restrict(r, keep);
  EXPECT_EQ(as_set(s), (PairSet{{0, 1}, {0, 3}}));
  EXPECT_EQ(s.universe(), keep);
}

TEST(Relation, EqualityComparesUniverses) {
  Relation a(3, std::vector<OpId>{0, 1}), b(3, std::vector<OpId>{0, 1});
  a.insert(0, 1);
  b.insert(0, 1);
  EXPECT_EQ(a, b);
  b.add_to_universe(2);
  EXPECT_NE(a, b);
}

TEST(Relation, OrderPredicates) {
  Relation r = Relation::over_domain(3);
  r.insert(0, 1);
  r.insert(1, 2);
  EXPECT_FALSE(is_transitive(r));
  EXPECT_FALSE(is_partial_order(r));
  r.insert(0, 2);
  EXPECT_TRUE(is_partial_order(r));
  EXPECT_TRUE(is_total_order(r));
}

TEST(Relation, ClosureAndReductionMatchReferenceOnRandomDags) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const Relation r = random_dag(rng, n, 0.3);
    const PairSet closed = slow_closure(as_set(r));
    ASSERT_EQ(as_set(transitive_closure(r)), closed);
    const Relation reduced = transitive_reduction(transitive_closure(r));
    ASSERT_EQ(as_set(reduced), slow_reduction(closed));
    ASSERT_EQ(transitive_closure(reduced), transitive_closure(r));
  }
}

TEST(Relation, WideDomainCrossesWordBoundary) {
  Relation r = Relation::over_domain(130);
  r.insert(3, 70);
  r.insert(70, 129);
  const Relation c = transitive_closure(r);
  EXPECT_TRUE(c.contains(3, 129));
  EXPECT_EQ(transitive_reduction(c), r);
}
