// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <vector>

#include "smoothtm/dist.hpp"
#include "smoothtm/errors.hpp"
#include "smoothtm/finite_set.hpp"
#include "smoothtm/linear_op.hpp"
#include "smoothtm/random.hpp"

using namespace smoothtm;

namespace {

FiniteSet ab() { return FiniteSet::of({"A", "B"}); }
FiniteSet xyz() { return FiniteSet::of({"x", "y", "z"}); }

}  // namespace

TEST(FiniteSet, PlainLabelsAndLookup) {
  const FiniteSet s = xyz();
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.label(1), "y");
  EXPECT_EQ(s.index_of("z"), 2u);
  EXPECT_FALSE(s.find("w").has_value());
  EXPECT_THROW(s.index_of("w"), MismatchError);
  EXPECT_THROW(FiniteSet::of({"a", "a"}), ConstructionError);
}

TEST(FiniteSet, ProductIsRowMajor) {
  const FiniteSet p = FiniteSet::product({ab(), xyz()});
  ASSERT_EQ(p.size(), 6u);
  EXPECT_EQ(p.label(0), "(A,x)");
  EXPECT_EQ(p.label(4), "(B,y)");
  const std::vector<std::size_t> c{1, 2};
  EXPECT_EQ(p.flatten(c), 5u);
  EXPECT_EQ(p.unflatten(3), (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(p.index_of("(A,z)"), 2u);
}

TEST(FiniteSet, DisjointUnionTagsParts) {
  const FiniteSet u = FiniteSet::disjoint_union({{"l", ab()}, {"r", xyz()}});
  ASSERT_EQ(u.size(), 5u);
  EXPECT_EQ(u.label(0), "l:A");
  EXPECT_EQ(u.label(2), "r:x");
  EXPECT_EQ(u.part_offset(1), 2u);
  EXPECT_EQ(u.locate(4), (std::pair<std::size_t, std::size_t>{1, 2}));
}

TEST(FiniteSet, EqualityIsStructural) {
  EXPECT_EQ(ab(), ab());
  EXPECT_FALSE(ab() == xyz());
  EXPECT_EQ(directions().size(), 3u);
  EXPECT_EQ(directions().label(0), "L");
}

TEST(Dist, ConstructionValidatesSimplex) {
  EXPECT_NO_THROW(Dist(ab(), {0.25, 0.75}));
  EXPECT_THROW(Dist(ab(), {0.5, 0.6}), ConstructionError);
  EXPECT_THROW(Dist(ab(), {-0.1, 1.1}), ConstructionError);
  EXPECT_THROW(Dist(ab(), {1.0}), Error);
  const Dist clamped(ab(), {-1e-14, 1.0});
  EXPECT_EQ(clamped[0], 0.0);
}

TEST(Dist, PointMassDetection) {
  const Dist p = Dist::point(ab(), "B");
  ASSERT_TRUE(p.point_index().has_value());
  EXPECT_EQ(*p.point_index(), 1u);
  EXPECT_FALSE(Dist::uniform(ab()).is_point_mass());
}

TEST(Dist, NormalizedMakesSingleCoordinateExact) {
  const Dist d = Dist::normalized(ab(), {0.0, 1.0 - 1e-15});
  EXPECT_EQ(d[1], 1.0);
  EXPECT_TRUE(d.is_point_mass());
}

TEST(Dist, TensorAndMarginalsAreInverse) {
  Rng rng(3);
  const Dist a = random_dist(rng, ab());
  const Dist b = random_dist(rng, xyz());
  const Dist j = tensor(a, b);
  ASSERT_EQ(j.size(), 6u);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(j[i * 3 + k], a[i] * b[k]);
  EXPECT_LE(max_abs_diff(j.marginal(0), a), 1e-15);
  EXPECT_LE(max_abs_diff(j.marginal(1), b), 1e-15);
}

TEST(Dist, ConvexCombineIsPointwise) {
  const Dist c(ab(), {0.25, 0.75});
  const std::vector<Dist> parts{Dist::point(xyz(), 0), Dist(xyz(), {0.0, 0.5, 0.5})};
  const Dist r = convex_combine(c, parts);
  EXPECT_DOUBLE_EQ(r[0], 0.25);
  EXPECT_DOUBLE_EQ(r[1], 0.375);
  EXPECT_DOUBLE_EQ(r[2], 0.375);
}

TEST(Dist, DirectSumConcatenates) {
  const Dist d = direct_sum(0.25, Dist::point(ab(), 0), Dist::uniform(xyz()));
  ASSERT_EQ(d.size(), 5u);
  EXPECT_DOUBLE_EQ(d[0], 0.25);
  EXPECT_DOUBLE_EQ(d[1], 0.0);
  EXPECT_DOUBLE_EQ(d[2], 0.25);
  EXPECT_THROW(direct_sum(Measure::scaled(Dist::point(ab(), 0), 0.5), Measure::scaled(Dist::point(xyz(), 0), 0.2)),
               MismatchError);
}

TEST(Dist, InnerReadsWeight) {
  EXPECT_DOUBLE_EQ(inner("B", Dist(ab(), {0.25, 0.75})), 0.75);
}

TEST(LinearOp, InducedOpPushesForward) {
  // f: x->A, y->B, z->A
  const LinearOp op = induced_op(xyz(), ab(), std::vector<std::size_t>{0, 1, 0});
  EXPECT_TRUE(op.is_deterministic());
  const Dist r = op.apply(Dist(xyz(), {0.2, 0.3, 0.5}));
  EXPECT_DOUBLE_EQ(r[0], 0.7);
  EXPECT_DOUBLE_EQ(r[1], 0.3);
}

TEST(LinearOp, PartialFunctionIsRejected) {
  EXPECT_THROW(induced_op(xyz(), ab(),
                          [](std::size_t i) -> std::optional<std::size_t> {
                            if (i == 2) return std::nullopt;
                            return i;
                          }),
               ConstructionError);
}

TEST(LinearOp, ApplyProductMatchesDenseJoint) {
  Rng rng(11);
  const FiniteSet dom = FiniteSet::product({ab(), xyz(), ab()});
  std::vector<std::size_t> table(dom.size());
  for (auto& t : table) t = rng.below(3);
  const LinearOp op = induced_op(dom, xyz(), table);
  for (int trial = 0; trial < 50; ++trial) {
    const Dist a = random_mixed_dist(rng, ab()), b = random_mixed_dist(rng, xyz()), c = random_mixed_dist(rng, ab());
    const Dist* f[] = {&a, &b, &c};
    const Dist joint = tensor(std::vector<Dist>{a, b, c});
    // Direct pushforward computed here.
    std::vector<double> expect(3, 0.0);
    for (std::size_t l = 0; l < dom.size(); ++l) expect[table[l]] += joint[l];
    const Dist got = op.apply_product(f);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(got[k], expect[k], 1e-15);
    EXPECT_LE(max_abs_diff(got, op.apply(joint)), 1e-15);
  }
}

TEST(LinearOp, BaseMismatchThrows) {
  const LinearOp op = induced_op(xyz(), ab(), std::vector<std::size_t>{0, 1, 0});
  EXPECT_THROW(op.apply(Dist::uniform(ab())), MismatchError);
}

TEST(Random, SeedsAreReproducible) {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_EQ(derive_seed(5, 7), derive_seed(5, 7));
  Rng c(1);
  for (int i = 0; i < 100; ++i) {
    const double u = c.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(c.below(7), 7u);
  }
}

TEST(Random, MixedDistsAreSimplex) {
  Rng rng(9);
  bool saw_point = false, saw_zero = false;
  for (int i = 0; i < 200; ++i) {
    const Dist d = random_mixed_dist(rng, xyz());
    EXPECT_TRUE(is_simplex(d.weights()));
    saw_point |= d.is_point_mass();
    for (double w : d.weights()) saw_zero |= w == 0.0;
  }
  EXPECT_TRUE(saw_point);
  EXPECT_TRUE(saw_zero);
}
