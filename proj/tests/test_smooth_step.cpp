// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "oracle.hpp"
#include "smoothtm/errors.hpp"
#include "smoothtm/machine_io.hpp"
#include "smoothtm/random.hpp"
#include "smoothtm/smooth_step.hpp"

using namespace smoothtm;

namespace {

const char* kLr = R"(states: q
alphabet: _ A B
tapes: 1
q _ -> q _ S
q A -> q A L
q B -> q B R
)";

SmoothConfig half(const Machine& m) {
  SmoothConfig s = blank_smooth_config(m, Dist::point(m.states(), 0));
  s.tapes[0] = SmoothTape(0, {Dist(m.alphabet(), {0.0, 0.5, 0.5})}, m.alphabet(), m.blank());
  return s;
}

}  // namespace

TEST(SmoothTape, CanonicalizesBlankEnds) {
  const FiniteSet sigma = FiniteSet::of({"_", "A"});
  const Dist b = Dist::point(sigma, 0), a = Dist::point(sigma, 1);
  const SmoothTape t(-2, {b, a, b, b}, sigma, 0);
  EXPECT_EQ(t.lo(), -1);
  EXPECT_EQ(t.hi(), -1);
  EXPECT_EQ(t.at(5), b);
  EXPECT_EQ(SmoothTape(4, {b}, sigma, 0), SmoothTape(sigma, 0));
}

TEST(SmoothStep, LeftRightSplitsTheCell) {
  // Worked by hand: the head cell 0.5A + 0.5B is written back; half the mass
  // moves each way, so cells -1 and +1 each receive 0.5 · (0.5A + 0.5B) plus
  // 0.5 blank, and cell 0 receives only blanks.
  const Machine m = parse_machine(kLr);
  const SmoothConfig n = smooth_step(m, half(m));
  const auto& t = n.tapes[0];
  for (std::int64_t i : {-1, 1}) {
    EXPECT_DOUBLE_EQ(t.at(i)[0], 0.5);
    EXPECT_DOUBLE_EQ(t.at(i)[1], 0.25);
    EXPECT_DOUBLE_EQ(t.at(i)[2], 0.25);
  }
  EXPECT_EQ(t.at(0), Dist::point(m.alphabet(), 0));
}

TEST(SmoothStep, DetailReportsWritesAndDirections) {
  const Machine m = parse_machine(kLr);
  const StepDetail d = smooth_step_detailed(m, half(m));
  ASSERT_EQ(d.moves.size(), 1u);
  EXPECT_DOUBLE_EQ(d.moves[0][move_index(Move::Left)], 0.5);
  EXPECT_DOUBLE_EQ(d.moves[0][move_index(Move::Right)], 0.5);
  EXPECT_DOUBLE_EQ(d.writes[0][1], 0.5);
  EXPECT_FALSE(d.fill_exercised);
}

TEST(SmoothStep, MatchesLoopOracleSingleTape) {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const Machine m = random_machine(rng, 1 + rng.below(4), 2 + rng.below(3), 1);
    SmoothConfig s = random_smooth_config(rng, m, rng.below(4));
    for (int k = 0; k < 3; ++k) {
      const SmoothConfig got = smooth_step(m, s);
      ASSERT_LE(oracle::deviation(oracle::step(m, oracle::from_library(s)), got), 1e-12) << "trial " << trial;
      ASSERT_LE(max_deviation(smooth_step_oracle(m, s), got), 1e-12) << "trial " << trial;
      s = got;
    }
  }
}

TEST(SmoothStep, MatchesLoopOracleMultiTape) {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const Machine m = random_machine(rng, 1 + rng.below(3), 2 + rng.below(2), 2 + rng.below(2));
    SmoothConfig s = random_smooth_config(rng, m, rng.below(3));
    for (int k = 0; k < 3; ++k) {
      const SmoothConfig got = smooth_step(m, s);
      ASSERT_LE(oracle::deviation(oracle::step(m, oracle::from_library(s)), got), 1e-12) << "trial " << trial;
      s = got;
    }
  }
}

TEST(SmoothStep, LibraryOracleIsSingleTapeOnly) {
  Rng rng(1);
  const Machine m = random_machine(rng, 2, 2, 2);
  EXPECT_THROW(smooth_step_oracle(m, blank_smooth_config(m, Dist::point(m.states(), 0))), Error);
}

TEST(SmoothStep, PsiUpdateEqualsDirectSuperposition) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(2);
    const Machine m = random_machine(rng, 1 + rng.below(3), 2 + rng.below(2), n);
    const Dist local = random_mixed_dist(rng, m.local_set());
    const Dist l = random_mixed_dist(rng, m.alphabet()), c = random_mixed_dist(rng, m.alphabet()),
               r = random_mixed_dist(rng, m.alphabet());
    for (std::size_t j = 0; j < n; ++j) {
      double p[3] = {0, 0, 0};
      for (std::size_t x = 0; x < m.num_local(); ++x) p[move_index(m.move(x, j))] += local[x];
      const Dist got = psi_update(m, j, local, l, c, r);
      for (std::size_t a = 0; a < m.alphabet().size(); ++a)
        ASSERT_NEAR(got[a], p[0] * l[a] + p[1] * c[a] + p[2] * r[a], 1e-12);
    }
  }
}

TEST(SmoothStep, PointMassesFollowTheClassicalStep) {
  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const Machine m = random_machine(rng, 1 + rng.below(4), 2 + rng.below(3), 1 + rng.below(3));
    Configuration c = random_configuration(rng, m, 2);
    SmoothConfig s = embed(m, c);
    for (int k = 0; k < 20; ++k) {
      c = step(m, c);
      s = smooth_step(m, s);
      ASSERT_EQ(s, embed(m, c));
      ASSERT_EQ(as_classical(s), c);
    }
  }
}

TEST(SmoothStep, OutputStaysOnTheSimplex) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const Machine m = random_machine(rng, 1 + rng.below(4), 2 + rng.below(3), 1 + rng.below(2));
    SmoothConfig s = random_smooth_config(rng, m, 3);
    for (int k = 0; k < 10; ++k) {
      s = smooth_step(m, s);
      ASSERT_TRUE(check_simplex(s));
    }
  }
}

TEST(SmoothStep, FillsAreReported) {
  const Machine m = parse_machine("states: q\nalphabet: _ A\ntapes: 1\nq _ -> q A R\n");
  SmoothConfig s = blank_smooth_config(m, Dist::point(m.states(), 0));
  EXPECT_FALSE(smooth_step_detailed(m, s).fill_exercised);
  s.tapes[0] = SmoothTape(0, {Dist::uniform(m.alphabet())}, m.alphabet(), 0);
  EXPECT_TRUE(smooth_step_detailed(m, s).fill_exercised);
}

TEST(SmoothStep, LocalJointIsTheProduct) {
  Rng rng(4);
  const Machine m = random_machine(rng, 2, 3, 2);
  const SmoothConfig s = random_smooth_config(rng, m, 1);
  const Dist j = local_joint(m, s);
  const std::size_t ns = 3;
  for (std::size_t q = 0; q < 2; ++q)
    for (std::size_t a = 0; a < ns; ++a)
      for (std::size_t b = 0; b < ns; ++b)
        EXPECT_NEAR(j[(q * ns + a) * ns + b], s.state[q] * s.tapes[0].at(0)[a] * s.tapes[1].at(0)[b], 1e-15);
}

TEST(SmoothStep, MismatchedShapesThrow) {
  Rng rng(4);
  const Machine m1 = random_machine(rng, 2, 3, 1), m2 = random_machine(rng, 2, 3, 2);
  EXPECT_THROW(smooth_step(m1, blank_smooth_config(m2, Dist::point(m2.states(), 0))), MismatchError);
}
