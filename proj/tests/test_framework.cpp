// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <json.hpp>
#include <memory>

#include "smoothtm/errors.hpp"
#include "smoothtm/framework.hpp"
#include "smoothtm/machine_io.hpp"
#include "smoothtm/random.hpp"

using namespace smoothtm;

namespace {

std::shared_ptr<const Machine> random_shared(std::uint64_t seed) {
  Rng rng(seed);
  return std::make_shared<const Machine>(random_machine(rng, 3, 3, 1));
}

SmoothSimulation identity_sim(std::shared_ptr<const Machine> m) {
  const GeneratingTriple g = identity_triple(m);
  return make_simulation(
      g, [m](Rng& rng) { return random_smooth_config(rng, *m, 2); }, [](const SmoothConfig& s) { return s; });
}

}  // namespace

TEST(Framework, IdentityTripleCyclesInOneStep) {
  auto m = random_shared(1);
  const GeneratingTriple g = identity_triple(m);
  Rng rng(2);
  const SmoothConfig s = random_smooth_config(rng, *m, 2);
  EXPECT_EQ(g.smooth_enc(s), Membership::Inside);
  const CycleReport r = run_to_next_encoding(g, s, 5);
  EXPECT_TRUE(r.terminated);
  EXPECT_EQ(r.steps, 1u);
  EXPECT_EQ(r.next, smooth_step(*m, s));
  const auto [c, steps] = classical_cycle(g, random_configuration(rng, *m, 2), 5);
  EXPECT_EQ(steps, 1u);
  (void)c;
}

TEST(Framework, ComposeRequiresMatchingMachines) {
  auto m = random_shared(1), other = random_shared(2);
  const GeneratingTriple g = compose(identity_triple(m), identity_triple(m));
  EXPECT_TRUE(same_machine(*g.machine, *m));
  EXPECT_TRUE(same_machine(*g.target, *m));
  EXPECT_FALSE(same_machine(*m, *other));
  EXPECT_THROW(compose(identity_triple(m), identity_triple(other)), MismatchError);
}

TEST(Framework, UnreachedEncodingRaises) {
  auto m = random_shared(3);
  GeneratingTriple g = identity_triple(m);
  g.smooth_enc = [](const SmoothConfig&) { return Membership::Outside; };
  Rng rng(4);
  const SmoothConfig s = random_smooth_config(rng, *m, 1);
  EXPECT_THROW(run_to_next_encoding(g, s, 7), NonTerminationError);
  EXPECT_FALSE(trace_cycle(g, s, 7).terminated);
}

TEST(Framework, MixedMembershipViolatesWellBehavedness) {
  auto m = random_shared(3);
  GeneratingTriple g = identity_triple(m);
  int calls = 0;
  g.smooth_enc = [&calls](const SmoothConfig&) {
    return ++calls == 2 ? Membership::Mixed : (calls >= 3 ? Membership::Inside : Membership::Outside);
  };
  Rng rng(4);
  const SmoothConfig s = random_smooth_config(rng, *m, 1);
  const CycleReport r = trace_cycle(g, s, 10);
  ASSERT_TRUE(r.first_violation.has_value());
}

TEST(Framework, IdentitySimulationPreserves) {
  const PreservationReport r = check_preserving(identity_sim(random_shared(5)), {10, 3, 42, 1e-12});
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.trials.size(), 10u);
  EXPECT_EQ(r.max_deviation, 0.0);
  for (const auto& t : r.trials) {
    EXPECT_EQ(t.cycle_lengths, (std::vector<std::size_t>{1, 1, 1}));
    EXPECT_EQ(t.seed, derive_seed(42, t.index));
  }
}

TEST(Framework, WrongReferenceIsCaught) {
  SmoothSimulation sim = identity_sim(random_shared(6));
  sim.reference = [](const SmoothConfig& s) { return s; };
  const PreservationReport r = check_preserving(sim, {5, 1, 1, 1e-9});
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.max_deviation, 1e-9);
}

TEST(Framework, ReportJsonIsDeterministicAndComplete) {
  const SmoothSimulation sim = identity_sim(random_shared(7));
  const std::string a = to_json(check_preserving(sim, {4, 2, 9, 1e-9}));
  const std::string b = to_json(check_preserving(sim, {4, 2, 9, 1e-9}));
  EXPECT_EQ(a, b);
  const auto j = nlohmann::json::parse(a);
  EXPECT_EQ(j["seed"], 9);
  ASSERT_EQ(j["trials"].size(), 4u);
  for (const auto& t : j["trials"]) {
    EXPECT_TRUE(t.contains("seed"));
    EXPECT_TRUE(t.contains("cycle_length"));
    EXPECT_TRUE(t.contains("max_deviation"));
    EXPECT_TRUE(t["pass"].get<bool>());
  }
  EXPECT_NE(a, to_json(check_preserving(sim, {4, 2, 10, 1e-9})));
}
