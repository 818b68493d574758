// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <memory>

#include "smoothtm/errors.hpp"
#include "smoothtm/machine_io.hpp"
#include "smoothtm/multitape.hpp"
#include "smoothtm/random.hpp"

using namespace smoothtm;

namespace {

/// Sections: reads and puts per tape, the right and left border passes, then
/// per row an entry, 2n - 1 chain links, a load, n - 1 buffer links, an
/// update, n - j return links and a write-back, plus a seek and j skips
/// between rows, then the final return and the restart.
std::size_t expected_sections(std::size_t n) {
  std::size_t count = n + n;
  count += 1 + (n - 1) + n + 1;  // RW, RC, RM, RBack
  count += 1 + (n - 1) + n + 1;  // LW, LC, LM, LBack
  for (std::size_t j = 1; j <= n; ++j) count += 1 + (2 * n - 1) + 1 + (n - 1) + 1 + (n - j) + 1;
  for (std::size_t j = 1; j < n; ++j) count += 1 + j;
  return count + 2;
}

/// Steps from one encoding to the next, counted pass by pass; L' = L - 1 and
/// R' = R + 1 are the borders after the shift and N' the column count.
std::size_t expected_cycle_length(std::size_t n, std::int64_t left, std::int64_t right) {
  const auto N = static_cast<std::size_t>(right - left + 3);
  const auto R1 = static_cast<std::size_t>(right + 1);
  const auto span = static_cast<std::size_t>(right - left + 3);
  std::size_t t = n + n;                        // read, write
  t += n * static_cast<std::size_t>(right + 1) + 2;  // walk to #R and write it
  t += (n - 1) + n + n;                         // RC, RM, RBack
  t += n * span;                                // walk to #L and write it
  t += (n - 1) + n + n;                         // LC, LM, LBack
  for (std::size_t j = 1; j <= n; ++j) t += 3 * n * N + 2 * n + 3 - 2 * j;
  for (std::size_t j = 1; j < n; ++j) t += n * N + 2 * j;
  return t + n * R1 + n + 1;
}

std::shared_ptr<const Machine> shared_random(Rng& rng, std::size_t q, std::size_t s, std::size_t n) {
  return std::make_shared<const Machine>(random_machine(rng, q, s, n));
}

}  // namespace

TEST(Multitape, SectionCountFollowsTheLayout) {
  Rng rng(1);
  for (std::size_t n = 1; n <= 3; ++n) {
    const CompiledSim sim = compile_multitape(shared_random(rng, 2, 2, n));
    EXPECT_EQ(sim.sections->sections().size(), expected_sections(n)) << "n = " << n;
  }
  EXPECT_EQ(expected_sections(1), 15u);
}

TEST(Multitape, LayoutPositions) {
  EXPECT_EQ(sim_position(1, 0, 0), 0);
  EXPECT_EQ(sim_position(1, 0, -1), -2);
  EXPECT_EQ(sim_position(2, 1, 0), 1);
  EXPECT_EQ(sim_position(3, 2, 2), 8);
  EXPECT_EQ(sim_position(3, 0, -1), -6);
}

TEST(Multitape, CycleLengthMatchesPassCount) {
  EXPECT_EQ(expected_cycle_length(1, -2, 2), 47u);
  Rng rng(2);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 4; ++trial) {
      auto m = shared_random(rng, 2, 3, n);
      const CompiledSim sim = compile_multitape(m);
      const GeneratingTriple g = make_multitape_triple(sim);
      Configuration c = random_configuration(rng, *m, 3);
      Configuration x = sim_encode(sim, c);
      for (int k = 0; k < 3; ++k) {
        const auto layout = sim_layout(sim, embed(*sim.machine, x));
        ASSERT_TRUE(layout.has_value());
        const auto [next, steps] = classical_cycle(g, x, 100000);
        EXPECT_EQ(steps, expected_cycle_length(n, layout->left, layout->right))
            << "n = " << n << " L = " << layout->left << " R = " << layout->right;
        EXPECT_LE(steps, sim_cycle_bound(n, *layout));
        x = next;
      }
    }
  }
}

TEST(Multitape, EncodeDecodeRoundTrips) {
  Rng rng(3);
  for (std::size_t n = 1; n <= 3; ++n) {
    auto m = shared_random(rng, 3, 3, n);
    const CompiledSim sim = compile_multitape(m);
    for (int k = 0; k < 5; ++k) {
      const SmoothConfig s = random_smooth_config(rng, *m, 3);
      const SmoothConfig e = sim_encode(sim, s);
      EXPECT_EQ(sim_classify(sim, e), Membership::Inside);
      EXPECT_LE(max_deviation(sim_decode(sim, e), s), 0.0);
      const Configuration c = random_configuration(rng, *m, 3);
      EXPECT_TRUE(sim_is_encoding(sim, sim_encode(sim, c)));
      EXPECT_EQ(sim_decode(sim, sim_encode(sim, c)), c);
    }
  }
}

TEST(Multitape, NonEncodingsAreRejected) {
  Rng rng(4);
  auto m = shared_random(rng, 2, 2, 1);
  const CompiledSim sim = compile_multitape(m);
  const SmoothConfig blank = blank_smooth_config(*sim.machine, Dist::point(sim.machine->states(), 0));
  EXPECT_NE(sim_classify(sim, blank), Membership::Inside);
  EXPECT_THROW(sim_decode(sim, blank), DecodeError);
}

TEST(Multitape, ClassicalDiagramCommutes) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.below(3);
    auto m = shared_random(rng, 1 + rng.below(4), 2 + rng.below(2), n);
    const CompiledSim sim = compile_multitape(m);
    const GeneratingTriple g = make_multitape_triple(sim);
    Configuration c = random_configuration(rng, *m, 2);
    Configuration x = sim_encode(sim, c);
    for (int k = 0; k < 3; ++k) {
      x = classical_cycle(g, x, 100000).first;
      c = step(*m, c);
      ASSERT_EQ(sim_decode(sim, x), c) << "trial " << trial << " cycle " << k;
    }
  }
}

TEST(Multitape, LoweredMachineMatchesDirectInterpretation) {
  Rng rng(6);
  auto m = shared_random(rng, 2, 2, 2);
  const CompiledSim sim = compile_multitape(m);
  Configuration x = sim_encode(sim, random_configuration(rng, *m, 2));
  for (int k = 0; k < 200; ++k) {
    const Configuration a = step(*sim.machine, x);
    ASSERT_EQ(sim.sections->step_direct(x), a);
    x = a;
  }
}

TEST(Multitape, SmoothVerificationPasses) {
  MultitapeVerifyOptions o;
  o.trials = 6;
  o.seed = 11;
  o.cycles = 2;
  const PreservationReport r = verify_multitape(o);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_deviation, 1e-9);
  for (const auto& t : r.trials) {
    EXPECT_TRUE(t.well_behaved);
    EXPECT_TRUE(t.point_directions);
    EXPECT_TRUE(t.simplex_ok);
    EXPECT_TRUE(t.no_fills);
  }
}

TEST(Multitape, MutationIsDetected) {
  MultitapeVerifyOptions o;
  o.trials = 5;
  o.mutation = SimMutation::EarlyStateUpdate;
  const PreservationReport r = verify_multitape(o);
  EXPECT_FALSE(r.pass);
  for (const auto& t : r.trials) EXPECT_FALSE(t.pass);
}

TEST(Multitape, MetadataAndSerialization) {
  const Machine m = parse_machine("states: q\nalphabet: _ A\ntapes: 2\nq _ _ -> q A _ R L\n");
  const CompiledSim sim = compile_multitape(std::make_shared<const Machine>(m));
  const MetaRecords meta = sim_metadata(sim);
  bool found = false;
  for (const auto& [k, v] : meta)
    if (k == "sections") {
      found = true;
      EXPECT_EQ(v, std::to_string(expected_sections(2)));
    }
  EXPECT_TRUE(found);
  const SectionMachineDoc doc = parse_section_machine(format_section_machine(*sim.sections, meta));
  const Machine lowered = doc.machine.lower();
  ASSERT_EQ(lowered.num_local(), sim.machine->num_local());
  for (std::size_t l = 0; l < lowered.num_local(); ++l) {
    ASSERT_EQ(lowered.next_state(l), sim.machine->next_state(l));
    ASSERT_EQ(lowered.write(l, 0), sim.machine->write(l, 0));
    ASSERT_EQ(lowered.move(l, 0), sim.machine->move(l, 0));
  }
}
