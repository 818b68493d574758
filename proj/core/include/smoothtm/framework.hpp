// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smoothtm/machine.hpp"
#include "smoothtm/random.hpp"
#include "smoothtm/smooth_step.hpp"

namespace smoothtm {

/// Where a product-form smooth configuration sits relative to ΔEnc: fully
/// inside, carrying no mass on Enc, or neither.
enum class Membership { Inside, Outside, Mixed };

const char* to_string(Membership m);

/// (M, Enc, φ) generating M′, with the smooth counterparts evaluated on
/// marginals.
struct GeneratingTriple {
  std::string name;
  std::shared_ptr<const Machine> machine;
  std::shared_ptr<const Machine> target;

  std::function<bool(const Configuration&)> enc;
  std::function<Configuration(const Configuration&)> decode;

  std::function<Membership(const SmoothConfig&)> smooth_enc;
  /// Δφ on SmoothEnc; raises DecodeError outside it.
  std::function<SmoothConfig(const SmoothConfig&)> smooth_decode;

  /// Upper bound on the cycle length starting from an encoding.
  std::function<std::size_t(const SmoothConfig&)> cycle_bound;

  /// Tapes of M whose head direction must stay a point mass; empty means none.
  std::vector<bool> rigid_tapes;
};

/// M generates itself: Enc is everything and φ the identity.
GeneratingTriple identity_triple(std::shared_ptr<const Machine> m);

/// (M, φ⁻¹(Enc′), φ′ ∘ φ). Raises MismatchError unless g1.target is g2.machine.
GeneratingTriple compose(const GeneratingTriple& g1, const GeneratingTriple& g2);

/// Same states, alphabet, blank, tape count and transition table.
bool same_machine(const Machine& a, const Machine& b);

/// Everything observed while iterating from one encoding to the next.
struct CycleReport {
  SmoothConfig next;
  std::size_t steps = 0;
  bool terminated = false;
  /// First intermediate step whose configuration is Mixed (condition 1).
  std::optional<std::size_t> first_violation;
  /// First step whose direction distribution on some rigid tape is not a
  /// point mass.
  std::optional<std::size_t> first_spread_direction;
  /// First step that put weight on a stuck-fill transition.
  std::optional<std::size_t> first_fill;
  bool simplex_ok = true;
};

/// Iterates smooth_step from an encoding until smooth_enc holds again,
/// recording diagnostics. Stops early (unterminated) at max_steps or on a
/// fixed point outside Enc.
CycleReport trace_cycle(const GeneratingTriple& g, const SmoothConfig& s, std::size_t max_steps);

/// trace_cycle, raising NonTerminationError if Enc is not reached.
CycleReport run_to_next_encoding(const GeneratingTriple& g, const SmoothConfig& s, std::size_t max_steps);

/// Classical overline{step}: the next encoding and the number of steps.
std::pair<Configuration, std::size_t> classical_cycle(const GeneratingTriple& g, const Configuration& c,
                                                      std::size_t max_steps);

struct WellBehavedReport {
  bool pass = false;
  std::size_t steps = 0;
  std::optional<std::size_t> failure_step;
  std::string reason;
};

WellBehavedReport check_well_behaved(const GeneratingTriple& g, const SmoothConfig& s, std::size_t max_steps);

/// The inputs of a commuting-diagram check: a target-side sampler, the
/// encoding, one simulated cycle, the decoder and the reference step.
struct SmoothSimulation {
  std::string name;
  std::function<SmoothConfig(Rng&)> sample;
  std::function<SmoothConfig(const SmoothConfig&)> encode;
  std::function<CycleReport(const SmoothConfig&)> cycle;
  std::function<SmoothConfig(const SmoothConfig&)> decode;
  std::function<SmoothConfig(const SmoothConfig&)> reference;
};

/// Standard harness for a generating triple: cycles run under
/// run-limit max(bound_override, 10 × cycle_bound); reference is smooth_step
/// of the target machine.
SmoothSimulation make_simulation(const GeneratingTriple& g, std::function<SmoothConfig(Rng&)> sample,
                                 std::function<SmoothConfig(const SmoothConfig&)> encode,
                                 std::optional<std::size_t> max_steps_override = std::nullopt);

struct TrialResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> cycle_lengths;
  double max_deviation = 0.0;
  bool well_behaved = true;
  bool point_directions = true;
  bool simplex_ok = true;
  bool no_fills = true;
  /// Construction-specific measurements, reported alongside the rest.
  std::vector<std::pair<std::string, double>> extra;
  bool pass = false;
  std::string error;
};

struct PreservationReport {
  std::string construction;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::size_t cycles = 0;
  std::vector<TrialResult> trials;
  bool pass = false;
  double max_deviation = 0.0;
};

struct PreservationOptions {
  std::size_t trials = 25;
  std::size_t cycles = 1;
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

/// Per trial: x = encode(sample()), then for each cycle compares
/// decode(cycle(x)) with reference(decode(x)) and continues from cycle(x).
PreservationReport check_preserving(const SmoothSimulation& sim, const PreservationOptions& opt);

/// One trial with its own seed; check_preserving calls this per index.
TrialResult run_trial(const SmoothSimulation& sim, std::size_t index, std::uint64_t seed, std::size_t cycles,
                      double tol);

/// JSON report; equal inputs yield byte-identical text.
std::string to_json(const PreservationReport& r);

}  // namespace smoothtm
