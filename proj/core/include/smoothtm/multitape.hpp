// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>

#include "smoothtm/framework.hpp"
#include "smoothtm/machine.hpp"
#include "smoothtm/machine_io.hpp"
#include "smoothtm/section_machine.hpp"

namespace smoothtm {

/// Deliberate construction bugs used to show the verifier is not vacuous.
enum class SimMutation {
  None,
  /// The last write tract jumps straight back to the read section with the
  /// next state, skipping the border shifts and the row sweeps.
  EarlyStateUpdate,
};

/// A single-tape machine simulating an n-tape machine M.
///
/// Tape layout, in columns of n cells (cell j of a column belongs to tape j):
///
///   #L | data L .. -1 | #0 | data 0 .. R | #R
///
/// with L <= -2 <= 2 <= R. M's index i sits in column i (i >= 0) or i - 1
/// (i < 0); the head rests on tape 1's index 0. Between encodings the machine
/// reads the n symbols under M's heads, writes M's symbols, shifts both
/// borders out by one column and then sweeps each row once, replacing every
/// cell by the one its tape's direction selects.
struct CompiledSim {
  std::shared_ptr<const Machine> source;
  std::shared_ptr<const SectionMachine> sections;
  std::shared_ptr<const Machine> machine;
  FiniteSet alphabet;
  std::size_t mark_left = 0, mark_zero = 0, mark_right = 0;
  /// Lowered state indices [read_begin, read_begin + |Q|) form section R1.
  std::size_t read_begin = 0;
  SimMutation mutation = SimMutation::None;
};

CompiledSim compile_multitape(std::shared_ptr<const Machine> m, SimMutation mutation = SimMutation::None);

/// Physical offset of tape j's (0-based) index i relative to the head.
std::int64_t sim_position(std::size_t num_tapes, std::size_t tape, std::int64_t index);

/// Encoding bounds: L = min(-2, lo), R = max(2, hi) over all tapes.
struct SimLayout {
  std::int64_t left = -2;
  std::int64_t right = 2;
};

SmoothConfig sim_encode(const CompiledSim& sim, const SmoothConfig& target);
Configuration sim_encode(const CompiledSim& sim, const Configuration& target);

/// The layout of an encoding, or nullopt when `s` is not one.
std::optional<SimLayout> sim_layout(const CompiledSim& sim, const SmoothConfig& s);

/// Raise DecodeError unless the input is an encoding.
SmoothConfig sim_decode(const CompiledSim& sim, const SmoothConfig& s);
Configuration sim_decode(const CompiledSim& sim, const Configuration& c);

Membership sim_classify(const CompiledSim& sim, const SmoothConfig& s);
bool sim_is_encoding(const CompiledSim& sim, const Configuration& c);

/// An upper bound on the cycle length from an encoding with this layout.
std::size_t sim_cycle_bound(std::size_t num_tapes, const SimLayout& layout);

GeneratingTriple make_multitape_triple(const CompiledSim& sim);

/// Random smooth configurations of M with window radius `radius`, encoded.
SmoothSimulation make_multitape_simulation(const CompiledSim& sim, std::size_t radius,
                                           std::optional<std::size_t> max_steps = std::nullopt);

/// Section and state counts plus the cycle-length parameters.
MetaRecords sim_metadata(const CompiledSim& sim);

struct MultitapeVerifyOptions {
  std::size_t trials = 25;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::size_t cycles = 3;
  std::size_t max_states = 4;
  std::size_t max_symbols = 3;
  std::size_t max_tapes = 3;
  std::size_t max_radius = 3;
  SimMutation mutation = SimMutation::None;
  std::optional<std::size_t> max_steps;
};

/// One random machine per trial, compiled and checked for `cycles`
/// consecutive cycles.
PreservationReport verify_multitape(const MultitapeVerifyOptions& opt);

}  // namespace smoothtm
