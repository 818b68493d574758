// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "smoothtm/framework.hpp"
#include "smoothtm/machine.hpp"
#include "smoothtm/section_machine.hpp"

namespace smoothtm {

/// A transition function with uncertainty: Q × Σ → ΔQ × ΔΣ × Δ{L,S,R}.
class UncertainCode {
 public:
  UncertainCode(FiniteSet states, FiniteSet alphabet, std::size_t blank);
  static UncertainCode from_machine(const Machine& m);

  const FiniteSet& states() const noexcept { return states_; }
  const FiniteSet& alphabet() const noexcept { return alphabet_; }
  std::size_t blank() const noexcept { return blank_; }
  std::size_t size() const noexcept { return target_.size(); }

  /// Entries are indexed by q · |Σ| + σ.
  const Dist& target(std::size_t pair) const { return target_.at(pair); }
  const Dist& write(std::size_t pair) const { return write_.at(pair); }
  const Dist& move(std::size_t pair) const { return move_.at(pair); }
  void set(std::size_t pair, Dist target, Dist write, Dist move);

  /// All entries point masses.
  bool is_classical() const;
  /// The machine of a classical code; raises Error otherwise.
  Machine to_machine() const;

  friend bool operator==(const UncertainCode&, const UncertainCode&) = default;

 private:
  FiniteSet states_, alphabet_;
  std::size_t blank_;
  std::vector<Dist> target_, write_, move_;
};

/// Applies override lines `(q,σ) -> {q': p, ..} / {σ': p, ..} / {L: p, ..}`.
/// Lines may be blank or start with `//`. Raises ParseError.
void apply_code_overrides(UncertainCode& code, std::string_view text);

/// The 2-tape pseudo-UTM for machines with states Q and alphabet Σ.
/// Tape 1 holds the description `# (q σ t w d)* #` with its head on the left
/// `#`; tape 2 is M's tape.
struct Utm {
  FiniteSet states;
  FiniteSet symbols;
  std::size_t blank = 0;
  /// Σ_U: Σ (same indices), then #, then one symbol per state, then the three
  /// directions.
  FiniteSet alphabet;
  std::size_t hash = 0;
  std::size_t state_symbol0 = 0;
  std::size_t move_symbol0 = 0;
  std::shared_ptr<const SectionMachine> sections;
  std::shared_ptr<const Machine> machine;
  std::size_t read_begin = 0;
};

Utm build_utm(const FiniteSet& states, const FiniteSet& alphabet, std::size_t blank);

/// Pair indices q · |Σ| + σ in lexicographic order.
std::vector<std::size_t> lexicographic_order(const UncertainCode& code);

/// Description tape for `code`, tuples in the given order.
SmoothTape encode_code(const Utm& u, const UncertainCode& code, const std::vector<std::size_t>& order);
SmoothTape encode_code(const Utm& u, const UncertainCode& code);
/// Inverse of encode_code; raises DecodeError on a malformed tape.
UncertainCode decode_code(const Utm& u, const SmoothTape& tape);

/// The smooth step with δ replaced by the uncertain code: entries are mixed by
/// the weight of (q, σ) under the state and head-cell marginals.
SmoothConfig utm_cycle_semantics(const UncertainCode& code, const SmoothConfig& s);

SmoothConfig utm_encode(const Utm& u, const SmoothTape& description, const SmoothConfig& s);
/// Raises DecodeError unless the state lies in section read and both tapes
/// are in range.
SmoothConfig utm_decode(const Utm& u, const SmoothConfig& s);
Membership utm_classify(const Utm& u, const SmoothTape& description, const SmoothConfig& s);

/// Cycle length of the UTM for a code with `pairs` tuples.
std::size_t utm_cycle_length(std::size_t pairs);

GeneratingTriple make_utm_triple(const Utm& u, const UncertainCode& code, const std::vector<std::size_t>& order);
SmoothSimulation make_utm_simulation(const Utm& u, const UncertainCode& code, const std::vector<std::size_t>& order,
                                     std::size_t radius, std::optional<std::size_t> max_steps = std::nullopt);

/// s₀ = X; s_t = (1 − p_t) s_{t−1} + p_t w_t; finally X ↦ read.
Dist staged_write_update(const Dist& read, const std::vector<std::pair<double, Dist>>& tuples);

/// One cycle of the staged model: state and direction from the code, the
/// write symbol from staged_write_update over the tuples in `order`.
SmoothConfig staged_cycle(const UncertainCode& code, const std::vector<std::size_t>& order, const SmoothConfig& s);

/// The identity machine over {_, A, B} with 0.5A + 0.5B under the head.
struct StagedInstance {
  std::shared_ptr<const Machine> machine;
  SmoothConfig input;
};
StagedInstance staged_instance();

/// The staged model wrapped as a simulation of the identity machine.
SmoothSimulation make_staged_simulation(const UncertainCode& code, const std::vector<std::size_t>& order,
                                        std::function<SmoothConfig(Rng&)> sample);

struct UtmVerifyOptions {
  std::size_t trials = 25;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::size_t cycles = 3;
  std::size_t max_states = 3;
  std::size_t max_symbols = 3;
  std::size_t max_radius = 3;
  bool uncertain_codes = false;
  std::optional<std::size_t> max_steps;
};

/// One random code per trial; also reruns each trial under a shuffled tuple
/// order and requires the decoded outputs to agree within 1e-12.
PreservationReport verify_utm(const UtmVerifyOptions& opt);

/// The staged model against the direct semantics on staged_instance().
PreservationReport verify_staged_counterexample(double tol);

}  // namespace smoothtm
