// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smoothtm/dist.hpp"
#include "smoothtm/machine.hpp"

namespace smoothtm {

/// A tape of symbol distributions in head-centric coordinates. Cells outside
/// the window are the exact blank point mass; canonical windows never end in
/// an exact blank point mass unless the window is the single cell {0}.
class SmoothTape {
 public:
  SmoothTape(FiniteSet alphabet, std::size_t blank);
  SmoothTape(std::int64_t lo, std::vector<Dist> cells, FiniteSet alphabet, std::size_t blank);

  static SmoothTape embed(const Tape& t, const FiniteSet& alphabet);

  std::int64_t lo() const noexcept { return lo_; }
  std::int64_t hi() const noexcept { return lo_ + static_cast<std::int64_t>(cells_.size()) - 1; }
  const Dist& at(std::int64_t i) const;
  const std::vector<Dist>& cells() const noexcept { return cells_; }
  const FiniteSet& alphabet() const noexcept { return blank_dist_.base(); }
  std::size_t blank() const noexcept { return blank_; }
  const Dist& blank_dist() const noexcept { return blank_dist_; }

  /// The classical tape if every cell is a point mass.
  std::optional<Tape> as_classical() const;

  friend bool operator==(const SmoothTape& a, const SmoothTape& b) {
    return a.lo_ == b.lo_ && a.cells_ == b.cells_ && a.blank_ == b.blank_;
  }

 private:
  std::int64_t lo_;
  std::vector<Dist> cells_;
  std::size_t blank_;
  Dist blank_dist_;
};

/// An element of ΔQ × ((ΔΣ)^ℤ)ⁿ with finite non-blank support.
struct SmoothConfig {
  Dist state;
  std::vector<SmoothTape> tapes;

  friend bool operator==(const SmoothConfig&, const SmoothConfig&) = default;
};

SmoothConfig embed(const Machine& m, const Configuration& c);
std::optional<Configuration> as_classical(const SmoothConfig& s);
SmoothConfig blank_smooth_config(const Machine& m, const Dist& state);

/// Max per-coordinate deviation over the state and the union of all tape
/// windows. Throws MismatchError when the shapes are incompatible.
double max_deviation(const SmoothConfig& a, const SmoothConfig& b);

/// Every marginal passes is_simplex().
bool check_simplex(const SmoothConfig& s);

struct StepDetail {
  SmoothConfig next;
  std::vector<Dist> writes;  // Δδ₁₊ⱼ(joint), per tape
  std::vector<Dist> moves;   // 𝐝⁽ʲ⁾, per tape
  /// Some stuck-fill transition received positive weight.
  bool fill_exercised = false;
};

/// The naive-Bayesian smooth step, operator form:
/// 𝐪′ = Δδ₁(𝐪 ⊗ 𝐲₀⁽¹⁾ ⊗ … ⊗ 𝐲₀⁽ⁿ⁾), per-tape writes and directions from the
/// induced operators, and per-cell superpositions Σ_d ⟨d,𝐝⁽ʲ⁾⟩ 𝐲′⁽ʲ⁾ᵢ₊d.
SmoothConfig smooth_step(const Machine& m, const SmoothConfig& s);
StepDetail smooth_step_detailed(const Machine& m, const SmoothConfig& s);

/// The tape part of the step: write at index 0, then Σ_d ⟨d,dir⟩ 𝐲′ᵢ₊d.
SmoothTape tape_update(const SmoothTape& t, const Dist& write, const Dist& dir);

/// Single-tape reference computed from scalar sums over Q × Σ with indicator
/// functions, without the operator machinery. Throws Error for n > 1.
SmoothConfig smooth_step_oracle(const Machine& m, const SmoothConfig& s);

/// ΔΨ⁽ʲ⁾(local ⊗ left ⊗ center ⊗ right) with Ψ⁽ʲ⁾ = ψ ∘ (δ₁₊ₙ₊ⱼ × id);
/// `tape` is zero-based.
Dist psi_update(const Machine& m, std::size_t tape, const Dist& local, const Dist& left, const Dist& center,
                const Dist& right);

/// The joint 𝐪 ⊗ 𝐲₀⁽¹⁾ ⊗ … ⊗ 𝐲₀⁽ⁿ⁾ over m.local_set().
Dist local_joint(const Machine& m, const SmoothConfig& s);

}  // namespace smoothtm
