// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smoothtm/finite_set.hpp"
#include "smoothtm/linear_op.hpp"

namespace smoothtm {

enum class Move : std::int8_t { Left = -1, Stay = 0, Right = 1 };

/// Index of a move in directions(): L=0, S=1, R=2.
inline std::size_t move_index(Move m) { return static_cast<std::size_t>(static_cast<int>(m) + 1); }
inline Move move_from_index(std::size_t i) { return static_cast<Move>(static_cast<int>(i) - 1); }
inline int offset(Move m) { return static_cast<int>(m); }
char move_char(Move m);
std::optional<Move> parse_move(std::string_view s);

/// An n-tape Turing machine (Q, Σ, δ) with a total transition table over
/// Q × Σⁿ. No initial or halting state is stored.
///
/// Local indices enumerate Q × Σⁿ row-major with the state most significant
/// and tape 1 before tape n; this is also the flat order of
/// q ⊗ y₀⁽¹⁾ ⊗ … ⊗ y₀⁽ⁿ⁾.
class Machine {
 public:
  struct Transition {
    std::size_t next = 0;
    std::vector<std::size_t> write;
    std::vector<Move> move;
    /// Placeholder filled in for a pair the construction never reaches.
    bool fill = false;
  };

  Machine(FiniteSet states, FiniteSet alphabet, std::size_t blank, std::size_t num_tapes,
          std::span<const Transition> table);

  const FiniteSet& states() const noexcept { return states_; }
  const FiniteSet& alphabet() const noexcept { return alphabet_; }
  std::size_t blank() const noexcept { return blank_; }
  std::size_t num_tapes() const noexcept { return num_tapes_; }

  /// Q × Σ × … × Σ.
  const FiniteSet& local_set() const noexcept { return local_; }
  std::size_t num_local() const noexcept { return local_.size(); }
  std::size_t local_index(std::size_t state, std::span<const std::size_t> symbols) const;
  std::size_t symbol_vector_index(std::span<const std::size_t> symbols) const;

  std::size_t next_state(std::size_t local) const { return next_[local]; }
  std::size_t write(std::size_t local, std::size_t tape) const { return write_[local * num_tapes_ + tape]; }
  Move move(std::size_t local, std::size_t tape) const { return move_[local * num_tapes_ + tape]; }
  bool is_fill(std::size_t local) const { return fill_[local] != 0; }
  bool has_fills() const noexcept { return num_fills_ > 0; }
  std::size_t num_fills() const noexcept { return num_fills_; }
  Transition transition(std::size_t local) const;

  /// Δδ₁, Δδ₁₊ⱼ and Δδ₁₊ₙ₊ⱼ as operators on R(Q × Σⁿ).
  const LinearOp& state_op() const noexcept { return state_op_; }
  const LinearOp& write_op(std::size_t tape) const { return write_ops_.at(tape); }
  const LinearOp& move_op(std::size_t tape) const { return move_ops_.at(tape); }

 private:
  FiniteSet states_;
  FiniteSet alphabet_;
  std::size_t blank_;
  std::size_t num_tapes_;
  FiniteSet local_;
  std::vector<std::uint32_t> next_;
  std::vector<std::uint32_t> write_;
  std::vector<Move> move_;
  std::vector<std::uint8_t> fill_;
  std::size_t num_fills_ = 0;
  LinearOp state_op_;
  std::vector<LinearOp> write_ops_;
  std::vector<LinearOp> move_ops_;
};

/// Assembles a Machine from labelled transitions.
class MachineBuilder {
 public:
  MachineBuilder(FiniteSet states, FiniteSet alphabet, std::size_t blank, std::size_t num_tapes);

  MachineBuilder& set(std::size_t state, std::span<const std::size_t> read, Machine::Transition t);
  MachineBuilder& set(const std::string& state, const std::vector<std::string>& read, const std::string& next,
                      const std::vector<std::string>& write, const std::vector<Move>& move);
  bool is_set(std::size_t local) const { return defined_[local] != 0; }

  /// Throws ConstructionError naming the first undefined pair.
  Machine build() const;
  /// Completes undefined pairs with flagged stuck transitions.
  Machine build_with_fills() const;

  std::size_t local_index(std::size_t state, std::span<const std::size_t> read) const;

 private:
  FiniteSet states_;
  FiniteSet alphabet_;
  std::size_t blank_;
  std::size_t num_tapes_;
  std::vector<Machine::Transition> table_;
  std::vector<std::uint8_t> defined_;
};

/// The stuck transition for local index `local`: same state, write back, stay.
Machine::Transition stuck_transition(const FiniteSet& alphabet, std::size_t num_tapes, std::size_t num_states,
                                     std::size_t local);

/// A classical tape in head-centric coordinates: the head is always over
/// index 0 and a step reindexes the tape. Cells outside [lo, lo + size) are
/// blank. Canonical windows have non-blank boundary cells, or are {0}.
class Tape {
 public:
  explicit Tape(std::size_t blank = 0);
  Tape(std::int64_t lo, std::vector<std::size_t> cells, std::size_t blank);

  std::int64_t lo() const noexcept { return lo_; }
  std::int64_t hi() const noexcept { return lo_ + static_cast<std::int64_t>(cells_.size()) - 1; }
  std::size_t blank() const noexcept { return blank_; }
  std::size_t at(std::int64_t i) const;
  const std::vector<std::size_t>& cells() const noexcept { return cells_; }

  void set(std::int64_t i, std::size_t symbol);
  /// Reindex so that old cell i becomes cell i - d.
  void shift(int d) {
    lo_ -= d;
    if (cells_.size() == 1 && cells_[0] == blank_) lo_ = 0;
  }

  friend bool operator==(const Tape&, const Tape&) = default;

 private:
  void canonicalize();
  std::int64_t lo_;
  std::vector<std::size_t> cells_;
  std::size_t blank_;
};

struct Configuration {
  std::size_t state = 0;
  std::vector<Tape> tapes;
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

Configuration blank_configuration(const Machine& m, std::size_t state);

/// The classical step: write at index 0 of each tape, then reindex each tape
/// by its direction, (y'ᵢ₊d)ᵢ.
Configuration step(const Machine& m, const Configuration& c);
Configuration run(const Machine& m, Configuration c, std::size_t steps);

/// Local index of (state, symbols under the heads).
std::size_t local_index_of(const Machine& m, const Configuration& c);

std::string to_string(const Machine& m, const Configuration& c);

}  // namespace smoothtm
