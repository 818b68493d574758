// SPDX-License-Identifier: Apache-2.0
#include "smoothtm/machine.hpp"

#include <sstream>

#include "smoothtm/errors.hpp"

namespace smoothtm {

char move_char(Move m) {
  switch (m) {
    case Move::Left: return 'L';
    case Move::Stay: return 'S';
    case Move::Right: return 'R';
  }
  return '?';
}

std::optional<Move> parse_move(std::string_view s) {
  if (s == "L" || s == "-1") return Move::Left;
  if (s == "S" || s == "0") return Move::Stay;
  if (s == "R" || s == "+1" || s == "1") return Move::Right;
  return std::nullopt;
}

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

FiniteSet make_local_set(const FiniteSet& states, const FiniteSet& alphabet, std::size_t n) {
  std::vector<FiniteSet> f{states};
  for (std::size_t j = 0; j < n; ++j) f.push_back(alphabet);
  return FiniteSet::product(std::move(f));
}

}  // namespace

Machine::Machine(FiniteSet states, FiniteSet alphabet, std::size_t blank, std::size_t num_tapes,
                 std::span<const Transition> table)
    : states_(std::move(states)),
      alphabet_(std::move(alphabet)),
      blank_(blank),
      num_tapes_(num_tapes),
      local_(make_local_set(states_, alphabet_, num_tapes)) {
  if (num_tapes_ == 0) throw ConstructionError("a machine needs at least one tape");
  if (states_.empty()) throw ConstructionError("a machine needs at least one state");
  if (blank_ >= alphabet_.size()) throw ConstructionError("blank symbol is not in the alphabet");
  const std::size_t size = states_.size() * ipow(alphabet_.size(), num_tapes_);
  if (table.size() != size)
    throw ConstructionError("transition table has " + std::to_string(table.size()) + " entries, expected " +
                            std::to_string(size));
  next_.resize(size);
  write_.resize(size * num_tapes_);
  move_.resize(size * num_tapes_);
  fill_.resize(size);
  for (std::size_t l = 0; l < size; ++l) {
    const Transition& t = table[l];
    if (t.next >= states_.size()) throw ConstructionError("transition target state out of range");
    if (t.write.size() != num_tapes_ || t.move.size() != num_tapes_)
      throw ConstructionError("transition arity does not match the tape count");
    next_[l] = static_cast<std::uint32_t>(t.next);
    for (std::size_t j = 0; j < num_tapes_; ++j) {
      if (t.write[j] >= alphabet_.size()) throw ConstructionError("write symbol out of range");
      write_[l * num_tapes_ + j] = static_cast<std::uint32_t>(t.write[j]);
      move_[l * num_tapes_ + j] = t.move[j];
    }
    fill_[l] = t.fill ? 1 : 0;
    num_fills_ += t.fill ? 1 : 0;
  }

  state_op_ = LinearOp::from_function_table(local_, states_, next_);
  for (std::size_t j = 0; j < num_tapes_; ++j) {
    std::vector<std::uint32_t> w(size), d(size);
    for (std::size_t l = 0; l < size; ++l) {
      w[l] = write_[l * num_tapes_ + j];
      d[l] = static_cast<std::uint32_t>(move_index(move_[l * num_tapes_ + j]));
    }
    write_ops_.push_back(LinearOp::from_function_table(local_, alphabet_, std::move(w)));
    move_ops_.push_back(LinearOp::from_function_table(local_, directions(), std::move(d)));
  }
}

std::size_t Machine::symbol_vector_index(std::span<const std::size_t> symbols) const {
  if (symbols.size() != num_tapes_) throw MismatchError("symbol vector arity mismatch");
  std::size_t idx = 0;
  for (std::size_t s : symbols) {
    if (s >= alphabet_.size()) throw MismatchError("symbol out of range");
    idx = idx * alphabet_.size() + s;
  }
  return idx;
}

std::size_t Machine::local_index(std::size_t state, std::span<const std::size_t> symbols) const {
  if (state >= states_.size()) throw MismatchError("state out of range");
  return state * ipow(alphabet_.size(), num_tapes_) + symbol_vector_index(symbols);
}

Machine::Transition Machine::transition(std::size_t local) const {
  Transition t;
  t.next = next_.at(local);
  for (std::size_t j = 0; j < num_tapes_; ++j) {
    t.write.push_back(write(local, j));
    t.move.push_back(move(local, j));
  }
  t.fill = is_fill(local);
  return t;
}

MachineBuilder::MachineBuilder(FiniteSet states, FiniteSet alphabet, std::size_t blank, std::size_t num_tapes)
    : states_(std::move(states)), alphabet_(std::move(alphabet)), blank_(blank), num_tapes_(num_tapes) {
  const std::size_t size = states_.size() * ipow(alphabet_.size(), num_tapes_);
  table_.resize(size);
  defined_.assign(size, 0);
}

std::size_t MachineBuilder::local_index(std::size_t state, std::span<const std::size_t> read) const {
  if (read.size() != num_tapes_) throw MismatchError("read arity does not match the tape count");
  if (state >= states_.size()) throw MismatchError("state out of range");
  std::size_t idx = state;
  for (std::size_t s : read) {
    if (s >= alphabet_.size()) throw MismatchError("symbol out of range");
    idx = idx * alphabet_.size() + s;
  }
  return idx;
}

MachineBuilder& MachineBuilder::set(std::size_t state, std::span<const std::size_t> read, Machine::Transition t) {
  const std::size_t l = local_index(state, read);
  if (defined_[l]) throw ConstructionError("transition for '" + states_.label(state) + "' defined twice");
  table_[l] = std::move(t);
  defined_[l] = 1;
  return *this;
}

MachineBuilder& MachineBuilder::set(const std::string& state, const std::vector<std::string>& read,
                                    const std::string& next, const std::vector<std::string>& write,
                                    const std::vector<Move>& move) {
  std::vector<std::size_t> r;
  for (const auto& s : read) r.push_back(alphabet_.index_of(s));
  Machine::Transition t;
  t.next = states_.index_of(next);
  for (const auto& s : write) t.write.push_back(alphabet_.index_of(s));
  t.move = move;
  return set(states_.index_of(state), r, std::move(t));
}

Machine::Transition stuck_transition(const FiniteSet& alphabet, std::size_t num_tapes, std::size_t num_states,
                                     std::size_t local) {
  (void)num_states;
  Machine::Transition t;
  t.fill = true;
  t.write.resize(num_tapes);
  t.move.assign(num_tapes, Move::Stay);
  std::size_t rest = local;
  for (std::size_t j = num_tapes; j-- > 0;) {
    t.write[j] = rest % alphabet.size();
    rest /= alphabet.size();
  }
  t.next = rest;
  return t;
}

Machine MachineBuilder::build() const {
  for (std::size_t l = 0; l < table_.size(); ++l) {
    if (!defined_[l]) {
      auto local = FiniteSet::product([&] {
        std::vector<FiniteSet> f{states_};
        for (std::size_t j = 0; j < num_tapes_; ++j) f.push_back(alphabet_);
        return f;
      }());
      throw ConstructionError("transition undefined for " + local.label(l));
    }
  }
  return Machine(states_, alphabet_, blank_, num_tapes_, table_);
}

Machine MachineBuilder::build_with_fills() const {
  std::vector<Machine::Transition> table = table_;
  for (std::size_t l = 0; l < table.size(); ++l)
    if (!defined_[l]) table[l] = stuck_transition(alphabet_, num_tapes_, states_.size(), l);
  return Machine(states_, alphabet_, blank_, num_tapes_, table);
}

Tape::Tape(std::size_t blank) : lo_(0), cells_{blank}, blank_(blank) {}

Tape::Tape(std::int64_t lo, std::vector<std::size_t> cells, std::size_t blank)
    : lo_(lo), cells_(std::move(cells)), blank_(blank) {
  canonicalize();
}

std::size_t Tape::at(std::int64_t i) const {
  if (i < lo_ || i > hi()) return blank_;
  return cells_[static_cast<std::size_t>(i - lo_)];
}

void Tape::set(std::int64_t i, std::size_t symbol) {
  if (cells_.empty()) {
    lo_ = i;
    cells_.push_back(blank_);
  }
  while (i < lo_) {
    cells_.insert(cells_.begin(), blank_);
    --lo_;
  }
  while (i > hi()) cells_.push_back(blank_);
  cells_[static_cast<std::size_t>(i - lo_)] = symbol;
  canonicalize();
}

void Tape::canonicalize() {
  std::size_t first = 0;
  while (first < cells_.size() && cells_[first] == blank_) ++first;
  if (first == cells_.size()) {
    lo_ = 0;
    cells_.assign(1, blank_);
    return;
  }
  std::size_t last = cells_.size() - 1;
  while (cells_[last] == blank_) --last;
  cells_ = std::vector<std::size_t>(cells_.begin() + static_cast<std::ptrdiff_t>(first),
                                    cells_.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  lo_ += static_cast<std::int64_t>(first);
}

Configuration blank_configuration(const Machine& m, std::size_t state) {
  Configuration c;
  c.state = state;
  c.tapes.assign(m.num_tapes(), Tape(m.blank()));
  return c;
}

std::size_t local_index_of(const Machine& m, const Configuration& c) {
  if (c.tapes.size() != m.num_tapes()) throw MismatchError("configuration tape count mismatch");
  std::vector<std::size_t> read;
  for (const Tape& t : c.tapes) read.push_back(t.at(0));
  return m.local_index(c.state, read);
}

Configuration step(const Machine& m, const Configuration& c) {
  const std::size_t l = local_index_of(m, c);
  Configuration out;
  out.state = m.next_state(l);
  out.tapes = c.tapes;
  for (std::size_t j = 0; j < m.num_tapes(); ++j) {
    out.tapes[j].set(0, m.write(l, j));
    out.tapes[j].shift(offset(m.move(l, j)));
  }
  return out;
}

Configuration run(const Machine& m, Configuration c, std::size_t steps) {
  for (std::size_t t = 0; t < steps; ++t) c = step(m, c);
  return c;
}

std::string to_string(const Machine& m, const Configuration& c) {
  std::ostringstream os;
  os << m.states().label(c.state);
  for (const Tape& t : c.tapes) {
    os << " |";
    for (std::int64_t i = t.lo(); i <= t.hi(); ++i) {
      os << ' ';
      if (i == 0) os << '[';
      os << m.alphabet().label(t.at(i));
      if (i == 0) os << ']';
    }
  }
  return os.str();
}

}  // namespace smoothtm
