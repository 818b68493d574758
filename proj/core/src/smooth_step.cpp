// SPDX-License-Identifier: Apache-2.0
#include "smoothtm/smooth_step.hpp"

#include <algorithm>
#include <cmath>

#include "smoothtm/errors.hpp"

namespace smoothtm {

SmoothTape::SmoothTape(FiniteSet alphabet, std::size_t blank)
    : lo_(0), blank_(blank), blank_dist_(Dist::point(std::move(alphabet), blank)) {
  cells_.push_back(blank_dist_);
}

SmoothTape::SmoothTape(std::int64_t lo, std::vector<Dist> cells, FiniteSet alphabet, std::size_t blank)
    : lo_(lo), cells_(std::move(cells)), blank_(blank), blank_dist_(Dist::point(std::move(alphabet), blank)) {
  for (const Dist& c : cells_)
    if (!(c.base() == blank_dist_.base())) throw MismatchError("tape cell is not over the tape alphabet");
  auto is_blank = [&](const Dist& d) { return d.weights()[blank_] == 1.0 && d.point_index() == blank_; };
  std::size_t first = 0;
  while (first < cells_.size() && is_blank(cells_[first])) ++first;
  if (first == cells_.size()) {
    lo_ = 0;
    cells_.assign(1, blank_dist_);
    return;
  }
  std::size_t last = cells_.size() - 1;
  while (is_blank(cells_[last])) --last;
  if (first > 0 || last + 1 < cells_.size()) {
    cells_ = std::vector<Dist>(cells_.begin() + static_cast<std::ptrdiff_t>(first),
                               cells_.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    lo_ += static_cast<std::int64_t>(first);
  }
}

SmoothTape SmoothTape::embed(const Tape& t, const FiniteSet& alphabet) {
  std::vector<Dist> cells;
  for (std::size_t s : t.cells()) cells.push_back(Dist::point(alphabet, s));
  return SmoothTape(t.lo(), std::move(cells), alphabet, t.blank());
}

const Dist& SmoothTape::at(std::int64_t i) const {
  if (i < lo_ || i > hi()) return blank_dist_;
  return cells_[static_cast<std::size_t>(i - lo_)];
}

std::optional<Tape> SmoothTape::as_classical() const {
  std::vector<std::size_t> cells;
  for (const Dist& c : cells_) {
    auto p = c.point_index();
    if (!p) return std::nullopt;
    cells.push_back(*p);
  }
  return Tape(lo_, std::move(cells), blank_);
}

SmoothConfig embed(const Machine& m, const Configuration& c) {
  SmoothConfig s{Dist::point(m.states(), c.state), {}};
  for (const Tape& t : c.tapes) s.tapes.push_back(SmoothTape::embed(t, m.alphabet()));
  return s;
}

std::optional<Configuration> as_classical(const SmoothConfig& s) {
  auto q = s.state.point_index();
  if (!q) return std::nullopt;
  Configuration c{*q, {}};
  for (const SmoothTape& t : s.tapes) {
    auto ct = t.as_classical();
    if (!ct) return std::nullopt;
    c.tapes.push_back(std::move(*ct));
  }
  return c;
}

SmoothConfig blank_smooth_config(const Machine& m, const Dist& state) {
  SmoothConfig s{state, {}};
  s.tapes.assign(m.num_tapes(), SmoothTape(m.alphabet(), m.blank()));
  return s;
}

double max_deviation(const SmoothConfig& a, const SmoothConfig& b) {
  if (a.tapes.size() != b.tapes.size()) throw MismatchError("max_deviation: tape count differs");
  double m = max_abs_diff(a.state, b.state);
  for (std::size_t j = 0; j < a.tapes.size(); ++j) {
    const SmoothTape& x = a.tapes[j];
    const SmoothTape& y = b.tapes[j];
    for (std::int64_t i = std::min(x.lo(), y.lo()); i <= std::max(x.hi(), y.hi()); ++i)
      m = std::max(m, max_abs_diff(x.at(i), y.at(i)));
  }
  return m;
}

bool check_simplex(const SmoothConfig& s) {
  if (!is_simplex(s.state.weights())) return false;
  for (const SmoothTape& t : s.tapes)
    for (const Dist& c : t.cells())
      if (!is_simplex(c.weights())) return false;
  return true;
}

namespace {

void check_compatible(const Machine& m, const SmoothConfig& s) {
  if (!(s.state.base() == m.states())) throw MismatchError("smooth configuration state set does not match the machine");
  if (s.tapes.size() != m.num_tapes()) throw MismatchError("smooth configuration tape count does not match the machine");
  for (const SmoothTape& t : s.tapes) {
    if (!(t.alphabet() == m.alphabet())) throw MismatchError("smooth configuration alphabet does not match the machine");
    if (t.blank() != m.blank()) throw MismatchError("smooth configuration blank does not match the machine");
  }
}

// Σ_d ⟨d,𝐝⟩ 𝐲′ᵢ₊d over the grown window.
SmoothTape superpose(const SmoothTape& written, const Dist& dir) {
  const std::int64_t lo = written.lo() - 1;
  const std::int64_t hi = written.hi() + 1;
  std::vector<Dist> cells;
  cells.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t i = lo; i <= hi; ++i) {
    const Dist parts[3] = {written.at(i - 1), written.at(i), written.at(i + 1)};
    cells.push_back(convex_combine(dir, parts));
  }
  return SmoothTape(lo, std::move(cells), written.alphabet(), written.blank());
}

SmoothTape with_cell(const SmoothTape& t, std::int64_t index, const Dist& value) {
  const std::int64_t lo = std::min(t.lo(), index);
  const std::int64_t hi = std::max(t.hi(), index);
  std::vector<Dist> cells;
  cells.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t i = lo; i <= hi; ++i) cells.push_back(i == index ? value : t.at(i));
  return SmoothTape(lo, std::move(cells), t.alphabet(), t.blank());
}

}  // namespace

Dist local_joint(const Machine& m, const SmoothConfig& s) {
  check_compatible(m, s);
  std::vector<Dist> parts{s.state};
  for (const SmoothTape& t : s.tapes) parts.push_back(t.at(0));
  Dist joint = tensor(parts);
  return Dist(m.local_set(), std::vector<double>(joint.weights().begin(), joint.weights().end()));
}

StepDetail smooth_step_detailed(const Machine& m, const SmoothConfig& s) {
  check_compatible(m, s);
  const std::size_t n = m.num_tapes();
  std::vector<const Dist*> factors{&s.state};
  for (const SmoothTape& t : s.tapes) factors.push_back(&t.at(0));

  StepDetail out{SmoothConfig{m.state_op().apply_product(factors), {}}, {}, {}, false};
  for (std::size_t j = 0; j < n; ++j) {
    out.writes.push_back(m.write_op(j).apply_product(factors));
    out.moves.push_back(m.move_op(j).apply_product(factors));
  }

  if (m.has_fills()) {
    std::vector<std::vector<std::size_t>> supports;
    for (const Dist* f : factors) supports.push_back(f->support());
    std::vector<std::size_t> pos(supports.size(), 0);
    const std::size_t sigma = m.alphabet().size();
    while (!out.fill_exercised) {
      std::size_t local = supports[0][pos[0]];
      for (std::size_t k = 1; k < supports.size(); ++k) local = local * sigma + supports[k][pos[k]];
      if (m.is_fill(local)) out.fill_exercised = true;
      std::size_t k = supports.size();
      bool done = false;
      while (k > 0) {
        --k;
        if (++pos[k] < supports[k].size()) break;
        pos[k] = 0;
        if (k == 0) done = true;
      }
      if (done) break;
    }
  }

  for (std::size_t j = 0; j < n; ++j)
    out.next.tapes.push_back(tape_update(s.tapes[j], out.writes[j], out.moves[j]));
  return out;
}

SmoothTape tape_update(const SmoothTape& t, const Dist& write, const Dist& dir) {
  if (!(write.base() == t.alphabet())) throw MismatchError("tape_update: write is not over the tape alphabet");
  if (dir.size() != 3) throw MismatchError("tape_update: direction is not over {L,S,R}");
  return superpose(with_cell(t, 0, write), dir);
}

SmoothConfig smooth_step(const Machine& m, const SmoothConfig& s) { return smooth_step_detailed(m, s).next; }

SmoothConfig smooth_step_oracle(const Machine& m, const SmoothConfig& s) {
  check_compatible(m, s);
  if (m.num_tapes() != 1) throw Error("smooth_step_oracle supports single-tape machines only");
  const std::size_t nq = m.states().size();
  const std::size_t ns = m.alphabet().size();
  const SmoothTape& tape = s.tapes[0];
  const auto q = s.state.weights();
  const auto y0 = tape.at(0).weights();

  // Items 1-3: scalar sums over Q × Σ with indicators.
  std::vector<double> q_next(nq, 0.0), y0_next(ns, 0.0), d(3, 0.0);
  for (std::size_t q0 = 0; q0 < nq; ++q0)
    for (std::size_t qq = 0; qq < nq; ++qq)
      for (std::size_t sg = 0; sg < ns; ++sg) {
        const std::size_t local = qq * ns + sg;
        if (m.next_state(local) == q0) q_next[q0] += q[qq] * y0[sg];
      }
  for (std::size_t d0 = 0; d0 < 3; ++d0)
    for (std::size_t qq = 0; qq < nq; ++qq)
      for (std::size_t sg = 0; sg < ns; ++sg) {
        const std::size_t local = qq * ns + sg;
        if (move_index(m.move(local, 0)) == d0) d[d0] += q[qq] * y0[sg];
      }
  for (std::size_t s0 = 0; s0 < ns; ++s0)
    for (std::size_t qq = 0; qq < nq; ++qq)
      for (std::size_t sg = 0; sg < ns; ++sg) {
        const std::size_t local = qq * ns + sg;
        if (m.write(local, 0) == s0) y0_next[s0] += q[qq] * y0[sg];
      }

  // Item 4, in the index convention of the superposition Σ_d ⟨d,𝐝⟩𝐲′ᵢ₊d:
  // the term for d reads the written cell when i + d = 0 and the old cell otherwise.
  const std::int64_t lo = std::min<std::int64_t>(tape.lo(), 0) - 1;
  const std::int64_t hi = std::max<std::int64_t>(tape.hi(), 0) + 1;
  std::vector<Dist> cells;
  for (std::int64_t i = lo; i <= hi; ++i) {
    std::vector<double> cell(ns, 0.0);
    for (int dd = -1; dd <= 1; ++dd) {
      const double pd = d[static_cast<std::size_t>(dd + 1)];
      const std::int64_t src = i + dd;
      for (std::size_t s0 = 0; s0 < ns; ++s0) {
        const double v = (src == 0) ? y0_next[s0] : tape.at(src).weights()[s0];
        cell[s0] += pd * v;
      }
    }
    cells.emplace_back(m.alphabet(), std::move(cell));
  }
  return SmoothConfig{Dist(m.states(), std::move(q_next)),
                      {SmoothTape(lo, std::move(cells), m.alphabet(), m.blank())}};
}

Dist psi_update(const Machine& m, std::size_t tape, const Dist& local, const Dist& left, const Dist& center,
                const Dist& right) {
  if (tape >= m.num_tapes()) throw MismatchError("psi_update: tape index out of range");
  if (!(local.base() == m.local_set())) throw MismatchError("psi_update: local distribution is not over Q × Σⁿ");
  for (const Dist* c : {&left, &center, &right})
    if (!(c->base() == m.alphabet())) throw MismatchError("psi_update: cell is not over the alphabet");
  const FiniteSet& sigma = m.alphabet();
  const FiniteSet domain = FiniteSet::product({m.local_set(), sigma, sigma, sigma});
  const std::size_t ns = sigma.size();
  auto psi = [&](std::size_t flat) -> std::optional<std::size_t> {
    const std::size_t r = flat % ns;
    const std::size_t c = (flat / ns) % ns;
    const std::size_t l = (flat / (ns * ns)) % ns;
    const std::size_t x = flat / (ns * ns * ns);
    switch (m.move(x, tape)) {
      case Move::Left: return l;
      case Move::Stay: return c;
      case Move::Right: return r;
    }
    return std::nullopt;
  };
  const LinearOp op = induced_op(domain, sigma, psi);
  const Dist parts[4] = {local, left, center, right};
  const Dist joint = tensor(parts);
  return op.apply(Dist(domain, std::vector<double>(joint.weights().begin(), joint.weights().end())));
}

}  // namespace smoothtm
