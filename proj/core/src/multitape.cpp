// SPDX-License-Identifier: Apache-2.0
#include "smoothtm/multitape.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "smoothtm/errors.hpp"

namespace smoothtm {

namespace {

// Column arithmetic for the layout; every position computation goes through
// these helpers.
std::int64_t column_of(std::int64_t index) { return index >= 0 ? index : index - 1; }
constexpr std::int64_t kZeroColumn = -1;
std::int64_t left_column(std::int64_t left) { return column_of(left) - 1; }
std::int64_t right_column(std::int64_t right) { return right + 1; }
std::int64_t physical(std::size_t n, std::size_t tape, std::int64_t column) {
  return static_cast<std::int64_t>(n) * column + static_cast<std::int64_t>(tape);
}
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

FiniteSet sim_alphabet(const FiniteSet& sigma) {
  std::vector<std::string> labels;
  for (std::size_t s = 0; s < sigma.size(); ++s) labels.push_back(sigma.label(s));
  for (const char* mark : {"#L", "#0", "#R"}) {
    if (sigma.contains(mark)) throw ConstructionError(std::string("alphabet already contains marker ") + mark);
    labels.emplace_back(mark);
  }
  return FiniteSet::of(std::move(labels));
}

FiniteSet power_context(const FiniteSet& head, const FiniteSet& sigma, std::size_t k) {
  if (k == 0) return head;
  std::vector<FiniteSet> f{head};
  for (std::size_t i = 0; i < k; ++i) f.push_back(sigma);
  return FiniteSet::product(std::move(f));
}

class SimBuilder {
 public:
  SimBuilder(const Machine& m, SectionMachine& sm, const FiniteSet& gamma)
      : m_(m), sm_(sm), n_(m.num_tapes()), ns_(m.alphabet().size()) {
    ml_ = ns_;
    m0_ = ns_ + 1;
    mr_ = ns_ + 2;
    (void)gamma;
    for (std::size_t s = 0; s < ns_; ++s) sigma_.push_back(s);
    sigma_zero_ = sigma_;
    sigma_zero_.push_back(m0_);
    x_ = m.local_set();
    x2_ = power_context(x_, m.alphabet(), 2);
    x3_ = power_context(x_, m.alphabet(), 3);
  }

  void build(SimMutation mutation);

 private:
  std::size_t section(const std::string& id, const FiniteSet& ctx) { return sm_.add_section(id, ctx); }
  std::size_t id(const std::string& s) const { return sm_.section_index(s); }

  void tract(const std::string& src, const std::string& tgt, std::vector<std::size_t> reads, TractMap map,
             std::string label) {
    Tract t;
    t.source = id(src);
    t.target = id(tgt);
    t.reads = {std::move(reads)};
    t.map = std::move(map);
    t.label = std::move(label);
    sm_.add_tract(std::move(t));
  }

  // Write back whatever is read, keep the context, move d.
  void pass(const std::string& src, const std::string& tgt, std::vector<std::size_t> reads, Move d) {
    tract(src, tgt, std::move(reads),
          [d](std::size_t c, std::span<const std::size_t> r) { return TractImage{c, {r[0]}, {d}}; },
          src + " pass " + move_char(d));
  }

  // Replace one symbol by another, keep the context, move d.
  void rewrite(const std::string& src, const std::string& tgt, std::size_t read, std::size_t write, Move d) {
    tract(src, tgt, {read}, [write, d](std::size_t c, std::span<const std::size_t>) {
      return TractImage{c, {write}, {d}};
    }, src + " rewrite " + move_char(d));
  }

  std::string row(const char* base, std::size_t j) const { return base + std::to_string(j); }
  std::string row(const char* base, std::size_t j, std::size_t k) const {
    return base + std::to_string(j) + "." + std::to_string(k);
  }
  // A_{j,k}; the last link of the chain is the load section.
  std::string chain(std::size_t j, std::size_t k) const { return k == 2 * n_ ? row("Load", j) : row("A", j, k); }

  void read_and_write(SimMutation mutation);
  void shift_borders();
  void sweep_row(std::size_t j);

  const Machine& m_;
  SectionMachine& sm_;
  std::size_t n_, ns_;
  std::size_t ml_, m0_, mr_;
  std::vector<std::size_t> sigma_, sigma_zero_;
  FiniteSet x_, x2_, x3_;
};

void SimBuilder::build(SimMutation mutation) {
  const FiniteSet& q = m_.states();
  const FiniteSet& sigma = m_.alphabet();
  for (std::size_t k = 1; k <= n_; ++k) section("R" + std::to_string(k), power_context(q, sigma, k - 1));
  for (std::size_t k = 1; k <= n_; ++k) section("Put" + std::to_string(k), x_);
  section("RW", x_);
  for (std::size_t k = 2; k <= n_; ++k) section("RC" + std::to_string(k), x_);
  for (std::size_t k = 1; k <= n_; ++k) section("RM" + std::to_string(k), x_);
  section("RBack", x_);
  section("LW", x_);
  for (std::size_t k = 2; k <= n_; ++k) section("LC" + std::to_string(k), x_);
  for (std::size_t k = 1; k <= n_; ++k) section("LM" + std::to_string(k), x_);
  section("LBack", x_);
  for (std::size_t j = 1; j <= n_; ++j) {
    section(row("E", j), x_);
    for (std::size_t k = 1; k < 2 * n_; ++k) section(row("A", j, k), x2_);
    section(row("Load", j), x2_);
    for (std::size_t k = 1; k < n_; ++k) section(row("B", j, k), x3_);
    section(row("Upd", j), x3_);
    for (std::size_t k = 1; k <= n_ - j; ++k) section(row("EB", j, k), x2_);
    section(row("EW", j), x2_);
    if (j < n_) {
      section(row("Seek", j), x_);
      for (std::size_t k = 1; k <= j; ++k) section(row("Skip", j, k), x_);
    }
  }
  section("Final", x_);
  section("S", x_);

  read_and_write(mutation);
  shift_borders();
  for (std::size_t j = 1; j <= n_; ++j) sweep_row(j);

  // Back to the state section: the head is over tape 1's index 0.
  const Machine* m = &m_;
  tract("S", "R1", sigma_, [m](std::size_t x, std::span<const std::size_t> r) {
    return TractImage{m->next_state(x), {r[0]}, {Move::Stay}};
  }, "state update");
}

void SimBuilder::read_and_write(SimMutation mutation) {
  const std::size_t ns = ns_;
  for (std::size_t k = 1; k <= n_; ++k) {
    const std::string tgt = k < n_ ? "R" + std::to_string(k + 1) : "Put1";
    const Move d = k < n_ ? Move::Right : Move::Stay;
    tract("R" + std::to_string(k), tgt, sigma_, [ns, d](std::size_t c, std::span<const std::size_t> r) {
      return TractImage{c * ns + r[0], {r[0]}, {d}};
    }, "read tape " + std::to_string(k));
  }
  const Machine* m = &m_;
  for (std::size_t k = 1; k <= n_; ++k) {
    const std::size_t tape = n_ - k;  // zero-based tape written by Put_k
    const bool last = k == n_;
    if (last && mutation == SimMutation::EarlyStateUpdate) {
      tract("Put" + std::to_string(k), "R1", sigma_, [m, tape](std::size_t x, std::span<const std::size_t>) {
        return TractImage{m->next_state(x), {m->write(x, tape)}, {Move::Left}};
      }, "write tape 1 (early state update)");
      continue;
    }
    const std::string tgt = last ? "RW" : "Put" + std::to_string(k + 1);
    tract("Put" + std::to_string(k), tgt, sigma_, [m, tape](std::size_t x, std::span<const std::size_t>) {
      return TractImage{x, {m->write(x, tape)}, {Move::Left}};
    }, "write tape " + std::to_string(tape + 1));
  }
}

void SimBuilder::shift_borders() {
  const std::size_t blank = m_.blank();
  // Right border: clear the #R column, rewrite it one column further right.
  pass("RW", "RW", sigma_zero_, Move::Right);
  rewrite("RW", n_ >= 2 ? "RC2" : "RM1", mr_, blank, Move::Right);
  for (std::size_t k = 2; k <= n_; ++k) rewrite("RC" + std::to_string(k), k < n_ ? "RC" + std::to_string(k + 1) : "RM1", mr_, blank, Move::Right);
  for (std::size_t k = 1; k <= n_; ++k)
    rewrite("RM" + std::to_string(k), k < n_ ? "RM" + std::to_string(k + 1) : "RBack", blank, mr_,
            k < n_ ? Move::Right : Move::Left);
  pass("RBack", "RBack", {mr_}, Move::Left);
  pass("RBack", "LW", {blank}, Move::Left);
  // Left border, mirrored.
  pass("LW", "LW", sigma_zero_, Move::Left);
  rewrite("LW", n_ >= 2 ? "LC2" : "LM1", ml_, blank, Move::Left);
  for (std::size_t k = 2; k <= n_; ++k) rewrite("LC" + std::to_string(k), k < n_ ? "LC" + std::to_string(k + 1) : "LM1", ml_, blank, Move::Left);
  for (std::size_t k = 1; k <= n_; ++k)
    rewrite("LM" + std::to_string(k), k < n_ ? "LM" + std::to_string(k + 1) : "LBack", blank, ml_,
            k < n_ ? Move::Left : Move::Right);
  pass("LBack", "LBack", {ml_}, Move::Right);
  pass("LBack", "E1", {blank}, Move::Stay);
}

void SimBuilder::sweep_row(std::size_t j) {
  const std::size_t ns = ns_;
  const std::size_t blank = m_.blank();
  const std::size_t tape = j - 1;
  const Machine* m = &m_;
  // Ψ: the cell the tape's direction selects among (prev, cur, next).
  auto psi = [m, tape](std::size_t x, std::size_t prev, std::size_t cur, std::size_t next) {
    switch (m->move(x, tape)) {
      case Move::Left: return prev;
      case Move::Stay: return cur;
      case Move::Right: return next;
    }
    return cur;
  };

  tract(row("E", j), chain(j, n_ + 1), sigma_, [ns, blank](std::size_t x, std::span<const std::size_t> r) {
    return TractImage{(x * ns + blank) * ns + r[0], {r[0]}, {Move::Right}};
  }, row("start row ", j));

  const std::size_t end_link = 2 * n_ - j + 1;
  for (std::size_t k = 1; k <= 2 * n_; ++k) {
    const std::string a = chain(j, k);
    pass(a, a, {m0_}, Move::Right);
    if (k == end_link) {
      rewrite(a, n_ - j >= 1 ? row("EB", j, 1) : row("EW", j), mr_, mr_, Move::Left);
    }
    if (k < 2 * n_) {
      pass(a, chain(j, k + 1), sigma_, Move::Right);
    } else {
      const std::string tgt = n_ >= 2 ? row("B", j, 1) : row("Upd", j);
      tract(a, tgt, sigma_, [ns](std::size_t c, std::span<const std::size_t> r) {
        return TractImage{c * ns + r[0], {r[0]}, {Move::Left}};
      }, row("load row ", j));
    }
  }
  for (std::size_t k = 1; k < n_; ++k) {
    const std::string b = row("B", j, k);
    pass(b, b, {m0_}, Move::Left);
    pass(b, k + 1 < n_ ? row("B", j, k + 1) : row("Upd", j), sigma_, Move::Left);
  }
  const std::string upd = row("Upd", j);
  pass(upd, upd, {m0_}, Move::Left);
  tract(upd, chain(j, 1), sigma_, [ns, psi](std::size_t c, std::span<const std::size_t> r) {
    (void)r;
    const std::size_t next = c % ns;
    const std::size_t cur = (c / ns) % ns;
    const std::size_t prev = (c / (ns * ns)) % ns;
    const std::size_t x = c / (ns * ns * ns);
    return TractImage{(x * ns + cur) * ns + next, {psi(x, prev, cur, next)}, {Move::Right}};
  }, row("update row ", j));

  for (std::size_t k = 1; k <= n_ - j; ++k)
    pass(row("EB", j, k), k < n_ - j ? row("EB", j, k + 1) : row("EW", j), sigma_, Move::Left);
  const std::string after = j < n_ ? row("Seek", j) : std::string("Final");
  tract(row("EW", j), after, sigma_, [ns, blank, psi](std::size_t c, std::span<const std::size_t>) {
    const std::size_t cur = c % ns;
    const std::size_t prev = (c / ns) % ns;
    const std::size_t x = c / (ns * ns);
    return TractImage{x, {psi(x, prev, cur, blank)}, {Move::Left}};
  }, row("finish row ", j));

  if (j < n_) {
    const std::string seek = row("Seek", j);
    pass(seek, seek, sigma_zero_, Move::Left);
    pass(seek, row("Skip", j, 1), {ml_}, Move::Right);
    for (std::size_t k = 1; k <= j; ++k)
      pass(row("Skip", j, k), k < j ? row("Skip", j, k + 1) : row("E", j + 1), sigma_, Move::Right);
  } else {
    pass("Final", "Final", sigma_, Move::Left);
    pass("Final", "S", {m0_}, Move::Right);
  }
}

// Allowed symbols of a physical position under a layout.
enum class Slot { Blank, Data, Left, Zero, Right };

Slot slot_of(std::size_t n, const SimLayout& lay, std::int64_t p) {
  const std::int64_t c = floor_div(p, static_cast<std::int64_t>(n));
  if (c < left_column(lay.left) || c > right_column(lay.right)) return Slot::Blank;
  if (c == left_column(lay.left)) return Slot::Left;
  if (c == right_column(lay.right)) return Slot::Right;
  if (c == kZeroColumn) return Slot::Zero;
  return Slot::Data;
}

bool allowed(const CompiledSim& sim, Slot s, std::size_t symbol) {
  const std::size_t ns = sim.source->alphabet().size();
  switch (s) {
    case Slot::Blank: return symbol == sim.source->blank();
    case Slot::Data: return symbol < ns;
    case Slot::Left: return symbol == sim.mark_left;
    case Slot::Zero: return symbol == sim.mark_zero;
    case Slot::Right: return symbol == sim.mark_right;
  }
  return false;
}

enum class Fit { All, Some, None };

// How the tape's cell supports fit a layout: entirely, partially, or not at all.
Fit fit_layout(const CompiledSim& sim, const SmoothTape& t, const SimLayout& lay) {
  const std::size_t n = sim.source->num_tapes();
  const std::int64_t lo = std::min(t.lo(), physical(n, 0, left_column(lay.left)));
  const std::int64_t hi = std::max(t.hi(), physical(n, n - 1, right_column(lay.right)));
  bool all = true;
  for (std::int64_t p = lo; p <= hi; ++p) {
    const Slot s = slot_of(n, lay, p);
    bool any_in = false, any_out = false;
    for (std::size_t sym : t.at(p).support()) (allowed(sim, s, sym) ? any_in : any_out) = true;
    if (!any_in) return Fit::None;
    if (any_out) all = false;
  }
  return all ? Fit::All : Fit::Some;
}

// Layouts consistent with where the border markers carry weight.
std::vector<SimLayout> candidate_layouts(const CompiledSim& sim, const SmoothTape& t) {
  const auto n = static_cast<std::int64_t>(sim.source->num_tapes());
  std::vector<std::int64_t> lefts, rights;
  for (std::int64_t p = t.lo(); p <= t.hi(); ++p) {
    if (floor_div(p, n) * n != p) continue;
    const std::int64_t c = p / n;
    if (t.at(p)[sim.mark_left] > 0.0 && c + 2 <= -2) lefts.push_back(c + 2);
    if (t.at(p)[sim.mark_right] > 0.0 && c - 1 >= 2) rights.push_back(c - 1);
  }
  std::vector<SimLayout> out;
  for (std::int64_t l : lefts)
    for (std::int64_t r : rights) out.push_back(SimLayout{l, r});
  return out;
}

bool in_read_section(const CompiledSim& sim, std::size_t state) {
  return state >= sim.read_begin && state < sim.read_begin + sim.source->states().size();
}

}  // namespace

std::int64_t sim_position(std::size_t num_tapes, std::size_t tape, std::int64_t index) {
  return physical(num_tapes, tape, column_of(index));
}

CompiledSim compile_multitape(std::shared_ptr<const Machine> m, SimMutation mutation) {
  if (!m) throw Error("compile_multitape: no machine");
  CompiledSim sim;
  sim.source = m;
  sim.alphabet = sim_alphabet(m->alphabet());
  sim.mark_left = m->alphabet().size();
  sim.mark_zero = sim.mark_left + 1;
  sim.mark_right = sim.mark_left + 2;
  sim.mutation = mutation;
  auto sm = std::make_shared<SectionMachine>(sim.alphabet, m->blank(), 1);
  SimBuilder(*m, *sm, sim.alphabet).build(mutation);
  sim.read_begin = sm->section_offset(sm->section_index("R1"));
  sim.machine = std::make_shared<const Machine>(sm->lower());
  sim.sections = std::move(sm);
  return sim;
}

SmoothConfig sim_encode(const CompiledSim& sim, const SmoothConfig& target) {
  const Machine& m = *sim.source;
  const std::size_t n = m.num_tapes();
  if (!(target.state.base() == m.states()) || target.tapes.size() != n)
    throw MismatchError("sim_encode: configuration does not match the source machine");
  SimLayout lay;
  for (const SmoothTape& t : target.tapes) {
    lay.left = std::min(lay.left, t.lo());
    lay.right = std::max(lay.right, t.hi());
  }
  const std::int64_t lo = physical(n, 0, left_column(lay.left));
  const std::int64_t hi = physical(n, n - 1, right_column(lay.right));
  const Dist blank = Dist::point(sim.alphabet, m.blank());
  std::vector<Dist> cells(static_cast<std::size_t>(hi - lo + 1), blank);
  auto put = [&](std::int64_t p, Dist d) { cells[static_cast<std::size_t>(p - lo)] = std::move(d); };
  for (std::size_t j = 0; j < n; ++j) {
    put(physical(n, j, left_column(lay.left)), Dist::point(sim.alphabet, sim.mark_left));
    put(physical(n, j, kZeroColumn), Dist::point(sim.alphabet, sim.mark_zero));
    put(physical(n, j, right_column(lay.right)), Dist::point(sim.alphabet, sim.mark_right));
    for (std::int64_t i = lay.left; i <= lay.right; ++i) {
      const Dist& c = target.tapes[j].at(i);
      std::vector<double> w(sim.alphabet.size(), 0.0);
      std::copy(c.weights().begin(), c.weights().end(), w.begin());
      put(sim_position(n, j, i), Dist(sim.alphabet, std::move(w)));
    }
  }
  std::vector<double> q(sim.machine->states().size(), 0.0);
  for (std::size_t s = 0; s < m.states().size(); ++s) q[sim.read_begin + s] = target.state[s];
  return SmoothConfig{Dist(sim.machine->states(), std::move(q)),
                      {SmoothTape(lo, std::move(cells), sim.alphabet, m.blank())}};
}

Configuration sim_encode(const CompiledSim& sim, const Configuration& target) {
  const Machine& m = *sim.source;
  const SmoothConfig s = sim_encode(sim, embed(m, target));
  auto c = as_classical(s);
  if (!c) throw Error("sim_encode: classical encoding is not a point mass");
  return *c;
}

std::optional<SimLayout> sim_layout(const CompiledSim& sim, const SmoothConfig& s) {
  if (s.tapes.size() != 1) return std::nullopt;
  for (const SimLayout& lay : candidate_layouts(sim, s.tapes[0]))
    if (fit_layout(sim, s.tapes[0], lay) == Fit::All) return lay;
  return std::nullopt;
}

Membership sim_classify(const CompiledSim& sim, const SmoothConfig& s) {
  bool state_all = true, state_any = false;
  for (std::size_t q : s.state.support()) {
    if (in_read_section(sim, q)) state_any = true;
    else state_all = false;
  }
  if (!state_any) return Membership::Outside;
  bool tape_all = false, tape_any = false;
  for (const SimLayout& lay : candidate_layouts(sim, s.tapes.at(0))) {
    const Fit f = fit_layout(sim, s.tapes[0], lay);
    if (f == Fit::All) tape_all = tape_any = true;
    if (f == Fit::Some) tape_any = true;
  }
  if (!tape_any) return Membership::Outside;
  if (state_all && tape_all) return Membership::Inside;
  return Membership::Mixed;
}

bool sim_is_encoding(const CompiledSim& sim, const Configuration& c) {
  return sim_classify(sim, embed(*sim.machine, c)) == Membership::Inside;
}

SmoothConfig sim_decode(const CompiledSim& sim, const SmoothConfig& s) {
  const Machine& m = *sim.source;
  const std::size_t n = m.num_tapes();
  for (std::size_t q : s.state.support())
    if (!in_read_section(sim, q)) throw DecodeError("sim_decode: state is not in the read section");
  const auto lay = sim_layout(sim, s);
  if (!lay) throw DecodeError("sim_decode: tape is not a valid encoding layout");
  std::vector<double> q(m.states().size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = s.state[sim.read_begin + i];
  SmoothConfig out{Dist(m.states(), std::move(q)), {}};
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Dist> cells;
    for (std::int64_t i = lay->left; i <= lay->right; ++i) {
      const Dist& c = s.tapes[0].at(sim_position(n, j, i));
      cells.emplace_back(m.alphabet(), std::vector<double>(c.weights().begin(), c.weights().begin() +
                                                                                   static_cast<std::ptrdiff_t>(m.alphabet().size())));
    }
    out.tapes.emplace_back(lay->left, std::move(cells), m.alphabet(), m.blank());
  }
  return out;
}

Configuration sim_decode(const CompiledSim& sim, const Configuration& c) {
  auto d = as_classical(sim_decode(sim, embed(*sim.machine, c)));
  if (!d) throw DecodeError("sim_decode: decoded configuration is not classical");
  return *d;
}

std::size_t sim_cycle_bound(std::size_t num_tapes, const SimLayout& layout) {
  const auto n = static_cast<std::size_t>(num_tapes);
  const auto width = static_cast<std::size_t>(layout.right - layout.left + 4);
  return (4 * n * n + 4 * n) * width + 8 * n + 8;
}

GeneratingTriple make_multitape_triple(const CompiledSim& sim_in) {
  auto sim = std::make_shared<const CompiledSim>(sim_in);
  GeneratingTriple g;
  g.name = sim->mutation == SimMutation::None ? "multitape" : "multitape-broken";
  g.machine = sim->machine;
  g.target = sim->source;
  g.enc = [sim](const Configuration& c) { return sim_is_encoding(*sim, c); };
  g.decode = [sim](const Configuration& c) { return sim_decode(*sim, c); };
  g.smooth_enc = [sim](const SmoothConfig& s) { return sim_classify(*sim, s); };
  g.smooth_decode = [sim](const SmoothConfig& s) { return sim_decode(*sim, s); };
  g.cycle_bound = [sim](const SmoothConfig& s) {
    const auto lay = sim_layout(*sim, s);
    SimLayout l = lay.value_or(SimLayout{});
    if (!lay) {
      // Not an encoding: size the bound from the window instead.
      const auto n = static_cast<std::int64_t>(sim->source->num_tapes());
      l.left = std::min<std::int64_t>(-2, floor_div(s.tapes[0].lo(), n));
      l.right = std::max<std::int64_t>(2, floor_div(s.tapes[0].hi(), n));
    }
    return sim_cycle_bound(sim->source->num_tapes(), l);
  };
  g.rigid_tapes = {true};
  return g;
}

SmoothSimulation make_multitape_simulation(const CompiledSim& sim_in, std::size_t radius,
                                           std::optional<std::size_t> max_steps) {
  auto sim = std::make_shared<const CompiledSim>(sim_in);
  const GeneratingTriple g = make_multitape_triple(*sim);
  auto source = sim->source;
  SmoothSimulation s = make_simulation(
      g, [source, radius](Rng& rng) { return random_smooth_config(rng, *source, radius); },
      [sim](const SmoothConfig& x) { return sim_encode(*sim, x); }, max_steps);
  return s;
}

MetaRecords sim_metadata(const CompiledSim& sim) {
  const SectionMachine& sm = *sim.sections;
  MetaRecords meta;
  meta.emplace_back("source_tapes", std::to_string(sim.source->num_tapes()));
  meta.emplace_back("source_states", std::to_string(sim.source->states().size()));
  meta.emplace_back("source_symbols", std::to_string(sim.source->alphabet().size()));
  meta.emplace_back("sections", std::to_string(sm.sections().size()));
  meta.emplace_back("tracts", std::to_string(sm.tracts().size()));
  meta.emplace_back("states", std::to_string(sm.num_states()));
  meta.emplace_back("symbols", std::to_string(sim.alphabet.size()));
  meta.emplace_back("read_section", "R1");
  meta.emplace_back("column_width", std::to_string(sim.source->num_tapes()));
  meta.emplace_back("border_growth_per_cycle", "1 1");
  return meta;
}

PreservationReport verify_multitape(const MultitapeVerifyOptions& opt) {
  PreservationReport r;
  r.construction = opt.mutation == SimMutation::None ? "multitape" : "multitape-broken";
  r.seed = opt.seed;
  r.tol = opt.tol;
  r.cycles = opt.cycles;
  r.pass = true;
  for (std::size_t i = 0; i < opt.trials; ++i) {
    const std::uint64_t seed = derive_seed(opt.seed, i);
    Rng rng(seed);
    const std::size_t n = 1 + rng.below(opt.max_tapes);
    const std::size_t nq = 1 + rng.below(opt.max_states);
    const std::size_t ns = 2 + rng.below(opt.max_symbols - 1);
    const std::size_t radius = rng.below(opt.max_radius + 1);
    auto m = std::make_shared<const Machine>(random_machine(rng, nq, ns, n));
    TrialResult t;
    try {
      const CompiledSim sim = compile_multitape(m, opt.mutation);
      const SmoothSimulation s = make_multitape_simulation(sim, radius, opt.max_steps);
      t = run_trial(s, i, rng.next(), opt.cycles, opt.tol);
    } catch (const std::exception& e) {
      t.index = i;
      t.error = e.what();
      t.pass = false;
    }
    t.seed = seed;
    r.pass = r.pass && t.pass;
    r.max_deviation = std::max(r.max_deviation, t.max_deviation);
    r.trials.push_back(std::move(t));
  }
  return r;
}

}  // namespace smoothtm
