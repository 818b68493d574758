// SPDX-License-Identifier: Apache-2.0
#include "smoothtm/utm.hpp"

#include <algorithm>
#include <numeric>
#include <regex>
#include <string>

#include "smoothtm/errors.hpp"
#include "smoothtm/machine_io.hpp"

namespace smoothtm {

// ---------------------------------------------------------------- codes

UncertainCode::UncertainCode(FiniteSet states, FiniteSet alphabet, std::size_t blank)
    : states_(std::move(states)), alphabet_(std::move(alphabet)), blank_(blank) {
  if (blank_ >= alphabet_.size()) throw ConstructionError("blank symbol is not in the alphabet");
  const std::size_t ns = alphabet_.size();
  for (std::size_t q = 0; q < states_.size(); ++q)
    for (std::size_t s = 0; s < ns; ++s) {
      target_.push_back(Dist::point(states_, q));
      write_.push_back(Dist::point(alphabet_, s));
      move_.push_back(Dist::point(directions(), move_index(Move::Stay)));
    }
}

UncertainCode UncertainCode::from_machine(const Machine& m) {
  if (m.num_tapes() != 1) throw MismatchError("codes describe single-tape machines");
  UncertainCode c(m.states(), m.alphabet(), m.blank());
  for (std::size_t l = 0; l < m.num_local(); ++l)
    c.set(l, Dist::point(m.states(), m.next_state(l)), Dist::point(m.alphabet(), m.write(l, 0)),
          Dist::point(directions(), move_index(m.move(l, 0))));
  return c;
}

void UncertainCode::set(std::size_t pair, Dist target, Dist write, Dist move) {
  if (pair >= size()) throw MismatchError("code entry out of range");
  if (!(target.base() == states_) || !(write.base() == alphabet_) || !(move.base() == directions()))
    throw MismatchError("code entry does not match the code's state set, alphabet or directions");
  target_[pair] = std::move(target);
  write_[pair] = std::move(write);
  move_[pair] = std::move(move);
}

bool UncertainCode::is_classical() const {
  for (std::size_t p = 0; p < size(); ++p)
    if (!target_[p].is_point_mass() || !write_[p].is_point_mass() || !move_[p].is_point_mass()) return false;
  return true;
}

Machine UncertainCode::to_machine() const {
  if (!is_classical()) throw Error("an uncertain code has no underlying machine");
  std::vector<Machine::Transition> table;
  for (std::size_t p = 0; p < size(); ++p)
    table.push_back({*target_[p].point_index(), {*write_[p].point_index()},
                     {move_from_index(*move_[p].point_index())}, false});
  return Machine(states_, alphabet_, blank_, 1, table);
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// "a: 0.5, b: 0.5" over `base`; direction labels accept L/S/R and -1/0/+1.
Dist parse_weights(const std::string& body, const FiniteSet& base, bool directions_base, std::size_t line,
                   std::size_t column) {
  std::vector<double> w(base.size(), 0.0);
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t end = body.find(',', start);
    if (end == std::string::npos) end = body.size();
    const std::string item = trim(body.substr(start, end - start));
    if (item.empty()) throw ParseError(line, column, "empty weight entry");
    const auto colon = item.rfind(':');
    if (colon == std::string::npos) throw ParseError(line, column, "expected 'label: weight' in '" + item + "'");
    const std::string label = trim(item.substr(0, colon));
    std::optional<std::size_t> idx = base.find(label);
    if (!idx && directions_base)
      if (auto mv = parse_move(label)) idx = move_index(*mv);
    if (!idx) throw ParseError(line, column, "unknown label '" + label + "'");
    try {
      std::size_t used = 0;
      const std::string num = trim(item.substr(colon + 1));
      w[*idx] += std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(line, column, "bad weight in '" + item + "'");
    }
    start = end + 1;
  }
  try {
    return Dist(base, std::move(w));
  } catch (const ConstructionError& e) {
    throw ParseError(line, column, e.what());
  }
}

}  // namespace

void apply_code_overrides(UncertainCode& code, std::string_view text) {
  static const std::regex re(
      R"(^\s*\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)\s*->\s*\{([^}]*)\}\s*/\s*\{([^}]*)\}\s*/\s*\{([^}]*)\}\s*$)");
  std::size_t line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string raw(text.substr(start, end - start));
    start = end + 1;
    ++line;
    if (const auto c = raw.find("//"); c != std::string::npos) raw.resize(c);
    if (trim(raw).empty()) continue;
    std::smatch m;
    if (!std::regex_match(raw, m, re))
      throw ParseError(line, 1, "expected '(q,s) -> {q': p, ..} / {s': p, ..} / {L|S|R: p, ..}'");
    auto q = code.states().find(m[1].str());
    if (!q) throw ParseError(line, static_cast<std::size_t>(m.position(1)) + 1, "unknown state '" + m[1].str() + "'");
    auto s = code.alphabet().find(m[2].str());
    if (!s) throw ParseError(line, static_cast<std::size_t>(m.position(2)) + 1, "unknown symbol '" + m[2].str() + "'");
    Dist t = parse_weights(m[3].str(), code.states(), false, line, static_cast<std::size_t>(m.position(3)) + 1);
    Dist w = parse_weights(m[4].str(), code.alphabet(), false, line, static_cast<std::size_t>(m.position(4)) + 1);
    Dist d = parse_weights(m[5].str(), directions(), true, line, static_cast<std::size_t>(m.position(5)) + 1);
    code.set(*q * code.alphabet().size() + *s, std::move(t), std::move(w), std::move(d));
  }
}

// ---------------------------------------------------------------- machine

namespace {

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> v(hi - lo);
  std::iota(v.begin(), v.end(), lo);
  return v;
}

std::vector<std::size_t> all_but(std::size_t size, const std::vector<std::size_t>& drop) {
  std::vector<std::size_t> v;
  for (std::size_t s = 0; s < size; ++s)
    if (std::find(drop.begin(), drop.end(), s) == drop.end()) v.push_back(s);
  return v;
}

}  // namespace

Utm build_utm(const FiniteSet& states, const FiniteSet& alphabet, std::size_t blank) {
  if (states.empty()) throw ConstructionError("a UTM needs at least one simulated state");
  if (blank >= alphabet.size()) throw ConstructionError("blank symbol is not in the alphabet");
  const std::size_t nq = states.size();
  const std::size_t ns = alphabet.size();
  std::vector<std::string> labels;
  for (std::size_t s = 0; s < ns; ++s) labels.push_back(alphabet.label(s));
  labels.emplace_back("#");
  for (std::size_t q = 0; q < nq; ++q) labels.push_back("q:" + states.label(q));
  for (const char* d : {"mv:-1", "mv:0", "mv:+1"}) labels.emplace_back(d);

  Utm u;
  u.states = states;
  u.symbols = alphabet;
  u.blank = blank;
  try {
    u.alphabet = FiniteSet::of(labels);
  } catch (const Error& e) {
    throw ConstructionError(std::string("UTM alphabet: ") + e.what());
  }
  u.hash = ns;
  u.state_symbol0 = ns + 1;
  u.move_symbol0 = ns + 1 + nq;
  const std::size_t hash = u.hash, qs0 = u.state_symbol0, mv0 = u.move_symbol0;
  const std::size_t nu = u.alphabet.size();

  auto sm = std::make_shared<SectionMachine>(u.alphabet, blank, 2);
  const FiniteSet qs = FiniteSet::product({states, alphabet});
  const FiniteSet qsd = FiniteSet::product({states, alphabet, directions()});
  const std::size_t wait = sm->add_section("wait", qs);
  const std::size_t scan1 = sm->add_section("scan1", qs);
  const std::size_t scan2 = sm->add_section("scan2", qs);
  const std::size_t load1 = sm->add_section("load1", qs);
  const std::size_t load2 = sm->add_section("load2", states);
  const std::size_t load3 = sm->add_section("load3", qs);
  const std::size_t update = sm->add_section("update", qsd);
  const std::size_t read = sm->add_section("read", states);

  const auto sigma = range(0, ns);
  const auto qsyms = range(qs0, qs0 + nq);
  const auto mvsyms = range(mv0, mv0 + 3);
  auto add = [&](std::size_t src, std::size_t tgt, std::vector<std::size_t> dreads, TractMap map, std::string label,
                 std::vector<std::size_t> contexts = {}) {
    Tract t;
    t.source = src;
    t.target = tgt;
    t.reads = {std::move(dreads), sigma};
    t.map = std::move(map);
    t.label = std::move(label);
    t.contexts = std::move(contexts);
    sm->add_tract(std::move(t));
  };
  auto keep = [](Move d) {
    return [d](std::size_t x, std::span<const std::size_t> r) { return TractImage{x, {r[0], r[1]}, {d, Move::Stay}}; };
  };

  add(read, read, all_but(nu, {hash}), keep(Move::Left), "Σ_U∖{#} × Σ → x,a,b,L,S");
  add(read, scan1, {hash}, [ns](std::size_t x, std::span<const std::size_t> r) {
    return TractImage{x * ns + r[1], {r[0], r[1]}, {Move::Right, Move::Stay}};
  }, "# → (x,b),a,b,R,S");

  for (std::size_t q = 0; q < nq; ++q) {
    std::vector<std::size_t> ctx;
    for (std::size_t s = 0; s < ns; ++s) ctx.push_back(q * ns + s);
    add(scan1, scan2, {qs0 + q}, keep(Move::Right), "{x₁} × Σ → x,a,b,R,S", ctx);
    std::vector<std::size_t> others;
    for (std::size_t t : qsyms)
      if (t != qs0 + q) others.push_back(t);
    if (!others.empty()) add(scan1, wait, others, keep(Move::Right), "Q∖{x₁} × Σ → x,a,b,R,S", ctx);
  }
  for (std::size_t s = 0; s < ns; ++s) {
    std::vector<std::size_t> ctx;
    for (std::size_t q = 0; q < nq; ++q) ctx.push_back(q * ns + s);
    add(scan2, load1, {s}, keep(Move::Right), "{x₂} × Σ → x,a,b,R,S", ctx);
    std::vector<std::size_t> others;
    for (std::size_t t : sigma)
      if (t != s) others.push_back(t);
    if (!others.empty()) add(scan2, wait, others, keep(Move::Right), "Σ∖{x₂} × Σ → x,a,b,R,S", ctx);
  }
  add(wait, wait, all_but(nu, mvsyms), keep(Move::Right), "Σ_U∖{-1,0,1} × Σ → x,a,b,R,S");
  add(wait, scan1, mvsyms, keep(Move::Right), "{-1,0,1} × Σ → x,a,b,R,S");
  add(load1, load2, qsyms, [qs0](std::size_t, std::span<const std::size_t> r) {
    return TractImage{r[0] - qs0, {r[0], r[1]}, {Move::Right, Move::Stay}};
  }, "Q × Σ → a,a,b,R,S");
  add(load2, load3, sigma, [ns](std::size_t x, std::span<const std::size_t> r) {
    return TractImage{x * ns + r[0], {r[0], r[1]}, {Move::Right, Move::Stay}};
  }, "Σ × Σ → (x,a),a,b,R,S");
  add(load3, update, mvsyms, [mv0](std::size_t x, std::span<const std::size_t> r) {
    return TractImage{x * 3 + (r[0] - mv0), {r[0], r[1]}, {Move::Right, Move::Stay}};
  }, "{-1,0,1} × Σ → (x,a),a,b,R,S");
  add(update, update, all_but(nu, {hash}), keep(Move::Right), "Σ_U∖{#} × Σ → x,a,b,R,S");
  add(update, read, {hash}, [ns](std::size_t x, std::span<const std::size_t> r) {
    const std::size_t d = x % 3;
    const std::size_t w = (x / 3) % ns;
    const std::size_t q = x / (3 * ns);
    return TractImage{q, {r[0], w}, {Move::Left, move_from_index(d)}};
  }, "# → x₁,a,x₂,L,x₃");

  u.read_begin = sm->section_offset(read);
  u.machine = std::make_shared<const Machine>(sm->lower());
  u.sections = std::move(sm);
  return u;
}

// ---------------------------------------------------------------- descriptions

std::vector<std::size_t> lexicographic_order(const UncertainCode& code) { return range(0, code.size()); }

namespace {

void check_code(const Utm& u, const UncertainCode& code) {
  if (!(code.states() == u.states) || !(code.alphabet() == u.symbols) || code.blank() != u.blank)
    throw MismatchError("code size does not match the UTM's build parameters (" + std::to_string(code.states().size()) +
                        " states, " + std::to_string(code.alphabet().size()) + " symbols vs " +
                        std::to_string(u.states.size()) + ", " + std::to_string(u.symbols.size()) + ")");
}

Dist lift(const Utm& u, const Dist& d, std::size_t offset) {
  std::vector<double> w(u.alphabet.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) w[offset + i] = d[i];
  return Dist(u.alphabet, std::move(w));
}

std::optional<Dist> lower_to(const Dist& d, const FiniteSet& base, std::size_t offset) {
  std::vector<double> w(base.size(), 0.0);
  double mass = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0.0) continue;
    if (i < offset || i >= offset + base.size()) return std::nullopt;
    w[i - offset] = d[i];
    mass += d[i];
  }
  if (std::abs(mass - 1.0) > kSimplexTol) return std::nullopt;
  return Dist(base, std::move(w));
}

}  // namespace

SmoothTape encode_code(const Utm& u, const UncertainCode& code, const std::vector<std::size_t>& order) {
  check_code(u, code);
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != lexicographic_order(code)) throw MismatchError("tuple order is not a permutation of Q × Σ");
  const std::size_t ns = u.symbols.size();
  std::vector<Dist> cells{Dist::point(u.alphabet, u.hash)};
  for (std::size_t p : order) {
    cells.push_back(Dist::point(u.alphabet, u.state_symbol0 + p / ns));
    cells.push_back(Dist::point(u.alphabet, p % ns));
    cells.push_back(lift(u, code.target(p), u.state_symbol0));
    cells.push_back(lift(u, code.write(p), 0));
    cells.push_back(lift(u, code.move(p), u.move_symbol0));
  }
  cells.push_back(Dist::point(u.alphabet, u.hash));
  return SmoothTape(0, std::move(cells), u.alphabet, u.blank);
}

SmoothTape encode_code(const Utm& u, const UncertainCode& code) {
  return encode_code(u, code, lexicographic_order(code));
}

UncertainCode decode_code(const Utm& u, const SmoothTape& tape) {
  const std::size_t ns = u.symbols.size();
  const std::size_t pairs = u.states.size() * ns;
  if (tape.lo() != 0 || tape.hi() != static_cast<std::int64_t>(5 * pairs + 1))
    throw DecodeError("description tape has the wrong extent");
  auto exact = [&](std::int64_t i, std::size_t lo, std::size_t hi) -> std::size_t {
    auto p = tape.at(i).point_index();
    if (!p || *p < lo || *p >= hi) throw DecodeError("description cell " + std::to_string(i) + " is malformed");
    return *p;
  };
  exact(0, u.hash, u.hash + 1);
  exact(static_cast<std::int64_t>(5 * pairs + 1), u.hash, u.hash + 1);
  UncertainCode code(u.states, u.symbols, u.blank);
  std::vector<bool> seen(pairs, false);
  for (std::size_t t = 0; t < pairs; ++t) {
    const auto base = static_cast<std::int64_t>(5 * t + 1);
    const std::size_t q = exact(base, u.state_symbol0, u.state_symbol0 + u.states.size()) - u.state_symbol0;
    const std::size_t s = exact(base + 1, 0, ns);
    const std::size_t p = q * ns + s;
    if (seen[p]) throw DecodeError("description lists a pair twice");
    seen[p] = true;
    auto target = lower_to(tape.at(base + 2), u.states, u.state_symbol0);
    auto write = lower_to(tape.at(base + 3), u.symbols, 0);
    auto move = lower_to(tape.at(base + 4), directions(), u.move_symbol0);
    if (!target || !write || !move) throw DecodeError("description tuple " + std::to_string(t) + " is malformed");
    code.set(p, std::move(*target), std::move(*write), std::move(*move));
  }
  return code;
}

// ---------------------------------------------------------------- semantics

namespace {

void check_input(const UncertainCode& code, const SmoothConfig& s) {
  if (!(s.state.base() == code.states()) || s.tapes.size() != 1 || !(s.tapes[0].alphabet() == code.alphabet()))
    throw MismatchError("configuration does not match the code");
}

struct Marginals {
  Dist state, write, move;
};

// Σ_{q,σ} ⟨q,𝐪⟩⟨σ,𝐲₀⟩ 𝛅ᵢ(q,σ) for the three components.
Marginals code_marginals(const UncertainCode& code, const SmoothConfig& s) {
  const std::size_t ns = code.alphabet().size();
  std::vector<double> q(code.states().size(), 0.0), w(ns, 0.0), d(3, 0.0);
  const Dist& y0 = s.tapes[0].at(0);
  for (std::size_t qq : s.state.support())
    for (std::size_t ss : y0.support()) {
      const std::size_t p = qq * ns + ss;
      const double c = s.state[qq] * y0[ss];
      for (std::size_t i : code.target(p).support()) q[i] += c * code.target(p)[i];
      for (std::size_t i : code.write(p).support()) w[i] += c * code.write(p)[i];
      for (std::size_t i : code.move(p).support()) d[i] += c * code.move(p)[i];
    }
  return {Dist::normalized(code.states(), std::move(q)), Dist::normalized(code.alphabet(), std::move(w)),
          Dist::normalized(directions(), std::move(d))};
}

}  // namespace

SmoothConfig utm_cycle_semantics(const UncertainCode& code, const SmoothConfig& s) {
  check_input(code, s);
  Marginals m = code_marginals(code, s);
  return SmoothConfig{std::move(m.state), {tape_update(s.tapes[0], m.write, m.move)}};
}

SmoothConfig utm_encode(const Utm& u, const SmoothTape& description, const SmoothConfig& s) {
  if (!(s.state.base() == u.states) || s.tapes.size() != 1 || !(s.tapes[0].alphabet() == u.symbols))
    throw MismatchError("configuration does not match the UTM's build parameters");
  if (!(description.alphabet() == u.alphabet)) throw MismatchError("description tape is not over the UTM alphabet");
  std::vector<double> q(u.machine->states().size(), 0.0);
  for (std::size_t i = 0; i < u.states.size(); ++i) q[u.read_begin + i] = s.state[i];
  std::vector<Dist> cells;
  for (const Dist& c : s.tapes[0].cells()) cells.push_back(lift(u, c, 0));
  return SmoothConfig{Dist(u.machine->states(), std::move(q)),
                      {description, SmoothTape(s.tapes[0].lo(), std::move(cells), u.alphabet, u.blank)}};
}

namespace {

bool in_read(const Utm& u, std::size_t state) {
  return state >= u.read_begin && state < u.read_begin + u.states.size();
}

}  // namespace

SmoothConfig utm_decode(const Utm& u, const SmoothConfig& s) {
  if (s.tapes.size() != 2) throw DecodeError("utm_decode: expected two tapes");
  std::vector<double> q(u.states.size(), 0.0);
  for (std::size_t i : s.state.support()) {
    if (!in_read(u, i)) throw DecodeError("utm_decode: state is not in section read");
    q[i - u.read_begin] = s.state[i];
  }
  std::vector<Dist> cells;
  for (const Dist& c : s.tapes[1].cells()) {
    auto d = lower_to(c, u.symbols, 0);
    if (!d) throw DecodeError("utm_decode: working tape carries non-Σ symbols");
    cells.push_back(std::move(*d));
  }
  return SmoothConfig{Dist(u.states, std::move(q)), {SmoothTape(s.tapes[1].lo(), std::move(cells), u.symbols, u.blank)}};
}

Membership utm_classify(const Utm& u, const SmoothTape& description, const SmoothConfig& s) {
  bool any = false, all = true;
  for (std::size_t i : s.state.support()) {
    if (in_read(u, i)) any = true;
    else all = false;
  }
  if (!any) return Membership::Outside;
  const SmoothTape& d = s.tapes.at(0);
  if (d.at(0)[u.hash] == 0.0) return Membership::Outside;
  bool working_ok = true;
  for (const Dist& c : s.tapes.at(1).cells())
    if (!lower_to(c, u.symbols, 0)) working_ok = false;
  // The code must be intact: same extent and every cell within 1e-9.
  bool code_ok = d.lo() == description.lo() && d.hi() == description.hi();
  for (std::int64_t i = description.lo(); code_ok && i <= description.hi(); ++i)
    code_ok = max_abs_diff(d.at(i), description.at(i)) <= 1e-9;
  if (all && working_ok && code_ok && d.at(0).is_point_mass()) return Membership::Inside;
  return Membership::Mixed;
}

std::size_t utm_cycle_length(std::size_t pairs) { return 10 * pairs + 2; }

GeneratingTriple make_utm_triple(const Utm& u_in, const UncertainCode& code, const std::vector<std::size_t>& order) {
  auto u = std::make_shared<const Utm>(u_in);
  auto desc = std::make_shared<const SmoothTape>(encode_code(*u, code, order));
  GeneratingTriple g;
  g.name = "utm";
  g.machine = u->machine;
  if (code.is_classical()) g.target = std::make_shared<const Machine>(code.to_machine());
  g.smooth_enc = [u, desc](const SmoothConfig& s) { return utm_classify(*u, *desc, s); };
  g.smooth_decode = [u](const SmoothConfig& s) { return utm_decode(*u, s); };
  g.enc = [u, desc](const Configuration& c) {
    return utm_classify(*u, *desc, embed(*u->machine, c)) == Membership::Inside;
  };
  g.decode = [u](const Configuration& c) {
    auto d = as_classical(utm_decode(*u, embed(*u->machine, c)));
    if (!d) throw DecodeError("utm decode: not classical");
    return *d;
  };
  const std::size_t length = utm_cycle_length(code.size());
  g.cycle_bound = [length](const SmoothConfig&) { return length; };
  g.rigid_tapes = {true, false};
  return g;
}

SmoothSimulation make_utm_simulation(const Utm& u_in, const UncertainCode& code_in,
                                     const std::vector<std::size_t>& order, std::size_t radius,
                                     std::optional<std::size_t> max_steps) {
  auto u = std::make_shared<const Utm>(u_in);
  auto code = std::make_shared<const UncertainCode>(code_in);
  auto desc = std::make_shared<const SmoothTape>(encode_code(*u, *code, order));
  GeneratingTriple g = make_utm_triple(*u, *code, order);
  SmoothSimulation sim = make_simulation(
      g,
      [u, radius](Rng& rng) { return random_smooth_config(rng, u->states, u->symbols, u->blank, 1, radius); },
      [u, desc](const SmoothConfig& s) { return utm_encode(*u, *desc, s); }, max_steps);
  sim.reference = [code](const SmoothConfig& s) { return utm_cycle_semantics(*code, s); };
  return sim;
}

// ---------------------------------------------------------------- staged model

Dist staged_write_update(const Dist& read, const std::vector<std::pair<double, Dist>>& tuples) {
  const FiniteSet& base = read.base();
  double x = 1.0;  // weight still on the placeholder X
  std::vector<double> w(base.size(), 0.0);
  for (const auto& [p, write] : tuples) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error("staged_write_update: match probability outside [0, 1]");
    if (!(write.base() == base)) throw MismatchError("staged_write_update: write is not over the read alphabet");
    x *= 1.0 - p;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = (1.0 - p) * w[i] + p * write[i];
  }
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += x * read[i];
  return Dist::normalized(base, std::move(w));
}

SmoothConfig staged_cycle(const UncertainCode& code, const std::vector<std::size_t>& order, const SmoothConfig& s) {
  check_input(code, s);
  Marginals m = code_marginals(code, s);
  const std::size_t ns = code.alphabet().size();
  const Dist& y0 = s.tapes[0].at(0);
  std::vector<std::pair<double, Dist>> tuples;
  for (std::size_t p : order) tuples.emplace_back(s.state[p / ns] * y0[p % ns], code.write(p));
  const Dist write = staged_write_update(y0, tuples);
  return SmoothConfig{std::move(m.state), {tape_update(s.tapes[0], write, m.move)}};
}

StagedInstance staged_instance() {
  const FiniteSet q = FiniteSet::of({"q"});
  const FiniteSet sigma = FiniteSet::of({"_", "A", "B"});
  MachineBuilder b(q, sigma, 0, 1);
  for (const char* s : {"_", "A", "B"}) b.set("q", {s}, "q", {s}, {Move::Stay});
  auto m = std::make_shared<const Machine>(b.build());
  SmoothConfig input{Dist::point(q, 0), {SmoothTape(0, {Dist(sigma, {0.0, 0.5, 0.5})}, sigma, 0)}};
  return {m, input};
}

SmoothSimulation make_staged_simulation(const UncertainCode& code_in, const std::vector<std::size_t>& order,
                                        std::function<SmoothConfig(Rng&)> sample) {
  auto code = std::make_shared<const UncertainCode>(code_in);
  SmoothSimulation sim;
  sim.name = "staged-counterexample";
  sim.sample = std::move(sample);
  sim.encode = [](const SmoothConfig& s) { return s; };
  sim.cycle = [code, order](const SmoothConfig& s) {
    CycleReport r{staged_cycle(*code, order, s), 1, true, {}, {}, {}, true};
    r.simplex_ok = check_simplex(r.next);
    return r;
  };
  sim.decode = [](const SmoothConfig& s) { return s; };
  sim.reference = [code](const SmoothConfig& s) { return utm_cycle_semantics(*code, s); };
  return sim;
}

// ---------------------------------------------------------------- verification

namespace {

std::vector<SmoothConfig> decoded_trajectory(const SmoothSimulation& sim, std::uint64_t seed, std::size_t cycles) {
  Rng rng(seed);
  SmoothConfig enc = sim.encode(sim.sample(rng));
  std::vector<SmoothConfig> out;
  for (std::size_t c = 0; c < cycles; ++c) {
    CycleReport r = sim.cycle(enc);
    if (!r.terminated) throw NonTerminationError(r.steps, "cycle did not reach an encoding");
    out.push_back(sim.decode(r.next));
    enc = std::move(r.next);
  }
  return out;
}

}  // namespace

PreservationReport verify_utm(const UtmVerifyOptions& opt) {
  PreservationReport r;
  r.construction = opt.uncertain_codes ? "utm-uncertain" : "utm";
  r.seed = opt.seed;
  r.tol = opt.tol;
  r.cycles = opt.cycles;
  r.pass = true;
  for (std::size_t i = 0; i < opt.trials; ++i) {
    const std::uint64_t seed = derive_seed(opt.seed, i);
    Rng rng(seed);
    const std::size_t nq = 1 + rng.below(opt.max_states);
    const std::size_t ns = 2 + rng.below(opt.max_symbols - 1);
    const std::size_t radius = rng.below(opt.max_radius + 1);
    const Machine m = random_machine(rng, nq, ns, 1);
    UncertainCode code = UncertainCode::from_machine(m);
    if (opt.uncertain_codes)
      for (std::size_t p = 0; p < code.size(); ++p)
        if (rng.chance(0.5))
          code.set(p, random_mixed_dist(rng, code.states()), random_mixed_dist(rng, code.alphabet()),
                   random_mixed_dist(rng, directions()));
    std::vector<std::size_t> shuffled = lexicographic_order(code);
    for (std::size_t k = shuffled.size(); k > 1; --k) std::swap(shuffled[k - 1], shuffled[rng.below(k)]);
    const std::uint64_t sample_seed = rng.next();
    TrialResult t;
    try {
      const Utm u = build_utm(code.states(), code.alphabet(), code.blank());
      const SmoothSimulation sim = make_utm_simulation(u, code, lexicographic_order(code), radius, opt.max_steps);
      t = run_trial(sim, i, sample_seed, opt.cycles, opt.tol);
      if (t.error.empty()) {
        const SmoothSimulation alt = make_utm_simulation(u, code, shuffled, radius, opt.max_steps);
        const auto a = decoded_trajectory(sim, sample_seed, opt.cycles);
        const auto b = decoded_trajectory(alt, sample_seed, opt.cycles);
        double dev = 0.0;
        for (std::size_t c = 0; c < a.size(); ++c) dev = std::max(dev, max_deviation(a[c], b[c]));
        t.extra.emplace_back("order_deviation", dev);
        if (dev > 1e-12) t.pass = false;
      }
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

PreservationReport verify_staged_counterexample(double tol) {
  const StagedInstance inst = staged_instance();
  const UncertainCode code = UncertainCode::from_machine(*inst.machine);
  const auto order = lexicographic_order(code);
  const SmoothConfig input = inst.input;
  const SmoothSimulation sim = make_staged_simulation(code, order, [input](Rng&) { return input; });
  PreservationReport r;
  r.construction = sim.name;
  r.tol = tol;
  r.cycles = 1;
  TrialResult t = run_trial(sim, 0, 0, 1, tol);
  const SmoothConfig staged = staged_cycle(code, order, input);
  const SmoothConfig direct = utm_cycle_semantics(code, input);
  const FiniteSet& sigma = code.alphabet();
  for (const char* s : {"A", "B"}) {
    t.extra.emplace_back(std::string("staged_") + s, staged.tapes[0].at(0)[sigma.index_of(s)]);
    t.extra.emplace_back(std::string("direct_") + s, direct.tapes[0].at(0)[sigma.index_of(s)]);
  }
  r.pass = t.pass;
  r.max_deviation = t.max_deviation;
  r.trials.push_back(std::move(t));
  return r;
}

}  // namespace smoothtm
