// SPDX-License-Identifier: Apache-2.0
#include "smoothtm/framework.hpp"

#include <algorithm>

#include <json.hpp>

#include "smoothtm/errors.hpp"

namespace smoothtm {

const char* to_string(Membership m) {
  switch (m) {
    case Membership::Inside: return "inside";
    case Membership::Outside: return "outside";
    case Membership::Mixed: return "mixed";
  }
  return "?";
}

bool same_machine(const Machine& a, const Machine& b) {
  if (&a == &b) return true;
  if (!(a.states() == b.states()) || !(a.alphabet() == b.alphabet()) || a.blank() != b.blank() ||
      a.num_tapes() != b.num_tapes())
    return false;
  for (std::size_t l = 0; l < a.num_local(); ++l) {
    if (a.next_state(l) != b.next_state(l) || a.is_fill(l) != b.is_fill(l)) return false;
    for (std::size_t j = 0; j < a.num_tapes(); ++j)
      if (a.write(l, j) != b.write(l, j) || a.move(l, j) != b.move(l, j)) return false;
  }
  return true;
}

GeneratingTriple identity_triple(std::shared_ptr<const Machine> m) {
  GeneratingTriple g;
  g.name = "identity";
  g.machine = m;
  g.target = m;
  g.enc = [](const Configuration&) { return true; };
  g.decode = [](const Configuration& c) { return c; };
  g.smooth_enc = [](const SmoothConfig&) { return Membership::Inside; };
  g.smooth_decode = [](const SmoothConfig& s) { return s; };
  g.cycle_bound = [](const SmoothConfig&) { return std::size_t{1}; };
  return g;
}

GeneratingTriple compose(const GeneratingTriple& g1, const GeneratingTriple& g2) {
  if (!g1.target || !g2.machine || !same_machine(*g1.target, *g2.machine))
    throw MismatchError("compose: the first triple's target is not the second triple's machine");
  GeneratingTriple g;
  g.name = g2.name + " . " + g1.name;
  g.machine = g1.machine;
  g.target = g2.target;
  g.enc = [g1, g2](const Configuration& c) { return g1.enc(c) && g2.enc(g1.decode(c)); };
  g.decode = [g1, g2](const Configuration& c) { return g2.decode(g1.decode(c)); };
  g.smooth_enc = [g1, g2](const SmoothConfig& s) {
    const Membership m1 = g1.smooth_enc(s);
    if (m1 != Membership::Inside) return m1;
    return g2.smooth_enc(g1.smooth_decode(s));
  };
  g.smooth_decode = [g1, g2](const SmoothConfig& s) { return g2.smooth_decode(g1.smooth_decode(s)); };
  g.cycle_bound = [g1, g2](const SmoothConfig& s) {
    // Each outer step is one inner cycle; inner cycles lengthen as tapes grow.
    const std::size_t outer = g2.cycle_bound(g1.smooth_decode(s));
    return outer * g1.cycle_bound(s) * 4;
  };
  return g;
}

CycleReport trace_cycle(const GeneratingTriple& g, const SmoothConfig& s, std::size_t max_steps) {
  CycleReport r{s, 0, false, {}, {}, {}, true};
  SmoothConfig cur = s;
  for (std::size_t t = 1; t <= max_steps; ++t) {
    StepDetail d = smooth_step_detailed(*g.machine, cur);
    r.steps = t;
    for (std::size_t j = 0; j < d.moves.size() && j < g.rigid_tapes.size(); ++j)
      if (g.rigid_tapes[j] && !d.moves[j].is_point_mass() && !r.first_spread_direction) r.first_spread_direction = t;
    if (d.fill_exercised && !r.first_fill) r.first_fill = t;
    if (!check_simplex(d.next)) r.simplex_ok = false;
    const Membership m = g.smooth_enc(d.next);
    if (m == Membership::Inside) {
      r.next = std::move(d.next);
      r.terminated = true;
      return r;
    }
    if (m == Membership::Mixed && !r.first_violation) r.first_violation = t;
    if (d.next == cur) {
      r.next = std::move(d.next);
      return r;
    }
    cur = std::move(d.next);
  }
  r.next = std::move(cur);
  return r;
}

CycleReport run_to_next_encoding(const GeneratingTriple& g, const SmoothConfig& s, std::size_t max_steps) {
  CycleReport r = trace_cycle(g, s, max_steps);
  if (!r.terminated)
    throw NonTerminationError(r.steps, g.name + ": no encoding reached after " + std::to_string(r.steps) +
                                           " steps" + (r.first_fill ? " (stuck transition exercised)" : ""));
  return r;
}

std::pair<Configuration, std::size_t> classical_cycle(const GeneratingTriple& g, const Configuration& c,
                                                      std::size_t max_steps) {
  Configuration cur = c;
  for (std::size_t t = 1; t <= max_steps; ++t) {
    cur = step(*g.machine, cur);
    if (g.enc(cur)) return {cur, t};
  }
  throw NonTerminationError(max_steps, g.name + ": classical cycle did not reach an encoding");
}

WellBehavedReport check_well_behaved(const GeneratingTriple& g, const SmoothConfig& s, std::size_t max_steps) {
  const CycleReport r = trace_cycle(g, s, max_steps);
  WellBehavedReport w;
  w.steps = r.steps;
  std::optional<std::size_t> fail;
  auto note = [&](std::optional<std::size_t> step, const std::string& why) {
    if (step && (!fail || *step < *fail)) {
      fail = step;
      w.reason = why;
    }
  };
  note(r.first_violation, "intermediate configuration carries mass on encodings");
  note(r.first_fill, "stuck transition exercised");
  if (!r.terminated && !fail) {
    fail = r.steps;
    w.reason = "no encoding reached";
  }
  w.failure_step = fail;
  w.pass = !fail.has_value();
  return w;
}

SmoothSimulation make_simulation(const GeneratingTriple& g, std::function<SmoothConfig(Rng&)> sample,
                                 std::function<SmoothConfig(const SmoothConfig&)> encode,
                                 std::optional<std::size_t> max_steps_override) {
  SmoothSimulation sim;
  sim.name = g.name;
  sim.sample = std::move(sample);
  sim.encode = std::move(encode);
  sim.cycle = [g, max_steps_override](const SmoothConfig& s) {
    const std::size_t limit = max_steps_override ? *max_steps_override : 10 * g.cycle_bound(s);
    return trace_cycle(g, s, limit);
  };
  sim.decode = g.smooth_decode;
  auto target = g.target;
  sim.reference = [target](const SmoothConfig& s) { return smooth_step(*target, s); };
  return sim;
}

TrialResult run_trial(const SmoothSimulation& sim, std::size_t index, std::uint64_t seed, std::size_t cycles,
                      double tol) {
  TrialResult t;
  t.index = index;
  t.seed = seed;
  try {
    Rng rng(seed);
    SmoothConfig truth = sim.sample(rng);
    SmoothConfig enc = sim.encode(truth);
    for (std::size_t c = 0; c < cycles; ++c) {
      CycleReport r = sim.cycle(enc);
      t.cycle_lengths.push_back(r.steps);
      if (r.first_violation) t.well_behaved = false;
      if (r.first_spread_direction) t.point_directions = false;
      if (r.first_fill) t.no_fills = false;
      if (!r.simplex_ok) t.simplex_ok = false;
      if (!r.terminated) {
        t.error = "cycle " + std::to_string(c + 1) + " did not reach an encoding: " +
                  (r.first_fill ? "stuck transition exercised at step " + std::to_string(*r.first_fill)
                                : "step limit " + std::to_string(r.steps) + " reached");
        break;
      }
      truth = sim.reference(truth);
      const SmoothConfig decoded = sim.decode(r.next);
      if (!check_simplex(decoded)) t.simplex_ok = false;
      t.max_deviation = std::max(t.max_deviation, max_deviation(decoded, truth));
      enc = std::move(r.next);
    }
  } catch (const std::exception& e) {
    t.error = e.what();
  }
  t.pass = t.error.empty() && t.max_deviation <= tol && t.well_behaved && t.point_directions && t.simplex_ok &&
           t.no_fills;
  return t;
}

PreservationReport check_preserving(const SmoothSimulation& sim, const PreservationOptions& opt) {
  PreservationReport r;
  r.construction = sim.name;
  r.seed = opt.seed;
  r.tol = opt.tol;
  r.cycles = opt.cycles;
  r.pass = true;
  for (std::size_t i = 0; i < opt.trials; ++i) {
    r.trials.push_back(run_trial(sim, i, derive_seed(opt.seed, i), opt.cycles, opt.tol));
    r.pass = r.pass && r.trials.back().pass;
    r.max_deviation = std::max(r.max_deviation, r.trials.back().max_deviation);
  }
  return r;
}

std::string to_json(const PreservationReport& r) {
  using json = nlohmann::ordered_json;
  json o;
  o["construction"] = r.construction;
  o["seed"] = r.seed;
  o["tol"] = r.tol;
  o["cycles"] = r.cycles;
  o["pass"] = r.pass;
  o["max_deviation"] = r.max_deviation;
  json trials = json::array();
  for (const TrialResult& t : r.trials) {
    json j;
    j["trial"] = t.index;
    j["seed"] = t.seed;
    j["cycle_length"] = t.cycle_lengths.empty() ? 0 : t.cycle_lengths.front();
    j["cycle_lengths"] = t.cycle_lengths;
    j["max_deviation"] = t.max_deviation;
    j["well_behaved"] = t.well_behaved;
    j["point_directions"] = t.point_directions;
    j["simplex"] = t.simplex_ok;
    j["no_fills"] = t.no_fills;
    j["pass"] = t.pass;
    for (const auto& [k, v] : t.extra) j[k] = v;
    if (!t.error.empty()) j["error"] = t.error;
    trials.push_back(std::move(j));
  }
  o["trials"] = std::move(trials);
  return o.dump(2) + "\n";
}

}  // namespace smoothtm
