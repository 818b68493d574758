// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "smoothtm/config_io.hpp"
#include "smoothtm/errors.hpp"
#include "smoothtm/framework.hpp"
#include "smoothtm/machine_io.hpp"
#include "smoothtm/multitape.hpp"
#include "smoothtm/smooth_step.hpp"
#include "smoothtm/utm.hpp"

namespace smoothtm::cli {
namespace {

/// SMOOTHTM_MAX_STEPS, when set to a positive integer.
std::optional<std::size_t> env_max_steps() {
  const char* v = std::getenv("SMOOTHTM_MAX_STEPS");
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0' || n == 0) throw Error("SMOOTHTM_MAX_STEPS must be a positive integer");
  return static_cast<std::size_t>(n);
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_text_file(path, text);
}

std::string with_file(const std::string& path, const std::string& what) { return path + ": " + what; }

Machine load_machine(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_machine(text);
  } catch (const ParseError& e) {
    throw Error(with_file(path, e.what()));
  }
}

SmoothConfig load_config(const std::string& path, const Machine& m) {
  const std::string text = read_text_file(path);
  try {
    return parse_config(text, m);
  } catch (const ParseError& e) {
    throw Error(with_file(path, e.what()));
  }
}

std::string format_weight(double w) {
  std::ostringstream os;
  os << std::setprecision(12) << w;
  return os.str();
}

void print_summary(std::ostream& out, const PreservationReport& r) {
  std::size_t passed = 0;
  for (const auto& t : r.trials) passed += t.pass ? 1 : 0;
  out << r.construction << ": " << passed << "/" << r.trials.size() << " trials pass, max deviation "
      << format_weight(r.max_deviation) << ", seed " << r.seed << "\n";
  for (const auto& t : r.trials)
    if (!t.pass) {
      out << "  trial " << t.index << " (seed " << t.seed << ") failed";
      if (!t.error.empty()) out << ": " << t.error;
      out << "\n";
    }
}

struct RunArgs {
  std::string machine, config, trace, output;
  std::size_t steps = 1;
  bool smooth = false;
};

int cmd_run(const RunArgs& a, std::ostream& out) {
  const Machine m = load_machine(a.machine);
  SmoothConfig s = load_config(a.config, m);
  std::string trace;
  if (a.smooth) {
    if (!a.trace.empty()) trace += format_trace_record(0, s, {}) + "\n";
    for (std::size_t t = 1; t <= a.steps; ++t) {
      StepDetail d = smooth_step_detailed(m, s);
      s = std::move(d.next);
      if (!a.trace.empty()) trace += format_trace_record(t, s, d.moves) + "\n";
    }
  } else {
    auto c = as_classical(s);
    if (!c) throw Error(with_file(a.config, "classical mode needs point-mass cells; pass --smooth"));
    if (!a.trace.empty()) trace += format_trace_record(0, s, {}) + "\n";
    for (std::size_t t = 1; t <= a.steps; ++t) {
      const std::size_t l = local_index_of(m, *c);
      std::vector<Dist> moves;
      for (std::size_t j = 0; j < m.num_tapes(); ++j)
        moves.push_back(Dist::point(directions(), move_index(m.move(l, j))));
      *c = step(m, *c);
      if (!a.trace.empty()) trace += format_trace_record(t, embed(m, *c), moves) + "\n";
    }
    s = embed(m, *c);
  }
  if (!a.trace.empty()) write_text_file(a.trace, trace);
  emit(out, a.output, format_config(s));
  return kPass;
}

struct CompileArgs {
  std::string machine, output, encode, encoding;
};

int cmd_compile(const CompileArgs& a, std::ostream& out) {
  auto m = std::make_shared<const Machine>(load_machine(a.machine));
  const CompiledSim sim = compile_multitape(m);
  emit(out, a.output, format_section_machine(*sim.sections, sim_metadata(sim)));
  if (!a.encode.empty()) {
    const SmoothConfig target = load_config(a.encode, *m);
    const SmoothConfig enc = sim_encode(sim, target);
    const auto layout = sim_layout(sim, enc);
    if (!layout) throw Error("internal: encoding has no layout");
    const SideRecord side{{"L", layout->left},
                          {"R", layout->right},
                          {"n", static_cast<std::int64_t>(m->num_tapes())}};
    emit(out, a.encoding, format_config(enc, side));
  }
  return kPass;
}

struct VerifyArgs {
  std::string construction = "multitape";
  std::size_t trials = 25;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::size_t cycles = 3;
  bool uncertain = false;
  std::string report;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  PreservationReport r;
  const auto max_steps = env_max_steps();
  if (a.construction == "multitape" || a.construction == "broken-multitape") {
    MultitapeVerifyOptions o;
    o.trials = a.trials;
    o.seed = a.seed;
    o.tol = a.tol;
    o.cycles = a.cycles;
    o.max_steps = max_steps;
    if (a.construction == "broken-multitape") o.mutation = SimMutation::EarlyStateUpdate;
    r = verify_multitape(o);
  } else if (a.construction == "utm") {
    UtmVerifyOptions o;
    o.trials = a.trials;
    o.seed = a.seed;
    o.tol = a.tol;
    o.cycles = a.cycles;
    o.uncertain_codes = a.uncertain;
    o.max_steps = max_steps;
    r = verify_utm(o);
  } else if (a.construction == "staged-counterexample") {
    r = verify_staged_counterexample(a.tol);
    for (const auto& t : r.trials) {
      auto get = [&](const std::string& k) {
        for (const auto& [name, v] : t.extra)
          if (name == k) return v;
        return 0.0;
      };
      out << "staged: " << format_weight(get("staged_A")) << "A + " << format_weight(get("staged_B"))
          << "B vs direct: " << format_weight(get("direct_A")) << "A + " << format_weight(get("direct_B"))
          << "B\n";
    }
  } else {
    throw CLI::ValidationError("--construction", "unknown construction '" + a.construction + "'");
  }
  print_summary(out, r);
  if (!a.report.empty()) write_text_file(a.report, to_json(r));
  return r.pass ? kPass : kFail;
}

struct UtmArgs {
  std::size_t states = 0;
  std::string alphabet, code, input, overrides;
  std::size_t cycles = 1;
  double tol = 1e-9;
  std::string output;
};

FiniteSet load_alphabet(const std::string& path) {
  std::istringstream is(read_text_file(path));
  std::vector<std::string> labels;
  for (std::string tok; is >> tok;) {
    if (tok.rfind("//", 0) == 0) {
      std::getline(is, tok);
      continue;
    }
    labels.push_back(tok);
  }
  if (labels.empty()) throw Error(with_file(path, "alphabet is empty"));
  return FiniteSet::of(std::move(labels));
}

int cmd_utm(const UtmArgs& a, std::ostream& out) {
  const FiniteSet sigma = load_alphabet(a.alphabet);
  const Machine m = load_machine(a.code);
  if (m.num_tapes() != 1) throw MismatchError(with_file(a.code, "the code must be a 1-tape machine"));
  if (m.states().size() != a.states)
    throw MismatchError("code has " + std::to_string(m.states().size()) + " states, the UTM was built for " +
                        std::to_string(a.states));
  if (!(m.alphabet() == sigma))
    throw MismatchError("code alphabet does not match " + a.alphabet);
  UncertainCode code = UncertainCode::from_machine(m);
  if (!a.overrides.empty()) {
    try {
      apply_code_overrides(code, read_text_file(a.overrides));
    } catch (const ParseError& e) {
      throw Error(with_file(a.overrides, e.what()));
    }
  }
  const Utm u = build_utm(m.states(), sigma, m.blank());
  SmoothConfig s = a.input.empty() ? blank_smooth_config(m, Dist::point(m.states(), 0)) : load_config(a.input, m);
  const auto order = lexicographic_order(code);
  const GeneratingTriple g = make_utm_triple(u, code, order);
  std::size_t limit = 10 * utm_cycle_length(code.size());
  if (const auto env = env_max_steps()) limit = *env;

  SmoothConfig x = utm_encode(u, encode_code(u, code, order), s);
  SmoothConfig reference = s;
  double worst = 0.0;
  for (std::size_t k = 0; k < a.cycles; ++k) {
    CycleReport c = run_to_next_encoding(g, x, limit);
    x = std::move(c.next);
    reference = utm_cycle_semantics(code, reference);
    worst = std::max(worst, max_deviation(utm_decode(u, x), reference));
  }
  emit(out, a.output, format_config(utm_decode(u, x)));
  out << "max deviation vs reference over " << a.cycles << " cycle(s): " << format_weight(worst) << "\n";
  return worst <= a.tol ? kPass : kFail;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Smooth relaxation of Turing machines", "smoothtm"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a machine for a number of steps");
  run_cmd->add_option("machine", run.machine, "Machine file")->required();
  run_cmd->add_option("config", run.config, "Configuration file")->required();
  run_cmd->add_option("--steps", run.steps, "Number of steps")->capture_default_str();
  run_cmd->add_flag("--smooth", run.smooth, "Use the smooth step");
  run_cmd->add_option("--trace", run.trace, "Write one line per step to this file");
  run_cmd->add_option("-o,--output", run.output, "Final configuration file (default stdout)");

  CompileArgs compile;
  auto* compile_cmd = app.add_subcommand("compile", "Compile an n-tape machine to a single-tape simulation");
  compile_cmd->add_option("machine", compile.machine, "Machine file")->required();
  compile_cmd->add_option("-o,--output", compile.output, "Section machine file (default stdout)");
  compile_cmd->add_option("--encode", compile.encode, "Configuration of the source machine to encode");
  compile_cmd->add_option("--encoding", compile.encoding, "Encoded configuration file (default stdout)");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check that a construction preserves the smooth relaxation");
  verify_cmd->add_option("--construction", verify.construction)
      ->check(CLI::IsMember({"multitape", "utm", "staged-counterexample", "broken-multitape"}))
      ->capture_default_str();
  verify_cmd->add_option("--trials", verify.trials)->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed)->capture_default_str();
  verify_cmd->add_option("--tol", verify.tol)->capture_default_str();
  verify_cmd->add_option("--cycles", verify.cycles, "Consecutive cycles per trial")->capture_default_str();
  verify_cmd->add_flag("--uncertain-codes", verify.uncertain, "Draw uncertain codes for the UTM");
  verify_cmd->add_option("--report", verify.report, "JSON report file");

  UtmArgs utm;
  auto* utm_cmd = app.add_subcommand("utm", "Run a code on the pseudo-UTM and compare with its semantics");
  utm_cmd->add_option("--states", utm.states, "Number of states of the simulated machine")->required();
  utm_cmd->add_option("--alphabet", utm.alphabet, "File listing the symbols, blank first")->required();
  utm_cmd->add_option("--code", utm.code, "1-tape machine file")->required();
  utm_cmd->add_option("--cycles", utm.cycles)->capture_default_str();
  utm_cmd->add_option("--input", utm.input, "Configuration file (default blank tape, first state)");
  utm_cmd->add_option("--overrides", utm.overrides, "Uncertain-code override lines");
  utm_cmd->add_option("--tol", utm.tol)->capture_default_str();
  utm_cmd->add_option("-o,--output", utm.output, "Decoded configuration file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run, out);
    if (*compile_cmd) return cmd_compile(compile, out);
    if (*verify_cmd) return cmd_verify(verify, out);
    if (*utm_cmd) return cmd_utm(utm, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kUsage;
}

}  // namespace smoothtm::cli
