// SPDX-License-Identifier: Apache-2.0
#include "smoothtm/config_io.hpp"

#include <json.hpp>

#include "smoothtm/errors.hpp"

namespace smoothtm {

namespace {

using json = nlohmann::ordered_json;

json dist_json(const Dist& d) {
  json o = json::object();
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] != 0.0) o[d.base().label(i)] = d[i];
  return o;
}

json config_json(const SmoothConfig& s) {
  json o = json::object();
  o["state"] = dist_json(s.state);
  json tapes = json::array();
  for (const SmoothTape& t : s.tapes) {
    json cells = json::array();
    for (const Dist& c : t.cells()) cells.push_back(dist_json(c));
    tapes.push_back(json{{"lo", t.lo()}, {"cells", std::move(cells)}});
  }
  o["tapes"] = std::move(tapes);
  return o;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, col] = line_col(text, byte);
    throw ParseError(line, col, "malformed configuration");
  }
}

Dist parse_dist(const json& j, const FiniteSet& base, const char* what) {
  if (!j.is_object()) throw ParseError(1, 1, std::string(what) + " must be an object of weights");
  std::vector<double> w(base.size(), 0.0);
  for (const auto& [key, value] : j.items()) {
    auto idx = base.find(key);
    if (!idx) throw ParseError(1, 1, std::string("unknown label '") + key + "' in " + what);
    if (!value.is_number()) throw ParseError(1, 1, std::string("weight of '") + key + "' is not a number");
    w[*idx] = value.get<double>();
  }
  try {
    return Dist(base, std::move(w));
  } catch (const ConstructionError& e) {
    throw ParseError(1, 1, std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string format_config(const SmoothConfig& s, const SideRecord& side, bool pretty) {
  json o = config_json(s);
  for (const auto& [k, v] : side) o[k] = v;
  return pretty ? o.dump(2) + "\n" : o.dump();
}

SmoothConfig parse_config(std::string_view text, const FiniteSet& states, const FiniteSet& alphabet,
                          std::size_t blank, std::size_t num_tapes) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("state")) throw ParseError(1, 1, "configuration needs a \"state\" object");
  SmoothConfig s{parse_dist(j["state"], states, "state"), {}};
  if (j.contains("tapes")) {
    const json& tapes = j["tapes"];
    if (!tapes.is_array() || tapes.size() != num_tapes)
      throw ParseError(1, 1, "expected " + std::to_string(num_tapes) + " tapes");
    for (const json& t : tapes) {
      if (!t.is_object() || !t.contains("cells") || !t["cells"].is_array())
        throw ParseError(1, 1, "a tape needs a \"cells\" array");
      std::int64_t lo = 0;
      if (t.contains("lo")) {
        if (!t["lo"].is_number_integer()) throw ParseError(1, 1, "\"lo\" must be an integer");
        lo = t["lo"].get<std::int64_t>();
      }
      std::vector<Dist> cells;
      for (const json& c : t["cells"]) cells.push_back(parse_dist(c, alphabet, "cell"));
      if (cells.empty()) cells.push_back(Dist::point(alphabet, blank));
      s.tapes.emplace_back(lo, std::move(cells), alphabet, blank);
    }
  } else {
    s.tapes.assign(num_tapes, SmoothTape(alphabet, blank));
  }
  return s;
}

SmoothConfig parse_config(std::string_view text, const Machine& m) {
  return parse_config(text, m.states(), m.alphabet(), m.blank(), m.num_tapes());
}

SideRecord parse_side_record(std::string_view text) {
  const json j = parse_json(text);
  SideRecord out;
  if (!j.is_object()) return out;
  for (const auto& [key, value] : j.items())
    if (value.is_number_integer()) out.emplace_back(key, value.get<std::int64_t>());
  return out;
}

std::string format_trace_record(std::size_t step, const SmoothConfig& s, const std::vector<Dist>& moves) {
  json o = config_json(s);
  json rec = json::object();
  rec["step"] = step;
  rec["state"] = std::move(o["state"]);
  rec["tapes"] = std::move(o["tapes"]);
  json dirs = json::array();
  for (const Dist& d : moves) dirs.push_back(dist_json(d));
  rec["directions"] = std::move(dirs);
  return rec.dump();
}

}  // namespace smoothtm
