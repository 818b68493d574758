// SPDX-License-Identifier: Apache-2.0
#include "smoothtm/machine_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "smoothtm/errors.hpp"

namespace smoothtm {

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    if (line.substr(i, 2) == "//") break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

FiniteSet labels_to_set(const std::vector<Token>& toks, std::size_t first, std::size_t line) {
  std::vector<std::string> labels;
  for (std::size_t k = first; k < toks.size(); ++k) labels.push_back(toks[k].text);
  if (labels.empty()) throw ParseError(line, toks[0].column, "expected at least one label");
  try {
    return FiniteSet::of(std::move(labels));
  } catch (const Error& e) {
    throw ParseError(line, toks[first].column, e.what());
  }
}

std::size_t lookup(const FiniteSet& set, const Token& t, std::size_t line, const char* what) {
  auto idx = set.find(t.text);
  if (!idx) throw ParseError(line, t.column, std::string("unknown ") + what + " '" + t.text + "'");
  return *idx;
}

Move lookup_move(const Token& t, std::size_t line) {
  auto mv = parse_move(t.text);
  if (!mv) throw ParseError(line, t.column, "unknown direction '" + t.text + "'");
  return *mv;
}

std::string escape_label(std::string s) {
  for (char& c : s) {
    if (c == '(') c = '[';
    else if (c == ')') c = ']';
    else if (c == ',') c = ';';
  }
  return s;
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

Machine parse_machine(std::string_view text) {
  std::optional<FiniteSet> states, alphabet;
  std::optional<std::size_t> tapes;
  std::optional<MachineBuilder> builder;
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::size_t line = ln + 1;
    const auto toks = tokenize(lines[ln]);
    if (toks.empty()) continue;
    const std::string& head = toks[0].text;
    if (head == "states:" || head == "alphabet:" || head == "tapes:") {
      if (builder) throw ParseError(line, 1, "header after the first transition");
      if (head == "states:") {
        if (states) throw ParseError(line, 1, "duplicate states header");
        states = labels_to_set(toks, 1, line);
      } else if (head == "alphabet:") {
        if (alphabet) throw ParseError(line, 1, "duplicate alphabet header");
        alphabet = labels_to_set(toks, 1, line);
      } else {
        if (tapes) throw ParseError(line, 1, "duplicate tapes header");
        if (toks.size() != 2) throw ParseError(line, 1, "expected 'tapes: n'");
        std::size_t n = 0;
        try {
          std::size_t used = 0;
          n = std::stoul(toks[1].text, &used);
          if (used != toks[1].text.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          throw ParseError(line, toks[1].column, "tape count is not a number");
        }
        if (n == 0) throw ParseError(line, toks[1].column, "tape count must be positive");
        tapes = n;
      }
      continue;
    }
    if (!builder) {
      if (!states || !alphabet) throw ParseError(line, 1, "transition before the states and alphabet headers");
      if (!tapes) tapes = 1;
      builder.emplace(*states, *alphabet, 0, *tapes);
    }
    const std::size_t n = *tapes;
    const std::size_t expected = 1 + n + 1 + 1 + 2 * n;
    if (toks.size() != expected || toks[1 + n].text != "->")
      throw ParseError(line, toks.size() > 1 + n ? toks[std::min(toks.size() - 1, 1 + n)].column : 1,
                       "expected 'q a1..an -> q' b1..bn d1..dn'");
    const std::size_t q = lookup(*states, toks[0], line, "state");
    std::vector<std::size_t> read(n);
    for (std::size_t j = 0; j < n; ++j) read[j] = lookup(*alphabet, toks[1 + j], line, "symbol");
    Machine::Transition t;
    t.next = lookup(*states, toks[2 + n], line, "state");
    for (std::size_t j = 0; j < n; ++j) t.write.push_back(lookup(*alphabet, toks[3 + n + j], line, "symbol"));
    for (std::size_t j = 0; j < n; ++j) t.move.push_back(lookup_move(toks[3 + 2 * n + j], line));
    if (builder->is_set(builder->local_index(q, read)))
      throw ParseError(line, 1, "duplicate transition for this state and read");
    builder->set(q, read, std::move(t));
  }
  if (!builder) {
    if (!states || !alphabet) throw ParseError(lines.size(), 1, "missing states or alphabet header");
    builder.emplace(*states, *alphabet, 0, tapes.value_or(1));
  }
  return builder->build_with_fills();
}

std::string format_machine(const Machine& m) {
  std::ostringstream out;
  const std::size_t n = m.num_tapes();
  out << "states:";
  for (std::size_t q = 0; q < m.states().size(); ++q) out << ' ' << m.states().label(q);
  out << "\nalphabet: " << m.alphabet().label(m.blank());
  for (std::size_t s = 0; s < m.alphabet().size(); ++s)
    if (s != m.blank()) out << ' ' << m.alphabet().label(s);
  out << "\ntapes: " << n << '\n';
  const std::size_t sym = ipow(m.alphabet().size(), n);
  for (std::size_t l = 0; l < m.num_local(); ++l) {
    if (m.is_fill(l)) continue;
    out << m.states().label(l / sym);
    std::size_t rest = l % sym;
    std::vector<std::size_t> read(n);
    for (std::size_t j = n; j-- > 0;) {
      read[j] = rest % m.alphabet().size();
      rest /= m.alphabet().size();
    }
    for (std::size_t s : read) out << ' ' << m.alphabet().label(s);
    out << " -> " << m.states().label(m.next_state(l));
    for (std::size_t j = 0; j < n; ++j) out << ' ' << m.alphabet().label(m.write(l, j));
    for (std::size_t j = 0; j < n; ++j) out << ' ' << move_char(m.move(l, j));
    out << '\n';
  }
  return out.str();
}

std::string format_section_machine(const SectionMachine& sm, const MetaRecords& meta) {
  std::ostringstream out;
  const std::size_t n = sm.num_tapes();
  const FiniteSet& sigma = sm.alphabet();
  out << "alphabet:";
  for (std::size_t s = 0; s < sigma.size(); ++s) out << ' ' << sigma.label(s);
  out << "\nblank: " << sigma.label(sm.blank()) << "\ntapes: " << n << '\n';
  for (const auto& [k, v] : meta) out << "meta: " << k << ' ' << v << '\n';
  for (const Section& s : sm.sections()) {
    out << "section: " << s.id;
    for (std::size_t c = 0; c < s.context.size(); ++c) out << ' ' << s.context.label(c);
    out << '\n';
  }
  for (const Tract& t : sm.tracts()) {
    const Section& src = sm.sections()[t.source];
    const Section& tgt = sm.sections()[t.target];
    out << "tract: " << src.id << " -> " << tgt.id << " over";
    for (std::size_t j = 0; j < n; ++j) {
      if (j > 0) out << " x";
      out << " {";
      for (std::size_t k = 0; k < t.reads[j].size(); ++k) out << (k ? "," : "") << sigma.label(t.reads[j][k]);
      out << '}';
    }
    out << " : " << t.label << '\n';
    std::vector<std::size_t> pos(n, 0), read(n);
    for (std::size_t c = 0; c < src.context.size(); ++c) {
      if (!t.applies_to(c)) continue;
      std::fill(pos.begin(), pos.end(), 0);
      while (true) {
        for (std::size_t j = 0; j < n; ++j) read[j] = t.reads[j][pos[j]];
        const TractImage img = t.map(c, read);
        out << "  " << src.context.label(c);
        for (std::size_t s : read) out << ' ' << sigma.label(s);
        out << " => " << tgt.context.label(img.context);
        for (std::size_t s : img.write) out << ' ' << sigma.label(s);
        for (Move d : img.move) out << ' ' << move_char(d);
        out << '\n';
        std::size_t j = n;
        while (j > 0 && ++pos[j - 1] == t.reads[j - 1].size()) pos[--j] = 0;
        if (j == 0) break;
      }
    }
    out << "end\n";
  }
  return out.str();
}

namespace {

struct PendingTract {
  std::size_t line;
  std::size_t source, target;
  std::vector<std::vector<std::size_t>> reads;
  std::string label;
  std::unordered_map<std::size_t, TractImage> table;  // key: context * |Σ|ⁿ + read index
  std::vector<std::size_t> contexts;                  // in order of first appearance
};

std::vector<std::size_t> parse_brace_set(const Token& t, const FiniteSet& sigma, std::size_t line) {
  const std::string& s = t.text;
  if (s.size() < 2 || s.front() != '{' || s.back() != '}') throw ParseError(line, t.column, "expected {a,b,..}");
  std::vector<std::size_t> out;
  std::size_t start = 1;
  while (start < s.size() - 1) {
    std::size_t end = s.find(',', start);
    if (end == std::string::npos || end > s.size() - 1) end = s.size() - 1;
    Token sym{s.substr(start, end - start), t.column + start};
    out.push_back(lookup(sigma, sym, line, "symbol"));
    start = end + 1;
  }
  if (out.empty()) throw ParseError(line, t.column, "empty read set");
  return out;
}

}  // namespace

SectionMachineDoc parse_section_machine(std::string_view text) {
  std::optional<FiniteSet> sigma;
  std::optional<std::size_t> blank, tapes;
  MetaRecords meta;
  std::vector<std::pair<std::string, FiniteSet>> sections;
  std::map<std::string, std::size_t, std::less<>> section_ids;
  std::vector<PendingTract> tracts;
  PendingTract* open = nullptr;

  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::size_t line = ln + 1;
    const auto toks = tokenize(lines[ln]);
    if (toks.empty()) continue;
    const std::string& head = toks[0].text;
    if (open) {
      if (head == "end") {
        open = nullptr;
        continue;
      }
      const std::size_t n = *tapes;
      if (toks.size() != 1 + n + 1 + 1 + 2 * n || toks[1 + n].text != "=>")
        throw ParseError(line, 1, "expected 'ctx a1..an => ctx' b1..bn d1..dn'");
      const FiniteSet& sc = sections[open->source].second;
      const FiniteSet& tc = sections[open->target].second;
      const std::size_t c = lookup(sc, Token{escape_label(toks[0].text), toks[0].column}, line, "context");
      if (std::find(open->contexts.begin(), open->contexts.end(), c) == open->contexts.end())
        open->contexts.push_back(c);
      std::size_t key = c;
      for (std::size_t j = 0; j < n; ++j) key = key * sigma->size() + lookup(*sigma, toks[1 + j], line, "symbol");
      TractImage img;
      img.context = lookup(tc, Token{escape_label(toks[2 + n].text), toks[2 + n].column}, line, "context");
      for (std::size_t j = 0; j < n; ++j) img.write.push_back(lookup(*sigma, toks[3 + n + j], line, "symbol"));
      for (std::size_t j = 0; j < n; ++j) img.move.push_back(lookup_move(toks[3 + 2 * n + j], line));
      if (!open->table.emplace(key, std::move(img)).second) throw ParseError(line, 1, "duplicate tract entry");
      continue;
    }
    if (head == "alphabet:") {
      sigma = labels_to_set(toks, 1, line);
    } else if (head == "blank:") {
      if (!sigma || toks.size() != 2) throw ParseError(line, 1, "expected 'blank: s' after the alphabet");
      blank = lookup(*sigma, toks[1], line, "symbol");
    } else if (head == "tapes:") {
      if (toks.size() != 2) throw ParseError(line, 1, "expected 'tapes: n'");
      try {
        tapes = std::stoul(toks[1].text);
      } catch (const std::exception&) {
        throw ParseError(line, toks[1].column, "tape count is not a number");
      }
      if (*tapes == 0) throw ParseError(line, toks[1].column, "tape count must be positive");
    } else if (head == "meta:") {
      if (toks.size() < 2) throw ParseError(line, 1, "expected 'meta: key value'");
      const std::string_view raw = lines[ln];
      const std::size_t vstart = toks.size() > 2 ? toks[2].column - 1 : raw.size();
      std::string value(raw.substr(vstart));
      while (!value.empty() && (value.back() == '\r' || value.back() == ' ')) value.pop_back();
      meta.emplace_back(toks[1].text, value);
    } else if (head == "section:") {
      if (toks.size() < 3) throw ParseError(line, 1, "expected 'section: id labels..'");
      if (section_ids.count(toks[1].text)) throw ParseError(line, toks[1].column, "duplicate section id");
      std::vector<Token> escaped{toks[0]};
      for (std::size_t k = 2; k < toks.size(); ++k) escaped.push_back({escape_label(toks[k].text), toks[k].column});
      section_ids.emplace(toks[1].text, sections.size());
      sections.emplace_back(toks[1].text, labels_to_set(escaped, 1, line));
    } else if (head == "tract:") {
      if (!sigma || !tapes) throw ParseError(line, 1, "tract before the alphabet and tapes headers");
      const std::size_t n = *tapes;
      if (toks.size() < 5 + 2 * n - 1 || toks[2].text != "->" || toks[4].text != "over")
        throw ParseError(line, 1, "expected 'tract: src -> tgt over {..} x {..} : label'");
      auto sec = [&](const Token& t) {
        auto it = section_ids.find(t.text);
        if (it == section_ids.end()) throw ParseError(line, t.column, "unknown section '" + t.text + "'");
        return it->second;
      };
      PendingTract pt{line, sec(toks[1]), sec(toks[3]), {}, {}, {}, {}};
      std::size_t k = 5;
      for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) {
          if (k >= toks.size() || toks[k].text != "x") throw ParseError(line, k < toks.size() ? toks[k].column : 1, "expected 'x'");
          ++k;
        }
        if (k >= toks.size()) throw ParseError(line, 1, "missing read set");
        pt.reads.push_back(parse_brace_set(toks[k], *sigma, line));
        ++k;
      }
      if (k < toks.size()) {
        if (toks[k].text != ":") throw ParseError(line, toks[k].column, "expected ':'");
        if (k + 1 < toks.size()) {
          std::string label(lines[ln].substr(toks[k + 1].column - 1));
          while (!label.empty() && (label.back() == '\r' || label.back() == ' ')) label.pop_back();
          pt.label = std::move(label);
        }
      }
      tracts.push_back(std::move(pt));
      open = &tracts.back();
    } else {
      throw ParseError(line, toks[0].column, "unknown record '" + head + "'");
    }
  }
  if (open) throw ParseError(lines.size(), 1, "unterminated tract");
  if (!sigma || !tapes) throw ParseError(lines.size(), 1, "missing alphabet or tapes header");

  SectionMachine sm(*sigma, blank.value_or(0), *tapes);
  for (auto& [id, ctx] : sections) sm.add_section(id, ctx);
  const std::size_t ns = sigma->size();
  for (PendingTract& pt : tracts) {
    const bool filtered = pt.contexts.size() < sections[pt.source].second.size();
    std::size_t expected = pt.contexts.size();
    for (const auto& r : pt.reads) expected *= r.size();
    if (pt.table.size() != expected)
      throw ParseError(pt.line, 1, "tract lists " + std::to_string(pt.table.size()) + " entries, expected " +
                                     std::to_string(expected));
    auto table = std::make_shared<std::unordered_map<std::size_t, TractImage>>(std::move(pt.table));
    Tract t;
    t.source = pt.source;
    t.target = pt.target;
    t.reads = pt.reads;
    t.label = pt.label;
    if (filtered) t.contexts = pt.contexts;
    t.map = [table, ns](std::size_t c, std::span<const std::size_t> read) {
      std::size_t key = c;
      for (std::size_t s : read) key = key * ns + s;
      return table->at(key);
    };
    try {
      sm.add_tract(std::move(t));
    } catch (const Error& e) {
      throw ParseError(pt.line, 1, e.what());
    }
  }
  return SectionMachineDoc{std::move(sm), std::move(meta)};
}

}  // namespace smoothtm
