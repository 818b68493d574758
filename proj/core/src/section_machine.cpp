// SPDX-License-Identifier: Apache-2.0
#include "smoothtm/section_machine.hpp"

#include <algorithm>

#include "smoothtm/errors.hpp"

namespace smoothtm {

SectionMachine::SectionMachine(FiniteSet alphabet, std::size_t blank, std::size_t num_tapes)
    : alphabet_(std::move(alphabet)), blank_(blank), num_tapes_(num_tapes) {
  if (blank_ >= alphabet_.size()) throw ConstructionError("blank symbol is not in the alphabet");
  if (num_tapes_ == 0) throw ConstructionError("a machine needs at least one tape");
}

std::size_t SectionMachine::add_section(std::string id, FiniteSet context) {
  if (find_section(id)) throw ConstructionError("duplicate section id '" + id + "'");
  if (context.empty()) throw ConstructionError("section '" + id + "' has an empty context");
  offsets_.push_back(offsets_.back() + context.size());
  sections_.push_back({std::move(id), std::move(context)});
  tracts_by_source_.emplace_back();
  return sections_.size() - 1;
}

std::size_t SectionMachine::add_tract(Tract tract) {
  if (tract.source >= sections_.size() || tract.target >= sections_.size())
    throw ConstructionError("tract '" + tract.label + "' references an unknown section");
  if (tract.reads.size() != num_tapes_)
    throw ConstructionError("tract '" + tract.label + "' read sets do not match the tape count");
  for (auto& r : tract.reads) {
    for (std::size_t s : r)
      if (s >= alphabet_.size()) throw ConstructionError("tract '" + tract.label + "' reads an unknown symbol");
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
  if (!tract.map) throw ConstructionError("tract '" + tract.label + "' has no map");
  std::sort(tract.contexts.begin(), tract.contexts.end());
  tract.contexts.erase(std::unique(tract.contexts.begin(), tract.contexts.end()), tract.contexts.end());
  for (std::size_t c : tract.contexts)
    if (c >= sections_[tract.source].context.size())
      throw ConstructionError("tract '" + tract.label + "' filters on an unknown context");
  tracts_by_source_[tract.source].push_back(tracts_.size());
  tracts_.push_back(std::move(tract));
  return tracts_.size() - 1;
}

bool Tract::applies_to(std::size_t context) const {
  return contexts.empty() || std::binary_search(contexts.begin(), contexts.end(), context);
}

std::optional<std::size_t> SectionMachine::find_section(std::string_view id) const {
  for (std::size_t i = 0; i < sections_.size(); ++i)
    if (sections_[i].id == id) return i;
  return std::nullopt;
}

std::size_t SectionMachine::section_index(std::string_view id) const {
  auto i = find_section(id);
  if (!i) throw MismatchError("no section '" + std::string(id) + "'");
  return *i;
}

FiniteSet SectionMachine::state_set() const {
  std::vector<std::pair<std::string, FiniteSet>> parts;
  parts.reserve(sections_.size());
  for (const auto& s : sections_) parts.emplace_back(s.id, s.context);
  return FiniteSet::disjoint_union(std::move(parts));
}

std::size_t SectionMachine::state_index(std::size_t section, std::size_t context) const {
  if (context >= sections_.at(section).context.size())
    throw MismatchError("context index out of range for section '" + sections_[section].id + "'");
  return offsets_[section] + context;
}

std::pair<std::size_t, std::size_t> SectionMachine::locate(std::size_t state) const {
  if (state >= offsets_.back()) throw MismatchError("state index out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), state);
  std::size_t s = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  return {s, state - offsets_[s]};
}

namespace {

// Calls fn(read_vector) for every element of reads[0] × … × reads[n-1].
template <typename Fn>
void for_each_read(const std::vector<std::vector<std::size_t>>& reads, Fn&& fn) {
  const std::size_t n = reads.size();
  for (const auto& r : reads)
    if (r.empty()) return;
  std::vector<std::size_t> pos(n, 0), sym(n);
  while (true) {
    for (std::size_t j = 0; j < n; ++j) sym[j] = reads[j][pos[j]];
    fn(std::span<const std::size_t>(sym));
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++pos[k] < reads[k].size()) break;
      pos[k] = 0;
      if (k == 0) return;
    }
  }
}

}  // namespace

Machine SectionMachine::lower() const {
  const std::size_t sigma = alphabet_.size();
  std::size_t per_state = 1;
  for (std::size_t j = 0; j < num_tapes_; ++j) per_state *= sigma;
  const std::size_t total = num_states() * per_state;

  std::vector<Machine::Transition> table(total);
  std::vector<std::uint8_t> defined(total, 0);

  for (const Tract& tr : tracts_) {
    const Section& src = sections_[tr.source];
    const Section& dst = sections_[tr.target];
    for (std::size_t ctx = 0; ctx < src.context.size(); ++ctx) {
      if (!tr.applies_to(ctx)) continue;
      for_each_read(tr.reads, [&](std::span<const std::size_t> read) {
        std::size_t sv = 0;
        for (std::size_t s : read) sv = sv * sigma + s;
        const std::size_t local = (offsets_[tr.source] + ctx) * per_state + sv;
        if (defined[local])
          throw ConstructionError("tracts overlap at section '" + src.id + "' context '" + src.context.label(ctx) +
                                  "' (tract '" + tr.label + "')");
        TractImage img = tr.map(ctx, read);
        if (img.context >= dst.context.size())
          throw ConstructionError("tract '" + tr.label + "' maps outside the context of '" + dst.id + "'");
        if (img.write.size() != num_tapes_ || img.move.size() != num_tapes_)
          throw ConstructionError("tract '" + tr.label + "' image arity mismatch");
        Machine::Transition& t = table[local];
        t.next = offsets_[tr.target] + img.context;
        t.write = std::move(img.write);
        t.move = std::move(img.move);
        defined[local] = 1;
      });
    }
  }
  for (std::size_t l = 0; l < total; ++l)
    if (!defined[l]) table[l] = stuck_transition(alphabet_, num_tapes_, num_states(), l);
  return Machine(state_set(), alphabet_, blank_, num_tapes_, table);
}

std::optional<std::size_t> SectionMachine::covering_tract(std::size_t section, std::size_t context,
                                                          std::span<const std::size_t> read) const {
  for (std::size_t t : tracts_by_source_.at(section)) {
    const Tract& tr = tracts_[t];
    bool ok = tr.applies_to(context);
    for (std::size_t j = 0; j < num_tapes_ && ok; ++j)
      ok = std::binary_search(tr.reads[j].begin(), tr.reads[j].end(), read[j]);
    if (ok) return t;
  }
  return std::nullopt;
}

Configuration SectionMachine::step_direct(const Configuration& c) const {
  if (c.tapes.size() != num_tapes_) throw MismatchError("configuration tape count mismatch");
  auto [section, ctx] = locate(c.state);
  std::vector<std::size_t> read;
  for (const Tape& t : c.tapes) read.push_back(t.at(0));
  auto t = covering_tract(section, ctx, read);
  if (!t) throw Error("no tract from section '" + sections_[section].id + "' covers the read symbols");
  const Tract& tr = tracts_[*t];
  TractImage img = tr.map(ctx, read);
  Configuration out;
  out.state = state_index(tr.target, img.context);
  out.tapes = c.tapes;
  for (std::size_t j = 0; j < num_tapes_; ++j) {
    out.tapes[j].set(0, img.write[j]);
    out.tapes[j].shift(offset(img.move[j]));
  }
  return out;
}

}  // namespace smoothtm
