// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smoothtm/finite_set.hpp"
#include "smoothtm/machine.hpp"

namespace smoothtm {

/// A section: a block of states in bijection with a context set of local
/// indices.
struct Section {
  std::string id;
  FiniteSet context;
};

/// Image of one transition inside a tract: target local index, per-tape
/// write symbols and moves.
struct TractImage {
  std::size_t context = 0;
  std::vector<std::size_t> write;
  std::vector<Move> move;
};

using TractMap = std::function<TractImage(std::size_t context, std::span<const std::size_t> read)>;

/// The family of transitions from one section to another over a per-tape set
/// of read symbols.
struct Tract {
  std::size_t source = 0;
  std::size_t target = 0;
  std::vector<std::vector<std::size_t>> reads;  // one read-symbol set per tape
  TractMap map;
  std::string label;
  /// Source contexts the tract applies to; empty means all of them.
  std::vector<std::size_t> contexts;

  bool applies_to(std::size_t context) const;
};

/// A machine whose states are (section, context element) pairs and whose
/// transitions are given tract by tract. Lowering yields an ordinary Machine
/// over the disjoint union of the contexts.
class SectionMachine {
 public:
  SectionMachine(FiniteSet alphabet, std::size_t blank, std::size_t num_tapes);

  std::size_t add_section(std::string id, FiniteSet context);
  std::size_t add_tract(Tract tract);

  const FiniteSet& alphabet() const noexcept { return alphabet_; }
  std::size_t blank() const noexcept { return blank_; }
  std::size_t num_tapes() const noexcept { return num_tapes_; }
  const std::vector<Section>& sections() const noexcept { return sections_; }
  const std::vector<Tract>& tracts() const noexcept { return tracts_; }

  std::size_t section_index(std::string_view id) const;
  std::optional<std::size_t> find_section(std::string_view id) const;

  /// Disjoint union of the contexts tagged by section id.
  FiniteSet state_set() const;
  std::size_t num_states() const noexcept { return offsets_.back(); }
  std::size_t state_index(std::size_t section, std::size_t context) const;
  std::size_t section_offset(std::size_t section) const { return offsets_.at(section); }
  /// (section, context) of a lowered state index.
  std::pair<std::size_t, std::size_t> locate(std::size_t state) const;

  /// Q = ⊔ contexts; δ assembled from the tracts; every pair no tract
  /// covers becomes a flagged stuck transition. Overlapping tracts raise
  /// ConstructionError.
  Machine lower() const;

  /// Classical step interpreted directly from the tracts. The configuration's
  /// state is a lowered state index. Throws Error when no tract applies.
  Configuration step_direct(const Configuration& c) const;

 private:
  std::optional<std::size_t> covering_tract(std::size_t section, std::size_t context,
                                            std::span<const std::size_t> read) const;

  FiniteSet alphabet_;
  std::size_t blank_;
  std::size_t num_tapes_;
  std::vector<Section> sections_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Tract> tracts_;
  std::vector<std::vector<std::size_t>> tracts_by_source_;
};

}  // namespace smoothtm
