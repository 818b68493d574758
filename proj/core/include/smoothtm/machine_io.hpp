// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smoothtm/machine.hpp"
#include "smoothtm/section_machine.hpp"

namespace smoothtm {

/// Parses the line-based machine format:
///
///   states: q0 q1
///   alphabet: _ A B      (first symbol is the blank)
///   tapes: 1
///   q0 A -> q1 B R
///
/// `//` starts a comment. Pairs without a line become flagged stuck
/// transitions. Errors raise ParseError with a 1-based line and column.
Machine parse_machine(std::string_view text);

/// Inverse of parse_machine for the non-fill transitions.
std::string format_machine(const Machine& m);

/// Reads a whole file; raises Error when it cannot be opened.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

using MetaRecords = std::vector<std::pair<std::string, std::string>>;

/// Section machine text: `section:` records list the context labels and
/// `tract: src -> tgt over {..} x {..} : label` records are followed by one
/// `ctx a.. => ctx' b.. d..` entry per covered pair and closed by `end`.
std::string format_section_machine(const SectionMachine& sm, const MetaRecords& meta = {});

struct SectionMachineDoc {
  SectionMachine machine;
  MetaRecords meta;
};

/// Contexts come back as plain sets over escaped labels: '(' ')' ',' become
/// '[' ']' ';'. Order, and hence the lowered machine, is preserved.
SectionMachineDoc parse_section_machine(std::string_view text);

}  // namespace smoothtm
