// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smoothtm/smooth_step.hpp"

namespace smoothtm {

using SideRecord = std::vector<std::pair<std::string, std::int64_t>>;

/// {"state": {"q0": 0.5, ...}, "tapes": [{"lo": -1, "cells": [{"A": 0.5, ...}, ...]}]}
/// Zero weights are omitted. `side` adds integer fields at the top level.
/// `pretty` selects indented output; otherwise a single line.
std::string format_config(const SmoothConfig& s, const SideRecord& side = {}, bool pretty = true);

/// Parses the format above against a state set and alphabet. Omitted labels
/// weigh 0; a missing "tapes" gives all-blank tapes. Syntax errors raise
/// ParseError with line and column; unknown labels and non-simplex
/// distributions raise ParseError at the start of the document.
SmoothConfig parse_config(std::string_view text, const FiniteSet& states, const FiniteSet& alphabet,
                          std::size_t blank, std::size_t num_tapes);
SmoothConfig parse_config(std::string_view text, const Machine& m);

/// Integer side fields present in the document.
SideRecord parse_side_record(std::string_view text);

/// One line of a step trace: step index, state marginal, tape windows and
/// the direction marginals of the step just taken (empty for step 0).
std::string format_trace_record(std::size_t step, const SmoothConfig& s, const std::vector<Dist>& moves);

}  // namespace smoothtm
