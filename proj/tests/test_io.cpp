// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <json.hpp>

#include "smoothtm/config_io.hpp"
#include "smoothtm/errors.hpp"
#include "smoothtm/machine_io.hpp"
#include "smoothtm/random.hpp"

using namespace smoothtm;

namespace {

Machine ab_machine() {
  return parse_machine("states: p q\nalphabet: _ A B\ntapes: 1\n");
}

}  // namespace

TEST(ConfigIo, RoundTripsRandomConfigsExactly) {
  Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    const Machine m = random_machine(rng, 1 + rng.below(3), 2 + rng.below(3), 1 + rng.below(3));
    const SmoothConfig s = random_smooth_config(rng, m, 3);
    EXPECT_EQ(parse_config(format_config(s), m), s);
    EXPECT_EQ(parse_config(format_config(s, {}, false), m), s);
  }
}

TEST(ConfigIo, OmittedLabelsAndTapesDefault) {
  const Machine m = ab_machine();
  const SmoothConfig s = parse_config(R"({"state": {"q": 1}})", m);
  EXPECT_EQ(s.state, Dist::point(m.states(), "q"));
  ASSERT_EQ(s.tapes.size(), 1u);
  EXPECT_EQ(s.tapes[0], SmoothTape(m.alphabet(), 0));
}

TEST(ConfigIo, ErrorsAreParseErrors) {
  const Machine m = ab_machine();
  try {
    parse_config("{\n  \"state\": {\"q\": 1},\n  oops\n}", m);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_config(R"({"state": {"r": 1}})", m), ParseError);
  EXPECT_THROW(parse_config(R"({"state": {"q": 0.5}})", m), ParseError);
  EXPECT_THROW(parse_config(R"({"state": {"q": 1}, "tapes": [{"lo": 0, "cells": [{"C": 1}]}]})", m), ParseError);
}

TEST(ConfigIo, SideRecordIsCarried) {
  const Machine m = ab_machine();
  const SmoothConfig s = blank_smooth_config(m, Dist::point(m.states(), 0));
  const std::string text = format_config(s, {{"L", -3}, {"R", 2}, {"n", 1}});
  const SideRecord side = parse_side_record(text);
  ASSERT_EQ(side.size(), 3u);
  EXPECT_EQ(side[0], (std::pair<std::string, std::int64_t>{"L", -3}));
  EXPECT_EQ(side[2].second, 1);
  EXPECT_EQ(parse_config(text, m), s);
}

TEST(ConfigIo, TraceRecordIsOneJsonLine) {
  const Machine m = ab_machine();
  const SmoothConfig s = blank_smooth_config(m, Dist::uniform(m.states()));
  const std::string line = format_trace_record(3, s, {Dist::point(directions(), 0)});
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j["step"], 3);
  EXPECT_DOUBLE_EQ(j["state"]["p"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(j["directions"][0]["L"].get<double>(), 1.0);
}

TEST(ConfigIo, FormatIsDeterministic) {
  Rng a(3), b(3);
  const Machine m = ab_machine();
  EXPECT_EQ(format_config(random_smooth_config(a, m, 2)), format_config(random_smooth_config(b, m, 2)));
}
