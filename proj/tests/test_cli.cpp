// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "smoothtm/config_io.hpp"
#include "smoothtm/machine_io.hpp"
#include "smoothtm/multitape.hpp"

using namespace smoothtm;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(SMOOTHTM_TEST_DATA) + "/" + name; }

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("smoothtm_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string tmp(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, RunIdentityLeavesConfigUnchanged) {
  const Result r = invoke({"run", data("id.tm"), data("blank.cfg"), "--steps", "5", "-o", tmp("out.cfg")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Machine m = parse_machine(read_text_file(data("id.tm")));
  EXPECT_EQ(parse_config(read_text_file(tmp("out.cfg")), m), parse_config(read_text_file(data("blank.cfg")), m));
}

TEST_F(CliTest, RunSmoothSplitsTheHalfCell) {
  const Result r =
      invoke({"run", data("lr.tm"), data("half.cfg"), "--smooth", "--steps", "1", "--trace", tmp("trace.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Machine m = parse_machine(read_text_file(data("lr.tm")));
  const SmoothConfig s = parse_config(r.out, m);
  for (std::int64_t i : {-1, 1}) {
    EXPECT_DOUBLE_EQ(s.tapes[0].at(i)[m.alphabet().index_of("A")], 0.25);
    EXPECT_DOUBLE_EQ(s.tapes[0].at(i)[m.alphabet().index_of("B")], 0.25);
    EXPECT_DOUBLE_EQ(s.tapes[0].at(i)[m.blank()], 0.5);
  }
  std::istringstream trace(read_text_file(tmp("trace.jsonl")));
  std::size_t lines = 0;
  for (std::string line; std::getline(trace, line); ++lines) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["step"], lines);
  }
  EXPECT_EQ(lines, 2u);
}

TEST_F(CliTest, RunClassicalMatchesStep) {
  const Result r = invoke({"run", data("lr.tm"), data("word.cfg"), "--steps", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Machine m = parse_machine(read_text_file(data("lr.tm")));
  const SmoothConfig start = parse_config(read_text_file(data("word.cfg")), m);
  EXPECT_EQ(parse_config(r.out, m), embed(m, run(m, *as_classical(start), 2)));
}

TEST_F(CliTest, ErrorsExitWithTwo) {
  Result r = invoke({"run", data("broken.tm"), data("blank.cfg")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 5, column 3"), std::string::npos) << r.err;
  EXPECT_EQ(invoke({"run", data("missing.tm"), data("blank.cfg")}).code, 2);
  EXPECT_EQ(invoke({"run", data("id.tm"), data("half.cfg")}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"verify", "--construction", "nonsense"}).code, 2);
  EXPECT_EQ(invoke({"compile", data("missing.tm")}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliTest, CompileWritesSectionsAndEncoding) {
  for (const char* file : {"id.tm", "two.tm"}) {
    const Result r = invoke({"compile", data(file), "-o", tmp("sim.txt")});
    ASSERT_EQ(r.code, 0) << r.err;
    const Machine src = parse_machine(read_text_file(data(file)));
    const SectionMachineDoc doc = parse_section_machine(read_text_file(tmp("sim.txt")));
    const CompiledSim sim = compile_multitape(std::make_shared<const Machine>(src));
    EXPECT_EQ(doc.machine.sections().size(), sim.sections->sections().size());
    bool has_sections = false;
    for (const auto& [k, v] : doc.meta) has_sections |= k == "sections";
    EXPECT_TRUE(has_sections);
  }
  const Result r = invoke({"compile", data("id.tm"), "-o", tmp("sim.txt"), "--encode", data("half.cfg"), "--encoding",
                        tmp("enc.cfg")});
  ASSERT_EQ(r.code, 0) << r.err;
  const SideRecord side = parse_side_record(read_text_file(tmp("enc.cfg")));
  EXPECT_EQ(side, (SideRecord{{"L", -2}, {"R", 2}, {"n", 1}}));
}

TEST_F(CliTest, VerifyPassesAndReportsDeterministically) {
  Result r = invoke({"verify", "--construction", "multitape", "--trials", "3", "--seed", "7", "--cycles", "2",
                  "--report", tmp("a.json")});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  r = invoke({"verify", "--construction", "multitape", "--trials", "3", "--seed", "7", "--cycles", "2", "--report",
           tmp("b.json")});
  EXPECT_EQ(read_text_file(tmp("a.json")), read_text_file(tmp("b.json")));
  const auto j = nlohmann::json::parse(read_text_file(tmp("a.json")));
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["trials"].size(), 3u);

  EXPECT_EQ(invoke({"verify", "--construction", "utm", "--trials", "3", "--uncertain-codes"}).code, 0);
}

TEST_F(CliTest, VerifyFailsForBrokenConstructions) {
  const Result staged = invoke({"verify", "--construction", "staged-counterexample"});
  EXPECT_EQ(staged.code, 1);
  EXPECT_NE(staged.out.find("0.375A + 0.625B"), std::string::npos) << staged.out;
  EXPECT_NE(staged.out.find("0.5A + 0.5B"), std::string::npos) << staged.out;
  EXPECT_EQ(invoke({"verify", "--construction", "broken-multitape", "--trials", "3"}).code, 1);
}

TEST_F(CliTest, MaxStepsEnvironmentOverride) {
  ::setenv("SMOOTHTM_MAX_STEPS", "5", 1);
  const Result r = invoke({"verify", "--construction", "multitape", "--trials", "2"});
  ::unsetenv("SMOOTHTM_MAX_STEPS");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("step limit 5"), std::string::npos) << r.out;
}

TEST_F(CliTest, UtmIdentityAndOverrides) {
  Result r = invoke({"utm", "--states", "1", "--alphabet", data("alphabet.txt"), "--code", data("id.tm"), "--cycles",
                  "1", "--input", data("half.cfg"), "-o", tmp("u.cfg")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Machine m = parse_machine(read_text_file(data("id.tm")));
  EXPECT_EQ(parse_config(read_text_file(tmp("u.cfg")), m), parse_config(read_text_file(data("half.cfg")), m));
  EXPECT_NE(r.out.find("max deviation"), std::string::npos);

  r = invoke({"utm", "--states", "1", "--alphabet", data("alphabet.txt"), "--code", data("lr.tm"), "--cycles", "3",
           "--input", data("half.cfg"), "--overrides", data("flip.txt"), "-o", tmp("u2.cfg")});
  EXPECT_EQ(r.code, 0) << r.err;

  r = invoke({"utm", "--states", "2", "--alphabet", data("alphabet.txt"), "--code", data("id.tm"), "--cycles", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("states"), std::string::npos);
}
