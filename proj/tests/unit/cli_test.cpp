#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "scoop/trace.hpp"
#include "scoop/verify.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome scoop_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = scoop::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("scoop-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
  static void dump(const std::string& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, RunPassesAndWritesTrace) {
  auto r = scoop_cli({"run", "philosophers", "--n", "3", "--rounds", "2", "--seed", "4", "--trace", path("p.trace")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("STATUS quiescent"), std::string::npos);
  EXPECT_NE(r.out.find("STAT meals 2,2,2"), std::string::npos);
  EXPECT_NE(r.out.find("VERDICT meals pass"), std::string::npos);
  EXPECT_FALSE(slurp(path("p.trace")).empty());
  // verify recomputes the same two verdicts from the file alone.
  auto v = scoop_cli({"verify", path("p.trace")});
  EXPECT_EQ(v.code, 0);
  for (const char* line : {"VERDICT race_freedom pass -\n", "VERDICT order_and_sync pass -\n"}) {
    EXPECT_NE(r.out.find(line), std::string::npos) << line;
    EXPECT_NE(v.out.find(line), std::string::npos) << line;
  }
}

TEST_F(Cli, RunIsByteIdenticalAcrossInvocations) {
  for (const char* scenario : {"philosophers", "producer-consumer", "hexapod", "nested-query"}) {
    auto a = scoop_cli({"run", scenario, "--seed", "17", "--trace", path("a.trace")});
    auto b = scoop_cli({"run", scenario, "--seed", "17", "--trace", path("b.trace")});
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(slurp(path("a.trace")), slurp(path("b.trace"))) << scenario;
  }
}

TEST_F(Cli, DeadlockExitsOne) {
  auto r = scoop_cli({"run", "nested-query", "--trace", path("n.trace")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("STATUS deadlock cycle=1,2"), std::string::npos);
  // The deadlocked trace itself is still well formed and race free.
  EXPECT_EQ(scoop_cli({"verify", path("n.trace")}).code, 0);
}

TEST_F(Cli, VerifyGoodMutatedAndTruncated) {
  ASSERT_EQ(scoop_cli({"run", "philosophers", "--n", "3", "--rounds", "2", "--trace", path("p.trace")}).code, 0);
  auto ok = scoop_cli({"verify", path("p.trace")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("VERDICT race_freedom pass -"), std::string::npos);

  const auto text = slurp(path("p.trace"));
  auto mutated = scoop::mutate(scoop::parse_trace(text), scoop::Mutation::interval_overlap);
  ASSERT_TRUE(mutated.has_value());
  dump(path("bad.trace"), scoop::serialize(*mutated));
  auto bad = scoop_cli({"verify", path("bad.trace")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("VIOLATION interval_overlap"), std::string::npos);

  dump(path("cut.trace"), text.substr(0, text.size() - 7));
  EXPECT_EQ(scoop_cli({"verify", path("cut.trace")}).code, 2);
  EXPECT_EQ(scoop_cli({"verify", path("missing.trace")}).code, 2);
}

TEST_F(Cli, ReplayMatchesRecordedTrace) {
  ASSERT_EQ(scoop_cli({"run", "hexapod", "--steps", "4", "--seed", "3", "--trace", path("h.trace")}).code, 0);
  auto r = scoop_cli({"replay", "hexapod", "--steps", "4", "--seed", "3", "--expect", path("h.trace")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("REPLAY match"), std::string::npos);
  auto other = scoop_cli({"replay", "hexapod", "--steps", "4", "--seed", "5", "--expect", path("h.trace")});
  EXPECT_EQ(other.code, 1);
  EXPECT_NE(other.out.find("REPLAY mismatch"), std::string::npos);
}

TEST_F(Cli, ExplorePrintsReplayableFailures) {
  auto r = scoop_cli({"explore", "nested-query", "--exhaustive-depth", "64"});
  EXPECT_EQ(r.code, 1);
  auto at = r.out.find("FAIL --path ");
  ASSERT_NE(at, std::string::npos);
  auto path_text = r.out.substr(at + 12, r.out.find(' ', at + 12) - (at + 12));
  auto replay = scoop_cli({"replay", "nested-query", "--path", path_text});
  EXPECT_EQ(replay.code, 1);
  EXPECT_NE(replay.out.find("STATUS deadlock"), std::string::npos);

  auto ok = scoop_cli({"explore", "philosophers", "--n", "2", "--rounds", "1", "--exhaustive-depth", "64"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("COMPLETE yes"), std::string::npos);
  EXPECT_NE(ok.out.find("FAILURES 0"), std::string::npos);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(scoop_cli({}).code, 2);
  EXPECT_EQ(scoop_cli({"dance"}).code, 2);
  EXPECT_EQ(scoop_cli({"run"}).code, 2);
  EXPECT_EQ(scoop_cli({"run", "bakery"}).code, 2);
  EXPECT_EQ(scoop_cli({"run", "philosophers", "--n", "0"}).code, 2);
  EXPECT_EQ(scoop_cli({"run", "producer-consumer", "--capacity", "0"}).code, 2);
  EXPECT_EQ(scoop_cli({"run", "hexapod", "--n", "3"}).code, 2);
  EXPECT_EQ(scoop_cli({"run", "philosophers", "--n", "x"}).code, 2);
  EXPECT_EQ(scoop_cli({"explore", "hexapod", "--seeds", "2", "--exhaustive-depth", "3"}).code, 2);
  EXPECT_EQ(scoop_cli({"replay", "hexapod", "--path", "0..1"}).code, 2);
  EXPECT_EQ(scoop_cli({"--help"}).code, 0);
}
