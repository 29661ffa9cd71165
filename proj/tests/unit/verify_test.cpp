#include <gtest/gtest.h>

#include "oracle/oracles.hpp"
#include "scoop/scenarios.hpp"
#include "scoop/verify.hpp"

using namespace scoop;

namespace {

Trace scenario_trace(const std::string& name, std::uint64_t seed) {
  ScenarioConfig c;
  c.scenario = name;
  c.seed = seed;
  if (name == "philosophers") {
    c.n = 3;
    c.rounds = 2;
  }
  if (name == "producer-consumer") c.items = 6;
  if (name == "hexapod") c.steps = 3;
  return run_scenario(c).trace;
}

// Two processors each run one application on region 1.
const char* kTwoApps =
    "0 CALL_LOGGED 0 2 1 routine=a executor=1 regions=1,2\n"
    "1 CALL_LOGGED 0 3 2 routine=b executor=2 regions=1,3\n"
    "2 RESERVATION_ACQUIRED 1 2 1 regions=1,2\n"
    "3 APPLICATION_STARTED 1 2 1 routine=a kind=command caller=0 regions=1,2\n"
    "4 APPLICATION_COMPLETED 1 2 1 routine=a result=unit\n"
    "5 RESERVATION_RELEASED 1 2 1 regions=1,2\n"
    "6 RESERVATION_ACQUIRED 2 3 2 regions=1,3\n"
    "7 APPLICATION_STARTED 2 3 2 routine=b kind=command caller=0 regions=1,3\n"
    "8 APPLICATION_COMPLETED 2 3 2 routine=b result=unit\n"
    "9 RESERVATION_RELEASED 2 3 2 regions=1,3\n";

const char* kOverlap =
    "0 CALL_LOGGED 0 2 1 routine=a executor=1 regions=1,2\n"
    "1 CALL_LOGGED 0 3 2 routine=b executor=2 regions=1,3\n"
    "2 RESERVATION_ACQUIRED 1 2 1 regions=1,2\n"
    "3 APPLICATION_STARTED 1 2 1 routine=a kind=command caller=0 regions=1,2\n"
    "4 RESERVATION_ACQUIRED 2 3 2 regions=1,3\n"
    "5 APPLICATION_STARTED 2 3 2 routine=b kind=command caller=0 regions=1,3\n"
    "6 APPLICATION_COMPLETED 1 2 1 routine=a result=unit\n"
    "7 RESERVATION_RELEASED 1 2 1 regions=1,2\n"
    "8 APPLICATION_COMPLETED 2 3 2 routine=b result=unit\n"
    "9 RESERVATION_RELEASED 2 3 2 regions=1,3\n";

const char* kQuery =
    "0 QUERY_ISSUED 1 2 1 routine=get executor=2 regions=2\n"
    "1 RESERVATION_ACQUIRED 2 2 1 regions=2\n"
    "2 APPLICATION_STARTED 2 2 1 routine=get kind=query caller=1 regions=2\n"
    "3 APPLICATION_COMPLETED 2 2 1 routine=get result=i:3\n"
    "4 RESERVATION_RELEASED 2 2 1 regions=2\n"
    "5 QUERY_RESULT 1 2 1 result=i:3\n";

}  // namespace

TEST(RaceFreedom, SequentialApplicationsPass) {
  auto r = check_race_freedom(parse_trace(kTwoApps));
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(oracle::race_free(oracle::lines(kTwoApps)));
  EXPECT_EQ(format_verdict(to_verdict(r)), "VERDICT race_freedom pass -");
}

TEST(RaceFreedom, OverlapIsFlagged) {
  auto r = check_race_freedom(parse_trace(kOverlap));
  EXPECT_TRUE(r.has("interval_overlap"));
  EXPECT_FALSE(oracle::race_free(oracle::lines(kOverlap)));
  auto v = to_verdict(r);
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.detail.rfind("interval_overlap events=", 0), 0u) << v.detail;
}

TEST(RaceFreedom, StartWithoutWholeSetIsPartial) {
  std::string t = kTwoApps;
  const std::string full = "2 RESERVATION_ACQUIRED 1 2 1 regions=1,2";
  t.replace(t.find(full), full.size(), "2 RESERVATION_ACQUIRED 1 2 1 regions=2");
  EXPECT_TRUE(check_race_freedom(parse_trace(t)).has("partial_reservation")) << t;
}

TEST(RaceFreedom, UnterminatedApplicationIsMalformed) {
  const std::string t =
      "0 RESERVATION_ACQUIRED 1 2 1 regions=2\n"
      "1 APPLICATION_STARTED 1 2 1 routine=a kind=command caller=0 regions=2\n";
  try {
    (void)check_race_freedom(parse_trace(t));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::malformed_trace);
  }
}

TEST(OrderAndSync, QueryWithSilentCallerPasses) {
  EXPECT_TRUE(check_order_and_sync(parse_trace(kQuery)).passed());
}

TEST(OrderAndSync, CallerActingDuringQueryIsFlagged) {
  std::string t = kQuery;
  t.replace(t.find("5 QUERY_RESULT"), 14, "6 QUERY_RESULT");
  t.insert(t.find("6 QUERY_RESULT"), "5 CALL_LOGGED 1 3 9 routine=x executor=3 regions=3\n");
  auto r = check_order_and_sync(parse_trace(t));
  EXPECT_TRUE(r.has("query_silence")) << t;
}

TEST(OrderAndSync, MissingQueryResultIsMalformed) {
  std::string t = kQuery;
  t.erase(t.find("5 QUERY_RESULT"));
  EXPECT_THROW((void)check_order_and_sync(parse_trace(t)), Error);
}

TEST(OrderAndSync, OutOfOrderApplicationIsFlagged) {
  const std::string t =
      "0 CALL_LOGGED 0 2 1 routine=a executor=1 regions=2\n"
      "1 CALL_LOGGED 0 2 2 routine=b executor=1 regions=2\n"
      "2 RESERVATION_ACQUIRED 1 2 2 regions=2\n"
      "3 APPLICATION_STARTED 1 2 2 routine=b kind=command caller=0 regions=2\n"
      "4 APPLICATION_COMPLETED 1 2 2 routine=b result=unit\n"
      "5 RESERVATION_RELEASED 1 2 2 regions=2\n"
      "6 RESERVATION_ACQUIRED 1 2 1 regions=2\n"
      "7 APPLICATION_STARTED 1 2 1 routine=a kind=command caller=0 regions=2\n"
      "8 APPLICATION_COMPLETED 1 2 1 routine=a result=unit\n"
      "9 RESERVATION_RELEASED 1 2 1 regions=2\n";
  EXPECT_TRUE(check_order_and_sync(parse_trace(t)).has("per_caller_order"));
  EXPECT_FALSE(oracle::per_caller_order(oracle::lines(t)));
}

TEST(WaitSoundness, StartNeedsATrueCheck) {
  const std::string ok =
      "0 RESERVATION_ACQUIRED 1 2 1 regions=2\n"
      "1 WAIT_CHECKED(true) 1 2 1 routine=put clauses=c\n"
      "2 APPLICATION_STARTED 1 2 1 routine=put kind=command caller=0 regions=2\n"
      "3 APPLICATION_COMPLETED 1 2 1 routine=put result=unit\n"
      "4 RESERVATION_RELEASED 1 2 1 regions=2\n";
  EXPECT_TRUE(check_wait_soundness(parse_trace(ok)).passed());
  std::string bad = ok;
  bad.replace(bad.find("(true)"), 6, "(false)");
  EXPECT_TRUE(check_wait_soundness(parse_trace(bad)).has("unchecked_start"));
}

TEST(Checkers, EmptyTracePasses) {
  EXPECT_TRUE(check_race_freedom(Trace{}).passed());
  EXPECT_TRUE(check_order_and_sync(Trace{}).passed());
  EXPECT_TRUE(check_wait_soundness(Trace{}).passed());
}

TEST(Checkers, ScenarioTracesPass) {
  for (auto name : scenario_names()) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto t = scenario_trace(std::string(name), seed);
      EXPECT_TRUE(check_race_freedom(t).passed()) << name << seed;
      EXPECT_TRUE(check_order_and_sync(t).passed()) << name << seed;
      EXPECT_TRUE(check_wait_soundness(t).passed()) << name << seed;
    }
  }
}

TEST(Mutations, NamesRoundTrip) {
  for (auto m : kMutations) EXPECT_EQ(parse_mutation(to_string(m)), m);
  EXPECT_FALSE(parse_mutation("nonsense").has_value());
}

TEST(Mutations, EachIsCaughtUnderItsOwnName) {
  const std::pair<Mutation, const char*> cases[] = {
      {Mutation::interval_overlap, "philosophers"},
      {Mutation::per_caller_reorder, "philosophers"},
      {Mutation::query_silence_break, "producer-consumer"},
      {Mutation::partial_reservation, "philosophers"},
  };
  for (const auto& [m, scenario] : cases) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto original = scenario_trace(scenario, seed);
      auto mutated = mutate(original, m);
      ASSERT_TRUE(mutated.has_value()) << to_string(m);
      EXPECT_NE(serialize(*mutated), serialize(original));
      // Survives a round trip through text.
      const Trace reparsed = parse_trace(serialize(*mutated));
      const Report reports[] = {check_race_freedom(reparsed), check_order_and_sync(reparsed)};
      bool found = false;
      for (const auto& r : reports) found = found || r.has(expected_violation(m));
      EXPECT_TRUE(found) << to_string(m) << " seed " << seed;
    }
  }
}

TEST(Mutations, NoSiteMeansNoMutation) {
  EXPECT_FALSE(mutate(Trace{}, Mutation::query_silence_break).has_value());
  EXPECT_FALSE(mutate(parse_trace(kTwoApps), Mutation::query_silence_break).has_value());
}
