#include <gtest/gtest.h>

#include "scoop/model.hpp"
#include "scoop/runtime.hpp"
#include "support.hpp"

using namespace scoop;
using namespace scoop::testing;

TEST(Region, ActiveRegionGetsItsOwnProcessor) {
  Runtime rt;
  auto r = rt.create_region(RegionKind::active);
  const auto& reg = rt.region(r);
  ASSERT_TRUE(reg.processor.has_value());
  EXPECT_EQ(rt.processor(*reg.processor).home, r);
  EXPECT_EQ(reg.kind, RegionKind::active);
}

TEST(Region, PassiveRegionHasNoProcessor) {
  Runtime rt;
  auto r = rt.create_region(RegionKind::passive);
  EXPECT_FALSE(rt.region(r).processor.has_value());
  EXPECT_EQ(rt.processors().size(), 1u);  // only the root
}

TEST(Region, IdentifiersAreFresh) {
  Runtime rt;
  auto a = rt.create_region(RegionKind::active);
  auto b = rt.create_region(RegionKind::active);
  auto c = rt.create_region(RegionKind::passive);
  EXPECT_NE(a, b);
  EXPECT_NE(b, c);
  EXPECT_NE(*rt.region(a).processor, *rt.region(b).processor);
  EXPECT_EQ(rt.regions().size(), 4u);
}

TEST(Object, CreatedInRequestedRegion) {
  Runtime rt;
  auto r = rt.create_region(RegionKind::active);
  auto x = rt.create_object(r, counter());
  auto y = rt.create_object(r, counter());
  EXPECT_EQ(x.region, r);
  EXPECT_EQ(y.region, r);
  EXPECT_NE(x.object, y.object);
  EXPECT_EQ(rt.region(r).objects.size(), 2u);
}

TEST(Object, UnknownRegionIsRejected) {
  Runtime rt;
  try {
    rt.create_object(RegionId{42}, counter());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_region);
  }
}

namespace {

Task hold_and_finish(CallContext&) { co_return Value{}; }

}  // namespace

TEST(Object, RegionHeldByAnotherProcessorRejectsCreation) {
  Runtime rt;
  auto t = std::make_shared<RoutineTable>();
  t->add(command("hold", {"p"}, hold_and_finish));
  auto pr = rt.create_region(RegionKind::passive);
  auto p = rt.create_object(pr, counter());
  auto holder = rt.create_object(rt.create_region(RegionKind::active), ObjectState(t));
  auto ticket = rt.log_command(rt.root(), {holder, "hold", {p}});
  ASSERT_EQ(rt.acquire_and_check(ticket), GrantOutcome::granted);
  EXPECT_EQ(rt.region(pr).holder, rt.region(holder.region).processor);
  try {
    rt.create_object(pr, counter());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ownership_violation);
  }
}

namespace {

Task create_in(CallContext& ctx) {
  ctx.create_object(ctx.arg("r").as_ref().region, counter());
  co_return Value{};
}

}  // namespace

TEST(Object, StrangerCannotCreateInUnheldRegion) {
  Runtime rt;
  auto t = std::make_shared<RoutineTable>();
  t->add(command("create_in", {"r"}, create_in));
  // Passing the ref as argument reserves its region, so creation is legal.
  auto pr = rt.create_region(RegionKind::passive);
  auto p = rt.create_object(pr, counter());
  auto w = rt.create_object(rt.create_region(RegionKind::active), ObjectState(t));
  rt.log_command(rt.root(), {w, "create_in", {p}});
  EXPECT_EQ(rt.run_until_quiescent().status, RunStatus::quiescent);
  EXPECT_EQ(rt.region(pr).objects.size(), 2u);
  EXPECT_EQ(count_kind(rt.trace(), EventKind::exception), 0u);
}

TEST(Separateness, DefinedByHomeRegion) {
  Runtime rt;
  auto r = rt.create_region(RegionKind::active);
  auto s = rt.create_region(RegionKind::active);
  auto pr = rt.create_region(RegionKind::passive);
  auto in_r = rt.create_object(r, counter());
  auto in_s = rt.create_object(s, counter());
  auto in_p = rt.create_object(pr, counter());
  auto pr_proc = *rt.region(r).processor;
  EXPECT_FALSE(rt.is_separate(pr_proc, in_r));
  EXPECT_TRUE(rt.is_separate(pr_proc, in_s));
  EXPECT_TRUE(rt.is_separate(pr_proc, in_p));
  EXPECT_TRUE(rt.is_separate(rt.root(), in_p));
}

TEST(ObjectState, FieldsAndEquality) {
  ObjectState a;
  a.set("x", 3).set("flag", true).set("ref", SeparateRef{RegionId{2}, ObjectId{5}});
  EXPECT_EQ(a.integer("x"), 3);
  EXPECT_TRUE(a.boolean("flag"));
  EXPECT_EQ(a.ref("ref").object, ObjectId{5});
  EXPECT_FALSE(a.has("y"));
  ObjectState b = a;
  EXPECT_EQ(a, b);
  b.set("x", 4);
  EXPECT_NE(a, b);
  EXPECT_EQ(to_string(a), "flag=b:true;ref=ref:2/5;x=i:3");
}

TEST(ObjectState, WrongTagIsBadCall) {
  ObjectState a;
  a.set("x", 3);
  try {
    (void)a.boolean("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::bad_call);
  }
}

TEST(Value, SpellingRoundTrips) {
  const std::vector<Value> values{Value{}, Value{-3}, Value{true}, Value{false},
                                  Value{SeparateRef{RegionId{2}, ObjectId{7}}},
                                  Value{Exception{ErrorCode::poisoned_region, ""}}};
  for (const auto& v : values) {
    auto back = parse_value(to_string(v));
    ASSERT_TRUE(back.has_value()) << to_string(v);
    EXPECT_EQ(*back, v);
  }
  EXPECT_EQ(to_string(Value{-3}), "i:-3");
  EXPECT_EQ(to_string(Value{SeparateRef{RegionId{2}, ObjectId{7}}}), "ref:2/7");
  EXPECT_FALSE(parse_value("i:x").has_value());
  EXPECT_FALSE(parse_value("ref:2").has_value());
  EXPECT_FALSE(parse_value("nonsense").has_value());
}

TEST(ErrorCode, NamesRoundTrip) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::config_error); ++i) {
    auto code = static_cast<ErrorCode>(i);
    ErrorCode back{};
    ASSERT_TRUE(parse_error_code(to_string(code), back));
    EXPECT_EQ(back, code);
  }
}
