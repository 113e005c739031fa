#include "eptas/io.hpp"
#include "eptas/model.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace eptas;
using eptas::testing::InstanceBuilder;
using eptas::testing::params;

namespace {

Schedule two_machine(std::vector<Placement> a, std::vector<Placement> b = {}) {
	Schedule s(2);
	s.machines[0] = std::move(a);
	s.machines[1] = std::move(b);
	return s;
}

bool has_kind(const std::vector<Violation>& v, ViolationKind kind) {
	return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == kind; });
}

} // namespace

TEST(Verify, OverlapOnOneMachine) {
	const auto inst = InstanceBuilder().job(2).job(2).machine().supply(0, 1).build();
	Schedule s(1);
	s.machines[0] = {{0, 0}, {1, 1}};
	const auto v = verify_schedule(inst, s);
	ASSERT_EQ(v.size(), 1u);
	EXPECT_EQ(v[0].kind, ViolationKind::Overlap);
	EXPECT_EQ(v[0].job, 1u);
}

TEST(Verify, ResourceShortfallAtCommonStart) {
	const auto inst = InstanceBuilder().job(1, 3).job(1, 3).machine().machine().supply(0, 5).build();
	const auto v = verify_schedule(inst, two_machine({{0, 0}}, {{1, 0}}));
	ASSERT_TRUE(has_kind(v, ViolationKind::Resource));
	const auto& r = *std::find_if(v.begin(), v.end(), [](const Violation& x) { return x.kind == ViolationKind::Resource; });
	EXPECT_EQ(r.demand, 6);
	EXPECT_EQ(r.supply, 5);
}

TEST(Verify, ExactPrefixMatchIsFeasible) {
	const auto inst = InstanceBuilder().job(2, 1).job(2, 1).machine().machine().supply(0, 1).supply(5, 1).build();
	EXPECT_TRUE(verify_schedule(inst, two_machine({{0, 0}}, {{1, 5}})).empty());
	// one unit early
	EXPECT_TRUE(has_kind(verify_schedule(inst, two_machine({{0, 0}}, {{1, 4}})), ViolationKind::Resource));
}

TEST(Verify, MissingDuplicateAndNegative) {
	const auto inst = InstanceBuilder().job(1).job(1).job(1).machine().machine().supply(0, 1).build();
	const auto v = verify_schedule(inst, two_machine({{0, -1}, {0, 5}}, {}));
	EXPECT_TRUE(has_kind(v, ViolationKind::NegativeStart));
	EXPECT_TRUE(has_kind(v, ViolationKind::DuplicateJob));
	EXPECT_TRUE(has_kind(v, ViolationKind::MissingJob));
}

TEST(Verify, UnknownIdsAreStructuralErrors) {
	const auto inst = InstanceBuilder().job(1).machine().supply(0, 1).build();
	Schedule s(1);
	s.machines[0] = {{7, 0}};
	EXPECT_THROW(verify_schedule(inst, s), StructuralError);
	EXPECT_THROW(verify_schedule(inst, Schedule(2)), StructuralError);
}

TEST(Verify, ZeroDemandBeforeFirstSupplyFollowsTheInequality) {
	const auto inst = InstanceBuilder().job(1, 0).job(1, 1).machine().supply(3, 1).build();
	Schedule s(1);
	s.machines[0] = {{0, 0}, {1, 3}};
	EXPECT_TRUE(verify_schedule(inst, s).empty());
}

TEST(Evaluate, ConvexCombination) {
	const auto p = params(1, Rational(1, 2), 2);
	const auto v = objective_from_loads({4, 2}, p);
	EXPECT_EQ(v.makespan, 4);
	EXPECT_EQ(*v.norm_cost_exact, 20);
	EXPECT_EQ(*v.combined_exact, 12);
	EXPECT_EQ(*objective_from_loads({5}, params(1, 1, 3)).combined_exact, 5);
	EXPECT_EQ(*objective_from_loads({3, 3}, params(1, 0, 2)).combined_exact, 18);
}

TEST(Evaluate, ExtremesOfPsi) {
	const std::vector<Rational> loads{Rational(7, 2), 1, 0};
	const auto a = objective_from_loads(loads, params(1, 1, 2));
	EXPECT_EQ(*a.combined_exact, a.makespan);
	const auto b = objective_from_loads(loads, params(1, 0, 2));
	EXPECT_EQ(*b.combined_exact, *b.norm_cost_exact);
}

TEST(Evaluate, FractionalPhiIsFloatingWithTightError) {
	const auto v = objective_from_loads({4, 9}, params(1, 0, Rational(3, 2)));
	EXPECT_FALSE(v.exact());
	EXPECT_NEAR(v.combined, 8.0 + 27.0, 35.0 * 1e-12);
}

TEST(Evaluate, InfeasibleScheduleCarriesViolations) {
	const auto inst = InstanceBuilder().job(2).job(2).machine().supply(0, 1).build();
	Schedule s(1);
	s.machines[0] = {{0, 0}, {1, 1}};
	try {
		evaluate(inst, s);
		FAIL() << "expected InfeasibleScheduleError";
	} catch (const InfeasibleScheduleError& e) {
		EXPECT_EQ(e.violations().size(), 1u);
	}
}

TEST(MachineLoads, IdleCountsAndEmptyIsZero) {
	const auto inst = InstanceBuilder().job(4).job(1).job(1).machine(Rational(1, 2)).machine().machine().supply(0, 1).build();
	Schedule s(3);
	s.machines[0] = {{0, 1}};
	s.machines[1] = {{1, 0}, {2, 10}};
	const auto loads = machine_loads(inst, s);
	EXPECT_EQ(loads[0], 9);
	EXPECT_EQ(loads[1], 11);
	EXPECT_EQ(loads[2], 0);
}

TEST(Validate, RejectsBadInstances) {
	EXPECT_THROW(validate_instance(InstanceBuilder().job(1, 2).machine().supply(0, 1).build()), ValidationError);
	EXPECT_THROW(validate_instance(InstanceBuilder().job(1).machine(Rational(1, 2)).supply(0, 1).build()), ValidationError);
	EXPECT_THROW(validate_instance(InstanceBuilder().job(1).machine().supply(2, 1).supply(2, 1).build()), ValidationError);
	EXPECT_THROW(validate_instance(InstanceBuilder().job(0).machine().supply(0, 1).build()), ValidationError);
	EXPECT_THROW(validate_instance(InstanceBuilder().job(1).machine().supply(0, 0).build()), ValidationError);
	EXPECT_NO_THROW(validate_instance(InstanceBuilder().job(1).machine().supply(0, 0).supply(1, 1).build(), true));
	EXPECT_THROW(validate_params(params(Rational(2, 5))), ValidationError);
	EXPECT_THROW(validate_params(params(1, 2)), ValidationError);
	EXPECT_THROW(validate_params(params(1, 1, 1)), ValidationError);
}

TEST(Preprocess, DropsSlowestSurplusMachines) {
	const auto inst = InstanceBuilder()
	                      .job(1)
	                      .job(1)
	                      .machine(Rational(1, 3))
	                      .machine()
	                      .machine(Rational(1, 2))
	                      .machine(Rational(1, 3))
	                      .supply(0, 1)
	                      .build();
	const auto kept = surplus_free_machines(inst);
	EXPECT_EQ(kept, (std::vector<MachineId>{1, 2}));
	Schedule reduced(2);
	reduced.machines[0] = {{0, 0}};
	reduced.machines[1] = {{1, 0}};
	const auto full = expand_schedule(reduced, kept, inst.m());
	EXPECT_EQ(full.machines[1].size(), 1u);
	EXPECT_EQ(full.machines[2].size(), 1u);
	EXPECT_TRUE(full.machines[0].empty());
	EXPECT_TRUE(verify_schedule(inst, full).empty());
}

TEST(Io, InstanceRoundTrip) {
	const auto inst = eptas::testing::load_fixture("tiny-01.json");
	const auto again = instance_from_json(instance_to_json(inst));
	EXPECT_EQ(instance_to_json(again).dump(), instance_to_json(inst).dump());
	EXPECT_EQ(again.params.rho, inst.params.rho);
}

TEST(Io, ScheduleRoundTripAndErrors) {
	Schedule s(2);
	s.machines[1] = {{0, Rational(7, 3)}, {1, 5}};
	EXPECT_EQ(schedule_from_json(schedule_to_json(s), 2), s);
	EXPECT_THROW(schedule_from_json(schedule_to_json(s), 1), StructuralError);
	EXPECT_THROW(schedule_from_json(Json::parse(R"({"assignments": 3})"), 1), ParseError);
	EXPECT_THROW(instance_from_json(Json::parse(R"({"jobs": []})")), ParseError);
	EXPECT_THROW(parse_rational("1/0"), ParseError);
	EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
}
