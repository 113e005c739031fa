#include "eptas/milp.hpp"
#include "test_support.hpp"
#include "witness_support.hpp"

#include <gtest/gtest.h>

using namespace eptas;
using eptas::testing::InstanceBuilder;
using eptas::testing::params;

namespace {

// eps = 1, rho = 2: a job is big for (s, w) iff w <= p/s <= 2w.
SchemeParams desk() { return params(1, Rational(1, 2), 2, 2); }

const LinearProgram<Rational>::Row* find_row(const LinearProgram<Rational>& lp, const std::string& name) {
	for (const auto& row : lp.rows)
		if (row.name == name) return &row;
	return nullptr;
}

// One big job of processing time (1+eps)^proc_exp in the last window period.
Configuration one_big_job(std::int64_t s_exp, std::int64_t w_exp, std::int64_t proc_exp, const SchemeParams& p) {
	auto c = blank_configuration(s_exp, w_exp, p);
	c.windows.back().big[static_cast<std::size_t>(proc_exp - c.range.delta)] = 1;
	return c;
}

} // namespace

TEST(BuildModel, AssignmentRowHasOneTermPerPeriod) {
	const auto r = round_instance(InstanceBuilder(desk()).job(4).machine().supply(0, 1).build());
	const auto guess = make_guess(r.params(), 2, 0);
	const auto model = build_model(r, guess, {one_big_job(0, 2, 2, r.params())});
	EXPECT_FALSE(model.trivially_infeasible());
	const auto lp = to_linear_program<Rational>(model, r);
	const auto* row = find_row(lp, "assign_j0");
	ASSERT_NE(row, nullptr);
	EXPECT_EQ(row->sense, RowSense::Eq);
	EXPECT_EQ(row->rhs, 1);
	EXPECT_EQ(row->terms.size(), model.configs[0].windows.size());
	// the empty configuration of speed 0 was added
	EXPECT_EQ(model.configs.size(), 2u);
	EXPECT_TRUE(model.configs[1].empty);
}

TEST(BuildModel, HugeEverywhereIsTriviallyInfeasible) {
	const auto r = round_instance(InstanceBuilder(desk()).job(64).job(1).machine().supply(0, 1).build());
	const auto guess = make_guess(r.params(), 1, 0);
	const auto model = build_model(r, guess, {blank_configuration(0, 1, r.params())});
	ASSERT_TRUE(model.trivially_infeasible());
	EXPECT_NE(model.infeasible_reasons.front().find("huge"), std::string::npos);
	EXPECT_FALSE(solve(model, r).feasible());
}

TEST(BuildModel, NoQualifyingConfigurationIsTriviallyInfeasible) {
	const auto r = round_instance(InstanceBuilder(desk()).job(4).machine().supply(0, 1).build());
	const auto guess = make_guess(r.params(), 5, 0); // C_opt = 32 > (1+eps) w for w = 4
	const auto model = build_model(r, guess, {one_big_job(0, 2, 2, r.params())});
	EXPECT_TRUE(model.trivially_infeasible());
}

TEST(Solve, TwoMachinesOneConfiguration) {
	const auto p = desk();
	const auto r = round_instance(InstanceBuilder(p).job(4).job(4).machine().machine().supply(0, 1).build());
	const auto guess = make_guess(p, 2, 0);
	const auto model = build_model(r, guess, {one_big_job(0, 2, 2, p)});
	for (LpMode mode : {LpMode::Exact, LpMode::Floating}) {
		MilpSolveOptions options;
		options.mode = mode;
		const auto sol = solve(model, r, options);
		ASSERT_TRUE(sol.feasible());
		EXPECT_EQ(sol.z[0], 2);
		EXPECT_EQ(sol.z[1], 0);
		// psi C_opt + (1 - psi) 2 w^phi = 2 + 16
		EXPECT_EQ(sol.objective, Rational(1, 2) * 4 + Rational(1, 2) * 2 * 16);
		EXPECT_EQ(sol.variable_objective, 16);
		EXPECT_EQ(sol.nodes, 1u);
		EXPECT_TRUE(check_rows(model, r, sol).empty());
	}
}

TEST(Solve, ResourceRowsBindLateJobs) {
	// the only supply arrives at 20 (rounded to 32): the demanding job carries
	// no mass in earlier periods under any guess
	const auto p = desk();
	const auto r = round_instance(InstanceBuilder(p).job(1, 0).job(1, 1).machine().machine().supply(20, 1).build());
	ASSERT_EQ(r.supplies.front().date_exp, 5);
	const ConfigurationCache cache(p);
	int solved = 0;
	for (const auto& guess : enumerate_guesses(r)) {
		const auto model = build_model(r, guess, model_configurations(r, guess, cache));
		const auto sol = solve(model, r);
		if (!sol.feasible()) continue;
		++solved;
		for (const auto& [key, v] : sol.x)
			if (key.job == 1 && v > 0) {
				EXPECT_GE(key.period, 5);
			}
	}
	EXPECT_GT(solved, 0);
}

TEST(Witness, SingleMachineSingleJob) {
	const auto p = desk();
	const auto r = round_instance(InstanceBuilder(p).job(4).machine().supply(0, 1).build());
	Schedule s(1);
	s.machines[0] = {{0, 4}}; // load 8
	const auto guess = make_guess(p, 3, 0);
	const auto w = construct_witness(r, guess, s);
	ASSERT_EQ(w.configs.size(), 1u);
	EXPECT_EQ(w.counts[0], 1);
	ASSERT_EQ(w.x.size(), 1u);
	EXPECT_EQ(w.x.begin()->second, 1);
	const ConfigurationCache cache(p);
	const auto model = eptas::testing::model_with_witness(r, guess, w, cache);
	const auto sol = embed_witness(model, w);
	EXPECT_TRUE(check_rows(model, r, sol).empty());
}

TEST(Witness, IdenticalMachinesMerge) {
	const auto p = desk();
	const auto r = round_instance(InstanceBuilder(p).job(4).job(4).machine().machine().supply(0, 1).build());
	Schedule s(2);
	s.machines[0] = {{0, 4}};
	s.machines[1] = {{1, 4}};
	const auto w = construct_witness(r, make_guess(p, 3, 0), s);
	ASSERT_EQ(w.configs.size(), 1u);
	EXPECT_EQ(w.counts[0], 2);
}

TEST(Witness, RejectsInconsistentGuess) {
	const auto p = desk();
	const auto r = round_instance(InstanceBuilder(p).job(4).machine().supply(0, 1).build());
	Schedule s(1);
	s.machines[0] = {{0, 4}};
	EXPECT_THROW(construct_witness(r, make_guess(p, 5, 0), s), WitnessError);
	Schedule early(1);
	early.machines[0] = {{0, 0}};
	EXPECT_THROW(construct_witness(r, make_guess(p, 2, 0), early), WitnessError);
}

TEST(Witness, FixturesSatisfyRowsAndBoundTheOptimum) {
	for (const auto& name : eptas::testing::tiny_fixtures()) {
		const auto inst = eptas::testing::load_fixture(name);
		const auto r = round_instance(inst);
		const auto normal = eptas::testing::normalized_optimum(r);
		const auto w = construct_witness(r, normal.guess, normal.schedule);
		const ConfigurationCache cache(r.params());
		const auto model = eptas::testing::model_with_witness(r, normal.guess, w, cache);
		const auto embedded = embed_witness(model, w);
		const auto rows = check_rows(model, r, embedded);
		EXPECT_TRUE(rows.empty()) << name << ": " << (rows.empty() ? "" : rows.front());
		const auto sol = solve(model, r);
		ASSERT_TRUE(sol.feasible()) << name;
		EXPECT_LE(sol.objective, embedded.objective) << name;
		ASSERT_TRUE(normal.value.exact());
		const Rational bound = pow(r.params().one_plus_eps(), static_cast<std::int64_t>(to_double(r.params().phi)));
		EXPECT_LE(sol.objective, bound * *normal.value.combined_exact) << name;
	}
}

TEST(Solve, FloatingAgreesWithExactOnFixtures) {
	for (const auto& name : eptas::testing::tiny_fixtures()) {
		const auto r = round_instance(eptas::testing::load_fixture(name));
		const ConfigurationCache cache(r.params());
		const auto guesses = enumerate_guesses(r);
		for (std::size_t g = 0; g < guesses.size(); g += 3) {
			const auto model = build_model(r, guesses[g], model_configurations(r, guesses[g], cache));
			const auto exact = solve(model, r);
			MilpSolveOptions options;
			options.mode = LpMode::Floating;
			const auto fl = solve(model, r, options);
			ASSERT_EQ(exact.feasible(), fl.feasible()) << name << " guess " << g;
			if (!exact.feasible()) continue;
			EXPECT_TRUE(check_rows(model, r, exact).empty());
			EXPECT_NEAR(to_double(fl.objective), to_double(exact.objective), 1e-6 * std::max(1.0, to_double(exact.objective)));
		}
	}
}

TEST(Prune, KeepsTheOptimum) {
	for (const auto& name : eptas::testing::tiny_fixtures()) {
		const auto r = round_instance(eptas::testing::load_fixture(name));
		const ConfigurationCache cache(r.params());
		const auto guesses = enumerate_guesses(r);
		for (std::size_t g = 0; g < guesses.size(); g += 4) {
			MilpSolveOptions options;
			options.mode = LpMode::Floating;
			const auto full = solve(build_model(r, guesses[g], model_configurations(r, guesses[g], cache, false)), r, options);
			const auto pruned = solve(build_model(r, guesses[g], model_configurations(r, guesses[g], cache, true)), r, options);
			ASSERT_EQ(full.feasible(), pruned.feasible()) << name;
			if (full.feasible()) {
				EXPECT_NEAR(to_double(full.objective), to_double(pruned.objective), 1e-6 * std::max(1.0, to_double(full.objective)));
			}
		}
	}
}

TEST(DumpLp, HasTheStandardSections) {
	const auto p = desk();
	const auto r = round_instance(InstanceBuilder(p).job(4).job(4).machine().machine().supply(0, 1).build());
	const auto model = build_model(r, make_guess(p, 2, 0), {one_big_job(0, 2, 2, p)});
	const auto text = dump_lp(model, r);
	for (const char* section : {"Minimize", "Subject To", "Bounds", "General", "End", "assign_j0:", "machines_s0:", "guess:"})
		EXPECT_NE(text.find(section), std::string::npos) << section;
}
