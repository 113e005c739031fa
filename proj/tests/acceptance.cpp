// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "eptas/lp.hpp"
#include "eptas/pipeline.hpp"
#include "lp_oracle.hpp"
#include "test_support.hpp"
#include "witness_support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace eptas;

namespace {

struct Outcome {
	bool pass = true;
	std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Leftover-lemma results gathered from every pipeline run below.
struct LemmaTally {
	std::size_t checked = 0;
	std::vector<std::string> failures;

	void add(const RunReport& report, const std::string& label) {
		for (const auto& g : report.guesses) {
			if (!g.leftover_lemma) continue;
			++checked;
			if (!*g.leftover_lemma)
				failures.push_back(label + " guess (" + std::to_string(g.guess.c_opt_exp) + "," +
				                   std::to_string(g.guess.s_opt_exp) + "): " + g.leftover_problems.front());
		}
	}
};

LemmaTally lemma_tally;

Rational phi_power(const SchemeParams& p, std::int64_t times) {
	return pow(p.one_plus_eps(), times * static_cast<std::int64_t>(to_double(p.phi)));
}

// 200 seeded instances, n <= 10, m <= 4, e <= 4, desk preset. Each output is
// verified exactly on the original instance.
Outcome feasibility_suite() {
	const auto t0 = Clock::now();
	static const char* profiles[] = {"uniform", "tight", "loose"};
	Outcome out;
	std::size_t fallbacks = 0;
	for (std::uint64_t seed = 1; seed <= 200; ++seed) {
		GeneratorOptions g;
		g.seed = seed;
		g.n = 1 + seed % 10;
		g.m = 1 + (seed / 10) % 4;
		g.e = 1 + (seed / 40) % 4;
		g.profile = profiles[seed % 3];
		g.params.epsilon = 1;
		const auto inst = generate_instance(g);
		PipelineOptions options;
		options.lp_mode = LpMode::Floating;
		const auto report = solve_instance(inst, options);
		lemma_tally.add(report, "seed " + std::to_string(seed));
		fallbacks += report.fallback;
		const auto violations = verify_schedule(inst, report.schedule);
		if (!violations.empty() && out.pass) {
			out.pass = false;
			out.detail = "seed " + std::to_string(seed) + ": " + violations.front().describe() + "; ";
		}
	}
	const double secs = seconds_since(t0);
	if (secs >= 600) out.pass = false;
	std::ostringstream s;
	s << out.detail << "200 instances, " << fallbacks << " greedy fallbacks, " << secs << " s (budget 600 s)";
	out.detail = s.str();
	return out;
}

// push to rounded: feasible, cost <= (1+eps)^{3 phi} times; lift back: feasible,
// cost not larger. Exact comparisons.
Outcome rounding_round_trip() {
	std::mt19937_64 rng(2024);
	Outcome out;
	for (int t = 0; t < 100; ++t) {
		const Rational eps = t % 2 == 0 ? Rational(1) : Rational(1, 2);
		const auto inst = eptas::testing::random_instance(rng, 1 + rng() % 8, 1 + rng() % 3, 1 + rng() % 3,
		                                                  eptas::testing::params(eps, Rational(1, 2), 2));
		const auto s = eptas::testing::random_feasible_schedule(inst, rng);
		const auto r = round_instance(inst);
		const auto rounded = r.materialize();
		const auto pushed = push_schedule_to_rounded(inst, r, s);
		std::string problem;
		if (!verify_schedule(rounded, pushed).empty()) problem = "pushed schedule infeasible";
		else if (!cost_within(evaluate(rounded, pushed), phi_power(inst.params, 3), evaluate(inst, s)))
			problem = "pushed cost above (1+eps)^{3 phi}";
		else {
			const auto lifted = lift_schedule_to_original(r, pushed);
			if (!verify_schedule(inst, lifted).empty()) problem = "lifted schedule infeasible";
			else if (!cost_within(evaluate(inst, lifted), Rational(1), evaluate(rounded, pushed)))
				problem = "lifted cost larger";
		}
		if (!problem.empty()) {
			out.pass = false;
			out.detail = "case " + std::to_string(t) + ": " + problem;
			return out;
		}
	}
	out.detail = "100 schedules";
	return out;
}

// After stretching: at most mu~ active periods per machine, loads exactly
// (1+eps) times, cost within (1+eps)^phi.
Outcome window_property() {
	std::mt19937_64 rng(77);
	Outcome out;
	for (int t = 0; t < 150; ++t) {
		static const Rational eps_values[] = {Rational(1), Rational(1, 2), Rational(1, 3)};
		const auto p = eptas::testing::params(eps_values[t % 3], Rational(1, 2), 2);
		const auto inst = eptas::testing::random_instance(rng, 1 + rng() % 7, 1 + rng() % 3, 1 + rng() % 3, p);
		const auto s = eptas::testing::random_feasible_schedule(inst, rng);
		const auto out_s = stretch_to_window(inst, s);
		const auto before = machine_loads(inst, s);
		const auto after = machine_loads(inst, out_s);
		std::string problem;
		if (!verify_schedule(inst, out_s).empty()) problem = "stretched schedule infeasible";
		for (MachineId i = 0; i < inst.m() && problem.empty(); ++i) {
			if (after[i] != p.one_plus_eps() * before[i]) problem = "load not scaled exactly";
			const auto w = activity_window(inst, out_s, i);
			if (w && w->length() > mu_tilde(p)) problem = "machine active in more than mu~ periods";
		}
		if (problem.empty() && !cost_within(evaluate(inst, out_s), phi_power(p, 1), evaluate(inst, s)))
			problem = "cost above (1+eps)^phi";
		if (!problem.empty()) {
			out.pass = false;
			out.detail = "case " + std::to_string(t) + ": " + problem;
			return out;
		}
	}
	out.detail = "150 schedules at eps in {1, 1/2, 1/3}";
	return out;
}

// Every (s, w) pair any guess can use on the fixtures, under the desk and the
// paper preset.
Outcome census_bound() {
	Outcome out;
	std::size_t pairs_checked = 0;
	for (const auto& name : eptas::testing::tiny_fixtures()) {
		for (int rho : {2, 10}) {
			auto inst = eptas::testing::load_fixture(name);
			inst.params.rho = rho;
			const auto r = round_instance(inst);
			std::set<PairKey> pairs;
			for (const auto& g : enumerate_guesses(r))
				for (const auto& key : candidate_pairs(r, g)) pairs.insert(key);
			for (const auto& key : pairs) {
				const auto count = enumerate_configurations(key.s_exp, key.w_exp, r.params()).size();
				const auto lambda = lambda_for(r.scale.pow(key.s_exp), r.scale.pow(key.w_exp), r.params());
				++pairs_checked;
				if (Rational(static_cast<long>(count)) > configuration_count_bound(r.params(), lambda)) {
					out.pass = false;
					out.detail = name + " pair (" + std::to_string(key.s_exp) + "," + std::to_string(key.w_exp) + ")";
					return out;
				}
			}
		}
	}
	out.detail = std::to_string(pairs_checked) + " pairs";
	return out;
}

// Witness from the oracle-optimal normalized schedule satisfies every row
// exactly; the exact MILP optimum is within (1+eps)^phi of that schedule.
Outcome witness_bound() {
	Outcome out;
	std::ostringstream s;
	for (const auto& name : eptas::testing::tiny_fixtures()) {
		const auto r = round_instance(eptas::testing::load_fixture(name));
		const auto normal = eptas::testing::normalized_optimum(r);
		const auto w = construct_witness(r, normal.guess, normal.schedule);
		const ConfigurationCache cache(r.params());
		const auto model = eptas::testing::model_with_witness(r, normal.guess, w, cache);
		const auto rows = check_rows(model, r, embed_witness(model, w));
		if (!rows.empty()) {
			out.pass = false;
			s << name << ": " << rows.front() << "; ";
			continue;
		}
		const auto sol = solve(model, r);
		const Rational bound = phi_power(r.params(), 1) * *normal.value.combined_exact;
		if (!sol.feasible() || !sol.exact || sol.objective > bound) {
			out.pass = false;
			s << name << ": objective above bound; ";
			continue;
		}
		s << name << " " << to_double(sol.objective / *normal.value.combined_exact) << " ";
	}
	out.detail = "objective / normalized optimum: " + s.str();
	return out;
}

// 50 random models, at most 3 integral columns and 30 columns: branch and bound
// against fixing every integral grid point and solving the LP. Exact.
Outcome milp_correctness() {
	const auto t0 = Clock::now();
	std::mt19937_64 rng(50);
	Outcome out;
	int feasible = 0;
	for (int t = 0; t < 50; ++t) {
		const std::size_t cols = 4 + rng() % 27;
		const auto lp = eptas::testing::random_lp(rng, cols, 2 + rng() % 8);
		std::vector<bool> flags(cols, false);
		const std::size_t k = 1 + rng() % 3;
		for (std::size_t f = 0; f < k; ++f) flags[rng() % cols] = true;
		const auto oracle = eptas::testing::grid_optimum(lp, flags);
		const auto sol = branch_and_bound(lp, flags);
		const bool ok = oracle ? sol.status == MipStatus::Optimal && sol.objective == *oracle
		                       : sol.status == MipStatus::Infeasible;
		feasible += oracle.has_value();
		if (!ok) {
			out.pass = false;
			out.detail = "case " + std::to_string(t) + " disagrees; ";
			break;
		}
	}
	const double secs = seconds_since(t0);
	if (secs >= 120) out.pass = false;
	std::ostringstream s;
	s << out.detail << "50 models (" << feasible << " feasible), " << secs << " s (budget 120 s)";
	out.detail = s.str();
	return out;
}

// Pipeline cost over the exact optimum on the fixtures, against the end-to-end
// bound. The paper preset is used where its configuration spaces stay within
// the cap, else desk.
Outcome end_to_end_ratio() {
	Outcome out;
	std::ostringstream s;
	double worst = 0;
	for (const auto& name : eptas::testing::tiny_fixtures()) {
		const auto inst = eptas::testing::load_fixture(name);
		PipelineOptions options;
		options.preset = Preset::Paper;
		options.compare_exact = true;
		RunReport report;
		try {
			report = solve_instance(inst, options);
		} catch (const IntractableParameters&) {
			options.preset = Preset::Desk;
			report = solve_instance(inst, options);
		}
		lemma_tally.add(report, name);
		if (!verify_schedule(inst, report.schedule).empty() || !report.exact_ratio) {
			out.pass = false;
			s << name << " infeasible or uncompared; ";
			continue;
		}
		const double bound = end_to_end_bound(report.params);
		const double ratio = *report.exact_ratio;
		worst = std::max(worst, ratio);
		if (ratio > bound) out.pass = false;
		s << name << " " << to_string(options.preset) << " " << ratio << (report.fallback ? " (fallback)" : "") << "; ";
	}
	s << "worst " << worst << ", bound " << end_to_end_bound(eptas::testing::params(1));
	out.detail = s.str();
	return out;
}

Outcome leftover_lemma() {
	Outcome out;
	out.pass = lemma_tally.checked > 0 && lemma_tally.failures.empty();
	out.detail = std::to_string(lemma_tally.checked) + " extractions checked";
	if (!lemma_tally.failures.empty())
		out.detail += ", " + std::to_string(lemma_tally.failures.size()) + " failed; first: " + lemma_tally.failures.front();
	return out;
}

// Two runs with one thread and the same seed give byte-identical reports.
Outcome determinism() {
	Outcome out;
	for (std::uint64_t seed : {3u, 11u, 29u}) {
		GeneratorOptions g;
		g.seed = seed;
		g.n = 8;
		g.m = 3;
		g.e = 3;
		g.params.epsilon = 1;
		PipelineOptions options;
		options.threads = 1;
		const auto a = report_to_json(solve_instance(generate_instance(g), options)).dump();
		const auto b = report_to_json(solve_instance(generate_instance(g), options)).dump();
		if (a != b) {
			out.pass = false;
			out.detail = "seed " + std::to_string(seed) + " differs";
			return out;
		}
	}
	out.detail = "3 seeds, exact LP";
	return out;
}

} // namespace

int main() {
	const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
	    {"1 feasibility suite", feasibility_suite},
	    {"2 rounding round trip", rounding_round_trip},
	    {"3 window property", window_property},
	    {"4 configuration census bound", census_bound},
	    {"5 witness bound", witness_bound},
	    {"6 milp correctness", milp_correctness},
	    {"7 end-to-end ratio", end_to_end_ratio},
	    {"8 leftover lemma", leftover_lemma},
	    {"9 determinism", determinism},
	};
	bool all = true;
	for (const auto& [name, run] : criteria) {
		Outcome o;
		try {
			o = run();
		} catch (const std::exception& e) {
			o.pass = false;
			o.detail = std::string("exception: ") + e.what();
		}
		all = all && o.pass;
		std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << o.detail << std::endl;
	}
	return all ? 0 : 1;
}
