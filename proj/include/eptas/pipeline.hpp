#ifndef EPTAS_PIPELINE_HPP
#define EPTAS_PIPELINE_HPP

#include "eptas/config.hpp"
#include "eptas/extract.hpp"
#include "eptas/guess.hpp"
#include "eptas/io.hpp"
#include "eptas/milp.hpp"
#include "eptas/model.hpp"
#include "eptas/oracle.hpp"
#include "eptas/rounding.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace eptas {

enum class Preset { Paper, Desk, Instance };

inline const char* to_string(Preset p) {
	switch (p) {
	case Preset::Paper: return "paper";
	case Preset::Desk: return "desk";
	case Preset::Instance: return "instance";
	}
	return "?";
}

inline Preset parse_preset(const std::string& name) {
	if (name == "paper") return Preset::Paper;
	if (name == "desk") return Preset::Desk;
	if (name == "instance") return Preset::Instance;
	throw ValidationError("unknown preset '" + name + "' (expected paper, desk or instance)");
}

// paper: rho = 10 with the instance's eps; desk: eps = 1, rho = 2; instance:
// parameters as given. psi and phi always come from the instance.
inline SchemeParams apply_preset(SchemeParams params, Preset preset) {
	switch (preset) {
	case Preset::Paper: params.rho = 10; break;
	case Preset::Desk:
		params.epsilon = 1;
		params.rho = 2;
		break;
	case Preset::Instance: break;
	}
	return params;
}

struct PipelineOptions {
	Preset preset = Preset::Desk;
	std::optional<std::size_t> max_guesses;
	unsigned threads = 1;
	LpMode lp_mode = LpMode::Exact;
	std::uint64_t config_cap = kDefaultConfigurationCap;
	std::size_t node_limit = 2'000;
	bool prune = true;
	bool compare_exact = false;
	OracleLimits oracle_limits;
};

struct GuessRecord {
	Guess guess;
	std::string status; // ok | model_infeasible | milp_infeasible | node_limit | row_check_failed | extraction_failed | resource_failure
	std::string detail;
	std::size_t configs = 0;
	std::size_t integral_configs = 0;
	std::size_t assign_columns = 0;
	std::size_t nodes = 0;
	std::size_t lp_iterations = 0;
	std::optional<Rational> milp_objective;
	std::size_t virtual_machines = 0;
	std::size_t leftover = 0;
	std::size_t virtual_jobs = 0;
	Rational virtual_mass = 0;
	std::optional<bool> leftover_lemma;
	std::vector<std::string> leftover_problems;
	std::optional<Rational> worst_load_ratio;
	std::optional<ObjectiveValue> value; // on the original instance
	std::optional<double> extraction_ratio; // final cost / MILP objective
	double wall_ms = 0;
};

struct RunReport {
	Preset preset = Preset::Desk;
	SchemeParams params;
	std::vector<GuessRecord> guesses;
	std::size_t guess_count = 0;
	std::optional<std::size_t> chosen;
	bool fallback = false;
	std::vector<std::string> warnings;
	Schedule schedule;
	ObjectiveValue value;
	std::optional<ObjectiveValue> exact;
	std::optional<double> exact_ratio;
	double wall_ms = 0;
};

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
	return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

struct GuessOutcome {
	GuessRecord record;
	std::optional<Schedule> schedule; // on the solved (machine-reduced) instance
};

inline GuessOutcome run_guess(const Instance& instance, const RoundedInstance& r, const Guess& guess,
                              const ConfigurationCache& cache, const PipelineOptions& options) {
	const auto t0 = std::chrono::steady_clock::now();
	GuessOutcome out;
	auto& rec = out.record;
	rec.guess = guess;
	const auto finish = [&] { rec.wall_ms = elapsed_ms(t0); };

	auto model = build_model(r, guess, model_configurations(r, guess, cache, options.prune));
	rec.configs = model.configs.size();
	rec.integral_configs = model.integral_count();
	rec.assign_columns = model.assign.size();
	if (model.trivially_infeasible()) {
		rec.status = "model_infeasible";
		rec.detail = model.infeasible_reasons.front();
		finish();
		return out;
	}
	MilpSolveOptions solve_options;
	solve_options.mode = options.lp_mode;
	solve_options.branch.node_limit = options.node_limit;
	MilpSolution sol;
	try {
		sol = solve(model, r, solve_options);
	} catch (const MilpRowError& e) {
		rec.status = "row_check_failed";
		rec.detail = e.what();
		finish();
		return out;
	}
	rec.nodes = sol.nodes;
	rec.lp_iterations = sol.lp_iterations;
	if (!sol.feasible()) {
		rec.status = sol.status == MipStatus::NodeLimit ? "node_limit" : "milp_infeasible";
		finish();
		return out;
	}
	rec.milp_objective = sol.objective;
	try {
		const auto assignment = assign_configurations(r, model, sol);
		for (const auto& slot : assignment.slots) rec.virtual_machines += slot.is_virtual;
		const auto placement = place_jobs(r, model, sol, assignment);
		const auto lemma = check_leftover(r, model, assignment, placement);
		rec.leftover_lemma = lemma.holds;
		rec.leftover_problems = lemma.problems;
		auto fin = finalize(r, model, assignment, placement);
		rec.leftover = fin.leftover_count;
		rec.virtual_jobs = fin.virtual_job_count;
		rec.virtual_mass = fin.virtual_mass;
		rec.worst_load_ratio = fin.worst_load_ratio;
		if (!fin.feasible) {
			rec.status = "resource_failure";
			rec.detail = fin.violations.front().describe();
			finish();
			return out;
		}
		auto lifted = lift_schedule_to_original(r, fin.schedule);
		rec.value = evaluate(instance, lifted);
		rec.extraction_ratio = sol.objective > 0 ? rec.value->combined / to_double(sol.objective) : 1.0;
		out.schedule = std::move(lifted);
		rec.status = "ok";
	} catch (const ExtractionError& e) {
		rec.status = "extraction_failed";
		rec.detail = e.what();
	}
	finish();
	return out;
}

} // namespace detail

// The machine-reduced, rounded instance and its guess list under a preset.
struct PreparedRun {
	SchemeParams params;
	std::vector<MachineId> kept;
	Instance instance;
	RoundedInstance rounded;
	std::vector<Guess> guesses;
	std::size_t guess_count = 0;
};

inline PreparedRun prepare_run(const Instance& input, const PipelineOptions& options) {
	validate_instance(input);
	PreparedRun run;
	run.params = apply_preset(input.params, options.preset);
	validate_params(run.params);
	run.kept = surplus_free_machines(input);
	run.instance = restrict_machines(input, run.kept);
	run.instance.params = run.params;
	run.rounded = round_instance(run.instance);
	run.guesses = enumerate_guesses(run.rounded);
	run.guess_count = run.guesses.size();
	if (options.max_guesses && run.guesses.size() > *options.max_guesses) run.guesses.resize(*options.max_guesses);
	return run;
}

// Rounds the instance, runs every guess and keeps the cheapest feasible
// schedule (earliest guess on ties). Falls back to the greedy baseline when no
// guess produces one. The returned schedule is verified on `input`.
inline RunReport solve_instance(const Instance& input, const PipelineOptions& options = {}) {
	const auto t0 = std::chrono::steady_clock::now();
	const PreparedRun run = prepare_run(input, options);
	const auto& instance = run.instance;
	const auto& r = run.rounded;
	const auto& guesses = run.guesses;
	RunReport report;
	report.preset = options.preset;
	report.params = run.params;
	report.guess_count = run.guess_count;

	std::vector<detail::GuessOutcome> outcomes(guesses.size());
	if (!guesses.empty()) {
		const ConfigurationCache cache(report.params, options.config_cap);
		std::atomic<std::size_t> next{0};
		const auto worker = [&] {
			for (std::size_t i = next++; i < guesses.size(); i = next++)
				outcomes[i] = detail::run_guess(instance, r, guesses[i], cache, options);
		};
		const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(guesses.size())));
		if (threads == 1) {
			worker();
		} else {
			std::vector<std::thread> pool;
			for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
			for (auto& th : pool) th.join();
		}
	} else {
		report.warnings.push_back("no machine has speed at least eps^2; no guess to run");
	}

	std::optional<std::size_t> best;
	for (std::size_t i = 0; i < outcomes.size(); ++i) {
		report.guesses.push_back(outcomes[i].record);
		if (!outcomes[i].schedule) continue;
		if (!best || cost_less(*outcomes[i].record.value, *outcomes[*best].record.value)) best = i;
	}
	Schedule reduced;
	if (best) {
		report.chosen = best;
		reduced = *outcomes[*best].schedule;
	} else {
		report.fallback = true;
		report.warnings.push_back("WARNING: no guess produced a feasible schedule; greedy baseline used");
		reduced = greedy_baseline(instance);
	}
	report.schedule = expand_schedule(reduced, run.kept, input.m());
	report.value = evaluate(input, report.schedule);

	if (options.compare_exact) {
		try {
			const auto exact = exact_optimum(input, options.oracle_limits);
			report.exact = exact.value;
			report.exact_ratio = exact.value.combined > 0 ? report.value.combined / exact.value.combined : 1.0;
		} catch (const OracleLimitError& e) {
			report.warnings.push_back(std::string("exact comparison skipped: ") + e.what());
		}
	}
	report.wall_ms = detail::elapsed_ms(t0);
	return report;
}

inline Json guess_record_to_json(const GuessRecord& g, bool timings) {
	Json doc;
	doc["c_opt_exp"] = g.guess.c_opt_exp;
	doc["s_opt_exp"] = g.guess.s_opt_exp;
	doc["lambda"] = g.guess.lambda;
	doc["kappa"] = to_string(g.guess.kappa);
	doc["status"] = g.status;
	if (!g.detail.empty()) doc["detail"] = g.detail;
	doc["configurations"] = g.configs;
	doc["integral_configurations"] = g.integral_configs;
	doc["assignment_columns"] = g.assign_columns;
	doc["nodes"] = g.nodes;
	doc["lp_iterations"] = g.lp_iterations;
	doc["milp_objective"] = g.milp_objective ? Json(to_string(*g.milp_objective)) : Json(nullptr);
	doc["virtual_machines"] = g.virtual_machines;
	doc["leftover"] = g.leftover;
	doc["virtual_jobs"] = g.virtual_jobs;
	doc["virtual_mass"] = to_string(g.virtual_mass);
	doc["leftover_lemma"] = g.leftover_lemma ? Json(*g.leftover_lemma) : Json(nullptr);
	if (!g.leftover_problems.empty()) doc["leftover_problems"] = g.leftover_problems;
	doc["worst_load_ratio"] = g.worst_load_ratio ? Json(to_string(*g.worst_load_ratio)) : Json(nullptr);
	doc["objective"] = g.value ? objective_to_json(*g.value) : Json(nullptr);
	doc["extraction_ratio"] = g.extraction_ratio ? Json(*g.extraction_ratio) : Json(nullptr);
	if (timings) doc["wall_ms"] = g.wall_ms;
	return doc;
}

inline Json report_to_json(const RunReport& report, bool timings = false) {
	Json doc;
	doc["preset"] = to_string(report.preset);
	doc["params"] = params_to_json(report.params);
	doc["guess_count"] = report.guess_count;
	doc["guesses_run"] = report.guesses.size();
	doc["chosen_guess"] = report.chosen ? Json(*report.chosen) : Json(nullptr);
	doc["fallback"] = report.fallback;
	doc["warnings"] = report.warnings;
	doc["objective"] = objective_to_json(report.value);
	if (report.exact) {
		doc["exact_objective"] = objective_to_json(*report.exact);
		doc["ratio_vs_exact"] = *report.exact_ratio;
	}
	doc["guesses"] = Json::array();
	for (const auto& g : report.guesses) doc["guesses"].push_back(guess_record_to_json(g, timings));
	if (timings) doc["wall_ms"] = report.wall_ms;
	return doc;
}

// (1+eps)^{6 phi} (1+6 eps)^phi
inline double end_to_end_bound(const SchemeParams& params) {
	const double eps = to_double(params.epsilon);
	const double phi = params.phi_double();
	return std::pow(1 + eps, 6 * phi) * std::pow(1 + 6 * eps, phi);
}

struct GeneratorOptions {
	std::uint64_t seed = 1;
	std::size_t n = 6;
	std::size_t m = 2;
	std::size_t e = 2;
	std::string profile = "uniform";
	Rational slack = 1;
	SchemeParams params;
};

namespace detail {
// Uniform integer in [lo, hi] from the raw 64-bit stream, so instances are the
// same on every standard library.
inline std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
	return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}
} // namespace detail

// Profiles:
//   uniform: sizes 1..10, demands 0..5, supply gaps 1..8
//   tight:   sizes 1..6, demands 1..5, supply gaps 2..12
//   loose:   sizes 1..10, demands 0..2, supply gaps 1..3
// Machine 0 has speed 1, the others one of {1, 3/4, 1/2, 1/3, 1/4}. The first
// supply is at date 0; quantities are integer weights 1..5 scaled so that
// sum q = slack * sum d. At least one job has positive demand.
inline Instance generate_instance(const GeneratorOptions& opt) {
	if (opt.n == 0 || opt.m == 0 || opt.e == 0) throw ValidationError("n, m and e must be positive");
	if (opt.slack < 1) throw ValidationError("slack must be at least 1");
	std::int64_t size_hi = 10, demand_lo = 0, demand_hi = 5, gap_lo = 1, gap_hi = 8;
	if (opt.profile == "tight") {
		size_hi = 6;
		demand_lo = 1;
		gap_lo = 2;
		gap_hi = 12;
	} else if (opt.profile == "loose") {
		demand_hi = 2;
		gap_hi = 3;
	} else if (opt.profile != "uniform") {
		throw ValidationError("unknown profile '" + opt.profile + "' (expected uniform, tight or loose)");
	}
	std::mt19937_64 rng(opt.seed);
	Instance inst;
	inst.params = opt.params;
	Rational total_demand = 0;
	for (std::size_t j = 0; j < opt.n; ++j) {
		Job job{Rational(detail::draw(rng, 1, size_hi)), Rational(detail::draw(rng, demand_lo, demand_hi))};
		total_demand += job.demand;
		inst.jobs.push_back(job);
	}
	if (total_demand == 0) {
		inst.jobs[0].demand = 1;
		total_demand = 1;
	}
	static const Rational speeds[] = {Rational(1), Rational(3, 4), Rational(1, 2), Rational(1, 3), Rational(1, 4)};
	inst.machines.push_back({Rational(1)});
	for (std::size_t i = 1; i < opt.m; ++i) inst.machines.push_back({speeds[detail::draw(rng, 0, 4)]});
	std::vector<std::int64_t> weights;
	std::int64_t weight_sum = 0;
	Rational date = 0;
	for (std::size_t k = 0; k < opt.e; ++k) {
		if (k > 0) date += detail::draw(rng, gap_lo, gap_hi);
		weights.push_back(detail::draw(rng, 1, 5));
		weight_sum += weights.back();
		inst.supplies.push_back({date, 0});
	}
	const Rational total = opt.slack * total_demand;
	for (std::size_t k = 0; k < opt.e; ++k) inst.supplies[k].quantity = total * weights[k] / weight_sum;
	return inst;
}

} // namespace eptas

#endif
