#include "eptas/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace eptas;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1; // I/O and other unexpected failures
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIntractable = 4;

struct SolveFlags {
	std::string preset = "desk";
	std::optional<std::size_t> max_guesses;
	unsigned threads = 1;
	std::string lp = "exact";
	std::uint64_t config_cap = kDefaultConfigurationCap;
	std::size_t node_limit = 2'000;
	bool no_prune = false;
	bool timings = false;

	PipelineOptions options() const {
		PipelineOptions o;
		o.preset = parse_preset(preset);
		o.max_guesses = max_guesses;
		o.threads = threads;
		if (lp == "exact") o.lp_mode = LpMode::Exact;
		else if (lp == "float") o.lp_mode = LpMode::Floating;
		else throw ValidationError("--lp must be exact or float");
		o.config_cap = config_cap;
		o.node_limit = node_limit;
		o.prune = !no_prune;
		return o;
	}
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
	cmd->add_option("--preset", f.preset, "paper (rho=10), desk (eps=1, rho=2) or instance")->capture_default_str();
	cmd->add_option("--max-guesses", f.max_guesses, "run only the first N guesses (voids the guarantee)");
	cmd->add_option("--threads", f.threads, "worker threads over guesses")->capture_default_str();
	cmd->add_option("--lp", f.lp, "LP arithmetic: exact or float")->capture_default_str();
	cmd->add_option("--config-cap", f.config_cap, "refuse pairs with more raw configurations")->capture_default_str();
	cmd->add_option("--node-limit", f.node_limit, "branch-and-bound nodes per guess")->capture_default_str();
	cmd->add_flag("--no-prune", f.no_prune, "keep configurations that no job set can fill");
	cmd->add_flag("--timings", f.timings, "include wall times in reports");
}

Instance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

void write_text(const std::string& path, const std::string& text) {
	std::ofstream out(path);
	if (!out) throw std::runtime_error("cannot write " + path);
	out << text;
}

void emit_json(const std::optional<std::string>& path, const Json& doc) {
	if (path) write_json_file(*path, doc);
	else std::cout << doc.dump(2) << "\n";
}

// The model of the chosen guess, or of the first guess when none was chosen.
std::optional<std::pair<MilpModel, RoundedInstance>> model_for_report(const Instance& instance, const PipelineOptions& options,
                                                                     const RunReport& report) {
	const auto run = prepare_run(instance, options);
	if (run.guesses.empty()) return std::nullopt;
	const auto& guess = run.guesses[report.chosen.value_or(0)];
	const ConfigurationCache cache(run.params, options.config_cap);
	return std::make_pair(build_model(run.rounded, guess, model_configurations(run.rounded, guess, cache, options.prune)),
	                      run.rounded);
}

std::string config_census(const Instance& instance, const PipelineOptions& options) {
	const auto run = prepare_run(instance, options);
	std::ostringstream os;
	os << "s_exp,w_exp,count\n";
	if (run.guesses.empty()) return os.str();
	const ConfigurationCache cache(run.params, options.config_cap);
	std::set<std::pair<std::int64_t, std::int64_t>> pairs;
	for (const auto& g : run.guesses)
		for (const auto& key : candidate_pairs(run.rounded, g)) pairs.insert({key.s_exp, key.w_exp});
	for (const auto& [s, w] : pairs) os << s << "," << w << "," << cache.base().size() << "\n";
	return os.str();
}

int cmd_generate(const GeneratorOptions& g, const std::optional<std::string>& out) {
	emit_json(out, instance_to_json(generate_instance(g)));
	return kExitOk;
}

struct SolveOutputs {
	std::optional<std::string> schedule;
	std::optional<std::string> report;
	std::optional<std::string> dump_rounded;
	std::optional<std::string> dump_configs;
	std::optional<std::string> dump_lp;
	std::optional<std::string> trace;
	bool compare_exact = false;
};

int cmd_solve(const std::string& path, const SolveFlags& flags, const SolveOutputs& out) {
	const auto instance = load_instance(path);
	auto options = flags.options();
	options.compare_exact = out.compare_exact;
	if (out.dump_rounded) write_json_file(*out.dump_rounded, rounded_to_json(prepare_run(instance, options).rounded));
	if (out.dump_configs) write_text(*out.dump_configs, config_census(instance, options));
	const auto report = solve_instance(instance, options);
	require_feasible(instance, report.schedule);
	for (const auto& w : report.warnings) std::cerr << w << "\n";
	if (out.dump_lp) {
		const auto built = model_for_report(instance, options, report);
		write_text(*out.dump_lp, built ? dump_lp(built->first, built->second) : std::string("\\ no guess\nEnd\n"));
	}
	if (out.trace) {
		Json trace = Json::array();
		for (const auto& g : report.guesses) trace.push_back(guess_record_to_json(g, flags.timings));
		write_json_file(*out.trace, trace);
	}
	if (out.schedule) write_json_file(*out.schedule, schedule_to_json(report.schedule));
	Json doc = report_to_json(report, flags.timings);
	if (!out.schedule) doc["schedule"] = schedule_to_json(report.schedule);
	emit_json(out.report, doc);
	return kExitOk;
}

int cmd_exact(const std::string& path, const std::optional<std::string>& out) {
	const auto instance = load_instance(path);
	validate_instance(instance);
	const auto result = exact_optimum(instance);
	Json doc;
	doc["objective"] = objective_to_json(result.value);
	doc["nodes"] = result.nodes;
	doc["schedule"] = schedule_to_json(result.schedule);
	emit_json(out, doc);
	return kExitOk;
}

int cmd_verify(const std::string& instance_path, const std::string& schedule_path) {
	const auto instance = load_instance(instance_path);
	validate_instance(instance);
	auto doc_in = read_json_file(schedule_path);
	// solve reports and exact outputs carry the schedule under "schedule"
	if (!doc_in.contains("assignments") && doc_in.contains("schedule")) doc_in = Json(doc_in["schedule"]);
	const auto schedule = schedule_from_json(doc_in, instance.m());
	const auto violations = verify_schedule(instance, schedule);
	Json doc;
	doc["feasible"] = violations.empty();
	doc["violations"] = Json::array();
	for (const auto& v : violations) doc["violations"].push_back(v.describe());
	if (violations.empty()) doc["objective"] = objective_to_json(evaluate(instance, schedule));
	std::cout << doc.dump(2) << "\n";
	return violations.empty() ? kExitOk : kExitInfeasible;
}

std::string csv_number(double v) {
	std::ostringstream os;
	os << std::setprecision(10) << v;
	return os.str();
}

int cmd_bench(const std::string& dir, const SolveFlags& flags, const std::optional<std::string>& out) {
	auto options = flags.options();
	std::vector<fs::path> files;
	for (const auto& entry : fs::directory_iterator(dir))
		if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
	std::sort(files.begin(), files.end());
	std::ostringstream csv;
	csv << "instance,n,m,e,epsilon,alg_cost,exact_cost,ratio,bound,wall_ms,status\n";
	for (const auto& file : files) {
		const auto name = file.filename().string();
		try {
			const auto instance = load_instance(file.string());
			const auto report = solve_instance(instance, options);
			require_feasible(instance, report.schedule);
			std::string exact_cost, ratio;
			try {
				const auto exact = exact_optimum(instance);
				exact_cost = csv_number(exact.value.combined);
				ratio = csv_number(exact.value.combined > 0 ? report.value.combined / exact.value.combined : 1.0);
			} catch (const OracleLimitError&) {
			}
			csv << name << "," << instance.n() << "," << instance.m() << "," << instance.e() << ","
			    << to_string(report.params.epsilon) << "," << csv_number(report.value.combined) << "," << exact_cost << ","
			    << ratio << "," << csv_number(end_to_end_bound(report.params)) << ","
			    << csv_number(report.wall_ms) << ","
			    << (report.fallback ? "fallback" : "ok") << "\n";
		} catch (const std::exception& e) {
			std::cerr << name << ": " << e.what() << "\n";
			csv << name << ",,,,,,,,,,invalid\n";
		}
	}
	if (out) write_text(*out, csv.str());
	else std::cout << csv.str();
	return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"EPTAS scheduler for resource-consuming jobs on uniformly related machines"};
	app.require_subcommand(1);

	GeneratorOptions gen;
	std::string profile = "uniform", slack = "1", epsilon = "1", psi = "1/2", phi = "2";
	std::optional<std::string> gen_out;
	auto* generate = app.add_subcommand("generate", "write a seeded random instance");
	generate->add_option("--seed", gen.seed)->capture_default_str();
	generate->add_option("--n", gen.n, "jobs")->capture_default_str();
	generate->add_option("--m", gen.m, "machines")->capture_default_str();
	generate->add_option("--e", gen.e, "supply dates")->capture_default_str();
	generate->add_option("--profile", profile, "uniform, tight or loose")->capture_default_str();
	generate->add_option("--slack", slack, "total supply / total demand (>= 1)")->capture_default_str();
	generate->add_option("--epsilon", epsilon)->capture_default_str();
	generate->add_option("--psi", psi)->capture_default_str();
	generate->add_option("--phi", phi)->capture_default_str();
	generate->add_option("--rho", gen.params.rho)->capture_default_str();
	generate->add_option("-o,--output", gen_out, "instance file (default stdout)");

	SolveFlags solve_flags;
	SolveOutputs solve_out;
	std::string solve_path;
	auto* solve_cmd = app.add_subcommand("solve", "run the approximation scheme over all guesses");
	solve_cmd->add_option("instance", solve_path)->required();
	add_solve_flags(solve_cmd, solve_flags);
	solve_cmd->add_option("-o,--schedule", solve_out.schedule, "schedule file (default: embedded in the report)");
	solve_cmd->add_option("--report", solve_out.report, "report file (default stdout)");
	solve_cmd->add_option("--dump-rounded", solve_out.dump_rounded, "rounded instance as JSON");
	solve_cmd->add_option("--dump-configs", solve_out.dump_configs, "configuration census as CSV");
	solve_cmd->add_option("--dump-lp", solve_out.dump_lp, "model of the chosen guess in LP format");
	solve_cmd->add_option("--trace", solve_out.trace, "per-guess records as JSON");
	solve_cmd->add_flag("--compare-exact", solve_out.compare_exact, "also run the exact oracle when within its limits");

	std::string exact_path;
	std::optional<std::string> exact_out;
	auto* exact = app.add_subcommand("exact", "exact optimum by exhaustive search (n <= 7, m <= 3, e <= 3)");
	exact->add_option("instance", exact_path)->required();
	exact->add_option("-o,--output", exact_out);

	std::string verify_instance, verify_schedule_path;
	auto* verify = app.add_subcommand("verify", "check a schedule against an instance");
	verify->add_option("instance", verify_instance)->required();
	verify->add_option("schedule", verify_schedule_path)->required();

	SolveFlags bench_flags;
	bench_flags.lp = "float";
	std::string bench_dir;
	std::optional<std::string> bench_out;
	auto* bench = app.add_subcommand("bench", "solve every instance in a directory and write a CSV");
	bench->add_option("directory", bench_dir)->required()->check(CLI::ExistingDirectory);
	add_solve_flags(bench, bench_flags);
	bench->add_option("-o,--output", bench_out, "CSV file (default stdout)");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		const int code = app.exit(e);
		return code == 0 ? kExitOk : kExitValidation;
	}

	try {
		if (*generate) {
			gen.profile = profile;
			gen.slack = parse_rational(slack);
			gen.params.epsilon = parse_rational(epsilon);
			gen.params.psi = parse_rational(psi);
			gen.params.phi = parse_rational(phi);
			validate_params(gen.params);
			return cmd_generate(gen, gen_out);
		}
		if (*solve_cmd) return cmd_solve(solve_path, solve_flags, solve_out);
		if (*exact) return cmd_exact(exact_path, exact_out);
		if (*verify) return cmd_verify(verify_instance, verify_schedule_path);
		if (*bench) return cmd_bench(bench_dir, bench_flags, bench_out);
	} catch (const IntractableParameters& e) {
		std::cerr << "intractable: " << e.what() << "\n";
		return kExitIntractable;
	} catch (const OracleLimitError& e) {
		std::cerr << "refused: " << e.what() << "\n";
		return kExitIntractable;
	} catch (const InfeasibleScheduleError& e) {
		std::cerr << "infeasible: " << e.what() << "\n";
		return kExitInfeasible;
	} catch (const ValidationError& e) {
		std::cerr << "invalid input: " << e.what() << "\n";
		return kExitValidation;
	} catch (const ParseError& e) {
		std::cerr << "invalid input: " << e.what() << "\n";
		return kExitValidation;
	} catch (const StructuralError& e) {
		std::cerr << "invalid schedule: " << e.what() << "\n";
		return kExitValidation;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << "\n";
		return kExitError;
	}
	return kExitOk;
}
