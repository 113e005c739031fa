#ifndef EPTAS_MILP_HPP
#define EPTAS_MILP_HPP

#include "eptas/bnb.hpp"
#include "eptas/config.hpp"
#include "eptas/guess.hpp"
#include "eptas/lp.hpp"
#include "eptas/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace eptas {

// Configurations sharing (s, w): same window, same big range, same job classes.
struct PairBlock {
	PairKey key;
	PeriodWindow window;
	BigRange range;
	std::vector<std::size_t> configs;
};

// Aggregated assignment column y_{j,k,P} = sum over configurations c of block P of x_{jkc}.
struct AssignColumn {
	JobId job = 0;
	std::int64_t period = 0;
	std::size_t block = 0;
	bool big = false;
};

struct MilpModel {
	SchemeParams params;
	Guess guess;
	std::vector<Configuration> configs;
	std::vector<bool> integral;      // per configuration
	std::vector<Rational> cost;      // per configuration: (1-psi) w^phi
	std::vector<bool> guess_qualifies; // per configuration: counted by the makespan-guess row
	std::vector<PairBlock> blocks;
	std::vector<AssignColumn> assign;
	std::vector<std::int64_t> resource_periods;
	std::map<std::int64_t, int> machines_per_speed;
	Rational constant; // psi C_opt
	std::vector<std::string> infeasible_reasons;

	bool trivially_infeasible() const { return !infeasible_reasons.empty(); }
	std::size_t z_count() const { return configs.size(); }
	std::size_t integral_count() const { return static_cast<std::size_t>(std::count(integral.begin(), integral.end(), true)); }
};

struct AssignKey {
	JobId job = 0;
	std::int64_t period = 0;
	std::size_t config = 0;
	auto operator<=>(const AssignKey&) const = default;
};

struct MilpSolution {
	MipStatus status = MipStatus::Infeasible;
	std::vector<Rational> z;
	std::map<AssignKey, Rational> x; // positive entries only
	Rational objective;              // including psi C_opt
	Rational variable_objective;     // (1-psi) sum z_c w_c^phi
	std::size_t nodes = 0;
	std::size_t lp_iterations = 0;
	bool exact = true;

	bool feasible() const { return status == MipStatus::Optimal || status == MipStatus::NodeLimitFeasible; }
};

// w^phi for w = (1+eps)^w_exp; exact for integral phi, else the double value
// taken as an exact rational.
inline Rational load_power(const SchemeParams& params, std::int64_t w_exp) {
	const Rational w = pow(params.one_plus_eps(), w_exp);
	if (params.phi_is_integer()) return pow(w, static_cast<std::int64_t>(params.phi_double()));
	return Rational(std::pow(to_double(w), params.phi_double()));
}

inline bool is_integral_configuration(const Configuration& c, const Guess& guess, const SchemeParams& params) {
	if (c.empty) return false;
	const GeometricScale scale(params.one_plus_eps());
	return scale.pow(c.s_exp) >= guess.kappa && scale.pow(c.w_exp) >= guess.kappa * scale.pow(guess.c_opt_exp);
}

// Removes configurations that cannot change the optimum of the model:
// configurations asking for big jobs of a processing time nobody has,
// integral ones asking for more such jobs than exist, non-maximal sand vectors
// (larger S only relaxes the small-job row at equal cost), every sand variant
// but one when no job is small for the pair, and all-zero configurations that
// the empty configuration dominates.
inline std::vector<Configuration> prune_configurations(const RoundedInstance& r, const Guess& guess,
                                                       std::vector<Configuration> configs) {
	const SchemeParams& params = r.params();
	std::map<PairKey, std::vector<Configuration>> by_pair;
	std::vector<Configuration> out;
	for (auto& c : configs) {
		if (c.empty) out.push_back(std::move(c));
		else by_pair[{c.s_exp, c.w_exp}].push_back(std::move(c));
	}
	for (auto& [key, list] : by_pair) {
		std::map<std::int64_t, int> jobs_with_proc;
		bool any_small = false;
		for (JobId j = 0; j < r.n(); ++j) {
			const std::int64_t e = r.proc_exp(j, key.s_exp);
			++jobs_with_proc[e];
			if (!list.empty() && e < list.front().range.delta) any_small = true;
		}
		const bool qualifies = key.s_exp == guess.s_opt_exp && key.w_exp + 1 >= guess.c_opt_exp;
		std::vector<Configuration> kept;
		for (auto& c : list) {
			if (c.all_zero() && !qualifies) continue;
			const bool integral = is_integral_configuration(c, guess, params);
			bool ok = true;
			for (std::int64_t rr = 0; rr < c.lambda() && ok; ++rr) {
				int total = 0;
				for (const auto& cell : c.windows) total += cell.big[static_cast<std::size_t>(rr)];
				const auto it = jobs_with_proc.find(c.range.delta + rr);
				const int available = it == jobs_with_proc.end() ? 0 : it->second;
				if (total > 0 && available == 0) ok = false;
				if (integral && total > available) ok = false;
			}
			if (ok) kept.push_back(std::move(c));
		}
		// group by big-job matrix, keep sand-maximal members
		std::map<std::vector<std::vector<int>>, std::vector<std::size_t>> groups;
		for (std::size_t i = 0; i < kept.size(); ++i) {
			std::vector<std::vector<int>> bigs;
			for (const auto& cell : kept[i].windows) bigs.push_back(cell.big);
			groups[bigs].push_back(i);
		}
		std::vector<bool> keep(kept.size(), false);
		for (const auto& [bigs, members] : groups) {
			if (!any_small) {
				keep[members.front()] = true;
				continue;
			}
			for (std::size_t a : members) {
				bool dominated = false;
				for (std::size_t b : members) {
					if (a == b) continue;
					bool geq = true, strict = false;
					for (std::size_t k = 0; k < kept[a].windows.size(); ++k) {
						if (kept[b].windows[k].sand < kept[a].windows[k].sand) geq = false;
						if (kept[b].windows[k].sand > kept[a].windows[k].sand) strict = true;
					}
					if (geq && strict) {
						dominated = true;
						break;
					}
				}
				keep[a] = !dominated;
			}
		}
		for (std::size_t i = 0; i < kept.size(); ++i)
			if (keep[i]) out.push_back(std::move(kept[i]));
	}
	return out;
}

// Feasible configurations for every candidate pair of a guess, shifted from
// one enumeration at (0, 0).
class ConfigurationCache {
public:
	ConfigurationCache(const SchemeParams& params, std::uint64_t cap = kDefaultConfigurationCap)
	    : params_(params), base_(enumerate_configurations(0, 0, params, cap)) {}

	const std::vector<Configuration>& base() const { return base_; }

	std::vector<Configuration> for_pair(const PairKey& key) const {
		std::vector<Configuration> out;
		out.reserve(base_.size());
		for (const auto& c : base_) out.push_back(relabel_configuration(c, key.s_exp, key.w_exp));
		return out;
	}

private:
	SchemeParams params_;
	std::vector<Configuration> base_;
};

// Candidate-pair configurations of a guess plus one empty configuration per
// distinct speed, optionally pruned.
inline std::vector<Configuration> model_configurations(const RoundedInstance& r, const Guess& guess,
                                                       const ConfigurationCache& cache, bool prune = true) {
	std::vector<Configuration> all;
	std::set<std::int64_t> speeds(r.speed_exp.begin(), r.speed_exp.end());
	for (auto s : speeds) all.push_back(empty_configuration(s));
	for (const auto& key : candidate_pairs(r, guess)) {
		auto list = cache.for_pair(key);
		all.insert(all.end(), std::make_move_iterator(list.begin()), std::make_move_iterator(list.end()));
	}
	return prune ? prune_configurations(r, guess, std::move(all)) : all;
}

inline MilpModel build_model(const RoundedInstance& r, const Guess& guess, std::vector<Configuration> configs) {
	const SchemeParams& params = r.params();
	const GeometricScale& scale = r.scale;
	MilpModel model;
	model.params = params;
	model.guess = guess;
	for (auto s : r.speed_exp) ++model.machines_per_speed[s];
	for (const auto& [s, count] : model.machines_per_speed) {
		const bool present = std::any_of(configs.begin(), configs.end(),
		                                 [&](const Configuration& c) { return c.empty && c.s_exp == s; });
		if (!present) configs.push_back(empty_configuration(s));
	}
	model.configs = std::move(configs);
	model.constant = params.psi * scale.pow(guess.c_opt_exp);

	std::map<PairKey, std::size_t> block_of;
	for (std::size_t c = 0; c < model.configs.size(); ++c) {
		const auto& cfg = model.configs[c];
		model.integral.push_back(is_integral_configuration(cfg, guess, params));
		model.cost.push_back(cfg.empty ? Rational(0) : Rational((1 - params.psi) * load_power(params, cfg.w_exp)));
		model.guess_qualifies.push_back(!cfg.empty && cfg.s_exp == guess.s_opt_exp &&
		                                params.one_plus_eps() * scale.pow(cfg.w_exp) >= scale.pow(guess.c_opt_exp));
		if (cfg.empty) continue;
		if (!model.machines_per_speed.count(cfg.s_exp))
			throw std::invalid_argument("configuration speed is not a machine speed");
		const PairKey key{cfg.s_exp, cfg.w_exp};
		auto [it, inserted] = block_of.try_emplace(key, model.blocks.size());
		if (inserted) model.blocks.push_back({key, period_window(cfg.w_exp, params), cfg.range, {}});
		model.blocks[it->second].configs.push_back(c);
	}

	std::set<std::int64_t> periods;
	for (const auto& s : r.supplies) periods.insert(s.date_exp);
	for (std::size_t b = 0; b < model.blocks.size(); ++b) {
		const auto& block = model.blocks[b];
		const Rational s = scale.pow(block.key.s_exp);
		const Rational w = scale.pow(block.key.w_exp);
		for (std::int64_t k = block.window.first; k <= block.window.last(); ++k) periods.insert(k);
		for (JobId j = 0; j < r.n(); ++j) {
			const JobClass cls = classify(r.size(j), s, w, params);
			if (cls == JobClass::Huge) continue;
			for (std::int64_t k = block.window.first; k <= block.window.last(); ++k)
				model.assign.push_back({j, k, b, cls == JobClass::Big});
		}
	}
	model.resource_periods.assign(periods.begin(), periods.end());

	std::vector<bool> placeable(r.n(), false);
	for (const auto& a : model.assign) placeable[a.job] = true;
	for (JobId j = 0; j < r.n(); ++j)
		if (!placeable[j]) model.infeasible_reasons.push_back("job " + std::to_string(j) + " is huge for every configuration");
	if (std::none_of(model.guess_qualifies.begin(), model.guess_qualifies.end(), [](bool b) { return b; }))
		model.infeasible_reasons.push_back("no configuration of speed s_opt reaches the guessed makespan");
	return model;
}

namespace detail {
inline std::string period_name(std::int64_t k) { return k < 0 ? "m" + std::to_string(-k) : std::to_string(k); }
} // namespace detail

// The aggregated LP: columns z_c (c = 0..|C|-1) then y (model.assign order).
template <class T>
LinearProgram<T> to_linear_program(const MilpModel& model, const RoundedInstance& r) {
	using Tr = ScalarTraits<T>;
	const SchemeParams& params = model.params;
	const GeometricScale& scale = r.scale;
	LinearProgram<T> lp;
	for (std::size_t c = 0; c < model.configs.size(); ++c)
		lp.add_column(Tr::from(model.cost[c]), T(0), T(model.machines_per_speed.at(model.configs[c].s_exp)),
		              "z" + std::to_string(c));
	const std::size_t y0 = model.configs.size();
	for (const auto& a : model.assign)
		lp.add_column(T(0), T(0), T(1),
		              "y_j" + std::to_string(a.job) + "_k" + detail::period_name(a.period) + "_b" + std::to_string(a.block));

	// (2) every job assigned once as a non-huge job
	std::vector<std::vector<std::pair<std::size_t, T>>> per_job(r.n());
	for (std::size_t i = 0; i < model.assign.size(); ++i) per_job[model.assign[i].job].push_back({y0 + i, T(1)});
	for (JobId j = 0; j < r.n(); ++j) lp.add_row(per_job[j], RowSense::Eq, T(1), "assign_j" + std::to_string(j));

	// (3) and (4) per block and period
	std::map<std::tuple<std::size_t, std::int64_t, std::int64_t>, std::vector<std::size_t>> big_cols;
	std::map<std::pair<std::size_t, std::int64_t>, std::vector<std::size_t>> small_cols;
	for (std::size_t i = 0; i < model.assign.size(); ++i) {
		const auto& a = model.assign[i];
		if (a.big) big_cols[{a.block, a.period, r.proc_exp(a.job, model.blocks[a.block].key.s_exp)}].push_back(i);
		else small_cols[{a.block, a.period}].push_back(i);
	}
	for (std::size_t b = 0; b < model.blocks.size(); ++b) {
		const auto& block = model.blocks[b];
		const Rational unit = scale.pow(block.key.s_exp) * params.eps_pow_rho() * scale.pow(block.key.w_exp);
		for (std::int64_t k = block.window.first; k <= block.window.last(); ++k) {
			for (std::int64_t e = block.range.delta; e <= block.range.Delta; ++e) {
				std::vector<std::pair<std::size_t, T>> terms;
				if (auto it = big_cols.find({b, k, e}); it != big_cols.end())
					for (std::size_t i : it->second) terms.push_back({y0 + i, T(1)});
				for (std::size_t c : block.configs) {
					const int count = model.configs[c].big_count(k, e);
					if (count != 0) terms.push_back({c, T(-count)});
				}
				if (terms.empty()) continue;
				lp.add_row(std::move(terms), RowSense::Eq, T(0),
				           "big_b" + std::to_string(b) + "_k" + detail::period_name(k) + "_e" + detail::period_name(e));
			}
			auto it = small_cols.find({b, k});
			if (it == small_cols.end()) continue;
			std::vector<std::pair<std::size_t, T>> terms;
			for (std::size_t i : it->second) terms.push_back({y0 + i, Tr::from(r.size(model.assign[i].job))});
			for (std::size_t c : block.configs)
				terms.push_back({c, Tr::from(Rational(-unit * (model.configs[c].cell(k).sand + 1)))});
			lp.add_row(std::move(terms), RowSense::Le, T(0), "small_b" + std::to_string(b) + "_k" + detail::period_name(k));
		}
	}

	// (5) machines per speed
	for (const auto& [s, count] : model.machines_per_speed) {
		std::vector<std::pair<std::size_t, T>> terms;
		for (std::size_t c = 0; c < model.configs.size(); ++c)
			if (model.configs[c].s_exp == s) terms.push_back({c, T(1)});
		lp.add_row(std::move(terms), RowSense::Eq, T(count), "machines_s" + detail::period_name(s));
	}

	// (6) resource prefixes
	std::vector<std::size_t> order(model.assign.size());
	for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
	std::stable_sort(order.begin(), order.end(),
	                 [&](std::size_t a, std::size_t b) { return model.assign[a].period < model.assign[b].period; });
	std::vector<std::pair<std::size_t, T>> prefix;
	std::size_t pos = 0;
	for (std::int64_t k : model.resource_periods) {
		while (pos < order.size() && model.assign[order[pos]].period <= k) {
			const auto& a = model.assign[order[pos]];
			const Rational& d = r.base.jobs[a.job].demand;
			if (d != 0) prefix.push_back({y0 + order[pos], Tr::from(d)});
			++pos;
		}
		if (prefix.empty()) continue;
		lp.add_row(prefix, RowSense::Le, Tr::from(r.supply_through_exp(k)), "resource_k" + detail::period_name(k));
	}

	// (7) makespan guess
	std::vector<std::pair<std::size_t, T>> guess_terms;
	for (std::size_t c = 0; c < model.configs.size(); ++c)
		if (model.guess_qualifies[c]) guess_terms.push_back({c, T(1)});
	lp.add_row(std::move(guess_terms), RowSense::Ge, T(1), "guess");
	return lp;
}

inline std::vector<bool> integral_columns(const MilpModel& model) {
	std::vector<bool> flags(model.configs.size() + model.assign.size(), false);
	for (std::size_t c = 0; c < model.configs.size(); ++c) flags[c] = model.integral[c];
	return flags;
}

// Independent check of rows (2)-(9) on the disaggregated solution. Returns one
// message per violated row; tolerance 0 means exact comparison.
inline std::vector<std::string> check_rows(const MilpModel& model, const RoundedInstance& r, const MilpSolution& sol,
                                           const Rational& tol = 0) {
	const SchemeParams& params = model.params;
	const GeometricScale& scale = r.scale;
	std::vector<std::string> out;
	const auto close = [&](const Rational& a, const Rational& b) {
		const Rational diff = a > b ? Rational(a - b) : Rational(b - a);
		const Rational mag = std::max(Rational(1), b < 0 ? Rational(-b) : b);
		return diff <= tol * mag;
	};
	const auto leq = [&](const Rational& a, const Rational& b) {
		const Rational mag = std::max(Rational(1), b < 0 ? Rational(-b) : b);
		return a <= b + tol * mag;
	};
	if (sol.z.size() != model.configs.size()) {
		out.push_back("z vector has wrong length");
		return out;
	}
	std::vector<Rational> per_job(r.n(), Rational(0));
	std::map<std::tuple<std::size_t, std::int64_t, std::int64_t>, Rational> big_sum;
	std::map<std::pair<std::size_t, std::int64_t>, Rational> small_sum;
	std::map<std::int64_t, Rational> demand_in_period;
	for (const auto& [key, v] : sol.x) {
		const std::string where =
		    "x(j=" + std::to_string(key.job) + ",k=" + std::to_string(key.period) + ",c=" + std::to_string(key.config) + ")";
		if (key.job >= r.n() || key.config >= model.configs.size()) {
			out.push_back(where + " refers to an unknown job or configuration");
			continue;
		}
		const auto& c = model.configs[key.config];
		if (!c.has_period(key.period)) out.push_back(where + " outside the configuration's periods");
		const Rational s = scale.pow(c.s_exp);
		const JobClass cls = c.empty ? JobClass::Huge : classify(r.size(key.job), s, scale.pow(c.w_exp), params);
		if (cls == JobClass::Huge) out.push_back(where + " assigns a huge job");
		if (!leq(Rational(-v), Rational(0)) || !leq(v, Rational(1))) out.push_back(where + " outside [0,1]");
		per_job[key.job] += v;
		demand_in_period[key.period] += v * r.base.jobs[key.job].demand;
		if (cls == JobClass::Big) big_sum[{key.config, key.period, r.proc_exp(key.job, c.s_exp)}] += v;
		if (cls == JobClass::Small) small_sum[{key.config, key.period}] += v * r.size(key.job);
	}
	for (JobId j = 0; j < r.n(); ++j)
		if (!close(per_job[j], 1)) out.push_back("row (2) job " + std::to_string(j) + ": sum " + to_string(per_job[j]));
	for (std::size_t ci = 0; ci < model.configs.size(); ++ci) {
		const auto& c = model.configs[ci];
		if (c.empty) continue;
		const Rational unit = scale.pow(c.s_exp) * params.eps_pow_rho() * scale.pow(c.w_exp);
		for (std::int64_t k = c.first_period; k <= c.last_period(); ++k) {
			for (std::int64_t e = c.range.delta; e <= c.range.Delta; ++e) {
				const auto it = big_sum.find({ci, k, e});
				const Rational lhs = it == big_sum.end() ? Rational(0) : it->second;
				const Rational rhs = sol.z[ci] * c.big_count(k, e);
				if (!close(lhs, rhs))
					out.push_back("row (3) c=" + std::to_string(ci) + " k=" + std::to_string(k) + " e=" + std::to_string(e) +
					              ": " + to_string(lhs) + " != " + to_string(rhs));
			}
			const auto it = small_sum.find({ci, k});
			const Rational lhs = it == small_sum.end() ? Rational(0) : it->second;
			const Rational rhs = sol.z[ci] * (c.cell(k).sand + 1) * unit;
			if (!leq(lhs, rhs))
				out.push_back("row (4) c=" + std::to_string(ci) + " k=" + std::to_string(k) + ": " + to_string(lhs) + " > " +
				              to_string(rhs));
		}
	}
	std::map<std::int64_t, Rational> z_per_speed;
	for (std::size_t ci = 0; ci < model.configs.size(); ++ci) z_per_speed[model.configs[ci].s_exp] += sol.z[ci];
	std::map<std::int64_t, int> machines;
	for (auto s : r.speed_exp) ++machines[s];
	for (const auto& [s, total] : z_per_speed)
		if (!close(total, machines.count(s) ? machines.at(s) : 0))
			out.push_back("row (5) speed exponent " + std::to_string(s) + ": " + to_string(total));
	for (const auto& [s, count] : machines)
		if (!z_per_speed.count(s)) out.push_back("row (5) speed exponent " + std::to_string(s) + " has no configuration");
	std::set<std::int64_t> periods;
	for (const auto& [k, v] : demand_in_period) periods.insert(k);
	for (const auto& s : r.supplies) periods.insert(s.date_exp);
	Rational prefix = 0;
	for (std::int64_t k : periods) {
		if (auto it = demand_in_period.find(k); it != demand_in_period.end()) prefix += it->second;
		if (!leq(prefix, r.supply_through_exp(k)))
			out.push_back("row (6) period " + std::to_string(k) + ": demand " + to_string(prefix) + " > supply " +
			              to_string(r.supply_through_exp(k)));
	}
	Rational guess_total = 0;
	for (std::size_t ci = 0; ci < model.configs.size(); ++ci) {
		const auto& c = model.configs[ci];
		if (!c.empty && c.s_exp == model.guess.s_opt_exp &&
		    params.one_plus_eps() * scale.pow(c.w_exp) >= scale.pow(model.guess.c_opt_exp))
			guess_total += sol.z[ci];
	}
	if (!leq(Rational(1), guess_total)) out.push_back("row (7): " + to_string(guess_total) + " < 1");
	for (std::size_t ci = 0; ci < model.configs.size(); ++ci) {
		const Rational& z = sol.z[ci];
		if (!leq(Rational(-z), Rational(0))) out.push_back("row (9) z" + std::to_string(ci) + " negative");
		if (is_integral_configuration(model.configs[ci], model.guess, params)) {
			const Rational nearest = Rational(floor_int(z + Rational(1, 2)));
			if (!close(z, nearest)) out.push_back("row (10) z" + std::to_string(ci) + " = " + to_string(z) + " not integral");
		}
	}
	return out;
}

inline Rational model_objective(const MilpModel& model, const std::vector<Rational>& z) {
	Rational v = 0;
	for (std::size_t c = 0; c < z.size(); ++c) v += model.cost[c] * z[c];
	return v;
}

class MilpRowError : public std::runtime_error {
public:
	explicit MilpRowError(std::vector<std::string> rows)
	    : std::runtime_error("MILP solution violates " + std::to_string(rows.size()) + " row(s): " + rows.front()),
	      rows_(std::move(rows)) {}
	const std::vector<std::string>& rows() const { return rows_; }

private:
	std::vector<std::string> rows_;
};

enum class LpMode { Exact, Floating };

struct MilpSolveOptions {
	LpMode mode = LpMode::Exact;
	BranchOptions branch;
};

namespace detail {

// Splits y_{j,k,P} over the configurations of block P: big jobs in proportion
// to z_c B_c(k,r), small jobs in proportion to z_c (S_c(k)+1). Both keep every
// per-configuration row of the original formulation satisfied.
inline std::map<AssignKey, Rational> disaggregate(const MilpModel& model, const RoundedInstance& r,
                                                  const std::vector<Rational>& z, const std::vector<Rational>& y) {
	std::map<AssignKey, Rational> x;
	for (std::size_t i = 0; i < model.assign.size(); ++i) {
		if (y[i] == 0) continue;
		const auto& a = model.assign[i];
		const auto& block = model.blocks[a.block];
		std::vector<std::pair<std::size_t, Rational>> weights;
		Rational total = 0;
		for (std::size_t c : block.configs) {
			const auto& cfg = model.configs[c];
			Rational wgt = a.big ? Rational(z[c] * cfg.big_count(a.period, r.proc_exp(a.job, cfg.s_exp)))
			                     : Rational(z[c] * (cfg.cell(a.period).sand + 1));
			if (wgt == 0) continue;
			total += wgt;
			weights.push_back({c, std::move(wgt)});
		}
		if (total == 0) {
			// mass without capacity; leave it on the first configuration so the row check reports it
			x[{a.job, a.period, block.configs.front()}] += y[i];
			continue;
		}
		for (const auto& [c, wgt] : weights) x[{a.job, a.period, c}] += y[i] * wgt / total;
	}
	return x;
}

template <class T>
MilpSolution solve_typed(const MilpModel& model, const RoundedInstance& r, const MilpSolveOptions& options) {
	using Tr = ScalarTraits<T>;
	MilpSolution sol;
	sol.exact = Tr::exact;
	if (model.trivially_infeasible()) return sol;
	const auto lp = to_linear_program<T>(model, r);
	const auto mip = branch_and_bound(lp, integral_columns(model), options.branch);
	sol.status = mip.status;
	sol.nodes = mip.nodes;
	sol.lp_iterations = mip.lp_iterations;
	if (!mip.has_solution()) return sol;
	const auto rational = [](const T& v) {
		if constexpr (Tr::exact) return v;
		else return Tr::integral(v) ? Tr::to_rational(v) : approximate_rational(v);
	};
	const std::size_t nz = model.configs.size();
	for (std::size_t c = 0; c < nz; ++c) sol.z.push_back(rational(mip.x[c]));
	std::vector<Rational> y;
	for (std::size_t i = 0; i < model.assign.size(); ++i) y.push_back(rational(mip.x[nz + i]));
	sol.x = disaggregate(model, r, sol.z, y);
	sol.variable_objective = model_objective(model, sol.z);
	sol.objective = model.constant + sol.variable_objective;
	const Rational tol = Tr::exact ? Rational(0) : Rational(1, 1'000'000);
	auto violations = check_rows(model, r, sol, tol);
	if (!violations.empty()) throw MilpRowError(std::move(violations));
	return sol;
}

} // namespace detail

inline MilpSolution solve(const MilpModel& model, const RoundedInstance& r, const MilpSolveOptions& options = {}) {
	return options.mode == LpMode::Exact ? detail::solve_typed<Rational>(model, r, options)
	                                     : detail::solve_typed<double>(model, r, options);
}

// Integral solution read off a schedule of the rounded instance whose machines
// are active only inside their configuration windows.
struct Witness {
	std::vector<Configuration> configs; // distinct, in order of first machine
	std::vector<int> counts;
	std::vector<std::size_t> machine_config; // per machine
	std::map<AssignKey, Rational> x;         // config index into `configs`
};

class WitnessError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

inline Witness construct_witness(const RoundedInstance& r, const Guess& guess, const Schedule& schedule) {
	const SchemeParams& params = r.params();
	const GeometricScale& scale = r.scale;
	const Instance rounded = r.materialize();
	require_feasible(rounded, schedule);
	const auto loads = machine_loads(rounded, schedule);
	Witness out;
	Rational makespan = 0;
	MachineId top = 0;
	for (MachineId i = 0; i < loads.size(); ++i)
		if (loads[i] > makespan) {
			makespan = loads[i];
			top = i;
		}
	const Rational c_opt = scale.pow(guess.c_opt_exp);
	if (makespan < c_opt || makespan > params.one_plus_eps() * c_opt)
		throw WitnessError("makespan " + to_string(makespan) + " outside [C_opt, (1+eps) C_opt]");
	if (r.speed_exp[top] != guess.s_opt_exp) throw WitnessError("makespan machine speed differs from s_opt");

	std::vector<std::pair<Configuration, std::vector<std::pair<JobId, std::int64_t>>>> per_machine;
	for (MachineId i = 0; i < schedule.machines.size(); ++i) {
		const std::int64_t s_exp = r.speed_exp[i];
		if (schedule.machines[i].empty()) {
			per_machine.push_back({empty_configuration(s_exp), {}});
			continue;
		}
		const std::int64_t w_exp = scale.ceil_log(loads[i]);
		Configuration c = blank_configuration(s_exp, w_exp, params);
		const Rational s = scale.pow(s_exp);
		const Rational w = scale.pow(w_exp);
		std::map<std::int64_t, Rational> small_volume;
		std::vector<std::pair<JobId, std::int64_t>> jobs;
		for (const auto& p : schedule.machines[i]) {
			if (p.start <= 0) throw WitnessError("job " + std::to_string(p.job) + " starts at time 0");
			const std::int64_t k = scale.floor_log(p.start);
			if (!c.has_period(k))
				throw WitnessError("job " + std::to_string(p.job) + " starts in period " + std::to_string(k) +
				                   " outside the window of machine " + std::to_string(i));
			const JobClass cls = classify(r.size(p.job), s, w, params);
			if (cls == JobClass::Huge) throw WitnessError("job " + std::to_string(p.job) + " is huge for its machine");
			if (cls == JobClass::Big) {
				int& cell = c.windows[static_cast<std::size_t>(k - c.first_period)]
				                .big[static_cast<std::size_t>(r.proc_exp(p.job, s_exp) - c.range.delta)];
				if (++cell > max_cell_value(params)) throw WitnessError("too many big jobs in one period");
			} else {
				small_volume[k] += r.size(p.job) / s;
			}
			jobs.push_back({p.job, k});
		}
		for (const auto& [k, volume] : small_volume) {
			const auto sand = floor_int(volume / (params.eps_pow_rho() * w));
			if (sand > max_cell_value(params)) throw WitnessError("small volume exceeds the sand range");
			c.windows[static_cast<std::size_t>(k - c.first_period)].sand = static_cast<int>(sand);
		}
		if (!generate_one_machine_schedule(c, params).feasible)
			throw WitnessError("configuration of machine " + std::to_string(i) + " is not feasible");
		per_machine.push_back({std::move(c), std::move(jobs)});
	}
	for (auto& [c, jobs] : per_machine) {
		auto it = std::find(out.configs.begin(), out.configs.end(), c);
		std::size_t idx = static_cast<std::size_t>(it - out.configs.begin());
		if (it == out.configs.end()) {
			out.configs.push_back(c);
			out.counts.push_back(0);
		}
		++out.counts[idx];
		out.machine_config.push_back(idx);
		for (const auto& [j, k] : jobs) out.x[{j, k, idx}] = 1;
	}
	return out;
}

// The witness as a solution of `model`; every witness configuration must be one
// of the model's.
inline MilpSolution embed_witness(const MilpModel& model, const Witness& witness) {
	MilpSolution sol;
	sol.status = MipStatus::Optimal;
	sol.z.assign(model.configs.size(), Rational(0));
	std::vector<std::size_t> index;
	for (std::size_t w = 0; w < witness.configs.size(); ++w) {
		auto it = std::find(model.configs.begin(), model.configs.end(), witness.configs[w]);
		if (it == model.configs.end()) throw WitnessError("witness configuration missing from the model");
		index.push_back(static_cast<std::size_t>(it - model.configs.begin()));
		sol.z[index.back()] += witness.counts[w];
	}
	for (const auto& [key, v] : witness.x) sol.x[{key.job, key.period, index[key.config]}] = v;
	sol.variable_objective = model_objective(model, sol.z);
	sol.objective = model.constant + sol.variable_objective;
	return sol;
}

// CPLEX-style LP text. Coefficients are printed as decimals with 17
// significant digits; the exact rationals are in the JSON dumps.
inline std::string dump_lp(const MilpModel& model, const RoundedInstance& r) {
	const auto lp = to_linear_program<double>(model, r);
	std::ostringstream out;
	out.precision(17);
	out << "\\ configuration MILP: c_opt_exp=" << model.guess.c_opt_exp << " s_opt_exp=" << model.guess.s_opt_exp
	    << " constant=" << to_double(model.constant) << "\n";
	out << "Minimize\n obj:";
	bool first = true;
	for (const auto& col : lp.columns) {
		if (col.cost == 0) continue;
		out << (first ? " " : " + ") << col.cost << " " << col.name;
		first = false;
	}
	if (first) out << " 0 " << lp.columns.front().name;
	out << "\nSubject To\n";
	for (const auto& row : lp.rows) {
		out << " " << row.name << ":";
		if (row.terms.empty()) out << " 0 " << lp.columns.front().name;
		for (const auto& [j, a] : row.terms) out << (a < 0 ? " - " : " + ") << std::abs(a) << " " << lp.columns[j].name;
		out << (row.sense == RowSense::Le ? " <= " : row.sense == RowSense::Ge ? " >= " : " = ") << row.rhs << "\n";
	}
	out << "Bounds\n";
	for (const auto& col : lp.columns) out << " " << col.lower << " <= " << col.name << " <= " << *col.upper << "\n";
	out << "General\n";
	for (std::size_t c = 0; c < model.configs.size(); ++c)
		if (model.integral[c]) out << " " << lp.columns[c].name << "\n";
	out << "End\n";
	return out.str();
}

} // namespace eptas

#endif
