#ifndef EPTAS_ROUNDING_HPP
#define EPTAS_ROUNDING_HPP

#include "eptas/io.hpp"
#include "eptas/model.hpp"

#include <cstdint>
#include <vector>

namespace eptas {

struct RoundedSupply {
	std::int64_t date_exp = 0; // rounded date is (1+eps)^date_exp
	Rational quantity;
};

// Geometric rounding of an instance: sizes up, speeds down, dates shifted by
// eps*p_min and rounded up, all to integer powers of (1+eps). Quantities are
// kept exactly; dates that collapse are merged.
struct RoundedInstance {
	Instance base;
	GeometricScale scale{Rational(2)};
	std::vector<std::int64_t> size_exp;  // per job
	std::vector<std::int64_t> speed_exp; // per machine, <= 0
	std::vector<RoundedSupply> supplies; // strictly increasing date_exp
	Rational p_min;
	std::int64_t alpha_exp = 0;
	std::int64_t beta_exp = 0;
	std::int64_t mu = 0;

	const SchemeParams& params() const { return base.params; }
	std::size_t n() const { return base.n(); }
	std::size_t m() const { return base.m(); }

	Rational size(JobId j) const { return scale.pow(size_exp[j]); }
	Rational speed(MachineId i) const { return scale.pow(speed_exp[i]); }
	Rational date(std::size_t k) const { return scale.pow(supplies[k].date_exp); }
	// Exponent of the rounded processing time of job j on a machine of speed (1+eps)^s_exp.
	std::int64_t proc_exp(JobId j, std::int64_t s_exp) const { return size_exp[j] - s_exp; }

	// Resource released at rounded dates with exponent <= k.
	Rational supply_through_exp(std::int64_t k) const {
		Rational sum = 0;
		for (const auto& s : supplies)
			if (s.date_exp <= k) sum += s.quantity;
		return sum;
	}

	// The rounded instance as a plain instance (zero-quantity supplies allowed).
	Instance materialize() const {
		Instance out;
		out.params = base.params;
		for (JobId j = 0; j < n(); ++j) out.jobs.push_back({size(j), base.jobs[j].demand});
		for (MachineId i = 0; i < m(); ++i) out.machines.push_back({speed(i)});
		for (std::size_t k = 0; k < supplies.size(); ++k) out.supplies.push_back({date(k), supplies[k].quantity});
		return out;
	}
};

inline RoundedInstance round_instance(const Instance& instance) {
	validate_params(instance.params);
	if (instance.jobs.empty() || instance.supplies.empty())
		throw ValidationError("rounding needs at least one job and one supply");
	RoundedInstance r;
	r.base = instance;
	r.scale = GeometricScale(instance.params.one_plus_eps());
	const auto& eps = instance.params.epsilon;

	r.p_min = instance.jobs.front().size;
	for (const auto& job : instance.jobs) r.p_min = std::min(r.p_min, job.size);
	for (const auto& job : instance.jobs) r.size_exp.push_back(r.scale.ceil_log(job.size));
	for (const auto& machine : instance.machines) r.speed_exp.push_back(r.scale.floor_log(machine.speed));

	std::vector<std::int64_t> exps;
	for (const auto& s : instance.supplies) exps.push_back(r.scale.ceil_log(s.date + eps * r.p_min));
	std::vector<std::int64_t> distinct = exps;
	distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

	// q'_k = sum_{v: u_v <= u'_k} q_v - sum_{v: u'_v < u'_k} q'_v
	Rational assigned = 0;
	for (std::int64_t k : distinct) {
		const Rational date = r.scale.pow(k);
		Rational reachable = 0;
		for (const auto& s : instance.supplies)
			if (s.date <= date) reachable += s.quantity;
		r.supplies.push_back({k, reachable - assigned});
		assigned = reachable;
	}
	r.alpha_exp = distinct.front();
	r.beta_exp = distinct.back();
	r.mu = r.beta_exp - r.alpha_exp;
	return r;
}

inline Json rounded_to_json(const RoundedInstance& r) {
	Json doc;
	doc["base"] = to_string(r.scale.base());
	doc["size_exp"] = r.size_exp;
	doc["speed_exp"] = r.speed_exp;
	doc["supplies"] = Json::array();
	for (const auto& s : r.supplies) doc["supplies"].push_back({{"date_exp", s.date_exp}, {"quantity", to_string(s.quantity)}});
	doc["p_min"] = to_string(r.p_min);
	doc["alpha_exp"] = r.alpha_exp;
	doc["beta_exp"] = r.beta_exp;
	doc["mu"] = r.mu;
	return doc;
}

// A rounded-feasible schedule is feasible for the original instance with the
// same assignment and start times.
inline Schedule lift_schedule_to_original(const RoundedInstance& rounded, const Schedule& schedule) {
	require_feasible(rounded.materialize(), schedule);
	return schedule;
}

// Every completion time x becomes (1+eps)^3 x; starts follow from the rounded
// processing times. Slack between consecutive jobs is left idle.
inline Schedule push_schedule_to_rounded(const Instance& instance, const RoundedInstance& rounded, const Schedule& schedule) {
	require_feasible(instance, schedule);
	const Rational factor = pow(instance.params.one_plus_eps(), 3);
	Schedule out(schedule.machines.size());
	for (MachineId i = 0; i < schedule.machines.size(); ++i) {
		for (const auto& p : schedule.machines[i]) {
			const Rational completion = factor * (p.start + instance.processing_time(p.job, i));
			const Rational proc = rounded.size(p.job) / rounded.speed(i);
			out.machines[i].push_back({p.job, completion - proc});
		}
	}
	return out;
}

} // namespace eptas

#endif
