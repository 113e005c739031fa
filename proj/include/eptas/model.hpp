#ifndef EPTAS_MODEL_HPP
#define EPTAS_MODEL_HPP

#include "eptas/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace eptas {

using JobId = std::size_t;
using MachineId = std::size_t;

struct Job {
	Rational size;   // work units
	Rational demand; // resource units consumed at start
};

struct Machine {
	Rational speed; // work units per time unit, in (0, 1]
};

struct Supply {
	Rational date;
	Rational quantity;
};

struct SchemeParams {
	Rational epsilon{1, 2};
	Rational psi{1, 2};
	Rational phi{2};
	int rho = 10;

	Rational one_plus_eps() const { return 1 + epsilon; }
	Rational eps_pow_rho() const { return pow(epsilon, rho); }
	bool phi_is_integer() const { return is_integer(phi); }
	double phi_double() const { return to_double(phi); }
};

struct Instance {
	std::vector<Job> jobs;
	std::vector<Machine> machines;
	std::vector<Supply> supplies;
	SchemeParams params;

	std::size_t n() const { return jobs.size(); }
	std::size_t m() const { return machines.size(); }
	std::size_t e() const { return supplies.size(); }

	Rational processing_time(JobId j, MachineId i) const { return jobs[j].size / machines[i].speed; }

	Rational total_demand() const {
		Rational sum = 0;
		for (const auto& job : jobs) sum += job.demand;
		return sum;
	}
	Rational total_supply() const {
		Rational sum = 0;
		for (const auto& s : supplies) sum += s.quantity;
		return sum;
	}
	// Resource released at dates <= t.
	Rational supply_through(const Rational& t) const {
		Rational sum = 0;
		for (const auto& s : supplies)
			if (s.date <= t) sum += s.quantity;
		return sum;
	}
};

struct Placement {
	JobId job = 0;
	Rational start;
	bool operator==(const Placement& o) const { return job == o.job && start == o.start; }
};

// Per machine, jobs in processing order.
struct Schedule {
	std::vector<std::vector<Placement>> machines;

	Schedule() = default;
	explicit Schedule(std::size_t m) : machines(m) {}

	std::size_t job_count() const {
		std::size_t count = 0;
		for (const auto& list : machines) count += list.size();
		return count;
	}
	bool operator==(const Schedule&) const = default;
};

class ValidationError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// Malformed references inside a schedule (unknown ids, wrong machine count).
class StructuralError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

inline void validate_params(const SchemeParams& params) {
	if (params.epsilon <= 0 || !is_integer(1 / params.epsilon))
		throw ValidationError("epsilon must be positive with 1/epsilon integral, got " + to_string(params.epsilon));
	if (params.psi < 0 || params.psi > 1) throw ValidationError("psi must lie in [0,1]");
	if (params.phi <= 1) throw ValidationError("phi must exceed 1");
	if (params.rho < 1) throw ValidationError("rho must be a positive integer");
}

// Checks the raw-input invariants. Rounded instances may carry zero-quantity
// supplies, pass allow_zero_supply for those.
inline void validate_instance(const Instance& instance, bool allow_zero_supply = false) {
	validate_params(instance.params);
	if (instance.jobs.empty()) throw ValidationError("instance has no jobs");
	if (instance.machines.empty()) throw ValidationError("instance has no machines");
	if (instance.supplies.empty()) throw ValidationError("instance has no supplies");
	for (std::size_t j = 0; j < instance.n(); ++j) {
		if (instance.jobs[j].size <= 0) throw ValidationError("job " + std::to_string(j) + " has non-positive size");
		if (instance.jobs[j].demand < 0) throw ValidationError("job " + std::to_string(j) + " has negative demand");
	}
	bool has_unit = false;
	for (std::size_t i = 0; i < instance.m(); ++i) {
		const auto& s = instance.machines[i].speed;
		if (s <= 0 || s > 1) throw ValidationError("machine " + std::to_string(i) + " speed outside (0,1]");
		if (s == 1) has_unit = true;
	}
	if (!has_unit) throw ValidationError("no machine has speed exactly 1");
	for (std::size_t k = 0; k < instance.e(); ++k) {
		const auto& s = instance.supplies[k];
		if (s.date < 0) throw ValidationError("supply " + std::to_string(k) + " has negative date");
		if (k > 0 && s.date <= instance.supplies[k - 1].date)
			throw ValidationError("supply dates must be strictly increasing");
		if (s.quantity < 0 || (!allow_zero_supply && s.quantity == 0))
			throw ValidationError("supply " + std::to_string(k) + " has non-positive quantity");
	}
	if (instance.total_supply() < instance.total_demand())
		throw ValidationError("total supply " + to_string(instance.total_supply()) + " is below total demand " +
		                      to_string(instance.total_demand()));
}

// Keeps the n fastest machines when m > n (ties by lower id). Returns the kept
// original ids in increasing order.
inline std::vector<MachineId> surplus_free_machines(const Instance& instance) {
	std::vector<MachineId> ids(instance.m());
	std::iota(ids.begin(), ids.end(), 0);
	if (instance.m() <= instance.n()) return ids;
	std::stable_sort(ids.begin(), ids.end(), [&](MachineId a, MachineId b) {
		return instance.machines[a].speed > instance.machines[b].speed;
	});
	ids.resize(instance.n());
	std::sort(ids.begin(), ids.end());
	return ids;
}

inline Instance restrict_machines(const Instance& instance, const std::vector<MachineId>& kept) {
	Instance out = instance;
	out.machines.clear();
	for (MachineId id : kept) out.machines.push_back(instance.machines[id]);
	return out;
}

// Maps a schedule over the kept machines back onto the full machine list.
inline Schedule expand_schedule(const Schedule& reduced, const std::vector<MachineId>& kept, std::size_t m) {
	Schedule out(m);
	for (std::size_t i = 0; i < kept.size(); ++i) out.machines[kept[i]] = reduced.machines[i];
	return out;
}

enum class ViolationKind { Overlap, Resource, MissingJob, DuplicateJob, NegativeStart };

struct Violation {
	ViolationKind kind;
	MachineId machine = 0;
	JobId job = 0;
	JobId other_job = 0; // the earlier job for overlaps
	Rational time;       // start time for overlaps; t for resource (checked just after t)
	Rational demand;     // cumulative demand started up to time
	Rational supply;     // cumulative supply released up to time

	std::string describe() const {
		std::ostringstream os;
		switch (kind) {
		case ViolationKind::Overlap:
			os << "overlap on machine " << machine << ": job " << job << " starts at " << to_string(time)
			   << " before job " << other_job << " completes";
			break;
		case ViolationKind::Resource:
			os << "resource shortfall just after t=" << to_string(time) << ": demand " << to_string(demand)
			   << " > supply " << to_string(supply);
			break;
		case ViolationKind::MissingJob: os << "job " << job << " is not scheduled"; break;
		case ViolationKind::DuplicateJob: os << "job " << job << " is scheduled more than once"; break;
		case ViolationKind::NegativeStart:
			os << "job " << job << " starts at negative time " << to_string(time);
			break;
		}
		return os.str();
	}
};

inline void check_structure(const Instance& instance, const Schedule& schedule) {
	if (schedule.machines.size() != instance.m())
		throw StructuralError("schedule lists " + std::to_string(schedule.machines.size()) + " machines, instance has " +
		                      std::to_string(instance.m()));
	for (const auto& list : schedule.machines)
		for (const auto& p : list)
			if (p.job >= instance.n()) throw StructuralError("unknown job id " + std::to_string(p.job));
}

// Returns every violated constraint. The resource inequality only changes just
// after start times, so it is checked there: demand started at or before t must
// not exceed supply released at or before t.
inline std::vector<Violation> verify_schedule(const Instance& instance, const Schedule& schedule) {
	check_structure(instance, schedule);
	std::vector<Violation> violations;

	std::vector<int> seen(instance.n(), 0);
	for (MachineId i = 0; i < schedule.machines.size(); ++i) {
		const auto& list = schedule.machines[i];
		for (std::size_t pos = 0; pos < list.size(); ++pos) {
			const auto& p = list[pos];
			if (++seen[p.job] == 2) violations.push_back({ViolationKind::DuplicateJob, i, p.job, 0, 0, 0, 0});
			if (p.start < 0) violations.push_back({ViolationKind::NegativeStart, i, p.job, 0, p.start, 0, 0});
			if (pos > 0) {
				const auto& prev = list[pos - 1];
				if (p.start < prev.start + instance.processing_time(prev.job, i))
					violations.push_back({ViolationKind::Overlap, i, p.job, prev.job, p.start, 0, 0});
			}
		}
	}
	for (JobId j = 0; j < instance.n(); ++j)
		if (seen[j] == 0) violations.push_back({ViolationKind::MissingJob, 0, j, 0, 0, 0, 0});

	std::map<Rational, Rational> demand_at;
	for (const auto& list : schedule.machines)
		for (const auto& p : list) demand_at[p.start] += instance.jobs[p.job].demand;
	Rational cumulative = 0;
	std::size_t k = 0;
	Rational released = 0;
	for (const auto& [t, d] : demand_at) {
		cumulative += d;
		while (k < instance.e() && instance.supplies[k].date <= t) released += instance.supplies[k++].quantity;
		if (cumulative > released)
			violations.push_back({ViolationKind::Resource, 0, 0, 0, t, cumulative, released});
	}
	return violations;
}

// Completion time of the last job per machine (0 when empty); idle time counts.
inline std::vector<Rational> machine_loads(const Instance& instance, const Schedule& schedule) {
	check_structure(instance, schedule);
	std::vector<Rational> loads(schedule.machines.size(), Rational(0));
	for (MachineId i = 0; i < schedule.machines.size(); ++i)
		for (const auto& p : schedule.machines[i])
			loads[i] = std::max(loads[i], p.start + instance.processing_time(p.job, i));
	return loads;
}

// Exact when phi is an integer; otherwise norm_cost/combined are doubles with
// relative error well below 1e-12 and the exact fields are empty.
struct ObjectiveValue {
	Rational makespan;
	std::optional<Rational> norm_cost_exact;
	std::optional<Rational> combined_exact;
	double norm_cost = 0.0;
	double combined = 0.0;

	bool exact() const { return combined_exact.has_value(); }
};

inline ObjectiveValue objective_from_loads(const std::vector<Rational>& loads, const SchemeParams& params) {
	ObjectiveValue value;
	value.makespan = 0;
	for (const auto& l : loads) value.makespan = std::max(value.makespan, l);
	if (params.phi_is_integer()) {
		const auto power = static_cast<std::int64_t>(params.phi.convert_to<double>());
		Rational norm = 0;
		for (const auto& l : loads) norm += pow(l, power);
		value.norm_cost_exact = norm;
		value.combined_exact = params.psi * value.makespan + (1 - params.psi) * norm;
		value.norm_cost = to_double(norm);
		value.combined = to_double(*value.combined_exact);
	} else {
		const double phi = params.phi_double();
		// long double accumulation keeps the relative error far below 1e-12
		long double norm = 0;
		for (const auto& l : loads) norm += std::pow(static_cast<long double>(to_double(l)), static_cast<long double>(phi));
		value.norm_cost = static_cast<double>(norm);
		const double psi = to_double(params.psi);
		value.combined = psi * to_double(value.makespan) + (1 - psi) * value.norm_cost;
	}
	return value;
}

class InfeasibleScheduleError : public std::runtime_error {
public:
	InfeasibleScheduleError(std::vector<Violation> violations)
	    : std::runtime_error("infeasible schedule: " + (violations.empty() ? std::string("?") : violations.front().describe())),
	      violations_(std::move(violations)) {}
	const std::vector<Violation>& violations() const { return violations_; }

private:
	std::vector<Violation> violations_;
};

inline void require_feasible(const Instance& instance, const Schedule& schedule) {
	auto violations = verify_schedule(instance, schedule);
	if (!violations.empty()) throw InfeasibleScheduleError(std::move(violations));
}

inline ObjectiveValue evaluate(const Instance& instance, const Schedule& schedule) {
	require_feasible(instance, schedule);
	return objective_from_loads(machine_loads(instance, schedule), instance.params);
}

// a <= factor * b. Exact when both costs are exact, else relative 1e-12 slack.
inline bool cost_within(const ObjectiveValue& a, const Rational& factor, const ObjectiveValue& b) {
	if (a.exact() && b.exact()) return *a.combined_exact <= factor * *b.combined_exact;
	return a.combined <= to_double(factor) * b.combined * (1 + 1e-12);
}

inline bool cost_within(const ObjectiveValue& a, double factor, const ObjectiveValue& b) {
	return a.combined <= factor * b.combined * (1 + 1e-12);
}

} // namespace eptas

#endif
