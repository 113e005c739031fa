#ifndef EPTAS_NORMALIZE_HPP
#define EPTAS_NORMALIZE_HPP

#include "eptas/model.hpp"

#include <cstdint>
#include <optional>

namespace eptas {

// ceil(log_{1+eps}(1/eps) + 2): the number of consecutive periods a machine of a
// stretched schedule can be active in.
inline std::int64_t mu_tilde(const SchemeParams& params) {
	const GeometricScale scale(params.one_plus_eps());
	return scale.ceil_log(1 / params.epsilon) + 2;
}

struct ActivityWindow {
	std::int64_t first_period_exp = 0;
	std::int64_t last_period_exp = 0;
	std::int64_t length() const { return last_period_exp - first_period_exp + 1; }
};

// Periods [(1+eps)^k, (1+eps)^{k+1}) met by the half-open busy interval
// [first start, load). Empty machines and machines starting at 0 have none.
inline std::optional<ActivityWindow> activity_window(const Instance& instance, const Schedule& schedule, MachineId i) {
	const auto& list = schedule.machines.at(i);
	if (list.empty()) return std::nullopt;
	Rational first = list.front().start;
	Rational load = 0;
	for (const auto& p : list) {
		first = std::min(first, p.start);
		load = std::max(load, p.start + instance.processing_time(p.job, i));
	}
	if (first <= 0) return std::nullopt;
	const GeometricScale scale(instance.params.one_plus_eps());
	return ActivityWindow{scale.floor_log(first), scale.ceil_log(load) - 1};
}

namespace detail {
inline MachineId makespan_machine(const std::vector<Rational>& loads) {
	MachineId best = 0;
	for (MachineId i = 1; i < loads.size(); ++i)
		if (loads[i] > loads[best]) best = i;
	return best;
}
} // namespace detail

// Moves the jobs of a slow (speed < eps^2) makespan machine behind the last job
// of the fastest machine, keeping their order and never starting a job earlier
// than before. Repeats until the makespan sits on a machine of speed >= eps^2.
inline Schedule pull_makespan_to_fast(const Instance& instance, const Schedule& schedule) {
	require_feasible(instance, schedule);
	const Rational threshold = instance.params.epsilon * instance.params.epsilon;
	MachineId fastest = 0;
	for (MachineId i = 1; i < instance.m(); ++i)
		if (instance.machines[i].speed > instance.machines[fastest].speed) fastest = i;

	Schedule out = schedule;
	for (;;) {
		const auto loads = machine_loads(instance, out);
		const MachineId top = detail::makespan_machine(loads);
		if (instance.machines[top].speed >= threshold || top == fastest) break;
		Rational frontier = loads[fastest];
		for (const auto& p : out.machines[top]) {
			const Rational start = std::max(frontier, p.start);
			out.machines[fastest].push_back({p.job, start});
			frontier = start + instance.processing_time(p.job, fastest);
		}
		out.machines[top].clear();
	}
	return out;
}

// Prepends eps * load_i of idle to every machine: all jobs are delayed by that
// amount, so each new load is exactly (1+eps) times the old one.
inline Schedule stretch_to_window(const Instance& instance, const Schedule& schedule) {
	require_feasible(instance, schedule);
	const auto loads = machine_loads(instance, schedule);
	Schedule out = schedule;
	for (MachineId i = 0; i < out.machines.size(); ++i) {
		const Rational delay = instance.params.epsilon * loads[i];
		for (auto& p : out.machines[i]) p.start += delay;
	}
	return out;
}

} // namespace eptas

#endif
