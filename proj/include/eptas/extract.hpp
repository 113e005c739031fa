#ifndef EPTAS_EXTRACT_HPP
#define EPTAS_EXTRACT_HPP

#include "eptas/milp.hpp"
#include "eptas/model.hpp"
#include "eptas/rounding.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace eptas {

class ExtractionError : public std::logic_error {
public:
	using std::logic_error::logic_error;
};

struct MachineSlot {
	std::size_t config = 0;
	bool is_virtual = false;
	MachineId machine = 0; // real machines only
	std::int64_t s_exp = 0;
};

struct MachineAssignment {
	std::vector<MachineSlot> slots; // by (config, real before virtual, machine id)
	std::size_t makespan_slot = 0;
	std::vector<Integer> zhat;       // per configuration
};

// ceil(z_c) machines per configuration: floor(z_c) of them real, the remaining
// real machines of the speed go to fractional configurations by decreasing
// fractional part, every other fractional configuration gets one virtual machine.
inline MachineAssignment assign_configurations(const RoundedInstance& r, const MilpModel& model, const MilpSolution& sol) {
	MachineAssignment out;
	const std::size_t nc = model.configs.size();
	out.zhat.resize(nc);
	std::map<std::int64_t, std::vector<MachineId>> machines_of;
	for (MachineId i = 0; i < r.m(); ++i) machines_of[r.speed_exp[i]].push_back(i);
	std::vector<std::vector<MachineId>> real_of(nc);
	std::vector<bool> has_virtual(nc, false);
	for (const auto& [s, ids] : machines_of) {
		std::size_t next = 0;
		std::vector<std::size_t> fractional;
		for (std::size_t c = 0; c < nc; ++c) {
			if (model.configs[c].s_exp != s || sol.z[c] <= 0) continue;
			out.zhat[c] = ceil_int(sol.z[c]);
			const Integer whole = floor_int(sol.z[c]);
			for (Integer t = 0; t < whole; ++t) {
				if (next >= ids.size()) throw ExtractionError("configuration counters exceed the machines of a speed");
				real_of[c].push_back(ids[next++]);
			}
			if (!is_integer(sol.z[c])) fractional.push_back(c);
		}
		std::stable_sort(fractional.begin(), fractional.end(), [&](std::size_t a, std::size_t b) {
			return sol.z[a] - floor_int(sol.z[a]) > sol.z[b] - floor_int(sol.z[b]);
		});
		for (std::size_t c : fractional) {
			if (next < ids.size()) real_of[c].push_back(ids[next++]);
			else has_virtual[c] = true;
		}
		if (next != ids.size()) throw ExtractionError("configuration counters leave machines of a speed unassigned");
	}
	for (std::size_t c = 0; c < nc; ++c) {
		std::sort(real_of[c].begin(), real_of[c].end());
		for (MachineId i : real_of[c]) out.slots.push_back({c, false, i, model.configs[c].s_exp});
		if (has_virtual[c]) out.slots.push_back({c, true, 0, model.configs[c].s_exp});
	}
	std::optional<std::size_t> best;
	for (std::size_t t = 0; t < out.slots.size(); ++t) {
		const auto& slot = out.slots[t];
		const auto& c = model.configs[slot.config];
		if (slot.is_virtual || c.empty || slot.s_exp != model.guess.s_opt_exp) continue;
		if (!best || c.w_exp > model.configs[out.slots[*best].config].w_exp) best = t;
	}
	if (!best || !model.guess_qualifies[out.slots[*best].config])
		throw ExtractionError("no real machine of speed s_opt carries a configuration reaching the guessed makespan");
	out.makespan_slot = *best;
	return out;
}

struct SlotJob {
	JobId job = 0;
	std::int64_t period = 0;
	bool small = false;
};

struct PlacementResult {
	std::vector<std::vector<SlotJob>> slot_jobs;        // per slot, placement order
	std::vector<std::vector<Placement>> slot_schedule;  // per slot, laid out
	std::vector<Rational> slot_load;
	std::vector<JobId> leftover;                        // by (demand, id)
	std::map<std::pair<std::int64_t, std::int64_t>, Rational> mass; // (size_exp, period) -> sum_j sum_c x
	std::map<std::pair<std::int64_t, std::int64_t>, Integer> alpha;
	std::map<std::pair<std::int64_t, std::int64_t>, int> placed;
};

namespace detail {
inline bool demand_order(const RoundedInstance& r, JobId a, JobId b) {
	const auto& da = r.base.jobs[a].demand;
	const auto& db = r.base.jobs[b].demand;
	return da != db ? da < db : a < b;
}
} // namespace detail

// Second rounding step: per period, big jobs machine by machine under the alpha
// and B caps, then small jobs over machines by non-decreasing s*w under the
// alpha cap and the widened volume (S_c(k)+2) eps^rho s_c w_c. Machines are laid
// out period by period: small jobs first, then big jobs by size.
//
// With carry_forward, J_k also holds unplaced jobs whose mass lies in earlier
// periods. A job split over periods can then be taken early without stranding
// another job of its size: the unplaced jobs of a size with mass up to k always
// number at least alpha of k. Without it, J_k is only the jobs with mass in k.
inline PlacementResult place_jobs(const RoundedInstance& r, const MilpModel& model, const MilpSolution& sol,
                                  const MachineAssignment& assignment, bool carry_forward = true) {
	const SchemeParams& params = r.params();
	const GeometricScale& scale = r.scale;
	PlacementResult out;
	const std::size_t slots = assignment.slots.size();
	out.slot_jobs.resize(slots);

	std::map<std::int64_t, std::map<JobId, Rational>> job_mass; // period -> job -> mass
	for (const auto& [key, v] : sol.x) {
		if (v <= 0) continue;
		job_mass[key.period][key.job] += v;
		out.mass[{r.size_exp[key.job], key.period}] += v;
	}
	for (const auto& [key, m] : out.mass) out.alpha[key] = floor_int(m);

	std::vector<std::size_t> small_order(slots);
	for (std::size_t t = 0; t < slots; ++t) small_order[t] = t;
	std::stable_sort(small_order.begin(), small_order.end(), [&](std::size_t a, std::size_t b) {
		const auto& ca = model.configs[assignment.slots[a].config];
		const auto& cb = model.configs[assignment.slots[b].config];
		// empty configurations never take jobs; their order is irrelevant
		const std::int64_t pa = ca.empty ? 0 : ca.s_exp + ca.w_exp;
		const std::int64_t pb = cb.empty ? 0 : cb.s_exp + cb.w_exp;
		if (pa != pb) return pa < pb;
		if (assignment.slots[a].config != assignment.slots[b].config)
			return assignment.slots[a].config < assignment.slots[b].config;
		return assignment.slots[a].machine < assignment.slots[b].machine;
	});

	std::vector<bool> placed(r.n(), false);
	std::set<JobId> seen;
	for (const auto& [k, masses] : job_mass) {
		for (const auto& [j, m] : masses) seen.insert(j);
		std::vector<JobId> list;
		if (carry_forward) {
			for (JobId j : seen)
				if (!placed[j]) list.push_back(j);
		} else {
			for (const auto& [j, m] : masses)
				if (!placed[j]) list.push_back(j);
		}
		std::sort(list.begin(), list.end(), [&](JobId a, JobId b) { return detail::demand_order(r, a, b); });
		const auto under_alpha = [&](JobId j) {
			const std::pair<std::int64_t, std::int64_t> key{r.size_exp[j], k};
			const auto it = out.alpha.find(key);
			return it != out.alpha.end() && Integer(out.placed[key] + 1) <= it->second;
		};
		const auto take = [&](std::size_t t, JobId j, bool small) {
			placed[j] = true;
			++out.placed[{r.size_exp[j], k}];
			out.slot_jobs[t].push_back({j, k, small});
		};
		for (std::size_t t = 0; t < slots; ++t) {
			const auto& c = model.configs[assignment.slots[t].config];
			if (!c.has_period(k)) continue;
			for (std::int64_t e = c.range.delta; e <= c.range.Delta; ++e) {
				int on_machine = 0;
				for (JobId j : list) {
					if (placed[j] || r.proc_exp(j, c.s_exp) != e) continue;
					if (on_machine + 1 > c.big_count(k, e) || !under_alpha(j)) continue;
					take(t, j, false);
					++on_machine;
				}
			}
		}
		for (std::size_t t : small_order) {
			const auto& c = model.configs[assignment.slots[t].config];
			if (!c.has_period(k)) continue;
			const Rational cap = (c.cell(k).sand + 2) * params.eps_pow_rho() * scale.pow(c.s_exp) * scale.pow(c.w_exp);
			Rational volume = 0;
			std::vector<JobId> smalls;
			for (JobId j : list)
				if (!placed[j] && r.proc_exp(j, c.s_exp) < c.range.delta) smalls.push_back(j);
			std::stable_sort(smalls.begin(), smalls.end(), [&](JobId a, JobId b) { return r.size_exp[a] < r.size_exp[b]; });
			for (JobId j : smalls) {
				if (volume + r.size(j) > cap || !under_alpha(j)) continue;
				volume += r.size(j);
				take(t, j, true);
			}
		}
	}
	for (JobId j = 0; j < r.n(); ++j)
		if (!placed[j]) out.leftover.push_back(j);
	std::sort(out.leftover.begin(), out.leftover.end(), [&](JobId a, JobId b) { return detail::demand_order(r, a, b); });

	out.slot_schedule.resize(slots);
	out.slot_load.assign(slots, Rational(0));
	for (std::size_t t = 0; t < slots; ++t) {
		const std::int64_t s_exp = assignment.slots[t].s_exp;
		const Rational speed = scale.pow(s_exp);
		std::map<std::int64_t, std::vector<SlotJob>> by_period;
		for (const auto& sj : out.slot_jobs[t]) by_period[sj.period].push_back(sj);
		Rational finish = 0;
		for (auto& [k, jobs] : by_period) {
			std::stable_sort(jobs.begin(), jobs.end(), [&](const SlotJob& a, const SlotJob& b) {
				if (a.small != b.small) return a.small;
				return !a.small && r.size_exp[a.job] < r.size_exp[b.job];
			});
			Rational time = std::max(scale.pow(k), finish);
			for (const auto& sj : jobs) {
				out.slot_schedule[t].push_back({sj.job, time});
				time += r.size(sj.job) / speed;
			}
			finish = time;
		}
		out.slot_load[t] = finish;
	}
	return out;
}

// Sizes (as exponents) that are non-huge for some configuration in use and
// small for the makespan machine.
inline std::set<std::int64_t> leftover_sizes(const RoundedInstance& r, const MilpModel& model, const MachineAssignment& a) {
	const auto& top = model.configs[a.slots[a.makespan_slot].config];
	std::set<std::int64_t> out;
	for (JobId j = 0; j < r.n(); ++j) {
		const std::int64_t size = r.size_exp[j];
		if (size - top.s_exp >= top.range.delta) continue;
		for (std::size_t c = 0; c < model.configs.size(); ++c) {
			const auto& cfg = model.configs[c];
			if (cfg.empty || a.zhat[c] == 0) continue;
			if (size - cfg.s_exp <= cfg.range.Delta) {
				out.insert(size);
				break;
			}
		}
	}
	return out;
}

struct LeftoverReport {
	bool holds = true;
	std::vector<std::string> problems;
	// (period, size_exp) -> unplaced count attributed to that period
	std::map<std::pair<std::int64_t, std::int64_t>, Integer> per_period;
};

// After the second step every (period, size) keeps an unplaced mass below one,
// and only sizes of S(k) keep any.
inline LeftoverReport check_leftover(const RoundedInstance& r, const MilpModel& model, const MachineAssignment& a,
                                     const PlacementResult& p) {
	LeftoverReport out;
	const auto sizes = leftover_sizes(r, model, a);
	for (const auto& [key, m] : p.mass) {
		const auto it = p.placed.find(key);
		const Rational residual = m - (it == p.placed.end() ? 0 : it->second);
		if (residual <= 0) continue;
		const Integer count = ceil_int(residual);
		out.per_period[{key.second, key.first}] = count;
		if (count > 1) {
			out.holds = false;
			out.problems.push_back("period " + std::to_string(key.second) + " size exponent " + std::to_string(key.first) +
			                       " leaves " + count.str() + " jobs");
		}
		if (!sizes.count(key.first)) {
			out.holds = false;
			out.problems.push_back("period " + std::to_string(key.second) + " size exponent " + std::to_string(key.first) +
			                       " is not small for the makespan machine but has leftover mass");
		}
	}
	return out;
}

struct FinalizeResult {
	Schedule schedule; // rounded instance, real machines
	bool feasible = false;
	std::vector<Violation> violations;
	std::size_t leftover_count = 0;
	std::size_t virtual_job_count = 0;
	Rational virtual_mass = 0;     // total size on virtual machines
	Rational makespan_machine_load = 0;
	// max over slots of load / ((1+eps) w_c + mu~ 2 eps^rho w_c) after step two
	Rational worst_load_ratio = 0;
};

// Third and final steps: leftovers, then every virtual-machine job, go to the
// end of the makespan machine from max(C_opt, its load) on, each group by
// non-decreasing demand.
inline FinalizeResult finalize(const RoundedInstance& r, const MilpModel& model, const MachineAssignment& a,
                               const PlacementResult& p) {
	const SchemeParams& params = r.params();
	const GeometricScale& scale = r.scale;
	FinalizeResult out;
	out.schedule = Schedule(r.m());
	std::vector<JobId> moved;
	const Rational widen = params.one_plus_eps() + 2 * mu_tilde(params) * params.eps_pow_rho();
	for (std::size_t t = 0; t < a.slots.size(); ++t) {
		const auto& slot = a.slots[t];
		const auto& c = model.configs[slot.config];
		if (!c.empty) out.worst_load_ratio = std::max(out.worst_load_ratio, Rational(p.slot_load[t] / (widen * scale.pow(c.w_exp))));
		if (slot.is_virtual) {
			for (const auto& sj : p.slot_jobs[t]) {
				moved.push_back(sj.job);
				out.virtual_mass += r.size(sj.job);
			}
			continue;
		}
		out.schedule.machines[slot.machine] = p.slot_schedule[t];
	}
	std::sort(moved.begin(), moved.end(), [&](JobId x, JobId y) { return detail::demand_order(r, x, y); });
	out.leftover_count = p.leftover.size();
	out.virtual_job_count = moved.size();

	const auto& top = a.slots[a.makespan_slot];
	const Rational speed = scale.pow(top.s_exp);
	auto& list = out.schedule.machines[top.machine];
	Rational time = std::max(scale.pow(model.guess.c_opt_exp), p.slot_load[a.makespan_slot]);
	for (JobId j : p.leftover) {
		list.push_back({j, time});
		time += r.size(j) / speed;
	}
	time = std::max(time, scale.pow(model.guess.c_opt_exp));
	for (JobId j : moved) {
		list.push_back({j, time});
		time += r.size(j) / speed;
	}
	const bool appended = !p.leftover.empty() || !moved.empty();
	out.makespan_machine_load = appended ? time : p.slot_load[a.makespan_slot];
	out.violations = verify_schedule(r.materialize(), out.schedule);
	out.feasible = out.violations.empty();
	return out;
}

} // namespace eptas

#endif
