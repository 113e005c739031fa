#ifndef EPTAS_ORACLE_HPP
#define EPTAS_ORACLE_HPP

#include "eptas/model.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace eptas {

struct OracleLimits {
	std::size_t max_n = 7;
	std::size_t max_m = 3;
	std::size_t max_e = 3;
};

class OracleLimitError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

struct ExactResult {
	Schedule schedule;
	ObjectiveValue value;
	std::size_t nodes = 0;
};

// a < b on combined cost; exact whenever both sides are.
inline bool cost_less(const ObjectiveValue& a, const ObjectiveValue& b) {
	if (a.exact() && b.exact()) return *a.combined_exact < *b.combined_exact;
	return a.combined < b.combined;
}

namespace detail {

// Earliest supply date by which the cumulative supply reaches `need`; time 0
// when nothing is needed.
inline std::optional<Rational> resource_time(const Instance& instance, const Rational& need) {
	if (need <= 0) return Rational(0);
	Rational total = 0;
	for (const auto& s : instance.supplies) {
		total += s.quantity;
		if (total >= need) return s.date;
	}
	return std::nullopt;
}

class ExactSearch {
public:
	explicit ExactSearch(const Instance& instance) : instance_(instance) {
		n_ = instance.n();
		m_ = instance.m();
		frontier_.assign(m_, Rational(0));
		lists_.resize(m_);
		for (JobId j = 0; j < n_; ++j) {
			representative_.push_back(j);
			for (JobId k = 0; k < j; ++k)
				if (instance.jobs[k].size == instance.jobs[j].size && instance.jobs[k].demand == instance.jobs[j].demand) {
					representative_[j] = representative_[k];
					break;
				}
		}
	}

	void seed(const Schedule& schedule) {
		best_schedule_ = schedule;
		best_ = evaluate(instance_, schedule);
	}

	ExactResult run() {
		dfs(0, Rational(0), Rational(0));
		return {*best_schedule_, *best_, nodes_};
	}

private:
	struct Key {
		std::uint32_t mask;
		Rational last_start;
		std::vector<Rational> frontier;
		bool operator<(const Key& o) const {
			if (mask != o.mask) return mask < o.mask;
			if (last_start != o.last_start) return last_start < o.last_start;
			return frontier < o.frontier;
		}
	};

	Key key(std::uint32_t mask, const Rational& last_start) const {
		Key k{mask, last_start, {}};
		// machines of equal speed are interchangeable
		std::vector<std::pair<Rational, Rational>> pairs;
		for (MachineId i = 0; i < m_; ++i) pairs.push_back({instance_.machines[i].speed, frontier_[i]});
		std::sort(pairs.begin(), pairs.end());
		for (auto& p : pairs) k.frontier.push_back(p.second);
		return k;
	}

	void dfs(std::uint32_t mask, const Rational& last_start, const Rational& consumed) {
		++nodes_;
		if (mask == (std::uint32_t{1} << n_) - 1) {
			const auto value = objective_from_loads(frontier_, instance_.params);
			if (!best_ || cost_less(value, *best_)) {
				best_ = value;
				Schedule s(m_);
				s.machines = lists_;
				best_schedule_ = s;
			}
			return;
		}
		if (best_ && !cost_less(objective_from_loads(frontier_, instance_.params), *best_)) return;
		if (!seen_.insert(key(mask, last_start)).second) return;
		for (JobId j = 0; j < n_; ++j) {
			if (mask & (std::uint32_t{1} << j)) continue;
			// identical jobs are taken in index order
			bool duplicate_of_unplaced = false;
			for (JobId k = 0; k < j; ++k)
				if (!(mask & (std::uint32_t{1} << k)) && representative_[k] == representative_[j]) duplicate_of_unplaced = true;
			if (duplicate_of_unplaced) continue;
			const Rational need = consumed + instance_.jobs[j].demand;
			const auto ready = resource_time(instance_, need);
			if (!ready) continue;
			std::set<Rational> empty_speeds;
			for (MachineId i = 0; i < m_; ++i) {
				if (lists_[i].empty() && !empty_speeds.insert(instance_.machines[i].speed).second) continue;
				const Rational start = std::max({frontier_[i], last_start, *ready});
				const Rational old = frontier_[i];
				frontier_[i] = start + instance_.processing_time(j, i);
				lists_[i].push_back({j, start});
				dfs(mask | (std::uint32_t{1} << j), start, need);
				lists_[i].pop_back();
				frontier_[i] = old;
			}
		}
	}

	const Instance& instance_;
	std::size_t n_ = 0;
	std::size_t m_ = 0;
	std::vector<JobId> representative_;
	std::vector<Rational> frontier_;
	std::vector<std::vector<Placement>> lists_;
	std::optional<ObjectiveValue> best_;
	std::optional<Schedule> best_schedule_;
	std::set<Key> seen_;
	std::size_t nodes_ = 0;
};

} // namespace detail

// Jobs by (demand, size, id); each goes to the machine whose resulting cost is
// lowest, at the earliest start that respects the machine, the resource and
// the start order of the jobs placed before it.
inline Schedule greedy_baseline(const Instance& instance) {
	if (instance.total_supply() < instance.total_demand())
		throw ValidationError("total supply is below total demand");
	std::vector<JobId> order(instance.n());
	for (JobId j = 0; j < instance.n(); ++j) order[j] = j;
	std::sort(order.begin(), order.end(), [&](JobId a, JobId b) {
		const auto& ja = instance.jobs[a];
		const auto& jb = instance.jobs[b];
		if (ja.demand != jb.demand) return ja.demand < jb.demand;
		if (ja.size != jb.size) return ja.size < jb.size;
		return a < b;
	});
	Schedule schedule(instance.m());
	std::vector<Rational> frontier(instance.m(), Rational(0));
	Rational last_start = 0;
	Rational consumed = 0;
	for (JobId j : order) {
		consumed += instance.jobs[j].demand;
		const Rational ready = *detail::resource_time(instance, consumed);
		std::optional<MachineId> best;
		std::optional<ObjectiveValue> best_value;
		Rational best_start;
		for (MachineId i = 0; i < instance.m(); ++i) {
			const Rational start = std::max({frontier[i], last_start, ready});
			auto loads = frontier;
			loads[i] = start + instance.processing_time(j, i);
			const auto value = objective_from_loads(loads, instance.params);
			if (!best || cost_less(value, *best_value)) {
				best = i;
				best_value = value;
				best_start = start;
			}
		}
		schedule.machines[*best].push_back({j, best_start});
		frontier[*best] = best_start + instance.processing_time(j, *best);
		last_start = best_start;
	}
	return schedule;
}

// Optimal combined cost over all assignments, machine orders and starts drawn
// from the supply dates and completion times. Jobs are fixed in non-decreasing
// start order, each at its earliest feasible start.
inline ExactResult exact_optimum(const Instance& instance, const OracleLimits& limits = {}) {
	if (instance.n() > limits.max_n || instance.m() > limits.max_m || instance.e() > limits.max_e)
		throw OracleLimitError("exact oracle limited to n <= " + std::to_string(limits.max_n) + ", m <= " +
		                       std::to_string(limits.max_m) + ", e <= " + std::to_string(limits.max_e) + " (got n=" +
		                       std::to_string(instance.n()) + ", m=" + std::to_string(instance.m()) + ", e=" +
		                       std::to_string(instance.e()) + ")");
	if (instance.n() > 31) throw OracleLimitError("exact oracle supports at most 31 jobs");
	detail::ExactSearch search(instance);
	search.seed(greedy_baseline(instance));
	return search.run();
}

} // namespace eptas

#endif
