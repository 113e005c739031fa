#ifndef EPTAS_BNB_HPP
#define EPTAS_BNB_HPP

#include "eptas/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace eptas {

enum class MipStatus { Optimal, Infeasible, NodeLimitFeasible, NodeLimit };

inline const char* to_string(MipStatus s) {
	switch (s) {
	case MipStatus::Optimal: return "optimal";
	case MipStatus::Infeasible: return "infeasible";
	case MipStatus::NodeLimitFeasible: return "node_limit_feasible";
	case MipStatus::NodeLimit: return "node_limit";
	}
	return "?";
}

struct BranchOptions {
	std::size_t node_limit = 20'000;
	LpOptions lp;
};

template <class T>
struct MipSolution {
	MipStatus status = MipStatus::Infeasible;
	T objective{};
	std::vector<T> x;
	std::size_t nodes = 0;
	std::size_t lp_iterations = 0;

	bool has_solution() const { return status == MipStatus::Optimal || status == MipStatus::NodeLimitFeasible; }
};

// Depth-first branch-and-bound over the flagged columns. Branches on the most
// fractional flagged value (lowest index on ties), explores the nearer side
// first and prunes nodes whose relaxation is no better than the incumbent.
template <class T>
MipSolution<T> branch_and_bound(const LinearProgram<T>& lp, const std::vector<bool>& integral, const BranchOptions& options = {}) {
	using Tr = ScalarTraits<T>;
	struct Node {
		std::vector<std::pair<std::size_t, std::pair<T, std::optional<T>>>> bounds;
	};
	MipSolution<T> out;
	std::optional<T> incumbent;
	std::vector<Node> stack{Node{}};
	LinearProgram<T> work = lp;
	bool truncated = false;

	const auto dominated = [&](const T& value) {
		if (!incumbent) return false;
		if constexpr (Tr::exact) return !(value < *incumbent);
		else return value >= *incumbent - Tr::tol * std::max(1.0, std::abs(*incumbent));
	};

	while (!stack.empty()) {
		if (out.nodes >= options.node_limit) {
			truncated = true;
			break;
		}
		Node node = std::move(stack.back());
		stack.pop_back();
		++out.nodes;
		for (std::size_t j = 0; j < lp.columns.size(); ++j) {
			work.columns[j].lower = lp.columns[j].lower;
			work.columns[j].upper = lp.columns[j].upper;
		}
		for (const auto& [j, b] : node.bounds) {
			work.columns[j].lower = b.first;
			work.columns[j].upper = b.second;
		}
		auto relax = solve_lp(work, options.lp);
		out.lp_iterations += relax.iterations;
		if (relax.status == LpStatus::Infeasible) continue;
		if (relax.status != LpStatus::Optimal) {
			truncated = true;
			continue;
		}
		if (dominated(relax.objective)) continue;

		std::size_t branch = lp.columns.size();
		T best_distance{};
		for (std::size_t j = 0; j < lp.columns.size(); ++j) {
			if (!integral[j] || Tr::integral(relax.x[j])) continue;
			const T frac = relax.x[j] - Tr::floor(relax.x[j]);
			const T distance = frac < T(1) - frac ? frac : T(T(1) - frac);
			if (branch == lp.columns.size() || distance > best_distance) {
				branch = j;
				best_distance = distance;
			}
		}
		if (branch == lp.columns.size()) {
			incumbent = relax.objective;
			out.objective = relax.objective;
			out.x = std::move(relax.x);
			if constexpr (!Tr::exact)
				for (std::size_t j = 0; j < out.x.size(); ++j)
					if (integral[j]) out.x[j] = std::round(out.x[j]);
			continue;
		}
		const T value = relax.x[branch];
		const T down = Tr::floor(value);
		const T up = Tr::ceil(value);
		Node down_node = node;
		down_node.bounds.push_back({branch, {work.columns[branch].lower, down}});
		Node up_node = std::move(node);
		up_node.bounds.push_back({branch, {up, work.columns[branch].upper}});
		// nearer side on top of the stack
		if (value - down < up - value) {
			stack.push_back(std::move(up_node));
			stack.push_back(std::move(down_node));
		} else {
			stack.push_back(std::move(down_node));
			stack.push_back(std::move(up_node));
		}
	}
	if (incumbent) out.status = truncated ? MipStatus::NodeLimitFeasible : MipStatus::Optimal;
	else out.status = truncated ? MipStatus::NodeLimit : MipStatus::Infeasible;
	return out;
}

} // namespace eptas

#endif
