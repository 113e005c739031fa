#ifndef EPTAS_LP_HPP
#define EPTAS_LP_HPP

#include "eptas/rational.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eptas {

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
	static constexpr bool exact = true;
	static bool zero(const Rational& v) { return v == 0; }
	static bool negative(const Rational& v) { return v < 0; }
	static bool positive(const Rational& v) { return v > 0; }
	static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
	static Rational floor(const Rational& v) { return Rational(floor_int(v)); }
	static Rational ceil(const Rational& v) { return Rational(ceil_int(v)); }
	static bool integral(const Rational& v) { return is_integer(v); }
	static Rational from(const Rational& v) { return v; }
	static Rational to_rational(const Rational& v) { return v; }
	static double to_double(const Rational& v) { return eptas::to_double(v); }
};

template <>
struct ScalarTraits<double> {
	static constexpr bool exact = false;
	static constexpr double tol = 1e-9;
	static bool zero(double v) { return std::abs(v) <= tol; }
	static bool negative(double v) { return v < -tol; }
	static bool positive(double v) { return v > tol; }
	static double abs(double v) { return std::abs(v); }
	static double floor(double v) { return std::floor(v + tol); }
	static double ceil(double v) { return std::ceil(v - tol); }
	static bool integral(double v) { return std::abs(v - std::round(v)) <= tol; }
	static double from(const Rational& v) { return eptas::to_double(v); }
	// Integers within tolerance snap; everything else converts exactly.
	static Rational to_rational(double v) {
		if (integral(v)) return Rational(static_cast<long long>(std::llround(v)));
		return Rational(v);
	}
	static double to_double(double v) { return v; }
};

enum class RowSense { Le, Ge, Eq };

template <class T>
struct LinearProgram {
	struct Column {
		T cost{};
		T lower{};
		std::optional<T> upper;
		std::string name;
	};
	struct Row {
		std::vector<std::pair<std::size_t, T>> terms;
		RowSense sense = RowSense::Eq;
		T rhs{};
		std::string name;
	};

	std::vector<Column> columns;
	std::vector<Row> rows;

	std::size_t add_column(T cost, T lower, std::optional<T> upper, std::string name = {}) {
		columns.push_back({std::move(cost), std::move(lower), std::move(upper), std::move(name)});
		return columns.size() - 1;
	}
	std::size_t add_row(std::vector<std::pair<std::size_t, T>> terms, RowSense sense, T rhs, std::string name = {}) {
		rows.push_back({std::move(terms), sense, std::move(rhs), std::move(name)});
		return rows.size() - 1;
	}
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* to_string(LpStatus s) {
	switch (s) {
	case LpStatus::Optimal: return "optimal";
	case LpStatus::Infeasible: return "infeasible";
	case LpStatus::Unbounded: return "unbounded";
	case LpStatus::IterationLimit: return "iteration_limit";
	}
	return "?";
}

template <class T>
struct LpSolution {
	LpStatus status = LpStatus::Infeasible;
	T objective{};
	std::vector<T> x;
	std::size_t iterations = 0;
};

struct LpOptions {
	std::size_t iteration_limit = 200'000;
	// consecutive degenerate pivots before switching to Bland's rule
	std::size_t degenerate_streak = 30;
	// floating mode only: rebuild the basis inverse this often
	std::size_t refactor_every = 50;
};

namespace detail {

// Bounded-variable revised simplex with an explicit dense basis inverse.
// Columns: structural, then one slack per inequality row, then artificials.
template <class T>
class RevisedSimplex {
	using Tr = ScalarTraits<T>;

public:
	RevisedSimplex(const LinearProgram<T>& lp, const LpOptions& options) : lp_(lp), options_(options) {
		m_ = lp.rows.size();
		n_ = lp.columns.size();
		cols_.resize(n_);
		for (std::size_t i = 0; i < m_; ++i)
			for (const auto& [j, a] : lp.rows[i].terms)
				if (!Tr::zero(a)) cols_.at(j).push_back({i, a});
		for (std::size_t j = 0; j < n_; ++j) {
			lower_.push_back(lp.columns[j].lower);
			has_upper_.push_back(lp.columns[j].upper.has_value());
			upper_.push_back(lp.columns[j].upper.value_or(T{}));
			if (has_upper_[j] && upper_[j] < lower_[j]) infeasible_bounds_ = true;
			x_.push_back(lower_[j]);
			at_upper_.push_back(false);
		}
	}

	LpSolution<T> solve() {
		LpSolution<T> out;
		if (infeasible_bounds_) return out;
		setup_phase_one();
		LpStatus status = iterate();
		if (status != LpStatus::Optimal) {
			out.status = status;
			out.iterations = iterations_;
			return out;
		}
		T infeasibility{};
		for (std::size_t j = first_artificial_; j < x_.size(); ++j) infeasibility += x_[j];
		if (Tr::positive(infeasibility)) {
			out.status = LpStatus::Infeasible;
			out.iterations = iterations_;
			return out;
		}
		setup_phase_two();
		status = iterate();
		out.status = status;
		out.iterations = iterations_;
		if (status != LpStatus::Optimal) return out;
		if constexpr (!Tr::exact) refactor();
		out.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
		out.objective = T{};
		for (std::size_t j = 0; j < n_; ++j) out.objective += lp_.columns[j].cost * out.x[j];
		return out;
	}

private:
	void add_aux_column(std::vector<std::pair<std::size_t, T>> col, T lower, bool has_up, T up, T value) {
		cols_.push_back(std::move(col));
		lower_.push_back(std::move(lower));
		has_upper_.push_back(has_up);
		upper_.push_back(std::move(up));
		x_.push_back(std::move(value));
		at_upper_.push_back(false);
	}

	void setup_phase_one() {
		std::vector<T> residual(m_);
		for (std::size_t i = 0; i < m_; ++i) residual[i] = lp_.rows[i].rhs;
		for (std::size_t j = 0; j < n_; ++j)
			if (!Tr::zero(x_[j]))
				for (const auto& [i, a] : cols_[j]) residual[i] -= a * x_[j];

		basis_.assign(m_, 0);
		std::vector<T> diag(m_);
		std::vector<std::size_t> needs_artificial;
		for (std::size_t i = 0; i < m_; ++i) {
			const RowSense sense = lp_.rows[i].sense;
			if (sense == RowSense::Eq) {
				needs_artificial.push_back(i);
				continue;
			}
			const T sign = sense == RowSense::Le ? T(1) : T(-1);
			const T value = sign * residual[i];
			add_aux_column({{i, sign}}, T{}, false, T{}, Tr::negative(value) ? T{} : value);
			if (!Tr::negative(value)) {
				basis_[i] = cols_.size() - 1;
				diag[i] = sign;
			} else {
				needs_artificial.push_back(i);
			}
		}
		first_artificial_ = cols_.size();
		for (std::size_t i : needs_artificial) {
			const T sign = Tr::negative(residual[i]) ? T(-1) : T(1);
			add_aux_column({{i, sign}}, T{}, false, T{}, sign * residual[i]);
			basis_[i] = cols_.size() - 1;
			diag[i] = sign;
		}
		binv_.assign(m_, std::vector<T>(m_, T{}));
		for (std::size_t i = 0; i < m_; ++i) binv_[i][i] = T(1) / diag[i];
		is_basic_.assign(cols_.size(), false);
		for (std::size_t i = 0; i < m_; ++i) is_basic_[basis_[i]] = true;
		cost_.assign(cols_.size(), T{});
		for (std::size_t j = first_artificial_; j < cols_.size(); ++j) cost_[j] = T(1);
	}

	void setup_phase_two() {
		cost_.assign(cols_.size(), T{});
		for (std::size_t j = 0; j < n_; ++j) cost_[j] = lp_.columns[j].cost;
		for (std::size_t j = first_artificial_; j < cols_.size(); ++j) {
			has_upper_[j] = true;
			upper_[j] = T{};
			if (!is_basic_[j]) x_[j] = T{};
		}
		drive_out_artificials();
	}

	// Degenerate pivots replacing zero-level basic artificials where possible.
	void drive_out_artificials() {
		for (std::size_t r = 0; r < m_; ++r) {
			if (basis_[r] < first_artificial_) continue;
			std::size_t best = cols_.size();
			T best_abs{};
			for (std::size_t j = 0; j < first_artificial_; ++j) {
				if (is_basic_[j]) continue;
				T v{};
				for (const auto& [i, a] : cols_[j]) v += binv_[r][i] * a;
				if (Tr::zero(v)) continue;
				const T av = Tr::abs(v);
				if (best == cols_.size() || (!Tr::exact && av > best_abs)) {
					best = j;
					best_abs = av;
					if constexpr (Tr::exact) break;
				}
			}
			if (best == cols_.size()) continue;
			const auto alpha = ftran(best);
			pivot(r, best, alpha);
		}
	}

	std::vector<T> ftran(std::size_t q) const {
		std::vector<T> alpha(m_, T{});
		for (const auto& [i, a] : cols_[q])
			for (std::size_t r = 0; r < m_; ++r)
				if (!Tr::zero(binv_[r][i])) alpha[r] += binv_[r][i] * a;
		return alpha;
	}

	void pivot(std::size_t r, std::size_t q, const std::vector<T>& alpha) {
		const T inv = T(1) / alpha[r];
		std::vector<std::size_t> nz;
		for (std::size_t i = 0; i < m_; ++i)
			if (!Tr::zero(binv_[r][i])) {
				binv_[r][i] *= inv;
				nz.push_back(i);
			} else {
				binv_[r][i] = T{};
			}
		for (std::size_t k = 0; k < m_; ++k) {
			if (k == r || Tr::zero(alpha[k])) continue;
			const T f = alpha[k];
			for (std::size_t i : nz) binv_[k][i] -= f * binv_[r][i];
		}
		is_basic_[basis_[r]] = false;
		basis_[r] = q;
		is_basic_[q] = true;
		if constexpr (!Tr::exact) {
			if (++since_refactor_ >= options_.refactor_every) refactor();
		}
	}

	// Rebuilds the basis inverse by Gauss-Jordan elimination and recomputes the
	// basic values from the nonbasic ones.
	void refactor() {
		since_refactor_ = 0;
		std::vector<std::vector<T>> a(m_, std::vector<T>(2 * m_, T{}));
		for (std::size_t r = 0; r < m_; ++r) {
			for (const auto& [i, v] : cols_[basis_[r]]) a[i][r] = v;
			a[r][m_ + r] = T(1);
		}
		for (std::size_t c = 0; c < m_; ++c) {
			std::size_t p = c;
			for (std::size_t i = c + 1; i < m_; ++i)
				if (Tr::abs(a[i][c]) > Tr::abs(a[p][c])) p = i;
			if (Tr::zero(a[p][c])) throw std::runtime_error("singular basis during refactorisation");
			std::swap(a[p], a[c]);
			const T inv = T(1) / a[c][c];
			for (auto& v : a[c]) v *= inv;
			for (std::size_t i = 0; i < m_; ++i) {
				if (i == c || Tr::zero(a[i][c])) continue;
				const T f = a[i][c];
				for (std::size_t k = c; k < 2 * m_; ++k) a[i][k] -= f * a[c][k];
			}
		}
		// a[:, m..2m) = B^{-1} with rows indexed by column position of B
		for (std::size_t r = 0; r < m_; ++r)
			for (std::size_t i = 0; i < m_; ++i) binv_[r][i] = a[r][m_ + i];
		std::vector<T> rhs(m_);
		for (std::size_t i = 0; i < m_; ++i) rhs[i] = lp_.rows[i].rhs;
		for (std::size_t j = 0; j < cols_.size(); ++j) {
			if (is_basic_[j] || Tr::zero(x_[j])) continue;
			for (const auto& [i, v] : cols_[j]) rhs[i] -= v * x_[j];
		}
		for (std::size_t r = 0; r < m_; ++r) {
			T v{};
			for (std::size_t i = 0; i < m_; ++i) v += binv_[r][i] * rhs[i];
			x_[basis_[r]] = v;
		}
	}

	bool eligible(std::size_t j, const T& d) const {
		if (is_basic_[j]) return false;
		if (has_upper_[j] && !(lower_[j] < upper_[j])) return false;
		return at_upper_[j] ? Tr::positive(d) : Tr::negative(d);
	}

	LpStatus iterate() {
		std::size_t degenerate = 0;
		bool bland = false;
		std::vector<T> pi(m_);
		for (;;) {
			if (++iterations_ > options_.iteration_limit) return LpStatus::IterationLimit;
			for (std::size_t i = 0; i < m_; ++i) {
				T v{};
				for (std::size_t r = 0; r < m_; ++r) {
					const T& c = cost_[basis_[r]];
					if (!Tr::zero(c) && !Tr::zero(binv_[r][i])) v += c * binv_[r][i];
				}
				pi[i] = v;
			}
			std::size_t q = cols_.size();
			T best{};
			for (std::size_t j = 0; j < cols_.size(); ++j) {
				if (is_basic_[j]) continue;
				T d = cost_[j];
				for (const auto& [i, a] : cols_[j])
					if (!Tr::zero(pi[i])) d -= pi[i] * a;
				if (!eligible(j, d)) continue;
				if (bland) {
					q = j;
					break;
				}
				const T score = Tr::abs(d);
				if (q == cols_.size() || score > best) {
					q = j;
					best = score;
				}
			}
			if (q == cols_.size()) return LpStatus::Optimal;

			const bool increase = !at_upper_[q];
			const auto alpha = ftran(q);
			// ratio test
			std::optional<T> theta;
			std::size_t leave = m_;
			T leave_pivot{};
			if (has_upper_[q]) theta = upper_[q] - lower_[q];
			for (std::size_t r = 0; r < m_; ++r) {
				if (Tr::zero(alpha[r])) continue;
				const T a = increase ? alpha[r] : T(-alpha[r]);
				const std::size_t b = basis_[r];
				T limit;
				if (Tr::positive(a)) {
					limit = (x_[b] - lower_[b]) / a;
				} else {
					if (!has_upper_[b]) continue;
					limit = (upper_[b] - x_[b]) / (-a);
				}
				if (Tr::negative(limit)) limit = T{};
				bool take = false;
				if (!theta) take = true;
				else if (Tr::zero(T(limit - *theta))) take = better_tie(r, leave, alpha);
				else take = limit < *theta;
				if (take) {
					theta = limit;
					leave = r;
					leave_pivot = a;
				}
			}
			if (!theta) return LpStatus::Unbounded;
			const T step = *theta;
			const bool degenerate_step = Tr::zero(step);
			if (!degenerate_step) {
				const T signed_step = increase ? step : T(-step);
				x_[q] += signed_step;
				for (std::size_t r = 0; r < m_; ++r)
					if (!Tr::zero(alpha[r])) x_[basis_[r]] -= signed_step * alpha[r];
			}
			if (leave == m_) {
				at_upper_[q] = increase;
				x_[q] = increase ? upper_[q] : lower_[q];
			} else {
				const std::size_t b = basis_[leave];
				const bool to_upper = !Tr::positive(leave_pivot);
				x_[b] = to_upper ? upper_[b] : lower_[b];
				at_upper_[b] = to_upper;
				pivot(leave, q, alpha);
			}
			if (degenerate_step) {
				if (++degenerate >= options_.degenerate_streak) bland = true;
			} else {
				degenerate = 0;
				bland = false;
			}
		}
	}

	// Leaving-row preference among tied ratios: Bland order in exact mode,
	// larger pivot magnitude in floating mode.
	bool better_tie(std::size_t r, std::size_t current, const std::vector<T>& alpha) const {
		if (current == m_) return false;
		if constexpr (Tr::exact) return basis_[r] < basis_[current];
		else return Tr::abs(alpha[r]) > Tr::abs(alpha[current]);
	}

	const LinearProgram<T>& lp_;
	LpOptions options_;
	std::size_t m_ = 0;
	std::size_t n_ = 0;
	std::vector<std::vector<std::pair<std::size_t, T>>> cols_;
	std::vector<T> lower_;
	std::vector<bool> has_upper_;
	std::vector<T> upper_;
	std::vector<T> x_;
	std::vector<bool> at_upper_;
	std::vector<bool> is_basic_;
	std::vector<T> cost_;
	std::vector<std::size_t> basis_;
	std::vector<std::vector<T>> binv_;
	std::size_t first_artificial_ = 0;
	std::size_t iterations_ = 0;
	std::size_t since_refactor_ = 0;
	bool infeasible_bounds_ = false;
};

} // namespace detail

// Minimises cost . x subject to the rows and column bounds. Every column needs a
// finite lower bound.
template <class T>
LpSolution<T> solve_lp(const LinearProgram<T>& lp, const LpOptions& options = {}) {
	return detail::RevisedSimplex<T>(lp, options).solve();
}

} // namespace eptas

#endif
