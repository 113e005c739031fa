#ifndef EPTAS_TEST_LP_ORACLE_HPP
#define EPTAS_TEST_LP_ORACLE_HPP

#include "eptas/bnb.hpp"
#include "eptas/lp.hpp"

#include <optional>
#include <random>
#include <vector>

namespace eptas::testing {

// Solves A x = b exactly; nullopt when singular.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
	const std::size_t n = b.size();
	for (std::size_t col = 0; col < n; ++col) {
		std::size_t pivot = col;
		while (pivot < n && a[pivot][col] == 0) ++pivot;
		if (pivot == n) return std::nullopt;
		std::swap(a[pivot], a[col]);
		std::swap(b[pivot], b[col]);
		for (std::size_t r = 0; r < n; ++r) {
			if (r == col || a[r][col] == 0) continue;
			const Rational f = a[r][col] / a[col][col];
			for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
			b[r] -= f * b[col];
		}
	}
	std::vector<Rational> x(n);
	for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
	return x;
}

inline bool lp_feasible(const LinearProgram<Rational>& lp, const std::vector<Rational>& x) {
	for (std::size_t j = 0; j < lp.columns.size(); ++j) {
		if (x[j] < lp.columns[j].lower) return false;
		if (lp.columns[j].upper && x[j] > *lp.columns[j].upper) return false;
	}
	for (const auto& row : lp.rows) {
		Rational v = 0;
		for (const auto& [j, a] : row.terms) v += a * x[j];
		if (row.sense == RowSense::Le && v > row.rhs) return false;
		if (row.sense == RowSense::Ge && v < row.rhs) return false;
		if (row.sense == RowSense::Eq && v != row.rhs) return false;
	}
	return true;
}

// Minimum over all vertices of a bounded LP: every choice of n tight
// constraints among rows and column bounds. Tiny LPs only.
inline std::optional<Rational> vertex_optimum(const LinearProgram<Rational>& lp) {
	const std::size_t n = lp.columns.size();
	struct Hyper {
		std::vector<Rational> a;
		Rational b;
	};
	// equality rows are tight at every vertex, so they enter as ordinary planes
	std::vector<Hyper> planes;
	for (const auto& row : lp.rows) {
		Hyper h{std::vector<Rational>(n, Rational(0)), row.rhs};
		for (const auto& [j, a] : row.terms) h.a[j] += a;
		planes.push_back(h);
	}
	for (std::size_t j = 0; j < n; ++j) {
		Hyper lo{std::vector<Rational>(n, Rational(0)), lp.columns[j].lower};
		lo.a[j] = 1;
		planes.push_back(lo);
		if (lp.columns[j].upper) {
			Hyper hi{std::vector<Rational>(n, Rational(0)), *lp.columns[j].upper};
			hi.a[j] = 1;
			planes.push_back(hi);
		}
	}
	const std::size_t need = n;
	std::optional<Rational> best;
	const auto visit = [&](const std::vector<std::size_t>& chosen) {
		std::vector<std::vector<Rational>> a;
		std::vector<Rational> b;
		for (std::size_t i : chosen) {
			a.push_back(planes[i].a);
			b.push_back(planes[i].b);
		}
		const auto x = solve_square(a, b);
		if (!x || !lp_feasible(lp, *x)) return;
		Rational v = 0;
		for (std::size_t j = 0; j < n; ++j) v += lp.columns[j].cost * (*x)[j];
		if (!best || v < *best) best = v;
	};
	// combinations of `need` planes
	std::vector<std::size_t> idx(need);
	for (std::size_t i = 0; i < need; ++i) idx[i] = i;
	if (need > planes.size()) return std::nullopt;
	for (;;) {
		visit(idx);
		std::size_t i = need;
		while (i > 0 && idx[i - 1] == planes.size() - need + i - 1) --i;
		if (i == 0) break;
		++idx[i - 1];
		for (std::size_t k = i; k < need; ++k) idx[k] = idx[k - 1] + 1;
	}
	return best;
}

// Random bounded LP: `cols` columns in [0, ub], mixed rows with small integer
// coefficients. The all-`anchor` point is kept feasible half the time.
inline LinearProgram<Rational> random_lp(std::mt19937_64& rng, std::size_t cols, std::size_t rows) {
	LinearProgram<Rational> lp;
	std::vector<Rational> anchor;
	for (std::size_t j = 0; j < cols; ++j) {
		const long ub = 1 + static_cast<long>(rng() % 4);
		lp.add_column(Rational(static_cast<long>(rng() % 11) - 5), 0, Rational(ub));
		anchor.push_back(Rational(static_cast<long>(rng() % static_cast<std::uint64_t>(ub + 1))));
	}
	const bool keep_feasible = rng() % 2 == 0;
	for (std::size_t r = 0; r < rows; ++r) {
		std::vector<std::pair<std::size_t, Rational>> terms;
		Rational at_anchor = 0;
		for (std::size_t j = 0; j < cols; ++j) {
			if (rng() % 3 == 0) continue;
			const Rational a(static_cast<long>(rng() % 7) - 3);
			if (a == 0) continue;
			terms.push_back({j, a});
			at_anchor += a * anchor[j];
		}
		const auto kind = rng() % 3;
		const Rational jitter(static_cast<long>(rng() % 3));
		if (kind == 0) lp.add_row(terms, RowSense::Le, keep_feasible ? at_anchor + jitter : at_anchor - jitter - 1);
		else if (kind == 1) lp.add_row(terms, RowSense::Ge, keep_feasible ? at_anchor - jitter : at_anchor + jitter + 1);
		else lp.add_row(terms, RowSense::Eq, at_anchor);
	}
	return lp;
}

// Optimum of the MILP by fixing the flagged columns to every integral point of
// their bounds and solving the remaining LP.
template <class T>
std::optional<T> grid_optimum(const LinearProgram<T>& lp, const std::vector<bool>& integral) {
	std::vector<std::size_t> flagged;
	for (std::size_t j = 0; j < integral.size(); ++j)
		if (integral[j]) flagged.push_back(j);
	std::vector<long> value(flagged.size());
	for (std::size_t i = 0; i < flagged.size(); ++i)
		value[i] = static_cast<long>(to_double(Rational(ScalarTraits<T>::to_rational(ScalarTraits<T>::ceil(lp.columns[flagged[i]].lower)))));
	std::optional<T> best;
	for (;;) {
		auto fixed = lp;
		for (std::size_t i = 0; i < flagged.size(); ++i) {
			fixed.columns[flagged[i]].lower = T(value[i]);
			fixed.columns[flagged[i]].upper = T(value[i]);
		}
		const auto sol = solve_lp(fixed);
		if (sol.status == LpStatus::Optimal && (!best || sol.objective < *best)) best = sol.objective;
		std::size_t i = 0;
		for (; i < flagged.size(); ++i) {
			const long ub = static_cast<long>(to_double(ScalarTraits<T>::to_rational(*lp.columns[flagged[i]].upper)));
			if (++value[i] <= ub) break;
			value[i] = static_cast<long>(to_double(ScalarTraits<T>::to_rational(ScalarTraits<T>::ceil(lp.columns[flagged[i]].lower))));
		}
		if (i == flagged.size()) break;
	}
	return best;
}

} // namespace eptas::testing

#endif
