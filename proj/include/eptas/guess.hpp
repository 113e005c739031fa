#ifndef EPTAS_GUESS_HPP
#define EPTAS_GUESS_HPP

#include "eptas/config.hpp"
#include "eptas/normalize.hpp"
#include "eptas/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

namespace eptas {

// Candidate (C_opt, s_opt): C_opt = (1+eps)^c_opt_exp approximates the makespan
// from below, s_opt = (1+eps)^s_opt_exp is the speed of the machine attaining it.
struct Guess {
	std::int64_t c_opt_exp = 0;
	std::int64_t s_opt_exp = 0;
	std::int64_t lambda = 0; // lambda of the pair (s_opt, (1+eps) C_opt)
	Rational kappa;

	bool operator==(const Guess& o) const { return c_opt_exp == o.c_opt_exp && s_opt_exp == o.s_opt_exp; }
};

// kappa = eps s_opt / ((1+2eps) ((1+eps)/eps^rho + 1)^{mu~(lambda+1)} (1+eps)^3/eps^2)
inline Rational kappa_for(const SchemeParams& params, std::int64_t s_opt_exp, std::int64_t lambda) {
	const Rational& eps = params.epsilon;
	const Rational s_opt = pow(params.one_plus_eps(), s_opt_exp);
	return eps * s_opt /
	       ((1 + 2 * eps) * configuration_count_bound(params, lambda) * (pow(params.one_plus_eps(), 3) / (eps * eps)));
}

inline Guess make_guess(const SchemeParams& params, std::int64_t c_opt_exp, std::int64_t s_opt_exp) {
	const GeometricScale scale(params.one_plus_eps());
	Guess g;
	g.c_opt_exp = c_opt_exp;
	g.s_opt_exp = s_opt_exp;
	g.lambda = lambda_for(scale.pow(s_opt_exp), scale.pow(c_opt_exp + 1), params);
	g.kappa = kappa_for(params, s_opt_exp, g.lambda);
	return g;
}

// Upper end of the makespan guesses: a left-shifted schedule ends by the last
// rounded supply date plus all work on the slowest machine; the two
// normalisation steps add at most a factor (1+eps)^2.
inline std::int64_t guess_horizon_exp(const RoundedInstance& r) {
	std::int64_t slowest = r.speed_exp.front();
	for (auto s : r.speed_exp) slowest = std::min(slowest, s);
	Rational work = 0;
	for (JobId j = 0; j < r.n(); ++j) work += r.size(j);
	const Rational horizon = r.scale.pow(r.supplies.back().date_exp) + work / r.scale.pow(slowest);
	return r.scale.ceil_log(pow(r.params().one_plus_eps(), 2) * horizon);
}

// Distinct rounded machine speeds in [eps^2, 1] (as exponents), descending.
inline std::vector<std::int64_t> fast_speed_exps(const RoundedInstance& r) {
	const std::int64_t min_exp = r.scale.ceil_log(r.params().epsilon * r.params().epsilon);
	std::set<std::int64_t, std::greater<>> speeds;
	for (auto s : r.speed_exp)
		if (s >= min_exp) speeds.insert(s);
	return {speeds.begin(), speeds.end()};
}

// For every speed s in [eps^2, 1] and every distinct rounded size p, the
// exponents of [p/s, n p/s] together with the idle-aware range
// [p/s, guess_horizon]. Sorted by c_opt_exp ascending, then s_opt_exp descending.
inline std::vector<Guess> enumerate_guesses(const RoundedInstance& r) {
	const auto speeds = fast_speed_exps(r);
	std::set<std::int64_t> sizes(r.size_exp.begin(), r.size_exp.end());
	const std::int64_t horizon = guess_horizon_exp(r);
	std::set<std::pair<std::int64_t, std::int64_t>> pairs; // (c, -s)
	for (auto s : speeds) {
		for (auto p : sizes) {
			const std::int64_t lo = p - s;
			const std::int64_t hi =
			    std::max(horizon, r.scale.ceil_log(Rational(static_cast<long>(r.n())) * r.scale.pow(lo)));
			for (std::int64_t c = lo; c <= hi; ++c) pairs.insert({c, -s});
		}
	}
	std::vector<Guess> out;
	for (const auto& [c, neg_s] : pairs) out.push_back(make_guess(r.params(), c, -neg_s));
	return out;
}

// n (log_{1+eps} n + 2)(1 - log_{1+eps} eps^2) for the size-driven ranges, plus
// the horizon range [min p/s, horizon] once per fast speed.
inline double guess_count_bound(const RoundedInstance& r) {
	const double base = std::log(to_double(r.scale.base()));
	const double n = static_cast<double>(r.n());
	const double eps = to_double(r.params().epsilon);
	const double speeds = 1.0 - std::log(eps * eps) / base;
	const std::int64_t min_size = *std::min_element(r.size_exp.begin(), r.size_exp.end());
	const auto extension = static_cast<double>(std::max<std::int64_t>(0, guess_horizon_exp(r) - min_size + 1));
	return n * (std::log(n) / base + 2) * speeds + speeds * extension;
}

// Load-bound candidates per distinct machine speed: every exponent from the
// smallest rounded processing time on that speed up to (1+eps) C_opt.
inline std::vector<PairKey> candidate_pairs(const RoundedInstance& r, const Guess& guess) {
	std::set<std::int64_t> speeds(r.speed_exp.begin(), r.speed_exp.end());
	const std::int64_t min_size = *std::min_element(r.size_exp.begin(), r.size_exp.end());
	std::vector<PairKey> out;
	for (auto s : speeds)
		for (std::int64_t w = min_size - s; w <= guess.c_opt_exp + 1; ++w) out.push_back({s, w});
	return out;
}

} // namespace eptas

#endif
