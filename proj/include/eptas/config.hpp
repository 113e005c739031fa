#ifndef EPTAS_CONFIG_HPP
#define EPTAS_CONFIG_HPP

#include "eptas/model.hpp"
#include "eptas/normalize.hpp"
#include "eptas/rounding.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eptas {

enum class JobClass { Huge, Big, Small };

inline const char* to_string(JobClass c) {
	switch (c) {
	case JobClass::Huge: return "huge";
	case JobClass::Big: return "big";
	case JobClass::Small: return "small";
	}
	return "?";
}

// Class of a job of size p for the pair (s, w): huge above (1+eps)w, small below
// eps^rho w, big in between (both ends inclusive).
inline JobClass classify(const Rational& p, const Rational& s, const Rational& w, const SchemeParams& params) {
	const Rational t = p / s;
	if (t > params.one_plus_eps() * w) return JobClass::Huge;
	if (t < params.eps_pow_rho() * w) return JobClass::Small;
	return JobClass::Big;
}

// Exponents of the extreme big processing times for load bound w:
// Delta = ceil log((1+eps) w), delta = ceil log(eps^rho w).
struct BigRange {
	std::int64_t delta = 0;
	std::int64_t Delta = 0;
	std::int64_t lambda() const { return Delta - delta + 1; }
};

inline BigRange big_range(const Rational& w, const SchemeParams& params) {
	const GeometricScale scale(params.one_plus_eps());
	return {scale.ceil_log(params.eps_pow_rho() * w), scale.ceil_log(params.one_plus_eps() * w)};
}

inline std::int64_t lambda_for(const Rational& /*s*/, const Rational& w, const SchemeParams& params) {
	if (w <= 0) throw std::domain_error("load bound must be positive");
	return big_range(w, params).lambda();
}

// Largest value a configuration cell may take: floor((1+eps)/eps^rho).
inline std::int64_t max_cell_value(const SchemeParams& params) {
	return static_cast<std::int64_t>(floor_int(params.one_plus_eps() / params.eps_pow_rho()));
}

// ((1+eps)/eps^rho + 1)^{mu~ (lambda+1)}
inline Rational configuration_count_bound(const SchemeParams& params, std::int64_t lambda) {
	return pow(params.one_plus_eps() / params.eps_pow_rho() + 1, mu_tilde(params) * (lambda + 1));
}

struct ConfigCell {
	std::vector<int> big; // big[r-1] = B(k, r), processing time (1+eps)^{delta + r - 1}
	int sand = 0;         // S(k)

	bool operator==(const ConfigCell&) const = default;
	auto operator<=>(const ConfigCell&) const = default;
};

// Compact per-machine schedule descriptor. An empty configuration stands for a
// machine without jobs: load bound 0, no windows.
struct Configuration {
	std::int64_t s_exp = 0;
	std::int64_t w_exp = 0;
	bool empty = false;
	std::int64_t first_period = 0; // window covers periods first_period .. first_period + windows.size() - 1
	BigRange range;
	std::vector<ConfigCell> windows;

	std::int64_t lambda() const { return range.lambda(); }
	std::int64_t last_period() const { return first_period + static_cast<std::int64_t>(windows.size()) - 1; }
	bool has_period(std::int64_t k) const { return !empty && k >= first_period && k <= last_period(); }
	const ConfigCell& cell(std::int64_t k) const { return windows.at(static_cast<std::size_t>(k - first_period)); }
	// r is 1-based; returns 0 outside the big range
	int big_count(std::int64_t k, std::int64_t proc_exp) const {
		if (!has_period(k) || proc_exp < range.delta || proc_exp > range.Delta) return 0;
		return cell(k).big[static_cast<std::size_t>(proc_exp - range.delta)];
	}
	bool all_zero() const {
		for (const auto& c : windows) {
			if (c.sand != 0) return false;
			for (int b : c.big)
				if (b != 0) return false;
		}
		return true;
	}

	bool operator==(const Configuration& o) const {
		return s_exp == o.s_exp && w_exp == o.w_exp && empty == o.empty && first_period == o.first_period &&
		       windows == o.windows;
	}
};

inline Configuration empty_configuration(std::int64_t s_exp) {
	Configuration c;
	c.s_exp = s_exp;
	c.empty = true;
	return c;
}

// Window of a configuration with load bound (1+eps)^w_exp. The period count is
// nu_u - nu_l + 1 with nu_l = floor log(eps w), nu_u = ceil log((1+eps) w); the
// window is anchored two periods below nu_l so that it holds every start of a
// machine stretched to load at most w (starts lie in (eps w/(1+eps)^2, w)).
struct PeriodWindow {
	std::int64_t first = 0;
	std::int64_t count = 0;
	std::int64_t last() const { return first + count - 1; }
};

inline PeriodWindow period_window(std::int64_t w_exp, const SchemeParams& params) {
	const GeometricScale scale(params.one_plus_eps());
	const Rational w = scale.pow(w_exp);
	const std::int64_t nu_l = scale.floor_log(params.epsilon * w);
	const std::int64_t nu_u = scale.ceil_log(params.one_plus_eps() * w);
	return {nu_l - 2, nu_u - nu_l + 1};
}

inline Configuration blank_configuration(std::int64_t s_exp, std::int64_t w_exp, const SchemeParams& params) {
	const GeometricScale scale(params.one_plus_eps());
	Configuration c;
	c.s_exp = s_exp;
	c.w_exp = w_exp;
	c.range = big_range(scale.pow(w_exp), params);
	const auto window = period_window(w_exp, params);
	c.first_period = window.first;
	c.windows.assign(static_cast<std::size_t>(window.count),
	                 ConfigCell{std::vector<int>(static_cast<std::size_t>(c.lambda()), 0), 0});
	return c;
}

struct MachineItem {
	bool sand = false;
	std::int64_t period = 0;
	std::int64_t proc_exp = 0; // big items only
	Rational start;
	Rational length; // processing time on the configuration's speed
};

struct OneMachineSchedule {
	bool feasible = true;
	std::vector<MachineItem> items;
	Rational load = 0;
};

// Lays the configuration out period by period: start at max(period start,
// previous finish), then the sand, then the big jobs by non-decreasing size.
// Infeasible when more than one big job of a period completes after the period
// ends. Period k starts at (1+eps)^k, which is also the rounded supply date
// carrying exponent k.
inline OneMachineSchedule generate_one_machine_schedule(const Configuration& c, const SchemeParams& params) {
	OneMachineSchedule out;
	if (c.empty) return out;
	const GeometricScale scale(params.one_plus_eps());
	const Rational sand_unit = params.eps_pow_rho() * scale.pow(c.w_exp);
	Rational finish = scale.pow(c.first_period);
	for (std::int64_t k = c.first_period; k <= c.last_period(); ++k) {
		const auto& cell = c.cell(k);
		const Rational period_end = scale.pow(k + 1);
		Rational t = std::max(scale.pow(k), finish);
		if (cell.sand > 0) {
			const Rational length = cell.sand * sand_unit;
			out.items.push_back({true, k, 0, t, length});
			t += length;
		}
		int crossing = 0;
		for (std::int64_t r = 0; r < c.lambda(); ++r) {
			const std::int64_t proc_exp = c.range.delta + r;
			const Rational length = scale.pow(proc_exp);
			for (int copy = 0; copy < cell.big[static_cast<std::size_t>(r)]; ++copy) {
				out.items.push_back({false, k, proc_exp, t, length});
				t += length;
				if (t > period_end) ++crossing;
			}
		}
		if (crossing > 1) out.feasible = false;
		finish = t;
		if (!out.items.empty()) out.load = finish;
	}
	return out;
}

class IntractableParameters : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultConfigurationCap = 2'000'000;

inline Integer raw_configuration_count(std::int64_t s_exp, std::int64_t w_exp, const SchemeParams& params) {
	const auto blank = blank_configuration(s_exp, w_exp, params);
	const auto cells = static_cast<std::uint64_t>(blank.windows.size()) * static_cast<std::uint64_t>(blank.lambda() + 1);
	Integer count = 1;
	for (std::uint64_t i = 0; i < cells; ++i) count *= (max_cell_value(params) + 1);
	return count;
}

// Every feasible configuration for the pair ((1+eps)^s_exp, (1+eps)^w_exp) in
// lexicographic order of the cell vector (windows in period order; within a
// window B(k,1..lambda) then S(k)).
inline std::vector<Configuration> enumerate_configurations(std::int64_t s_exp, std::int64_t w_exp, const SchemeParams& params,
                                                           std::uint64_t cap = kDefaultConfigurationCap) {
	const Integer raw = raw_configuration_count(s_exp, w_exp, params);
	if (raw > cap)
		throw IntractableParameters("scheme parameters intractable: pair (s_exp=" + std::to_string(s_exp) +
		                            ", w_exp=" + std::to_string(w_exp) + ") has " + raw.str() +
		                            " raw configurations, cap is " + std::to_string(cap));
	const int radix = static_cast<int>(max_cell_value(params)) + 1;
	Configuration current = blank_configuration(s_exp, w_exp, params);
	std::vector<int*> cells;
	for (auto& w : current.windows) {
		for (auto& b : w.big) cells.push_back(&b);
		cells.push_back(&w.sand);
	}
	std::vector<Configuration> out;
	for (;;) {
		if (generate_one_machine_schedule(current, params).feasible) out.push_back(current);
		std::size_t pos = cells.size();
		while (pos > 0) {
			--pos;
			if (++*cells[pos] < radix) break;
			*cells[pos] = 0;
			if (pos == 0) return out;
		}
		if (cells.empty()) return out;
	}
}

// The configuration set is invariant under scaling by (1+eps): a configuration
// enumerated for (0, 0) becomes one for (s_exp, w_exp) by moving its periods
// and big range up by w_exp.
inline Configuration relabel_configuration(const Configuration& base, std::int64_t s_exp, std::int64_t w_exp) {
	Configuration c = base;
	c.s_exp = s_exp;
	if (c.empty) return c;
	c.w_exp = base.w_exp + w_exp;
	c.first_period += w_exp;
	c.range.delta += w_exp;
	c.range.Delta += w_exp;
	return c;
}

struct PairKey {
	std::int64_t s_exp = 0;
	std::int64_t w_exp = 0;
	auto operator<=>(const PairKey&) const = default;
};

} // namespace eptas

#endif
