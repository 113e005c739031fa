#ifndef EPTAS_RATIONAL_HPP
#define EPTAS_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace eptas {

// Expression templates off: `auto` results are values, never views of temporaries.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

class ParseError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// Accepts "num/den", "num" or "-num/den". The denominator must be positive.
inline Rational parse_rational(const std::string& text) {
	const auto slash = text.find('/');
	try {
		if (slash == std::string::npos) return Rational(Integer(text));
		Integer num(text.substr(0, slash));
		Integer den(text.substr(slash + 1));
		if (den <= 0) throw ParseError("non-positive denominator in '" + text + "'");
		return Rational(num, den);
	} catch (const ParseError&) {
		throw;
	} catch (const std::exception&) {
		throw ParseError("malformed rational '" + text + "'");
	}
}

// Always "num/den", also for integers.
inline std::string to_string(const Rational& value) {
	return boost::multiprecision::numerator(value).str() + "/" +
	       boost::multiprecision::denominator(value).str();
}

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

inline Integer floor_int(const Rational& value) {
	const Integer num = boost::multiprecision::numerator(value);
	const Integer den = boost::multiprecision::denominator(value);
	Integer q = num / den;
	if (num % den != 0 && num < 0) q -= 1;
	return q;
}

inline Integer ceil_int(const Rational& value) {
	const Integer num = boost::multiprecision::numerator(value);
	const Integer den = boost::multiprecision::denominator(value);
	Integer q = num / den;
	if (num % den != 0 && num > 0) q += 1;
	return q;
}

inline bool is_integer(const Rational& value) {
	return boost::multiprecision::denominator(value) == 1;
}

// base^exp for any integer exponent; base must be non-zero when exp < 0.
inline Rational pow(const Rational& base, std::int64_t exp) {
	Rational result = 1;
	Rational b = exp < 0 ? Rational(1) / base : base;
	std::uint64_t e = exp < 0 ? static_cast<std::uint64_t>(-exp) : static_cast<std::uint64_t>(exp);
	while (e > 0) {
		if (e & 1U) result *= b;
		e >>= 1U;
		if (e > 0) b *= b;
	}
	return result;
}

// Closest fraction with denominator at most max_den (continued fractions).
inline Rational approximate_rational(double value, long long max_den = 1'000'000) {
	if (!std::isfinite(value)) throw std::domain_error("cannot approximate a non-finite value");
	const bool negative = value < 0;
	double x = negative ? -value : value;
	Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
	double rest = x;
	for (int iter = 0; iter < 64; ++iter) {
		const double a_d = std::floor(rest);
		const Integer a = Integer(static_cast<long long>(a_d));
		const Integer p2 = a * p1 + p0;
		const Integer q2 = a * q1 + q0;
		if (q2 > max_den) break;
		p0 = p1;
		q0 = q1;
		p1 = p2;
		q1 = q2;
		const double frac = rest - a_d;
		if (frac < 1e-15) break;
		if (std::abs(x - p1.convert_to<double>() / q1.convert_to<double>()) <= 1e-15 * std::max(1.0, x)) break;
		rest = 1 / frac;
		if (rest > 1e15) break;
	}
	if (q1 == 0) return Rational(static_cast<long long>(std::llround(value)));
	Rational out(p1, q1);
	return negative ? Rational(-out) : out;
}

// Integer powers of a fixed base > 1. Logarithms are found by exact search over
// rational powers, so values that are exact powers round the right way.
class GeometricScale {
public:
	explicit GeometricScale(Rational base) : base_(std::move(base)) {
		if (base_ <= 1) throw std::invalid_argument("geometric base must exceed 1");
	}

	const Rational& base() const { return base_; }

	Rational pow(std::int64_t k) const { return eptas::pow(base_, k); }

	// Largest k with base^k <= x.
	std::int64_t floor_log(const Rational& x) const {
		if (x <= 0) throw std::domain_error("floor_log of non-positive value");
		std::int64_t lo = 0;
		std::int64_t hi = 0;
		if (x >= 1) {
			// base^lo <= x; find hi with base^hi > x
			hi = 1;
			while (pow(hi) <= x) {
				lo = hi;
				hi *= 2;
			}
		} else {
			// base^hi > x; find lo with base^lo <= x
			lo = -1;
			while (pow(lo) > x) {
				hi = lo;
				lo *= 2;
			}
		}
		while (hi - lo > 1) {
			const std::int64_t mid = lo + (hi - lo) / 2;
			if (pow(mid) <= x) lo = mid;
			else hi = mid;
		}
		return lo;
	}

	// Smallest k with base^k >= x.
	std::int64_t ceil_log(const Rational& x) const {
		const std::int64_t k = floor_log(x);
		return pow(k) == x ? k : k + 1;
	}

	// Exponent of x when x is an exact power of the base.
	std::int64_t exact_log(const Rational& x) const {
		const std::int64_t k = floor_log(x);
		if (pow(k) != x) throw std::domain_error("value is not a power of the base");
		return k;
	}

private:
	Rational base_;
};

} // namespace eptas

#endif
