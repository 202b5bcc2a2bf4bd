#ifndef TULLOCK_NUMERIC_HPP
#define TULLOCK_NUMERIC_HPP

#include <cmath>
#include <cstddef>
#include <numeric>

namespace tullock::numeric {

/// Root of a function that is negative at `lo` and positive at `hi` (or the
/// reverse). Halves the bracket until it cannot shrink any further in double
/// precision or `max_iter` steps have been taken.
template <typename F>
double bisect(F&& f, double lo, double hi, std::size_t max_iter = 400)
{
	double f_lo = f(lo);
	bool const increasing = f_lo < 0.0;
	for (std::size_t it = 0; it < max_iter; ++it)
	{
		double const mid = std::midpoint(lo, hi);
		if (mid <= lo || mid >= hi)
		{
			break;
		}
		double const f_mid = f(mid);
		if (f_mid == 0.0)
		{
			return mid;
		}
		if ((f_mid < 0.0) == increasing)
		{
			lo = mid;
		}
		else
		{
			hi = mid;
		}
	}
	return std::midpoint(lo, hi);
}

/// Grows `hi` geometrically from `start` until `f(hi) < 0`. `f` must be
/// decreasing and eventually negative.
template <typename F>
double grow_bracket(F&& f, double start, double growth, std::size_t max_steps = 2000)
{
	double hi = start;
	for (std::size_t k = 0; k < max_steps && !(f(hi) < 0.0); ++k)
	{
		hi *= growth;
	}
	return hi;
}

inline bool close_rel(double a, double b, double rel)
{
	return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

} // namespace tullock::numeric

#endif // TULLOCK_NUMERIC_HPP
