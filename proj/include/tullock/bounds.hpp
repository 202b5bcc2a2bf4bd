#ifndef TULLOCK_BOUNDS_HPP
#define TULLOCK_BOUNDS_HPP

#include <tullock/errors.hpp>
#include <tullock/numeric.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>

// Analytic efficiency bounds for linear benign utilities. Ratio names:
//   b1 = SU_mal / SU_max    b2 = SU_mal / SU_nom
//   b3 = SV_mal / SV_max    b4 = SV_mal / SV_nom
//   b5 = SW_mal / SW_max    b6 = SW_mal / SW_nom

namespace tullock::bounds {

namespace detail {

inline void check_args(std::size_t n, double theta)
{
	if (n < 1)
	{
		throw usage_error("need at least one benign agent");
	}
	if (!(theta >= 0.0) || !std::isfinite(theta))
	{
		throw domain_error("willingness factor must be finite and >= 0");
	}
}

inline double sq(double x) { return x * x; }

} // namespace detail

/// Worst-case SU ratio when only benign competition matters:
/// 1 - (N-1)(sqrt(N) - sqrt(N-1))^2.
inline double benign_competition_floor(std::size_t n)
{
	double const nn = static_cast<double>(n);
	return 1.0 - (nn - 1.0) * detail::sq(std::sqrt(nn) - std::sqrt(nn - 1.0));
}

/// Willingness factor where the two branches of the b1 lower bound cross,
/// ((sqrt(N/(N-1)) + 1)^2 - 1)^{-1}. Infinite for N = 1.
inline double su_lower_crossover(std::size_t n)
{
	if (n < 2)
	{
		return std::numeric_limits<double>::infinity();
	}
	double const nn = static_cast<double>(n);
	return 1.0 / (detail::sq(std::sqrt(nn / (nn - 1.0)) + 1.0) - 1.0);
}

inline double lb_su_mal_over_max(std::size_t n, double theta)
{
	detail::check_args(n, theta);
	return std::min(1.0 / (1.0 + theta), benign_competition_floor(n));
}

inline double ub_su_mal_over_max(std::size_t n, double theta)
{
	detail::check_args(n, theta);
	double const nn = static_cast<double>(n);
	if (theta <= (nn - 1.0) / nn)
	{
		return 1.0;
	}
	return nn / (theta * nn + 1.0);
}

inline double lb_su_mal_over_nom(double theta)
{
	detail::check_args(1, theta);
	return 1.0 / (1.0 + theta);
}

inline double lb_sv_mal_over_nom(double theta)
{
	detail::check_args(1, theta);
	return 1.0 / detail::sq(1.0 + theta);
}

inline double vtilde_polynomial(std::size_t n, double theta, double v)
{
	double const nn = static_cast<double>(n);
	return (2.0 * (nn - 1.0) * v + (3.0 - 2.0 * nn + 1.0 / (theta * theta))) * v * v - 1.0;
}

/// Root in (0,1) of 2(n-1)v^3 + (3 - 2n + theta^-2)v^2 - 1. The polynomial is
/// -1 at 0 and theta^-2 at 1.
inline double solve_vtilde(std::size_t n, double theta)
{
	if (n < 1)
	{
		throw usage_error("need n >= 1");
	}
	if (!(theta > 0.0) || !std::isfinite(theta))
	{
		throw domain_error("vtilde needs a positive finite willingness factor");
	}
	return numeric::bisect([n, theta](double v) { return vtilde_polynomial(n, theta, v); }, 0.0, 1.0);
}

/// The b3 lower-bound candidate from competition among benign agents alone.
inline double sv_no_malicious_candidate(std::size_t n)
{
	double const nn = static_cast<double>(n);
	double const r = std::sqrt(nn * nn - 1.0);
	return 1.0 + (nn - 1.0) * (r - (nn + 1.0)) / (1.0 + 0.5 * (r + (nn - 1.0)));
}

/// The b3 lower-bound candidate with n benign agents and the malicious agent active.
inline double sv_malicious_candidate(std::size_t n, double theta)
{
	double const nn = static_cast<double>(n);
	double const w = solve_vtilde(n, theta);
	double const head = (1.0 + (nn - 1.0) * w) / (1.0 + nn * theta);
	return (1.0 - nn * theta) * head + (1.0 + (nn - 1.0) / w) * detail::sq(theta * head);
}

/// Minimum over the no-malicious candidate and the N malicious candidates.
inline double lb_sv_mal_over_max(std::size_t n, double theta)
{
	detail::check_args(n, theta);
	double best = sv_no_malicious_candidate(n);
	if (theta > 0.0)
	{
		for (std::size_t k = 1; k <= n; ++k)
		{
			best = std::min(best, sv_malicious_candidate(k, theta));
		}
	}
	return best;
}

inline double ub_sv_mal_over_max(double theta)
{
	detail::check_args(1, theta);
	double const r2 = std::sqrt(2.0);
	if (theta <= r2 - 1.0)
	{
		return 1.0 / detail::sq(1.0 + theta);
	}
	if (theta <= 0.5)
	{
		return 0.5;
	}
	if (theta <= r2 / 2.0)
	{
		return 2.0 / detail::sq(1.0 + 2.0 * theta);
	}
	return 1.0 / detail::sq(1.0 + theta);
}

/// Approximate upper bound of b2. Advisory: not a proven bound.
inline double ub_su_mal_over_nom_approx(std::size_t n, double theta)
{
	detail::check_args(n, theta);
	double const nn = static_cast<double>(n);
	if (theta <= (nn - 1.0) / nn)
	{
		return 1.0;
	}
	return std::max(nn / (1.0 + nn * theta), (1.0 / (1.0 + theta)) / benign_competition_floor(n));
}

struct Interval
{
	double lower;
	double upper;  ///< +inf when unbounded
};

/// Envelope of b5 with SW_max = (N-1)/N. Needs N >= 2.
inline Interval bounds_sw_mal_over_max(std::size_t n, double theta)
{
	detail::check_args(n, theta);
	if (n < 2)
	{
		throw usage_error("revenue bounds need N >= 2");
	}
	double const nn = static_cast<double>(n);
	return {theta * nn / ((1.0 + theta) * (nn - 1.0)),
	        std::max(1.0, theta * nn * nn / ((1.0 + theta * nn) * (nn - 1.0)))};
}

inline Interval bounds_sw_mal_over_nom()
{
	return {1.0, std::numeric_limits<double>::infinity()};
}

/// All bound values at one (N, theta).
struct BoundReport
{
	std::size_t n = 0;
	double theta = 0.0;
	double lb_b1 = 0.0, ub_b1 = 0.0;
	double lb_b2 = 0.0, ub_b2_advisory = 0.0;
	double lb_b3 = 0.0, ub_b3 = 0.0;
	double lb_b4 = 0.0;
	std::optional<double> lb_b5, ub_b5;
	double lb_b6 = 1.0;
	/// "benign" when the b1 floor is set by benign competition, "theta" otherwise.
	std::string b1_regime;
	/// "no_malicious" or "malicious" for the b3 lower bound.
	std::string b3_regime;
};

inline BoundReport make_bound_report(std::size_t n, double theta)
{
	BoundReport r;
	r.n = n;
	r.theta = theta;
	r.lb_b1 = lb_su_mal_over_max(n, theta);
	r.ub_b1 = ub_su_mal_over_max(n, theta);
	r.lb_b2 = lb_su_mal_over_nom(theta);
	r.ub_b2_advisory = ub_su_mal_over_nom_approx(n, theta);
	r.lb_b3 = lb_sv_mal_over_max(n, theta);
	r.ub_b3 = ub_sv_mal_over_max(theta);
	r.lb_b4 = lb_sv_mal_over_nom(theta);
	if (n >= 2)
	{
		auto const sw = bounds_sw_mal_over_max(n, theta);
		r.lb_b5 = sw.lower;
		r.ub_b5 = sw.upper;
	}
	r.lb_b6 = bounds_sw_mal_over_nom().lower;
	r.b1_regime = benign_competition_floor(n) <= 1.0 / (1.0 + theta) ? "benign" : "theta";
	r.b3_regime = r.lb_b3 == sv_no_malicious_candidate(n) ? "no_malicious" : "malicious";
	return r;
}

} // namespace tullock::bounds

#endif // TULLOCK_BOUNDS_HPP
