#ifndef TULLOCK_UTILITY_HPP
#define TULLOCK_UTILITY_HPP

#include <tullock/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <type_traits>
#include <variant>

namespace tullock {

/// U(d) = v d.
struct Linear
{
	double v;
};

/// U(d) = a ln(1 + b d).
struct Logarithmic
{
	double a;
	double b;
};

/// Any other concave utility, given by its value and derivative in the share.
struct Custom
{
	std::string name;
	std::function<double(double)> value;
	std::function<double(double)> derivative;
};

using UtilitySpec = std::variant<Linear, Logarithmic, Custom>;

/// Shares that overshoot [0,1] by at most this much are clamped.
inline constexpr double share_clamp_slack = 1e-12;

namespace detail {

inline double checked_share(double d)
{
	if (d >= 0.0 && d <= 1.0)
	{
		return d;
	}
	if (d > -share_clamp_slack && d < 1.0 + share_clamp_slack)
	{
		return std::clamp(d, 0.0, 1.0);
	}
	throw domain_error("share " + std::to_string(d) + " outside [0,1]");
}

template <typename... Ts>
struct overloaded : Ts...
{
	using Ts::operator()...;
};
template <typename... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace detail

inline UtilitySpec make_linear(double v)
{
	if (!(v >= 0.0) || !std::isfinite(v))
	{
		throw domain_error("linear valuation must be finite and non-negative");
	}
	return Linear{v};
}

inline UtilitySpec make_logarithmic(double a, double b)
{
	if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
	{
		throw domain_error("logarithmic parameters must be finite and non-negative");
	}
	return Logarithmic{a, b};
}

inline double evaluate_utility(UtilitySpec const& spec, double d)
{
	d = detail::checked_share(d);
	return std::visit(detail::overloaded{
		[d](Linear const& u) { return u.v * d; },
		[d](Logarithmic const& u) { return u.a * std::log1p(u.b * d); },
		[d](Custom const& u) { return u.value(d); },
	}, spec);
}

inline double evaluate_utility_derivative(UtilitySpec const& spec, double d)
{
	d = detail::checked_share(d);
	return std::visit(detail::overloaded{
		[](Linear const& u) { return u.v; },
		[d](Logarithmic const& u) { return u.a * u.b / (1.0 + u.b * d); },
		[d](Custom const& u) { return u.derivative(d); },
	}, spec);
}

inline bool is_linear(UtilitySpec const& spec)
{
	return std::holds_alternative<Linear>(spec);
}

/// Scales the utility by `factor` > 0.
inline UtilitySpec scaled(UtilitySpec const& spec, double factor)
{
	return std::visit(detail::overloaded{
		[factor](Linear const& u) -> UtilitySpec { return Linear{u.v * factor}; },
		[factor](Logarithmic const& u) -> UtilitySpec { return Logarithmic{u.a * factor, u.b}; },
		[factor](Custom const& u) -> UtilitySpec {
			return Custom{u.name,
				[f = u.value, factor](double d) { return factor * f(d); },
				[g = u.derivative, factor](double d) { return factor * g(d); }};
		},
	}, spec);
}

/// Heuristic check of the regularity assumption on utilities: U(0) = 0,
/// U' positive and non-increasing on an even grid over [0,1]. A grid cannot
/// prove concavity; it only rejects obvious violations.
inline bool satisfies_regularity(UtilitySpec const& spec, std::size_t grid = 256)
{
	if (std::abs(evaluate_utility(spec, 0.0)) > 1e-12)
	{
		return false;
	}
	double prev = evaluate_utility_derivative(spec, 0.0);
	if (!(prev > 0.0))
	{
		return false;
	}
	for (std::size_t k = 1; k <= grid; ++k)
	{
		double const d = static_cast<double>(k) / static_cast<double>(grid);
		double const cur = evaluate_utility_derivative(spec, d);
		if (!(cur > 0.0) || cur > prev * (1.0 + 1e-12))
		{
			return false;
		}
		prev = cur;
	}
	return true;
}

} // namespace tullock

#endif // TULLOCK_UTILITY_HPP
