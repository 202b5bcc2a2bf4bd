#ifndef TULLOCK_OPTIMUM_HPP
#define TULLOCK_OPTIMUM_HPP

#include <tullock/instance.hpp>
#include <tullock/numeric.hpp>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace tullock {

/// Social optimum of the benign agents with the malicious agent excluded.
/// `sv_max` is the supremum over rate profiles: shares held fixed while all
/// rates shrink to zero, so it coincides with `su_max`.
struct OptimumReport
{
	double su_max = 0.0;
	double sv_max = 0.0;
	std::optional<double> sw_max;  ///< linear instances with N >= 2 only
	std::vector<double> shares;    ///< optimal d_1..d_N
	bool sv_supremum = true;
};

struct RevenueOptimum
{
	double value = 0.0;
	bool degenerate = false;
};

/// Largest equilibrium revenue without the malicious agent over all
/// normalized linear valuation vectors: (N-1)/N, reached at v_i = 1.
inline RevenueOptimum max_osn_revenue(std::size_t n)
{
	if (n < 1)
	{
		throw usage_error("need at least one benign agent");
	}
	if (n == 1)
	{
		return {0.0, true};
	}
	double const nn = static_cast<double>(n);
	return {(nn - 1.0) / nn, false};
}

namespace detail {

/// Share at which U' drops to `lambda`, clamped to [0,1].
inline double share_at_marginal(UtilitySpec const& u, double lambda)
{
	if (evaluate_utility_derivative(u, 0.0) <= lambda)
	{
		return 0.0;
	}
	if (evaluate_utility_derivative(u, 1.0) >= lambda)
	{
		return 1.0;
	}
	return numeric::bisect([&](double d) { return lambda - evaluate_utility_derivative(u, d); }, 0.0, 1.0);
}

} // namespace detail

/// Maximizes sum_i U_i(d_i) over the simplex by water-filling on the common
/// marginal utility. Linear agents take whatever share the concave agents
/// leave at the final level; ties go to the lowest index.
inline OptimumReport social_optimum_utility(ContestInstance const& inst)
{
	std::size_t const n = inst.size();
	std::vector<double> d(n, 0.0);

	if (inst.all_linear())
	{
		d[0] = 1.0;  // sorted: agent 1 has the highest valuation
	}
	else
	{
		double hi = 0.0;
		for (auto const& a : inst.agents())
		{
			hi = std::max(hi, evaluate_utility_derivative(a, 0.0));
		}
		if (!(hi > 0.0))
		{
			throw domain_error("all utilities are zero");
		}
		auto nonlinear_mass = [&](double lambda) {
			double s = 0.0;
			for (auto const& a : inst.agents())
			{
				if (!is_linear(a))
				{
					s += detail::share_at_marginal(a, lambda);
				}
			}
			return s;
		};
		auto linear_above = [&](double lambda) {
			for (auto const& a : inst.agents())
			{
				if (is_linear(a) && std::get<Linear>(a).v > lambda)
				{
					return true;
				}
			}
			return false;
		};
		// excess(lambda) is decreasing; the linear agents contribute a step at their valuation
		auto excess = [&](double lambda) {
			return nonlinear_mass(lambda) + (linear_above(lambda) ? 1.0 : 0.0) - 1.0;
		};
		double lambda = 0.0;
		if (excess(0.0) > 0.0)
		{
			lambda = numeric::bisect(excess, 0.0, hi);
		}
		double used = 0.0;
		for (std::size_t i = 0; i < n; ++i)
		{
			if (!is_linear(inst.agents()[i]))
			{
				d[i] = detail::share_at_marginal(inst.agents()[i], lambda);
				used += d[i];
			}
		}
		double const rest = std::max(0.0, 1.0 - used);
		std::optional<std::size_t> top_linear;
		for (std::size_t i = 0; i < n; ++i)
		{
			if (is_linear(inst.agents()[i])
			    && (!top_linear || std::get<Linear>(inst.agents()[i]).v > std::get<Linear>(inst.agents()[*top_linear]).v))
			{
				top_linear = i;
			}
		}
		if (top_linear)
		{
			d[*top_linear] += rest;
		}
		else if (used > 0.0)
		{
			for (double& di : d)
			{
				di /= used;
			}
		}
	}

	OptimumReport r;
	for (std::size_t i = 0; i < n; ++i)
	{
		r.su_max += evaluate_utility(inst.agents()[i], d[i]);
	}
	r.sv_max = r.su_max;
	if (inst.all_linear() && n >= 2)
	{
		r.sw_max = max_osn_revenue(n).value;
	}
	r.shares = std::move(d);
	return r;
}

inline double social_optimum_net_utility(ContestInstance const& inst)
{
	return social_optimum_utility(inst).sv_max;
}

} // namespace tullock

#endif // TULLOCK_OPTIMUM_HPP
