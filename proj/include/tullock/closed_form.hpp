#ifndef TULLOCK_CLOSED_FORM_HPP
#define TULLOCK_CLOSED_FORM_HPP

#include <tullock/equilibrium.hpp>
#include <tullock/instance.hpp>

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tullock {

/// Rates at or below this are treated as non-participation in the search.
inline constexpr double participation_epsilon = 1e-14;

/// Willingness factor above which the malicious agent joins a contest among
/// the benign agents with valuations `v` (all of them participating).
inline double participation_threshold(std::span<double const> v)
{
	if (v.empty())
	{
		throw usage_error("participation threshold needs at least one valuation");
	}
	double sum_v = 0.0;
	double sum_inv = 0.0;
	for (double x : v)
	{
		if (!(x > 0.0))
		{
			throw domain_error("valuations must be positive");
		}
		sum_v += x;
		sum_inv += 1.0 / x;
	}
	double const n = static_cast<double>(v.size());
	if (v.size() == 1)
	{
		return 0.0;
	}
	return (n - 1.0) / (sum_v * sum_inv - n * (n - 1.0));
}

/// Exact equilibrium for linear utilities. Starts with every benign agent
/// active and, while some candidate rate is non-positive, drops the agent
/// with the smallest valuation. For each candidate set the malicious agent is
/// active iff theta clears the participation threshold of that set. Only
/// targeted agents enter the malicious agent's objective.
///
/// Rates are computed at unit cost and divided by c; a cost c is the same
/// game as valuations v / c.
inline EquilibriumResult solve_linear_ne(ContestInstance const& inst)
{
	if (!inst.all_linear())
	{
		throw usage_error("closed-form equilibrium requires linear utilities");
	}
	std::vector<double> const v = inst.valuations();
	std::size_t const big_n = v.size();
	bool const malicious = inst.malicious_enabled();
	double const theta = inst.theta();
	double const c = inst.cost();

	std::size_t steps = 0;
	for (std::size_t n = big_n; n >= 1; --n)
	{
		++steps;
		double sum_inv = 0.0;
		double sum_vt = 0.0;
		double count_t = 0.0;
		for (std::size_t i = 0; i < n; ++i)
		{
			sum_inv += 1.0 / v[i];
			if (inst.targeted(i + 1))
			{
				sum_vt += v[i];
				count_t += 1.0;
			}
		}
		double const m1 = static_cast<double>(n) - 1.0;
		bool const mal_active = malicious && count_t > 0.0 && theta * (sum_vt * sum_inv - count_t * m1) > m1;

		double z = 0.0;
		if (mal_active)
		{
			z = theta * sum_vt / (theta * count_t + 1.0);
		}
		else if (n == 1)
		{
			// lone benign agent: supremum profile, every rate tends to zero
			EquilibriumResult r = make_result(inst, StrategyProfile::degenerate(big_n, 1), SolveMethod::closed_form,
			                                  steps);
			r.participating_benign = {1};
			return r;
		}
		else
		{
			z = m1 / sum_inv;
		}

		std::vector<double> x(big_n + 1, 0.0);
		bool feasible = true;
		for (std::size_t i = 0; i < n; ++i)
		{
			x[i + 1] = z * (1.0 - z / v[i]);
			if (x[i + 1] <= participation_epsilon)
			{
				feasible = false;
				break;
			}
		}
		if (!feasible)
		{
			continue;
		}
		if (mal_active)
		{
			x[0] = std::max(0.0, z * (z * sum_inv - m1));
		}
		for (double& xi : x)
		{
			xi /= c;
		}
		return make_result(inst, StrategyProfile(std::move(x)), SolveMethod::closed_form, steps);
	}
	throw std::logic_error("participation search exhausted without an equilibrium");
}

/// As solve_linear_ne with explicit indicators (stored agent order): the
/// malicious agent only counts the utilities of the targeted agents.
inline EquilibriumResult solve_linear_ne_targeted(ContestInstance const& inst, std::vector<bool> indicators)
{
	return solve_linear_ne(inst.with_targeting(std::move(indicators)));
}

struct HomogeneousRates
{
	double benign;
	double malicious;
};

inline void check_homogeneous(std::size_t n, std::size_t m, double theta)
{
	if (n < 1 || m < 1 || m > n)
	{
		throw usage_error("homogeneous contest needs 1 <= M <= N");
	}
	double const mt = static_cast<double>(m) * theta;
	if (!(mt > static_cast<double>(n) - 1.0))
	{
		throw domain_error("malicious agent is inactive for theta <= (N-1)/M; closed forms do not apply");
	}
}

/// Rates of N unit-valuation agents, M of them targeted, malicious active.
inline HomogeneousRates homogeneous_rates(std::size_t n, std::size_t m, double theta)
{
	check_homogeneous(n, m, theta);
	double const mt = static_cast<double>(m) * theta;
	double const q = (1.0 + mt) * (1.0 + mt);
	return {mt / q, (mt + mt * mt - static_cast<double>(n) * mt) / q};
}

inline Measures homogeneous_measures(std::size_t n, std::size_t m, double theta)
{
	check_homogeneous(n, m, theta);
	double const mt = static_cast<double>(m) * theta;
	double const nn = static_cast<double>(n);
	Measures out;
	out.su = nn / (1.0 + mt);
	out.sv = nn / ((1.0 + mt) * (1.0 + mt));
	out.sw = mt / (1.0 + mt);
	out.v0 = -2.0 * mt / (1.0 + mt) + nn * mt / ((1.0 + mt) * (1.0 + mt));
	out.per_agent_u.assign(n, 1.0 / (1.0 + mt));
	out.per_agent_v.assign(n, 1.0 / ((1.0 + mt) * (1.0 + mt)));
	return out;
}

} // namespace tullock

#endif // TULLOCK_CLOSED_FORM_HPP
