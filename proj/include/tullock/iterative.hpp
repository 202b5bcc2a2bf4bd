#ifndef TULLOCK_ITERATIVE_HPP
#define TULLOCK_ITERATIVE_HPP

#include <tullock/equilibrium.hpp>
#include <tullock/instance.hpp>
#include <tullock/numeric.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tullock {

struct SolverConfig
{
	double rate_tolerance = 1e-9;   ///< max |dx| over one sweep to stop
	double foc_tolerance = 1e-8;    ///< KKT residual bound to stop
	std::size_t max_sweeps = 100000;
	double damping = 0.5;           ///< x <- (1 - damping) x + damping BR(x)
	double initial_rate = 0.1;
	double bracket_growth = 2.0;
	std::size_t freeze_after = 50;  ///< consecutive zero best responses before an agent is pinned at 0

	void validate() const
	{
		if (!(rate_tolerance > 0.0) || !(foc_tolerance > 0.0))
		{
			throw usage_error("solver tolerances must be positive");
		}
		if (max_sweeps < 1)
		{
			throw usage_error("max_sweeps must be at least 1");
		}
		if (!(damping > 0.0 && damping <= 1.0))
		{
			throw usage_error("damping must lie in (0,1]");
		}
		if (!(initial_rate > 0.0) || !(bracket_growth > 1.0))
		{
			throw usage_error("initial rate must be positive and bracket growth > 1");
		}
	}
};

/// Benign best response to an aggregate `z_minus` of the other agents' rates:
/// the root of U'(x/(x+z_-)) z_- / (x+z_-)^2 = c, or 0 when the marginal
/// payoff at x = 0 is already non-positive.
inline double best_response_benign(UtilitySpec const& spec, double z_minus, double cost,
                                   SolverConfig const& config = {})
{
	if (!(z_minus > 0.0))
	{
		throw domain_error("best response needs a positive aggregate of the other rates");
	}
	auto foc = [&](double x) {
		double const z = x + z_minus;
		return evaluate_utility_derivative(spec, x / z) * z_minus / (z * z) - cost;
	};
	if (foc(0.0) <= 0.0)
	{
		return 0.0;
	}
	double const hi = numeric::grow_bracket(foc, std::max(z_minus, 1e-300), config.bracket_growth);
	return numeric::bisect(foc, 0.0, hi);
}

/// Malicious best response against fixed benign rates (`benign[i-1]` = x_i).
inline double best_response_malicious(ContestInstance const& inst, std::span<double const> benign,
                                      SolverConfig const& config = {})
{
	if (benign.size() != inst.size())
	{
		throw structural_error("benign rate vector does not match the instance");
	}
	double s = 0.0;
	for (double x : benign)
	{
		s += x;
	}
	if (!(s > 0.0))
	{
		throw domain_error("malicious best response needs positive benign traffic");
	}
	if (!inst.malicious_enabled())
	{
		return 0.0;
	}
	auto foc = [&](double x0) {
		double const z = x0 + s;
		double acc = 0.0;
		for (std::size_t i = 0; i < benign.size(); ++i)
		{
			if (inst.targeted(i + 1) && benign[i] > 0.0)
			{
				acc += evaluate_utility_derivative(inst.agent(i + 1), benign[i] / z) * benign[i];
			}
		}
		return inst.theta() * acc / (z * z) - inst.cost();
	};
	if (foc(0.0) <= 0.0)
	{
		return 0.0;
	}
	double const hi = numeric::grow_bracket(foc, s, config.bracket_growth);
	return numeric::bisect(foc, 0.0, hi);
}

/// Equilibrium of a contest with arbitrary concave utilities via damped
/// Gauss-Seidel best-response sweeps (benign 1..N, then malicious).
///
/// `start` optionally gives the initial rates x_0..x_N; otherwise every agent
/// starts at `config.initial_rate`.
inline EquilibriumResult solve_general_ne(ContestInstance const& inst, SolverConfig const& config = {},
                                          std::optional<std::vector<double>> start = std::nullopt)
{
	config.validate();
	std::size_t const n = inst.size();
	for (auto const& a : inst.agents())
	{
		if (!satisfies_regularity(a))
		{
			throw domain_error("utility fails the numerical positivity/concavity check");
		}
	}
	bool const malicious = inst.malicious_enabled();
	if (n == 1 && !malicious)
	{
		return make_result(inst, StrategyProfile::degenerate(1, 1), SolveMethod::best_response, 0);
	}

	std::vector<double> x = start ? *start : std::vector<double>(n + 1, config.initial_rate);
	if (x.size() != n + 1)
	{
		throw structural_error("start profile does not match the instance");
	}
	if (!malicious)
	{
		x[0] = 0.0;
	}
	std::vector<std::size_t> zero_streak(n + 1, 0);
	std::vector<bool> frozen(n + 1, false);
	double const lambda = config.damping;

	auto update = [&](std::size_t i, double br) {
		double const old = x[i];
		zero_streak[i] = br == 0.0 ? zero_streak[i] + 1 : 0;
		if (zero_streak[i] >= config.freeze_after)
		{
			frozen[i] = true;
			x[i] = 0.0;
		}
		else
		{
			x[i] = (1.0 - lambda) * old + lambda * br;
		}
		return std::abs(x[i] - old);
	};

	for (std::size_t sweep = 1; sweep <= config.max_sweeps; ++sweep)
	{
		double total = 0.0;
		for (double xi : x)
		{
			total += xi;
		}
		double change = 0.0;
		for (std::size_t i = 1; i <= n; ++i)
		{
			if (frozen[i])
			{
				continue;
			}
			double const z_minus = total - x[i];
			double br = 0.0;
			if (z_minus > 0.0)
			{
				br = best_response_benign(inst.agent(i), z_minus, inst.cost(), config);
			}
			else
			{
				// alone on the timeline: any vanishing rate wins everything
				br = x[i] * 0.5;
			}
			double const before = x[i];
			change = std::max(change, update(i, br));
			total += x[i] - before;
		}
		if (malicious && !frozen[0])
		{
			std::span<double const> benign(x.data() + 1, n);
			double const s = total - x[0];
			double const br = s > 0.0 ? best_response_malicious(inst, benign, config) : 0.0;
			change = std::max(change, update(0, br));
			total = 0.0;
			for (double xi : x)
			{
				total += xi;
			}
		}

		if (total < 1e-12)
		{
			std::size_t best = 1;
			for (std::size_t i = 2; i <= n; ++i)
			{
				if (evaluate_utility_derivative(inst.agent(i), 1.0) > evaluate_utility_derivative(inst.agent(best), 1.0))
				{
					best = i;
				}
			}
			return make_result(inst, StrategyProfile::degenerate(n, best), SolveMethod::best_response, sweep);
		}

		if (change < config.rate_tolerance)
		{
			StrategyProfile p(x);
			auto const foc = foc_values(inst, p);
			bool reopened = false;
			for (std::size_t i = 0; i <= n; ++i)
			{
				if (frozen[i] && foc[i] > config.foc_tolerance)
				{
					frozen[i] = false;
					zero_streak[i] = 0;
					reopened = true;
				}
			}
			if (!reopened && kkt_violation(p, foc) < config.foc_tolerance)
			{
				return make_result(inst, std::move(p), SolveMethod::best_response, sweep);
			}
		}
	}
	StrategyProfile last(x);
	auto residuals = foc_values(inst, last);
	throw non_convergence_error("best-response dynamics did not converge within "
	                                + std::to_string(config.max_sweeps) + " sweeps",
	                            std::move(last), std::move(residuals), config.max_sweeps);
}

} // namespace tullock

#endif // TULLOCK_ITERATIVE_HPP
