#ifndef TULLOCK_EQUILIBRIUM_HPP
#define TULLOCK_EQUILIBRIUM_HPP

#include <tullock/instance.hpp>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tullock {

enum class SolveMethod
{
	closed_form,
	best_response,
};

inline char const* to_string(SolveMethod m)
{
	return m == SolveMethod::closed_form ? "closed_form" : "best_response";
}

struct EquilibriumResult
{
	StrategyProfile profile{std::vector<double>{0.0}};
	std::vector<std::size_t> participating_benign;  ///< 1-based indices with x_i > 0
	bool malicious_active = false;
	/// First-order condition value per agent (index 0 is the malicious agent);
	/// zero at an interior optimum, non-positive at an inactive agent.
	std::vector<double> foc_residuals;
	SolveMethod method = SolveMethod::closed_form;
	std::size_t iterations = 0;
	bool degenerate = false;
};

/// U_i'(d_i) z_{-i} / z^2 - c for benign agent i at `rates`.
inline double benign_foc(ContestInstance const& inst, std::span<double const> rates, std::size_t i)
{
	double z = 0.0;
	for (double x : rates)
	{
		z += x;
	}
	double const d = rates[i] / z;
	return evaluate_utility_derivative(inst.agent(i), d) * (z - rates[i]) / (z * z) - inst.cost();
}

/// theta * sum_{i targeted} U_i'(d_i) x_i / z^2 - c at `rates`.
inline double malicious_foc(ContestInstance const& inst, std::span<double const> rates)
{
	double z = 0.0;
	for (double x : rates)
	{
		z += x;
	}
	double acc = 0.0;
	for (std::size_t i = 1; i < rates.size(); ++i)
	{
		if (inst.targeted(i) && rates[i] > 0.0)
		{
			acc += evaluate_utility_derivative(inst.agent(i), rates[i] / z) * rates[i];
		}
	}
	return inst.theta() * acc / (z * z) - inst.cost();
}

/// FOC values for all agents; the malicious slot is 0 when it cannot act.
inline std::vector<double> foc_values(ContestInstance const& inst, StrategyProfile const& profile)
{
	std::vector<double> r(profile.size(), 0.0);
	if (profile.is_degenerate() || !(profile.total() > 0.0))
	{
		return r;
	}
	auto const x = profile.rates();
	for (std::size_t i = 1; i < r.size(); ++i)
	{
		r[i] = benign_foc(inst, x, i);
	}
	if (inst.malicious_enabled())
	{
		r[0] = malicious_foc(inst, x);
	}
	return r;
}

/// Largest violation of the complementarity conditions: |FOC| for agents with
/// a positive rate, max(FOC, 0) for agents at zero.
inline double kkt_violation(StrategyProfile const& profile, std::span<double const> foc)
{
	double worst = 0.0;
	for (std::size_t i = 0; i < foc.size(); ++i)
	{
		double const v = profile.rate(i) > 0.0 ? std::abs(foc[i]) : std::max(foc[i], 0.0);
		worst = std::max(worst, v);
	}
	return worst;
}

inline EquilibriumResult make_result(ContestInstance const& inst, StrategyProfile profile, SolveMethod method,
                                     std::size_t iterations)
{
	EquilibriumResult r;
	r.degenerate = profile.is_degenerate();
	r.foc_residuals = foc_values(inst, profile);
	for (std::size_t i = 1; i < profile.size(); ++i)
	{
		if (profile.rate(i) > 0.0)
		{
			r.participating_benign.push_back(i);
		}
	}
	r.malicious_active = profile.rate(0) > 0.0;
	r.method = method;
	r.iterations = iterations;
	r.profile = std::move(profile);
	return r;
}

/// Thrown when best-response dynamics stop before meeting the tolerances.
class non_convergence_error : public std::runtime_error
{
public:
	non_convergence_error(std::string const& what, StrategyProfile last, std::vector<double> residuals,
	                      std::size_t sweeps)
	: std::runtime_error(what),
	  last_(std::move(last)),
	  residuals_(std::move(residuals)),
	  sweeps_(sweeps)
	{
	}

	StrategyProfile const& last_profile() const noexcept { return last_; }
	std::vector<double> const& residuals() const noexcept { return residuals_; }
	std::size_t sweeps() const noexcept { return sweeps_; }

private:
	StrategyProfile last_;
	std::vector<double> residuals_;
	std::size_t sweeps_;
};

} // namespace tullock

#endif // TULLOCK_EQUILIBRIUM_HPP
