#ifndef TULLOCK_INSTANCE_HPP
#define TULLOCK_INSTANCE_HPP

#include <tullock/errors.hpp>
#include <tullock/utility.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tullock {

/// One contest: N benign agents with their utilities and a (possibly absent)
/// malicious agent with willingness factor theta. Immutable once built.
///
/// All-linear instances are normalized on construction: agents are sorted by
/// valuation (descending, ties keep input order) and rescaled so the largest
/// valuation is 1. Other instances are sorted by marginal utility at zero and
/// left unscaled. Agents whose utility is identically zero are dropped.
class ContestInstance
{
public:
	ContestInstance(std::vector<UtilitySpec> agents,
	                double theta,
	                double cost = 1.0,
	                std::vector<bool> targeted = {},
	                bool malicious_present = true)
	: theta_(theta),
	  cost_(cost),
	  malicious_(malicious_present)
	{
		if (!(theta >= 0.0) || !std::isfinite(theta))
		{
			throw domain_error("willingness factor must be finite and >= 0");
		}
		if (!(cost > 0.0) || !std::isfinite(cost))
		{
			throw domain_error("unit cost must be finite and > 0");
		}
		if (targeted.empty())
		{
			targeted.assign(agents.size(), true);
		}
		if (targeted.size() != agents.size())
		{
			throw structural_error("targeting indicators must match the number of agents");
		}

		std::vector<std::size_t> order;
		std::vector<double> key(agents.size());
		for (std::size_t i = 0; i < agents.size(); ++i)
		{
			key[i] = evaluate_utility_derivative(agents[i], 0.0);
			if (key[i] > 0.0)
			{
				order.push_back(i);
			}
		}
		if (order.empty())
		{
			throw usage_error("instance needs at least one benign agent with positive valuation");
		}
		std::stable_sort(order.begin(), order.end(),
		                 [&key](std::size_t a, std::size_t b) { return key[a] > key[b]; });

		all_linear_ = std::all_of(order.begin(), order.end(),
		                          [&agents](std::size_t i) { return is_linear(agents[i]); });
		scale_ = all_linear_ ? key[order.front()] : 1.0;

		for (std::size_t i : order)
		{
			agents_.push_back(all_linear_ ? UtilitySpec{Linear{std::get<Linear>(agents[i]).v / scale_}}
			                              : std::move(agents[i]));
			targeted_.push_back(targeted[i]);
			input_index_.push_back(i);
		}
	}

	std::size_t size() const noexcept { return agents_.size(); }
	std::vector<UtilitySpec> const& agents() const noexcept { return agents_; }
	/// Benign agent i, 1-based as in the model (index 0 is the malicious agent).
	UtilitySpec const& agent(std::size_t i) const { return agents_.at(i - 1); }
	bool targeted(std::size_t i) const { return targeted_.at(i - 1); }
	std::vector<bool> const& targeting() const noexcept { return targeted_; }
	std::size_t targeted_count() const
	{
		return static_cast<std::size_t>(std::count(targeted_.begin(), targeted_.end(), true));
	}

	double theta() const noexcept { return theta_; }
	double cost() const noexcept { return cost_; }
	bool malicious_present() const noexcept { return malicious_; }
	/// The malicious agent can only ever act with theta > 0.
	bool malicious_enabled() const noexcept { return malicious_ && theta_ > 0.0; }

	bool all_linear() const noexcept { return all_linear_; }
	/// Factor the input valuations were divided by (1 for non-linear instances).
	double valuation_scale() const noexcept { return scale_; }
	/// Input position of benign agent i (1-based i, 0-based result).
	std::size_t input_index(std::size_t i) const { return input_index_.at(i - 1); }

	/// Normalized valuations v_1 >= ... >= v_N; only for all-linear instances.
	std::vector<double> valuations() const
	{
		if (!all_linear_)
		{
			throw usage_error("valuations are defined only for all-linear instances");
		}
		std::vector<double> v;
		v.reserve(agents_.size());
		for (auto const& a : agents_)
		{
			v.push_back(std::get<Linear>(a).v);
		}
		return v;
	}

	ContestInstance without_malicious() const
	{
		ContestInstance copy = *this;
		copy.malicious_ = false;
		return copy;
	}

	ContestInstance with_theta(double theta) const
	{
		if (!(theta >= 0.0) || !std::isfinite(theta))
		{
			throw domain_error("willingness factor must be finite and >= 0");
		}
		ContestInstance copy = *this;
		copy.theta_ = theta;
		return copy;
	}

	ContestInstance with_cost(double cost) const
	{
		if (!(cost > 0.0) || !std::isfinite(cost))
		{
			throw domain_error("unit cost must be finite and > 0");
		}
		ContestInstance copy = *this;
		copy.cost_ = cost;
		return copy;
	}

	/// Replaces the targeting indicators (given in the stored, sorted order).
	ContestInstance with_targeting(std::vector<bool> targeted) const
	{
		if (targeted.size() != agents_.size())
		{
			throw structural_error("targeting indicators must match the number of agents");
		}
		ContestInstance copy = *this;
		copy.targeted_ = std::move(targeted);
		return copy;
	}

private:
	std::vector<UtilitySpec> agents_;
	std::vector<bool> targeted_;
	std::vector<std::size_t> input_index_;
	double theta_;
	double cost_;
	double scale_ = 1.0;
	bool malicious_;
	bool all_linear_ = false;
};

/// Message rates x_0 (malicious) .. x_N. A degenerate profile stands for the
/// limit where every rate tends to zero while one agent keeps the whole share.
class StrategyProfile
{
public:
	explicit StrategyProfile(std::vector<double> rates)
	: rates_(std::move(rates))
	{
		validate();
	}

	static StrategyProfile degenerate(std::size_t agent_count, std::size_t limit_agent)
	{
		StrategyProfile p(std::vector<double>(agent_count + 1, 0.0));
		if (limit_agent > agent_count)
		{
			throw structural_error("degenerate limit agent out of range");
		}
		p.limit_agent_ = limit_agent;
		return p;
	}

	std::size_t size() const noexcept { return rates_.size(); }
	std::span<double const> rates() const noexcept { return rates_; }
	double rate(std::size_t i) const { return rates_.at(i); }
	double total() const { return std::accumulate(rates_.begin(), rates_.end(), 0.0); }
	double benign_total() const { return std::accumulate(rates_.begin() + 1, rates_.end(), 0.0); }
	bool is_degenerate() const noexcept { return limit_agent_.has_value(); }
	std::optional<std::size_t> limit_agent() const noexcept { return limit_agent_; }

	double share(std::size_t i) const
	{
		if (limit_agent_)
		{
			return i == *limit_agent_ ? 1.0 : 0.0;
		}
		double const z = total();
		return z > 0.0 ? rates_.at(i) / z : 0.0;
	}

	std::vector<double> shares() const
	{
		std::vector<double> d(rates_.size());
		for (std::size_t i = 0; i < d.size(); ++i)
		{
			d[i] = share(i);
		}
		return d;
	}

private:
	void validate() const
	{
		if (rates_.empty())
		{
			throw structural_error("profile needs at least the malicious slot");
		}
		for (double x : rates_)
		{
			if (!(x >= 0.0) || !std::isfinite(x))
			{
				throw domain_error("message rates must be finite and non-negative");
			}
		}
	}

	std::vector<double> rates_;
	std::optional<std::size_t> limit_agent_;
};

struct Measures
{
	double su = 0.0;  ///< total benign utility
	double sv = 0.0;  ///< total benign net utility
	double sw = 0.0;  ///< revenue of the platform
	std::vector<double> per_agent_u;
	std::vector<double> per_agent_v;
	double v0 = 0.0;  ///< malicious payoff
};

/// Evaluates SU, SV, SW and the per-agent payoffs of `profile`. The malicious
/// payoff counts only the utilities of targeted agents.
inline Measures compute_measures(ContestInstance const& inst, StrategyProfile const& profile)
{
	std::size_t const n = inst.size();
	if (profile.size() != n + 1)
	{
		throw structural_error("profile has " + std::to_string(profile.size()) + " rates, instance needs "
		                       + std::to_string(n + 1));
	}
	if (!profile.is_degenerate() && !(profile.total() > 0.0))
	{
		throw domain_error("profile has zero total rate and is not flagged degenerate");
	}
	double const c = inst.cost();
	Measures m;
	m.per_agent_u.resize(n);
	m.per_agent_v.resize(n);
	double targeted_u = 0.0;
	double paid = 0.0;
	for (std::size_t i = 1; i <= n; ++i)
	{
		double const u = evaluate_utility(inst.agent(i), profile.share(i));
		m.per_agent_u[i - 1] = u;
		m.per_agent_v[i - 1] = u - c * profile.rate(i);
		m.su += u;
		paid += profile.rate(i);
		if (inst.targeted(i))
		{
			targeted_u += u;
		}
	}
	m.sv = m.su - c * paid;
	m.sw = c * (paid + profile.rate(0));
	m.v0 = -inst.theta() * targeted_u - c * profile.rate(0);
	if (!inst.malicious_present())
	{
		m.v0 = -c * profile.rate(0);
	}
	return m;
}

// Visibility metrics ---------------------------------------------------------

struct VisibilityConfig
{
	int slots = 1;  ///< K visible timeline positions
};

enum class Metric
{
	mean_visible_messages = 1,    ///< K d
	visible_time_fraction = 2,    ///< 1 - (1 - d)^K, Poisson arrivals
	viewer_fraction = 3,          ///< d
};

inline Metric metric_from_id(int id)
{
	if (id < 1 || id > 3)
	{
		throw usage_error("unknown metric id " + std::to_string(id) + " (expected 1, 2 or 3)");
	}
	return static_cast<Metric>(id);
}

inline double share_to_metric(Metric metric, double d, VisibilityConfig config)
{
	if (config.slots < 1)
	{
		throw usage_error("timeline must show at least one message");
	}
	d = detail::checked_share(d);
	double const k = static_cast<double>(config.slots);
	switch (metric)
	{
	case Metric::mean_visible_messages:
		return k * d;
	case Metric::visible_time_fraction:
		return -std::expm1(k * std::log1p(-d));
	case Metric::viewer_fraction:
		return d;
	}
	throw usage_error("unknown metric");
}

inline double share_to_metric(int metric_id, double d, VisibilityConfig config)
{
	return share_to_metric(metric_from_id(metric_id), d, config);
}

/// Several malicious agents collapse to the one with the largest willingness
/// factor; the others never send at equilibrium.
inline double reduce_malicious(std::span<double const> willingness)
{
	if (willingness.empty())
	{
		throw usage_error("need at least one willingness factor");
	}
	for (double t : willingness)
	{
		if (!(t >= 0.0))
		{
			throw domain_error("willingness factors must be >= 0");
		}
	}
	return *std::max_element(willingness.begin(), willingness.end());
}

} // namespace tullock

#endif // TULLOCK_INSTANCE_HPP
