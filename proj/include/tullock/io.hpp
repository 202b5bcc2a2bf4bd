#ifndef TULLOCK_IO_HPP
#define TULLOCK_IO_HPP

#include <tullock/equilibrium.hpp>
#include <tullock/harness.hpp>
#include <tullock/instance.hpp>

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace tullock::io {

using nlohmann::json;

/// Malformed instance document; `path` points at the offending field.
class parse_error : public usage_error
{
public:
	parse_error(std::string path, std::string const& msg)
	: usage_error(path + ": " + msg),
	  path_(std::move(path))
	{
	}

	std::string const& path() const noexcept { return path_; }

private:
	std::string path_;
};

namespace detail {

inline double number_at(json const& obj, char const* key, std::string const& path)
{
	auto it = obj.find(key);
	if (it == obj.end())
	{
		throw parse_error(path + "." + key, "missing field");
	}
	if (!it->is_number())
	{
		throw parse_error(path + "." + key, "expected a number");
	}
	return it->get<double>();
}

} // namespace detail

/// {"theta", "cost" (optional, default 1), "agents": [{"type":"linear","v"} | {"type":"log","a","b"}],
///  "targeted" (optional), "malicious" (optional, default true)}
inline ContestInstance instance_from_json(json const& doc)
{
	if (!doc.is_object())
	{
		throw parse_error("$", "instance must be a JSON object");
	}
	double const theta = detail::number_at(doc, "theta", "$");
	double const cost = doc.contains("cost") ? detail::number_at(doc, "cost", "$") : 1.0;
	auto agents_it = doc.find("agents");
	if (agents_it == doc.end() || !agents_it->is_array())
	{
		throw parse_error("$.agents", "expected an array of agents");
	}
	std::vector<UtilitySpec> agents;
	for (std::size_t i = 0; i < agents_it->size(); ++i)
	{
		auto const& a = (*agents_it)[i];
		std::string const path = "$.agents[" + std::to_string(i) + "]";
		if (!a.is_object() || !a.contains("type") || !a["type"].is_string())
		{
			throw parse_error(path + ".type", "expected \"linear\" or \"log\"");
		}
		auto const type = a["type"].get<std::string>();
		try
		{
			if (type == "linear")
			{
				agents.push_back(make_linear(detail::number_at(a, "v", path)));
			}
			else if (type == "log")
			{
				agents.push_back(make_logarithmic(detail::number_at(a, "a", path), detail::number_at(a, "b", path)));
			}
			else
			{
				throw parse_error(path + ".type", "unknown utility type '" + type + "'");
			}
		}
		catch (domain_error const& e)
		{
			throw parse_error(path, e.what());
		}
	}
	std::vector<bool> targeted;
	if (auto t = doc.find("targeted"); t != doc.end())
	{
		if (!t->is_array() || t->size() != agents.size())
		{
			throw parse_error("$.targeted", "expected one boolean per agent");
		}
		for (std::size_t i = 0; i < t->size(); ++i)
		{
			if (!(*t)[i].is_boolean())
			{
				throw parse_error("$.targeted[" + std::to_string(i) + "]", "expected a boolean");
			}
			targeted.push_back((*t)[i].get<bool>());
		}
	}
	bool malicious = true;
	if (auto m = doc.find("malicious"); m != doc.end())
	{
		if (!m->is_boolean())
		{
			throw parse_error("$.malicious", "expected a boolean");
		}
		malicious = m->get<bool>();
	}
	try
	{
		return ContestInstance(std::move(agents), theta, cost, std::move(targeted), malicious);
	}
	catch (domain_error const& e)
	{
		throw parse_error("$", e.what());
	}
}

inline json measures_to_json(Measures const& m)
{
	return {{"su", m.su}, {"sv", m.sv}, {"sw", m.sw}, {"v0", m.v0},
	        {"per_agent_u", m.per_agent_u}, {"per_agent_v", m.per_agent_v}};
}

/// Rates and shares are reported for the stored (sorted, normalized) agents;
/// `input_index` and `valuation_scale` map them back to the input document.
inline json result_to_json(ContestInstance const& inst, EquilibriumResult const& r, Measures const& m)
{
	std::vector<std::size_t> input_index;
	for (std::size_t i = 1; i <= inst.size(); ++i)
	{
		input_index.push_back(inst.input_index(i));
	}
	auto const rates = r.profile.rates();
	return {
		{"method", to_string(r.method)},
		{"iterations", r.iterations},
		{"degenerate", r.degenerate},
		{"rates", std::vector<double>(rates.begin(), rates.end())},
		{"shares", r.profile.shares()},
		{"participating_benign", r.participating_benign},
		{"malicious_active", r.malicious_active},
		{"foc_residuals", r.foc_residuals},
		{"input_index", input_index},
		{"valuation_scale", inst.valuation_scale()},
		{"measures", measures_to_json(m)},
	};
}

inline harness::SweepConfig sweep_config_from_json(json const& doc)
{
	if (!doc.is_object())
	{
		throw parse_error("$", "sweep config must be a JSON object");
	}
	harness::SweepConfig c;
	try
	{
		c.n = doc.value("N", c.n);
		if (auto g = doc.find("theta_grid"); g != doc.end())
		{
			c.theta_start = g->at("start").get<double>();
			c.theta_stop = g->at("stop").get<double>();
			c.theta_step = g->at("step").get<double>();
		}
		c.instances_per_theta = doc.value("instances_per_theta", c.instances_per_theta);
		c.seed = doc.value("seed", c.seed);
		auto const family = doc.value("family", std::string("linear"));
		if (family == "linear")
		{
			c.family = harness::UtilityFamily::linear;
		}
		else if (family == "log" || family == "logarithmic")
		{
			c.family = harness::UtilityFamily::logarithmic;
		}
		else
		{
			throw parse_error("$.family", "expected \"linear\" or \"log\"");
		}
		if (auto t = doc.find("targeted"); t != doc.end() && !t->is_null())
		{
			c.targeted = t->get<std::size_t>();
		}
		c.cost = doc.value("cost", c.cost);
		c.include_anchors = doc.value("include_anchors", c.include_anchors);
		c.tolerance = doc.value("tolerance", c.tolerance);
		c.threads = doc.value("threads", c.threads);
	}
	catch (json::exception const& e)
	{
		throw parse_error("$", e.what());
	}
	return c;
}

inline json sweep_config_to_json(harness::SweepConfig const& c)
{
	json j = {
		{"N", c.n},
		{"theta_grid", {{"start", c.theta_start}, {"stop", c.theta_stop}, {"step", c.theta_step}}},
		{"instances_per_theta", c.instances_per_theta},
		{"seed", c.seed},
		{"family", c.family == harness::UtilityFamily::linear ? "linear" : "log"},
		{"targeted", nullptr},
		{"cost", c.cost},
		{"include_anchors", c.include_anchors},
		{"tolerance", c.tolerance},
	};
	if (c.targeted)
	{
		j["targeted"] = *c.targeted;
	}
	return j;
}

inline json summary_to_json(harness::SweepSummary const& s)
{
	json env = json::array();
	for (auto const& e : s.r1_envelope)
	{
		env.push_back({{"theta", e.theta}, {"min_r1", e.min_r1}, {"max_r1", e.max_r1}});
	}
	return {{"records", s.records},
	        {"non_converged", s.non_converged},
	        {"hard_violations", s.hard_violations},
	        {"advisory_violations", s.advisory_violations},
	        {"violations", s.violations},
	        {"r1_envelope", env}};
}

} // namespace tullock::io

#endif // TULLOCK_IO_HPP
