#include <tullock/io.hpp>
#include <tullock/tullock.hpp>

#include <gtest/gtest.h>

using namespace tullock;
using json = nlohmann::json;

TEST(InstanceJson, ParsesLinearAndLog)
{
	auto const inst = io::instance_from_json(json::parse(R"({
		"theta": 0.5, "cost": 2,
		"agents": [{"type": "log", "a": 0.5, "b": 2}, {"type": "log", "a": 1, "b": 1}],
		"targeted": [false, true], "malicious": true})"));
	EXPECT_EQ(inst.size(), 2u);
	EXPECT_EQ(inst.theta(), 0.5);
	EXPECT_EQ(inst.cost(), 2.0);
	EXPECT_FALSE(inst.all_linear());
	// Both have U'(0) = 1; stable order keeps the input order.
	EXPECT_FALSE(inst.targeted(1));
	EXPECT_TRUE(inst.targeted(2));
}

TEST(InstanceJson, DefaultsCostAndTargeting)
{
	auto const inst = io::instance_from_json(json::parse(R"({"theta": 1, "agents": [{"type": "linear", "v": 2}]})"));
	EXPECT_EQ(inst.cost(), 1.0);
	EXPECT_TRUE(inst.targeted(1));
	EXPECT_TRUE(inst.malicious_enabled());
}

TEST(InstanceJson, ErrorsNameTheField)
{
	auto message = [](char const* text) {
		try
		{
			io::instance_from_json(json::parse(text));
		}
		catch (io::parse_error const& e)
		{
			return e.path();
		}
		return std::string("no error");
	};
	EXPECT_EQ(message(R"({"agents": []})"), "$.theta");
	EXPECT_EQ(message(R"({"theta": "x", "agents": []})"), "$.theta");
	EXPECT_EQ(message(R"({"theta": 1})"), "$.agents");
	EXPECT_EQ(message(R"({"theta": 1, "agents": [{"type": "linear", "v": 1}, {"type": "cubic"}]})"), "$.agents[1].type");
	EXPECT_EQ(message(R"({"theta": 1, "agents": [{"type": "log", "a": 1}]})"), "$.agents[0].b");
	EXPECT_EQ(message(R"({"theta": 1, "agents": [{"type": "linear", "v": -1}]})"), "$.agents[0]");
	EXPECT_EQ(message(R"({"theta": 1, "agents": [{"type": "linear", "v": 1}], "targeted": [true, false]})"), "$.targeted");
	EXPECT_EQ(message(R"([1, 2])"), "$");
}

TEST(ResultJson, RoundTripReproducesMeasures)
{
	auto const inst = io::instance_from_json(json::parse(R"({
		"theta": 0.7, "agents": [{"type": "linear", "v": 0.4}, {"type": "linear", "v": 0.9}, {"type": "linear", "v": 0.7}]})"));
	auto const r = solve_linear_ne(inst);
	auto const m = compute_measures(inst, r.profile);
	auto const doc = json::parse(io::result_to_json(inst, r, m).dump());
	auto const again = compute_measures(inst, StrategyProfile(doc["rates"].get<std::vector<double>>()));
	EXPECT_EQ(again.su, doc["measures"]["su"].get<double>());
	EXPECT_EQ(again.sv, doc["measures"]["sv"].get<double>());
	EXPECT_EQ(again.sw, doc["measures"]["sw"].get<double>());
	EXPECT_EQ(again.v0, doc["measures"]["v0"].get<double>());
	EXPECT_EQ(doc["input_index"], json({1, 2, 0}));
	EXPECT_DOUBLE_EQ(doc["valuation_scale"].get<double>(), 0.9);
	EXPECT_EQ(doc["method"], "closed_form");
}

TEST(SweepJson, RoundTrip)
{
	auto const c = io::sweep_config_from_json(json::parse(R"({
		"N": 7, "theta_grid": {"start": 0.5, "stop": 2, "step": 0.5}, "instances_per_theta": 10,
		"seed": 3, "family": "log", "targeted": 4, "cost": 2})"));
	EXPECT_EQ(c.n, 7u);
	EXPECT_EQ(c.theta_grid().size(), 4u);
	EXPECT_EQ(c.family, harness::UtilityFamily::logarithmic);
	EXPECT_EQ(c.targeted.value(), 4u);
	auto const back = io::sweep_config_from_json(io::sweep_config_to_json(c));
	EXPECT_EQ(io::sweep_config_to_json(back), io::sweep_config_to_json(c));
	EXPECT_THROW(io::sweep_config_from_json(json::parse(R"({"family": "quadratic"})")), io::parse_error);
}
