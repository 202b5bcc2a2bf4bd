#include <tullock/tullock.hpp>

#include <gtest/gtest.h>

using namespace tullock;

namespace {

ContestInstance linear(std::vector<double> v, double theta, double cost = 1.0)
{
	std::vector<UtilitySpec> a;
	for (double x : v)
	{
		a.push_back(make_linear(x));
	}
	return ContestInstance(a, theta, cost);
}

} // namespace

TEST(Instance, SortsAndNormalizesLinear)
{
	auto const inst = linear({0.2, 0.8, 0.4}, 1.0);
	ASSERT_EQ(inst.size(), 3u);
	auto const v = inst.valuations();
	EXPECT_DOUBLE_EQ(v[0], 1.0);
	EXPECT_DOUBLE_EQ(v[1], 0.5);
	EXPECT_DOUBLE_EQ(v[2], 0.25);
	EXPECT_DOUBLE_EQ(inst.valuation_scale(), 0.8);
	EXPECT_EQ(inst.input_index(1), 1u);
	EXPECT_EQ(inst.input_index(2), 2u);
	EXPECT_EQ(inst.input_index(3), 0u);
}

TEST(Instance, DropsAgentsWithoutInterest)
{
	auto const inst = linear({0.0, 0.5}, 1.0);
	EXPECT_EQ(inst.size(), 1u);
	EXPECT_THROW(linear({0.0, 0.0}, 1.0), usage_error);
}

TEST(Instance, RejectsBadParameters)
{
	EXPECT_THROW(linear({1.0}, -0.1), domain_error);
	EXPECT_THROW(linear({1.0}, 1.0, 0.0), domain_error);
	EXPECT_THROW(ContestInstance({make_linear(1.0)}, 1.0, 1.0, {true, false}), structural_error);
}

TEST(Instance, MaliciousEnabledNeedsPositiveTheta)
{
	EXPECT_FALSE(linear({1.0, 0.5}, 0.0).malicious_enabled());
	EXPECT_TRUE(linear({1.0, 0.5}, 0.1).malicious_enabled());
	EXPECT_FALSE(linear({1.0, 0.5}, 0.1).without_malicious().malicious_enabled());
}

TEST(Measures, SingleAgentEquilibrium)
{
	auto const inst = linear({1.0}, 1.0);
	auto const m = compute_measures(inst, StrategyProfile({0.25, 0.25}));
	EXPECT_NEAR(m.su, 0.5, 1e-15);
	EXPECT_NEAR(m.sv, 0.25, 1e-15);
	EXPECT_NEAR(m.sw, 0.5, 1e-15);
	EXPECT_NEAR(m.v0, -0.75, 1e-15);
}

TEST(Measures, HomogeneousPair)
{
	auto const inst = linear({1.0, 1.0}, 1.0);
	auto const m = compute_measures(inst, StrategyProfile({2.0 / 9, 2.0 / 9, 2.0 / 9}));
	EXPECT_NEAR(m.su, 2.0 / 3, 1e-15);
	EXPECT_NEAR(m.sw, 2.0 / 3, 1e-15);
	EXPECT_NEAR(m.sv, 2.0 / 9, 1e-15);
}

TEST(Measures, DegenerateProfile)
{
	auto const inst = linear({1.0, 0.5}, 0.0);
	auto const m = compute_measures(inst, StrategyProfile::degenerate(2, 1));
	EXPECT_EQ(m.sw, 0.0);
	EXPECT_EQ(m.su, 1.0);
}

TEST(Measures, Identities)
{
	auto const inst = linear({1.0, 0.7, 0.3}, 0.8, 1.5);
	StrategyProfile p({0.1, 0.2, 0.05, 0.01});
	auto const m = compute_measures(inst, p);
	EXPECT_NEAR(m.sw, 1.5 * 0.36, 1e-15);
	double su = 0.0;
	for (double u : m.per_agent_u)
	{
		su += u;
	}
	EXPECT_NEAR(m.su, su, 1e-15);
	EXPECT_NEAR(m.sv, m.su - 1.5 * 0.26, 1e-15);
	EXPECT_NEAR(m.v0, -0.8 * m.su - 1.5 * 0.1, 1e-15);
}

TEST(Measures, MaliciousPayoffCountsTargetedOnly)
{
	ContestInstance inst({make_linear(1.0), make_linear(1.0)}, 2.0, 1.0, {true, false});
	StrategyProfile p({0.2, 0.2, 0.2});
	auto const m = compute_measures(inst, p);
	EXPECT_NEAR(m.v0, -2.0 * (1.0 / 3) - 0.2, 1e-15);
}

TEST(Measures, SizeMismatchThrows)
{
	auto const inst = linear({1.0, 0.5}, 1.0);
	EXPECT_THROW(compute_measures(inst, StrategyProfile({0.1, 0.1})), structural_error);
}

TEST(Profile, RejectsNegativeRates)
{
	EXPECT_THROW(StrategyProfile({0.1, -0.2}), domain_error);
}
