#include <tullock/tullock.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace tullock;

namespace {

ContestInstance linear(std::vector<double> v, double theta, double cost = 1.0, std::vector<bool> targeted = {})
{
	std::vector<UtilitySpec> a;
	for (double x : v)
	{
		a.push_back(make_linear(x));
	}
	return ContestInstance(a, theta, cost, targeted);
}

long double payoff(ContestInstance const& inst, std::vector<double> x, std::size_t i, long double xi)
{
	long double z = xi;
	for (std::size_t j = 0; j < x.size(); ++j)
	{
		if (j != i)
		{
			z += x[j];
		}
	}
	auto const v = inst.valuations();
	if (i > 0)
	{
		return v[i - 1] * xi / z - inst.cost() * xi;
	}
	long double harm = 0;
	for (std::size_t j = 1; j < x.size(); ++j)
	{
		if (inst.targeted(j))
		{
			harm += v[j - 1] * x[j] / z;
		}
	}
	return -inst.theta() * harm - inst.cost() * xi;
}

} // namespace

TEST(Threshold, Values)
{
	std::vector<double> ones(4, 1.0);
	EXPECT_NEAR(participation_threshold(ones), 0.75, 1e-15);
	std::vector<double> one{1.0};
	EXPECT_EQ(participation_threshold(one), 0.0);
	// sum v = 1.5, sum 1/v = 3: 1 / (4.5 - 2)
	std::vector<double> v{1.0, 0.5};
	EXPECT_NEAR(participation_threshold(v), 0.4, 1e-15);
	std::vector<double> bad{1.0, 0.0};
	EXPECT_THROW(participation_threshold(bad), domain_error);
}

TEST(ClosedForm, SingleAgent)
{
	for (double theta : {0.3, 1.0, 2.5})
	{
		auto const r = solve_linear_ne(linear({1.0}, theta));
		double const q = (1 + theta) * (1 + theta);
		EXPECT_NEAR(r.profile.rate(1), theta / q, 1e-15);
		EXPECT_NEAR(r.profile.rate(0), theta * theta / q, 1e-15);
	}
}

TEST(Threshold, MaliciousMarginalAtZeroCrossesOne)
{
	// Without the malicious agent v = (1, 0.5) gives x = (2/9, 1/9), z = 1/3, and
	// the malicious marginal payoff at zero is theta * sum v x / z^2 - 1 = 2.5 theta - 1.
	for (double theta : {0.39, 0.41})
	{
		auto const r = solve_linear_ne(linear({1.0, 0.5}, theta));
		EXPECT_EQ(r.malicious_active, theta > 0.4);
	}
}

TEST(ClosedForm, BelowThresholdMaliciousStaysOut)
{
	auto const r = solve_linear_ne(linear({1.0, 0.5}, 0.1));
	EXPECT_EQ(r.profile.rate(0), 0.0);
	EXPECT_NEAR(r.profile.rate(1), 2.0 / 9, 1e-15);
	EXPECT_NEAR(r.profile.rate(2), 1.0 / 9, 1e-15);
	double const z = r.profile.total();
	EXPECT_NEAR(z, 1.0 / 3, 1e-15);
	EXPECT_NEAR(1.0 * (z - r.profile.rate(1)) / (z * z), 1.0, 1e-14);
	EXPECT_FALSE(r.malicious_active);
}

TEST(ClosedForm, HomogeneousAboveThreshold)
{
	for (std::size_t n : {2u, 5u, 9u})
	{
		double const nn = static_cast<double>(n);
		double const theta = (nn - 1) / nn + 0.4;
		auto const r = solve_linear_ne(linear(std::vector<double>(n, 1.0), theta));
		for (std::size_t i = 1; i <= n; ++i)
		{
			EXPECT_NEAR(r.profile.rate(i), nn * theta / std::pow(1 + nn * theta, 2), 1e-14);
		}
	}
}

TEST(ClosedForm, ZeroThetaEqualsNoMalicious)
{
	auto const a = solve_linear_ne(linear({1.0, 0.6, 0.3}, 0.0));
	auto const b = solve_linear_ne(linear({1.0, 0.6, 0.3}, 0.7).without_malicious());
	for (std::size_t i = 0; i < 4; ++i)
	{
		EXPECT_EQ(a.profile.rate(i), b.profile.rate(i));
	}
}

TEST(ClosedForm, SingleAgentWithoutMaliciousIsDegenerate)
{
	auto const r = solve_linear_ne(linear({1.0}, 0.0));
	EXPECT_TRUE(r.degenerate);
	EXPECT_TRUE(r.profile.is_degenerate());
	auto const m = compute_measures(linear({1.0}, 0.0), r.profile);
	EXPECT_EQ(m.su, 1.0);
	EXPECT_EQ(m.sw, 0.0);
}

TEST(ClosedForm, RejectsNonLinear)
{
	ContestInstance inst({make_logarithmic(1.0, 1.0)}, 1.0);
	EXPECT_THROW(solve_linear_ne(inst), usage_error);
}

TEST(ClosedForm, MatchesEnumeratedEquilibrium)
{
	std::mt19937_64 rng(11);
	std::uniform_real_distribution<double> u(0.02, 1.0);
	std::uniform_int_distribution<int> count(1, 7);
	int checked = 0;
	for (int k = 0; k < 400; ++k)
	{
		std::size_t const n = static_cast<std::size_t>(count(rng));
		std::vector<double> v(n);
		std::vector<bool> t(n);
		for (std::size_t i = 0; i < n; ++i)
		{
			v[i] = u(rng);
			t[i] = (rng() & 3) != 0;
		}
		v[0] = 1.0;
		std::sort(v.begin(), v.end(), std::greater<>());
		double const theta = 3.0 * u(rng);
		auto const want = oracle::enumerate_linear_ne(v, theta, t);
		if (!want)
		{
			continue;  // n = 1 without a malicious agent or an exact tie
		}
		++checked;
		auto const got = solve_linear_ne(linear(v, theta, 1.0, t));
		for (std::size_t i = 0; i <= n; ++i)
		{
			EXPECT_NEAR(got.profile.rate(i), static_cast<double>((*want)[i]), 1e-12) << "instance " << k << " agent " << i;
		}
	}
	EXPECT_GT(checked, 300);
}

TEST(ClosedForm, NoProfitableUnilateralDeviation)
{
	std::mt19937_64 rng(12);
	std::uniform_real_distribution<double> u(0.0, 1.0);
	for (int k = 0; k < 100; ++k)
	{
		std::vector<double> v{1.0, u(rng), u(rng), u(rng)};
		auto const inst = linear(v, 3.0 * u(rng));
		auto const r = solve_linear_ne(inst);
		std::vector<double> x(r.profile.rates().begin(), r.profile.rates().end());
		double const z = r.profile.total();
		for (std::size_t i = 0; i < x.size(); ++i)
		{
			if (i == 0 && !inst.malicious_enabled())
			{
				continue;
			}
			auto f = [&](long double xi) { return payoff(inst, x, i, xi); };
			long double const best = f(oracle::golden_argmax(f, 0.0L, 4.0L * z));
			EXPECT_LE(static_cast<double>(best - f(x[i])), 1e-12);
		}
	}
}

TEST(ClosedForm, CostScalesRates)
{
	auto const base = solve_linear_ne(linear({1.0, 0.4, 0.3}, 1.2));
	auto const half = solve_linear_ne(linear({1.0, 0.4, 0.3}, 1.2, 2.0));
	for (std::size_t i = 0; i < 4; ++i)
	{
		EXPECT_NEAR(half.profile.rate(i), base.profile.rate(i) / 2.0, 1e-16);
	}
}

TEST(ClosedForm, ResidualsVanish)
{
	auto const inst = linear({1.0, 0.9, 0.2}, 0.6);
	auto const r = solve_linear_ne(inst);
	EXPECT_LT(kkt_violation(r.profile, r.foc_residuals), 1e-12);
	ASSERT_EQ(r.foc_residuals.size(), 4u);
	EXPECT_LT(r.foc_residuals[3], 0.0);  // v = 0.2 sits out
}

TEST(Targeted, PairWithOneTarget)
{
	auto const r = solve_linear_ne(linear({1.0, 1.0}, 2.0, 1.0, {true, false}));
	EXPECT_NEAR(r.profile.rate(0), 2.0 / 9, 1e-15);
	EXPECT_NEAR(r.profile.rate(1), 2.0 / 9, 1e-15);
	EXPECT_NEAR(r.profile.rate(2), 2.0 / 9, 1e-15);
}

TEST(Targeted, AllTargetedMatchesUntargeted)
{
	std::mt19937_64 rng(13);
	std::uniform_real_distribution<double> u(0.0, 1.0);
	for (int k = 0; k < 100; ++k)
	{
		auto const inst = linear({1.0, u(rng), u(rng), u(rng), u(rng)}, 3.0 * u(rng));
		auto const a = solve_linear_ne(inst);
		auto const b = solve_linear_ne_targeted(inst, std::vector<bool>(5, true));
		for (std::size_t i = 0; i < 6; ++i)
		{
			EXPECT_EQ(a.profile.rate(i), b.profile.rate(i));
		}
	}
}

TEST(Targeted, TwentyAgentsTenTargeted)
{
	std::vector<bool> t(20, false);
	std::fill(t.begin(), t.begin() + 10, true);
	auto const inst = linear(std::vector<double>(20, 1.0), 2.0, 1.0, t);
	auto const r = solve_linear_ne(inst);
	EXPECT_NEAR(r.profile.rate(0), 20.0 / 441, 1e-15);
	for (std::size_t i = 1; i <= 20; ++i)
	{
		EXPECT_NEAR(r.profile.rate(i), 20.0 / 441, 1e-15);
	}
	auto const m = compute_measures(inst, r.profile);
	EXPECT_NEAR(m.su, 20.0 / 21, 1e-14);
	EXPECT_NEAR(m.sw, 20.0 / 21, 1e-14);
	EXPECT_NEAR(m.v0, -440.0 / 441, 1e-14);
}

TEST(Homogeneous, FormulasMatchSolver)
{
	for (std::size_t m = 1; m <= 20; ++m)
	{
		if (static_cast<double>(m) * 2.0 <= 19.0)
		{
			EXPECT_THROW(homogeneous_rates(20, m, 2.0), domain_error);
			continue;
		}
		std::vector<bool> t(20, false);
		std::fill(t.begin(), t.begin() + static_cast<long>(m), true);
		auto const inst = linear(std::vector<double>(20, 1.0), 2.0, 1.0, t);
		auto const r = solve_linear_ne(inst);
		auto const h = homogeneous_rates(20, m, 2.0);
		EXPECT_NEAR(r.profile.rate(1), h.benign, 1e-14);
		EXPECT_NEAR(r.profile.rate(0), h.malicious, 1e-14);
		auto const got = compute_measures(inst, r.profile);
		auto const want = homogeneous_measures(20, m, 2.0);
		EXPECT_NEAR(got.su, want.su, 1e-13);
		EXPECT_NEAR(got.sv, want.sv, 1e-13);
		EXPECT_NEAR(got.sw, want.sw, 1e-13);
		EXPECT_NEAR(got.v0, want.v0, 1e-13);
	}
}

TEST(Homogeneous, PairFullyTargeted)
{
	auto const m = homogeneous_measures(2, 2, 1.0);
	EXPECT_NEAR(m.su, 2.0 / 3, 1e-15);
	EXPECT_NEAR(m.sv, 2.0 / 9, 1e-15);
	EXPECT_NEAR(m.sw, 2.0 / 3, 1e-15);
	EXPECT_NEAR(homogeneous_measures(20, 10, 2.0).v0, -440.0 / 441, 1e-15);
	EXPECT_LT(homogeneous_measures(20, 20, 1e6).su, 1e-5);
}
