#include <tullock/tullock.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace tullock;

namespace {

ContestInstance linear(std::vector<double> v, double theta, std::vector<bool> targeted = {})
{
	std::vector<UtilitySpec> a;
	for (double x : v)
	{
		a.push_back(make_linear(x));
	}
	return ContestInstance(a, theta, 1.0, targeted);
}

} // namespace

TEST(BestResponse, LinearInterior)
{
	EXPECT_NEAR(best_response_benign(make_linear(1.0), 0.25, 1.0), 0.25, 1e-10);
	// sqrt(v z) - z for a few more points.
	for (double zm : {0.01, 0.1, 0.6})
	{
		EXPECT_NEAR(best_response_benign(make_linear(0.9), zm, 1.0), std::sqrt(0.9 * zm) - zm, 1e-10);
	}
}

TEST(BestResponse, LinearInactive)
{
	EXPECT_EQ(best_response_benign(make_linear(0.5), 0.7, 1.0), 0.0);
}

TEST(BestResponse, LogMatchesGridMaximum)
{
	auto const spec = make_logarithmic(1.0, 1.0);
	double const zm = 0.1;
	auto payoff = [zm](double x) { return std::log1p(x / (x + zm)) - x; };
	double const grid = oracle::grid_argmax(payoff, 0.0, 2.0, 2000001);
	EXPECT_NEAR(best_response_benign(spec, zm, 1.0), grid, 1e-5);
}

TEST(BestResponse, NeedsPositiveAggregate)
{
	EXPECT_THROW(best_response_benign(make_linear(1.0), 0.0, 1.0), domain_error);
}

TEST(BestResponse, MaliciousSingleAgent)
{
	auto const inst = linear({1.0}, 1.0);
	std::vector<double> benign{0.25};
	EXPECT_NEAR(best_response_malicious(inst, benign), 0.25, 1e-10);
}

TEST(BestResponse, MaliciousInactive)
{
	auto const inst = linear({1.0, 1.0}, 0.2);
	std::vector<double> benign{0.25, 0.25};
	// theta * sum v x / z^2 = 0.2 * 0.5 / 0.25 = 0.4 <= 1
	EXPECT_EQ(best_response_malicious(inst, benign), 0.0);
}

TEST(BestResponse, MaliciousMatchesGoldenSection)
{
	std::mt19937_64 rng(21);
	std::uniform_real_distribution<double> u(0.05, 1.0);
	for (int k = 0; k < 50; ++k)
	{
		std::vector<double> v{1.0, u(rng), u(rng), u(rng)};
		std::vector<bool> t{(rng() & 1) != 0, true, (rng() & 1) != 0, (rng() & 1) != 0};
		auto const inst = linear(v, 3.0 * u(rng), t);
		std::vector<double> x{0.3 * u(rng), 0.3 * u(rng), 0.3 * u(rng), 0.3 * u(rng)};
		auto const vs = inst.valuations();
		auto payoff = [&](long double x0) {
			long double z = x0;
			for (double xi : x)
			{
				z += xi;
			}
			long double harm = 0;
			for (std::size_t i = 0; i < x.size(); ++i)
			{
				if (inst.targeted(i + 1))
				{
					harm += vs[i] * x[i] / z;
				}
			}
			return -inst.theta() * harm - x0;
		};
		double const want = static_cast<double>(oracle::golden_argmax(payoff, 0.0L, 10.0L));
		EXPECT_NEAR(best_response_malicious(inst, x), want, 1e-8);
	}
}

TEST(Iterative, AgreesWithClosedForm)
{
	std::mt19937_64 rng(22);
	std::uniform_real_distribution<double> u(0.0, 1.0);
	for (int k = 0; k < 60; ++k)
	{
		auto const inst = linear({1.0, u(rng), u(rng), u(rng), u(rng)}, 3.0 * u(rng));
		auto const a = solve_linear_ne(inst);
		auto const b = solve_general_ne(inst);
		for (std::size_t i = 0; i < 6; ++i)
		{
			EXPECT_NEAR(a.profile.rate(i), b.profile.rate(i), 1e-6);
		}
		EXPECT_EQ(b.method, SolveMethod::best_response);
	}
}

TEST(Iterative, SymmetricInstanceGivesEqualRates)
{
	ContestInstance inst(std::vector<UtilitySpec>(4, make_logarithmic(0.6, 2.0)), 0.9);
	auto const r = solve_general_ne(inst);
	for (std::size_t i = 2; i <= 4; ++i)
	{
		EXPECT_NEAR(r.profile.rate(i), r.profile.rate(1), 1e-9);
	}
}

TEST(Iterative, RandomStartsReachSameEquilibrium)
{
	auto const inst = harness::generate_log_instance(5, 99, 1.0);
	std::mt19937_64 rng(23);
	auto const ref = solve_general_ne(inst);
	for (int s = 0; s < 20; ++s)
	{
		std::vector<double> start(6);
		for (double& x : start)
		{
			x = harness::uniform_open_closed(rng);
		}
		auto const r = solve_general_ne(inst, {}, start);
		for (std::size_t i = 0; i < 6; ++i)
		{
			EXPECT_NEAR(r.profile.rate(i), ref.profile.rate(i), 1e-7);
		}
	}
}

TEST(Iterative, LogEquilibriumSatisfiesKkt)
{
	for (std::uint64_t seed = 1; seed <= 30; ++seed)
	{
		auto const inst = harness::generate_log_instance(5, seed, 0.1 * static_cast<double>(seed));
		auto const r = solve_general_ne(inst);
		EXPECT_LT(kkt_violation(r.profile, foc_values(inst, r.profile)), 1e-7);
	}
}

TEST(Iterative, SingleAgentWithoutMaliciousIsDegenerate)
{
	ContestInstance inst({make_logarithmic(1.0, 1.0)}, 0.0);
	EXPECT_TRUE(solve_general_ne(inst).degenerate);
}

TEST(Iterative, ReportsNonConvergence)
{
	auto const inst = harness::generate_log_instance(5, 5, 1.0);
	SolverConfig cfg;
	cfg.max_sweeps = 2;
	try
	{
		solve_general_ne(inst, cfg);
		FAIL() << "expected non_convergence_error";
	}
	catch (non_convergence_error const& e)
	{
		EXPECT_EQ(e.sweeps(), 2u);
		EXPECT_EQ(e.last_profile().size(), 6u);
		EXPECT_EQ(e.residuals().size(), 6u);
	}
}

TEST(Iterative, ConfigValidation)
{
	SolverConfig cfg;
	cfg.damping = 0.0;
	EXPECT_THROW(cfg.validate(), usage_error);
	cfg = {};
	cfg.rate_tolerance = -1.0;
	EXPECT_THROW(cfg.validate(), usage_error);
	cfg = {};
	cfg.bracket_growth = 1.0;
	EXPECT_THROW(cfg.validate(), usage_error);
}

TEST(Iterative, StartVectorSizeChecked)
{
	auto const inst = harness::generate_log_instance(3, 1, 1.0);
	EXPECT_THROW(solve_general_ne(inst, {}, std::vector<double>{0.1, 0.1}), structural_error);
}
