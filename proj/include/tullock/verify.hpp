#ifndef TULLOCK_VERIFY_HPP
#define TULLOCK_VERIFY_HPP

#include <tullock/tullock.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

// End-to-end checks of the solvers against the analytic results. Each check
// returns a pass/fail verdict with a one-line detail; `run_all` drives them.

namespace tullock::verify {

struct CriterionResult
{
	int id = 0;
	std::string title;
	bool passed = false;
	std::string detail;
};

// Deviation oracle ------------------------------------------------------------

/// Payoff of agent `i` (0 = malicious) when it plays `xi` against `rates`.
inline double payoff(ContestInstance const& inst, std::span<double const> rates, std::size_t i, double xi)
{
	double z = xi;
	for (std::size_t j = 0; j < rates.size(); ++j)
	{
		if (j != i)
		{
			z += rates[j];
		}
	}
	double const c = inst.cost();
	if (i > 0)
	{
		double const d = z > 0.0 ? xi / z : 1.0;
		return evaluate_utility(inst.agent(i), d) - c * xi;
	}
	double harm = 0.0;
	for (std::size_t j = 1; j < rates.size(); ++j)
	{
		if (inst.targeted(j))
		{
			harm += evaluate_utility(inst.agent(j), z > 0.0 ? rates[j] / z : 0.0);
		}
	}
	return -inst.theta() * harm - c * xi;
}

/// Largest payoff gain any single agent gets by moving to one of `points`
/// evenly spaced rates on [0, span * z].
inline double max_deviation_gain(ContestInstance const& inst, StrategyProfile const& profile,
                                 std::size_t points = 10000, double span = 4.0)
{
	auto const x = profile.rates();
	double const z = profile.total();
	double worst = 0.0;
	for (std::size_t i = 0; i < x.size(); ++i)
	{
		if (i == 0 && !inst.malicious_enabled())
		{
			continue;
		}
		double const base = payoff(inst, x, i, x[i]);
		for (std::size_t k = 0; k < points; ++k)
		{
			double const xi = span * z * static_cast<double>(k) / static_cast<double>(points - 1);
			worst = std::max(worst, payoff(inst, x, i, xi) - base);
		}
	}
	return worst;
}

namespace detail {

inline std::string fmt(double v)
{
	std::ostringstream os;
	os.precision(6);
	os << v;
	return os.str();
}

inline ContestInstance random_linear(std::size_t n, std::uint64_t seed, std::uint64_t stream)
{
	auto const s = harness::cell_seed(seed, stream, 0);
	std::mt19937_64 rng(s);
	double const theta = 3.0 * (1.0 - harness::uniform_open_closed(rng));
	return harness::generate_linear_instance(n, harness::splitmix64(s), theta);
}

} // namespace detail

// Criteria --------------------------------------------------------------------

inline CriterionResult closed_form_validity(std::size_t instances = 1000, std::uint64_t seed = 101)
{
	double worst_foc = 0.0;
	double worst_gain = 0.0;
	for (std::size_t k = 0; k < instances; ++k)
	{
		auto const inst = detail::random_linear(5, seed, k);
		auto const eq = solve_linear_ne(inst);
		worst_foc = std::max(worst_foc, kkt_violation(eq.profile, eq.foc_residuals));
		worst_gain = std::max(worst_gain, max_deviation_gain(inst, eq.profile));
	}
	bool const ok = worst_foc < 1e-10 && worst_gain < 1e-6;
	return {1, "closed-form equilibrium validity", ok,
	        std::to_string(instances) + " instances, max KKT residual " + detail::fmt(worst_foc)
	            + " (< 1e-10), max deviation gain " + detail::fmt(worst_gain) + " (< 1e-6)"};
}

inline CriterionResult cross_solver_agreement(std::size_t instances = 500, std::uint64_t seed = 202)
{
	double worst = 0.0;
	std::size_t failures = 0;
	for (std::size_t k = 0; k < instances; ++k)
	{
		auto const inst = detail::random_linear(5, seed, k);
		auto const exact = solve_linear_ne(inst);
		try
		{
			auto const it = solve_general_ne(inst);
			for (std::size_t i = 0; i < exact.profile.size(); ++i)
			{
				worst = std::max(worst, std::abs(it.profile.rate(i) - exact.profile.rate(i)));
			}
		}
		catch (non_convergence_error const&)
		{
			++failures;
		}
	}
	bool const ok = failures == 0 && worst <= 1e-6;
	return {2, "iterative vs closed-form agreement", ok,
	        std::to_string(instances) + " instances, max |dx| " + detail::fmt(worst) + " (<= 1e-6), "
	            + std::to_string(failures) + " non-converged"};
}

inline harness::SweepConfig linear_envelope_config()
{
	harness::SweepConfig c;
	c.n = 5;
	c.theta_start = 0.0;
	c.theta_stop = 3.0;
	c.theta_step = 0.05;
	c.instances_per_theta = 1000;
	c.seed = 303;
	return c;
}

inline CriterionResult bound_envelope(harness::SweepResult const& sweep)
{
	auto const& s = sweep.summary;
	std::string detail = std::to_string(s.records) + " records, " + std::to_string(s.hard_violations)
	                     + " violations of proven bounds, " + std::to_string(s.non_converged) + " non-converged, "
	                     + std::to_string(s.advisory_violations) + " advisory (approximate b2 upper bound, logged only)";
	for (auto const& [name, count] : s.violations)
	{
		if (!harness::is_advisory(name))
		{
			detail += "; " + name + "=" + std::to_string(count);
		}
	}
	return {3, "bound envelope, linear N=5", s.hard_violations == 0 && s.non_converged == 0, detail};
}

inline CriterionResult regime_features(harness::SweepResult const& sweep)
{
	auto const& env = sweep.summary.r1_envelope;
	double flat_lo = 1e300;
	double flat_hi = -1e300;
	bool decreasing = true;
	bool max_one = true;
	bool max_below = true;
	double prev = 1e300;
	for (auto const& e : env)
	{
		if (e.theta <= 0.28 + 1e-12)
		{
			flat_lo = std::min(flat_lo, e.min_r1);
			flat_hi = std::max(flat_hi, e.min_r1);
		}
		if (e.theta >= 0.30 - 1e-12)
		{
			decreasing = decreasing && e.min_r1 < prev;
			prev = e.min_r1;
		}
		if (e.theta < 0.8 - 1e-12)
		{
			max_one = max_one && std::abs(e.max_r1 - 1.0) <= 1e-9;
		}
		if (e.theta > 0.81)
		{
			max_below = max_below && e.max_r1 < 1.0 - 1e-9;
		}
	}
	bool const flat = flat_hi - flat_lo <= 2e-3;
	bool const ok = flat && decreasing && max_one && max_below;
	return {4, "b1 regime switch points at N=5", ok,
	        "min b1 spread on theta<=0.28: " + detail::fmt(flat_hi - flat_lo) + " (<= 2e-3), strictly decreasing for theta>=0.30: "
	            + (decreasing ? "yes" : "no") + ", max b1 == 1 for theta<0.8: " + (max_one ? "yes" : "no")
	            + ", max b1 < 1 for theta>0.81: " + (max_below ? "yes" : "no")};
}

inline CriterionResult tightness()
{
	using harness::WorstCase;
	std::vector<std::string> notes;
	bool ok = true;
	auto measure = [](ContestInstance const& inst) {
		auto const mal = solve_linear_ne(inst);
		auto const m = compute_measures(inst, mal.profile);
		auto const opt = social_optimum_utility(inst);
		return std::pair{m.su / opt.su_max, m.sv / opt.sv_max};
	};
	auto check = [&](std::string const& name, double got, double want, double tol) {
		bool const good = std::abs(got - want) <= tol;
		ok = ok && good;
		if (!good)
		{
			notes.push_back(name + " got " + detail::fmt(got) + " want " + detail::fmt(want));
		}
	};
	for (std::size_t n : {2u, 3u, 5u, 10u, 50u})
	{
		double const small = 0.5 * std::min(bounds::su_lower_crossover(n), 0.2);
		auto const a = harness::worst_case_instance(WorstCase::su_max_branch, n, small);
		check("su_max_branch N=" + std::to_string(n), measure(a).first, bounds::lb_su_mal_over_max(n, small), 1e-6);
		double const big = bounds::su_lower_crossover(n) + 0.5;
		auto const b = harness::worst_case_instance(WorstCase::su_theta_branch, n, big);
		check("su_theta_branch N=" + std::to_string(n), measure(b).first, bounds::lb_su_mal_over_max(n, big), 1e-6);
		auto const c = harness::worst_case_instance(WorstCase::sv_nomal, n, 0.05);
		check("sv_nomal N=" + std::to_string(n), measure(c).second, bounds::lb_sv_mal_over_max(n, 0.05), 1e-6);
	}
	check("su_max_branch N=5 theta=0.1", measure(harness::worst_case_instance(WorstCase::su_max_branch, 5, 0.1)).first,
	      16.0 * std::sqrt(5.0) - 35.0, 1e-6);
	check("su_theta_branch N=5 theta=1", measure(harness::worst_case_instance(WorstCase::su_theta_branch, 5, 1.0)).first,
	      0.5, 1e-6);
	double const asym = measure(harness::worst_case_instance(WorstCase::su_max_branch, 10000, 0.05)).first;
	check("asymptotic N=1e4", asym, 0.75, 1e-4);
	std::string detail = "constructions for N in {2,3,5,10,50} hit their bounds within 1e-6; N=1e4 b1 = " + detail::fmt(asym);
	for (auto const& s : notes)
	{
		detail += "; " + s;
	}
	return {5, "tightness constructions", ok, detail};
}

inline CriterionResult imperfect_targeting()
{
	std::size_t const n = 20;
	double const theta = 2.0;
	auto const rows = harness::targeting_table(n, theta);
	double worst = 0.0;
	bool inactive_ok = true;
	bool sw_strict = true;
	bool sv_strict = true;
	bool sw_monotone = true;
	bool sv_monotone = true;
	std::size_t formula_rows = 0;
	for (std::size_t k = 0; k < rows.size(); ++k)
	{
		auto const& r = rows[k];
		if (r.formula_rates)
		{
			++formula_rows;
			auto const& f = *r.formula_measures;
			for (double d : {r.x_benign - r.formula_rates->benign, r.x_malicious - r.formula_rates->malicious,
			                 r.measures.su - f.su, r.measures.sv - f.sv, r.measures.sw - f.sw, r.measures.v0 - f.v0})
			{
				worst = std::max(worst, std::abs(d));
			}
		}
		else
		{
			inactive_ok = inactive_ok && r.x_malicious == 0.0;
		}
		if (k > 0)
		{
			auto const& p = rows[k - 1];
			sw_monotone = sw_monotone && r.measures.sw >= p.measures.sw;
			sv_monotone = sv_monotone && r.measures.sv <= p.measures.sv;
			if (r.formula_rates)
			{
				sw_strict = sw_strict && r.measures.sw > p.measures.sw;
				sv_strict = sv_strict && r.measures.sv < p.measures.sv;
			}
		}
	}
	bool const ok = worst <= 1e-10 && inactive_ok && sw_strict && sv_strict && sw_monotone && sv_monotone
	                && formula_rows > 0;
	return {6, "imperfect targeting, N=20, theta=2", ok,
	        std::to_string(formula_rows) + " of 20 values of M have the malicious agent active; max formula error "
	            + detail::fmt(worst) + " (<= 1e-10); x0 = 0 below threshold: " + (inactive_ok ? "yes" : "no")
	            + "; SW strictly up / SV strictly down while active: " + (sw_strict && sv_strict ? "yes" : "no")
	            + "; monotone over all M: " + (sw_monotone && sv_monotone ? "yes" : "no")};
}

inline harness::SweepConfig log_envelope_config()
{
	harness::SweepConfig c;
	c.n = 5;
	c.theta_start = 0.0;
	c.theta_stop = 3.0;
	c.theta_step = 0.1;
	c.instances_per_theta = 1000;
	c.seed = 707;
	c.family = harness::UtilityFamily::logarithmic;
	return c;
}

inline CriterionResult log_dominance(harness::SweepResult const& sweep)
{
	auto const& s = sweep.summary;
	std::size_t bad = 0;
	for (char const* name : {"lb1", "lb2", "lb3", "lb4", "opt_su", "opt_sv"})
	{
		if (auto it = s.violations.find(name); it != s.violations.end())
		{
			bad += it->second;
		}
	}
	return {7, "logarithmic utilities above the linear lower bounds", bad == 0 && s.non_converged == 0,
	        std::to_string(s.records) + " records, " + std::to_string(bad) + " violations of b1..b4 lower bounds, "
	            + std::to_string(s.non_converged) + " non-converged"};
}

inline CriterionResult cost_scaling(std::size_t instances = 100, std::uint64_t seed = 808)
{
	double worst_rel = 0.0;
	double worst_sw = 0.0;
	for (std::size_t k = 0; k < instances; ++k)
	{
		auto const inst = detail::random_linear(5, seed, k);
		auto const base = solve_linear_ne(inst);
		double const sw1 = compute_measures(inst, base.profile).sw;
		for (double c : {0.5, 1.0, 2.0})
		{
			auto const scaled = inst.with_cost(c);
			auto const eq = solve_linear_ne(scaled);
			for (std::size_t i = 0; i < eq.profile.size(); ++i)
			{
				double const want = base.profile.rate(i) / c;
				if (want > 0.0)
				{
					worst_rel = std::max(worst_rel, std::abs(eq.profile.rate(i) - want) / want);
				}
				else
				{
					worst_rel = std::max(worst_rel, eq.profile.rate(i));
				}
			}
			worst_sw = std::max(worst_sw, std::abs(compute_measures(scaled, eq.profile).sw - sw1));
		}
	}
	bool const ok = worst_rel <= 1e-10 && worst_sw <= 1e-10;
	return {8, "cost scaling of rates and revenue", ok,
	        "max relative rate error " + detail::fmt(worst_rel) + " (<= 1e-10), max revenue change " + detail::fmt(worst_sw)
	            + " (<= 1e-10)"};
}

inline CriterionResult piecewise_identities()
{
	double worst_ub1 = 0.0;
	double worst_ub3 = 0.0;
	for (std::size_t k = 0; k <= 3000; ++k)
	{
		double const theta = static_cast<double>(k) * 1e-3;
		for (std::size_t n = 1; n <= 10; ++n)
		{
			double const nn = static_cast<double>(n);
			double const min_form = std::min(1.0, nn / (1.0 + nn * theta));
			worst_ub1 = std::max(worst_ub1, std::abs(bounds::ub_su_mal_over_max(n, theta) - min_form));
		}
		double cand = 0.0;
		for (std::size_t n = 1; n <= 10; ++n)
		{
			double const nn = static_cast<double>(n);
			double const thr = (nn - 1.0) / nn;
			if (theta <= thr)
			{
				cand = std::max(cand, 1.0 / nn);
			}
			if (theta >= thr)
			{
				cand = std::max(cand, nn / ((1.0 + nn * theta) * (1.0 + nn * theta)));
			}
		}
		worst_ub3 = std::max(worst_ub3, std::abs(bounds::ub_sv_mal_over_max(theta) - cand));
	}
	double worst_f = 0.0;
	for (std::size_t n = 1; n <= 50; ++n)
	{
		for (std::size_t t = 1; t <= 30; ++t)
		{
			double const theta = 0.1 * static_cast<double>(t);
			worst_f = std::max(worst_f, std::abs(bounds::vtilde_polynomial(n, theta, bounds::solve_vtilde(n, theta))));
		}
	}
	bool const ok = worst_ub1 <= 1e-12 && worst_ub3 <= 1e-12 && worst_f < 1e-12;
	return {9, "piecewise bounds vs candidate oracles", ok,
	        "b1 upper " + detail::fmt(worst_ub1) + ", b3 upper " + detail::fmt(worst_ub3) + " (<= 1e-12); cubic residual "
	            + detail::fmt(worst_f) + " (< 1e-12)"};
}

inline CriterionResult uniqueness(std::size_t instances = 50, std::size_t starts = 20, std::uint64_t seed = 1010)
{
	double worst = 0.0;
	std::size_t failures = 0;
	for (std::size_t k = 0; k < instances; ++k)
	{
		auto const inst = harness::generate_log_instance(5, harness::cell_seed(seed, k, 0), 1.0);
		std::mt19937_64 rng(harness::cell_seed(seed, k, 1));
		std::vector<std::vector<double>> sols;
		for (std::size_t s = 0; s < starts; ++s)
		{
			std::vector<double> x0(inst.size() + 1);
			for (double& x : x0)
			{
				x = harness::uniform_open_closed(rng);
			}
			try
			{
				auto const r = solve_general_ne(inst, {}, x0);
				auto const rates = r.profile.rates();
				sols.emplace_back(rates.begin(), rates.end());
			}
			catch (non_convergence_error const&)
			{
				++failures;
			}
		}
		for (auto const& s : sols)
		{
			for (std::size_t i = 0; i < s.size(); ++i)
			{
				worst = std::max(worst, std::abs(s[i] - sols.front()[i]));
			}
		}
	}
	bool const ok = failures == 0 && worst < 1e-7;
	return {10, "uniqueness under random starts", ok,
	        std::to_string(instances) + " log instances x " + std::to_string(starts) + " starts, max spread "
	            + detail::fmt(worst) + " (< 1e-7), " + std::to_string(failures) + " non-converged"};
}

/// Runs every criterion, calling `report` as each finishes.
inline std::vector<CriterionResult> run_all(std::function<void(CriterionResult const&)> const& report = {})
{
	std::vector<CriterionResult> out;
	auto emit = [&](CriterionResult r) {
		if (report)
		{
			report(r);
		}
		out.push_back(std::move(r));
	};
	emit(closed_form_validity());
	emit(cross_solver_agreement());
	auto const linear = harness::run_sweep(linear_envelope_config());
	emit(bound_envelope(linear));
	emit(regime_features(linear));
	emit(tightness());
	emit(imperfect_targeting());
	emit(log_dominance(harness::run_sweep(log_envelope_config())));
	emit(cost_scaling());
	emit(piecewise_identities());
	emit(uniqueness());
	return out;
}

inline std::string format_line(CriterionResult const& r)
{
	return std::string(r.passed ? "[PASS] " : "[FAIL] ") + "C" + std::to_string(r.id) + " " + r.title + ": " + r.detail;
}

} // namespace tullock::verify

#endif // TULLOCK_VERIFY_HPP
