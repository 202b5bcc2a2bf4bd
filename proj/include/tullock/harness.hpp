#ifndef TULLOCK_HARNESS_HPP
#define TULLOCK_HARNESS_HPP

#include <tullock/bounds.hpp>
#include <tullock/closed_form.hpp>
#include <tullock/instance.hpp>
#include <tullock/iterative.hpp>
#include <tullock/optimum.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace tullock::harness {

// Seeding --------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x)
{
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

/// Seed of one sweep cell; independent of how cells are scheduled.
inline std::uint64_t cell_seed(std::uint64_t base, std::uint64_t theta_index, std::uint64_t instance_index)
{
	return splitmix64(splitmix64(splitmix64(base) ^ theta_index) ^ instance_index);
}

/// Uniform draw in (0,1] from the top 53 bits; unlike the standard
/// distributions this is identical across standard-library implementations.
inline double uniform_open_closed(std::mt19937_64& rng)
{
	return 1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Instance generation ---------------------------------------------------------

/// v_1 = 1 and v_2..v_N i.i.d. uniform on (0,1].
inline ContestInstance generate_linear_instance(std::size_t n, std::uint64_t seed, double theta = 0.0)
{
	if (n < 1)
	{
		throw usage_error("need at least one benign agent");
	}
	std::mt19937_64 rng(seed);
	std::vector<UtilitySpec> agents{Linear{1.0}};
	for (std::size_t i = 1; i < n; ++i)
	{
		agents.push_back(Linear{uniform_open_closed(rng)});
	}
	return ContestInstance(std::move(agents), theta);
}

/// a_i, b_i i.i.d. uniform on (0,1].
inline ContestInstance generate_log_instance(std::size_t n, std::uint64_t seed, double theta = 0.0)
{
	if (n < 1)
	{
		throw usage_error("need at least one benign agent");
	}
	std::mt19937_64 rng(seed);
	std::vector<UtilitySpec> agents;
	for (std::size_t i = 0; i < n; ++i)
	{
		double const a = uniform_open_closed(rng);
		double const b = uniform_open_closed(rng);
		agents.push_back(Logarithmic{a, b});
	}
	return ContestInstance(std::move(agents), theta);
}

// Extremal constructions ------------------------------------------------------

enum class WorstCase
{
	su_max_branch,    ///< b1 floor from benign competition
	su_theta_branch,  ///< b1 floor 1/(1+theta): all but agent 1 near zero
	sv_nomal,         ///< b3 floor from benign competition
	homogeneous,      ///< all v_i = 1; b1 upper bound holds with equality
};

inline char const* to_string(WorstCase k)
{
	switch (k)
	{
	case WorstCase::su_max_branch: return "su_max_branch";
	case WorstCase::su_theta_branch: return "su_theta_branch";
	case WorstCase::sv_nomal: return "sv_nomal";
	case WorstCase::homogeneous: return "homogeneous";
	}
	return "?";
}

inline WorstCase worst_case_from_string(std::string const& s)
{
	for (auto k : {WorstCase::su_max_branch, WorstCase::su_theta_branch, WorstCase::sv_nomal, WorstCase::homogeneous})
	{
		if (s == to_string(k))
		{
			return k;
		}
	}
	throw usage_error("unknown construction '" + s + "'");
}

inline constexpr double zero_valuation_surrogate = 1e-6;

/// Valuations of a construction, without checking the willingness regime.
inline std::vector<double> worst_case_valuations(WorstCase kind, std::size_t n, double eps = zero_valuation_surrogate)
{
	double const nn = static_cast<double>(n);
	double w = 1.0;
	switch (kind)
	{
	case WorstCase::su_max_branch: w = std::sqrt(nn * (nn - 1.0)) - (nn - 1.0); break;
	case WorstCase::su_theta_branch: w = eps; break;
	case WorstCase::sv_nomal: w = std::sqrt(nn * nn - 1.0) - (nn - 1.0); break;
	case WorstCase::homogeneous: w = 1.0; break;
	}
	std::vector<double> v(n, w);
	v.front() = 1.0;
	return v;
}

inline ContestInstance linear_instance(std::vector<double> const& v, double theta, double cost = 1.0)
{
	std::vector<UtilitySpec> agents;
	agents.reserve(v.size());
	for (double x : v)
	{
		agents.push_back(Linear{x});
	}
	return ContestInstance(std::move(agents), theta, cost);
}

/// Instance on which the corresponding bound is attained at `theta`.
inline ContestInstance worst_case_instance(WorstCase kind, std::size_t n, double theta,
                                           double eps = zero_valuation_surrogate)
{
	if (n < 2)
	{
		throw usage_error("extremal constructions need N >= 2");
	}
	if (!(theta >= 0.0))
	{
		throw domain_error("willingness factor must be >= 0");
	}
	auto const v = worst_case_valuations(kind, n, eps);
	double const crossover = bounds::su_lower_crossover(n);
	switch (kind)
	{
	case WorstCase::su_max_branch:
		if (theta > crossover || theta > participation_threshold(v))
		{
			throw regime_error("su_max_branch applies for theta <= " + std::to_string(crossover),
			                   "su_theta_branch");
		}
		break;
	case WorstCase::su_theta_branch:
		if (theta < crossover)
		{
			throw regime_error("su_theta_branch applies for theta >= " + std::to_string(crossover), "su_max_branch");
		}
		break;
	case WorstCase::sv_nomal:
		if (theta > participation_threshold(v)
		    || bounds::lb_sv_mal_over_max(n, theta) < bounds::sv_no_malicious_candidate(n))
		{
			throw regime_error("sv_nomal applies only while the benign-competition candidate is the b3 floor",
			                   "malicious candidate");
		}
		break;
	case WorstCase::homogeneous:
		break;
	}
	return linear_instance(v, theta);
}

// Sweeps ----------------------------------------------------------------------

enum class UtilityFamily
{
	linear,
	logarithmic,
};

struct SweepConfig
{
	std::size_t n = 5;
	double theta_start = 0.0;
	double theta_stop = 3.0;
	double theta_step = 0.05;
	std::size_t instances_per_theta = 1000;
	std::uint64_t seed = 1;
	UtilityFamily family = UtilityFamily::linear;
	std::optional<std::size_t> targeted;  ///< M: only agents 1..M are targeted
	double cost = 1.0;
	/// Add the extremal constructions to every theta column (linear family only).
	bool include_anchors = true;
	double tolerance = 1e-9;
	SolverConfig solver{};
	std::size_t threads = 0;  ///< 0: TULLOCK_THREADS or hardware concurrency

	void validate() const
	{
		if (n < 1)
		{
			throw usage_error("sweep needs N >= 1");
		}
		if (!(theta_step > 0.0) || !(theta_start >= 0.0) || !(theta_stop >= theta_start))
		{
			throw usage_error("theta grid needs 0 <= start <= stop and step > 0");
		}
		if (instances_per_theta < 1)
		{
			throw usage_error("instances_per_theta must be >= 1");
		}
		if (targeted && (*targeted > n))
		{
			throw usage_error("targeted count exceeds N");
		}
		if (!(cost > 0.0))
		{
			throw usage_error("cost must be positive");
		}
		solver.validate();
	}

	std::vector<double> theta_grid() const
	{
		auto const count = static_cast<std::size_t>(std::floor((theta_stop - theta_start) / theta_step + 1e-9)) + 1;
		std::vector<double> g(count);
		for (std::size_t k = 0; k < count; ++k)
		{
			g[k] = std::round((theta_start + static_cast<double>(k) * theta_step) * 1e12) / 1e12;
		}
		return g;
	}

	std::vector<WorstCase> anchors() const
	{
		if (!include_anchors || family != UtilityFamily::linear || n < 2)
		{
			return {};
		}
		return {WorstCase::homogeneous, WorstCase::su_max_branch, WorstCase::su_theta_branch, WorstCase::sv_nomal};
	}
};

inline constexpr std::array<char const*, 10> bound_names = {
	"lb1", "ub1", "lb2", "ub2_adv", "lb3", "ub3", "lb4", "lb5", "ub5", "lb6"};

struct SweepRecord
{
	double theta = 0.0;
	std::uint64_t seed = 0;
	std::string label;  ///< construction name for anchor rows, empty otherwise
	bool converged = true;
	std::size_t n_active = 0;
	bool malicious_active = false;
	double su_mal = 0, su_nom = 0, su_max = 0;
	double sv_mal = 0, sv_nom = 0, sv_max = 0;
	double sw_mal = 0, sw_nom = 0;
	std::optional<double> sw_max;
	std::array<double, 6> r{};  ///< NaN where undefined
	bounds::BoundReport bound;
	std::vector<std::string> violations;  ///< bound names; advisory names end in "_adv"
};

inline bool is_advisory(std::string const& name)
{
	return name.size() > 4 && name.compare(name.size() - 4, 4, "_adv") == 0;
}

struct ThetaEnvelope
{
	double theta = 0.0;
	double min_r1 = std::numeric_limits<double>::infinity();
	double max_r1 = -std::numeric_limits<double>::infinity();
};

struct SweepSummary
{
	std::size_t records = 0;
	std::size_t non_converged = 0;
	std::map<std::string, std::size_t> violations;  ///< per bound, converged records only
	std::size_t hard_violations = 0;
	std::size_t advisory_violations = 0;
	std::vector<ThetaEnvelope> r1_envelope;
};

struct SweepResult
{
	std::vector<SweepRecord> records;
	SweepSummary summary;
};

namespace detail {

inline double ratio(double num, double den)
{
	if (den > 0.0)
	{
		return num / den;
	}
	return num > 0.0 ? std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
}

inline EquilibriumResult solve_any(ContestInstance const& inst, SolverConfig const& cfg)
{
	return inst.all_linear() ? solve_linear_ne(inst) : solve_general_ne(inst, cfg);
}

} // namespace detail

/// Solves MAL, NOM and the optimum for one instance and checks every bound
/// that applies to it.
inline SweepRecord evaluate_instance(ContestInstance const& inst, SolverConfig const& solver, double tol = 1e-9)
{
	SweepRecord rec;
	rec.theta = inst.theta();
	std::size_t const n = inst.size();
	bool const linear = inst.all_linear();
	rec.bound = bounds::make_bound_report(n, inst.theta());
	rec.r.fill(std::numeric_limits<double>::quiet_NaN());

	EquilibriumResult mal;
	EquilibriumResult nom;
	try
	{
		mal = detail::solve_any(inst, solver);
		nom = detail::solve_any(inst.without_malicious(), solver);
	}
	catch (non_convergence_error const&)
	{
		rec.converged = false;
		rec.violations.push_back("nonconverged");
		return rec;
	}
	auto const m_mal = compute_measures(inst, mal.profile);
	auto const m_nom = compute_measures(inst.without_malicious(), nom.profile);
	auto const opt = social_optimum_utility(inst);

	rec.n_active = mal.participating_benign.size();
	rec.malicious_active = mal.malicious_active;
	rec.su_mal = m_mal.su;
	rec.su_nom = m_nom.su;
	rec.su_max = opt.su_max;
	rec.sv_mal = m_mal.sv;
	rec.sv_nom = m_nom.sv;
	rec.sv_max = opt.sv_max;
	rec.sw_mal = m_mal.sw;
	rec.sw_nom = m_nom.sw;
	rec.sw_max = opt.sw_max;

	rec.r[0] = detail::ratio(rec.su_mal, rec.su_max);
	rec.r[1] = detail::ratio(rec.su_mal, rec.su_nom);
	rec.r[2] = detail::ratio(rec.sv_mal, rec.sv_max);
	rec.r[3] = detail::ratio(rec.sv_mal, rec.sv_nom);
	if (linear)
	{
		if (rec.sw_max && *rec.sw_max > 0.0)
		{
			rec.r[4] = rec.sw_mal / *rec.sw_max;
		}
		rec.r[5] = detail::ratio(rec.sw_mal, rec.sw_nom);
	}

	auto const& b = rec.bound;
	auto below = [tol](double v, double lb) { return v < lb - tol; };
	auto above = [tol](double v, double ub) { return v > ub + tol; };
	auto flag = [&rec](bool bad, char const* name) {
		if (bad)
		{
			rec.violations.emplace_back(name);
		}
	};
	flag(below(rec.r[0], b.lb_b1), "lb1");
	flag(below(rec.r[1], b.lb_b2), "lb2");
	flag(below(rec.r[2], b.lb_b3), "lb3");
	flag(below(rec.r[3], b.lb_b4), "lb4");
	flag(above(rec.su_mal, rec.su_max), "opt_su");
	flag(above(rec.sv_mal, rec.sv_max), "opt_sv");
	if (linear)
	{
		flag(above(rec.r[0], b.ub_b1), "ub1");
		flag(above(rec.r[1], b.ub_b2_advisory), "ub2_adv");
		flag(above(rec.r[2], b.ub_b3), "ub3");
		if (b.lb_b5 && !std::isnan(rec.r[4]))
		{
			flag(below(rec.r[4], *b.lb_b5), "lb5");
			flag(above(rec.r[4], *b.ub_b5), "ub5");
		}
		if (!std::isinf(rec.r[5]))
		{
			flag(below(rec.r[5], b.lb_b6), "lb6");
		}
	}
	return rec;
}

inline std::size_t default_threads()
{
	if (char const* env = std::getenv("TULLOCK_THREADS"))
	{
		long const v = std::strtol(env, nullptr, 10);
		if (v > 0)
		{
			return static_cast<std::size_t>(v);
		}
	}
	return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs `fn(k)` for k in [0, count) on `threads` workers.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn)
{
	threads = std::max<std::size_t>(1, std::min(threads, count));
	if (threads == 1)
	{
		for (std::size_t k = 0; k < count; ++k)
		{
			fn(k);
		}
		return;
	}
	std::atomic<std::size_t> next{0};
	std::vector<std::thread> pool;
	for (std::size_t t = 0; t < threads; ++t)
	{
		pool.emplace_back([&] {
			for (std::size_t k = next++; k < count; k = next++)
			{
				fn(k);
			}
		});
	}
	for (auto& th : pool)
	{
		th.join();
	}
}

inline SweepSummary summarize(std::vector<SweepRecord> const& records, std::vector<double> const& grid)
{
	SweepSummary s;
	s.records = records.size();
	for (double t : grid)
	{
		s.r1_envelope.push_back({t, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()});
	}
	for (auto const& rec : records)
	{
		if (!rec.converged)
		{
			++s.non_converged;
			continue;
		}
		for (auto const& v : rec.violations)
		{
			++s.violations[v];
			if (is_advisory(v))
			{
				++s.advisory_violations;
			}
			else
			{
				++s.hard_violations;
			}
		}
		auto it = std::lower_bound(grid.begin(), grid.end(), rec.theta);
		if (it != grid.end() && *it == rec.theta)
		{
			auto& env = s.r1_envelope[static_cast<std::size_t>(it - grid.begin())];
			env.min_r1 = std::min(env.min_r1, rec.r[0]);
			env.max_r1 = std::max(env.max_r1, rec.r[0]);
		}
	}
	return s;
}

/// Full theta sweep. Rows come out ordered by theta, then by instance index
/// (extremal constructions first), whatever the thread count.
inline SweepResult run_sweep(SweepConfig const& config)
{
	config.validate();
	auto const grid = config.theta_grid();
	auto const anchors = config.anchors();
	std::size_t const per_theta = anchors.size() + config.instances_per_theta;
	std::vector<SweepRecord> records(grid.size() * per_theta);

	std::vector<bool> targeting;
	if (config.targeted)
	{
		targeting.assign(config.n, false);
		std::fill_n(targeting.begin(), *config.targeted, true);
	}

	parallel_for(records.size(), config.threads ? config.threads : default_threads(), [&](std::size_t cell) {
		std::size_t const ti = cell / per_theta;
		std::size_t const ii = cell % per_theta;
		double const theta = grid[ti];
		std::uint64_t seed = 0;
		std::string label;
		std::optional<ContestInstance> inst;
		if (ii < anchors.size())
		{
			label = to_string(anchors[ii]);
			inst.emplace(linear_instance(worst_case_valuations(anchors[ii], config.n), theta));
		}
		else
		{
			seed = cell_seed(config.seed, ti, ii - anchors.size());
			inst.emplace(config.family == UtilityFamily::linear ? generate_linear_instance(config.n, seed, theta)
			                                                    : generate_log_instance(config.n, seed, theta));
		}
		ContestInstance run = inst->with_cost(config.cost);
		if (config.targeted)
		{
			run = run.with_targeting(targeting);
		}
		SweepRecord rec = evaluate_instance(run, config.solver, config.tolerance);
		rec.seed = seed;
		rec.label = std::move(label);
		records[cell] = std::move(rec);
	});

	SweepResult out;
	out.summary = summarize(records, grid);
	out.records = std::move(records);
	return out;
}

// CSV -------------------------------------------------------------------------

inline constexpr char const* sweep_csv_header =
	"theta,seed,n_active,malicious_active,su_mal,su_nom,su_max,sv_mal,sv_nom,sv_max,sw_mal,sw_nom,sw_max,"
	"r1,r2,r3,r4,r5,r6,lb1,ub1,lb2,ub2_adv,lb3,ub3,lb4,lb5,ub5,lb6,violations";

/// 17 significant digits; "+inf" for the unbounded sentinel, empty when undefined.
inline std::string format_number(double x)
{
	if (std::isnan(x))
	{
		return "";
	}
	if (std::isinf(x))
	{
		return x > 0 ? "+inf" : "-inf";
	}
	std::array<char, 64> buf{};
	auto const res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
	return std::string(buf.data(), res.ptr);
}

inline std::string format_number(std::optional<double> x)
{
	return x ? format_number(*x) : std::string{};
}

inline void write_sweep_csv(std::ostream& os, std::vector<SweepRecord> const& records)
{
	os << sweep_csv_header << '\n';
	for (auto const& r : records)
	{
		os << format_number(r.theta) << ',' << (r.label.empty() ? std::to_string(r.seed) : r.label) << ','
		   << r.n_active << ',' << (r.malicious_active ? 1 : 0);
		for (double v : {r.su_mal, r.su_nom, r.su_max, r.sv_mal, r.sv_nom, r.sv_max, r.sw_mal, r.sw_nom})
		{
			os << ',' << (r.converged ? format_number(v) : std::string{});
		}
		os << ',' << (r.converged ? format_number(r.sw_max) : std::string{});
		for (double v : r.r)
		{
			os << ',' << format_number(v);
		}
		auto const& b = r.bound;
		for (double v : {b.lb_b1, b.ub_b1, b.lb_b2, b.ub_b2_advisory, b.lb_b3, b.ub_b3, b.lb_b4})
		{
			os << ',' << format_number(v);
		}
		os << ',' << format_number(b.lb_b5) << ',' << format_number(b.ub_b5) << ',' << format_number(b.lb_b6) << ',';
		for (std::size_t k = 0; k < r.violations.size(); ++k)
		{
			os << (k ? "|" : "") << r.violations[k];
		}
		os << '\n';
	}
}

inline constexpr char const* bounds_csv_header = "theta,N,lb_b1,ub_b1,lb_b2,ub_b2_advisory,lb_b3,ub_b3,lb_b4,lb_b5,ub_b5,lb_b6";

inline void write_bound_row(std::ostream& os, bounds::BoundReport const& b)
{
	os << format_number(b.theta) << ',' << b.n << ',' << format_number(b.lb_b1) << ',' << format_number(b.ub_b1) << ','
	   << format_number(b.lb_b2) << ',' << format_number(b.ub_b2_advisory) << ',' << format_number(b.lb_b3) << ','
	   << format_number(b.ub_b3) << ',' << format_number(b.lb_b4) << ',' << format_number(b.lb_b5) << ','
	   << format_number(b.ub_b5) << ',' << format_number(b.lb_b6) << '\n';
}

// Imperfect targeting table ---------------------------------------------------

struct TargetingRow
{
	std::size_t m = 0;
	double theta = 0.0;
	std::size_t n = 0;
	double x_benign = 0.0;
	double x_malicious = 0.0;
	Measures measures;
	std::optional<HomogeneousRates> formula_rates;  ///< only while the malicious agent participates
	std::optional<Measures> formula_measures;
};

/// N unit-valuation agents of which the first M are targeted, M = 1..N.
inline std::vector<TargetingRow> targeting_table(std::size_t n, double theta)
{
	std::vector<TargetingRow> rows;
	auto const base = linear_instance(std::vector<double>(n, 1.0), theta);
	for (std::size_t m = 1; m <= n; ++m)
	{
		std::vector<bool> ind(n, false);
		std::fill_n(ind.begin(), m, true);
		auto const inst = base.with_targeting(ind);
		auto const eq = solve_linear_ne(inst);
		TargetingRow row;
		row.m = m;
		row.theta = theta;
		row.n = n;
		row.x_benign = eq.profile.rate(1);
		row.x_malicious = eq.profile.rate(0);
		row.measures = compute_measures(inst, eq.profile);
		if (static_cast<double>(m) * theta > static_cast<double>(n) - 1.0)
		{
			row.formula_rates = homogeneous_rates(n, m, theta);
			row.formula_measures = homogeneous_measures(n, m, theta);
		}
		rows.push_back(std::move(row));
	}
	return rows;
}

inline constexpr char const* targeting_csv_header =
	"M,theta,N,x_benign,x_malicious,su_mal,sv_mal,sw_mal,v0,"
	"x_benign_formula,x_malicious_formula,su_formula,sv_formula,sw_formula,v0_formula";

inline void write_targeting_csv(std::ostream& os, std::vector<TargetingRow> const& rows)
{
	os << targeting_csv_header << '\n';
	for (auto const& r : rows)
	{
		os << r.m << ',' << format_number(r.theta) << ',' << r.n << ',' << format_number(r.x_benign) << ','
		   << format_number(r.x_malicious) << ',' << format_number(r.measures.su) << ',' << format_number(r.measures.sv)
		   << ',' << format_number(r.measures.sw) << ',' << format_number(r.measures.v0);
		if (r.formula_rates && r.formula_measures)
		{
			os << ',' << format_number(r.formula_rates->benign) << ',' << format_number(r.formula_rates->malicious)
			   << ',' << format_number(r.formula_measures->su) << ',' << format_number(r.formula_measures->sv) << ','
			   << format_number(r.formula_measures->sw) << ',' << format_number(r.formula_measures->v0);
		}
		else
		{
			os << ",,,,,,";
		}
		os << '\n';
	}
}

} // namespace tullock::harness

#endif // TULLOCK_HARNESS_HPP
