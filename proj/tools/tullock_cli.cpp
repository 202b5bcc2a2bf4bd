#include <tullock/io.hpp>
#include <tullock/tullock.hpp>
#include <tullock/verify.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace tullock;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

json read_json(fs::path const& path)
{
	std::ifstream in(path);
	if (!in)
	{
		throw io::parse_error(path.string(), "cannot open file");
	}
	try
	{
		return json::parse(in);
	}
	catch (json::parse_error const& e)
	{
		throw io::parse_error(path.string(), e.what());
	}
}

std::ofstream open_out(fs::path const& path)
{
	if (path.has_parent_path())
	{
		fs::create_directories(path.parent_path());
	}
	std::ofstream out(path);
	if (!out)
	{
		throw usage_error("cannot write " + path.string());
	}
	return out;
}

// solve -----------------------------------------------------------------------

int run_solve(std::string const& file, std::string const& method, std::string const& json_out)
{
	ContestInstance inst = [&] {
		try
		{
			return io::instance_from_json(read_json(file));
		}
		catch (io::parse_error const& e)
		{
			throw io::parse_error(file, e.what());
		}
	}();

	EquilibriumResult result;
	if (method == "closed" || (method == "auto" && inst.all_linear()))
	{
		if (!inst.all_linear())
		{
			throw usage_error("--method closed needs every agent to have a linear utility");
		}
		result = solve_linear_ne(inst);
	}
	else
	{
		try
		{
			result = solve_general_ne(inst);
		}
		catch (non_convergence_error const& e)
		{
			json diag = {{"error", e.what()},
			             {"sweeps", e.sweeps()},
			             {"last_rates", std::vector<double>(e.last_profile().rates().begin(), e.last_profile().rates().end())},
			             {"foc_residuals", e.residuals()}};
			std::cerr << diag.dump(2) << '\n';
			return exit_failed;
		}
	}
	auto const doc = io::result_to_json(inst, result, compute_measures(inst, result.profile));
	if (json_out.empty())
	{
		std::cout << doc.dump(2) << '\n';
	}
	else
	{
		open_out(json_out) << doc.dump(2) << '\n';
	}
	return exit_ok;
}

// bounds ----------------------------------------------------------------------

std::vector<double> parse_grid(std::string const& text)
{
	std::stringstream ss(text);
	std::string part;
	std::vector<double> v;
	while (std::getline(ss, part, ':'))
	{
		try
		{
			v.push_back(std::stod(part));
		}
		catch (std::exception const&)
		{
			throw usage_error("--theta-grid expects start:stop:step, got '" + text + "'");
		}
	}
	if (v.size() != 3)
	{
		throw usage_error("--theta-grid expects start:stop:step, got '" + text + "'");
	}
	harness::SweepConfig c;
	c.theta_start = v[0];
	c.theta_stop = v[1];
	c.theta_step = v[2];
	if (v[0] < 0.0 || v[1] < 0.0)
	{
		throw usage_error("theta must be >= 0");
	}
	c.validate();
	return c.theta_grid();
}

int run_bounds(std::size_t n, std::optional<double> theta, std::string const& grid)
{
	if (!theta && grid.empty())
	{
		throw usage_error("bounds needs --theta or --theta-grid");
	}
	std::vector<double> thetas;
	if (theta)
	{
		if (!(*theta >= 0.0))
		{
			throw usage_error("theta must be >= 0");
		}
		thetas.push_back(*theta);
	}
	else
	{
		thetas = parse_grid(grid);
	}
	if (n < 1)
	{
		throw usage_error("--n must be >= 1");
	}
	std::cout << harness::bounds_csv_header << '\n';
	for (double t : thetas)
	{
		harness::write_bound_row(std::cout, bounds::make_bound_report(n, t));
	}
	return exit_ok;
}

// sweep -----------------------------------------------------------------------

void write_sweep_outputs(harness::SweepConfig const& config, fs::path const& csv_path, std::string const& figure = {})
{
	auto const started = std::chrono::steady_clock::now();
	auto const result = harness::run_sweep(config);
	double const seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
	{
		auto out = open_out(csv_path);
		harness::write_sweep_csv(out, result.records);
	}
	json meta = {{"config", io::sweep_config_to_json(config)},
	             {"anchors_per_theta", config.anchors().size()},
	             {"random_instances_per_theta", config.instances_per_theta},
	             {"summary", io::summary_to_json(result.summary)},
	             {"seconds", seconds}};
	if (!figure.empty())
	{
		meta["figure"] = figure;
	}
	fs::path meta_path = csv_path;
	meta_path += ".meta.json";
	open_out(meta_path) << meta.dump(2) << '\n';
	std::cerr << csv_path.string() << ": " << result.summary.records << " records, " << result.summary.hard_violations
	          << " bound violations, " << result.summary.advisory_violations << " advisory, "
	          << result.summary.non_converged << " non-converged\n";
}

int run_sweep_cmd(std::string const& config_file, std::string const& out)
{
	auto const config = [&] {
		try
		{
			return io::sweep_config_from_json(read_json(config_file));
		}
		catch (io::parse_error const& e)
		{
			throw io::parse_error(config_file, e.what());
		}
	}();
	config.validate();
	fs::path csv = out.empty() ? fs::path(config_file).replace_extension(".csv") : fs::path(out);
	write_sweep_outputs(config, csv);
	return exit_ok;
}

// verify ----------------------------------------------------------------------

int run_verify()
{
	bool all = true;
	verify::run_all([&](verify::CriterionResult const& r) {
		std::cout << verify::format_line(r) << std::endl;
		all = all && r.passed;
	});
	return all ? exit_ok : exit_failed;
}

// figures-data ----------------------------------------------------------------

char const* figure_title(int id)
{
	switch (id)
	{
	case 2: return "SU_mal/SU_max, linear, N=5";
	case 3: return "SU_mal/SU_nom, linear, N=5";
	case 4: return "SV_mal/SV_max, linear, N=5";
	case 5: return "SV_mal/SV_nom, linear, N=5";
	case 6: return "SW_mal/SW_max, linear, N=5";
	case 7: return "SW_mal/SW_nom, linear, N=5";
	case 8: return "SU_mal/SU_max, linear, N=100";
	case 9: return "malicious net utility vs number of targeted agents, N=20, theta=2";
	case 10: return "SU_mal/SU_max, logarithmic, N=5";
	case 11: return "SU_mal/SU_nom, logarithmic, N=5";
	case 12: return "SV_mal/SV_max, logarithmic, N=5";
	case 13: return "SV_mal/SV_nom, logarithmic, N=5";
	default: return nullptr;
	}
}

int run_figures(int figure, fs::path const& out_dir, std::size_t instances, std::uint64_t seed)
{
	char const* title = figure_title(figure);
	if (!title)
	{
		throw usage_error("--figure must be between 2 and 13");
	}
	fs::path const stem = out_dir / ("figure" + std::to_string(figure));
	if (figure == 9)
	{
		auto const rows = harness::targeting_table(20, 2.0);
		{
			auto out = open_out(fs::path(stem) += ".csv");
			harness::write_targeting_csv(out, rows);
		}
		json cfg = {{"figure", title}, {"N", 20}, {"theta", 2.0}, {"v", 1.0}, {"M", {{"start", 1}, {"stop", 20}}}};
		open_out(fs::path(stem) += ".config.json") << cfg.dump(2) << '\n';
		return exit_ok;
	}
	harness::SweepConfig c;
	c.n = figure == 8 ? 100 : 5;
	c.family = figure >= 10 ? harness::UtilityFamily::logarithmic : harness::UtilityFamily::linear;
	c.instances_per_theta = instances;
	c.seed = seed;
	c.validate();
	open_out(fs::path(stem) += ".config.json") << io::sweep_config_to_json(c).dump(2) << '\n';
	write_sweep_outputs(c, fs::path(stem) += ".csv", title);
	return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Equilibria and efficiency bounds for attention contests with a malicious agent"};
	app.require_subcommand(1, 1);

	auto* solve = app.add_subcommand("solve", "Solve one instance and print rates, residuals and measures as JSON");
	std::string instance_file;
	std::string method = "auto";
	std::string json_out;
	solve->add_option("instance", instance_file, "instance JSON file")->required()->check(CLI::ExistingFile);
	solve->add_option("--method", method, "auto, closed or iterative")
		->check(CLI::IsMember({"auto", "closed", "iterative"}));
	solve->add_option("--json-out", json_out, "write the JSON here instead of stdout");

	auto* bounds_cmd = app.add_subcommand("bounds", "Print the analytic bound table as CSV");
	std::size_t n = 5;
	std::optional<double> theta;
	std::string grid;
	bounds_cmd->add_option("--n", n, "number of benign agents")->required();
	auto* theta_opt = bounds_cmd->add_option("--theta", theta, "single willingness factor");
	auto* grid_opt = bounds_cmd->add_option("--theta-grid", grid, "start:stop:step");
	theta_opt->excludes(grid_opt);

	auto* sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep described by a JSON config");
	std::string sweep_file;
	std::string sweep_out;
	sweep->add_option("config", sweep_file, "sweep config JSON")->required()->check(CLI::ExistingFile);
	sweep->add_option("--out", sweep_out, "CSV path (default: config path with .csv)");

	auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance checks; exit 1 if any fails");

	auto* figures = app.add_subcommand("figures-data", "Write the sweep config and CSV behind one figure");
	int figure = 0;
	std::string out_dir = "figures-data";
	std::size_t instances = 1000;
	std::uint64_t seed = 1;
	figures->add_option("--figure", figure, "figure id, 2..13")->required();
	figures->add_option("--out-dir", out_dir, "output directory");
	figures->add_option("--instances", instances, "random instances per theta");
	figures->add_option("--seed", seed, "base seed");

	try
	{
		app.parse(argc, argv);
	}
	catch (CLI::CallForHelp const& e)
	{
		return app.exit(e);
	}
	catch (CLI::CallForAllHelp const& e)
	{
		return app.exit(e);
	}
	catch (CLI::ParseError const& e)
	{
		app.exit(e);
		return exit_usage;
	}

	try
	{
		if (*solve)
		{
			return run_solve(instance_file, method, json_out);
		}
		if (*bounds_cmd)
		{
			return run_bounds(n, theta, grid);
		}
		if (*sweep)
		{
			return run_sweep_cmd(sweep_file, sweep_out);
		}
		if (*verify_cmd)
		{
			return run_verify();
		}
		if (*figures)
		{
			return run_figures(figure, out_dir, instances, seed);
		}
	}
	catch (usage_error const& e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return exit_usage;
	}
	catch (domain_error const& e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return exit_usage;
	}
	catch (structural_error const& e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return exit_usage;
	}
	catch (std::exception const& e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return exit_failed;
	}
	return exit_usage;
}
