// Command-line front end: simulate, optimize, verify, preset, engineered.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/parse/validation error.

#include "qst/chain_model.hpp"
#include "qst/error.hpp"
#include "qst/excitation_engine.hpp"
#include "qst/fidelity_metrics.hpp"
#include "qst/optimizer.hpp"
#include "qst/verification.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

namespace
{

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;

struct ChainOptions
{
	std::string chain_path;
	std::string preset_name;
	double J = 1.0;
	double B = 0.0;
};

void add_chain_options(CLI::App* cmd, ChainOptions& opt)
{
	auto* chain = cmd->add_option("--chain", opt.chain_path, "Chain spec JSON file");
	auto* preset = cmd->add_option("--preset", opt.preset_name, "Named preset system");
	chain->excludes(preset);
	cmd->add_option("--J", opt.J, "Coupling for --preset")->needs(preset);
	cmd->add_option("--B", opt.B, "Field for --preset")->needs(preset);
}

qst::ChainSpec resolve_chain(const ChainOptions& opt)
{
	if(!opt.chain_path.empty())
	{
		return qst::load_chain_file(opt.chain_path);
	}
	if(!opt.preset_name.empty())
	{
		return qst::preset(qst::parse_preset_id(opt.preset_name), opt.J, opt.B);
	}
	throw qst::Error(qst::ErrorKind::BadArgs, "one of --chain or --preset is required");
}

std::string fnv1a64(std::string_view text)
{
	std::uint64_t hash = 14695981039346656037ull;
	for(const unsigned char c : text)
	{
		hash ^= c;
		hash *= 1099511628211ull;
	}
	std::ostringstream os;
	os << "fnv1a64:" << std::hex << hash;
	return os.str();
}

// Shortest form that still carries 17 significant digits; independent of locale.
std::string format_double(double x)
{
	char buf[64];
	const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
	return std::string(buf, res.ptr);
}

class Output
{
public:
	explicit Output(const std::string& path)
	{
		if(!path.empty() && path != "-")
		{
			file_.open(path, std::ios::binary);
			if(!file_)
			{
				throw qst::Error(qst::ErrorKind::Io, "cannot write '" + path + "'");
			}
		}
	}
	std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
	std::ofstream file_;
};

struct Manifest
{
	explicit Manifest(std::string name) : command(std::move(name)) {}

	std::string command;
	json parameters = json::object();
	std::string digest;
	std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

	void emit(const std::string& path) const
	{
		const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
		const json doc = {
			{"command", command},
			{"parameters", parameters},
			{"input_digest", digest},
			{"version", kVersion},
			{"wall_seconds", seconds},
		};
		if(path.empty())
		{
			std::cerr << doc.dump() << "\n";
			return;
		}
		std::ofstream out(path, std::ios::binary);
		if(!out)
		{
			throw qst::Error(qst::ErrorKind::Io, "cannot write manifest '" + path + "'");
		}
		out << doc.dump(2) << "\n";
	}
};

json chain_parameters(const ChainOptions& opt)
{
	if(!opt.chain_path.empty())
	{
		return {{"chain", opt.chain_path}};
	}
	return {{"preset", opt.preset_name}, {"J", opt.J}, {"B", opt.B}};
}

json result_json(const qst::OptimizationResult& r)
{
	json doc = {
		{"best_t", r.best_t},
		{"best_field", r.best_field ? json(*r.best_field) : json(nullptr)},
		{"fbar", r.fbar},
		{"fbar_corrected", r.fbar_corrected},
		{"abs_f", r.abs_f},
		{"evaluations", r.evaluations},
		{"bracket", {r.bracket.first, r.bracket.second}},
	};
	return doc;
}

int run_simulate(const ChainOptions& chain, double t_max, int steps, const std::string& out_path,
                 const std::string& manifest_path)
{
	Manifest manifest("simulate");
	const auto spec = resolve_chain(chain);
	if(steps < 1 || !(t_max >= 0.0))
	{
		throw qst::Error(qst::ErrorKind::BadArgs, "--steps must be >= 1 and --t-max >= 0");
	}
	std::vector<double> grid(static_cast<std::size_t>(steps));
	for(int i = 0; i < steps; ++i)
	{
		grid[static_cast<std::size_t>(i)] = steps == 1 ? 0.0 : t_max * i / (steps - 1);
	}

	Output out(out_path);
	auto& os = out.stream();
	os << "t,re_f,im_f,abs_f,gamma,fbar,fbar_corr,delta\n";
	for(const auto& rec : qst::time_series(spec, grid))
	{
		const auto rep = qst::make_report(rec);
		os << format_double(rep.t) << ',' << format_double(rep.f.real()) << ',' << format_double(rep.f.imag()) << ','
		   << format_double(rep.abs_f) << ',' << format_double(rep.gamma) << ',' << format_double(rep.fbar) << ','
		   << format_double(rep.fbar_corrected) << ',' << format_double(rep.correction_phase) << '\n';
	}

	manifest.parameters = chain_parameters(chain);
	manifest.parameters["t_max"] = t_max;
	manifest.parameters["steps"] = steps;
	manifest.digest = fnv1a64(qst::to_json(spec));
	manifest.emit(manifest_path);
	return 0;
}

int run_optimize(const ChainOptions& chain, double t_max, int samples, const std::vector<double>& tune_field,
                 int n_field, bool corrected, const std::string& out_path, const std::string& manifest_path)
{
	Manifest manifest("optimize");
	const auto spec = resolve_chain(chain);
	const auto cfg = qst::SearchConfig::for_horizon(t_max, samples);

	qst::OptimizationResult result;
	if(!tune_field.empty())
	{
		result = qst::tune_uniform_field(spec, cfg, {tune_field[0], tune_field[1]}, n_field);
	}
	else
	{
		result = qst::maximize_fidelity(spec, cfg, corrected);
	}

	Output out(out_path);
	out.stream() << result_json(result).dump(2) << "\n";

	manifest.parameters = chain_parameters(chain);
	manifest.parameters["t_max"] = t_max;
	manifest.parameters["samples"] = samples;
	manifest.parameters["corrected"] = corrected;
	if(!tune_field.empty())
	{
		manifest.parameters["tune_field"] = tune_field;
		manifest.parameters["n_field"] = n_field;
	}
	manifest.digest = fnv1a64(qst::to_json(spec));
	manifest.emit(manifest_path);
	return 0;
}

int run_verify(const std::string& json_path, const std::string& fault, const std::string& manifest_path)
{
	Manifest manifest("verify");
	qst::verification::SuiteOptions options;
	if(fault == "hopping-no-sqrt")
	{
		options.reducer = qst::verification::reduce_without_spin_factor;
	}
	else if(!fault.empty())
	{
		throw qst::Error(qst::ErrorKind::BadArgs, "unknown fault '" + fault + "'");
	}

	const auto results = qst::verification::run_suite(options);
	std::cout << qst::verification::report_text(results);
	if(!json_path.empty())
	{
		Output out(json_path);
		out.stream() << qst::verification::report_json(results);
	}

	std::vector<std::string> failed;
	for(const auto& r : results)
	{
		if(!r.passed())
		{
			failed.push_back(r.name);
		}
	}
	if(failed.empty())
	{
		std::cout << "all " << results.size() << " checks passed\n";
	}
	else
	{
		std::cout << failed.size() << " check(s) failed:";
		for(const auto& name : failed)
		{
			std::cout << " \"" << name << "\"";
		}
		std::cout << "\n";
	}

	manifest.parameters = {{"fault", fault}, {"seed", options.seed}};
	manifest.digest = fnv1a64("");
	manifest.emit(manifest_path);
	return failed.empty() ? 0 : 1;
}

int run_preset(const std::string& name, double J, double B, const std::string& out_path,
               const std::string& manifest_path)
{
	Manifest manifest("preset");
	const auto spec = qst::preset(qst::parse_preset_id(name), J, B);
	const auto text = qst::to_json(spec);
	Output out(out_path);
	out.stream() << text;
	manifest.parameters = {{"preset", name}, {"J", J}, {"B", B}};
	manifest.digest = fnv1a64(text);
	manifest.emit(manifest_path);
	return 0;
}

// Perfect-transfer scan of engineered chains with one spin-1 site.
int run_engineered(const std::vector<int>& sizes, double lambda, double t_max, const std::string& out_path,
                   const std::string& manifest_path)
{
	Manifest manifest("engineered");
	json rows = json::array();
	for(const int n : sizes)
	{
		std::set<int> impurity_sites{0, 2, (n + 1) / 2};
		for(const int k : impurity_sites)
		{
			const auto spec = qst::engineered_chain(n, lambda, k);
			const auto peaks = qst::critical_times(spec, qst::SearchConfig::for_horizon(t_max, 4000));
			qst::CriticalTime best;
			for(const auto& p : peaks)
			{
				if(p.abs_f > best.abs_f)
				{
					best = p;
				}
			}
			const auto fit = qst::maximize_fidelity(spec, qst::SearchConfig::for_horizon(t_max, 4000), true);
			rows.push_back({
				{"N", n},
				{"impurity_site", k == 0 ? json(nullptr) : json(k)},
				{"max_abs_f", best.abs_f},
				{"t_at_max", best.t},
				{"first_peak_t", peaks.empty() ? json(nullptr) : json(peaks.front().t)},
				{"max_fbar_corrected", fit.fbar_corrected},
			});
		}
	}
	Output out(out_path);
	out.stream() << json{{"lambda", lambda}, {"t_max", t_max}, {"rows", rows}}.dump(2) << "\n";
	manifest.parameters = {{"sizes", sizes}, {"lambda", lambda}, {"t_max", t_max}};
	manifest.digest = fnv1a64("");
	manifest.emit(manifest_path);
	return 0;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Quantum state transfer through XX chains with spin and field impurities"};
	app.require_subcommand(1);
	app.set_version_flag("--version", kVersion);

	std::string manifest_path;
	std::string out_path;

	ChainOptions sim_chain;
	double sim_t_max = 0.0;
	int sim_steps = 1000;
	auto* simulate = app.add_subcommand("simulate", "Write f(t) and fidelities on a uniform time grid as CSV");
	add_chain_options(simulate, sim_chain);
	simulate->add_option("--t-max", sim_t_max, "End of the time grid")->required();
	simulate->add_option("--steps", sim_steps, "Number of grid points (1 gives t = 0 only)");
	simulate->add_option("--out", out_path, "Output path (default stdout)");
	simulate->add_option("--manifest", manifest_path, "Write the run manifest here instead of stderr");

	ChainOptions opt_chain;
	double opt_t_max = 0.0;
	int opt_samples = 1000;
	int opt_n_field = 41;
	std::vector<double> tune_field;
	bool corrected = false;
	auto* optimize = app.add_subcommand("optimize", "Maximize the average fidelity over t (and optionally a uniform field)");
	add_chain_options(optimize, opt_chain);
	optimize->add_option("--t-max", opt_t_max, "Search horizon")->required();
	optimize->add_option("--samples", opt_samples, "Minimum grid samples over the horizon");
	auto* tune = optimize->add_option("--tune-field", tune_field, "Also search a uniform field in [lo, hi]")
	                 ->expected(2);
	optimize->add_option("--n-field", opt_n_field, "Coarse field samples for --tune-field")->needs(tune);
	optimize->add_flag("--corrected", corrected, "Maximize the phase-corrected average fidelity")->excludes(tune);
	optimize->add_option("--out", out_path, "Output path (default stdout)");
	optimize->add_option("--manifest", manifest_path, "Write the run manifest here instead of stderr");

	std::string verify_json;
	std::string fault;
	auto* verify = app.add_subcommand("verify", "Run the built-in acceptance checks");
	verify->add_option("--json", verify_json, "Also write a JSON report");
	verify->add_option("--inject-fault", fault, "Run with deliberately broken physics (hopping-no-sqrt)")
		->group("");
	verify->add_option("--manifest", manifest_path, "Write the run manifest here instead of stderr");

	std::string preset_name;
	double preset_J = 1.0;
	double preset_B = 0.0;
	auto* preset = app.add_subcommand("preset", "Write a named preset system as a chain JSON file");
	preset->add_option("name", preset_name, "Preset name")->required();
	preset->add_option("--J", preset_J, "Coupling");
	preset->add_option("--B", preset_B, "Field");
	preset->add_option("--out", out_path, "Output path (default stdout)");
	preset->add_option("--manifest", manifest_path, "Write the run manifest here instead of stderr");

	std::vector<int> sizes{4, 5, 6, 8};
	double lambda = 1.0;
	double eng_t_max = 100.0;
	auto* engineered = app.add_subcommand("engineered", "Scan engineered chains with a spin-1 site for perfect transfer");
	engineered->add_option("--sizes", sizes, "Chain lengths");
	engineered->add_option("--lambda", lambda, "Coupling scale");
	engineered->add_option("--t-max", eng_t_max, "Search horizon");
	engineered->add_option("--out", out_path, "Output path (default stdout)");
	engineered->add_option("--manifest", manifest_path, "Write the run manifest here instead of stderr");

	try
	{
		app.parse(argc, argv);
	}
	catch(const CLI::CallForHelp& e)
	{
		return app.exit(e);
	}
	catch(const CLI::CallForAllHelp& e)
	{
		return app.exit(e);
	}
	catch(const CLI::CallForVersion& e)
	{
		return app.exit(e);
	}
	catch(const CLI::ParseError& e)
	{
		app.exit(e);
		return 2;
	}

	try
	{
		if(simulate->parsed())
		{
			return run_simulate(sim_chain, sim_t_max, sim_steps, out_path, manifest_path);
		}
		if(optimize->parsed())
		{
			return run_optimize(opt_chain, opt_t_max, opt_samples, tune_field, opt_n_field, corrected, out_path,
			                    manifest_path);
		}
		if(verify->parsed())
		{
			return run_verify(verify_json, fault, manifest_path);
		}
		if(preset->parsed())
		{
			return run_preset(preset_name, preset_J, preset_B, out_path, manifest_path);
		}
		if(engineered->parsed())
		{
			return run_engineered(sizes, lambda, eng_t_max, out_path, manifest_path);
		}
	}
	catch(const qst::Error& e)
	{
		std::cerr << "error: " << e.what() << "\n";
		return 2;
	}
	catch(const std::exception& e)
	{
		std::cerr << "error: " << e.what() << "\n";
		return 2;
	}
	return 2;
}
