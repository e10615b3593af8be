// bellpoly: parameter sweeps, spectra and Bell-CHSH audits for XXZ spin models.
//
// Exit codes: 0 success, 1 I/O failure, 2 configuration or input error,
// 3 capacity error, 4 numerical-consistency error.

#include <bellpoly/bellpoly.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace bellpoly;

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitNumerical = 4;

SweepConfig load_config(const std::string& path)
{
	return parse_config(read_json(path));
}

void print_warnings(const SweepConfig& c)
{
	if(c.model != ModelKind::polygon_dimer) return;
	ModelParams p;
	p.n_dimers = c.n;
	p.delta0 = c.delta0;
	for(const auto& w : p.warnings()) std::cerr << "warning: " << w << '\n';
}

nlohmann::json report_json(const BellReport& r)
{
	nlohmann::json m = nlohmann::json::array();
	for(int a = 0; a < 3; ++a) {
		m.push_back({r.correlations(a, 0), r.correlations(a, 1), r.correlations(a, 2)});
	}
	return {{"M", m}, {"lambda1", r.lambda1}, {"lambda2", r.lambda2}, {"B", r.b}, {"violated", r.violated}};
}

int cmd_sweep(const std::string& config_path, const std::string& out, const std::string& format)
{
	const SweepConfig c = load_config(config_path);
	const OutputFormat f = parse_format(format);
	print_warnings(c);
	const SweepResult result = run_sweep(c, default_threads());
	emit(result, f, out);
	std::cerr << "wrote " << result.rows.size() << " rows to " << out << " in "
	          << result.metadata.wall_time_seconds << " s\n";
	return 0;
}

int cmd_bell(const std::string& state_path, int restarts, std::uint64_t seed)
{
	const TwoQubitState s = parse_state(read_json(state_path));
	const BellReport r = horodecki_b(s);
	nlohmann::json out = report_json(r);
	out["sxx"] = correlation(s, Axis::x, Axis::x);
	out["szz"] = correlation(s, Axis::z, Axis::z);
	if(restarts > 0) out["chsh_oracle"] = chsh_oracle(s, restarts, seed);
	std::cout << out.dump(2) << '\n';
	return 0;
}

int cmd_spectrum(const std::optional<std::string>& config_path, const std::optional<std::string>& graph_path,
                 int levels)
{
	std::cout.precision(17);
	if(graph_path) {
		CouplingGraph g;
		from_json(read_json(*graph_path), g);
		const Spectrum spec = eigendecompose(build_hamiltonian(g));
		const int k = levels > 0 ? std::min<int>(levels, static_cast<int>(spec.size())) : static_cast<int>(spec.size());
		for(int i = 0; i < k; ++i) std::cout << format_double(spec.eigenvalues(i)) << '\n';
		return 0;
	}
	const SweepConfig c = load_config(*config_path);
	const int k = levels > 0 ? std::min(levels, 1 << c.n_sites()) : c.energies_lowest_k;
	std::cout << "j_over_j0";
	for(int i = 0; i < k; ++i) std::cout << ",e" << i;
	std::cout << '\n';
	for(double j : c.j_over_j0.points()) {
		const Spectrum spec = eigendecompose(build_hamiltonian(c.graph_at(j)));
		std::cout << format_double(j);
		for(int i = 0; i < k; ++i) std::cout << ',' << format_double(spec.eigenvalues(i) / c.j0);
		std::cout << '\n';
	}
	return 0;
}

int cmd_audit(const std::string& config_path)
{
	const SweepConfig c = load_config(config_path);
	print_warnings(c);
	const double j = c.j_over_j0.points().front();
	const double t = c.t.points().front();
	const Spectrum spec = eigendecompose(build_hamiltonian(c.graph_at(j)));
	const DensityMatrix state = state_at(c, spec, t);
	const PairReports reports = all_pair_reports(state);
	const auto audit = monogamy_audit(reports, state.n_sites);

	nlohmann::json out;
	out["j_over_j0"] = j;
	out["t"] = t;
	nlohmann::json pairs = nlohmann::json::array();
	for(const auto& [p, r] : reports) {
		nlohmann::json entry = {{"pair", {p.i, p.j}}, {"B", r.b}, {"violated", r.violated}};
		const auto w = rdm_equality_witness(state, p.i, p.j);
		entry["witness"] = w ? nlohmann::json(*w) : nlohmann::json(nullptr);
		pairs.push_back(std::move(entry));
	}
	out["pairs"] = pairs;
	double min_slack = 8.0;
	std::size_t flagged = 0;
	nlohmann::json worst;
	for(const auto& e : audit) {
		if(e.slack < min_slack) {
			min_slack = e.slack;
			worst = {e.i, e.j, e.k};
		}
		flagged += e.flagged ? 1 : 0;
	}
	out["monogamy"] = {{"triples", audit.size()}, {"min_slack", min_slack}, {"tightest", worst},
	                   {"flagged", flagged}};
	std::cout << out.dump(2) << '\n';
	if(flagged > 0) {
		std::cerr << "error: " << flagged << " triples violate the monogamy bound\n";
		return kExitNumerical;
	}
	return 0;
}

int cmd_graph(const std::string& config_path, std::optional<double> j)
{
	const SweepConfig c = load_config(config_path);
	nlohmann::json out;
	to_json(out, c.graph_at(j.value_or(c.j_over_j0.points().front())));
	std::cout << out.dump() << '\n';
	return 0;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Exact diagonalization and Bell-CHSH analysis of XXZ spin polygons"};
	app.require_subcommand(1);
	app.set_version_flag("--version", std::string(bellpoly::kVersion));

	std::string config, out, format = "csv", state;
	std::optional<std::string> spectrum_config, spectrum_graph;
	int restarts = 0;
	std::uint64_t seed = 0;
	int levels = 0;
	std::optional<double> graph_j;

	auto* sweep = app.add_subcommand("sweep", "Run a (t, J/J0) parameter sweep");
	sweep->add_option("--config", config, "JSON configuration file")->required();
	sweep->add_option("--out", out, "Output path")->required();
	sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

	auto* bell = app.add_subcommand("bell", "Analyse one serialized two-qubit state");
	bell->add_option("--state", state, "JSON file with 'real' (and optional 'imag') 4x4 arrays")->required();
	bell->add_option("--oracle-restarts", restarts, "Also run the brute-force CHSH maximizer");
	bell->add_option("--seed", seed, "Seed for the brute-force maximizer");

	auto* spectrum = app.add_subcommand("spectrum", "Lowest energies along the J/J0 grid, or of a graph");
	auto* spec_cfg = spectrum->add_option("--config", spectrum_config, "JSON configuration file");
	auto* spec_graph = spectrum->add_option("--graph", spectrum_graph, "JSON coupling graph file");
	spec_cfg->excludes(spec_graph);
	spectrum->add_option("--levels", levels, "Number of levels (default: energies_lowest_k, or all for --graph)");

	auto* audit = app.add_subcommand("audit", "Monogamy and equal-RDM witnesses at the first grid point");
	audit->add_option("--config", config, "JSON configuration file")->required();

	auto* graph = app.add_subcommand("graph", "Print the coupling graph as JSON");
	graph->add_option("--config", config, "JSON configuration file")->required();
	graph->add_option("--j-over-j0", graph_j, "Coupling ratio (default: first grid point)");

	try {
		app.parse(argc, argv);
	} catch(const CLI::ParseError& e) {
		const int code = app.exit(e);
		return code == 0 ? 0 : kExitConfig;
	}

	try {
		if(*sweep) return cmd_sweep(config, out, format);
		if(*bell) return cmd_bell(state, restarts, seed);
		if(*spectrum) {
			if(!spectrum_config && !spectrum_graph) {
				std::cerr << "error: spectrum needs --config or --graph\n";
				return kExitConfig;
			}
			return cmd_spectrum(spectrum_config, spectrum_graph, levels);
		}
		if(*audit) return cmd_audit(config);
		if(*graph) return cmd_graph(config, graph_j);
	} catch(const bellpoly::CapacityError& e) {
		std::cerr << "capacity error: " << e.what() << '\n';
		return kExitCapacity;
	} catch(const bellpoly::NumericalError& e) {
		std::cerr << "numerical error: " << e.what() << '\n';
		return kExitNumerical;
	} catch(const bellpoly::InputError& e) {
		std::cerr << "config error: " << e.what() << '\n';
		return kExitConfig;
	} catch(const bellpoly::IoError& e) {
		std::cerr << "i/o error: " << e.what() << '\n';
		return kExitIo;
	}
	return 0;
}
