#pragma once

#include "bell.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "reduced.hpp"
#include "spectral.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace bellpoly {

inline constexpr const char* kVersion = "0.1.0";

/// Evenly spaced points from min to max inclusive; one step means {min}.
struct Grid
{
	double min = 0.0;
	double max = 0.0;
	int steps = 1;

	[[nodiscard]] std::vector<double> points() const
	{
		std::vector<double> out(static_cast<std::size_t>(steps));
		for(int k = 0; k < steps; ++k) {
			out[k] = steps == 1 ? min : min + (max - min) * k / (steps - 1);
		}
		if(steps > 1) out.back() = max;
		return out;
	}

	bool operator==(const Grid&) const = default;
};

enum class ModelKind { polygon_dimer, ring };

enum class Observable {
	b_horodecki,
	b_formula,
	correlators_xx_zz,
	energies_lowest_k,
	monogamy_slacks,
	crossings,
};

inline const char* observable_name(Observable o)
{
	switch(o) {
	case Observable::b_horodecki: return "b_horodecki";
	case Observable::b_formula: return "b_formula";
	case Observable::correlators_xx_zz: return "correlators_xx_zz";
	case Observable::energies_lowest_k: return "energies_lowest_k";
	case Observable::monogamy_slacks: return "monogamy_slacks";
	case Observable::crossings: return "crossings";
	}
	return "?";
}

inline Observable parse_observable(std::string name)
{
	std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
	for(Observable o : {Observable::b_horodecki, Observable::b_formula, Observable::correlators_xx_zz,
	                    Observable::energies_lowest_k, Observable::monogamy_slacks, Observable::crossings}) {
		if(name == observable_name(o)) return o;
	}
	throw ConfigError("observables", "unknown observable '" + name + "'");
}

struct SweepConfig
{
	ModelKind model = ModelKind::polygon_dimer;
	int n = 2; // dimers, polygon_dimer model
	int m = 5; // sites, ring model
	double j0 = 1.0;
	double delta0 = 1.0;
	double delta = 1.0;
	Grid j_over_j0{-4.0, 2.0, 121};
	Grid t{1e-4, 0.6, 61};
	std::vector<SitePair> pairs{{0, 1}, {0, 2}};
	std::set<Observable> observables{Observable::b_horodecki, Observable::b_formula,
	                                 Observable::correlators_xx_zz, Observable::energies_lowest_k};
	int energies_lowest_k = 2;
	double degeneracy_tol = 1e-9;
	double gap_tol = 1e-8;
	bool zero_t_as_small_t = false;
	double small_t = 1e-8;
	std::uint64_t seed = 0;

	[[nodiscard]] int n_sites() const { return model == ModelKind::ring ? m : 2 * n; }

	[[nodiscard]] bool wants(Observable o) const { return observables.count(o) != 0; }

	/// Coupling graph at one value of J / J0. For rings, J / J0 sets the ring coupling.
	[[nodiscard]] CouplingGraph graph_at(double j_ratio) const
	{
		if(model == ModelKind::ring) {
			return ring_graph(m, j_ratio * j0, delta);
		}
		ModelParams p;
		p.n_dimers = n;
		p.j0 = j0;
		p.delta0 = delta0;
		p.j = j_ratio * j0;
		p.delta = delta;
		return polygon_dimer_graph(p);
	}
};

inline void validate(const SweepConfig& c)
{
	if(c.model == ModelKind::polygon_dimer && c.n < 1) throw ConfigError("n", "must be >= 1");
	if(c.model == ModelKind::ring && c.m < 3) throw ConfigError("m", "must be >= 3");
	if(!(c.j0 > 0.0)) throw ConfigError("j0", "must be > 0");
	for(const auto& [name, g] : {std::pair{"j_over_j0", c.j_over_j0}, std::pair{"t", c.t}}) {
		if(g.steps < 1) throw ConfigError(name, "steps must be >= 1");
		if(!(g.min <= g.max)) throw ConfigError(name, "min must be <= max");
		if(!std::isfinite(g.min) || !std::isfinite(g.max)) throw ConfigError(name, "bounds must be finite");
	}
	if(c.t.min < 0.0) throw ConfigError("t", "temperatures must be >= 0");
	if(c.pairs.empty()) throw ConfigError("pairs", "at least one site pair is required");
	check_capacity(c.n_sites());
	for(const SitePair& p : c.pairs) {
		if(p.i < 0 || p.j < 0 || p.i >= c.n_sites() || p.j >= c.n_sites() || p.i == p.j) {
			throw ConfigError("pairs", "pair (" + std::to_string(p.i) + ", " + std::to_string(p.j)
			                               + ") is invalid for " + std::to_string(c.n_sites()) + " sites");
		}
	}
	if(c.energies_lowest_k < 1 || c.energies_lowest_k > (1 << c.n_sites())) {
		throw ConfigError("energies_lowest_k", "must be between 1 and the Hilbert space dimension");
	}
	if(!(c.degeneracy_tol > 0.0)) throw ConfigError("degeneracy_tol", "must be > 0");
	if(!(c.gap_tol > 0.0)) throw ConfigError("gap_tol", "must be > 0");
	if(!(c.small_t > 0.0)) throw ConfigError("small_t", "must be > 0");
}

namespace detail {

inline Grid parse_grid(const nlohmann::json& js, const char* field)
{
	if(js.is_number()) {
		const double v = js.get<double>();
		return {v, v, 1};
	}
	if(!js.is_object()) throw ConfigError(field, "expected a number or {min, max, steps}");
	for(const auto& [key, _] : js.items()) {
		if(key != "min" && key != "max" && key != "steps") {
			throw ConfigError(field, "unknown grid key '" + key + "'");
		}
	}
	Grid g;
	g.min = js.at("min").get<double>();
	g.max = js.value("max", g.min);
	g.steps = js.value("steps", 1);
	return g;
}

inline nlohmann::json grid_json(const Grid& g)
{
	return {{"min", g.min}, {"max", g.max}, {"steps", g.steps}};
}

} // namespace detail

/// Parse a JSON sweep configuration. Keys follow SweepConfig field names;
/// unknown keys are rejected. Throws ConfigError naming the offending field,
/// or CapacityError for systems beyond the dense limit.
inline SweepConfig parse_config(const nlohmann::json& js)
{
	if(!js.is_object()) throw ConfigError("<root>", "configuration must be a JSON object");
	static const std::set<std::string> known{
		"model", "n", "m", "j0", "delta0", "delta", "j_over_j0", "t", "pairs", "observables",
		"energies_lowest_k", "degeneracy_tol", "gap_tol", "zero_t_as_small_t", "small_t", "seed"};
	for(const auto& [key, _] : js.items()) {
		if(!known.count(key)) throw ConfigError(key, "unknown configuration key");
	}

	SweepConfig c;
	std::string field;
	try {
		field = "model";
		if(js.contains(field)) {
			const auto name = js.at(field).get<std::string>();
			if(name == "polygon_dimer") c.model = ModelKind::polygon_dimer;
			else if(name == "ring") c.model = ModelKind::ring;
			else throw ConfigError(field, "expected polygon_dimer or ring, got '" + name + "'");
		}
		field = "n";
		c.n = js.value(field, c.n);
		field = "m";
		c.m = js.value(field, c.m);
		field = "j0";
		c.j0 = js.value(field, c.j0);
		field = "delta0";
		c.delta0 = js.value(field, c.delta0);
		field = "delta";
		c.delta = js.value(field, c.delta);
		field = "j_over_j0";
		if(js.contains(field)) c.j_over_j0 = detail::parse_grid(js.at(field), "j_over_j0");
		field = "t";
		if(js.contains(field)) c.t = detail::parse_grid(js.at(field), "t");
		field = "pairs";
		if(js.contains(field)) {
			c.pairs.clear();
			for(const auto& p : js.at(field)) {
				if(!p.is_array() || p.size() != 2) throw ConfigError(field, "each pair must be [i, j]");
				c.pairs.push_back({p[0].get<int>(), p[1].get<int>()});
			}
		} else if(c.model == ModelKind::ring || c.n < 2) {
			c.pairs = {{0, 1}};
		} else {
			c.pairs = {{0, 1}, {0, c.n}};
		}
		field = "observables";
		if(js.contains(field)) {
			c.observables.clear();
			for(const auto& o : js.at(field)) c.observables.insert(parse_observable(o.get<std::string>()));
		}
		field = "energies_lowest_k";
		c.energies_lowest_k = js.value(field, c.energies_lowest_k);
		field = "degeneracy_tol";
		c.degeneracy_tol = js.value(field, c.degeneracy_tol);
		field = "gap_tol";
		c.gap_tol = js.value(field, c.gap_tol);
		field = "zero_t_as_small_t";
		c.zero_t_as_small_t = js.value(field, c.zero_t_as_small_t);
		field = "small_t";
		c.small_t = js.value(field, c.small_t);
		field = "seed";
		c.seed = js.value(field, c.seed);
	} catch(const nlohmann::json::exception& ex) {
		throw ConfigError(field, ex.what());
	}
	validate(c);
	return c;
}

inline nlohmann::json config_json(const SweepConfig& c)
{
	nlohmann::json js;
	js["model"] = c.model == ModelKind::ring ? "ring" : "polygon_dimer";
	if(c.model == ModelKind::ring) js["m"] = c.m;
	else js["n"] = c.n;
	js["j0"] = c.j0;
	js["delta0"] = c.delta0;
	js["delta"] = c.delta;
	js["j_over_j0"] = detail::grid_json(c.j_over_j0);
	js["t"] = detail::grid_json(c.t);
	js["pairs"] = nlohmann::json::array();
	for(const SitePair& p : c.pairs) js["pairs"].push_back({p.i, p.j});
	js["observables"] = nlohmann::json::array();
	for(Observable o : c.observables) js["observables"].push_back(observable_name(o));
	js["energies_lowest_k"] = c.energies_lowest_k;
	js["degeneracy_tol"] = c.degeneracy_tol;
	js["gap_tol"] = c.gap_tol;
	js["zero_t_as_small_t"] = c.zero_t_as_small_t;
	js["small_t"] = c.small_t;
	js["seed"] = c.seed;
	return js;
}

/// One output record: a grid point and a site pair. Unrequested observables stay empty.
struct SweepRow
{
	double t = 0.0;
	double j_over_j0 = 0.0;
	int pair_i = 0;
	int pair_j = 0;
	std::optional<double> b_horodecki;
	std::optional<double> b_formula;
	std::optional<double> sxx;
	std::optional<double> szz;
	std::vector<double> energies; // lowest levels in units of j0
	std::optional<double> monogamy_slack; // min over k of 8 - B^2(ij) - B^2(jk)
	std::optional<int> crossing;          // 1 if a level crossing is assigned to this grid point

	bool operator==(const SweepRow&) const = default;
};

struct SweepMetadata
{
	nlohmann::json config;
	std::string version = kVersion;
	double wall_time_seconds = 0.0;
	int threads = 1;
	/// Level crossings along the J / J0 grid: position and bracketing interval.
	nlohmann::json crossings = nlohmann::json::array();
};

struct SweepResult
{
	std::vector<std::string> columns;
	std::vector<SweepRow> rows;
	SweepMetadata metadata;
};

/// Output columns, in the fixed order used by every emitter.
inline std::vector<std::string> sweep_columns(const SweepConfig& c)
{
	std::vector<std::string> cols{"t", "j_over_j0", "pair_i", "pair_j"};
	if(c.wants(Observable::b_horodecki)) cols.emplace_back("b_horodecki");
	if(c.wants(Observable::b_formula)) cols.emplace_back("b_formula");
	if(c.wants(Observable::correlators_xx_zz)) {
		cols.emplace_back("sxx");
		cols.emplace_back("szz");
	}
	if(c.wants(Observable::energies_lowest_k)) {
		for(int k = 0; k < c.energies_lowest_k; ++k) cols.push_back("e" + std::to_string(k));
	}
	if(c.wants(Observable::monogamy_slacks)) cols.emplace_back("monogamy_slack");
	if(c.wants(Observable::crossings)) cols.emplace_back("crossing");
	return cols;
}

/// Thread count from BELLPOLY_THREADS, defaulting to hardware concurrency.
inline int default_threads()
{
	if(const char* env = std::getenv("BELLPOLY_THREADS")) {
		char* end = nullptr;
		const long v = std::strtol(env, &end, 10);
		if(end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
		throw ConfigError("BELLPOLY_THREADS", "must be a positive integer");
	}
	return std::max(1u, std::thread::hardware_concurrency());
}

/// Everything computed at one J / J0 value, for every temperature.
struct ColumnResult
{
	double e0 = 0.0;
	double e1 = 0.0;
	std::vector<std::vector<SweepRow>> rows_by_t; // [t index][pair index]
};

/// State used for a requested temperature (in units of j0).
inline DensityMatrix state_at(const SweepConfig& c, const Spectrum& spec, double t)
{
	if(t == 0.0) {
		if(c.zero_t_as_small_t) return gibbs_state(spec, c.small_t * c.j0);
		return ground_state(spec, c.degeneracy_tol * c.j0);
	}
	return gibbs_state(spec, t * c.j0);
}

inline ColumnResult evaluate_column(const SweepConfig& c, double j_ratio, const std::vector<double>& temps)
{
	const Spectrum spec = eigendecompose(build_hamiltonian(c.graph_at(j_ratio)));
	ColumnResult out;
	out.e0 = spec.eigenvalues(0) / c.j0;
	out.e1 = spec.size() > 1 ? spec.eigenvalues(1) / c.j0 : out.e0;

	for(double t : temps) {
		const DensityMatrix state = state_at(c, spec, t);
		std::optional<PairReports> all;
		if(c.wants(Observable::monogamy_slacks)) all = all_pair_reports(state);

		std::vector<SweepRow> rows;
		for(const SitePair& p : c.pairs) {
			SweepRow row;
			row.t = t;
			row.j_over_j0 = j_ratio;
			row.pair_i = p.i;
			row.pair_j = p.j;
			const TwoQubitState rdm = partial_trace(state, p);
			const BellReport report = horodecki_b(rdm);
			if(report.b > kTsirelson + 1e-9) {
				throw NumericalError("violation measure " + std::to_string(report.b)
				                     + " exceeds the Tsirelson bound");
			}
			if(c.wants(Observable::b_horodecki)) row.b_horodecki = report.b;
			const double sxx = correlation(rdm, Axis::x, Axis::x);
			const double szz = correlation(rdm, Axis::z, Axis::z);
			if(c.wants(Observable::b_formula)) row.b_formula = model_b_formula(sxx, szz);
			if(c.wants(Observable::correlators_xx_zz)) {
				row.sxx = sxx;
				row.szz = szz;
			}
			if(c.wants(Observable::energies_lowest_k)) {
				for(int k = 0; k < c.energies_lowest_k; ++k) row.energies.push_back(spec.eigenvalues(k) / c.j0);
			}
			if(all) {
				double slack = 8.0;
				const double bij = report.b;
				for(int k = 0; k < state.n_sites; ++k) {
					if(k == p.i || k == p.j) continue;
					const double bjk = all->at({std::min(p.j, k), std::max(p.j, k)}).b;
					slack = std::min(slack, 8.0 - bij * bij - bjk * bjk);
				}
				if(slack < -kMonogamyTolerance) {
					throw NumericalError("monogamy slack " + std::to_string(slack) + " below -1e-8");
				}
				row.monogamy_slack = slack;
			}
			if(c.wants(Observable::crossings)) row.crossing = 0;
			rows.push_back(std::move(row));
		}
		out.rows_by_t.push_back(std::move(rows));
	}
	return out;
}

/// Evaluate every (t, J/J0) grid point. J columns are distributed over
/// `threads` workers; rows are merged by grid index, so output does not
/// depend on scheduling.
inline SweepResult run_sweep(const SweepConfig& config, int threads = 1)
{
	validate(config);
	if(threads < 1) throw ConfigError("threads", "must be >= 1");
	const auto start = std::chrono::steady_clock::now();
	const std::vector<double> js = config.j_over_j0.points();
	const std::vector<double> ts = config.t.points();

	std::vector<ColumnResult> columns(js.size());
	std::atomic<std::size_t> next{0};
	std::exception_ptr failure;
	std::mutex failure_mutex;
	auto worker = [&] {
		for(std::size_t k = next++; k < js.size(); k = next++) {
			try {
				columns[k] = evaluate_column(config, js[k], ts);
			} catch(...) {
				std::lock_guard lock(failure_mutex);
				if(!failure) failure = std::current_exception();
				next = js.size();
			}
		}
	};
	const int n_workers = std::min<int>(threads, static_cast<int>(js.size()));
	if(n_workers <= 1) {
		worker();
	} else {
		std::vector<std::thread> pool;
		for(int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
		for(auto& th : pool) th.join();
	}
	if(failure) std::rethrow_exception(failure);

	SweepResult result;
	result.columns = sweep_columns(config);
	result.metadata.config = config_json(config);
	result.metadata.threads = n_workers;

	// Levels depend on J / J0 only, so one detection pass covers every temperature.
	std::vector<int> crossing_flags(js.size(), 0);
	if(config.wants(Observable::crossings) && js.size() >= 2) {
		CrossingOptions opts;
		opts.gap_tol = config.gap_tol;
		std::vector<LevelSample> samples;
		for(std::size_t ji = 0; ji < js.size(); ++ji) {
			samples.push_back({js[ji], columns[ji].e0, columns[ji].e1});
		}
		for(const LevelCrossing& x : detect_level_crossings(samples, opts)) {
			result.metadata.crossings.push_back(
				{{"j_over_j0", x.param}, {"lower", x.lower}, {"upper", x.upper}});
			// nearest grid point, ties to the lower one
			std::size_t best = 0;
			for(std::size_t ji = 1; ji < js.size(); ++ji) {
				if(std::abs(js[ji] - x.param) < std::abs(js[best] - x.param)) best = ji;
			}
			crossing_flags[best] = 1;
		}
	}

	for(std::size_t ti = 0; ti < ts.size(); ++ti) {
		for(std::size_t ji = 0; ji < js.size(); ++ji) {
			for(SweepRow& row : columns[ji].rows_by_t[ti]) {
				if(row.crossing) row.crossing = crossing_flags[ji];
				result.rows.push_back(std::move(row));
			}
		}
	}
	result.metadata.wall_time_seconds =
		std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
	return result;
}

} // namespace bellpoly
