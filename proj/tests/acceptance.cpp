// Acceptance suite: reproduces the headline numbers of the polygon-dimer
// study end to end and prints one PASS/FAIL line per criterion.

#include "test_support.hpp"

#include <bellpoly/bellpoly.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace bellpoly;

namespace {

struct Outcome
{
	bool pass = false;
	std::string detail;
};

int g_failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body)
{
	const auto start = std::chrono::steady_clock::now();
	Outcome out;
	try {
		out = body();
	} catch(const std::exception& e) {
		out = {false, std::string("exception: ") + e.what()};
	}
	const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
	std::printf("[%s] %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str(), secs);
	std::fflush(stdout);
	if(!out.pass) ++g_failures;
}

std::string fmt(double v)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.6g", v);
	return buf;
}

SweepConfig config_file(const std::string& name)
{
	return parse_config(read_json(std::string(BELLPOLY_CONFIG_DIR) + "/" + name));
}

std::vector<const SweepRow*> rows_for(const SweepResult& r, SitePair p)
{
	std::vector<const SweepRow*> out;
	for(const auto& row : r.rows) {
		if(row.pair_i == p.i && row.pair_j == p.j) out.push_back(&row);
	}
	return out;
}

/// Largest monogamy violation over every ordered triple at every grid point of a config.
double worst_monogamy_slack(const SweepConfig& c, std::size_t& triples)
{
	double worst = 8.0;
	for(double j : c.j_over_j0.points()) {
		const Spectrum spec = eigendecompose(build_hamiltonian(c.graph_at(j)));
		for(double t : c.t.points()) {
			const DensityMatrix state = state_at(c, spec, t);
			for(const auto& e : monogamy_audit(all_pair_reports(state), state.n_sites)) {
				worst = std::min(worst, e.slack);
				++triples;
			}
		}
	}
	return worst;
}

} // namespace

int main()
{
	const double tsirelson = kTsirelson;
	const int threads = std::max(2, default_threads());

	// Shared sweeps.
	SweepConfig square = config_file("square_dimers.json");
	SweepConfig square_low_t = square;
	square_low_t.t = {1e-4, 1e-4, 1};
	SweepConfig octagon = config_file("octagon_xx.json");
	SweepConfig ring5 = config_file("ring5.json");
	ring5.pairs = {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};

	SweepResult square_result, square_low_result, octagon_result;

	criterion("singlet maximal violation", [&] {
		const double b = horodecki_b(bellpoly::testing::singlet()).b;
		return Outcome{std::abs(b - tsirelson) < 1e-10, "B = " + format_double(b)};
	});

	criterion("square dimers: diagonal plateau at 2 sqrt 2 and its boundaries", [&] {
		square_low_result = run_sweep(square_low_t, threads);
		const auto rows = rows_for(square_low_result, {0, 2});
		std::ostringstream detail;
		bool ok = true;
		for(double target : {-1.9, -1.0, 0.0, 0.9}) {
			const SweepRow* hit = nullptr;
			for(const SweepRow* r : rows) {
				if(std::abs(r->j_over_j0 - target) < 1e-9) hit = r;
			}
			if(!hit) {
				SweepConfig one = square_low_t;
				one.j_over_j0 = {target, target, 1};
				one.pairs = {{0, 2}};
				const auto r = run_sweep(one, 1);
				ok = ok && std::abs(*r.rows[0].b_horodecki - tsirelson) < 1e-3;
				detail << "B(" << target << ")=" << fmt(*r.rows[0].b_horodecki) << " ";
			} else {
				ok = ok && std::abs(*hit->b_horodecki - tsirelson) < 1e-3;
				detail << "B(" << target << ")=" << fmt(*hit->b_horodecki) << " ";
			}
		}
		// boundaries of {B >= 2 sqrt 2 - 1e-3}
		const double eps = 1e-3;
		std::vector<double> edges;
		for(std::size_t k = 1; k < rows.size(); ++k) {
			const bool a = *rows[k - 1]->b_horodecki >= tsirelson - eps;
			const bool b = *rows[k]->b_horodecki >= tsirelson - eps;
			if(a != b) edges.push_back(0.5 * (rows[k - 1]->j_over_j0 + rows[k]->j_over_j0));
		}
		ok = ok && edges.size() == 2 && std::abs(edges[0] + 2.0) <= 0.05 && std::abs(edges[1] - 1.0) <= 0.05;
		detail << "boundaries:";
		for(double e : edges) detail << " " << fmt(e);
		return Outcome{ok, detail.str()};
	});

	criterion("square dimers: nearest neighbours never violate", [&] {
		square_result = run_sweep(square, threads);
		double worst = 0.0;
		std::size_t n = 0;
		for(const SweepRow* r : rows_for(square_result, {0, 1})) {
			worst = std::max(worst, *r->b_horodecki);
			++n;
		}
		return Outcome{n == 121u * 61u && worst <= 2.0 + 1e-8,
		               std::to_string(n) + " grid points, max B_01 = " + format_double(worst)};
	});

	criterion("thermal cutoff near T = 0.43", [&] {
		auto max_b = [&](double t) {
			SweepConfig c = square;
			c.t = {t, t, 1};
			c.pairs = {{0, 2}};
			double worst = 0.0;
			for(const auto& r : run_sweep(c, threads).rows) worst = std::max(worst, *r.b_horodecki);
			return worst;
		};
		const double hot = max_b(0.45);
		const double warm = max_b(0.40);
		return Outcome{hot <= 2.0 + 1e-8 && warm > 2.0,
		               "max B_02(T=0.45) = " + fmt(hot) + ", max B_02(T=0.40) = " + fmt(warm)};
	});

	criterion("odd ring never violates and always has a third site", [&] {
		const Spectrum spec = eigendecompose(build_hamiltonian(ring5.graph_at(1.0)));
		const DensityMatrix state = ground_state(spec, ring5.degeneracy_tol);
		double worst = 0.0;
		int witnessed = 0, pairs = 0;
		for(int i = 0; i < 5; ++i) {
			for(int j = 0; j < 5; ++j) {
				if(i == j) continue;
				++pairs;
				worst = std::max(worst, horodecki_b(partial_trace(state, {i, j})).b);
				witnessed += rdm_equality_witness(state, i, j) ? 1 : 0;
			}
		}
		return Outcome{worst <= 2.0 + 1e-8 && witnessed == pairs,
		               "max B = " + fmt(worst) + ", witnesses " + std::to_string(witnessed) + "/"
		                   + std::to_string(pairs)};
	});

	criterion("octagon XX: level crossings and correlator ordering", [&] {
		const auto start = std::chrono::steady_clock::now();
		octagon_result = run_sweep(octagon, threads);
		const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
		const auto r12 = rows_for(octagon_result, {0, 1});
		const auto r13 = rows_for(octagon_result, {0, 2});
		const double step = (octagon.j_over_j0.max - octagon.j_over_j0.min) / (octagon.j_over_j0.steps - 1);

		// jumps between consecutive grid points
		std::vector<double> jumps;
		for(std::size_t k = 1; k < r13.size(); ++k) {
			const double d = std::max({std::abs(*r13[k]->b_horodecki - *r13[k - 1]->b_horodecki),
			                           std::abs(*r13[k]->sxx - *r13[k - 1]->sxx),
			                           std::abs(*r13[k]->szz - *r13[k - 1]->szz),
			                           std::abs(*r12[k]->sxx - *r12[k - 1]->sxx),
			                           std::abs(*r12[k]->szz - *r12[k - 1]->szz)});
			if(d > 0.05) jumps.push_back(0.5 * (r13[k]->j_over_j0 + r13[k - 1]->j_over_j0));
		}
		const auto& crossings = octagon_result.metadata.crossings;
		int matched = 0;
		std::ostringstream detail;
		detail << "crossings at";
		for(const auto& x : crossings) {
			const double p = x["j_over_j0"].get<double>();
			detail << " " << fmt(p);
			for(double j : jumps) {
				if(std::abs(j - p) <= step + 1e-12) {
					++matched;
					break;
				}
			}
		}
		const bool crossings_ok = !crossings.empty() && matched == static_cast<int>(crossings.size());

		const SweepRow& a13 = *r13.back();
		const SweepRow& a12 = *r12.back();
		const bool order = *a13.sxx > *a13.szz && *a13.szz > *a12.szz && *a12.szz > *a12.sxx;
		detail << "; " << matched << " matched to " << jumps.size() << " jumps; at J/J0=" << a13.j_over_j0
		       << ": " << fmt(*a13.sxx) << " > " << fmt(*a13.szz) << " > " << fmt(*a12.szz) << " > "
		       << fmt(*a12.sxx) << "; sweep " << fmt(secs) << " s";
		return Outcome{crossings_ok && order && secs < 300.0 && octagon.j_over_j0.steps >= 200, detail.str()};
	});

	criterion("CHSH oracle agrees with the Horodecki formula", [&] {
		std::mt19937_64 rng(20240601);
		double worst = 0.0;
		for(int k = 0; k < 100; ++k) {
			const TwoQubitState s{{0, 1}, bellpoly::testing::random_mixed_state(rng, 4)};
			worst = std::max(worst, std::abs(chsh_oracle(s, 50, 7000 + k) - horodecki_b(s).b));
		}
		return Outcome{worst < 1e-4, "max |oracle - B| over 100 states = " + format_double(worst)};
	});

	criterion("closed-form B equals Horodecki B on every sweep RDM", [&] {
		double worst = 0.0;
		std::size_t n = 0;
		for(const SweepResult* r : {&square_result, &square_low_result, &octagon_result}) {
			for(const auto& row : r->rows) {
				worst = std::max(worst, std::abs(*row.b_formula - *row.b_horodecki));
				++n;
			}
		}
		return Outcome{n > 0 && worst < 1e-8, std::to_string(n) + " RDMs, max diff = " + format_double(worst)};
	});

	criterion("monogamy of B^2 on random states and all model triples", [&] {
		std::mt19937_64 rng(777);
		double worst_random = 8.0;
		for(int k = 0; k < 1000; ++k) {
			const DensityMatrix d = bellpoly::testing::pure_density(3, bellpoly::testing::random_pure_vector(rng, 8));
			for(const auto& e : monogamy_audit(all_pair_reports(d), 3)) worst_random = std::min(worst_random, e.slack);
		}
		std::size_t triples = 0;
		double worst_model = 8.0;
		for(const SweepConfig* c : {&square, &octagon, &ring5}) {
			worst_model = std::min(worst_model, worst_monogamy_slack(*c, triples));
		}
		return Outcome{worst_random >= -1e-8 && worst_model >= -1e-8,
		               "min slack random = " + format_double(worst_random) + ", model = "
		                   + format_double(worst_model) + " over " + std::to_string(triples) + " triples"};
	});

	criterion("determinism: repeated and concurrent runs are byte-identical", [&] {
		bool ok = true;
		std::ostringstream detail;
		for(const auto& [name, c] : {std::pair{"square", square}, std::pair{"octagon", octagon}, std::pair{"ring5", ring5}}) {
			const std::string a = to_csv(run_sweep(c, 1));
			const std::string b = to_csv(run_sweep(c, 1));
			const std::string p = to_csv(run_sweep(c, threads));
			const bool same = a == b && a == p;
			ok = ok && same;
			detail << name << (same ? " identical " : " DIFFERS ");
		}
		detail << "(serial vs " << threads << " threads)";
		return Outcome{ok, detail.str()};
	});

	std::printf("%d criteria failed\n", g_failures);
	return g_failures == 0 ? 0 : 1;
}
