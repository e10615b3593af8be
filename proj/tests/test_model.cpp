#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

using namespace bellpoly;
using bellpoly::testing::max_abs;
using bellpoly::testing::reference_hamiltonian;

namespace {

ModelParams polygon(int n, double j, double delta = 1.0, double j0 = 1.0, double delta0 = 1.0)
{
	ModelParams p;
	p.n_dimers = n;
	p.j0 = j0;
	p.delta0 = delta0;
	p.j = j;
	p.delta = delta;
	return p;
}

std::set<std::pair<int, int>> unordered_pairs(const CouplingGraph& g, double coupling)
{
	std::set<std::pair<int, int>> out;
	for(const Edge& e : g.edges) {
		if(e.coupling == coupling) out.insert(std::minmax(e.i, e.j));
	}
	return out;
}

Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXcd& m)
{
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
	return es.eigenvalues();
}

} // namespace

TEST_CASE("polygon_dimer_graph edge sets", "[model]")
{
	SECTION("square")
	{
		const auto g = polygon_dimer_graph(polygon(2, 0.3));
		CHECK(g.n_sites == 4);
		CHECK(unordered_pairs(g, 1.0) == std::set<std::pair<int, int>>{{0, 2}, {1, 3}});
		CHECK(unordered_pairs(g, 0.3) == std::set<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {0, 3}});
		CHECK(g.edges.size() == 6);
	}
	SECTION("hexagon")
	{
		const auto g = polygon_dimer_graph(polygon(3, 0.3));
		CHECK(g.n_sites == 6);
		CHECK(unordered_pairs(g, 1.0) == std::set<std::pair<int, int>>{{0, 3}, {1, 4}, {2, 5}});
		CHECK(unordered_pairs(g, 0.3)
		      == std::set<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}});
	}
	SECTION("single dimer keeps both bonds on (0, 1)")
	{
		const auto g = polygon_dimer_graph(polygon(1, 0.3));
		REQUIRE(g.edges.size() == 2);
		CHECK(g.edges[0] == Edge{0, 1, 1.0, 1.0});
		CHECK(g.edges[1] == Edge{0, 1, 0.3, 1.0});
		CHECK_THROWS_AS(validate_graph(g), InputError);
		CHECK_NOTHROW(validate_graph(g, true));
	}
	CHECK_THROWS_AS(polygon_dimer_graph(polygon(0, 0.3)), InputError);
}

TEST_CASE("polygon_dimer_graph is invariant under cyclic relabeling", "[model][property]")
{
	for(int n = 2; n <= 5; ++n) {
		const auto g = polygon_dimer_graph(polygon(n, 0.4, 0.5, 1.0, 0.8));
		auto canon = [](const CouplingGraph& graph, int shift) {
			std::set<std::tuple<int, int, double, double>> out;
			for(const Edge& e : graph.edges) {
				const int a = (e.i + shift) % graph.n_sites;
				const int b = (e.j + shift) % graph.n_sites;
				out.insert({std::min(a, b), std::max(a, b), e.coupling, e.anisotropy});
			}
			return out;
		};
		CHECK(canon(g, 1) == canon(g, 0));
	}
}

TEST_CASE("ring_graph", "[model]")
{
	CHECK(ring_graph(5, 1.0, 1.0).edges.size() == 5);
	CHECK(ring_graph(3, 1.0, 1.0).edges.size() == 3);
	CHECK(ring_graph(4, 1.0, 1.0).edges.size() == 4);
	CHECK(unordered_pairs(ring_graph(4, 1.0, 1.0), 1.0)
	      == std::set<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {0, 3}});
	CHECK_THROWS_AS(ring_graph(2, 1.0, 1.0), InputError);
}

TEST_CASE("graph validation", "[model]")
{
	CHECK_THROWS_AS(validate_graph({3, {{0, 3, 1.0, 1.0}}}), InputError);
	CHECK_THROWS_AS(validate_graph({3, {{1, 1, 1.0, 1.0}}}), InputError);
	CHECK_THROWS_AS(validate_graph({3, {{0, 1, 1.0, 1.0}, {1, 0, 2.0, 1.0}}}), InputError);
	CHECK_NOTHROW(validate_graph({3, {{0, 1, 1.0, 1.0}, {1, 2, 2.0, 1.0}}}));
}

TEST_CASE("model parameter warnings", "[model]")
{
	CHECK(polygon(2, 0.1).warnings().empty());
	CHECK(polygon(2, 0.1, 1.0, 1.0, -1.0).warnings().size() == 1);
	ModelParams bad = polygon(2, 0.1);
	bad.j0 = 0.0;
	CHECK_THROWS_AS(validate_params(bad), InputError);
}

TEST_CASE("build_hamiltonian on a single dimer", "[model]")
{
	const auto h1 = build_hamiltonian({2, {{0, 1, 1.0, 1.0}}});
	const Eigen::VectorXd ev1 = sorted_eigenvalues(h1.matrix);
	CHECK(ev1(0) == Catch::Approx(-0.75).margin(1e-14));
	const Eigen::Vector4cd s = bellpoly::testing::singlet_vector();
	CHECK(max_abs(h1.matrix * s - (-0.75) * s) < 1e-14);

	const auto h0 = build_hamiltonian({2, {{0, 1, 1.0, 0.0}}});
	CHECK(sorted_eigenvalues(h0.matrix)(0) == Catch::Approx(-0.5).margin(1e-14));

	// analytic singlet energy -J0 (2 + delta0) / 4
	for(double d0 : {-0.5, 0.3, 2.0}) {
		const auto h = build_hamiltonian({2, {{0, 1, 1.7, d0}}});
		CHECK(sorted_eigenvalues(h.matrix)(0) == Catch::Approx(-1.7 * (2 + d0) / 4).margin(1e-13));
	}
}

TEST_CASE("build_hamiltonian agrees with the Kronecker-product construction", "[model][property]")
{
	std::vector<CouplingGraph> graphs{
		polygon_dimer_graph(polygon(1, 0.3, 0.7)),
		polygon_dimer_graph(polygon(2, -0.6, 0.2, 1.3, 0.9)),
		polygon_dimer_graph(polygon(3, 0.45, -0.4)),
		ring_graph(5, 1.0, 1.0),
		{3, {{0, 2, -1.1, 0.3}}},
	};
	for(const auto& g : graphs) {
		const auto h = build_hamiltonian(g);
		CHECK(max_abs(h.matrix - reference_hamiltonian(g)) < 1e-14);

		// also equal to the sum of two_site_term contributions
		Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(h.dim(), h.dim());
		for(const Edge& e : g.edges) {
			sum += two_site_term(g.n_sites, e.i, e.j, Axis::x, e.coupling).matrix;
			sum += two_site_term(g.n_sites, e.i, e.j, Axis::y, e.coupling).matrix;
			sum += two_site_term(g.n_sites, e.i, e.j, Axis::z, e.coupling * e.anisotropy).matrix;
		}
		CHECK(max_abs(h.matrix - sum) < 1e-14);
	}
}

TEST_CASE("XXZ Hamiltonians are Hermitian and conserve magnetization", "[model][property]")
{
	std::mt19937_64 rng(11);
	std::uniform_real_distribution<double> u(-2.0, 2.0);
	for(int trial = 0; trial < 20; ++trial) {
		const int n = 2 + trial % 4;
		const auto g = polygon_dimer_graph(polygon(n, u(rng), u(rng), 0.5 + std::abs(u(rng)), u(rng)));
		const auto h = build_hamiltonian(g);
		const auto sz = total_sz(g.n_sites);
		CHECK(max_abs(h.matrix - h.matrix.adjoint()) < 1e-12);
		CHECK(max_abs(h.matrix * sz.matrix - sz.matrix * h.matrix) < 1e-12);
	}
}

TEST_CASE("decoupled dimers: J = 0 spectrum is all sums of dimer levels", "[model]")
{
	// Brute-force reference: diagonalize the Kronecker-product Hamiltonian
	// (16 x 16) and the dimer (4 x 4) independently.
	const auto g = polygon_dimer_graph(polygon(2, 0.0));
	const Eigen::VectorXd full = sorted_eigenvalues(reference_hamiltonian(g));
	CHECK(full(0) == Catch::Approx(-1.5).margin(1e-13));

	const Eigen::VectorXd dimer = sorted_eigenvalues(reference_hamiltonian({2, {{0, 1, 1.0, 1.0}}}));
	std::vector<double> sums;
	for(int a = 0; a < 4; ++a) {
		for(int b = 0; b < 4; ++b) sums.push_back(dimer(a) + dimer(b));
	}
	std::sort(sums.begin(), sums.end());
	const Eigen::VectorXd lib = sorted_eigenvalues(build_hamiltonian(g).matrix);
	for(int k = 0; k < 16; ++k) {
		CHECK(lib(k) == Catch::Approx(sums[k]).margin(1e-13));
	}
}

TEST_CASE("build_hamiltonian capacity limit", "[model]")
{
	CHECK_THROWS_AS(build_hamiltonian(ring_graph(kMaxSites + 1, 1.0, 1.0)), CapacityError);
	try {
		build_hamiltonian(ring_graph(13, 1.0, 1.0));
	} catch(const CapacityError& e) {
		CHECK(std::string(e.what()).find("12") != std::string::npos);
	}
}

TEST_CASE("ladder_projection", "[model]")
{
	const auto four = ladder_projection(polygon(4, 0.1));
	CHECK(four.sites[2] == LadderSite{2, 2, 0});
	CHECK(four.sites[6] == LadderSite{6, 2, 1});

	const auto two = ladder_projection(polygon(2, 0.1));
	REQUIRE(two.twisted_boundary.size() == 2);
	CHECK(two.twisted_boundary[0].first == LadderSite{1, 1, 0});
	CHECK(two.twisted_boundary[0].second == LadderSite{2, 0, 1});
	CHECK(two.twisted_boundary[1].first == LadderSite{3, 1, 1});
	CHECK(two.twisted_boundary[1].second == LadderSite{0, 0, 0});

	// every diagonal becomes a rung
	const auto g = polygon_dimer_graph(polygon(4, 0.1));
	for(const Edge& e : g.edges) {
		if(e.coupling != 1.0) continue;
		CHECK(four.sites[e.i].rung == four.sites[e.j].rung);
		CHECK(four.sites[e.i].leg != four.sites[e.j].leg);
	}
	CHECK_THROWS_AS(ladder_projection(polygon(1, 0.1)), InputError);
}

TEST_CASE("graph JSON round-trip", "[model]")
{
	const auto g = polygon_dimer_graph(polygon(3, -0.25, 0.5));
	nlohmann::json js;
	to_json(js, g);
	CHECK(js.at("n_sites") == 6);
	CHECK(js.at("edges").at(0) == nlohmann::json::array({0, 3, 1.0, 1.0}));
	CouplingGraph back;
	from_json(nlohmann::json::parse(js.dump()), back);
	CHECK(back == g);

	CouplingGraph bad;
	CHECK_THROWS_AS(from_json(nlohmann::json::parse(R"({"n_sites": 2, "edges": [[0, 1, 1.0]]})"), bad),
	                InputError);
	CHECK_THROWS_AS(from_json(nlohmann::json::parse(R"({"n_sites": 2, "edges": [[0, 2, 1.0, 1.0]]})"), bad),
	                InputError);
}
