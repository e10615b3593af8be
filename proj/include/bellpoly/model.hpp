#pragma once

#include "errors.hpp"
#include "operators.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bellpoly {

/// One XXZ bond: J (S^x S^x + S^y S^y + delta S^z S^z) between sites i and j.
struct Edge
{
	int i = 0;
	int j = 0;
	double coupling = 0.0;
	double anisotropy = 0.0;

	bool operator==(const Edge&) const = default;
};

struct CouplingGraph
{
	int n_sites = 0;
	std::vector<Edge> edges;

	bool operator==(const CouplingGraph&) const = default;
};

/// Parameters of the polygon-dimer model. Energies are raw (not divided by j0).
struct ModelParams
{
	int n_dimers = 1;
	double j0 = 1.0;
	double delta0 = 1.0;
	double j = 0.0;
	double delta = 1.0;
	double temperature = 0.0;

	[[nodiscard]] int n_sites() const { return 2 * n_dimers; }

	/// Non-fatal conditions worth reporting to the user.
	[[nodiscard]] std::vector<std::string> warnings() const
	{
		std::vector<std::string> out;
		if(delta0 <= -1.0) {
			out.emplace_back("delta0 <= -1: the isolated dimer ground state is no longer the singlet");
		}
		return out;
	}
};

inline void validate_params(const ModelParams& p)
{
	if(p.n_dimers < 1) {
		throw InputError("number of dimers must be >= 1, got " + std::to_string(p.n_dimers));
	}
	if(!(p.j0 > 0.0)) {
		throw InputError("dimer coupling j0 must be > 0");
	}
	if(p.temperature < 0.0) {
		throw InputError("temperature must be >= 0");
	}
}

/// Throws InputError if endpoints are out of range, an edge is a self-loop,
/// or an unordered pair repeats. `allow_pair_repeat` admits the N = 1
/// polygon-dimer graph, whose diagonal and side bonds share a pair.
inline void validate_graph(const CouplingGraph& g, bool allow_pair_repeat = false)
{
	if(g.n_sites < 1) {
		throw InputError("graph must have at least one site");
	}
	std::set<std::pair<int, int>> seen;
	for(const Edge& e : g.edges) {
		check_site(g.n_sites, e.i);
		check_site(g.n_sites, e.j);
		if(e.i == e.j) {
			throw InputError("self-loop on site " + std::to_string(e.i));
		}
		const auto key = std::minmax(e.i, e.j);
		if(!seen.insert(key).second && !allow_pair_repeat) {
			throw InputError("duplicate edge between sites " + std::to_string(key.first) + " and "
			                 + std::to_string(key.second));
		}
	}
}

/// 2N sites around a regular polygon: diagonals (i, i+N) carry (j0, delta0),
/// sides (i, i+1 mod 2N) carry (j, delta). For N = 1 both bonds sit on (0, 1).
inline CouplingGraph polygon_dimer_graph(const ModelParams& p)
{
	if(p.n_dimers < 1) {
		throw InputError("polygon_dimer_graph requires N >= 1, got " + std::to_string(p.n_dimers));
	}
	const int n = p.n_sites();
	CouplingGraph g{n, {}};
	for(int i = 0; i < p.n_dimers; ++i) {
		g.edges.push_back({i, i + p.n_dimers, p.j0, p.delta0});
	}
	if(p.n_dimers == 1) {
		g.edges.push_back({0, 1, p.j, p.delta});
		return g;
	}
	for(int i = 0; i < n; ++i) {
		g.edges.push_back({i, (i + 1) % n, p.j, p.delta});
	}
	return g;
}

inline CouplingGraph ring_graph(int m, double coupling, double anisotropy)
{
	if(m < 3) {
		throw InputError("ring_graph requires at least 3 sites, got " + std::to_string(m));
	}
	CouplingGraph g{m, {}};
	for(int i = 0; i < m; ++i) {
		g.edges.push_back({i, (i + 1) % m, coupling, anisotropy});
	}
	return g;
}

/// H = sum_e J_e (S^x S^x + S^y S^y + delta_e S^z S^z), assembled directly in
/// the computational basis.
inline ManyBodyOperator build_hamiltonian(const CouplingGraph& g)
{
	check_capacity(g.n_sites);
	validate_graph(g, /*allow_pair_repeat=*/true);
	const int n = g.n_sites;
	const Eigen::Index dim = Eigen::Index{1} << n;
	ManyBodyOperator h{n, Eigen::MatrixXcd::Zero(dim, dim)};
	for(const Edge& e : g.edges) {
		const int bi = site_bit(n, e.i);
		const int bj = site_bit(n, e.j);
		const Eigen::Index mask = (Eigen::Index{1} << bi) | (Eigen::Index{1} << bj);
		for(Eigen::Index b = 0; b < dim; ++b) {
			const bool aligned = ((b >> bi) & 1) == ((b >> bj) & 1);
			h.matrix(b, b) += 0.25 * e.coupling * e.anisotropy * (aligned ? 1.0 : -1.0);
			if(!aligned) {
				h.matrix(b ^ mask, b) += 0.5 * e.coupling;
			}
		}
	}
	return h;
}

/// Position of a polygon site on the two-leg ladder obtained by turning
/// diagonals into rungs.
struct LadderSite
{
	int site = 0;
	int rung = 0;
	int leg = 0;

	bool operator==(const LadderSite&) const = default;
};

struct LadderProjection
{
	std::vector<LadderSite> sites;
	/// The two side bonds that close the polygon. On the ladder they join the
	/// last rung to the first with the legs exchanged.
	std::vector<std::pair<LadderSite, LadderSite>> twisted_boundary;
};

inline LadderProjection ladder_projection(const ModelParams& p)
{
	if(p.n_dimers < 2) {
		throw InputError("ladder_projection requires N >= 2, got " + std::to_string(p.n_dimers));
	}
	const int n = p.n_dimers;
	LadderProjection out;
	for(int s = 0; s < 2 * n; ++s) {
		out.sites.push_back({s, s % n, s / n});
	}
	// side (N-1, N) and side (2N-1, 0)
	out.twisted_boundary.emplace_back(out.sites[n - 1], out.sites[n]);
	out.twisted_boundary.emplace_back(out.sites[2 * n - 1], out.sites[0]);
	return out;
}

// JSON form: {"n_sites": n, "edges": [[i, j, J, Delta], ...]}

inline void to_json(nlohmann::json& js, const CouplingGraph& g)
{
	js = nlohmann::json::object();
	js["n_sites"] = g.n_sites;
	js["edges"] = nlohmann::json::array();
	for(const Edge& e : g.edges) {
		js["edges"].push_back({e.i, e.j, e.coupling, e.anisotropy});
	}
}

inline void from_json(const nlohmann::json& js, CouplingGraph& g)
{
	try {
		g.n_sites = js.at("n_sites").get<int>();
		g.edges.clear();
		for(const auto& row : js.at("edges")) {
			if(!row.is_array() || row.size() != 4) {
				throw InputError("graph edge must be [i, j, J, Delta]");
			}
			g.edges.push_back(
				{row[0].get<int>(), row[1].get<int>(), row[2].get<double>(), row[3].get<double>()});
		}
	} catch(const nlohmann::json::exception& ex) {
		throw InputError(std::string("malformed graph JSON: ") + ex.what());
	}
	validate_graph(g, /*allow_pair_repeat=*/true);
}

} // namespace bellpoly
