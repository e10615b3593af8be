#pragma once

#include "errors.hpp"
#include "operators.hpp"
#include "reduced.hpp"
#include "spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace bellpoly {

inline const double kTsirelson = 2.0 * std::sqrt(2.0);

/// Horodecki analysis of a two-qubit state.
struct BellReport
{
	Eigen::Matrix3d correlations = Eigen::Matrix3d::Zero(); // M_ab = Tr[rho sigma_a x sigma_b]
	double lambda1 = 0.0;                                   // largest eigenvalue of M^T M
	double lambda2 = 0.0;                                   // second largest
	double b = 0.0;                                         // 2 sqrt(lambda1 + lambda2)
	bool violated = false;                                  // b > 2
};

/// M with rows indexed by the first site's Pauli axis (x, y, z) and columns
/// by the second's.
inline Eigen::Matrix3d correlation_matrix(const TwoQubitState& state)
{
	Eigen::Matrix3d m;
	for(Axis a : kAxes) {
		for(Axis b : kAxes) {
			const Complex v = (state.rho * kron(pauli(a), pauli(b))).trace();
			if(std::abs(v.imag()) > 1e-8) {
				throw NumericalError("correlation_matrix: imaginary residue "
				                     + std::to_string(v.imag()) + " exceeds 1e-8");
			}
			m(static_cast<int>(a), static_cast<int>(b)) = v.real();
		}
	}
	return m;
}

inline BellReport horodecki_b(const TwoQubitState& state)
{
	BellReport r;
	r.correlations = correlation_matrix(state);
	const Eigen::Matrix3d mtm = r.correlations.transpose() * r.correlations;
	Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(mtm, Eigen::EigenvaluesOnly);
	r.lambda1 = std::max(es.eigenvalues()(2), 0.0);
	r.lambda2 = std::max(es.eigenvalues()(1), 0.0);
	r.b = 2.0 * std::sqrt(r.lambda1 + r.lambda2);
	r.violated = r.b > 2.0;
	return r;
}

/// Closed-form violation measure for states with the polygon-dimer model's
/// symmetry (M diagonal with M_xx = M_yy):
///   B = 8 max{ sqrt(sxx^2 + szz^2), sqrt(2) |sxx| }.
inline double model_b_formula(double sxx, double szz)
{
	constexpr double bound = 0.25 + 1e-9;
	if(!(std::abs(sxx) <= bound) || !(std::abs(szz) <= bound)) {
		throw InputError("spin correlators must lie in [-1/4, 1/4]");
	}
	return 8.0 * std::max(std::hypot(sxx, szz), std::sqrt(2.0) * std::abs(sxx));
}

namespace detail {

inline LocalOperator direction_operator(const Eigen::Vector3d& v)
{
	return v(0) * pauli(Axis::x) + v(1) * pauli(Axis::y) + v(2) * pauli(Axis::z);
}

inline double expectation(const Eigen::Matrix4cd& rho, const LocalOperator& a, const LocalOperator& b)
{
	return (rho * kron(a, b)).trace().real();
}

/// Unit vector along v, or `fallback` when v vanishes.
inline Eigen::Vector3d normalized_or(const Eigen::Vector3d& v, const Eigen::Vector3d& fallback)
{
	const double n = v.norm();
	return n > 1e-300 ? Eigen::Vector3d(v / n) : fallback;
}

inline Eigen::Vector3d random_direction(std::mt19937_64& rng)
{
	std::normal_distribution<double> normal(0.0, 1.0);
	Eigen::Vector3d v;
	do {
		v = {normal(rng), normal(rng), normal(rng)};
	} while(v.norm() < 1e-12);
	return v.normalized();
}

} // namespace detail

/// Brute-force maximum of the CHSH expression
///   |<A x B> + <A x B'> + <A' x B> - <A' x B'>|
/// over spin directions, found by alternating ascent from `restarts` random
/// starting points. Works on the state directly and never forms M, so it is
/// an independent check on horodecki_b.
inline double chsh_oracle(const TwoQubitState& state, int restarts, std::uint64_t seed)
{
	if(restarts < 1) {
		throw InputError("chsh_oracle requires restarts >= 1");
	}
	using detail::direction_operator;
	using detail::expectation;
	const Eigen::Matrix4cd& rho = state.rho;

	auto chsh = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& a2, const Eigen::Vector3d& b,
	                const Eigen::Vector3d& b2) {
		const LocalOperator oa = direction_operator(a);
		const LocalOperator oa2 = direction_operator(a2);
		return expectation(rho, oa, direction_operator(b + b2))
		       + expectation(rho, oa2, direction_operator(b - b2));
	};
	// gradient of <X x B> with respect to the first-site direction
	auto first_site_field = [&](const LocalOperator& second) {
		Eigen::Vector3d g;
		for(Axis ax : kAxes) g(static_cast<int>(ax)) = expectation(rho, pauli(ax), second);
		return g;
	};
	auto second_site_field = [&](const LocalOperator& first) {
		Eigen::Vector3d g;
		for(Axis ax : kAxes) g(static_cast<int>(ax)) = expectation(rho, first, pauli(ax));
		return g;
	};

	std::mt19937_64 rng(seed);
	double best = 0.0;
	for(int r = 0; r < restarts; ++r) {
		Eigen::Vector3d a = detail::random_direction(rng);
		Eigen::Vector3d a2 = detail::random_direction(rng);
		Eigen::Vector3d b = detail::random_direction(rng);
		Eigen::Vector3d b2 = detail::random_direction(rng);
		double value = chsh(a, a2, b, b2);
		for(int it = 0; it < 2000; ++it) {
			// For fixed b, b' the optimal a aligns with the field of (b + b'), a' with (b - b').
			a = detail::normalized_or(first_site_field(direction_operator(b + b2)), a);
			a2 = detail::normalized_or(first_site_field(direction_operator(b - b2)), a2);
			// For fixed a, a' the optimal b aligns with the field of (a + a'), b' with (a - a').
			b = detail::normalized_or(second_site_field(direction_operator(a + a2)), b);
			b2 = detail::normalized_or(second_site_field(direction_operator(a - a2)), b2);
			const double next = chsh(a, a2, b, b2);
			const bool converged = next - value <= 1e-15 * std::max(1.0, std::abs(next));
			value = next;
			if(converged) break;
		}
		best = std::max(best, std::abs(value));
	}
	return best;
}

struct MonogamyEntry
{
	int i = 0;
	int j = 0;
	int k = 0;
	double slack = 0.0; // 8 - B^2(rho_ij) - B^2(rho_jk)
	bool flagged = false; // slack < -1e-8, impossible for a valid state
};

inline constexpr double kMonogamyTolerance = 1e-8;

using PairReports = std::map<SitePair, BellReport>;

/// Every ordered triple of distinct sites with its monogamy slack. B is
/// invariant under swapping the two factors, so a report for (j, i) serves (i, j).
inline std::vector<MonogamyEntry> monogamy_audit(const PairReports& reports, int n_sites)
{
	auto lookup = [&](int a, int b) -> double {
		auto it = reports.find({a, b});
		if(it == reports.end()) it = reports.find({b, a});
		if(it == reports.end()) {
			throw InputError("monogamy_audit: missing report for pair (" + std::to_string(a) + ", "
			                 + std::to_string(b) + ")");
		}
		return it->second.b;
	};
	std::vector<MonogamyEntry> out;
	for(int i = 0; i < n_sites; ++i) {
		for(int j = 0; j < n_sites; ++j) {
			if(j == i) continue;
			for(int k = 0; k < n_sites; ++k) {
				if(k == i || k == j) continue;
				const double bij = lookup(i, j);
				const double bjk = lookup(j, k);
				const double slack = 8.0 - bij * bij - bjk * bjk;
				out.push_back({i, j, k, slack, slack < -kMonogamyTolerance});
			}
		}
	}
	return out;
}

/// Reports for every unordered pair (i < j) of a state.
inline PairReports all_pair_reports(const DensityMatrix& state)
{
	PairReports out;
	for(int i = 0; i < state.n_sites; ++i) {
		for(int j = i + 1; j < state.n_sites; ++j) {
			out.emplace(SitePair{i, j}, horodecki_b(partial_trace(state, {i, j})));
		}
	}
	return out;
}

inline constexpr double kRdmEqualityTolerance = 1e-8;

/// First site k outside {i, j} with rho_(j,k) equal to rho_(i,j) in trace
/// distance, factors ordered as written. Such a k forces B(rho_ij) <= 2.
inline std::optional<int> rdm_equality_witness(const DensityMatrix& state, int i, int j)
{
	check_pair(state.n_sites, {i, j});
	const TwoQubitState target = partial_trace(state, {i, j});
	for(int k = 0; k < state.n_sites; ++k) {
		if(k == i || k == j) continue;
		const TwoQubitState other = partial_trace(state, {j, k});
		if(trace_distance(target.rho, other.rho) < kRdmEqualityTolerance) {
			return k;
		}
	}
	return std::nullopt;
}

} // namespace bellpoly
