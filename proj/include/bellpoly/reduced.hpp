#pragma once

#include "errors.hpp"
#include "operators.hpp"
#include "spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace bellpoly {

struct SitePair
{
	int i = 0;
	int j = 0;

	bool operator==(const SitePair&) const = default;
	auto operator<=>(const SitePair&) const = default;

	[[nodiscard]] SitePair swapped() const { return {j, i}; }
};

/// Two-site reduced state in the basis {|uu>, |ud>, |du>, |dd>}, with
/// `sites.i` as the first tensor factor.
struct TwoQubitState
{
	SitePair sites;
	Eigen::Matrix4cd rho;
};

inline void check_pair(int n_sites, SitePair p)
{
	check_site(n_sites, p.i);
	check_site(n_sites, p.j);
	if(p.i == p.j) {
		throw InputError("site pair must be distinct, got (" + std::to_string(p.i) + ", "
		                 + std::to_string(p.j) + ")");
	}
}

/// Throws InputError unless rho is Hermitian, unit trace and positive within tolerance.
inline void validate_state(const Eigen::Matrix4cd& rho, double tol = 1e-10)
{
	if(!rho.allFinite()) {
		throw InputError("two-qubit state has non-finite entries");
	}
	if(hermiticity_defect(rho) > tol) {
		throw InputError("two-qubit state is not Hermitian");
	}
	if(std::abs(rho.trace() - Complex{1.0}) > tol) {
		throw InputError("two-qubit state does not have unit trace");
	}
	const Eigen::Matrix4cd herm = 0.5 * (rho + rho.adjoint());
	Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(herm, Eigen::EigenvaluesOnly);
	if(es.eigenvalues().minCoeff() < -tol) {
		throw InputError("two-qubit state is not positive semidefinite");
	}
}

/// Reduced state of sites (i, j), factor order following the pair.
inline TwoQubitState partial_trace(const DensityMatrix& state, SitePair keep)
{
	const int n = state.n_sites;
	check_pair(n, keep);
	const Eigen::Index dim = Eigen::Index{1} << n;
	if(state.rho.rows() != dim || state.rho.cols() != dim) {
		throw InputError("density matrix dimension does not match its site count");
	}
	const int bi = site_bit(n, keep.i);
	const int bj = site_bit(n, keep.j);
	const Eigen::Index mask = (Eigen::Index{1} << bi) | (Eigen::Index{1} << bj);

	TwoQubitState out{keep, Eigen::Matrix4cd::Zero()};
	auto embed = [&](Eigen::Index rest, int local) {
		// local = 2 * (bit of i) + (bit of j)
		return rest | (Eigen::Index((local >> 1) & 1) << bi) | (Eigen::Index(local & 1) << bj);
	};
	for(Eigen::Index rest = 0; rest < dim; ++rest) {
		if(rest & mask) continue;
		for(int a = 0; a < 4; ++a) {
			const Eigen::Index row = embed(rest, a);
			for(int b = 0; b < 4; ++b) {
				out.rho(a, b) += state.rho(row, embed(rest, b));
			}
		}
	}
	return out;
}

/// Swap the tensor factors of a two-qubit state.
inline TwoQubitState swap_factors(const TwoQubitState& s)
{
	static const Eigen::Matrix4cd swap = [] {
		Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
		m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
		return m;
	}();
	return {s.sites.swapped(), swap * s.rho * swap};
}

namespace detail {

inline double checked_real(Complex v, const char* what)
{
	if(std::abs(v.imag()) > 1e-8) {
		throw NumericalError(std::string(what) + ": imaginary part " + std::to_string(v.imag())
		                     + " exceeds 1e-8");
	}
	return v.real();
}

} // namespace detail

/// <S_i^a S_j^b> = Tr[rho S_i^a S_j^b], evaluated directly on the global state.
inline double correlation(const DensityMatrix& state, int i, int j, Axis a, Axis b)
{
	const int n = state.n_sites;
	check_pair(n, {i, j});
	const Eigen::Index dim = Eigen::Index{1} << n;
	const int bi = site_bit(n, i);
	const int bj = site_bit(n, j);
	Complex acc{};
	// O|c> = phase(c) |f(c)>, so Tr[rho O] = sum_c rho(c, f(c)) phase(c).
	for(Eigen::Index c = 0; c < dim; ++c) {
		const PauliAction ai = pauli_action(a, static_cast<int>((c >> bi) & 1));
		const PauliAction aj = pauli_action(b, static_cast<int>((c >> bj) & 1));
		const Eigen::Index image = c ^ (Eigen::Index(ai.flip) << bi) ^ (Eigen::Index(aj.flip) << bj);
		acc += state.rho(c, image) * ai.phase * aj.phase;
	}
	return detail::checked_real(0.25 * acc, "correlation");
}

/// <S^a x S^b> on a two-qubit state.
inline double correlation(const TwoQubitState& state, Axis a, Axis b)
{
	return detail::checked_real((state.rho * kron(spin(a), spin(b))).trace(), "correlation");
}

} // namespace bellpoly
