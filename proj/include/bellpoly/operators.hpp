#pragma once

#include "errors.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

// Basis convention used throughout the library:
//   site 0 is the most significant tensor factor, so basis index b carries
//   the state of site i in bit (n - 1 - i); bit value 0 is |up>, 1 is |down>.

namespace bellpoly {

using Complex = std::complex<double>;
using LocalOperator = Eigen::Matrix2cd;

/// Largest site count the dense representation accepts.
inline constexpr int kMaxSites = 12;

enum class Axis { x = 0, y = 1, z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};

inline Axis parse_axis(std::string_view name)
{
	if(name == "x" || name == "X") return Axis::x;
	if(name == "y" || name == "Y") return Axis::y;
	if(name == "z" || name == "Z") return Axis::z;
	throw InputError("invalid axis '" + std::string(name) + "', expected x, y or z");
}

inline Axis axis_from_index(int index)
{
	if(index < 0 || index > 2) {
		throw InputError("invalid axis index " + std::to_string(index));
	}
	return static_cast<Axis>(index);
}

inline char axis_name(Axis a)
{
	return "xyz"[static_cast<int>(a)];
}

inline LocalOperator pauli(Axis axis)
{
	const Complex i{0.0, 1.0};
	LocalOperator m;
	switch(axis) {
	case Axis::x: m << 0.0, 1.0, 1.0, 0.0; break;
	case Axis::y: m << 0.0, -i, i, 0.0; break;
	case Axis::z: m << 1.0, 0.0, 0.0, -1.0; break;
	default: throw InputError("invalid axis");
	}
	return m;
}

/// Spin-1/2 operator S^a = sigma^a / 2.
inline LocalOperator spin(Axis axis)
{
	return 0.5 * pauli(axis);
}

/// Dense operator on the 2^n dimensional space of n spin-1/2 sites.
struct ManyBodyOperator
{
	int n_sites = 0;
	Eigen::MatrixXcd matrix;

	[[nodiscard]] Eigen::Index dim() const { return matrix.rows(); }
};

inline void check_capacity(int n_sites)
{
	if(n_sites < 1) {
		throw InputError("site count must be positive, got " + std::to_string(n_sites));
	}
	if(n_sites > kMaxSites) {
		throw CapacityError("system of " + std::to_string(n_sites)
		                    + " sites exceeds the dense capacity limit of "
		                    + std::to_string(kMaxSites) + " sites");
	}
}

inline void check_site(int n_sites, int site)
{
	if(site < 0 || site >= n_sites) {
		throw InputError("site index " + std::to_string(site) + " out of range [0, "
		                 + std::to_string(n_sites) + ")");
	}
}

/// Bit position of `site` inside a basis index.
inline int site_bit(int n_sites, int site)
{
	return n_sites - 1 - site;
}

/// Maximum entrywise |A - A^dagger|.
template<typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& a)
{
	return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// I x ... x op x ... x I with `op` in tensor slot `site`.
inline ManyBodyOperator site_embed(int n_sites, int site, const LocalOperator& op)
{
	check_capacity(n_sites);
	check_site(n_sites, site);
	const Eigen::Index left = Eigen::Index{1} << site;
	const Eigen::Index right = Eigen::Index{1} << (n_sites - 1 - site);
	const Eigen::Index dim = Eigen::Index{1} << n_sites;

	ManyBodyOperator out{n_sites, Eigen::MatrixXcd::Zero(dim, dim)};
	// index = (l * 2 + s) * right + r
	for(Eigen::Index l = 0; l < left; ++l) {
		for(int s = 0; s < 2; ++s) {
			for(int t = 0; t < 2; ++t) {
				const Complex v = op(s, t);
				if(v == Complex{}) continue;
				for(Eigen::Index r = 0; r < right; ++r) {
					out.matrix((l * 2 + s) * right + r, (l * 2 + t) * right + r) = v;
				}
			}
		}
	}
	return out;
}

/// coeff * S_i^a S_j^a on n sites.
inline ManyBodyOperator two_site_term(int n_sites, int i, int j, Axis axis, double coeff)
{
	check_capacity(n_sites);
	check_site(n_sites, i);
	check_site(n_sites, j);
	if(i == j) {
		throw InputError("two_site_term requires distinct sites, got i = j = " + std::to_string(i));
	}
	const LocalOperator s = spin(axis);
	ManyBodyOperator out{n_sites, coeff * site_embed(n_sites, i, s).matrix};
	out.matrix = out.matrix * site_embed(n_sites, j, s).matrix;
	return out;
}

/// a (x) b for single-site operators, `a` acting on the first factor.
inline Eigen::Matrix4cd kron(const LocalOperator& a, const LocalOperator& b)
{
	Eigen::Matrix4cd out;
	for(int r = 0; r < 2; ++r) {
		for(int c = 0; c < 2; ++c) {
			out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
		}
	}
	return out;
}

/// Action of a single Pauli matrix on one basis bit: sigma|s> = phase |s'>.
struct PauliAction
{
	int flip;      // 1 if the bit is flipped
	Complex phase; // amplitude of the image state
};

inline PauliAction pauli_action(Axis axis, int bit)
{
	switch(axis) {
	case Axis::x: return {1, 1.0};
	case Axis::y: return {1, bit == 0 ? Complex{0.0, 1.0} : Complex{0.0, -1.0}};
	case Axis::z: return {0, bit == 0 ? 1.0 : -1.0};
	}
	throw InputError("invalid axis");
}

/// Total magnetization S^z_total = sum_i S^z_i (diagonal).
inline ManyBodyOperator total_sz(int n_sites)
{
	check_capacity(n_sites);
	const Eigen::Index dim = Eigen::Index{1} << n_sites;
	ManyBodyOperator out{n_sites, Eigen::MatrixXcd::Zero(dim, dim)};
	for(Eigen::Index b = 0; b < dim; ++b) {
		int up = 0;
		for(int s = 0; s < n_sites; ++s) {
			up += ((b >> site_bit(n_sites, s)) & 1) == 0 ? 1 : 0;
		}
		out.matrix(b, b) = 0.5 * (2 * up - n_sites);
	}
	return out;
}

} // namespace bellpoly
