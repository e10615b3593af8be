#pragma once

#include "errors.hpp"
#include "operators.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace bellpoly {

/// Full eigendecomposition, eigenvalues ascending, eigenvectors as columns.
struct Spectrum
{
	int n_sites = 0;
	Eigen::VectorXd eigenvalues;
	Eigen::MatrixXcd eigenvectors;

	[[nodiscard]] Eigen::Index size() const { return eigenvalues.size(); }

	[[nodiscard]] double range() const
	{
		return size() == 0 ? 0.0 : eigenvalues(size() - 1) - eigenvalues(0);
	}
};

/// Mixed or pure state on n sites.
struct DensityMatrix
{
	int n_sites = 0;
	Eigen::MatrixXcd rho;
};

/// Throws InputError when H is not Hermitian to 1e-12 relative to its largest entry.
inline Spectrum eigendecompose(const ManyBodyOperator& h)
{
	if(h.matrix.rows() != h.matrix.cols()) {
		throw InputError("eigendecompose requires a square matrix");
	}
	if(h.matrix.size() == 0) {
		throw InputError("eigendecompose requires a nonempty matrix");
	}
	const double scale = std::max(1.0, h.matrix.cwiseAbs().maxCoeff());
	if(hermiticity_defect(h.matrix) > 1e-12 * scale) {
		throw InputError("eigendecompose: matrix is not Hermitian");
	}

	Spectrum out;
	out.n_sites = h.n_sites;
	// XXZ Hamiltonians are real in the computational basis; the real solver is
	// several times faster and keeps eigenvectors real.
	if(h.matrix.imag().cwiseAbs().maxCoeff() == 0.0) {
		const Eigen::MatrixXd real = h.matrix.real();
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(real);
		if(es.info() != Eigen::Success) {
			throw NumericalError("eigendecompose: real eigensolver did not converge");
		}
		out.eigenvalues = es.eigenvalues();
		out.eigenvectors = es.eigenvectors().cast<Complex>();
	} else {
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix);
		if(es.info() != Eigen::Success) {
			throw NumericalError("eigendecompose: complex eigensolver did not converge");
		}
		out.eigenvalues = es.eigenvalues();
		out.eigenvectors = es.eigenvectors();
	}
	return out;
}

namespace detail {

inline DensityMatrix mixture(const Spectrum& spec, const Eigen::VectorXd& weights)
{
	const Eigen::Index dim = spec.eigenvectors.rows();
	DensityMatrix out{spec.n_sites, Eigen::MatrixXcd::Zero(dim, dim)};
	std::vector<Eigen::Index> used;
	for(Eigen::Index k = 0; k < weights.size(); ++k) {
		if(weights(k) > 0.0) used.push_back(k);
	}
	Eigen::MatrixXcd v(dim, static_cast<Eigen::Index>(used.size()));
	for(std::size_t c = 0; c < used.size(); ++c) {
		v.col(static_cast<Eigen::Index>(c)) = spec.eigenvectors.col(used[c]) * std::sqrt(weights(used[c]));
	}
	out.rho.noalias() = v * v.adjoint();
	return out;
}

} // namespace detail

/// Equal-weight mixture over every eigenvector within `degeneracy_tol` of the minimum.
inline DensityMatrix ground_state(const Spectrum& spec, double degeneracy_tol)
{
	if(spec.size() == 0) {
		throw InputError("ground_state requires a nonempty spectrum");
	}
	if(!(degeneracy_tol > 0.0)) {
		throw InputError("ground_state requires degeneracy_tol > 0");
	}
	const double e0 = spec.eigenvalues(0);
	Eigen::VectorXd w = Eigen::VectorXd::Zero(spec.size());
	Eigen::Index count = 0;
	for(Eigen::Index k = 0; k < spec.size() && spec.eigenvalues(k) - e0 <= degeneracy_tol; ++k) {
		w(k) = 1.0;
		++count;
	}
	w /= static_cast<double>(count);
	return detail::mixture(spec, w);
}

/// Default degeneracy window for the zero-temperature limit.
inline double zero_temperature_tol(const Spectrum& spec)
{
	return std::max(1e-10 * spec.range(), 1e-14);
}

/// Boltzmann populations exp(-(E - E0)/T) / Z. T = 0 yields the degenerate
/// ground-manifold mixture.
inline Eigen::VectorXd gibbs_weights(const Spectrum& spec, double temperature)
{
	if(temperature < 0.0 || std::isnan(temperature)) {
		throw InputError("temperature must be >= 0");
	}
	const double e0 = spec.eigenvalues(0);
	Eigen::VectorXd w(spec.size());
	if(temperature == 0.0) {
		const double tol = zero_temperature_tol(spec);
		for(Eigen::Index k = 0; k < spec.size(); ++k) {
			w(k) = spec.eigenvalues(k) - e0 <= tol ? 1.0 : 0.0;
		}
	} else {
		for(Eigen::Index k = 0; k < spec.size(); ++k) {
			w(k) = std::exp(-(spec.eigenvalues(k) - e0) / temperature);
		}
	}
	// Populations below 1e-30 of the ground weight cannot affect any reported digit.
	for(Eigen::Index k = 0; k < w.size(); ++k) {
		if(w(k) < 1e-30) w(k) = 0.0;
	}
	return w / w.sum();
}

inline DensityMatrix gibbs_state(const Spectrum& spec, double temperature)
{
	if(spec.size() == 0) {
		throw InputError("gibbs_state requires a nonempty spectrum");
	}
	if(temperature == 0.0) {
		return ground_state(spec, zero_temperature_tol(spec));
	}
	return detail::mixture(spec, gibbs_weights(spec, temperature));
}

/// Trace distance 0.5 * ||a - b||_1 between two Hermitian matrices.
template<typename A, typename B>
double trace_distance(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b)
{
	using Mat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
	const Mat diff = a - b;
	Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
	return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

/// Two lowest eigenvalues at one value of a swept parameter.
struct LevelSample
{
	double param = 0.0;
	double e0 = 0.0;
	double e1 = 0.0;
};

struct LevelCrossing
{
	double param = 0.0; // reported position
	double lower = 0.0; // bracketing interval
	double upper = 0.0;

	bool operator==(const LevelCrossing&) const = default;
};

struct CrossingOptions
{
	/// Gaps below this are treated as degenerate.
	double gap_tol = 1e-8;
	/// A V-shaped gap minimum whose extrapolated apex lies below
	/// cusp_ratio * (smaller bracketing gap) counts as a crossing between grid points.
	double cusp_ratio = 0.25;
};

/// Grid-based detection of places where the two lowest levels meet.
///
/// Three patterns are reported:
///  - an isolated grid point with a vanishing gap (crossing on the grid),
///  - entry to or exit from a run of degenerate points (the ground manifold
///    changes), reported at the midpoint of the boundary interval,
///  - a cusp: the gap falls on the left, rises on the right, and the two
///    secant lines meet near zero inside the interval between them.
inline std::vector<LevelCrossing> detect_level_crossings(const std::vector<LevelSample>& samples,
                                                        const CrossingOptions& opts = {})
{
	if(samples.size() < 2) {
		throw InputError("detect_level_crossings requires at least 2 samples");
	}
	for(std::size_t k = 1; k < samples.size(); ++k) {
		if(!(samples[k].param > samples[k - 1].param)) {
			throw InputError("detect_level_crossings requires strictly increasing parameters");
		}
	}
	const std::size_t n = samples.size();
	std::vector<double> gap(n);
	std::vector<bool> small(n);
	for(std::size_t k = 0; k < n; ++k) {
		gap[k] = samples[k].e1 - samples[k].e0;
		small[k] = std::abs(gap[k]) < opts.gap_tol;
	}
	auto p = [&](std::size_t k) { return samples[k].param; };

	std::vector<LevelCrossing> out;
	std::size_t k = 0;
	while(k < n) {
		if(small[k]) {
			std::size_t end = k;
			while(end + 1 < n && small[end + 1]) ++end;
			if(k == end && k > 0 && end + 1 < n) {
				out.push_back({p(k), p(k - 1), p(k + 1)});
			} else {
				if(k > 0) out.push_back({0.5 * (p(k - 1) + p(k)), p(k - 1), p(k)});
				if(end + 1 < n) out.push_back({0.5 * (p(end) + p(end + 1)), p(end), p(end + 1)});
			}
			k = end + 1;
			continue;
		}
		// cusp inside [k, k+1]
		if(k >= 1 && k + 2 < n && !small[k - 1] && !small[k + 1] && !small[k + 2]) {
			const double left_slope = (gap[k] - gap[k - 1]) / (p(k) - p(k - 1));
			const double right_slope = (gap[k + 2] - gap[k + 1]) / (p(k + 2) - p(k + 1));
			if(left_slope < 0.0 && right_slope > 0.0) {
				// gap[k] + ls (x - p_k) = gap[k+1] + rs (x - p_{k+1})
				const double x = (gap[k + 1] - gap[k] + left_slope * p(k) - right_slope * p(k + 1))
				                 / (left_slope - right_slope);
				const double apex = gap[k] + left_slope * (x - p(k));
				if(x >= p(k) && x <= p(k + 1)
				   && apex <= opts.cusp_ratio * std::min(gap[k], gap[k + 1]) + opts.gap_tol) {
					out.push_back({0.5 * (p(k) + p(k + 1)), p(k), p(k + 1)});
				}
			}
		}
		++k;
	}
	return out;
}

} // namespace bellpoly
