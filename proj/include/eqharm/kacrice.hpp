#pragma once

#include <cstdint>

#include "eqharm/kernels.hpp"

namespace eqharm {

/// Closed-form expectations for the zero count of f_N^m and the genus of the
/// nodal surface. Two conventions are carried side by side:
///  - the reference one: η = (m/2)/D, E#zeros = (1+η²)D/(4π),
///    genus = |m|(E−2)/2 + 1;
///  - the kernel-derived one (matches measured covariances and the m = N
///    anchor of exactly N zeros): η_kernel = m/D,
///    E#zeros = (1+η_kernel²)D/2 = (D²+m²)/(2D),
///    genus via the 2|m|-sheet covering: |m|(E−2) + 1.
struct KacRicePrediction {
    int N = 0, m = 0;
    double D = 0.0;
    double eta = 0.0;
    double expected_zero_count = 0.0;
    double expected_genus = 0.0;
    double eta_kernel = 0.0;
    double expected_zero_count_kernel = 0.0;
    double expected_genus_kernel = 0.0;
    double normalization_constant = 0.0;  // NaN until fitted by experiments
};

/// Throws EmptySpaceError / ZeroEquivarianceError (m = 0 excluded).
KacRicePrediction predict(int N, int m);

/// (1/4π)∫_{−1}^{1}|η+t|dt = (1+η²)/(4π), valid for |η| ≤ 1
/// (the reference convention only reaches |η| ≤ 1/2; the identity holds up to 1,
/// which the kernel-form η = m/D requires at m = N).
double scalar_integral(double eta);
/// Adaptive-quadrature evaluation of the same integral (oracle).
double scalar_integral_quadrature(double eta);

struct MonteCarloEstimate {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    std::int64_t samples = 0;
};

/// Monte Carlo evaluation of the reference ξ-space Kac–Rice integral
///   (N+1)/π³ ∫_{C²} |ξ∧ξ̄| exp(−⟨Λ⁻¹ξ, ξ⟩)/det Λ dL(ξ)
///   = (N+1)/π · E_{ξ~CN(0,Λ)} |2 Im(ξ₁ξ̄₂)|,
/// sampled through a Cholesky square root of Λ. `dimension` is N+1.
/// Throws NotPositiveDefiniteError.
MonteCarloEstimate kacrice_integral_mc(const Eigen::Matrix2cd& Lambda, int dimension,
                                       std::int64_t samples, std::uint64_t seed);

/// The same quantity by the proof's polar change of variables (r, θ),
/// both one-dimensional reductions evaluated by adaptive quadrature.
double kacrice_integral_quadrature(const Eigen::Matrix2cd& Lambda, int dimension);

/// Gaussian joint density of the 1-jet v = (x, ξ₁, ξ₂):
///   D(x, ξ) = exp(−⟨Δ⁻¹v, v⟩)/(π³ det Δ).
/// Throws NotPositiveDefiniteError.
double joint_density(const Complex& x, const Eigen::Vector2cd& xi,
                     const CovarianceMatrices& cov);

}  // namespace eqharm
