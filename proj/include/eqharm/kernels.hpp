#pragma once

#include <Eigen/Dense>

#include "eqharm/basis.hpp"
#include "eqharm/hopf.hpp"

namespace eqharm {

/// D = (N²−m²)/2 + N, the derivative-covariance scale of the ensemble.
double covariance_scale(int N, int m);

/// Chebyshev polynomial of the second kind, U_N(cosθ) = sin((N+1)θ)/sinθ,
/// by the three-term recurrence. Throws std::domain_error for |t| > 1+1e−12
/// (values inside the tolerance band are clamped).
double chebyshev_u(int N, double t);

/// Derivative U_N'(t) via the coupled recurrence (test oracles for moments).
double chebyshev_u_prime(int N, double t);

/// Degree-N reproducing kernel on S³: Π_N(x, y) = U_N(x·y).
double pi_n(int N, const CartesianPoint& x, const CartesianPoint& y);

/// Fiber-averaged equivariant kernel
///   Π_N^m(x, y) = (1/2π)∫ e^{−imθ} Π_N(r_θ x, y) dθ,
/// trapezoid quadrature with max(4(N+1), 8) nodes — spectrally exact.
/// Normalized so Π_N^m(x, x) = 1.
Complex pi_nm(int N, int m, const CartesianPoint& x, const CartesianPoint& y);

/// The constant ratio Π_N^m(x,y) / Σₖ eₖ(x)ēₖ(y) = 2π²/(N+1): the basis-sum
/// (projector) kernel and the fiber average differ by the measure constant.
double rho_n(int N);

/// Chebyshev moments entering the jet covariance (closed forms):
///   moment0 = (1/2π)∫ cos(mθ) U_N(cosθ) dθ           ∈ {0, 1}
///   moment1 = (1/2π)∫ cos(mθ) U_N'(cosθ) cosθ dθ     ∈ {0, D}
/// nonzero exactly when 2 | (N−m). Throws std::domain_error if |m| > N.
double chebyshev_moment0(int N, int m);
double chebyshev_moment1(int N, int m);
/// Quadrature versions (test assertions).
double chebyshev_moment0_quadrature(int N, int m);
double chebyshev_moment1_quadrature(int N, int m);

/// One-point covariance data of the 1-jet (X, Ξ) = (f, ∇f) at a base point,
/// everything normalized by 1/(N+1) ("d_N^m"):
///   Delta = [[A, B],[Bᴴ, C]],  Lambda = C − Bᴴ A⁻¹ B.
struct CovarianceMatrices {
    double A = 0.0;
    Eigen::RowVector2cd B;
    Eigen::Matrix2cd C;
    Eigen::Matrix3cd Delta;
    Eigen::Matrix2cd Lambda;
    double eta = 0.0, mu = 0.0, nu = 0.0;
};

/// Reference closed form: Λ = (1/(N+1))[[D, im/2],[−im/2, D]],
/// ν = m/(2(N+1)), η = (m/2)/D. Kept verbatim for comparison; the
/// finite-difference estimator does NOT reproduce its off-diagonal for m ≠ 0
/// (see covariance_kernel_form). Throws EmptySpaceError on empty spaces.
CovarianceMatrices covariance_closed_form(int N, int m);

/// Closed form derived from the kernel moments, the one the numerical
/// derivatives of Π_N^m actually satisfy:
///   Λ = (1/(N+1))[[D, −im],[im, D]],  ν = m/(N+1),  η = m/D.
/// Satisfies Λ(1, i)ᵀ = (μ+ν)(1, i)ᵀ and Λ(1, −i)ᵀ = (μ−ν)(1, −i)ᵀ.
CovarianceMatrices covariance_kernel_form(int N, int m);

/// Finite-difference estimate of Delta/Lambda from Π_N^m at a general point
/// (central differences, step 1e−4, both slots), expressed in the horizontal
/// orthonormal frame e₁ = ∂α, e₂ = (∂φ + cos2α·∂θ)/sin2α with the
/// equivariance substitutions ∂θ(x)Π = imΠ, ∂θ(y)Π = −imΠ. Point-independent
/// (the frame-normalized covariance is constant over the base). Throws ChartPoleError near chart poles.
CovarianceMatrices covariance_numeric(int N, int m, const HopfPoint& point,
                                      double step = 1e-4);

}  // namespace eqharm
