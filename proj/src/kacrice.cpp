#include "eqharm/kacrice.hpp"

#include <cmath>

#include "eqharm/errors.hpp"
#include "eqharm/quadrature.hpp"
#include "eqharm/rng.hpp"

namespace eqharm {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

KacRicePrediction predict(int N, int m) {
    if (harmonic_space_dimension(N, m) == 0) {
        throw EmptySpaceError("predict: empty space H_N^m");
    }
    if (m == 0) {
        throw ZeroEquivarianceError("predict: requires m != 0");
    }
    KacRicePrediction p;
    p.N = N;
    p.m = m;
    p.D = covariance_scale(N, m);
    p.eta = 0.5 * m / p.D;
    p.expected_zero_count = (1.0 + p.eta * p.eta) * p.D / (4.0 * kPi);
    p.expected_genus = std::abs(m) * (p.expected_zero_count - 2.0) / 2.0 + 1.0;
    p.eta_kernel = m / p.D;
    p.expected_zero_count_kernel = (1.0 + p.eta_kernel * p.eta_kernel) * p.D / 2.0;
    p.expected_genus_kernel = std::abs(m) * (p.expected_zero_count_kernel - 2.0) + 1.0;
    p.normalization_constant = std::nan("");
    return p;
}

double scalar_integral(double eta) {
    if (std::abs(eta) > 1.0 + 1e-12) {
        throw std::domain_error("scalar_integral: |eta| > 1");
    }
    return (1.0 + eta * eta) / (4.0 * kPi);
}

double scalar_integral_quadrature(double eta) {
    if (std::abs(eta) > 1.0 + 1e-12) {
        throw std::domain_error("scalar_integral_quadrature: |eta| > 1");
    }
    auto f = [eta](double t) { return std::abs(eta + t); };
    // Split at the kink t = −η so each piece is smooth.
    const double split = std::min(1.0, std::max(-1.0, -eta));
    const double value =
        adaptive_simpson(f, -1.0, split, 1e-15) + adaptive_simpson(f, split, 1.0, 1e-15);
    return value / (4.0 * kPi);
}

namespace {

/// Square root of a Hermitian positive-semidefinite matrix (the m = N case
/// has a genuinely zero eigenvalue, so a strict Cholesky is too demanding).
Eigen::Matrix2cd psd_sqrt_or_throw(const Eigen::Matrix2cd& Lambda) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(Lambda);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (es.eigenvalues().minCoeff() < -1e-12 * scale) {
        throw NotPositiveDefiniteError("kacrice: Lambda not positive semidefinite");
    }
    return es.eigenvectors() *
           es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

}  // namespace

MonteCarloEstimate kacrice_integral_mc(const Eigen::Matrix2cd& Lambda, int dimension,
                                       std::int64_t samples, std::uint64_t seed) {
    const Eigen::Matrix2cd L = psd_sqrt_or_throw(Lambda);
    RandomStream rng(seed);
    double sum = 0.0, sum_sq = 0.0;
    const double prefactor = dimension / kPi;
    for (std::int64_t i = 0; i < samples; ++i) {
        const Complex z1 = rng.complex_normal();
        const Complex z2 = rng.complex_normal();
        const Complex xi1 = L(0, 0) * z1 + L(0, 1) * z2;
        const Complex xi2 = L(1, 0) * z1 + L(1, 1) * z2;
        const double v = prefactor * 2.0 * std::abs(std::imag(xi1 * std::conj(xi2)));
        sum += v;
        sum_sq += v * v;
    }
    MonteCarloEstimate est;
    est.samples = samples;
    est.mean = sum / samples;
    const double var = (sum_sq - sum * sum / samples) / (samples - 1.0);
    est.stderr_of_mean = std::sqrt(std::max(0.0, var) / samples);
    return est;
}

double kacrice_integral_quadrature(const Eigen::Matrix2cd& Lambda, int dimension) {
    const Eigen::Matrix2cd L = psd_sqrt_or_throw(Lambda);
    // |ξ∧ξ̄| = |ξᴴ σ₂ ξ| (times 2i) is a Hermitian quadratic form; in the
    // eigenbasis of K = Λ^{1/2} σ₂ Λ^{1/2} it becomes κ₁|β₁|² + κ₂|β₂|² with
    // κ₁ ≥ 0 ≥ κ₂ and β standard complex Gaussian.
    Eigen::Matrix2cd sigma2;
    sigma2 << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    const Eigen::Matrix2cd K = L.adjoint() * sigma2 * L;  // similar spectrum to σ₂Λ
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(K);
    const double a = std::abs(es.eigenvalues()(1));  // κ₁
    const double b = std::abs(es.eigenvalues()(0));  // |κ₂|
    // E|κ₁|β₁|² − |κ₂||β₂|²| in the proof's polar coordinates (βᵢ = √2 αᵢ,
    // |α₁| = r cosθ, |α₂| = r sinθ): the r and θ factors separate.
    const double radial = adaptive_simpson(
        [](double r) { return std::pow(r, 5) * std::exp(-2.0 * r * r); }, 0.0, 8.0,
        1e-15);
    const double angular = adaptive_simpson(
        [a, b](double th) {
            const double ct = std::cos(th), st = std::sin(th);
            return ct * st * std::abs(a * ct * ct - b * st * st);
        },
        0.0, kPi / 2, 1e-15);
    const double expected_abs = 32.0 * radial * angular;
    return dimension / kPi * expected_abs;
}

double joint_density(const Complex& x, const Eigen::Vector2cd& xi,
                     const CovarianceMatrices& cov) {
    Eigen::LLT<Eigen::Matrix3cd> llt(cov.Delta);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefiniteError("joint_density: Delta not positive definite");
    }
    Eigen::Vector3cd v;
    v << x, xi(0), xi(1);
    const Complex quad = v.dot(llt.solve(v));  // ⟨Δ⁻¹v, v⟩ (real for Hermitian Δ)
    const double det = cov.Delta.determinant().real();
    return std::exp(-quad.real()) / (kPi * kPi * kPi * det);
}

}  // namespace eqharm
