#include "eqharm/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "eqharm/errors.hpp"

namespace eqharm {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

Complex imag_unit_times(double x) { return {0.0, x}; }
}  // namespace

double covariance_scale(int N, int m) {
    return 0.5 * (static_cast<double>(N) * N - static_cast<double>(m) * m) + N;
}

double chebyshev_u(int N, double t) {
    if (std::abs(t) > 1.0 + 1e-12) {
        throw std::domain_error("chebyshev_u: |t| > 1");
    }
    t = std::min(1.0, std::max(-1.0, t));
    if (N < 0) return 0.0;
    double prev = 1.0;        // U_0
    if (N == 0) return prev;
    double cur = 2.0 * t;     // U_1
    for (int n = 1; n < N; ++n) {
        const double next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double chebyshev_u_prime(int N, double t) {
    if (std::abs(t) > 1.0 + 1e-12) {
        throw std::domain_error("chebyshev_u_prime: |t| > 1");
    }
    t = std::min(1.0, std::max(-1.0, t));
    if (N <= 0) return 0.0;
    double u_prev = 1.0, u_cur = 2.0 * t;   // U_0, U_1
    double d_prev = 0.0, d_cur = 2.0;       // U_0', U_1'
    for (int n = 1; n < N; ++n) {
        const double u_next = 2.0 * t * u_cur - u_prev;
        const double d_next = 2.0 * u_cur + 2.0 * t * d_cur - d_prev;
        u_prev = u_cur;
        u_cur = u_next;
        d_prev = d_cur;
        d_cur = d_next;
    }
    return d_cur;
}

double pi_n(int N, const CartesianPoint& x, const CartesianPoint& y) {
    return chebyshev_u(N, dot4(x, y));
}

Complex pi_nm(int N, int m, const CartesianPoint& x, const CartesianPoint& y) {
    const int nodes = std::max(4 * (N + 1), 8);
    Complex acc = 0.0;
    const double h = 2.0 * kPi / nodes;
    for (int k = 0; k < nodes; ++k) {
        const double theta = h * k;
        acc += std::polar(1.0, -m * theta) * pi_n(N, circle_action(x, theta), y);
    }
    return acc / static_cast<double>(nodes);
}

double rho_n(int N) { return 2.0 * kPi * kPi / (N + 1); }

namespace {
void check_moment_args(int N, int m) {
    if (std::abs(m) > N) throw std::domain_error("chebyshev moment: |m| > N");
}
}  // namespace

double chebyshev_moment0(int N, int m) {
    check_moment_args(N, m);
    return ((N - m) % 2 == 0) ? 1.0 : 0.0;
}

double chebyshev_moment1(int N, int m) {
    check_moment_args(N, m);
    return ((N - m) % 2 == 0) ? covariance_scale(N, m) : 0.0;
}

double chebyshev_moment0_quadrature(int N, int m) {
    check_moment_args(N, m);
    const int nodes = 4 * (N + 1) + 4;
    double acc = 0.0;
    const double h = 2.0 * kPi / nodes;
    for (int k = 0; k < nodes; ++k) {
        acc += std::cos(m * h * k) * chebyshev_u(N, std::cos(h * k));
    }
    return acc / nodes;
}

double chebyshev_moment1_quadrature(int N, int m) {
    check_moment_args(N, m);
    const int nodes = 4 * (N + 1) + 4;
    double acc = 0.0;
    const double h = 2.0 * kPi / nodes;
    for (int k = 0; k < nodes; ++k) {
        const double c = std::cos(h * k);
        acc += std::cos(m * h * k) * chebyshev_u_prime(N, c) * c;
    }
    return acc / nodes;
}

namespace {

CovarianceMatrices assemble(int N, double A_raw, const Eigen::RowVector2cd& B_raw,
                            const Eigen::Matrix2cd& C_raw) {
    CovarianceMatrices cov;
    const double d = N + 1.0;
    cov.A = A_raw / d;
    cov.B = B_raw / d;
    cov.C = C_raw / d;
    cov.Delta.setZero();
    cov.Delta(0, 0) = cov.A;
    cov.Delta.block<1, 2>(0, 1) = cov.B;
    cov.Delta.block<2, 1>(1, 0) = cov.B.adjoint();
    cov.Delta.block<2, 2>(1, 1) = cov.C;
    cov.Lambda = cov.C - (cov.B.adjoint() * cov.B) / cov.A;
    cov.mu = 0.5 * (cov.Lambda(0, 0).real() + cov.Lambda(1, 1).real());
    cov.nu = cov.Lambda(1, 0).imag();
    cov.eta = (cov.mu != 0.0) ? cov.nu / cov.mu : 0.0;
    return cov;
}

void check_nonempty(int N, int m) {
    if (harmonic_space_dimension(N, m) == 0) {
        throw EmptySpaceError("covariance: empty space H_N^m");
    }
}

}  // namespace

CovarianceMatrices covariance_closed_form(int N, int m) {
    check_nonempty(N, m);
    const double D = covariance_scale(N, m);
    Eigen::Matrix2cd C;
    C << D, imag_unit_times(0.5 * m), imag_unit_times(-0.5 * m), D;
    CovarianceMatrices cov = assemble(N, 1.0, Eigen::RowVector2cd::Zero(), C);
    // Reference convention: ν = m/(2(N+1)), η = (m/2)/D (the Lambda entries
    // above do not satisfy the generic μ, ν extraction used for estimates).
    cov.nu = 0.5 * m / (N + 1.0);
    cov.eta = 0.5 * m / D;
    return cov;
}

CovarianceMatrices covariance_kernel_form(int N, int m) {
    check_nonempty(N, m);
    const double D = covariance_scale(N, m);
    Eigen::Matrix2cd C;
    C << D, imag_unit_times(-1.0 * m), imag_unit_times(1.0 * m), D;
    return assemble(N, 1.0, Eigen::RowVector2cd::Zero(), C);
}

CovarianceMatrices covariance_numeric(int N, int m, const HopfPoint& point, double step) {
    check_nonempty(N, m);
    const double h = step;
    if (point.alpha < 10.0 * h || point.alpha > kPi / 2 - 10.0 * h) {
        throw ChartPoleError("covariance_numeric: point too close to a chart pole");
    }

    // Π_N^m with both slots displaced in the (α, φ) chart at fixed θ.
    auto P = [&](double dax, double dpx, double day, double dpy) -> Complex {
        const CartesianPoint x =
            hopf_to_cartesian({point.alpha + dax, point.phi + dpx, point.theta});
        const CartesianPoint y =
            hopf_to_cartesian({point.alpha + day, point.phi + dpy, point.theta});
        return pi_nm(N, m, x, y);
    };

    const Complex P0 = P(0, 0, 0, 0);
    auto d1 = [&](int slot, int dir) -> Complex {  // slot 0=x, 1=y; dir 0=α, 1=φ
        auto at = [&](double s) {
            double d[4] = {0, 0, 0, 0};
            d[2 * slot + dir] = s;
            return P(d[0], d[1], d[2], d[3]);
        };
        return (at(h) - at(-h)) / (2.0 * h);
    };
    auto d2 = [&](int dirx, int diry) -> Complex {  // mixed x-slot/y-slot second
        auto at = [&](double sx, double sy) {
            double d[4] = {0, 0, 0, 0};
            d[dirx] = sx;
            d[2 + diry] = sy;
            return P(d[0], d[1], d[2], d[3]);
        };
        return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
    };

    const Complex dax = d1(0, 0), dpx = d1(0, 1);
    const Complex day = d1(1, 0), dpy = d1(1, 1);
    const Complex caa = d2(0, 0), cap = d2(0, 1);
    const Complex cpa = d2(1, 0), cpp = d2(1, 1);

    // Horizontal-frame correction: e₂ = (∂φ + cos2α·∂θ)/sin2α, with
    // ∂θ(x)Π = imΠ and ∂θ(y)Π = −imΠ by equivariance.
    const double c = std::cos(2.0 * point.alpha);
    const double s = std::sin(2.0 * point.alpha);
    const Complex im = imag_unit_times(static_cast<double>(m));

    Eigen::RowVector2cd B_raw;
    B_raw(0) = day;
    B_raw(1) = (dpy - im * c * P0) / s;

    Eigen::Matrix2cd C_raw;
    C_raw(0, 0) = caa;
    C_raw(0, 1) = (cap - im * c * dax) / s;
    C_raw(1, 0) = (cpa + im * c * day) / s;
    C_raw(1, 1) = (cpp - im * c * dpx + im * c * dpy + im * im * (-1.0) * (c * c) * P0) /
                  (s * s);

    return assemble(N, P0.real(), B_raw, C_raw);
}

}  // namespace eqharm
