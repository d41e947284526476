#include "eqharm/hopf.hpp"

#include <cmath>

namespace eqharm {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

double wrap_half_open(double x, double lo, double hi) {
    const double span = hi - lo;
    double y = std::fmod(x - lo, span);
    if (y < 0) y += span;
    return y + lo;
}
}  // namespace

CartesianPoint hopf_to_cartesian(const HopfPoint& p) {
    const double s = std::sin(p.alpha), c = std::cos(p.alpha);
    return {s * std::polar(1.0, p.theta + p.phi), c * std::polar(1.0, p.theta - p.phi)};
}

HopfChartResult cartesian_to_hopf(const CartesianPoint& p) {
    const double r1 = std::abs(p.z1), r2 = std::abs(p.z2);
    const double alpha = std::atan2(r1, r2);
    const double degeneracy_tol = 1e-14;
    if (r1 <= degeneracy_tol || r2 <= degeneracy_tol) {
        // Chart locus: only one phase is defined; fix φ = 0 canonically.
        const double theta = (r1 > r2) ? std::arg(p.z1) : std::arg(p.z2);
        return {{alpha, 0.0, wrap_half_open(theta, -kPi, kPi)}, true};
    }
    const double a = std::arg(p.z1);  // θ + φ
    const double b = std::arg(p.z2);  // θ − φ
    double phi = 0.5 * (a - b);
    double theta = 0.5 * (a + b);
    phi = wrap_half_open(phi, 0.0, kPi);  // canonical deck representative
    // Re-derive θ consistent with the chosen φ branch: e^{i(θ+φ)} must match z₁.
    theta = wrap_half_open(a - phi, -kPi, kPi);
    return {{alpha, phi, theta}, false};
}

CartesianPoint circle_action(const CartesianPoint& p, double vartheta) {
    const Complex u = std::polar(1.0, vartheta);
    return {u * p.z1, u * p.z2};
}

SpherePoint hopf_projection(const CartesianPoint& p) {
    const Complex w = 2.0 * p.z1 * std::conj(p.z2);
    return {w.real(), w.imag(), std::norm(p.z1) - std::norm(p.z2)};
}

SpherePoint base_point(double alpha, double phi) {
    const double s = std::sin(2.0 * alpha);
    return {s * std::cos(2.0 * phi), s * std::sin(2.0 * phi), -std::cos(2.0 * alpha)};
}

BaseChartResult base_chart(const SpherePoint& n) {
    const double z = std::min(1.0, std::max(-1.0, n.z()));
    const double alpha = 0.5 * std::acos(-z);
    const double rho = std::hypot(n.x(), n.y());
    if (rho < 1e-14) return {alpha, 0.0, true};
    double phi = 0.5 * std::atan2(n.y(), n.x());
    phi = wrap_half_open(phi, 0.0, kPi);
    return {alpha, phi, false};
}

double dot4(const CartesianPoint& a, const CartesianPoint& b) {
    return a.z1.real() * b.z1.real() + a.z1.imag() * b.z1.imag() +
           a.z2.real() * b.z2.real() + a.z2.imag() * b.z2.imag();
}

CartesianPoint quaternion_right_multiply(const CartesianPoint& x, const CartesianPoint& q) {
    // (x₁ + x₂j)(q₁ + q₂j) = (x₁q₁ − x₂q̄₂) + (x₁q₂ + x₂q̄₁)j
    return {x.z1 * q.z1 - x.z2 * std::conj(q.z2), x.z1 * q.z2 + x.z2 * std::conj(q.z1)};
}

CartesianPoint quaternion_left_multiply(const CartesianPoint& p, const CartesianPoint& x) {
    return quaternion_right_multiply(p, x);
}

CartesianPoint normalized(const CartesianPoint& p) {
    const double r = std::sqrt(p.norm_sq());
    return {p.z1 / r, p.z2 / r};
}

}  // namespace eqharm
