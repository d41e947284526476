#pragma once

#include <Eigen/Core>
#include <complex>

namespace eqharm {

using Complex = std::complex<double>;

/// Point on the unit 3-sphere S³ ⊂ C², stored as the complex pair (z₁, z₂)
/// with |z₁|² + |z₂|² = 1.
struct CartesianPoint {
    Complex z1, z2;

    double norm_sq() const { return std::norm(z1) + std::norm(z2); }
};

/// Hopf coordinates (α, φ, θ):
///   z₁ = sin α · e^{i(θ+φ)},  z₂ = cos α · e^{i(θ−φ)}
/// with α ∈ [0, π/2], φ ∈ [0, 2π), θ ∈ [−π, π). The circle action is
/// θ ↦ θ + ϑ; (α, φ) descend to the base S² through the Hopf projection.
struct HopfPoint {
    double alpha, phi, theta;
};

/// Unit vector in R³ (image of the Hopf projection).
using SpherePoint = Eigen::Vector3d;

CartesianPoint hopf_to_cartesian(const HopfPoint& p);

/// Inverse chart. The coordinate map is 2:1 on the declared ranges (deck
/// transformation (φ, θ) ↦ (φ+π, θ+π mod 2π)); the representative with
/// φ ∈ [0, π) is returned. `degenerate` flags the chart loci α ∈ {0, π/2},
/// where φ is fixed to 0 canonically.
struct HopfChartResult {
    HopfPoint point;
    bool degenerate;
};
HopfChartResult cartesian_to_hopf(const CartesianPoint& p);

/// Fiber circle action: (z₁, z₂) ↦ (e^{iϑ}z₁, e^{iϑ}z₂).
CartesianPoint circle_action(const CartesianPoint& p, double vartheta);

/// Hopf projection S³ → S²: (z₁, z₂) ↦ (Re 2z₁z̄₂, Im 2z₁z̄₂, |z₁|²−|z₂|²).
/// In Hopf coordinates: (sin2α cos2φ, sin2α sin2φ, −cos2α).
SpherePoint hopf_projection(const CartesianPoint& p);

/// (α, φ) chart on the base sphere: n(α, φ) = hopf_projection at θ = 0.
SpherePoint base_point(double alpha, double phi);

/// Chart inverse on the base: α = acos(−z)/2, φ = atan2(y, x)/2.
/// Returns (alpha, phi); degenerate at the poles z = ±1.
struct BaseChartResult {
    double alpha, phi;
    bool degenerate;
};
BaseChartResult base_chart(const SpherePoint& n);

/// Euclidean R⁴ dot product of two points on S³.
double dot4(const CartesianPoint& a, const CartesianPoint& b);

/// Quaternion product x·q, identifying (z₁, z₂) with the quaternion z₁ + z₂ j.
/// Right multiplication by a unit quaternion is the isometry Φ_{1,q}, which
/// commutes with the circle action (= left multiplication by e^{iϑ}).
CartesianPoint quaternion_right_multiply(const CartesianPoint& x, const CartesianPoint& q);

/// Left multiplication p·x (used with the right action to exhaust SO(4)).
CartesianPoint quaternion_left_multiply(const CartesianPoint& p, const CartesianPoint& x);

/// Rescale onto the unit sphere.
CartesianPoint normalized(const CartesianPoint& p);

}  // namespace eqharm
