#pragma once

#include <cmath>
#include <functional>

namespace eqharm {

/// Adaptive Simpson quadrature on [a, b] with absolute tolerance `tol`.
/// Handles integrands with isolated kinks (|·|) by recursive bisection.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13, int max_depth = 48);

/// Trapezoid average (1/2π)∫₀^{2π} f(θ)dθ with `nodes` equispaced points.
/// Spectrally exact for trigonometric polynomials of degree ≤ nodes-1.
template <typename F>
auto fiber_average(F&& f, int nodes) -> decltype(f(0.0)) {
    decltype(f(0.0)) acc{};
    const double h = 6.283185307179586476925286766559 / nodes;
    for (int k = 0; k < nodes; ++k) acc += f(h * k);
    return acc * (1.0 / nodes);
}

}  // namespace eqharm
