#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eqharm/basis.hpp"
#include "eqharm/mesh.hpp"

namespace eqharm {

/// One certified (or failed) zero of the section f_N^m on the base S².
struct ZeroRecord {
    SpherePoint position;       // on S² via the doubled-angle chart
    double alpha = 0.0, phi = 0.0;
    int index = 0;              // boundary winding of f/|f|
    double newton_residual = 0.0;
    bool certified = false;
    bool at_pole = false;
};

struct ZeroSet {
    std::vector<ZeroRecord> zeros;
    int total_count = 0;   // certified zeros (each counted once, any index ±1)
    int index_sum = 0;     // sum of winding indices incl. pole zeros
    int failure_count = 0; // CertificationFailure cells (reported, not dropped)
    bool all_certified() const { return failure_count == 0; }
};

struct ZeroFinderParams {
    int initial_grid = 0;        // 0 → automatic: max(16, 4(N+1)) cells per side
    int max_depth = 12;          // quadtree depth below the initial grid
    double newton_tol = 1e-10;   // residual threshold, relative to field scale
    double pole_radius = 1e-6;   // α-margin treated as pole caps
};

/// Certified zero counting on the (α, φ) ∈ [ε, π/2−ε] × [0, π) chart, which
/// covers the base S² once through the doubled angles. Cells are certified by
/// the boundary winding of f/|f| (adaptive phase sampling, steps < π/2),
/// subdivided until each nonzero-winding cell has winding ±1 and a Newton
/// solve from its center converges inside the cell with residual < tol.
/// Zeros sitting at the chart poles are caught by gauge-corrected windings on
/// the two boundary circles α = ε and α = π/2−ε. Winding bookkeeping makes
/// index_sum = m automatic when every cell is certified (Hopf/Chern).
ZeroSet count_zeros(const RandomHarmonic& h, const ZeroFinderParams& params = {});

/// The reference genus-from-zero-count formula |m|(k−2)/2 + 1 as an exact
/// rational (num/den, den ∈ {1, 2}); non-integer values are possible and the
/// mesh genus is the arbiter (the 2|m|-sheet variant is |m|(k−2)+1).
struct Rational {
    long long num = 0, den = 1;
    bool is_integer() const { return den == 1; }
    double value() const { return static_cast<double>(num) / den; }
};
Rational genus_from_zero_count(int m, int k);

/// Triangulated nodal surface {Re ψ = 0} ⊂ S³ from marching tetrahedra.
struct NodalSurface {
    std::vector<Eigen::Vector4d> vertices;       // interpolated points in R⁴
    std::vector<std::array<int, 3>> triangles;
    std::vector<int> triangle_component;         // component label per triangle
    struct Component {
        long long vertex_count = 0, edge_count = 0, face_count = 0;
        long long chi = 0;
        double genus = 0.0;   // (2−χ)/2
        bool closed = false;  // every edge has exactly 2 cofaces
    };
    std::vector<Component> components;

    long long total_chi() const {
        long long s = 0;
        for (const auto& c : components) s += c.chi;
        return s;
    }
    double total_genus() const {
        double s = 0;
        for (const auto& c : components) s += c.genus;
        return s;
    }
    bool closed() const {
        for (const auto& c : components) {
            if (!c.closed) return false;
        }
        return true;
    }
};

/// Marching tetrahedra over triangulate_sphere3(level), linear interpolation
/// on edges; vertices keyed by sorted edge endpoint ids (watertight gluing
/// with no floating-point comparisons); exact-zero vertex values treated as
/// +ε symbolically. Components by union-find, χ = V−E+F per component.
NodalSurface extract_nodal_surface(const RandomHarmonic& h, int level,
                                   const SphereTriangulation* mesh = nullptr);

/// Number of θ ∈ [0, 2π) with Re(e^{imθ} f(base-lift)) = 0: 2|m| whenever
/// f(base) ≠ 0 (0 for m = 0). Throws BaseOnZeroSetError.
int fiber_sheet_count(const RandomHarmonic& h, const SpherePoint& base);

/// Surface export (nOFF, dimension 4).
void write_surface_off(const NodalSurface& surface, const std::string& path);

/// SVG stereographic plot of a zero configuration on S².
void write_zero_svg(const ZeroSet& zeros, const std::string& path);

}  // namespace eqharm
