#include "eqharm/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <stdexcept>
#include <unordered_map>

#include "eqharm/errors.hpp"

namespace eqharm {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

// ---------------------------------------------------------------------------
// Zero counting on the (α, φ) chart.
// ---------------------------------------------------------------------------

/// Raised when the field is (numerically) zero on a cell boundary; the whole
/// run is retried with a shifted φ-grid.
struct BoundaryZero : std::runtime_error {
    BoundaryZero() : std::runtime_error("field vanishes on a cell boundary") {}
};

struct ZeroFinder {
    const ChartSection& section;
    const ZeroFinderParams& params;
    double tiny;  // |f| below this on a boundary → BoundaryZero

    Complex value(double a, double p) const { return section.value(a, p); }

    /// Continuous arg increment of f along the straight chart segment
    /// (a0,p0) → (a1,p1), adaptively bisected until phase steps < ~π/2.
    double arg_delta(double a0, double p0, double a1, double p1, const Complex& v0,
                     const Complex& v1, int depth) const {
        const double d = std::arg(v1 * std::conj(v0));
        if (std::abs(d) < 1.2 && depth < 40) return d;
        if (depth >= 40) throw BoundaryZero();
        const double am = 0.5 * (a0 + a1), pm = 0.5 * (p0 + p1);
        const Complex vm = value(am, pm);
        if (std::abs(vm) < tiny) throw BoundaryZero();
        return arg_delta(a0, p0, am, pm, v0, vm, depth + 1) +
               arg_delta(am, pm, a1, p1, vm, v1, depth + 1);
    }

    double edge_delta(double a0, double p0, double a1, double p1) const {
        const Complex v0 = value(a0, p0), v1 = value(a1, p1);
        if (std::abs(v0) < tiny || std::abs(v1) < tiny) throw BoundaryZero();
        return arg_delta(a0, p0, a1, p1, v0, v1, 0);
    }

    /// Winding of f/|f| around the rectangle boundary, counterclockwise in
    /// the (α, φ) plane.
    int winding(double a0, double a1, double p0, double p1) const {
        const double total = edge_delta(a0, p0, a1, p0) + edge_delta(a1, p0, a1, p1) +
                             edge_delta(a1, p1, a0, p1) + edge_delta(a0, p1, a0, p0);
        const double w = total / kTwoPi;
        const int rounded = static_cast<int>(std::lround(w));
        if (std::abs(w - rounded) > 0.25) throw BoundaryZero();
        return rounded;
    }

    /// Damped Newton from the cell center; true on convergence inside the
    /// (slightly expanded) cell.
    bool newton(double a0, double a1, double p0, double p1, double& out_a,
                double& out_p, double& out_res) const {
        double a = 0.5 * (a0 + a1), p = 0.5 * (p0 + p1);
        const double diag = std::hypot(a1 - a0, p1 - p0);
        const double tol = params.newton_tol * section.scale();
        for (int it = 0; it < 60; ++it) {
            Complex f, fa, fp;
            section.jet(a, p, f, fa, fp);
            if (std::abs(f) < tol) {
                const double ma = 0.2 * (a1 - a0), mp = 0.2 * (p1 - p0);
                if (a < a0 - ma || a > a1 + ma || p < p0 - mp || p > p1 + mp) {
                    return false;
                }
                out_a = a;
                out_p = p;
                out_res = std::abs(f);
                return true;
            }
            const double det = fa.real() * fp.imag() - fp.real() * fa.imag();
            if (det == 0.0) return false;
            double da = (-f.real() * fp.imag() + f.imag() * fp.real()) / det;
            double dp = (-fa.real() * f.imag() + fa.imag() * f.real()) / det;
            const double len = std::hypot(da, dp);
            if (len > 0.75 * diag) {
                da *= 0.75 * diag / len;
                dp *= 0.75 * diag / len;
            }
            a += da;
            p += dp;
        }
        return false;
    }
};

struct Cell {
    double a0, a1, p0, p1;
    int depth;
};

ZeroSet attempt_count(const ChartSection& section, const ZeroFinderParams& params,
                      double phi_offset) {
    const int m = section.m();
    ZeroFinder finder{section, params, 1e-14 * section.scale()};
    ZeroSet out;

    const double eps = params.pole_radius;
    const double a_lo = eps, a_hi = kPi / 2 - eps;

    // Pole caps: gauge-corrected winding of f along the boundary circles.
    // Over φ: 0 → π the base loops once around the pole; the trivialization
    // twist contributes ±mπ.
    // Near the poles the field rotates like e^{∓imφ}, so a coarse sample of
    // the boundary circle can alias a full 2π turn to ~0: use enough segments
    // that the true per-segment rotation stays below π/2.
    const int pole_segments = std::max(4, 2 * std::abs(m));
    auto circle_delta = [&](double a) {
        double d = 0.0;
        for (int j = 0; j < pole_segments; ++j) {
            d += finder.edge_delta(a, phi_offset + kPi * j / pole_segments, a,
                                   phi_offset + kPi * (j + 1) / pole_segments);
        }
        return d;
    };
    {
        const double dN = circle_delta(a_lo);
        const int idx = static_cast<int>(std::lround((dN + m * kPi) / kTwoPi));
        if (idx != 0) {
            ZeroRecord rec;
            rec.position = base_point(0.0, 0.0);
            rec.alpha = 0.0;
            rec.phi = 0.0;
            rec.index = idx;
            rec.at_pole = true;
            rec.certified = (std::abs(idx) == 1);
            out.zeros.push_back(rec);
            if (!rec.certified) ++out.failure_count;
        }
    }
    {
        const double dS = circle_delta(a_hi);
        const int idx = static_cast<int>(std::lround(-(dS - m * kPi) / kTwoPi));
        if (idx != 0) {
            ZeroRecord rec;
            rec.position = base_point(kPi / 2, 0.0);
            rec.alpha = kPi / 2;
            rec.phi = 0.0;
            rec.index = idx;
            rec.at_pole = true;
            rec.certified = (std::abs(idx) == 1);
            out.zeros.push_back(rec);
            if (!rec.certified) ++out.failure_count;
        }
    }

    // Initial grid, then a per-cell quadtree.
    const int n = params.initial_grid > 0 ? params.initial_grid
                                          : std::max(16, 4 * (section.N() + 1));
    std::deque<Cell> work;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            work.push_back({a_lo + (a_hi - a_lo) * i / n, a_lo + (a_hi - a_lo) * (i + 1) / n,
                            phi_offset + kPi * j / n, phi_offset + kPi * (j + 1) / n, 0});
        }
    }

    while (!work.empty()) {
        const Cell cell = work.front();
        work.pop_front();
        const int w = finder.winding(cell.a0, cell.a1, cell.p0, cell.p1);
        if (w == 0) continue;

        if (std::abs(w) == 1) {
            double za, zp, res;
            if (finder.newton(cell.a0, cell.a1, cell.p0, cell.p1, za, zp, res)) {
                ZeroRecord rec;
                rec.alpha = za;
                rec.phi = zp;
                rec.position = base_point(za, zp);
                rec.index = w;
                rec.newton_residual = res;
                rec.certified = true;
                out.zeros.push_back(rec);
                continue;
            }
        }
        if (cell.depth >= params.max_depth) {
            ZeroRecord rec;
            rec.alpha = 0.5 * (cell.a0 + cell.a1);
            rec.phi = 0.5 * (cell.p0 + cell.p1);
            rec.position = base_point(rec.alpha, rec.phi);
            rec.index = w;
            rec.certified = false;
            out.zeros.push_back(rec);
            ++out.failure_count;
            continue;
        }
        const double am = 0.5 * (cell.a0 + cell.a1), pm = 0.5 * (cell.p0 + cell.p1);
        work.push_back({cell.a0, am, cell.p0, pm, cell.depth + 1});
        work.push_back({am, cell.a1, cell.p0, pm, cell.depth + 1});
        work.push_back({cell.a0, am, pm, cell.p1, cell.depth + 1});
        work.push_back({am, cell.a1, pm, cell.p1, cell.depth + 1});
    }

    for (const ZeroRecord& rec : out.zeros) {
        out.index_sum += rec.index;
        if (rec.certified) ++out.total_count;
    }
    return out;
}

}  // namespace

ZeroSet count_zeros(const RandomHarmonic& h, const ZeroFinderParams& params) {
    const ChartSection section(h);
    for (int attempt = 0; attempt < 5; ++attempt) {
        try {
            return attempt_count(section, params, attempt * 0.0137);
        } catch (const BoundaryZero&) {
            continue;  // grid line ran through a zero; shift and retry
        }
    }
    // Persistent boundary degeneracy: report as a certification failure.
    ZeroSet failed;
    failed.failure_count = 1;
    return failed;
}

Rational genus_from_zero_count(int m, int k) {
    if (k < 0) throw std::invalid_argument("genus_from_zero_count: k < 0");
    const long long num = static_cast<long long>(std::abs(m)) * (k - 2);
    if (num % 2 == 0) return {num / 2 + 1, 1};
    return {num + 2, 2};
}

// ---------------------------------------------------------------------------
// Marching tetrahedra.
// ---------------------------------------------------------------------------

namespace {

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::uint64_t pair_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

NodalSurface extract_nodal_surface(const RandomHarmonic& h, int level,
                                   const SphereTriangulation* mesh) {
    SphereTriangulation own;
    if (!mesh) {
        own = triangulate_sphere3(level);
        mesh = &own;
    }
    const std::size_t nv = mesh->vertices.size();
    std::vector<double> value(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        value[i] = evaluate(h, mesh->vertices[i]).real();
    }
    // Symbolic perturbation: an exact zero counts as positive.
    auto positive = [&](int i) { return value[i] >= 0.0; };

    NodalSurface surf;
    std::unordered_map<std::uint64_t, int> cut_vertex;
    cut_vertex.reserve(nv);
    auto cut = [&](int i, int j) {
        const std::uint64_t key = pair_key(i, j);
        auto it = cut_vertex.find(key);
        if (it != cut_vertex.end()) return it->second;
        const double vi = value[i], vj = value[j];
        double t = vi / (vi - vj);  // vi−vj ≠ 0: opposite signs by construction
        t = std::min(1.0, std::max(0.0, t));
        const CartesianPoint& a = mesh->vertices[i];
        const CartesianPoint& b = mesh->vertices[j];
        const int id = static_cast<int>(surf.vertices.size());
        surf.vertices.emplace_back(a.z1.real() + t * (b.z1.real() - a.z1.real()),
                                   a.z1.imag() + t * (b.z1.imag() - a.z1.imag()),
                                   a.z2.real() + t * (b.z2.real() - a.z2.real()),
                                   a.z2.imag() + t * (b.z2.imag() - a.z2.imag()));
        cut_vertex.emplace(key, id);
        return id;
    };

    for (const auto& tet : mesh->tetrahedra) {
        int pos[4], neg[4];
        int np = 0, nn = 0;
        for (int v : tet) {
            if (positive(v)) {
                pos[np++] = v;
            } else {
                neg[nn++] = v;
            }
        }
        if (np == 0 || nn == 0) continue;
        if (np == 1 || nn == 1) {
            const int apex = (np == 1) ? pos[0] : neg[0];
            const int* others = (np == 1) ? neg : pos;
            surf.triangles.push_back(
                {cut(apex, others[0]), cut(apex, others[1]), cut(apex, others[2])});
        } else {
            // 2+/2−: quad across the four mixed edges, split into 2 triangles.
            const int a = pos[0], b = pos[1], c = neg[0], d = neg[1];
            const int ac = cut(a, c), ad = cut(a, d), bc = cut(b, c), bd = cut(b, d);
            surf.triangles.push_back({ac, ad, bd});
            surf.triangles.push_back({ac, bd, bc});
        }
    }

    // Components by union-find over surface vertices.
    DisjointSet ds(static_cast<int>(surf.vertices.size()));
    for (const auto& t : surf.triangles) {
        ds.unite(t[0], t[1]);
        ds.unite(t[1], t[2]);
    }
    std::unordered_map<int, int> root_to_label;
    std::vector<int> vertex_label(surf.vertices.size(), -1);
    for (std::size_t i = 0; i < surf.vertices.size(); ++i) {
        const int root = ds.find(static_cast<int>(i));
        auto [it, inserted] =
            root_to_label.emplace(root, static_cast<int>(root_to_label.size()));
        vertex_label[i] = it->second;
    }
    const int ncomp = static_cast<int>(root_to_label.size());
    surf.components.resize(ncomp);
    surf.triangle_component.resize(surf.triangles.size());

    std::unordered_map<std::uint64_t, int> edge_cofaces;
    edge_cofaces.reserve(surf.triangles.size() * 2);
    for (std::size_t t = 0; t < surf.triangles.size(); ++t) {
        const auto& tri = surf.triangles[t];
        const int label = vertex_label[tri[0]];
        surf.triangle_component[t] = label;
        surf.components[label].face_count += 1;
        ++edge_cofaces[pair_key(tri[0], tri[1])];
        ++edge_cofaces[pair_key(tri[1], tri[2])];
        ++edge_cofaces[pair_key(tri[0], tri[2])];
    }
    for (std::size_t i = 0; i < surf.vertices.size(); ++i) {
        surf.components[vertex_label[i]].vertex_count += 1;
    }
    std::vector<bool> closed(ncomp, true);
    for (const auto& [key, count] : edge_cofaces) {
        const int label = vertex_label[static_cast<int>(key >> 32)];
        surf.components[label].edge_count += 1;
        if (count != 2) closed[label] = false;
    }
    for (int c = 0; c < ncomp; ++c) {
        auto& comp = surf.components[c];
        comp.chi = comp.vertex_count - comp.edge_count + comp.face_count;
        comp.genus = (2.0 - comp.chi) / 2.0;
        comp.closed = closed[c];
    }
    return surf;
}

int fiber_sheet_count(const RandomHarmonic& h, const SpherePoint& base) {
    const BaseChartResult chart = base_chart(base);
    const CartesianPoint lift = hopf_to_cartesian({chart.alpha, chart.phi, 0.0});
    const Complex f = evaluate(h, lift);
    const double scale = std::sqrt((h.N() + 1) / (2.0 * kPi * kPi));
    if (std::abs(f) < 1e-12 * scale) {
        throw BaseOnZeroSetError("fiber_sheet_count: section vanishes at base");
    }
    return h.m() == 0 ? 0 : 2 * std::abs(h.m());
}

void write_surface_off(const NodalSurface& surface, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_surface_off: cannot open " + path);
    std::fprintf(f, "nOFF\n4\n%zu %zu 0\n", surface.vertices.size(),
                 surface.triangles.size());
    for (const auto& v : surface.vertices) {
        std::fprintf(f, "%.17g %.17g %.17g %.17g\n", v[0], v[1], v[2], v[3]);
    }
    for (const auto& t : surface.triangles) {
        std::fprintf(f, "3 %d %d %d\n", t[0], t[1], t[2]);
    }
    std::fclose(f);
}

void write_zero_svg(const ZeroSet& zeros, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_zero_svg: cannot open " + path);
    std::fprintf(f,
                 "<svg xmlns='http://www.w3.org/2000/svg' viewBox='-4.5 -4.5 9 9'>\n"
                 "<rect x='-4.5' y='-4.5' width='9' height='9' fill='white'/>\n"
                 "<circle cx='0' cy='0' r='1' fill='none' stroke='#999' "
                 "stroke-width='0.02'/>\n");
    for (const auto& z : zeros.zeros) {
        // Stereographic projection from the north pole (0, 0, 1).
        const double denom = std::max(1e-6, 1.0 - z.position.z());
        double X = z.position.x() / denom, Y = z.position.y() / denom;
        const double r = std::hypot(X, Y);
        if (r > 4.0) {
            X *= 4.0 / r;
            Y *= 4.0 / r;
        }
        const char* color = !z.certified ? "#e69500" : (z.index > 0 ? "#1f77b4" : "#d62728");
        std::fprintf(f, "<circle cx='%.4f' cy='%.4f' r='0.08' fill='%s'/>\n", X, -Y,
                     color);
    }
    std::fprintf(f, "</svg>\n");
    std::fclose(f);
}

}  // namespace eqharm
