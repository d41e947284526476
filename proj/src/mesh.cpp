#include "eqharm/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

namespace eqharm {

namespace {

std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double distance_sq(const CartesianPoint& a, const CartesianPoint& b) {
    return std::norm(a.z1 - b.z1) + std::norm(a.z2 - b.z2);
}

SphereTriangulation orthoplex_boundary() {
    SphereTriangulation mesh;
    mesh.level = 0;
    // Vertices ±e₀..±e₃ of R⁴ as complex pairs; index 2i is +e_i, 2i+1 is −e_i.
    const double axes[4][4] = {
        {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    for (int i = 0; i < 4; ++i) {
        for (double sign : {1.0, -1.0}) {
            mesh.vertices.push_back({Complex(sign * axes[i][0], sign * axes[i][1]),
                                     Complex(sign * axes[i][2], sign * axes[i][3])});
        }
    }
    // One tetrahedron per orthant: pick +e_i or −e_i on each axis.
    for (int s = 0; s < 16; ++s) {
        mesh.tetrahedra.push_back({0 + ((s >> 0) & 1), 2 + ((s >> 1) & 1),
                                   4 + ((s >> 2) & 1), 6 + ((s >> 3) & 1)});
    }
    return mesh;
}

SphereTriangulation subdivide(const SphereTriangulation& mesh) {
    SphereTriangulation out;
    out.level = mesh.level + 1;
    out.vertices = mesh.vertices;
    out.tetrahedra.reserve(mesh.tetrahedra.size() * 8);

    std::unordered_map<std::uint64_t, int> midpoint;
    midpoint.reserve(mesh.vertices.size() * 4);
    auto mid = [&](int a, int b) {
        const std::uint64_t key = edge_key(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const CartesianPoint& pa = out.vertices[a];
        const CartesianPoint& pb = out.vertices[b];
        const int id = static_cast<int>(out.vertices.size());
        out.vertices.push_back(
            normalized({0.5 * (pa.z1 + pb.z1), 0.5 * (pa.z2 + pb.z2)}));
        midpoint.emplace(key, id);
        return id;
    };

    for (const auto& tet : mesh.tetrahedra) {
        const int a = tet[0], b = tet[1], c = tet[2], d = tet[3];
        const int ab = mid(a, b), ac = mid(a, c), ad = mid(a, d);
        const int bc = mid(b, c), bd = mid(b, d), cd = mid(c, d);
        // Corner tetrahedra.
        out.tetrahedra.push_back({a, ab, ac, ad});
        out.tetrahedra.push_back({b, ab, bc, bd});
        out.tetrahedra.push_back({c, ac, bc, cd});
        out.tetrahedra.push_back({d, ad, bd, cd});
        // Central octahedron: opposite pairs (ab,cd), (ac,bd), (ad,bc).
        // Shortest diagonal, ties by smallest vertex id in the pair.
        struct Diag {
            int p, q;
            std::array<int, 4> equator;
        };
        const Diag diags[3] = {{ab, cd, {ac, ad, bd, bc}},
                               {ac, bd, {ab, ad, cd, bc}},
                               {ad, bc, {ab, bd, cd, ac}}};
        int best = 0;
        double best_len = distance_sq(out.vertices[diags[0].p], out.vertices[diags[0].q]);
        for (int i = 1; i < 3; ++i) {
            const double len =
                distance_sq(out.vertices[diags[i].p], out.vertices[diags[i].q]);
            const double tol = 1e-15;
            if (len < best_len - tol ||
                (len < best_len + tol &&
                 std::min(diags[i].p, diags[i].q) < std::min(diags[best].p, diags[best].q))) {
                best = i;
                best_len = len;
            }
        }
        const Diag& g = diags[best];
        for (int i = 0; i < 4; ++i) {
            out.tetrahedra.push_back({g.p, g.q, g.equator[i], g.equator[(i + 1) % 4]});
        }
    }
    return out;
}

}  // namespace

SphereTriangulation triangulate_sphere3(int level, int level_cap) {
    if (level < 0) throw std::invalid_argument("triangulate_sphere3: level < 0");
    if (level > level_cap) {
        throw std::length_error("triangulate_sphere3: level exceeds configured cap");
    }
    SphereTriangulation mesh = orthoplex_boundary();
    for (int i = 0; i < level; ++i) mesh = subdivide(mesh);
    return mesh;
}

MeshCensus census(const SphereTriangulation& mesh) {
    std::unordered_map<std::uint64_t, int> edges;
    edges.reserve(mesh.vertices.size() * 8);
    // Faces keyed by sorted vertex triple packed into 63 bits (ids < 2^21).
    std::unordered_map<std::uint64_t, int> faces;
    faces.reserve(mesh.tetrahedra.size() * 2);
    if (mesh.vertices.size() >= (1ULL << 21)) {
        throw std::length_error("census: vertex ids exceed the 21-bit face packing");
    }

    for (const auto& tet : mesh.tetrahedra) {
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
                edges.emplace(edge_key(tet[i], tet[j]), 0);
            }
        }
        for (int skip = 0; skip < 4; ++skip) {
            std::array<int, 3> f;
            int k = 0;
            for (int i = 0; i < 4; ++i) {
                if (i != skip) f[k++] = tet[i];
            }
            std::sort(f.begin(), f.end());
            const std::uint64_t key = (static_cast<std::uint64_t>(f[0]) << 42) |
                                      (static_cast<std::uint64_t>(f[1]) << 21) |
                                      static_cast<std::uint64_t>(f[2]);
            ++faces[key];
        }
    }
    bool closed = true;
    for (const auto& [key, count] : faces) {
        (void)key;
        if (count != 2) closed = false;
    }
    return {static_cast<std::int64_t>(mesh.vertices.size()),
            static_cast<std::int64_t>(edges.size()),
            static_cast<std::int64_t>(faces.size()),
            static_cast<std::int64_t>(mesh.tetrahedra.size()), closed};
}

void write_off(const SphereTriangulation& mesh, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_off: cannot open " + path);
    std::fprintf(f, "nOFF\n4\n%zu %zu 0\n", mesh.vertices.size(), mesh.tetrahedra.size());
    for (const auto& v : mesh.vertices) {
        std::fprintf(f, "%.17g %.17g %.17g %.17g\n", v.z1.real(), v.z1.imag(),
                     v.z2.real(), v.z2.imag());
    }
    for (const auto& t : mesh.tetrahedra) {
        std::fprintf(f, "4 %d %d %d %d\n", t[0], t[1], t[2], t[3]);
    }
    std::fclose(f);
}

}  // namespace eqharm
