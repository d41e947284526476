#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "eqharm/hopf.hpp"

namespace eqharm {

/// Simplicial 3-sphere: boundary complex of the 4-orthoplex, uniformly
/// subdivided `level` times (1 tetrahedron → 8) with every vertex projected
/// back to |Z| = 1. Deterministic: octahedron diagonals chosen by the
/// shortest-diagonal rule, ties broken by smallest vertex id.
struct SphereTriangulation {
    std::vector<CartesianPoint> vertices;
    std::vector<std::array<int, 4>> tetrahedra;
    int level = 0;
};

/// Builds the level-`level` triangulation. Throws std::length_error above the
/// resource cap (default level 8 ≈ 268M tetrahedra would not fit; cap 7).
SphereTriangulation triangulate_sphere3(int level, int level_cap = 7);

/// Census used by validity checks: V, E, F, T and closedness.
struct MeshCensus {
    std::int64_t vertices, edges, faces, tetrahedra;
    bool closed;  // every triangular face has exactly 2 cofacets
    std::int64_t euler_characteristic() const {
        return vertices - edges + faces - tetrahedra;
    }
};
MeshCensus census(const SphereTriangulation& mesh);

/// Writes the complex as an nOFF (dimension 4) text file.
void write_off(const SphereTriangulation& mesh, const std::string& path);

}  // namespace eqharm
