#pragma once

/* Right-angled polytope data: facet normals over Q(sqrt(d)), the facet
 * adjacency relation (two facets are adjacent exactly when their normals
 * are J-orthogonal), and the cached reflection matrices.  Input files are
 * JSON; see data/octahedron.json for the layout.
 */

#include "covrig/numfield.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace covrig {

struct Facet {
    int id = 0;
    FieldVector normal;
};

struct DeclaredCounts {
    std::optional<long> ideal_vertices;
    std::optional<long> real_vertices;
    std::optional<long> facets;
};

struct Polytope {
    std::string name;
    int dim = 0;   // hyperbolic dimension n; normals have n+1 entries
    long disc = 1;
    std::vector<Facet> facets;
    std::vector<std::vector<bool>> adjacency;
    std::vector<std::pair<int, int>> codim2;  // adjacent pairs, lexicographic
    std::vector<FieldMatrix> reflections;
    DeclaredCounts declared;

    int facet_count() const { return int(facets.size()); }
    bool adjacent(int i, int j) const { return adjacency[i][j]; }
};

// adjacency from exact orthogonality of normals
std::vector<std::vector<bool>> compute_adjacency(const std::vector<Facet>& facets);

// parse + validate: spacelike normals, consistent dimension, squarefree
// discriminant, declared adjacency/codim2/counts checked when present
Polytope parse_polytope(const std::string& json_text, const std::string& origin);
Polytope load_polytope(const std::string& path);

// ideal right-angled octahedron in H^3: 8 facets with normals
// (s1, s2, s3, -1), s in {+1,-1}^3, adjacency = one sign flipped
Polytope builtin_octahedron();

std::string read_file(const std::string& path);

}  // namespace covrig
