#pragma once

/* Finite windows of the infinite cyclic cover of the oriented complex.
 *
 * A window keeps the vertices (v, t) with m <= t <= n and popcount(v)+t
 * even, every edge lift with both endpoints inside, and every square lift
 * with all four corners inside.  Edges are oriented from even to odd
 * level; each lifted square stores its boundary word g1 g2^-1 g3 g4^-1
 * read from the lexicographically smaller even-level corner, crossing the
 * smaller-id facet first.
 */

#include "covrig/colouring.hpp"

#include <array>
#include <cstdint>

namespace covrig {

struct WVertex {
    uint32_t v = 0;
    int t = 0;
};

struct WEdge {
    int tail = 0, head = 0;  // window vertex ids; tail has even level
    int facet = 0;
};

struct WSquare {
    int fa = 0, fb = 0;      // fa < fb; word letters 1,3 cross fa, letters 2,4 cross fb
    SquareKind kind = SquareKind::Coherent;
    std::array<int, 4> corner{};  // window vertex ids in word order
    std::array<int, 4> g{};       // edge ids of the four word letters
};

struct CoverWindow {
    const OrientedComplex* cx = nullptr;
    int m = 0, n = 0;
    std::vector<WVertex> vertices;
    std::vector<WEdge> edges;
    std::vector<WSquare> squares;

    long vertex_count() const { return (long)vertices.size(); }
    long edge_count() const { return (long)edges.size(); }
    long square_count() const { return (long)squares.size(); }
};

// throws ValidationError if the complex has an invalid square
CoverWindow build_window(const OrientedComplex& cx, int m, int n);

// convenience: the symmetric window [-1, 2s-1] scaled by s >= 1
CoverWindow build_window_scale(const OrientedComplex& cx, int s);

// the deck transformation shifts levels by 2k; returns the shifted window
CoverWindow monodromy_shift(const OrientedComplex& cx, const CoverWindow& w, int k);

// true when the two windows have identical combinatorics after shifting
// levels by 2k (same vertex sets, edges, squares, words)
bool windows_isomorphic(const CoverWindow& a, const CoverWindow& b, int k);

enum class ZigzagTemplate { CoherentCube, BadTimesCoherent };

struct ZigzagReport {
    int dim = 0;
    ZigzagTemplate tmpl = ZigzagTemplate::CoherentCube;
    int offsets_checked = 0;
    bool pass = false;
};

/* Model cube check: on the standard dim-cube with level map
 *   coherent:       sum(x) + offset
 *   bad x coherent: (x1+x2 mod 2) + x3 + ... + offset
 * the subgraph of edges whose endpoint levels lie in {-1,0,1} must be
 * connected and contain every level-0 vertex, for every offset that puts
 * 0 in the level image.  dim in 2..9. */
ZigzagReport check_zigzag(int dim, ZigzagTemplate tmpl);
std::vector<ZigzagReport> check_zigzag_all(int max_dim);

struct StateSearchResult {
    uint32_t mask = 0;                 // bit f set = facet f gets letter O
    std::vector<Letter> letters;
};

/* Enumerates all 2^facets base states and keeps those whose ascending and
 * descending links are nonempty and connected at every complex vertex.
 * Parallel over the mask range; worker count from COVRIG_WORKERS when set.
 * Refuses more than 24 facets. */
std::vector<StateSearchResult> search_states(const Polytope& p, const Colouring& col, const StateRule& rule);

}  // namespace covrig
