#pragma once

/* Proper facet colourings, I/O state assignments with their propagation
 * rules, and the oriented dual cube complex they induce.
 *
 * Complex vertices are bitmasks v over the c colours.  Both propagation
 * rules flip the letter of facet F at vertex v exactly when
 * popcount(v & flip_mask(F)) is odd: the independent rule uses the bit of
 * colour(F), the paired rule the two bits of the pair containing
 * colour(F).  Edges join v and v ^ e_colour(F); squares sit over the
 * codim-2 faces of the polytope.
 */

#include "covrig/polytope.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace covrig {

struct Colouring {
    int c = 0;
    std::vector<int> colour;  // facet id -> colour in 0..c-1
};

// empty result means proper: every facet coloured in range, adjacent
// facets never share a colour
std::vector<std::string> validate_colouring(const Polytope& p, const Colouring& col);

Colouring load_colouring(const std::string& path, const Polytope& p);
Colouring parse_colouring(const std::string& text, const std::string& origin, const Polytope& p);

enum class Letter : uint8_t { I = 0, O = 1 };

inline char letter_char(Letter l) { return l == Letter::O ? 'O' : 'I'; }

enum class RuleKind { Independent, Paired };

struct StateRule {
    RuleKind kind = RuleKind::Independent;
    // paired only: pair_of[colour] = partner colour, a perfect matching
    std::vector<int> pair_of;
};

struct State {
    StateRule rule;
    std::vector<Letter> letter;  // facet id -> letter at the base vertex
};

State load_state(const std::string& path, const Polytope& p, const Colouring& col);
State parse_state(const std::string& text, const std::string& origin, const Polytope& p, const Colouring& col);

// checks rule shape (paired needs even c and a perfect matching on colours)
void validate_rule(const StateRule& rule, int c);

enum class SquareKind : uint8_t { Coherent, Bad, Invalid };

struct CEdge {
    uint32_t even_v = 0;  // endpoint of even parity
    int facet = 0;        // dual facet; other endpoint is even_v ^ e_colour
};

// square over codim-2 face {f1, f2} (f1 < f2), at base vertex with both
// colour bits zero.  Corners in order A = base, B = A^e1, C = B^e2,
// D = A^e2; off_* are the lift level offsets of B, C, D relative to A.
struct CSquare {
    int f1 = 0, f2 = 0;
    uint32_t base = 0;
    SquareKind kind = SquareKind::Invalid;
    int off_b = 0, off_c = 0, off_d = 0;
};

struct OrientedComplex {
    const Polytope* poly = nullptr;
    Colouring col;
    State st;
    std::vector<uint32_t> flip_mask;  // facet id -> colour bits that flip its letter
    std::vector<CEdge> edges;
    std::vector<CSquare> squares;

    uint64_t vertex_count() const { return uint64_t(1) << col.c; }
    int facet_count() const { return poly->facet_count(); }

    Letter letter_at(uint32_t v, int facet) const {
        bool flip = __builtin_popcount(v & flip_mask[facet]) & 1;
        return flip ? Letter(1 - uint8_t(st.letter[facet])) : st.letter[facet];
    }
    std::vector<Letter> state_at(uint32_t v) const;
};

// validates colouring and rule, classifies all squares, and checks that
// the two endpoint states of every edge orient it the same way
OrientedComplex build_oriented_complex(const Polytope& p, Colouring col, State st);

struct LinkReport {
    uint32_t v = 0;
    int ascending_size = 0, descending_size = 0;
    bool ascending_connected = false, descending_connected = false;
    bool ok() const { return ascending_connected && descending_connected; }
};

// ascending link at v = facets with letter O, descending = letter I, both
// as induced subgraphs of the facet adjacency graph; each must be
// nonempty and connected
std::vector<LinkReport> check_links(const OrientedComplex& cx);
bool links_all_ok(const OrientedComplex& cx);

struct QuasiReport {
    bool ok = false;
    long coherent = 0, bad = 0, invalid = 0;
    long cubes_checked = 0;
    std::string offending;  // empty when ok
};

// every cube of the complex (cliques of the facet adjacency graph) must
// be coherently oriented or a bad square times a coherently oriented cube
QuasiReport validate_quasi_coherence(const OrientedComplex& cx);

}  // namespace covrig
