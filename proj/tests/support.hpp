#pragma once

// shared fixtures and independent oracles for the test suite

#include "covrig/pipeline.hpp"

#include <cmath>
#include <queue>
#include <string>
#include <vector>

namespace testsup {

using namespace covrig;

inline std::string data_path(const std::string& name) {
    return std::string(COVRIG_DATA_DIR) + "/" + name;
}

inline FieldScalar fs(long a, long b, long d) {
    return FieldScalar(Rational(a), Rational(b), d);
}

// dense double-precision rank by Gaussian elimination with partial
// pivoting; second numeric opinion, no SVD involved
inline long naive_double_rank(const SparseSystem& s, double tol) {
    std::vector<std::vector<double>> a((size_t)s.rows, std::vector<double>((size_t)s.cols, 0.0));
    for (long r = 0; r < s.rows; ++r)
        for (const auto& [c, v] : s.row[r]) a[r][c] = v.to_double();
    long rank = 0;
    long rr = 0;
    for (long c = 0; c < s.cols && rr < s.rows; ++c) {
        long best = -1;
        double mag = tol;
        for (long r = rr; r < s.rows; ++r)
            if (std::fabs(a[r][c]) > mag) {
                mag = std::fabs(a[r][c]);
                best = r;
            }
        if (best < 0) continue;
        std::swap(a[rr], a[best]);
        for (long r = 0; r < s.rows; ++r) {
            if (r == rr || a[r][c] == 0.0) continue;
            double f = a[r][c] / a[rr][c];
            for (long k = c; k < s.cols; ++k) a[r][k] -= f * a[rr][k];
        }
        ++rank;
        ++rr;
    }
    return rank;
}

// dense field-arithmetic rank with division at every pivot; textbook
// algorithm, deliberately different from the fraction-free sparse engine
inline long naive_field_rank(const SparseSystem& s) {
    std::vector<FieldVector> a((size_t)s.rows, FieldVector((size_t)s.cols));
    for (long r = 0; r < s.rows; ++r)
        for (const auto& [c, v] : s.row[r]) a[r][c] = v;
    long rank = 0;
    long rr = 0;
    for (long c = 0; c < s.cols && rr < s.rows; ++c) {
        long sel = -1;
        for (long r = rr; r < s.rows; ++r)
            if (!a[r][c].is_zero()) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        std::swap(a[rr], a[sel]);
        FieldScalar inv = a[rr][c].inverse();
        for (long k = c; k < s.cols; ++k) a[rr][k] *= inv;
        for (long r = rr + 1; r < s.rows; ++r) {
            if (a[r][c].is_zero()) continue;
            FieldScalar f = a[r][c];
            for (long k = c; k < s.cols; ++k) a[r][k] -= f * a[rr][k];
        }
        ++rank;
        ++rr;
    }
    return rank;
}

// the octahedron with the all-plus and all-minus facets removed; the six
// remaining facets form a hexagonal adjacency cycle
inline Polytope hexagon() {
    static const char* text = R"({
      "name": "hexagon",
      "dimension": 3,
      "discriminant": 1,
      "facets": [
        {"id": 0, "normal": [[1,1,0,1],[1,1,0,1],[-1,1,0,1],[-1,1,0,1]]},
        {"id": 1, "normal": [[1,1,0,1],[-1,1,0,1],[1,1,0,1],[-1,1,0,1]]},
        {"id": 2, "normal": [[-1,1,0,1],[1,1,0,1],[1,1,0,1],[-1,1,0,1]]},
        {"id": 3, "normal": [[1,1,0,1],[-1,1,0,1],[-1,1,0,1],[-1,1,0,1]]},
        {"id": 4, "normal": [[-1,1,0,1],[1,1,0,1],[-1,1,0,1],[-1,1,0,1]]},
        {"id": 5, "normal": [[-1,1,0,1],[-1,1,0,1],[1,1,0,1],[-1,1,0,1]]}
      ]
    })";
    return parse_polytope(text, "hexagon");
}

// proper 2-colouring from a BFS bipartition of the adjacency graph;
// independent of how any data file was written
inline Colouring bipartition_colouring(const Polytope& p) {
    Colouring col;
    col.c = 2;
    col.colour.assign(p.facet_count(), -1);
    for (int root = 0; root < p.facet_count(); ++root) {
        if (col.colour[root] != -1) continue;
        col.colour[root] = 0;
        std::queue<int> q;
        q.push(root);
        while (!q.empty()) {
            int f = q.front();
            q.pop();
            for (int g = 0; g < p.facet_count(); ++g)
                if (p.adjacent(f, g) && col.colour[g] == -1) {
                    col.colour[g] = 1 - col.colour[f];
                    q.push(g);
                }
        }
    }
    return col;
}

// proper 3-colouring of the octahedron facet graph, fixed by hand
inline Colouring octa_three_colouring() {
    Colouring col;
    col.c = 3;
    col.colour = {0, 1, 1, 1, 0, 0, 2, 1};
    return col;
}

inline State independent_state(const std::vector<int>& bits) {
    State st;
    for (int b : bits) st.letter.push_back(b ? Letter::O : Letter::I);
    return st;
}

}  // namespace testsup
