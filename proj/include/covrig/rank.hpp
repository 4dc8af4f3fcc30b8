#pragma once

/* Two independent rank engines and the rigidity verdict built on them.
 *
 * Numeric: dense SVD of the float mirror; the nullity is the number of
 * columns minus the count of singular values at or above the tolerance,
 * and the gap ratio (smallest kept over largest cut singular value)
 * measures how well separated that decision is.  A verdict is only
 * certified numerically when the gap clears the certification threshold.
 *
 * Exact: fraction-free elimination over Z[sqrt(d)] with per-row content
 * stripping and Markowitz-style pivoting.  Row scaling never changes
 * rank, so the pivot count is the exact rank over Q(sqrt(d)).
 */

#include "covrig/system.hpp"

#include <cstdint>

namespace covrig {

enum class Engine { Numeric, Exact, Both };
enum class Verdict { Rigid, BoundPositive, Inconclusive };

const char* engine_name(Engine e);
const char* verdict_name(Verdict v);

struct RankOptions {
    Engine engine = Engine::Both;
    double tolerance = 0;         // 0 picks max(rows,cols) * eps * sigma_max
    double cert_threshold = 1e6;  // minimum numeric gap ratio for certification
    uint64_t pivot_seed = 0;      // nonzero shuffles exact pivot tie-breaks
    long dense_cap = 20000;       // refuse dense SVD beyond this many columns
};

struct RankReport {
    Engine engine = Engine::Both;
    long rows = 0, cols = 0;
    long nullity = -1;  // reconciled value; engines must agree when both run
    long nullity_numeric = -1, nullity_exact = -1;
    std::vector<double> singular_values;
    double tolerance_used = 0;
    bool tolerance_auto = true;
    double sigma_max = 0;
    double gap_ratio = 0;  // +inf when nothing was cut
    bool certified = false;
};

std::vector<double> singular_values(const SparseSystem& s, long dense_cap);
long exact_rank(const SparseSystem& s, uint64_t pivot_seed = 0);
long exact_nullity(const SparseSystem& s, uint64_t pivot_seed = 0);

// reduced kernel basis over Q(sqrt(d)); dense Gauss-Jordan, small systems only
std::vector<FieldVector> exact_kernel_basis(const SparseSystem& s);

// exact rank of a stack of sparse vectors in a `cols`-dimensional space
long exact_rank_of_vectors(const std::vector<SparseVec>& vecs, long cols, long disc);

RankReport run_rank(const SparseSystem& s, const RankOptions& opts);

struct RigidityReport {
    RankReport rank;
    int dim_g = 0;
    long vertex_count = 0;
    long h1_bound = -1;  // nullity - dim_g * vertex_count
    Verdict verdict = Verdict::Inconclusive;
};

// throws EngineError if the bound comes out negative, which would mean
// the coboundary space does not inject into the kernel
RigidityReport h1_verdict(const SparseSystem& s, int dim_g, long vertex_count, const RankOptions& opts);

struct OracleReport {
    long groupoid_nullity = -1;
    long group_nullity = -1;
    long tree_edges = 0;
    long components = 0;
    bool holds = false;  // groupoid = group + dim_g * (vertices - components)
};

// independent cross-check: contracting a spanning forest (forcing D_e = 0
// on tree edges) must shrink the nullity by dim_g per contracted vertex
OracleReport groupoid_group_oracle(const CoverWindow& w, AssemblyMode mode, uint64_t tree_seed = 0);

}  // namespace covrig
