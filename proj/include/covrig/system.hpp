#pragma once

/* Assembly of the sparse linear system over Q(sqrt(d)) whose kernel is
 * the cocycle space of a cover window.
 *
 * Unknowns are one (dim+1)x(dim+1) matrix D_e per window edge, stored
 * row-major in column block e of width (dim+1)^2.  Rows come in two
 * families: tangency rows forcing D_e to lie in the tangent space of the
 * isometry group at the edge reflection, and relator rows forcing the
 * derivative of each square word g1 g2^-1 g3 g4^-1 to vanish.
 *
 * Pre-elimination instead writes D_e = sum_l y_{e,l} B_l M_e over the Lie
 * algebra basis B_l, which satisfies the tangency rows identically and
 * shrinks the columns to dim_g per edge; only relator rows remain.
 */

#include "covrig/cover.hpp"

#include <iosfwd>

namespace covrig {

using SparseVec = std::vector<std::pair<int32_t, FieldScalar>>;  // sorted by column

struct SparseSystem {
    long rows = 0, cols = 0;
    int block = 0;  // columns per edge
    long disc = 1;
    std::vector<SparseVec> row;
};

enum class AssemblyMode { Simplified, Generic };

SparseSystem assemble(const CoverWindow& w, AssemblyMode mode, bool pre_eliminate = false);

// one vector per (window vertex, Lie basis element): the coboundary
// cocycle with block M_e B at the head of each incident edge and -B M_e
// at the tail; these always lie in the kernel of the assembled system
std::vector<SparseVec> coboundary_vectors(const CoverWindow& w);

// residual of a vector against the system rows, as a double via the
// float embedding; exact satisfaction checked with is_in_kernel
double residual(const SparseSystem& s, const SparseVec& x);
bool is_in_kernel(const SparseSystem& s, const SparseVec& x);

// text interchange: exact entries as rational component pairs, and a
// float mirror where every value is the correctly rounded double of the
// exact entry, printed as a C hex literal
void export_exact(const SparseSystem& s, std::ostream& os);
void export_float_mirror(const SparseSystem& s, std::ostream& os);
SparseSystem import_exact(std::istream& is);

struct SizeEstimate {
    long long rows = 0, cols = 0;
};

// closed-form size of the system for the window [-1, 2s-1]
SizeEstimate system_size_estimate(int dim, long nf, long ncodim2, int c, int s);

}  // namespace covrig
