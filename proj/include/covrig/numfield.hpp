#pragma once

/* Exact arithmetic in the real quadratic field Q(sqrt(d)) and the small
 * pieces of Lorentzian linear algebra built on top of it: the bilinear
 * form J = diag(1,...,1,-1), hyperplane reflections, and a basis of the
 * Lie algebra o(n,1).  Everything here is exact; the only bridge to
 * floating point is to_double(), which rounds each component once.
 */

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace covrig {

using Rational = mpq_class;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool is_squarefree(long d);

// a + b*sqrt(d) with rational a, b.  d is a squarefree positive integer;
// d == 1 stands for plain rationals and keeps b identically zero.
class FieldScalar {
  public:
    FieldScalar() = default;
    FieldScalar(long v) : a_(v) {}
    FieldScalar(Rational v) : a_(std::move(v)) {}
    FieldScalar(Rational a, Rational b, long d);

    const Rational& ra() const { return a_; }
    const Rational& rb() const { return b_; }
    long disc() const { return d_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }

    FieldScalar conj() const;         // a - b*sqrt(d)
    Rational norm() const;            // a^2 - d*b^2
    FieldScalar inverse() const;      // throws on zero
    int sign() const;                 // -1, 0, +1
    double to_double() const;
    std::string str() const;

    FieldScalar& operator+=(const FieldScalar& o);
    FieldScalar& operator-=(const FieldScalar& o);
    FieldScalar& operator*=(const FieldScalar& o);
    FieldScalar& operator/=(const FieldScalar& o);
    FieldScalar operator-() const;

    friend bool operator==(const FieldScalar& x, const FieldScalar& y);

  private:
    Rational a_{0}, b_{0};
    long d_{1};

    // both operands brought to a common discriminant before arithmetic
    static long merge_disc(const FieldScalar& x, const FieldScalar& y);
};

FieldScalar operator+(FieldScalar x, const FieldScalar& y);
FieldScalar operator-(FieldScalar x, const FieldScalar& y);
FieldScalar operator*(FieldScalar x, const FieldScalar& y);
FieldScalar operator/(FieldScalar x, const FieldScalar& y);
inline bool operator!=(const FieldScalar& x, const FieldScalar& y) { return !(x == y); }

using FieldVector = std::vector<FieldScalar>;

class FieldMatrix {
  public:
    FieldMatrix() = default;
    FieldMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(size_t(rows) * cols) {}

    static FieldMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    FieldScalar& at(int i, int j) { return e_[size_t(i) * cols_ + j]; }
    const FieldScalar& at(int i, int j) const { return e_[size_t(i) * cols_ + j]; }

    FieldMatrix transpose() const;
    bool is_zero() const;

    friend bool operator==(const FieldMatrix& x, const FieldMatrix& y);

  private:
    int rows_{0}, cols_{0};
    std::vector<FieldScalar> e_;
};

FieldMatrix operator*(const FieldMatrix& x, const FieldMatrix& y);
FieldMatrix operator+(const FieldMatrix& x, const FieldMatrix& y);
FieldMatrix operator-(const FieldMatrix& x, const FieldMatrix& y);
FieldMatrix operator-(const FieldMatrix& x);
inline bool operator!=(const FieldMatrix& x, const FieldMatrix& y) { return !(x == y); }

// diag(1,...,1,-1) of size n1 = n+1
FieldMatrix lorentz_form(int n1);

// u^T J v; both vectors must have the same length
FieldScalar lorentz_product(const FieldVector& u, const FieldVector& v);

// R = I - 2 v (v^T J) / <v,v>.  Requires <v,v> > 0 (spacelike normal).
// The result is an exact involution with R^T J R = J; both are asserted.
FieldMatrix reflection_matrix(const FieldVector& v);

// basis of {A : A^T J + J A = 0}: n(n-1)/2 spatial rotations followed by
// n boost generators, n(n+1)/2 matrices in all
std::vector<FieldMatrix> lie_algebra_basis(int n);

inline int lie_algebra_dim(int n) { return n * (n + 1) / 2; }

bool preserves_lorentz_form(const FieldMatrix& m);
bool is_involution(const FieldMatrix& m);

// inverse of a J-orthogonal matrix, computed as J M^T J
FieldMatrix lorentz_inverse(const FieldMatrix& m);

}  // namespace covrig
