#include "covrig/numfield.hpp"

#include <cmath>
#include <sstream>

namespace covrig {

bool is_squarefree(long d) {
    if (d < 1) return false;
    for (long p = 2; p * p <= d; ++p) {
        if (d % (p * p) == 0) return false;
    }
    return true;
}

FieldScalar::FieldScalar(Rational a, Rational b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
    if (d_ < 1) throw InputError("discriminant must be >= 1");
    if (d_ == 1) {  // sqrt(1) = 1: fold into the rational part
        a_ += b_;
        b_ = 0;
    } else if (b_ == 0) {
        d_ = 1;
    }
}

long FieldScalar::merge_disc(const FieldScalar& x, const FieldScalar& y) {
    if (x.d_ == y.d_) return x.d_;
    if (x.d_ == 1) return y.d_;
    if (y.d_ == 1) return x.d_;
    throw InputError("mixed discriminants " + std::to_string(x.d_) + " and " + std::to_string(y.d_));
}

FieldScalar FieldScalar::conj() const {
    FieldScalar r = *this;
    r.b_ = -r.b_;
    return r;
}

Rational FieldScalar::norm() const { return a_ * a_ - d_ * b_ * b_; }

FieldScalar FieldScalar::inverse() const {
    if (is_zero()) throw EngineError("division by zero scalar");
    // (a + b s)^-1 = (a - b s) / (a^2 - d b^2); the norm of a nonzero
    // element is nonzero because d is squarefree
    Rational n = norm();
    FieldScalar r = conj();
    r.a_ /= n;
    r.b_ /= n;
    if (r.b_ == 0) r.d_ = 1;
    return r;
}

int FieldScalar::sign() const {
    int sa = sgn(a_), sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: compare a^2 against d b^2
    int c = cmp(a_ * a_, d_ * b_ * b_);
    return c == 0 ? 0 : (c > 0 ? sa : sb);
}

double FieldScalar::to_double() const {
    double x = a_.get_d();
    if (b_ != 0) x += b_.get_d() * std::sqrt(double(d_));
    return x;
}

std::string FieldScalar::str() const {
    std::ostringstream os;
    os << a_;
    if (b_ != 0) os << (sgn(b_) < 0 ? "" : "+") << b_ << "*sqrt(" << d_ << ")";
    return os.str();
}

FieldScalar& FieldScalar::operator+=(const FieldScalar& o) {
    d_ = merge_disc(*this, o);
    a_ += o.a_;
    b_ += o.b_;
    if (b_ == 0) d_ = 1;
    return *this;
}

FieldScalar& FieldScalar::operator-=(const FieldScalar& o) {
    d_ = merge_disc(*this, o);
    a_ -= o.a_;
    b_ -= o.b_;
    if (b_ == 0) d_ = 1;
    return *this;
}

FieldScalar& FieldScalar::operator*=(const FieldScalar& o) {
    long d = merge_disc(*this, o);
    Rational a = a_ * o.a_ + Rational(d) * b_ * o.b_;
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(a);
    b_ = std::move(b);
    d_ = (b_ == 0) ? 1 : d;
    return *this;
}

FieldScalar& FieldScalar::operator/=(const FieldScalar& o) { return *this *= o.inverse(); }

FieldScalar FieldScalar::operator-() const {
    FieldScalar r = *this;
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
}

bool operator==(const FieldScalar& x, const FieldScalar& y) {
    if (x.b_ == 0 && y.b_ == 0) return x.a_ == y.a_;
    return x.d_ == y.d_ && x.a_ == y.a_ && x.b_ == y.b_;
}

FieldScalar operator+(FieldScalar x, const FieldScalar& y) { return x += y; }
FieldScalar operator-(FieldScalar x, const FieldScalar& y) { return x -= y; }
FieldScalar operator*(FieldScalar x, const FieldScalar& y) { return x *= y; }
FieldScalar operator/(FieldScalar x, const FieldScalar& y) { return x /= y; }

FieldMatrix FieldMatrix::identity(int n) {
    FieldMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = FieldScalar(1);
    return m;
}

FieldMatrix FieldMatrix::transpose() const {
    FieldMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool FieldMatrix::is_zero() const {
    for (const auto& x : e_)
        if (!x.is_zero()) return false;
    return true;
}

bool operator==(const FieldMatrix& x, const FieldMatrix& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.e_ == y.e_;
}

FieldMatrix operator*(const FieldMatrix& x, const FieldMatrix& y) {
    if (x.cols() != y.rows()) throw EngineError("matrix shape mismatch in product");
    FieldMatrix r(x.rows(), y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int k = 0; k < x.cols(); ++k) {
            const FieldScalar& xik = x.at(i, k);
            if (xik.is_zero()) continue;
            for (int j = 0; j < y.cols(); ++j) {
                if (y.at(k, j).is_zero()) continue;
                r.at(i, j) += xik * y.at(k, j);
            }
        }
    return r;
}

FieldMatrix operator+(const FieldMatrix& x, const FieldMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) throw EngineError("matrix shape mismatch in sum");
    FieldMatrix r(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) r.at(i, j) = x.at(i, j) + y.at(i, j);
    return r;
}

FieldMatrix operator-(const FieldMatrix& x, const FieldMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) throw EngineError("matrix shape mismatch in difference");
    FieldMatrix r(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) r.at(i, j) = x.at(i, j) - y.at(i, j);
    return r;
}

FieldMatrix operator-(const FieldMatrix& x) {
    FieldMatrix r(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) r.at(i, j) = -x.at(i, j);
    return r;
}

FieldMatrix lorentz_form(int n1) {
    FieldMatrix j = FieldMatrix::identity(n1);
    j.at(n1 - 1, n1 - 1) = FieldScalar(-1);
    return j;
}

FieldScalar lorentz_product(const FieldVector& u, const FieldVector& v) {
    if (u.size() != v.size() || u.empty()) throw EngineError("vector length mismatch in lorentz product");
    FieldScalar s;
    size_t n = u.size() - 1;
    for (size_t i = 0; i < n; ++i) s += u[i] * v[i];
    s -= u[n] * v[n];
    return s;
}

FieldMatrix reflection_matrix(const FieldVector& v) {
    int n1 = int(v.size());
    FieldScalar q = lorentz_product(v, v);
    if (q.sign() <= 0) throw ValidationError("reflection normal is not spacelike");
    FieldScalar two_over_q = FieldScalar(2) / q;
    FieldMatrix r = FieldMatrix::identity(n1);
    // subtract 2 v (v^T J) / <v,v>; J only flips the sign of the last column
    for (int i = 0; i < n1; ++i) {
        if (v[i].is_zero()) continue;
        for (int j = 0; j < n1; ++j) {
            FieldScalar t = two_over_q * v[i] * v[j];
            if (j == n1 - 1) t = -t;
            r.at(i, j) -= t;
        }
    }
    if (!is_involution(r)) throw EngineError("reflection is not an involution");
    if (!preserves_lorentz_form(r)) throw EngineError("reflection does not preserve the form");
    return r;
}

std::vector<FieldMatrix> lie_algebra_basis(int n) {
    std::vector<FieldMatrix> basis;
    basis.reserve(lie_algebra_dim(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            FieldMatrix m(n + 1, n + 1);
            m.at(i, j) = FieldScalar(1);
            m.at(j, i) = FieldScalar(-1);
            basis.push_back(std::move(m));
        }
    for (int i = 0; i < n; ++i) {
        FieldMatrix m(n + 1, n + 1);
        m.at(i, n) = FieldScalar(1);
        m.at(n, i) = FieldScalar(1);
        basis.push_back(std::move(m));
    }
    return basis;
}

bool preserves_lorentz_form(const FieldMatrix& m) {
    FieldMatrix j = lorentz_form(m.rows());
    return m.transpose() * j * m == j;
}

bool is_involution(const FieldMatrix& m) { return m * m == FieldMatrix::identity(m.rows()); }

FieldMatrix lorentz_inverse(const FieldMatrix& m) {
    FieldMatrix j = lorentz_form(m.rows());
    FieldMatrix inv = j * m.transpose() * j;
    if (!(inv * m == FieldMatrix::identity(m.rows()))) throw EngineError("matrix is not J-orthogonal");
    return inv;
}

}  // namespace covrig
