#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <cmath>
#include <random>

using namespace covrig;
using testsup::fs;

TEST_CASE("squarefree detection") {
    for (long d : {1L, 2L, 3L, 5L, 6L, 7L, 10L, 13L, 15L}) CHECK(is_squarefree(d));
    for (long d : {0L, -1L, -2L, 4L, 8L, 9L, 12L, 18L, 50L}) CHECK_FALSE(is_squarefree(d));
}

TEST_CASE("field arithmetic in Q(sqrt(2))") {
    FieldScalar x = fs(1, 1, 2);  // 1 + sqrt(2)
    FieldScalar y = fs(1, -1, 2);
    CHECK(x * y == FieldScalar(-1));
    CHECK((x + y) == FieldScalar(2));
    CHECK(x.conj() == y);
    CHECK(x.norm() == Rational(-1));

    // (1 + sqrt(2))^-1 = sqrt(2) - 1, worked out by hand
    CHECK(x.inverse() == fs(-1, 1, 2));
    CHECK(x * x.inverse() == FieldScalar(1));

    FieldScalar z = fs(3, -2, 2);  // 3 - 2 sqrt(2), inverse 3 + 2 sqrt(2)
    CHECK(z.inverse() == fs(3, 2, 2));
}

TEST_CASE("rational collapse at discriminant 1") {
    FieldScalar v(Rational(2), Rational(5), 1);  // 2 + 5*1
    CHECK(v == FieldScalar(7));
    CHECK(v.is_rational());
    FieldScalar w = fs(1, 0, 3);  // rational value carried at d=3
    CHECK(w.is_rational());
    CHECK(w == FieldScalar(1));
}

TEST_CASE("discriminant coercion and mismatch") {
    FieldScalar one(1);
    FieldScalar r2 = fs(0, 1, 2);
    CHECK((one + r2) == fs(1, 1, 2));
    CHECK_THROWS_AS(fs(0, 1, 2) + fs(0, 1, 3), InputError);
    CHECK_THROWS_AS(FieldScalar(Rational(1), Rational(1), 8), InputError);
}

TEST_CASE("sign without floating point") {
    CHECK(fs(1, -1, 2).sign() > 0);   // 1 - sqrt(2) < 0 flipped: check the value itself
    CHECK(fs(1, -1, 2).sign() == -1);
    CHECK(fs(2, -1, 2).sign() == 1);   // 2 > sqrt(2)
    CHECK(fs(-1, 1, 2).sign() == 1);   // sqrt(2) > 1
    CHECK(fs(3, -2, 2).sign() == 1);   // 9 > 8
    CHECK(fs(-3, 2, 2).sign() == -1);
    CHECK(fs(0, 0, 2).sign() == 0);
    CHECK(fs(0, -1, 5).sign() == -1);
    CHECK(fs(-7, 0, 5).sign() == -1);
    CHECK(fs(2, -1, 3).sign() == 1);   // 4 > 3
    CHECK(fs(-2, 1, 5).sign() == 1);   // 5 > 4
}

TEST_CASE("float embedding stays within a few ulps") {
    // the bound can fail under catastrophic cancellation, so draws keep
    // |a + b sqrt(d)| comparable to |a| + |b| sqrt(d)
    std::mt19937 rng(20260822);
    std::uniform_int_distribution<long> num(-1000, 1000), den(1, 60);
    int tested = 0;
    for (long d : {2L, 3L, 5L}) {
        long double sd = sqrtl((long double)d);
        for (int k = 0; k < 400; ++k) {
            Rational a(num(rng), den(rng)), b(num(rng), den(rng));
            long double ref = (long double)a.get_d() /* exact below */;
            long double la = (long double)mpq_class(a).get_num().get_si() /
                             (long double)mpq_class(a).get_den().get_si();
            long double lb = (long double)mpq_class(b).get_num().get_si() /
                             (long double)mpq_class(b).get_den().get_si();
            (void)ref;
            long double val = la + lb * sd;
            long double mag = fabsl(la) + fabsl(lb) * sd;
            if (mag == 0 || fabsl(val) < mag * 9.5e-7) continue;  // cancellation guard
            ++tested;
            FieldScalar x(a, b, d);
            double got = x.to_double();
            long double err = fabsl((long double)got - val);
            CHECK(err <= 8 * std::numeric_limits<double>::epsilon() * fabsl(val));
        }
    }
    CHECK(tested > 1000);
}

TEST_CASE("lorentz form and product") {
    FieldMatrix J = lorentz_form(4);
    CHECK(J.at(0, 0) == FieldScalar(1));
    CHECK(J.at(3, 3) == FieldScalar(-1));
    FieldVector u = {FieldScalar(1), FieldScalar(1), FieldScalar(1), FieldScalar(-1)};
    CHECK(lorentz_product(u, u) == FieldScalar(2));
    FieldVector w = {FieldScalar(1), FieldScalar(1), FieldScalar(-1), FieldScalar(-1)};
    CHECK(lorentz_product(u, w).is_zero());
}

TEST_CASE("reflection matrix matches the hand-computed octahedron wall") {
    // v = (1,1,1,-1), <v,v> = 2; R = I - v (v^T J), worked out by hand:
    // rows (0,-1,-1,-1), (-1,0,-1,-1), (-1,-1,0,-1), (1,1,1,2)
    FieldVector v = {FieldScalar(1), FieldScalar(1), FieldScalar(1), FieldScalar(-1)};
    FieldMatrix R = reflection_matrix(v);
    long want[4][4] = {{0, -1, -1, -1}, {-1, 0, -1, -1}, {-1, -1, 0, -1}, {1, 1, 1, 2}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(R.at(i, j) == FieldScalar(want[i][j]));
    CHECK(is_involution(R));
    CHECK(preserves_lorentz_form(R));
}

TEST_CASE("reflection with an irrational normal") {
    // v = (1, -sqrt(2), 0) in R^{2,1}, <v,v> = 3;
    // R = [[1/3, 2 sqrt(2)/3, 0], [2 sqrt(2)/3, -1/3, 0], [0,0,1]] by hand
    FieldVector v = {fs(1, 0, 2), fs(0, -1, 2), fs(0, 0, 2)};
    FieldMatrix R = reflection_matrix(v);
    CHECK(R.at(0, 0) == FieldScalar(Rational(1, 3), Rational(0), 2));
    CHECK(R.at(0, 1) == FieldScalar(Rational(0), Rational(2, 3), 2));
    CHECK(R.at(1, 0) == FieldScalar(Rational(0), Rational(2, 3), 2));
    CHECK(R.at(1, 1) == FieldScalar(Rational(-1, 3), Rational(0), 2));
    CHECK(R.at(2, 2) == FieldScalar(1));
    CHECK(R.at(2, 0).is_zero());
    CHECK(is_involution(R));
    CHECK(preserves_lorentz_form(R));
}

TEST_CASE("reflection rejects a lightlike normal") {
    FieldVector v = {FieldScalar(1), FieldScalar(0), FieldScalar(0), FieldScalar(1)};
    CHECK(lorentz_product(v, v).is_zero());
    CHECK_THROWS_AS(reflection_matrix(v), ValidationError);
}

TEST_CASE("lie algebra basis: dimension, tangency, independence, closure") {
    for (int n : {2, 3, 4}) {
        auto basis = lie_algebra_basis(n);
        CHECK((int)basis.size() == n * (n + 1) / 2);
        CHECK(lie_algebra_dim(n) == n * (n + 1) / 2);
        FieldMatrix J = lorentz_form(n + 1);

        // tangent to the form: B^T J + J B = 0
        for (const auto& B : basis) {
            FieldMatrix t = B.transpose() * J + J * B;
            CHECK(t.is_zero());
        }

        // flatten to rows; rank must equal the count (independence)
        SparseSystem flat;
        flat.cols = (n + 1) * (n + 1);
        flat.disc = 1;
        for (const auto& B : basis) {
            SparseVec r;
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j)
                    if (!B.at(i, j).is_zero()) r.emplace_back(i * (n + 1) + j, B.at(i, j));
            flat.row.push_back(r);
        }
        flat.rows = (long)flat.row.size();
        CHECK(testsup::naive_field_rank(flat) == (long)basis.size());

        // brackets stay in the span: adding [B_i, B_j] never raises the rank
        SparseSystem aug = flat;
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = i + 1; j < basis.size(); ++j) {
                FieldMatrix c = basis[i] * basis[j] - basis[j] * basis[i];
                SparseVec r;
                for (int p = 0; p <= n; ++p)
                    for (int q = 0; q <= n; ++q)
                        if (!c.at(p, q).is_zero()) r.emplace_back(p * (n + 1) + q, c.at(p, q));
                if (!r.empty()) aug.row.push_back(r);
            }
        aug.rows = (long)aug.row.size();
        CHECK(testsup::naive_field_rank(aug) == (long)basis.size());
    }
}

TEST_CASE("lorentz inverse inverts isometries") {
    FieldVector v = {FieldScalar(1), FieldScalar(1), FieldScalar(-1), FieldScalar(-1)};
    FieldVector w = {FieldScalar(1), FieldScalar(-1), FieldScalar(1), FieldScalar(-1)};
    FieldMatrix M = reflection_matrix(v) * reflection_matrix(w);
    FieldMatrix I4 = FieldMatrix::identity(4, 1);
    CHECK(M * lorentz_inverse(M) == I4);
    CHECK(lorentz_inverse(M) * M == I4);
}

TEST_CASE("matrix plumbing") {
    FieldMatrix A(2, 2, 1);
    A.at(0, 1) = FieldScalar(3);
    CHECK(A.transpose().at(1, 0) == FieldScalar(3));
    FieldMatrix I2 = FieldMatrix::identity(2, 1);
    CHECK(A * I2 == A);
    CHECK((A - A).is_zero());
    CHECK_FALSE(A.is_zero());
}
