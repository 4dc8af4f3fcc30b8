#include "covrig/system.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace covrig {

namespace {

SparseVec compress(const std::map<int32_t, FieldScalar>& acc) {
    SparseVec out;
    out.reserve(acc.size());
    for (const auto& [c, v] : acc)
        if (!v.is_zero()) out.emplace_back(c, v);
    return out;
}

struct Term {
    int edge;
    FieldMatrix L, R;
};

// relator term factors for the word g1 g2^-1 g3 g4^-1 with images
// M1, M2^-1, M1, M2^-1
std::vector<Term> word_terms(const WSquare& sq, const FieldMatrix& M1, const FieldMatrix& M2,
                             AssemblyMode mode) {
    std::vector<Term> ts;
    if (mode == AssemblyMode::Simplified) {
        // reflections are involutions and the holonomy is the identity, so
        // the prefix/suffix products collapse
        FieldMatrix M12 = M1 * M2;
        ts.push_back({sq.g[0], FieldMatrix::identity(M1.rows(), M1.disc()), M1});
        ts.push_back({sq.g[1], -M12, M1});
        ts.push_back({sq.g[2], M12, M2});
        ts.push_back({sq.g[3], -FieldMatrix::identity(M1.rows(), M1.disc()), M2});
    } else {
        FieldMatrix M2i = lorentz_inverse(M2);
        FieldMatrix P3 = M1 * M2i;
        ts.push_back({sq.g[0], FieldMatrix::identity(M1.rows(), M1.disc()), M2i * M1 * M2i});
        ts.push_back({sq.g[1], -(M1 * M2i), M2i * M1 * M2i});
        ts.push_back({sq.g[2], P3, M2i});
        ts.push_back({sq.g[3], -(P3 * M1 * M2i), M2i});
    }
    return ts;
}

}  // namespace

SparseSystem assemble(const CoverWindow& w, AssemblyMode mode, bool pre_eliminate) {
    const Polytope& p = *w.cx->poly;
    int n1 = p.dim + 1;
    int full = n1 * n1;
    int dg = lie_algebra_dim(p.dim);
    long ne = w.edge_count();

    SparseSystem s;
    s.disc = p.disc;
    s.block = pre_eliminate ? dg : full;
    s.cols = (long)s.block * ne;

    std::vector<FieldMatrix> basis;
    std::vector<std::vector<FieldMatrix>> bm_cache;  // facet -> B_l * M_f
    if (pre_eliminate) {
        basis = lie_algebra_basis(p.dim);
        bm_cache.resize(p.facet_count());
        for (int f = 0; f < p.facet_count(); ++f)
            for (const auto& B : basis) bm_cache[f].push_back(B * p.reflections[f]);
    }

    if (!pre_eliminate) {
        FieldMatrix J = lorentz_form(n1);
        for (long e = 0; e < ne; ++e) {
            FieldMatrix K = J * p.reflections[w.edges[e].facet];
            long base = e * (long)full;
            // the (a,b) and (b,a) rows coincide; the full square block is
            // kept so row counts match the closed-form system size
            for (int a = 0; a < n1; ++a)
                for (int b = 0; b < n1; ++b) {
                    std::map<int32_t, FieldScalar> acc;
                    for (int k = 0; k < n1; ++k) {
                        acc[int32_t(base + k * n1 + a)] += K.at(k, b);
                        acc[int32_t(base + k * n1 + b)] += K.at(k, a);
                    }
                    s.row.push_back(compress(acc));
                }
        }
    }

    for (const auto& sq : w.squares) {
        const FieldMatrix& M1 = p.reflections[sq.fa];
        const FieldMatrix& M2 = p.reflections[sq.fb];
        auto terms = word_terms(sq, M1, M2, mode);
        if (!pre_eliminate) {
            for (int a = 0; a < n1; ++a)
                for (int b = 0; b < n1; ++b) {
                    std::map<int32_t, FieldScalar> acc;
                    for (const auto& t : terms) {
                        long base = (long)t.edge * full;
                        for (int pp = 0; pp < n1; ++pp) {
                            if (t.L.at(a, pp).is_zero()) continue;
                            for (int q = 0; q < n1; ++q)
                                acc[int32_t(base + pp * n1 + q)] += t.L.at(a, pp) * t.R.at(q, b);
                        }
                    }
                    s.row.push_back(compress(acc));
                }
        } else {
            // coefficient of y_{e,l} at row (a,b) is (L * B_l M_e * R)[a,b]
            std::vector<std::vector<FieldMatrix>> coef;
            for (const auto& t : terms) {
                std::vector<FieldMatrix> per_l;
                for (int l = 0; l < dg; ++l)
                    per_l.push_back(t.L * bm_cache[w.edges[t.edge].facet][l] * t.R);
                coef.push_back(std::move(per_l));
            }
            for (int a = 0; a < n1; ++a)
                for (int b = 0; b < n1; ++b) {
                    std::map<int32_t, FieldScalar> acc;
                    for (size_t ti = 0; ti < terms.size(); ++ti) {
                        long base = (long)terms[ti].edge * dg;
                        for (int l = 0; l < dg; ++l) acc[int32_t(base + l)] += coef[ti][l].at(a, b);
                    }
                    s.row.push_back(compress(acc));
                }
        }
    }
    s.rows = (long)s.row.size();
    return s;
}

std::vector<SparseVec> coboundary_vectors(const CoverWindow& w) {
    const Polytope& p = *w.cx->poly;
    int n1 = p.dim + 1;
    int full = n1 * n1;
    auto basis = lie_algebra_basis(p.dim);
    int dg = (int)basis.size();

    long nv = w.vertex_count();
    std::vector<std::map<int32_t, FieldScalar>> acc(nv * dg);
    for (long e = 0; e < w.edge_count(); ++e) {
        const auto& we = w.edges[e];
        const FieldMatrix& M = p.reflections[we.facet];
        for (int l = 0; l < dg; ++l) {
            FieldMatrix hb = M * basis[l];
            auto& ah = acc[(long)we.head * dg + l];
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < n1; ++j)
                    if (!hb.at(i, j).is_zero()) ah[int32_t(e * full + i * n1 + j)] += hb.at(i, j);
            FieldMatrix tb = basis[l] * M;
            auto& at = acc[(long)we.tail * dg + l];
            for (int i = 0; i < n1; ++i)
                for (int j = 0; j < n1; ++j)
                    if (!tb.at(i, j).is_zero()) at[int32_t(e * full + i * n1 + j)] -= tb.at(i, j);
        }
    }
    std::vector<SparseVec> out;
    out.reserve(acc.size());
    for (auto& a : acc) out.push_back(compress(a));
    return out;
}

double residual(const SparseSystem& s, const SparseVec& x) {
    std::map<int32_t, double> xv;
    for (const auto& [c, v] : x) xv[c] = v.to_double();
    double worst = 0;
    for (const auto& r : s.row) {
        double dot = 0;
        for (const auto& [c, v] : r) {
            auto it = xv.find(c);
            if (it != xv.end()) dot += v.to_double() * it->second;
        }
        worst = std::max(worst, std::fabs(dot));
    }
    return worst;
}

bool is_in_kernel(const SparseSystem& s, const SparseVec& x) {
    std::map<int32_t, FieldScalar> xv;
    for (const auto& [c, v] : x) xv[c] = v;
    for (const auto& r : s.row) {
        FieldScalar dot;
        for (const auto& [c, v] : r) {
            auto it = xv.find(c);
            if (it != xv.end()) dot += v * it->second;
        }
        if (!dot.is_zero()) return false;
    }
    return true;
}

void export_exact(const SparseSystem& s, std::ostream& os) {
    os << "covrig-system " << s.rows << " " << s.cols << " " << s.disc << " " << s.block << "\n";
    for (long r = 0; r < s.rows; ++r)
        for (const auto& [c, v] : s.row[r])
            os << r << " " << c << " " << v.ra().get_num() << " " << v.ra().get_den() << " "
               << v.rb().get_num() << " " << v.rb().get_den() << "\n";
}

void export_float_mirror(const SparseSystem& s, std::ostream& os) {
    os << "covrig-floats " << s.rows << " " << s.cols << "\n";
    char buf[64];
    for (long r = 0; r < s.rows; ++r)
        for (const auto& [c, v] : s.row[r]) {
            std::snprintf(buf, sizeof buf, "%a", v.to_double());
            os << r << " " << c << " " << buf << "\n";
        }
}

SparseSystem import_exact(std::istream& is) {
    std::string magic;
    SparseSystem s;
    if (!(is >> magic) || magic != "covrig-system")
        throw InputError("system file must start with 'covrig-system'");
    if (!(is >> s.rows >> s.cols >> s.disc >> s.block))
        throw InputError("bad system file header");
    if (s.rows < 0 || s.cols < 0) throw InputError("negative system dimensions");
    s.row.resize(s.rows);
    long r, c;
    std::string an, ad, bn, bd;
    long prev_r = -1, prev_c = -1;
    while (is >> r >> c >> an >> ad >> bn >> bd) {
        if (r < 0 || r >= s.rows || c < 0 || c >= s.cols)
            throw InputError("system entry out of range");
        if (r < prev_r || (r == prev_r && c <= prev_c))
            throw InputError("system entries must be sorted by row then column");
        prev_r = r;
        prev_c = c;
        if (ad == "0" || bd == "0") throw InputError("zero denominator in system file");
        try {
            Rational a(an + "/" + ad), b(bn + "/" + bd);
            a.canonicalize();
            b.canonicalize();
            s.row[r].emplace_back((int32_t)c, FieldScalar(a, b, s.disc));
        } catch (const std::invalid_argument&) {
            throw InputError("bad rational in system file");
        }
    }
    if (!is.eof() && is.fail() && !is.bad()) throw InputError("malformed system entry line");
    return s;
}

SizeEstimate system_size_estimate(int dim, long nf, long ncodim2, int c, int s) {
    if (dim < 2 || nf < 1 || ncodim2 < 0 || c < 2 || s < 1)
        throw InputError("size estimate needs dim >= 2, c >= 2, s >= 1");
    long long block = (long long)(dim + 1) * (dim + 1);
    long long edges = nf * ((long long)1 << (c - 1)) * s;
    // squares: ncodim2 * 2^(c-2) base squares, (2s-1) lifts each, half of
    // the boundary lifts falling outside; written as ncodim2*(2s-1)*2^(c-3)
    long long sq8 = ncodim2 * (long long)(2 * s - 1) * ((long long)1 << c);
    if (sq8 % 8 != 0) throw InputError("square count estimate is not integral for these parameters");
    long long squares = sq8 / 8;
    SizeEstimate est;
    est.cols = block * edges;
    est.rows = block * (edges + squares);
    return est;
}

}  // namespace covrig
