#include "covrig/rank.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>

namespace covrig {

const char* engine_name(Engine e) {
    switch (e) {
        case Engine::Numeric: return "numeric";
        case Engine::Exact: return "exact";
        default: return "both";
    }
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Rigid: return "rigid";
        case Verdict::BoundPositive: return "bound-positive";
        default: return "inconclusive";
    }
}

std::vector<double> singular_values(const SparseSystem& s, long dense_cap) {
    if (s.rows == 0 || s.cols == 0) return {};
    if (s.cols > dense_cap || (double)s.rows * (double)s.cols > 2.5e8)
        throw EngineError("system too large for dense SVD (" + std::to_string(s.rows) + "x" +
                          std::to_string(s.cols) + "); use the exact engine or pre-elimination");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(s.rows, s.cols);
    for (long r = 0; r < s.rows; ++r)
        for (const auto& [c, v] : s.row[r]) A(r, c) = v.to_double();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
    const auto& sv = svd.singularValues();
    return std::vector<double>(sv.data(), sv.data() + sv.size());
}

namespace {

struct ZEl {
    mpz_class a, b;  // a + b sqrt(d)
    bool zero() const { return a == 0 && b == 0; }
};

ZEl zmul(const ZEl& x, const ZEl& y, long d) {
    ZEl r;
    r.a = x.a * y.a + d * (x.b * y.b);
    r.b = x.a * y.b + x.b * y.a;
    return r;
}

using ZRow = std::vector<std::pair<int32_t, ZEl>>;

size_t zel_bits(const ZEl& e) {
    size_t ba = mpz_sizeinbase(e.a.get_mpz_t(), 2);
    size_t bb = mpz_sizeinbase(e.b.get_mpz_t(), 2);
    return std::max(ba, bb);
}

void strip_content(ZRow& row) {
    mpz_class g = 0;
    for (const auto& [c, e] : row) {
        g = gcd(g, e.a);
        g = gcd(g, e.b);
    }
    if (g > 1)
        for (auto& [c, e] : row) {
            mpz_divexact(e.a.get_mpz_t(), e.a.get_mpz_t(), g.get_mpz_t());
            mpz_divexact(e.b.get_mpz_t(), e.b.get_mpz_t(), g.get_mpz_t());
        }
}

// clears denominators and strips integer content, both rank-neutral
std::vector<ZRow> integerize(const SparseSystem& s) {
    std::vector<ZRow> rows;
    rows.reserve(s.row.size());
    for (const auto& sr : s.row) {
        if (sr.empty()) continue;
        mpz_class L = 1;
        for (const auto& [c, v] : sr) {
            L = lcm(L, v.ra().get_den());
            L = lcm(L, v.rb().get_den());
        }
        ZRow zr;
        zr.reserve(sr.size());
        for (const auto& [c, v] : sr) {
            ZEl e;
            e.a = v.ra().get_num() * (L / v.ra().get_den());
            e.b = v.rb().get_num() * (L / v.rb().get_den());
            zr.emplace_back(c, e);
        }
        strip_content(zr);
        rows.push_back(std::move(zr));
    }
    return rows;
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

long exact_rank(const SparseSystem& s, uint64_t pivot_seed) {
    std::vector<ZRow> rows = integerize(s);
    size_t nr = rows.size();
    std::vector<bool> alive(nr, true);
    std::vector<long> col_count(s.cols, 0);
    for (const auto& r : rows)
        for (const auto& [c, e] : r) ++col_count[c];

    bool progress = s.cols >= 1024 && s.rows >= 1024;
    long maxrank = std::min((long)nr, s.cols);
    long rank = 0;
    long live = (long)nr;

    while (live > 0) {
        // Markowitz pivot: minimize fill estimate, then entry size; ties
        // broken by position, or by hash when a pivot seed is given
        long best_r = -1, best_c = -1;
        long best_score = std::numeric_limits<long>::max();
        size_t best_bits = 0;
        uint64_t best_h = 0;
        for (size_t r = 0; r < nr; ++r) {
            if (!alive[r] || rows[r].empty()) continue;
            long rn = (long)rows[r].size() - 1;
            for (const auto& [c, e] : rows[r]) {
                long score = rn * (col_count[c] - 1);
                if (score > best_score) continue;
                size_t bits = zel_bits(e);
                bool take;
                if (score < best_score) {
                    take = true;
                } else if (pivot_seed != 0) {
                    uint64_t h = splitmix64(pivot_seed ^ (uint64_t(r) << 32) ^ uint64_t(uint32_t(c)));
                    take = best_r < 0 || h < best_h;
                    if (take) best_h = h;
                } else {
                    take = bits < best_bits ||
                           (bits == best_bits && std::make_pair((long)r, (long)c) <
                                                     std::make_pair(best_r, best_c));
                }
                if (take) {
                    best_score = score;
                    best_bits = bits;
                    best_r = (long)r;
                    best_c = c;
                    if (pivot_seed != 0)
                        best_h = splitmix64(pivot_seed ^ (uint64_t(r) << 32) ^ uint64_t(uint32_t(c)));
                }
            }
        }
        if (best_r < 0) break;

        ZRow pivot_row = std::move(rows[best_r]);
        alive[best_r] = false;
        --live;
        for (const auto& [c, e] : pivot_row) --col_count[c];
        ZEl pel;
        for (const auto& [c, e] : pivot_row)
            if (c == best_c) pel = e;

        for (size_t r = 0; r < nr; ++r) {
            if (!alive[r]) continue;
            auto it = std::lower_bound(rows[r].begin(), rows[r].end(), best_c,
                                       [](const auto& p, int32_t c) { return p.first < c; });
            if (it == rows[r].end() || it->first != best_c) continue;
            ZEl rel = it->second;
            for (const auto& [c, e] : rows[r]) --col_count[c];
            ZRow nw;
            nw.reserve(rows[r].size() + pivot_row.size());
            auto a = rows[r].begin(), ae = rows[r].end();
            auto b = pivot_row.begin(), be = pivot_row.end();
            while (a != ae || b != be) {
                if (b == be || (a != ae && a->first < b->first)) {
                    nw.emplace_back(a->first, zmul(pel, a->second, s.disc));
                    ++a;
                } else if (a == ae || b->first < a->first) {
                    ZEl t = zmul(rel, b->second, s.disc);
                    t.a = -t.a;
                    t.b = -t.b;
                    nw.emplace_back(b->first, t);
                    ++b;
                } else {
                    ZEl t1 = zmul(pel, a->second, s.disc);
                    ZEl t2 = zmul(rel, b->second, s.disc);
                    t1.a -= t2.a;
                    t1.b -= t2.b;
                    if (!t1.zero()) nw.emplace_back(a->first, t1);
                    ++a;
                    ++b;
                }
            }
            strip_content(nw);
            for (const auto& [c, e] : nw) ++col_count[c];
            rows[r] = std::move(nw);
            if (rows[r].empty()) {
                alive[r] = false;
                --live;
            }
        }
        ++rank;
        if (progress && (rank % 128 == 0 || rank == maxrank)) {
            std::fprintf(stderr, "\rexact elimination: %ld/%ld pivots", rank, maxrank);
            std::fflush(stderr);
        }
    }
    if (progress) std::fprintf(stderr, "\rexact elimination: done, rank %ld   \n", rank);
    return rank;
}

long exact_nullity(const SparseSystem& s, uint64_t pivot_seed) {
    return s.cols - exact_rank(s, pivot_seed);
}

long exact_rank_of_vectors(const std::vector<SparseVec>& vecs, long cols, long disc) {
    SparseSystem s;
    s.rows = (long)vecs.size();
    s.cols = cols;
    s.disc = disc;
    s.row = vecs;
    return exact_rank(s);
}

std::vector<FieldVector> exact_kernel_basis(const SparseSystem& s) {
    if (s.cols > 2048 || (double)s.rows * (double)s.cols > 4e6)
        throw EngineError("kernel basis extraction is dense, refuse beyond 2048 columns");
    long rows = s.rows, cols = s.cols;
    std::vector<FieldVector> m(rows, FieldVector(cols));
    for (long r = 0; r < rows; ++r)
        for (const auto& [c, v] : s.row[r]) m[r][c] = v;

    std::vector<long> pivot_col;
    long pr = 0;
    for (long c = 0; c < cols && pr < rows; ++c) {
        long sel = -1;
        for (long r = pr; r < rows; ++r)
            if (!m[r][c].is_zero()) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        std::swap(m[pr], m[sel]);
        FieldScalar inv = m[pr][c].inverse();
        for (long k = c; k < cols; ++k) m[pr][k] *= inv;
        for (long r = 0; r < rows; ++r) {
            if (r == pr || m[r][c].is_zero()) continue;
            FieldScalar f = m[r][c];
            for (long k = c; k < cols; ++k) m[r][k] -= f * m[pr][k];
        }
        pivot_col.push_back(c);
        ++pr;
    }

    std::vector<bool> is_pivot(cols, false);
    for (long c : pivot_col) is_pivot[c] = true;
    std::vector<FieldVector> basis;
    for (long c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        FieldVector x(cols);
        x[c] = FieldScalar(1);
        for (size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = -m[r][c];
        basis.push_back(std::move(x));
    }
    return basis;
}

RankReport run_rank(const SparseSystem& s, const RankOptions& opts) {
    RankReport rep;
    rep.engine = opts.engine;
    rep.rows = s.rows;
    rep.cols = s.cols;
    rep.tolerance_auto = opts.tolerance == 0;

    bool want_num = opts.engine != Engine::Exact;
    bool want_exact = opts.engine != Engine::Numeric;

    if (want_num) {
        rep.singular_values = singular_values(s, opts.dense_cap);
        rep.sigma_max = rep.singular_values.empty() ? 0.0 : rep.singular_values.front();
        double tol = opts.tolerance;
        if (tol == 0)
            tol = (double)std::max(s.rows, s.cols) * std::numeric_limits<double>::epsilon() * rep.sigma_max;
        if (tol == 0) tol = std::numeric_limits<double>::min();  // all-zero matrix
        rep.tolerance_used = tol;
        long kept = 0;
        for (double v : rep.singular_values)
            if (v >= tol) ++kept;
        rep.nullity_numeric = s.cols - kept;
        if (kept == 0 || kept == (long)rep.singular_values.size())
            rep.gap_ratio = std::numeric_limits<double>::infinity();
        else
            rep.gap_ratio = rep.singular_values[kept - 1] / rep.singular_values[kept];
        rep.certified = rep.gap_ratio >= opts.cert_threshold;
    }
    if (want_exact) {
        rep.nullity_exact = exact_nullity(s, opts.pivot_seed);
        rep.certified = true;
    }

    if (want_num && want_exact && rep.nullity_numeric != rep.nullity_exact)
        throw EngineError("rank engines disagree: numeric nullity " +
                          std::to_string(rep.nullity_numeric) + ", exact nullity " +
                          std::to_string(rep.nullity_exact));
    rep.nullity = want_exact ? rep.nullity_exact : rep.nullity_numeric;
    return rep;
}

RigidityReport h1_verdict(const SparseSystem& s, int dim_g, long vertex_count, const RankOptions& opts) {
    RigidityReport out;
    out.rank = run_rank(s, opts);
    out.dim_g = dim_g;
    out.vertex_count = vertex_count;
    out.h1_bound = out.rank.nullity - (long)dim_g * vertex_count;
    if (out.h1_bound < 0)
        throw EngineError("kernel smaller than the coboundary space (nullity " +
                          std::to_string(out.rank.nullity) + " < " +
                          std::to_string((long)dim_g * vertex_count) + "), accounting is broken");
    if (out.rank.certified)
        out.verdict = out.h1_bound == 0 ? Verdict::Rigid : Verdict::BoundPositive;
    else
        out.verdict = Verdict::Inconclusive;
    return out;
}

OracleReport groupoid_group_oracle(const CoverWindow& w, AssemblyMode mode, uint64_t tree_seed) {
    SparseSystem s = assemble(w, mode);
    int dg = lie_algebra_dim(w.cx->poly->dim);

    long nv = w.vertex_count();
    std::vector<std::vector<std::pair<int, long>>> adj(nv);  // vertex -> (other, edge)
    std::vector<long> order(w.edge_count());
    for (long e = 0; e < w.edge_count(); ++e) order[e] = e;
    if (tree_seed != 0) {
        // deterministic shuffle keyed by the seed, to vary the forest choice
        std::sort(order.begin(), order.end(), [&](long a, long b) {
            return splitmix64(tree_seed ^ (uint64_t)a) < splitmix64(tree_seed ^ (uint64_t)b);
        });
    }
    for (long e : order) {
        adj[w.edges[e].tail].push_back({w.edges[e].head, e});
        adj[w.edges[e].head].push_back({w.edges[e].tail, e});
    }

    OracleReport rep;
    std::vector<bool> vis(nv, false);
    std::vector<long> tree;
    for (long root = 0; root < nv; ++root) {
        if (vis[root]) continue;
        ++rep.components;
        std::queue<long> q;
        q.push(root);
        vis[root] = true;
        while (!q.empty()) {
            long u = q.front();
            q.pop();
            for (auto [v, e] : adj[u])
                if (!vis[v]) {
                    vis[v] = true;
                    tree.push_back(e);
                    q.push(v);
                }
        }
    }
    rep.tree_edges = (long)tree.size();

    SparseSystem grp = s;
    for (long e : tree)
        for (int k = 0; k < s.block; ++k)
            grp.row.push_back({{int32_t(e * s.block + k), FieldScalar(1)}});
    grp.rows = (long)grp.row.size();

    rep.groupoid_nullity = exact_nullity(s);
    rep.group_nullity = exact_nullity(grp);
    rep.holds = rep.groupoid_nullity == rep.group_nullity + (long)dg * (nv - rep.components);
    return rep;
}

}  // namespace covrig
