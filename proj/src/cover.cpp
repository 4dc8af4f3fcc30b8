#include "covrig/cover.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <queue>
#include <set>
#include <thread>
#include <tuple>

namespace covrig {

CoverWindow build_window(const OrientedComplex& cx, int m, int n) {
    if (m > n) throw InputError("window [" + std::to_string(m) + "," + std::to_string(n) + "] is empty");
    for (const auto& sq : cx.squares)
        if (sq.kind == SquareKind::Invalid)
            throw ValidationError("complex has a square with inconsistent level offsets over facets " +
                                  std::to_string(sq.f1) + "," + std::to_string(sq.f2));

    CoverWindow w;
    w.cx = &cx;
    w.m = m;
    w.n = n;

    std::map<std::pair<int, uint32_t>, int> vid;  // (t, v) -> id, level-major order
    uint32_t nverts = uint32_t(1) << cx.col.c;
    for (int t = m; t <= n; ++t)
        for (uint32_t v = 0; v < nverts; ++v) {
            if ((__builtin_popcount(v) + t) & 1) continue;
            vid[{t, v}] = (int)w.vertices.size();
            w.vertices.push_back({v, t});
        }

    std::map<std::tuple<int, uint32_t, int>, int> eid;  // (tail t, tail v, facet) -> id
    for (int t = m; t <= n; ++t) {
        if (t & 1) continue;  // edge tails sit at even levels
        for (const auto& e : cx.edges) {
            if ((__builtin_popcount(e.even_v) + t) & 1) continue;
            int th = t + (cx.letter_at(e.even_v, e.facet) == Letter::O ? 1 : -1);
            if (th < m || th > n) continue;
            uint32_t hv = e.even_v ^ (uint32_t(1) << cx.col.colour[e.facet]);
            WEdge we;
            we.tail = vid.at({t, e.even_v});
            we.head = vid.at({th, hv});
            we.facet = e.facet;
            eid[{t, e.even_v, e.facet}] = (int)w.edges.size();
            w.edges.push_back(we);
        }
    }

    for (const auto& sq : cx.squares) {
        int c1 = cx.col.colour[sq.f1], c2 = cx.col.colour[sq.f2];
        uint32_t e1 = uint32_t(1) << c1, e2 = uint32_t(1) << c2;
        uint32_t pa = sq.base, pb = sq.base ^ e1, pc = sq.base ^ e1 ^ e2, pd = sq.base ^ e2;
        for (int t0 = m - 2; t0 <= n + 2; ++t0) {
            if ((__builtin_popcount(sq.base) + t0) & 1) continue;
            int la = t0, lb = t0 + sq.off_b, lc = t0 + sq.off_c, ld = t0 + sq.off_d;
            if (std::min({la, lb, lc, ld}) < m || std::max({la, lb, lc, ld}) > n) continue;

            // both even-level corners lie on one diagonal; the word starts at
            // the smaller of them in (t, v) order and crosses fa first
            uint32_t pos[4] = {pa, pb, pc, pd};
            int lev[4] = {la, lb, lc, ld};
            int start;
            if (!(la & 1)) {
                start = std::make_pair(la, pa) <= std::make_pair(lc, pc) ? 0 : 2;
            } else {
                start = std::make_pair(lb, pb) <= std::make_pair(ld, pd) ? 1 : 3;
            }

            WSquare ws;
            ws.fa = sq.f1;
            ws.fb = sq.f2;
            ws.kind = sq.kind;
            // corner order u1, u2 = u1^e1, u3 = u2^e2, u4 = u3^e1
            int order[4];
            if (start == 0) { order[0] = 0; order[1] = 1; order[2] = 2; order[3] = 3; }
            else if (start == 2) { order[0] = 2; order[1] = 3; order[2] = 0; order[3] = 1; }
            else if (start == 1) { order[0] = 1; order[1] = 0; order[2] = 3; order[3] = 2; }
            else { order[0] = 3; order[1] = 2; order[2] = 1; order[3] = 0; }
            for (int k = 0; k < 4; ++k) ws.corner[k] = vid.at({lev[order[k]], pos[order[k]]});

            auto u = [&](int k) { return std::make_pair(lev[order[k]], pos[order[k]]); };
            ws.g[0] = eid.at({u(0).first, u(0).second, sq.f1});
            ws.g[1] = eid.at({u(2).first, u(2).second, sq.f2});
            ws.g[2] = eid.at({u(2).first, u(2).second, sq.f1});
            ws.g[3] = eid.at({u(0).first, u(0).second, sq.f2});
            if (w.edges[ws.g[0]].head != ws.corner[1] || w.edges[ws.g[1]].head != ws.corner[1] ||
                w.edges[ws.g[2]].head != ws.corner[3] || w.edges[ws.g[3]].head != ws.corner[3])
                throw EngineError("square lift does not close up, level bookkeeping is broken");
            w.squares.push_back(ws);
        }
    }
    return w;
}

CoverWindow build_window_scale(const OrientedComplex& cx, int s) {
    if (s < 1) throw InputError("window scale must be >= 1");
    return build_window(cx, -1, 2 * s - 1);
}

CoverWindow monodromy_shift(const OrientedComplex& cx, const CoverWindow& w, int k) {
    return build_window(cx, w.m + 2 * k, w.n + 2 * k);
}

bool windows_isomorphic(const CoverWindow& a, const CoverWindow& b, int k) {
    auto vkey = [](const CoverWindow& w, int id, int shift) {
        return std::make_pair(w.vertices[id].t + shift, w.vertices[id].v);
    };
    std::set<std::pair<int, uint32_t>> va, vb;
    for (int i = 0; i < (int)a.vertices.size(); ++i) va.insert(vkey(a, i, 2 * k));
    for (int i = 0; i < (int)b.vertices.size(); ++i) vb.insert(vkey(b, i, 0));
    if (va != vb) return false;

    std::set<std::tuple<int, uint32_t, int>> ea, eb;
    for (const auto& e : a.edges) {
        auto t = vkey(a, e.tail, 2 * k);
        ea.insert({t.first, t.second, e.facet});
    }
    for (const auto& e : b.edges) {
        auto t = vkey(b, e.tail, 0);
        eb.insert({t.first, t.second, e.facet});
    }
    if (ea != eb) return false;

    std::set<std::tuple<int, int, int, uint32_t, int>> sa, sb;
    for (const auto& s : a.squares) {
        auto c0 = vkey(a, s.corner[0], 2 * k);
        sa.insert({s.fa, s.fb, c0.first, c0.second, (int)s.kind});
    }
    for (const auto& s : b.squares) {
        auto c0 = vkey(b, s.corner[0], 0);
        sb.insert({s.fa, s.fb, c0.first, c0.second, (int)s.kind});
    }
    return sa == sb;
}

ZigzagReport check_zigzag(int dim, ZigzagTemplate tmpl) {
    if (dim < 2 || dim > 9) throw InputError("zigzag check supports dimensions 2..9");
    ZigzagReport rep;
    rep.dim = dim;
    rep.tmpl = tmpl;
    rep.pass = true;

    auto level = [&](int x, int off) {
        int l = off;
        if (tmpl == ZigzagTemplate::BadTimesCoherent) {
            l += ((x & 1) ^ ((x >> 1) & 1));
            for (int i = 2; i < dim; ++i) l += (x >> i) & 1;
        } else {
            l += __builtin_popcount(x);
        }
        return l;
    };
    int max_base = tmpl == ZigzagTemplate::BadTimesCoherent ? dim - 1 : dim;

    int nv = 1 << dim;
    for (int off = -max_base; off <= 0; ++off) {
        ++rep.offsets_checked;
        std::vector<std::vector<int>> adj(nv);
        std::vector<bool> in_sub(nv, false);
        for (int x = 0; x < nv; ++x) {
            int lx = level(x, off);
            if (lx < -1 || lx > 1) continue;
            for (int i = 0; i < dim; ++i) {
                int y = x ^ (1 << i);
                if (y < x) continue;
                int ly = level(y, off);
                if (ly < -1 || ly > 1) continue;
                adj[x].push_back(y);
                adj[y].push_back(x);
                in_sub[x] = in_sub[y] = true;
            }
        }
        int first = -1, reached = 0, total = 0;
        for (int x = 0; x < nv; ++x)
            if (in_sub[x]) {
                ++total;
                if (first < 0) first = x;
            }
        if (first >= 0) {
            std::vector<bool> vis(nv, false);
            std::queue<int> q;
            q.push(first);
            vis[first] = true;
            reached = 1;
            while (!q.empty()) {
                int x = q.front();
                q.pop();
                for (int y : adj[x])
                    if (!vis[y]) {
                        vis[y] = true;
                        ++reached;
                        q.push(y);
                    }
            }
        }
        bool connected = total > 0 && reached == total;
        bool covers_zero = true;
        for (int x = 0; x < nv; ++x)
            if (level(x, off) == 0 && !in_sub[x]) covers_zero = false;
        if (!connected || !covers_zero) {
            rep.pass = false;
            return rep;
        }
    }
    return rep;
}

std::vector<ZigzagReport> check_zigzag_all(int max_dim) {
    if (max_dim < 2 || max_dim > 9) throw InputError("zigzag check supports dimensions 2..9");
    std::vector<ZigzagReport> out;
    for (int d = 2; d <= max_dim; ++d) {
        out.push_back(check_zigzag(d, ZigzagTemplate::CoherentCube));
        out.push_back(check_zigzag(d, ZigzagTemplate::BadTimesCoherent));
    }
    return out;
}

namespace {

bool mask_connected(uint32_t sub, const std::vector<uint32_t>& nb) {
    if (!sub) return false;
    uint32_t seen = sub & (~sub + 1);  // lowest set bit
    uint32_t frontier = seen;
    while (frontier) {
        uint32_t next = 0;
        uint32_t f = frontier;
        while (f) {
            int i = __builtin_ctz(f);
            f &= f - 1;
            next |= nb[i] & sub & ~seen;
        }
        seen |= next;
        frontier = next;
    }
    return seen == sub;
}

}  // namespace

std::vector<StateSearchResult> search_states(const Polytope& p, const Colouring& col, const StateRule& rule) {
    auto bad = validate_colouring(p, col);
    if (!bad.empty()) throw ValidationError("improper colouring: " + bad.front());
    validate_rule(rule, col.c);
    int nf = p.facet_count();
    if (nf > 24) throw InputError("state search caps at 24 facets, polytope has " + std::to_string(nf));
    if (col.c > 20) throw InputError("state search caps at 20 colours");

    std::vector<uint32_t> nb(nf, 0);
    for (auto [i, j] : p.codim2) {
        nb[i] |= uint32_t(1) << j;
        nb[j] |= uint32_t(1) << i;
    }
    std::vector<uint32_t> fm(nf);
    for (int f = 0; f < nf; ++f) {
        int cf = col.colour[f];
        fm[f] = uint32_t(1) << cf;
        if (rule.kind == RuleKind::Paired) fm[f] |= uint32_t(1) << rule.pair_of[cf];
    }
    // flip[v] = facets whose letter flips between the base vertex and v
    uint32_t nvx = uint32_t(1) << col.c;
    std::vector<uint32_t> flip(nvx, 0);
    for (uint32_t v = 0; v < nvx; ++v)
        for (int f = 0; f < nf; ++f)
            if (__builtin_popcount(v & fm[f]) & 1) flip[v] |= uint32_t(1) << f;

    uint32_t all = nf == 32 ? ~uint32_t(0) : (uint32_t(1) << nf) - 1;
    uint64_t total = uint64_t(1) << nf;

    unsigned workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("COVRIG_WORKERS")) {
        long w = std::strtol(env, nullptr, 10);
        if (w >= 1 && w <= 256) workers = (unsigned)w;
    }
    if (workers < 1) workers = 1;
    if (total < 4096) workers = 1;

    std::vector<std::vector<uint32_t>> found(workers);
    auto scan = [&](unsigned wi) {
        uint64_t lo = total * wi / workers, hi = total * (wi + 1) / workers;
        for (uint64_t mask = lo; mask < hi; ++mask) {
            bool ok = true;
            for (uint32_t v = 0; v < nvx && ok; ++v) {
                uint32_t asc = (uint32_t(mask) ^ flip[v]) & all;
                uint32_t desc = ~asc & all;
                if (!asc || !desc || !mask_connected(asc, nb) || !mask_connected(desc, nb)) ok = false;
            }
            if (ok) found[wi].push_back((uint32_t)mask);
        }
    };
    if (workers == 1) {
        scan(0);
    } else {
        std::vector<std::thread> ts;
        for (unsigned wi = 0; wi < workers; ++wi) ts.emplace_back(scan, wi);
        for (auto& t : ts) t.join();
    }

    std::vector<StateSearchResult> out;
    for (auto& chunk : found)
        for (uint32_t mask : chunk) {
            StateSearchResult r;
            r.mask = mask;
            r.letters.resize(nf);
            for (int f = 0; f < nf; ++f) r.letters[f] = (mask >> f) & 1 ? Letter::O : Letter::I;
            out.push_back(std::move(r));
        }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.mask < b.mask; });
    return out;
}

}  // namespace covrig
