#include "covrig/colouring.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

namespace covrig {

namespace {

// strips '#' comments and splits into whitespace tokens per line
std::vector<std::vector<std::string>> tokenize_lines(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (!toks.empty()) out.push_back(std::move(toks));
    }
    return out;
}

long parse_long(const std::string& s, const std::string& origin, const std::string& what) {
    try {
        size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError(origin + ": expected integer for " + what + ", got '" + s + "'");
    }
}

}  // namespace

std::vector<std::string> validate_colouring(const Polytope& p, const Colouring& col) {
    std::vector<std::string> bad;
    int nf = p.facet_count();
    if ((int)col.colour.size() != nf) {
        bad.push_back("colouring covers " + std::to_string(col.colour.size()) +
                      " facets, polytope has " + std::to_string(nf));
        return bad;
    }
    for (int i = 0; i < nf; ++i)
        if (col.colour[i] < 0 || col.colour[i] >= col.c)
            bad.push_back("facet " + std::to_string(i) + " has colour " +
                          std::to_string(col.colour[i] + 1) + " out of range 1.." +
                          std::to_string(col.c));
    if (!bad.empty()) return bad;
    for (auto [i, j] : p.codim2)
        if (col.colour[i] == col.colour[j])
            bad.push_back("adjacent facets " + std::to_string(i) + " and " + std::to_string(j) +
                          " share colour " + std::to_string(col.colour[i] + 1));
    return bad;
}

Colouring parse_colouring(const std::string& text, const std::string& origin, const Polytope& p) {
    auto lines = tokenize_lines(text);
    if (lines.empty() || lines[0].size() != 2 || lines[0][0] != "colours")
        throw InputError(origin + ": first line must be 'colours <count>'");
    Colouring col;
    col.c = (int)parse_long(lines[0][1], origin, "colour count");
    if (col.c < 2 || col.c > 24) throw InputError(origin + ": colour count must be in 2..24");
    int nf = p.facet_count();
    col.colour.assign(nf, -1);
    for (size_t k = 1; k < lines.size(); ++k) {
        if (lines[k].size() != 2)
            throw InputError(origin + ": colouring lines are '<facet> <colour>'");
        long f = parse_long(lines[k][0], origin, "facet id");
        long c1 = parse_long(lines[k][1], origin, "colour");
        if (f < 0 || f >= nf) throw InputError(origin + ": facet id " + std::to_string(f) + " out of range");
        if (col.colour[f] != -1) throw InputError(origin + ": facet " + std::to_string(f) + " coloured twice");
        if (c1 < 1 || c1 > col.c)
            throw InputError(origin + ": colour " + std::to_string(c1) + " out of range 1.." + std::to_string(col.c));
        col.colour[f] = (int)(c1 - 1);
    }
    for (int i = 0; i < nf; ++i)
        if (col.colour[i] == -1) throw InputError(origin + ": facet " + std::to_string(i) + " not coloured");
    return col;
}

Colouring load_colouring(const std::string& path, const Polytope& p) {
    return parse_colouring(read_file(path), path, p);
}

void validate_rule(const StateRule& rule, int c) {
    if (rule.kind == RuleKind::Independent) {
        if (!rule.pair_of.empty())
            throw ValidationError("independent rule takes no colour pairs");
        return;
    }
    if (c % 2 != 0)
        throw ValidationError("paired rule needs an even number of colours, got " + std::to_string(c));
    if ((int)rule.pair_of.size() != c)
        throw ValidationError("paired rule must match every colour");
    for (int i = 0; i < c; ++i) {
        int j = rule.pair_of[i];
        if (j < 0 || j >= c || j == i || rule.pair_of[j] != i)
            throw ValidationError("colour pairs must form a perfect matching");
    }
}

State parse_state(const std::string& text, const std::string& origin, const Polytope& p, const Colouring& col) {
    auto lines = tokenize_lines(text);
    if (lines.empty() || lines[0][0] != "rule" || lines[0].size() != 2)
        throw InputError(origin + ": first line must be 'rule independent' or 'rule paired'");
    State st;
    if (lines[0][1] == "independent") {
        st.rule.kind = RuleKind::Independent;
    } else if (lines[0][1] == "paired") {
        st.rule.kind = RuleKind::Paired;
        st.rule.pair_of.assign(col.c, -1);
    } else {
        throw InputError(origin + ": unknown rule '" + lines[0][1] + "'");
    }
    int nf = p.facet_count();
    st.letter.assign(nf, Letter::I);
    std::vector<bool> seen(nf, false);
    for (size_t k = 1; k < lines.size(); ++k) {
        const auto& toks = lines[k];
        if (toks[0] == "pair") {
            if (st.rule.kind != RuleKind::Paired)
                throw InputError(origin + ": 'pair' lines only valid under the paired rule");
            if (toks.size() != 3) throw InputError(origin + ": pair lines are 'pair <colour> <colour>'");
            long i = parse_long(toks[1], origin, "colour") - 1;
            long j = parse_long(toks[2], origin, "colour") - 1;
            if (i < 0 || i >= col.c || j < 0 || j >= col.c || i == j)
                throw InputError(origin + ": bad colour pair");
            if (st.rule.pair_of[i] != -1 || st.rule.pair_of[j] != -1)
                throw InputError(origin + ": colour paired twice");
            st.rule.pair_of[i] = (int)j;
            st.rule.pair_of[j] = (int)i;
            continue;
        }
        if (toks.size() != 2) throw InputError(origin + ": state lines are '<facet> <I|O>'");
        long f = parse_long(toks[0], origin, "facet id");
        if (f < 0 || f >= nf) throw InputError(origin + ": facet id " + std::to_string(f) + " out of range");
        if (seen[f]) throw InputError(origin + ": facet " + std::to_string(f) + " assigned twice");
        seen[f] = true;
        if (toks[1] == "O")
            st.letter[f] = Letter::O;
        else if (toks[1] == "I")
            st.letter[f] = Letter::I;
        else
            throw InputError(origin + ": letter must be I or O, got '" + toks[1] + "'");
    }
    for (int i = 0; i < nf; ++i)
        if (!seen[i]) throw InputError(origin + ": facet " + std::to_string(i) + " has no letter");
    validate_rule(st.rule, col.c);
    return st;
}

State load_state(const std::string& path, const Polytope& p, const Colouring& col) {
    return parse_state(read_file(path), path, p, col);
}

std::vector<Letter> OrientedComplex::state_at(uint32_t v) const {
    std::vector<Letter> out(poly->facet_count());
    for (int f = 0; f < (int)out.size(); ++f) out[f] = letter_at(v, f);
    return out;
}

OrientedComplex build_oriented_complex(const Polytope& p, Colouring col, State st) {
    auto bad = validate_colouring(p, col);
    if (!bad.empty()) throw ValidationError("improper colouring: " + bad.front());
    validate_rule(st.rule, col.c);
    if ((int)st.letter.size() != p.facet_count())
        throw ValidationError("state assigns letters to " + std::to_string(st.letter.size()) +
                              " facets, polytope has " + std::to_string(p.facet_count()));
    if (col.c > 20)
        throw InputError("complex with " + std::to_string(col.c) + " colours is too large to enumerate");

    OrientedComplex cx;
    cx.poly = &p;
    cx.col = std::move(col);
    cx.st = std::move(st);

    int nf = p.facet_count();
    cx.flip_mask.resize(nf);
    for (int f = 0; f < nf; ++f) {
        int cf = cx.col.colour[f];
        uint32_t m = uint32_t(1) << cf;
        if (cx.st.rule.kind == RuleKind::Paired) m |= uint32_t(1) << cx.st.rule.pair_of[cf];
        cx.flip_mask[f] = m;
        // the two endpoint states of any edge dual to f must disagree on f,
        // otherwise the edge has no orientation
        if (!((m >> cf) & 1))
            throw ValidationError("propagation rule fixes the letter of facet " + std::to_string(f) +
                                  " along its own colour direction");
    }

    uint32_t nverts = uint32_t(1) << cx.col.c;
    cx.edges.reserve(size_t(nf) << (cx.col.c - 1));
    for (uint32_t v = 0; v < nverts; ++v) {
        if (__builtin_popcount(v) & 1) continue;
        for (int f = 0; f < nf; ++f) cx.edges.push_back({v, f});
    }

    for (auto [f1, f2] : p.codim2) {
        int c1 = cx.col.colour[f1], c2 = cx.col.colour[f2];
        uint32_t e1 = uint32_t(1) << c1, e2 = uint32_t(1) << c2;
        for (uint32_t v = 0; v < nverts; ++v) {
            if (v & (e1 | e2)) continue;
            CSquare sq;
            sq.f1 = f1;
            sq.f2 = f2;
            sq.base = v;
            int sb = cx.letter_at(v, f1) == Letter::O ? 1 : -1;
            int sd = cx.letter_at(v, f2) == Letter::O ? 1 : -1;
            bool aligned1 = cx.letter_at(v, f1) == cx.letter_at(v ^ e2, f1);
            bool aligned2 = cx.letter_at(v, f2) == cx.letter_at(v ^ e1, f2);
            if (aligned1 && aligned2) {
                sq.kind = SquareKind::Coherent;
                sq.off_b = sb;
                sq.off_d = sd;
                sq.off_c = sb + sd;
            } else if (!aligned1 && !aligned2 && sb == sd) {
                // opposite edges both flip and the two level propagations
                // agree, putting the far corner back at the base level
                sq.kind = SquareKind::Bad;
                sq.off_b = sb;
                sq.off_d = sd;
                sq.off_c = 0;
            } else {
                sq.kind = SquareKind::Invalid;
            }
            cx.squares.push_back(sq);
        }
    }
    return cx;
}

namespace {

// connectivity of the subgraph of the facet adjacency graph induced by `sub`
bool induced_connected(const Polytope& p, const std::vector<int>& sub) {
    if (sub.empty()) return false;
    std::vector<bool> in(p.facet_count(), false), vis(p.facet_count(), false);
    for (int f : sub) in[f] = true;
    std::queue<int> q;
    q.push(sub[0]);
    vis[sub[0]] = true;
    size_t reached = 1;
    while (!q.empty()) {
        int f = q.front();
        q.pop();
        for (int g = 0; g < p.facet_count(); ++g)
            if (in[g] && !vis[g] && p.adjacent(f, g)) {
                vis[g] = true;
                ++reached;
                q.push(g);
            }
    }
    return reached == sub.size();
}

}  // namespace

std::vector<LinkReport> check_links(const OrientedComplex& cx) {
    std::vector<LinkReport> out;
    uint32_t nverts = uint32_t(1) << cx.col.c;
    int nf = cx.facet_count();
    out.reserve(nverts);
    for (uint32_t v = 0; v < nverts; ++v) {
        LinkReport r;
        r.v = v;
        std::vector<int> asc, desc;
        for (int f = 0; f < nf; ++f)
            (cx.letter_at(v, f) == Letter::O ? asc : desc).push_back(f);
        r.ascending_size = (int)asc.size();
        r.descending_size = (int)desc.size();
        r.ascending_connected = induced_connected(*cx.poly, asc);
        r.descending_connected = induced_connected(*cx.poly, desc);
        out.push_back(r);
    }
    return out;
}

bool links_all_ok(const OrientedComplex& cx) {
    for (const auto& r : check_links(cx))
        if (!r.ok()) return false;
    return true;
}

namespace {

void maximal_cliques(const Polytope& p, std::vector<int>& R, std::vector<int>& P, std::vector<int>& X,
                     std::vector<std::vector<int>>& out) {
    if (P.empty() && X.empty()) {
        if (R.size() >= 2) out.push_back(R);
        return;
    }
    std::vector<int> pc = P;
    for (int v : pc) {
        std::vector<int> np, nx;
        for (int u : P)
            if (p.adjacent(u, v)) np.push_back(u);
        for (int u : X)
            if (p.adjacent(u, v)) nx.push_back(u);
        R.push_back(v);
        maximal_cliques(p, R, np, nx, out);
        R.pop_back();
        P.erase(std::find(P.begin(), P.end(), v));
        X.push_back(v);
    }
}

}  // namespace

QuasiReport validate_quasi_coherence(const OrientedComplex& cx) {
    QuasiReport rep;
    // square kinds are constant across base vertices of one codim-2 face
    // (letter flips are linear over F_2 in the vertex), so cubes can be
    // judged from the kind of each direction pair
    std::map<std::pair<int, int>, SquareKind> kind;
    for (const auto& sq : cx.squares) {
        switch (sq.kind) {
            case SquareKind::Coherent: ++rep.coherent; break;
            case SquareKind::Bad: ++rep.bad; break;
            case SquareKind::Invalid: ++rep.invalid; break;
        }
        auto key = std::make_pair(sq.f1, sq.f2);
        auto it = kind.find(key);
        if (it == kind.end())
            kind.emplace(key, sq.kind);
        else if (it->second != sq.kind) {
            rep.ok = false;
            rep.offending = "square over facets " + std::to_string(sq.f1) + "," + std::to_string(sq.f2) +
                            " changes kind across base vertices";
            return rep;
        }
    }
    for (const auto& [key, k] : kind)
        if (k == SquareKind::Invalid) {
            rep.ok = false;
            rep.offending = "square over facets " + std::to_string(key.first) + "," +
                            std::to_string(key.second) + " has inconsistent level offsets";
            return rep;
        }

    std::vector<int> R, P, X;
    for (int f = 0; f < cx.facet_count(); ++f) P.push_back(f);
    std::vector<std::vector<int>> cliques;
    maximal_cliques(*cx.poly, R, P, X, cliques);
    for (const auto& cl : cliques) {
        ++rep.cubes_checked;
        int bad_pairs = 0;
        std::pair<int, int> bp{-1, -1};
        for (size_t i = 0; i < cl.size(); ++i)
            for (size_t j = i + 1; j < cl.size(); ++j) {
                int a = std::min(cl[i], cl[j]), b = std::max(cl[i], cl[j]);
                if (kind[{a, b}] == SquareKind::Bad) {
                    ++bad_pairs;
                    bp = {a, b};
                }
            }
        if (bad_pairs > 1) {
            rep.ok = false;
            rep.offending = "cube on facets";
            for (int f : cl) rep.offending += " " + std::to_string(f);
            rep.offending += " carries more than one bad direction pair";
            return rep;
        }
        (void)bp;
    }
    rep.ok = true;
    return rep;
}

}  // namespace covrig
