#include "covrig/polytope.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace covrig {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<bool>> compute_adjacency(const std::vector<Facet>& facets) {
    size_t nf = facets.size();
    std::vector<std::vector<bool>> adj(nf, std::vector<bool>(nf, false));
    for (size_t i = 0; i < nf; ++i)
        for (size_t j = i + 1; j < nf; ++j) {
            bool orth = lorentz_product(facets[i].normal, facets[j].normal).is_zero();
            adj[i][j] = adj[j][i] = orth;
        }
    return adj;
}

namespace {

Rational rational_from(const json& num, const json& den, const std::string& where) {
    if (!num.is_number_integer() || !den.is_number_integer())
        throw InputError(where + ": numerator/denominator must be integers");
    long n = num.get<long>(), d = den.get<long>();
    if (d == 0) throw InputError(where + ": zero denominator");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

void finish(Polytope& p, const json& j, const std::string& origin) {
    p.adjacency = compute_adjacency(p.facets);
    int nf = p.facet_count();
    for (int i = 0; i < nf; ++i)
        for (int k = i + 1; k < nf; ++k)
            if (p.adjacency[i][k]) p.codim2.emplace_back(i, k);

    if (j.contains("adjacency")) {
        std::vector<std::vector<bool>> declared(nf, std::vector<bool>(nf, false));
        for (const auto& e : j.at("adjacency")) {
            int a = e.at(0).get<int>(), b = e.at(1).get<int>();
            if (a < 0 || b < 0 || a >= nf || b >= nf) throw InputError(origin + ": adjacency index out of range");
            declared[a][b] = declared[b][a] = true;
        }
        if (declared != p.adjacency)
            throw ValidationError(origin + ": declared adjacency disagrees with normal orthogonality");
    }
    if (j.contains("codim2")) {
        std::vector<std::pair<int, int>> declared;
        for (const auto& e : j.at("codim2")) {
            int a = e.at(0).get<int>(), b = e.at(1).get<int>();
            declared.emplace_back(std::min(a, b), std::max(a, b));
        }
        std::sort(declared.begin(), declared.end());
        if (declared != p.codim2)
            throw ValidationError(origin + ": declared codim-2 faces disagree with computed adjacency");
    }
    if (p.declared.facets && *p.declared.facets != nf)
        throw ValidationError(origin + ": declared facet count " + std::to_string(*p.declared.facets) +
                              " but file has " + std::to_string(nf));

    p.reflections.reserve(nf);
    for (const auto& f : p.facets) p.reflections.push_back(reflection_matrix(f.normal));
}

}  // namespace

Polytope parse_polytope(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(origin + ": " + e.what());
    }
    Polytope p;
    try {
        p.name = j.at("name").get<std::string>();
        p.dim = j.at("dimension").get<int>();
        p.disc = j.at("discriminant").get<long>();
        if (p.dim < 2) throw InputError(origin + ": dimension must be >= 2");
        if (!is_squarefree(p.disc)) throw InputError(origin + ": discriminant must be squarefree and positive");

        const auto& facets = j.at("facets");
        int nf = int(facets.size());
        if (nf == 0) throw InputError(origin + ": no facets");
        p.facets.resize(nf);
        std::vector<bool> seen(nf, false);
        for (const auto& fj : facets) {
            int id = fj.at("id").get<int>();
            if (id < 0 || id >= nf || seen[id]) throw InputError(origin + ": facet ids must be 0..n-1, unique");
            seen[id] = true;
            Facet f;
            f.id = id;
            const auto& nr = fj.at("normal");
            if (int(nr.size()) != p.dim + 1)
                throw InputError(origin + ": facet " + std::to_string(id) + " normal needs " +
                                 std::to_string(p.dim + 1) + " entries");
            for (const auto& comp : nr) {
                if (!comp.is_array() || comp.size() != 4)
                    throw InputError(origin + ": normal entries are [a_num, a_den, b_num, b_den]");
                Rational a = rational_from(comp[0], comp[1], origin);
                Rational b = rational_from(comp[2], comp[3], origin);
                f.normal.emplace_back(a, b, p.disc);
            }
            if (lorentz_product(f.normal, f.normal).sign() <= 0)
                throw ValidationError(origin + ": facet " + std::to_string(id) + " normal is not spacelike");
            p.facets[id] = std::move(f);
        }

        if (j.contains("counts")) {
            const auto& c = j.at("counts");
            if (c.contains("ideal_vertices")) p.declared.ideal_vertices = c.at("ideal_vertices").get<long>();
            if (c.contains("real_vertices")) p.declared.real_vertices = c.at("real_vertices").get<long>();
            if (c.contains("facets")) p.declared.facets = c.at("facets").get<long>();
        }
        finish(p, j, origin);
    } catch (const json::exception& e) {
        throw InputError(origin + ": " + e.what());
    }
    return p;
}

Polytope load_polytope(const std::string& path) { return parse_polytope(read_file(path), path); }

Polytope builtin_octahedron() {
    Polytope p;
    p.name = "octahedron";
    p.dim = 3;
    p.disc = 1;
    p.declared.ideal_vertices = 6;
    p.declared.real_vertices = 0;
    p.declared.facets = 8;
    // ids sorted by sign vector, (+,+,+) first
    int id = 0;
    for (int s1 : {1, -1})
        for (int s2 : {1, -1})
            for (int s3 : {1, -1}) {
                Facet f;
                f.id = id++;
                f.normal = {FieldScalar(s1), FieldScalar(s2), FieldScalar(s3), FieldScalar(-1)};
                p.facets.push_back(std::move(f));
            }
    // reorder so id increases with the number of minus signs, ties by position
    std::sort(p.facets.begin(), p.facets.end(), [](const Facet& x, const Facet& y) {
        auto key = [](const Facet& f) {
            int w = 0, bits = 0;
            for (int i = 0; i < 3; ++i) {
                bool neg = f.normal[i].sign() < 0;
                w += neg;
                bits = bits * 2 + neg;
            }
            return std::pair(w, bits);
        };
        return key(x) < key(y);
    });
    for (int i = 0; i < 8; ++i) p.facets[i].id = i;

    p.adjacency = compute_adjacency(p.facets);
    for (int i = 0; i < 8; ++i)
        for (int k = i + 1; k < 8; ++k)
            if (p.adjacency[i][k]) p.codim2.emplace_back(i, k);
    for (const auto& f : p.facets) p.reflections.push_back(reflection_matrix(f.normal));
    return p;
}

}  // namespace covrig
