#include "covrig/pipeline.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace covrig {

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw EngineError("SHA-256 digest failed");
    static const char* hx = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hx[md[i] >> 4]);
        out.push_back(hx[md[i] & 15]);
    }
    return out;
}

std::string hex_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

Polytope load_polytope_ref(const std::string& ref) {
    if (ref == "builtin:octahedron") return builtin_octahedron();
    if (ref.rfind("builtin:", 0) == 0) throw InputError("unknown builtin polytope '" + ref + "'");
    return load_polytope(ref);
}

namespace {

std::string scalar_str(const FieldScalar& v) { return v.str(); }

std::string letters_str(const std::vector<Letter>& ls) {
    std::string s;
    for (Letter l : ls) s.push_back(letter_char(l));
    return s;
}

std::string polytope_source_text(const std::string& ref) {
    if (ref.rfind("builtin:", 0) == 0) return polytope_to_json(load_polytope_ref(ref)).dump(2);
    return read_file(ref);
}

Json inputs_json(const RunConfig& cfg) {
    Json j;
    j["polytope"] = cfg.polytope;
    j["polytope_sha256"] = sha256_hex(polytope_source_text(cfg.polytope));
    j["colouring"] = cfg.colouring;
    j["colouring_sha256"] = sha256_hex(read_file(cfg.colouring));
    if (!cfg.state.empty()) {
        j["state"] = cfg.state;
        j["state_sha256"] = sha256_hex(read_file(cfg.state));
    } else {
        j["state"] = nullptr;
    }
    return j;
}

Json polytope_summary(const Polytope& p) {
    Json j;
    j["name"] = p.name;
    j["dimension"] = p.dim;
    j["discriminant"] = p.disc;
    j["facets"] = p.facet_count();
    j["codim2_faces"] = (long)p.codim2.size();
    return j;
}

Json complex_summary(const OrientedComplex& cx, const QuasiReport& q, bool links_ok) {
    Json j;
    j["colours"] = cx.col.c;
    j["rule"] = cx.st.rule.kind == RuleKind::Paired ? "paired" : "independent";
    j["base_state"] = letters_str(cx.st.letter);
    j["vertices"] = (long)cx.vertex_count();
    j["edges"] = (long)cx.edges.size();
    j["squares"] = (long)cx.squares.size();
    j["coherent_squares"] = q.coherent;
    j["bad_squares"] = q.bad;
    j["links_ok"] = links_ok;
    j["quasi_coherent"] = q.ok;
    j["cubes_checked"] = q.cubes_checked;
    return j;
}

Json rank_json(const RankReport& r) {
    Json j;
    j["engine"] = engine_name(r.engine);
    j["nullity"] = r.nullity;
    if (r.nullity_numeric >= 0) j["nullity_numeric"] = r.nullity_numeric;
    if (r.nullity_exact >= 0) j["nullity_exact"] = r.nullity_exact;
    if (r.engine != Engine::Exact) {
        j["sigma_max"] = hex_double(r.sigma_max);
        j["tolerance"] = hex_double(r.tolerance_used);
        j["tolerance_auto"] = r.tolerance_auto;
        j["gap_ratio"] = hex_double(r.gap_ratio);
        if (r.singular_values.size() <= 1024) {
            Json sv = Json::array();
            for (double v : r.singular_values) sv.push_back(hex_double(v));
            j["singular_values"] = std::move(sv);
        }
    }
    j["certified"] = r.certified;
    return j;
}

struct RunOutcome {
    Json report;
    RigidityReport rig;
};

RunOutcome run_one(const Polytope& p, const Colouring& col, const State& st, const RunConfig& cfg,
                   bool check_links_hard) {
    OrientedComplex cx = build_oriented_complex(p, col, st);
    bool links_ok = links_all_ok(cx);
    if (check_links_hard && !links_ok)
        throw ValidationError("state fails the link condition; run validate for details");
    QuasiReport q = validate_quasi_coherence(cx);
    if (!q.ok) throw ValidationError("complex is not quasi-coherently oriented: " + q.offending);

    CoverWindow w = build_window(cx, cfg.window_m, cfg.window_n);
    SparseSystem sys = assemble(w, cfg.mode, cfg.pre_eliminate);
    int dg = lie_algebra_dim(p.dim);
    RigidityReport rig = h1_verdict(sys, dg, w.vertex_count(), cfg.rank);

    Json rep;
    rep["complex"] = complex_summary(cx, q, links_ok);
    Json jw;
    jw["m"] = w.m;
    jw["n"] = w.n;
    jw["vertices"] = w.vertex_count();
    jw["edges"] = w.edge_count();
    jw["squares"] = w.square_count();
    rep["window"] = std::move(jw);
    Json js;
    js["rows"] = sys.rows;
    js["cols"] = sys.cols;
    js["block"] = sys.block;
    js["mode"] = cfg.mode == AssemblyMode::Generic ? "generic" : "simplified";
    js["pre_eliminated"] = cfg.pre_eliminate;
    rep["system"] = std::move(js);
    rep["rank"] = rank_json(rig.rank);
    Json jr;
    jr["dim_g"] = rig.dim_g;
    jr["window_vertices"] = rig.vertex_count;
    jr["coboundary_dim"] = (long)rig.dim_g * rig.vertex_count;
    jr["h1_bound"] = rig.h1_bound;
    jr["verdict"] = verdict_name(rig.verdict);
    rep["rigidity"] = std::move(jr);

    if (cfg.with_oracle) {
        OracleReport orc = groupoid_group_oracle(w, cfg.mode);
        Json jo;
        jo["groupoid_nullity"] = orc.groupoid_nullity;
        jo["group_nullity"] = orc.group_nullity;
        jo["tree_edges"] = orc.tree_edges;
        jo["components"] = orc.components;
        jo["holds"] = orc.holds;
        rep["oracle"] = std::move(jo);
    }
    return {std::move(rep), rig};
}

Json config_json(const RunConfig& cfg) {
    Json j;
    j["window"] = Json::array({cfg.window_m, cfg.window_n});
    j["mode"] = cfg.mode == AssemblyMode::Generic ? "generic" : "simplified";
    j["pre_eliminate"] = cfg.pre_eliminate;
    j["engine"] = engine_name(cfg.rank.engine);
    j["tolerance"] = cfg.rank.tolerance == 0 ? Json("auto") : Json(hex_double(cfg.rank.tolerance));
    j["certification_threshold"] = hex_double(cfg.rank.cert_threshold);
    j["pivot_seed"] = cfg.rank.pivot_seed;
    return j;
}

}  // namespace

Json run_report(const RunConfig& cfg) {
    Polytope p = load_polytope_ref(cfg.polytope);
    Colouring col = load_colouring(cfg.colouring, p);

    Json rep;
    rep["tool"] = "covrig";
    rep["version"] = kVersion;
    rep["command"] = "run";
    rep["inputs"] = inputs_json(cfg);
    rep["config"] = config_json(cfg);
    rep["polytope"] = polytope_summary(p);

    if (!cfg.search) {
        State st = load_state(cfg.state, p, col);
        RunOutcome out = run_one(p, col, st, cfg, true);
        for (auto& [k, v] : out.report.items()) rep[k] = v;
        return rep;
    }

    auto found = search_states(p, col, cfg.search_rule);
    Json states = Json::array();
    std::set<long> bounds;
    std::set<std::string> verdicts;
    for (const auto& r : found) {
        State st;
        st.rule = cfg.search_rule;
        st.letter = r.letters;
        RunOutcome out = run_one(p, col, st, cfg, true);
        Json e;
        e["state"] = letters_str(r.letters);
        e["mask"] = r.mask;
        e["nullity"] = out.rig.rank.nullity;
        e["h1_bound"] = out.rig.h1_bound;
        e["verdict"] = verdict_name(out.rig.verdict);
        if (out.rig.rank.nullity_numeric >= 0) e["gap_ratio"] = hex_double(out.rig.rank.gap_ratio);
        bounds.insert(out.rig.h1_bound);
        verdicts.insert(verdict_name(out.rig.verdict));
        states.push_back(std::move(e));
    }
    rep["states"] = std::move(states);
    Json sum;
    sum["count"] = (long)found.size();
    sum["distinct_h1_bounds"] = Json(bounds);
    sum["all_verdicts_equal"] = verdicts.size() <= 1;
    rep["summary"] = std::move(sum);
    return rep;
}

Json validate_report(const std::string& polytope_ref, const std::string& colouring_path,
                     const std::string& state_path) {
    Json rep;
    rep["tool"] = "covrig";
    rep["version"] = kVersion;
    rep["command"] = "validate";
    bool ok = true;

    Polytope p = load_polytope_ref(polytope_ref);
    rep["polytope"] = polytope_summary(p);
    rep["polytope"]["sha256"] = sha256_hex(polytope_source_text(polytope_ref));

    Colouring col = load_colouring(colouring_path, p);
    auto violations = validate_colouring(p, col);
    Json jc;
    jc["colours"] = col.c;
    jc["proper"] = violations.empty();
    jc["violations"] = Json(violations);
    rep["colouring"] = std::move(jc);
    ok = ok && violations.empty();

    if (!state_path.empty() && violations.empty()) {
        State st = load_state(state_path, p, col);
        OrientedComplex cx = build_oriented_complex(p, col, st);
        auto links = check_links(cx);
        Json fails = Json::array();
        for (const auto& l : links)
            if (!l.ok()) fails.push_back((long)l.v);
        QuasiReport q = validate_quasi_coherence(cx);
        Json js;
        js["rule"] = st.rule.kind == RuleKind::Paired ? "paired" : "independent";
        js["letters"] = letters_str(st.letter);
        js["links_ok"] = fails.empty();
        js["failing_vertices"] = std::move(fails);
        js["quasi_coherent"] = q.ok;
        if (!q.ok) js["quasi_coherence_failure"] = q.offending;
        js["coherent_squares"] = q.coherent;
        js["bad_squares"] = q.bad;
        js["invalid_squares"] = q.invalid;
        ok = ok && js["links_ok"].get<bool>() && q.ok;
        rep["state"] = std::move(js);
    }
    rep["ok"] = ok;
    return rep;
}

Json zigzag_report(int max_dim) {
    auto checks = check_zigzag_all(max_dim);
    Json rep;
    rep["tool"] = "covrig";
    rep["version"] = kVersion;
    rep["command"] = "zigzag";
    rep["max_dim"] = max_dim;
    Json arr = Json::array();
    bool all = true;
    for (const auto& c : checks) {
        Json e;
        e["dim"] = c.dim;
        e["template"] = c.tmpl == ZigzagTemplate::BadTimesCoherent ? "bad-times-coherent" : "coherent-cube";
        e["offsets_checked"] = c.offsets_checked;
        e["pass"] = c.pass;
        all = all && c.pass;
        arr.push_back(std::move(e));
    }
    rep["checks"] = std::move(arr);
    rep["all_pass"] = all;
    return rep;
}

Json search_report(const std::string& polytope_ref, const std::string& colouring_path,
                   const StateRule& rule) {
    Polytope p = load_polytope_ref(polytope_ref);
    Colouring col = load_colouring(colouring_path, p);
    auto found = search_states(p, col, rule);
    Json rep;
    rep["tool"] = "covrig";
    rep["version"] = kVersion;
    rep["command"] = "search-states";
    rep["polytope"] = polytope_summary(p);
    rep["rule"] = rule.kind == RuleKind::Paired ? "paired" : "independent";
    rep["searched"] = (long)(uint64_t(1) << p.facet_count());
    rep["found"] = (long)found.size();
    Json arr = Json::array();
    for (const auto& r : found) arr.push_back(letters_str(r.letters));
    rep["states"] = std::move(arr);
    return rep;
}

void export_system_files(const RunConfig& cfg, const std::string& exact_path,
                         const std::string& float_path) {
    Polytope p = load_polytope_ref(cfg.polytope);
    Colouring col = load_colouring(cfg.colouring, p);
    State st = load_state(cfg.state, p, col);
    OrientedComplex cx = build_oriented_complex(p, col, st);
    QuasiReport q = validate_quasi_coherence(cx);
    if (!q.ok) throw ValidationError("complex is not quasi-coherently oriented: " + q.offending);
    CoverWindow w = build_window(cx, cfg.window_m, cfg.window_n);
    SparseSystem sys = assemble(w, cfg.mode, cfg.pre_eliminate);
    if (!exact_path.empty()) {
        std::ofstream os(exact_path);
        if (!os) throw InputError("cannot write " + exact_path);
        export_exact(sys, os);
    }
    if (!float_path.empty()) {
        std::ofstream os(float_path);
        if (!os) throw InputError("cannot write " + float_path);
        export_float_mirror(sys, os);
    }
}

std::string csv_header() {
    return "polytope,colours,rule,state,window_m,window_n,rows,cols,nullity,h1_bound,gap_ratio,verdict\n";
}

std::string csv_row(const Json& run) {
    std::ostringstream os;
    const Json& cx = run.at("complex");
    const Json& w = run.at("window");
    const Json& sys = run.at("system");
    const Json& rk = run.at("rank");
    const Json& rg = run.at("rigidity");
    os << run.at("polytope").at("name").get<std::string>() << "," << cx.at("colours") << ","
       << cx.at("rule").get<std::string>() << "," << cx.at("base_state").get<std::string>() << ","
       << w.at("m") << "," << w.at("n") << "," << sys.at("rows") << "," << sys.at("cols") << ","
       << rk.at("nullity") << "," << rg.at("h1_bound") << ","
       << (rk.contains("gap_ratio") ? rk.at("gap_ratio").get<std::string>() : std::string("n/a"))
       << "," << rg.at("verdict").get<std::string>() << "\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InputError("cannot write " + path);
    os << text;
    if (!os) throw InputError("write to " + path + " failed");
}

void append_csv(const std::string& path, const Json& run) {
    bool fresh = true;
    {
        std::ifstream is(path, std::ios::binary);
        if (is && is.peek() != std::ifstream::traits_type::eof()) fresh = false;
    }
    std::ofstream os(path, std::ios::binary | std::ios::app);
    if (!os) throw InputError("cannot write " + path);
    if (fresh) os << csv_header();
    os << csv_row(run);
}

Json polytope_to_json(const Polytope& p) {
    Json j;
    j["name"] = p.name;
    j["dimension"] = p.dim;
    j["discriminant"] = p.disc;
    auto as_int = [](const mpz_class& z) {
        if (!z.fits_slong_p()) throw EngineError("normal component too large to serialize");
        return (long)z.get_si();
    };
    Json facets = Json::array();
    for (const auto& f : p.facets) {
        Json jf;
        jf["id"] = f.id;
        Json nrm = Json::array();
        for (const auto& v : f.normal) {
            Json comp = Json::array();
            comp.push_back(as_int(v.ra().get_num()));
            comp.push_back(as_int(v.ra().get_den()));
            comp.push_back(as_int(v.rb().get_num()));
            comp.push_back(as_int(v.rb().get_den()));
            nrm.push_back(std::move(comp));
        }
        jf["normal"] = std::move(nrm);
        facets.push_back(std::move(jf));
    }
    j["facets"] = std::move(facets);
    if (p.declared.ideal_vertices || p.declared.real_vertices || p.declared.facets) {
        Json c;
        if (p.declared.ideal_vertices) c["ideal_vertices"] = *p.declared.ideal_vertices;
        if (p.declared.real_vertices) c["real_vertices"] = *p.declared.real_vertices;
        if (p.declared.facets) c["facets"] = *p.declared.facets;
        j["counts"] = std::move(c);
    }
    return j;
}

}  // namespace covrig
