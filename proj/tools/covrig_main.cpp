#include "covrig/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

using namespace covrig;

namespace {

// exit codes: 0 ok, 1 bad input or usage, 2 validation failure,
// 3 engine failure, 4 finished but uncertified
constexpr int kOk = 0, kUsage = 1, kValidation = 2, kEngine = 3, kUncertified = 4;

double parse_tolerance(const std::string& s) {
    if (s == "auto") return 0;
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size() || !(v > 0)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError("--tolerance takes 'auto' or a positive float, got '" + s + "'");
    }
}

StateRule parse_rule(const std::string& rule, const std::string& pairs) {
    StateRule r;
    if (rule == "independent") {
        if (!pairs.empty()) throw InputError("--pairs only applies to the paired rule");
        return r;
    }
    if (rule != "paired") throw InputError("--rule takes 'independent' or 'paired'");
    r.kind = RuleKind::Paired;
    if (pairs.empty()) throw InputError("the paired rule needs --pairs, e.g. --pairs 1-2,3-4");
    int maxc = 0;
    std::vector<std::pair<int, int>> ps;
    std::string tok;
    std::istringstream in(pairs);
    while (std::getline(in, tok, ',')) {
        auto dash = tok.find('-');
        if (dash == std::string::npos) throw InputError("--pairs entries look like 1-2");
        int a, b;
        try {
            a = std::stoi(tok.substr(0, dash));
            b = std::stoi(tok.substr(dash + 1));
        } catch (const std::exception&) {
            throw InputError("--pairs entries look like 1-2");
        }
        if (a < 1 || b < 1 || a == b) throw InputError("--pairs colours are distinct and 1-based");
        ps.emplace_back(a - 1, b - 1);
        maxc = std::max({maxc, a, b});
    }
    r.pair_of.assign(maxc, -1);
    for (auto [a, b] : ps) {
        if (r.pair_of[a] != -1 || r.pair_of[b] != -1) throw InputError("--pairs repeats a colour");
        r.pair_of[a] = b;
        r.pair_of[b] = a;
    }
    return r;
}

void emit(const Json& report, const std::string& output, const std::string& summary) {
    if (output.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        write_text_file(output, report.dump(2) + "\n");
        if (!summary.empty()) std::cout << summary << "\n";
        std::cout << "report written to " << output << "\n";
    }
}

struct CommonOpts {
    std::string polytope, colouring, state, output;
    int scale = 1;
    std::vector<int> window;
    std::string mode = "simplified";
    bool pre_eliminate = false;
};

void add_window_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("-s,--scale", o.scale, "window [-1, 2s-1]")->check(CLI::PositiveNumber);
    cmd->add_option("--window", o.window, "explicit window m n")->expected(2);
    cmd->add_option("--mode", o.mode, "relator derivative form")
        ->check(CLI::IsMember({"simplified", "generic"}));
    cmd->add_flag("--pre-eliminate", o.pre_eliminate,
                  "solve in Lie algebra coordinates per edge (fewer columns)");
}

void fill_config(RunConfig& cfg, const CommonOpts& o) {
    cfg.polytope = o.polytope;
    cfg.colouring = o.colouring;
    cfg.state = o.state;
    if (!o.window.empty()) {
        cfg.window_m = o.window[0];
        cfg.window_n = o.window[1];
    } else {
        cfg.window_m = -1;
        cfg.window_n = 2 * o.scale - 1;
    }
    cfg.mode = o.mode == "generic" ? AssemblyMode::Generic : AssemblyMode::Simplified;
    cfg.pre_eliminate = o.pre_eliminate;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rigidity bounds for cyclic covers of coloured right-angled polytopes"};
    app.require_subcommand(1);

    auto* c_validate = app.add_subcommand("validate", "check polytope, colouring, state, links");
    CommonOpts vo;
    c_validate->add_option("--polytope", vo.polytope, "polytope json or builtin:octahedron")->required();
    c_validate->add_option("--colouring", vo.colouring, "colouring file")->required();
    c_validate->add_option("--state", vo.state, "state file");
    c_validate->add_option("-o,--output", vo.output, "write the json report here");

    auto* c_run = app.add_subcommand("run", "assemble the cocycle system and bound dim H^1");
    CommonOpts ro;
    bool r_search = false, r_oracle = false;
    std::string r_engine = "both", r_tol = "auto", r_rule = "independent", r_pairs, r_csv;
    double r_threshold = 1e6;
    uint64_t r_seed = 0;
    c_run->add_option("--polytope", ro.polytope, "polytope json or builtin:octahedron")->required();
    c_run->add_option("--colouring", ro.colouring, "colouring file")->required();
    c_run->add_option("--state", ro.state, "state file");
    c_run->add_flag("--search-states", r_search, "run every state passing the link condition");
    c_run->add_option("--rule", r_rule, "propagation rule when searching")
        ->check(CLI::IsMember({"independent", "paired"}));
    c_run->add_option("--pairs", r_pairs, "colour pairs for the paired rule, e.g. 1-2,3-4");
    add_window_opts(c_run, ro);
    c_run->add_option("--engine", r_engine, "rank engine")
        ->check(CLI::IsMember({"numeric", "exact", "both"}));
    c_run->add_option("--tolerance", r_tol, "singular value cutoff, 'auto' or a float");
    c_run->add_option("--threshold", r_threshold, "gap ratio needed to certify numerically");
    c_run->add_option("--pivot-seed", r_seed, "shuffle exact pivot tie-breaks");
    c_run->add_flag("--oracle", r_oracle, "also run the spanning-forest cross-check");
    c_run->add_option("-o,--output", ro.output, "write the json report here");
    c_run->add_option("--csv", r_csv, "append a summary row to this csv");

    auto* c_zig = app.add_subcommand("zigzag", "model cube connectivity checks");
    int z_max = 9;
    std::string z_out;
    c_zig->add_option("--max-dim", z_max, "check dimensions 2..max")->check(CLI::Range(2, 9));
    c_zig->add_option("-o,--output", z_out, "write the json report here");

    auto* c_search = app.add_subcommand("search-states", "list states passing the link condition");
    CommonOpts so;
    std::string s_rule = "independent", s_pairs;
    c_search->add_option("--polytope", so.polytope, "polytope json or builtin:octahedron")->required();
    c_search->add_option("--colouring", so.colouring, "colouring file")->required();
    c_search->add_option("--rule", s_rule, "propagation rule")
        ->check(CLI::IsMember({"independent", "paired"}));
    c_search->add_option("--pairs", s_pairs, "colour pairs for the paired rule");
    c_search->add_option("-o,--output", so.output, "write the json report here");

    auto* c_export = app.add_subcommand("export-system", "write the assembled system to text files");
    CommonOpts eo;
    std::string e_exact, e_float;
    c_export->add_option("--polytope", eo.polytope, "polytope json or builtin:octahedron")->required();
    c_export->add_option("--colouring", eo.colouring, "colouring file")->required();
    c_export->add_option("--state", eo.state, "state file")->required();
    add_window_opts(c_export, eo);
    c_export->add_option("--exact-out", e_exact, "exact entries as rational pairs");
    c_export->add_option("--float-out", e_float, "float mirror, one rounding per entry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (c_validate->parsed()) {
            Json rep = validate_report(vo.polytope, vo.colouring, vo.state);
            bool ok = rep.at("ok").get<bool>();
            emit(rep, vo.output, std::string("validation ") + (ok ? "passed" : "FAILED"));
            return ok ? kOk : kValidation;
        }
        if (c_run->parsed()) {
            if (r_search == !ro.state.empty())
                throw InputError("run needs exactly one of --state or --search-states");
            RunConfig cfg;
            fill_config(cfg, ro);
            cfg.search = r_search;
            if (r_search) cfg.search_rule = parse_rule(r_rule, r_pairs);
            cfg.rank.engine = r_engine == "numeric" ? Engine::Numeric
                              : r_engine == "exact" ? Engine::Exact
                                                    : Engine::Both;
            cfg.rank.tolerance = parse_tolerance(r_tol);
            cfg.rank.cert_threshold = r_threshold;
            cfg.rank.pivot_seed = r_seed;
            cfg.with_oracle = r_oracle;
            Json rep = run_report(cfg);
            bool inconclusive = false;
            std::string summary;
            if (!r_search) {
                const auto& rg = rep.at("rigidity");
                summary = "nullity " + rep.at("rank").at("nullity").dump() + ", h1 bound " +
                          rg.at("h1_bound").dump() + ", verdict " +
                          rg.at("verdict").get<std::string>();
                inconclusive = rg.at("verdict").get<std::string>() == "inconclusive";
                if (!r_csv.empty()) append_csv(r_csv, rep);
            } else {
                summary = rep.at("summary").at("count").dump() + " states passed the link condition";
                for (const auto& st : rep.at("states"))
                    if (st.at("verdict").get<std::string>() == "inconclusive") inconclusive = true;
            }
            emit(rep, ro.output, summary);
            return inconclusive ? kUncertified : kOk;
        }
        if (c_zig->parsed()) {
            Json rep = zigzag_report(z_max);
            bool ok = rep.at("all_pass").get<bool>();
            emit(rep, z_out, std::string("zigzag checks ") + (ok ? "passed" : "FAILED"));
            return ok ? kOk : kValidation;
        }
        if (c_search->parsed()) {
            Json rep = search_report(so.polytope, so.colouring, parse_rule(s_rule, s_pairs));
            emit(rep, so.output, rep.at("found").dump() + " states pass the link condition");
            return kOk;
        }
        if (c_export->parsed()) {
            if (e_exact.empty() && e_float.empty())
                throw InputError("export-system needs --exact-out and/or --float-out");
            RunConfig cfg;
            fill_config(cfg, eo);
            export_system_files(cfg, e_exact, e_float);
            if (!e_exact.empty()) std::cout << "exact system written to " << e_exact << "\n";
            if (!e_float.empty()) std::cout << "float mirror written to " << e_float << "\n";
            return kOk;
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kUsage;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const EngineError& e) {
        std::cerr << "engine error: " << e.what() << "\n";
        return kEngine;
    }
    return kUsage;
}
