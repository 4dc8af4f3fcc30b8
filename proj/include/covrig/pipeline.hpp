#pragma once

/* End-to-end runs and their reports.
 *
 * Reports are deterministic: keys keep insertion order, every float is
 * rendered as a C hex literal, and inputs are identified by SHA-256 so a
 * report pins down exactly what was computed.
 */

#include "covrig/rank.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace covrig {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

struct RunConfig {
    std::string polytope;   // file path or "builtin:octahedron"
    std::string colouring;  // file path
    std::string state;      // file path; empty when searching
    bool search = false;
    StateRule search_rule;  // rule used when searching without a state file
    int window_m = -1, window_n = 1;
    AssemblyMode mode = AssemblyMode::Simplified;
    bool pre_eliminate = false;
    RankOptions rank;
    bool with_oracle = false;
};

// resolves "builtin:<name>" or loads from disk
Polytope load_polytope_ref(const std::string& ref);

Json polytope_to_json(const Polytope& p);

std::string sha256_hex(const std::string& bytes);
std::string hex_double(double x);

Json run_report(const RunConfig& cfg);
Json validate_report(const std::string& polytope_ref, const std::string& colouring_path,
                     const std::string& state_path);
Json zigzag_report(int max_dim);
Json search_report(const std::string& polytope_ref, const std::string& colouring_path,
                   const StateRule& rule);

void export_system_files(const RunConfig& cfg, const std::string& exact_path,
                         const std::string& float_path);

std::string csv_header();
std::string csv_row(const Json& run);

void write_text_file(const std::string& path, const std::string& text);
void append_csv(const std::string& path, const Json& run);

}  // namespace covrig
