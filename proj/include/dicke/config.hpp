#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dicke/cpb.hpp"
#include "dicke/exactdiag.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/model.hpp"
#include "json.hpp"

namespace dicke {

enum class Command { meanfield_scan, critical, no_go, ed_ground, ed_nscan, cpb_sweet_spot, trk_check };

std::string to_string(Command command);

inline constexpr std::uint64_t default_seed = 0x5eedULL;

struct RunConfig {
    Command command = Command::critical;
    std::optional<DickeModel> model;
    std::optional<CpbSpec> cpb;

    CouplingAxis axis;
    std::vector<double> scan_values;             // meanfield-scan
    double bracket_lo = 0.0, bracket_hi = 0.0;   // critical
    double lambda_max = 0.0;                     // no-go
    int n_points = 201;                          // no-go

    std::vector<int> ed_atoms;                   // ed-nscan
    std::optional<int> ed_n_max;                 // ed-ground; empty = converge the cutoff
    CutoffSchedule cutoff;
    EdOptions ed;
    bool dump_state = false;

    std::vector<double> cpb_ej_values, cpb_ng_values;  // optional sweep grid

    CriticalOptions critical;  // also carries the minimizer options

    std::uint64_t seed = default_seed;
    bool seed_defaulted = true;
    std::string output = "results";
};

// Validates a run document and materializes defaults. Throws ConfigError
// naming the offending field path. Document layout:
//
//   command     "meanfield-scan" | "critical" | "no-go" | "ed-ground" |
//               "ed-nscan" | "cpb-sweet-spot" | "trk-check"
//   seed        Lanczos start-vector seed                  (default 24301)
//   output      output directory                           (default "results")
//   model       see model_io.hpp          (all commands except cpb-sweet-spot)
//   axis        { "coupling": [j, k], "tied": [{"coupling": [j, k], "ratio": r}],
//                 "kappa_rule": "fixed" | "trk-ground" }   (mean-field commands)
//   scan        { "values": [...] } or { "start", "stop", "points" }
//                                                          (meanfield-scan)
//   bracket     [lo, hi]           (critical; default [0, 4 sqrt(omega eps_max)])
//   no_go       { "lambda_max", "points" (default 201) }   (no-go)
//   ed          { "n_atoms": [..] (ed-nscan), "n_max": int | "auto",
//                 "tol_e", "growth", "dim_limit", "dump_state" }
//   tolerances  { "x_tol", "grid_points", "jump_threshold", "bisection_width",
//                 "probe_delta", "lanczos_tol" }
//   cpb         { "ec", "ej", "ng", "n_cut", "sweep": { "ej": [..], "ng": [..] } }
//
// Sections that the chosen command does not use are rejected.
RunConfig parse_config(const nlohmann::json& doc);

// Normalized echo of a parsed config with every default spelled out.
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace dicke
