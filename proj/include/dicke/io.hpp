#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dicke/cpb.hpp"
#include "dicke/exactdiag.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/model.hpp"
#include "json.hpp"

namespace dicke {

// Shortest round-trip decimal form ("%.17g"), with nan/inf spelled out.
std::string format_number(double value);

// Mean-field scan table, one row per coupling value:
//   coupling, x_star, e_star, pop_0, ..., pop_{d-1}, n_local_minima
std::vector<std::string> scan_csv_header(int levels);
void write_scan_csv(std::ostream& out, std::span<const double> couplings,
                    std::span<const MeanFieldSolution> solutions);

// Exact-diagonalization table:
//   N, n_max_used, lambda_jk for every j < k (row-major order), e0_per_atom,
//   photon_density, quad, pop_0, ..., pop_{d-1}, parity, residual_norm, seed
std::vector<std::string> ed_csv_header(int levels);
void write_ed_csv_header(std::ostream& out, int levels);
void write_ed_csv_row(std::ostream& out, const DickeModel& model, const EDResult& result);

// Cooper-pair-box sweep table:
//   ec, ej, ng, e_level_0, ..., e_level_3, overlap_g, overlap_e, omega0_eff,
//   charge_matrix_element
std::vector<std::string> cpb_csv_header();
void write_cpb_csv(std::ostream& out, std::span<const CpbSweepRow> rows);

nlohmann::json to_json(const TransitionPoint& point);
nlohmann::json to_json(const EDResult& result);
nlohmann::json to_json(const TrkReport& report);
nlohmann::json to_json(const SweetSpotReport& report);
nlohmann::json to_json(const TwoLevelReduction& reduction);

}  // namespace dicke
