#include "dicke/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace dicke {

using nlohmann::json;

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

// JSON has no nan/inf; those become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::vector<std::string> scan_csv_header(int levels) {
    std::vector<std::string> h{"coupling", "x_star", "e_star"};
    for (int j = 0; j < levels; ++j) h.push_back("pop_" + std::to_string(j));
    h.push_back("n_local_minima");
    return h;
}

void write_scan_csv(std::ostream& out, std::span<const double> couplings,
                    std::span<const MeanFieldSolution> solutions) {
    const int levels = solutions.empty() ? 0 : static_cast<int>(solutions.front().occupations.size());
    write_row(out, scan_csv_header(levels));
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        const auto& s = solutions[i];
        std::vector<std::string> row{format_number(couplings[i]), format_number(s.x_star), format_number(s.e_star)};
        for (double p : s.occupations) row.push_back(format_number(p));
        row.push_back(std::to_string(s.local_minima.size()));
        write_row(out, row);
    }
}

std::vector<std::string> ed_csv_header(int levels) {
    std::vector<std::string> h{"N", "n_max_used"};
    for (int j = 0; j < levels; ++j)
        for (int k = j + 1; k < levels; ++k) h.push_back("lambda_" + std::to_string(j) + std::to_string(k));
    for (const char* c : {"e0_per_atom", "photon_density", "quad"}) h.emplace_back(c);
    for (int j = 0; j < levels; ++j) h.push_back("pop_" + std::to_string(j));
    for (const char* c : {"parity", "residual_norm", "seed"}) h.emplace_back(c);
    return h;
}

void write_ed_csv_header(std::ostream& out, int levels) { write_row(out, ed_csv_header(levels)); }

void write_ed_csv_row(std::ostream& out, const DickeModel& model, const EDResult& r) {
    const AtomSpec& atom = model.atom();
    std::vector<std::string> row{std::to_string(r.n_atoms), std::to_string(r.n_max_used)};
    for (int j = 0; j < atom.levels(); ++j)
        for (int k = j + 1; k < atom.levels(); ++k) row.push_back(format_number(atom.coupling(j, k)));
    row.push_back(format_number(r.e0_per_atom));
    row.push_back(format_number(r.photon_density));
    row.push_back(format_number(r.quad));
    for (double p : r.populations) row.push_back(format_number(p));
    row.push_back(format_number(r.parity));
    row.push_back(format_number(r.residual_norm));
    row.push_back(std::to_string(r.seed));
    write_row(out, row);
}

std::vector<std::string> cpb_csv_header() {
    return {"ec", "ej", "ng", "e_level_0", "e_level_1", "e_level_2", "e_level_3",
            "overlap_g", "overlap_e", "omega0_eff", "charge_matrix_element"};
}

void write_cpb_csv(std::ostream& out, std::span<const CpbSweepRow> rows) {
    write_row(out, cpb_csv_header());
    for (const auto& r : rows) {
        std::vector<std::string> row{format_number(r.ec), format_number(r.ej), format_number(r.ng)};
        for (double e : r.levels) row.push_back(format_number(e));
        for (double v : {r.overlap_g, r.overlap_e, r.omega0_eff, r.charge_matrix_element})
            row.push_back(format_number(v));
        write_row(out, row);
    }
}

json to_json(const TransitionPoint& p) {
    return {{"coupling_value", p.coupling_value},
            {"order", to_string(p.order)},
            {"x_jump", p.x_jump},
            {"pop_jump", p.pop_jump},
            {"delta", p.delta},
            {"x_below", p.x_below},
            {"x_above", p.x_above},
            {"occupations_below", p.occupations_below},
            {"occupations_above", p.occupations_above}};
}

json to_json(const EDResult& r) {
    return {{"n_atoms", r.n_atoms},
            {"n_max_used", r.n_max_used},
            {"e0", r.e0},
            {"e0_per_atom", r.e0_per_atom},
            {"photon_density", r.photon_density},
            {"quad", r.quad},
            {"populations", r.populations},
            {"parity", r.parity},
            {"parity_gap", number(r.parity_gap)},
            {"lanczos_iterations", r.lanczos_iterations},
            {"residual_norm", r.residual_norm},
            {"norm_estimate", r.norm_estimate},
            {"seed", r.seed}};
}

json to_json(const TrkReport& r) {
    json pairs = json::array();
    for (const auto& p : r.unconstrained) pairs.push_back({p.lower, p.upper});
    return {{"kappa_min", r.kappa_min},
            {"kappa_saturates_ground", r.kappa_saturates_ground},
            {"unconstrained_transitions", std::move(pairs)}};
}

json to_json(const SweetSpotReport& r) {
    return {{"n", r.n}, {"overlap_g", r.overlap_g}, {"overlap_e", r.overlap_e}, {"splitting", r.splitting}};
}

json to_json(const TwoLevelReduction& r) {
    return {{"omega0_eff", r.omega0_eff},
            {"charge_matrix_element", r.charge_matrix_element},
            {"higher_gap", r.higher_gap},
            {"higher_levels_near_degenerate", r.higher_levels_near_degenerate}};
}

}  // namespace dicke
