#pragma once

#include <Eigen/Dense>

namespace dicke {

// Cooper pair box in the charge basis n in [-n_cut, n_cut]:
//   H[n][n] = 4 E_C (n - n_g)^2,   H[n][n +- 1] = -E_J / 2.
class CpbSpec {
public:
    CpbSpec(double ec, double ej, double ng, int n_cut);
    // Uses the smallest admissible cutoff plus a margin of 5 charge states.
    CpbSpec(double ec, double ej, double ng);

    static int minimum_cutoff(double ng);

    double ec() const { return ec_; }
    double ej() const { return ej_; }
    double ng() const { return ng_; }
    int n_cut() const { return n_cut_; }
    int dim() const { return 2 * n_cut_ + 1; }
    // Row/column of charge state n.
    int index_of(int n) const { return n + n_cut_; }

private:
    double ec_, ej_, ng_;
    int n_cut_;
};

Eigen::MatrixXd cpb_hamiltonian(const CpbSpec& spec);

// Ascending spectrum. An exactly degenerate ground pair (E_J = 0 at a
// half-integer gate charge) is resolved in the E_J -> 0+ limit by
// diagonalizing the hopping operator inside the pair. Columns are signed so
// that <floor(n_g)|state> >= 0.
struct CpbSpectrum {
    Eigen::VectorXd energies;
    Eigen::MatrixXd states;
};

CpbSpectrum cpb_spectrum(const CpbSpec& spec);

struct SweetSpotReport {
    int n = 0;  // charge pair {n, n+1} straddling n_g = n + 1/2
    double overlap_g = 0.0;  // |<(|n> + |n+1>)/sqrt2 | g>|^2
    double overlap_e = 0.0;  // |<(|n> - |n+1>)/sqrt2 | e>|^2
    double splitting = 0.0;  // E_e - E_g
};

// Requires n_g = n + 1/2 and E_J <= E_C.
SweetSpotReport verify_sweet_spot_states(const CpbSpec& spec);

struct TwoLevelReduction {
    double omega0_eff = 0.0;             // E_e - E_g
    double charge_matrix_element = 0.0;  // |<e| n |g>|
    double higher_gap = 0.0;             // E_2 - E_1
    bool higher_levels_near_degenerate = false;  // higher_gap < 0.01 omega0_eff
};

// Requires E_2 - E_1 > 0.
TwoLevelReduction two_level_reduction(const CpbSpec& spec);

// One row of the sweep table; overlaps use the pair {floor(n_g), floor(n_g)+1}
// whether or not n_g sits at the sweet spot.
struct CpbSweepRow {
    double ec = 0.0, ej = 0.0, ng = 0.0;
    double levels[4] = {0.0, 0.0, 0.0, 0.0};
    double overlap_g = 0.0, overlap_e = 0.0;
    double omega0_eff = 0.0, charge_matrix_element = 0.0;
};

CpbSweepRow cpb_sweep_row(const CpbSpec& spec);

}  // namespace dicke
