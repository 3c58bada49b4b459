#pragma once

#include <vector>

#include <Eigen/Dense>

namespace dicke {

// Unordered pair of atomic levels, stored with lower < upper.
struct LevelPair {
    int lower = 0;
    int upper = 1;

    LevelPair() = default;
    LevelPair(int a, int b);

    friend bool operator==(const LevelPair&, const LevelPair&) = default;
};

// A d-level atom: ascending level energies with energies[0] == 0 and a real
// symmetric, zero-diagonal matrix of field couplings between levels.
class AtomSpec {
public:
    AtomSpec(std::vector<double> energies, Eigen::MatrixXd couplings);

    static AtomSpec two_level(double omega0, double lambda);
    // Three levels (0, e1, e2) with 0-1 and 1-2 couplings and no 0-2 coupling.
    static AtomSpec ladder(double e1, double e2, double lambda01, double lambda12);

    int levels() const { return static_cast<int>(energies_.size()); }
    const std::vector<double>& energies() const { return energies_; }
    const Eigen::MatrixXd& couplings() const { return couplings_; }
    double coupling(int j, int k) const { return couplings_(j, k); }

    AtomSpec with_coupling(LevelPair pair, double value) const;
    AtomSpec scaled(double s) const;

    bool is_ladder() const;
    // True when every non-zero coupling connects levels of opposite index parity,
    // so that (-1)^(n_ph + sum_j j m_j) commutes with the Hamiltonian.
    bool parity_conserving() const;
    // Largest absolute row sum of the coupling matrix; bounds its spectral norm.
    double coupling_row_norm() const;

private:
    std::vector<double> energies_;
    Eigen::MatrixXd couplings_;
};

// Single photon mode of frequency omega coupled to n_atoms identical atoms.
//
// Coupling convention, shared by the mean-field and exact-diagonalization code:
//   H = omega a^dag a + sum_k h_k
//       + (1/sqrt(N)) (a + a^dag) sum_k sum_{j<l} lambda_jl (|j><l| + |l><j|)_k
//       + kappa (a + a^dag)^2
class DickeModel {
public:
    DickeModel(double omega, int n_atoms, AtomSpec atom, double kappa = 0.0);

    double omega() const { return omega_; }
    int n_atoms() const { return n_atoms_; }
    const AtomSpec& atom() const { return atom_; }
    double kappa() const { return kappa_; }

    // Effective photon stiffness in the coherent-state energy density.
    double dressed_omega() const { return omega_ + 4.0 * kappa_; }

    DickeModel with_coupling(LevelPair pair, double value) const;
    DickeModel with_kappa(double kappa) const;
    DickeModel with_atoms(int n_atoms) const;
    // Multiplies every energy scale (omega, kappa, level energies, couplings) by s.
    DickeModel scaled(double s) const;

private:
    double omega_;
    int n_atoms_;
    AtomSpec atom_;
    double kappa_;
};

// Field-dressed single-atom matrix: diag(energies) + 2 x couplings.
Eigen::MatrixXd single_atom_matrix(const AtomSpec& atom, double x);

struct TrkReport {
    // lambda_01^2 / eps_1: the diamagnetic strength at which the ground-level
    // instability of the two-level problem disappears.
    double kappa_min = 0.0;
    bool kappa_saturates_ground = false;
    // Non-zero couplings between excited levels; the ground-level bound says
    // nothing about them.
    std::vector<LevelPair> unconstrained;
};

TrkReport trk_report(const DickeModel& model);

}  // namespace dicke
