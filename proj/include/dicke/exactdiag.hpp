#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dicke/lanczos.hpp"
#include "dicke/model.hpp"

namespace dicke {

inline constexpr std::size_t default_dim_limit = 5'000'000;

// Photon Fock states |n>, n <= n_max, times permutation-symmetric atomic
// states labelled by level occupations (m_0, ..., m_{d-1}), sum m_j = N.
// Atomic states are ranked in descending lexicographic order of the occupation
// vector, so rank 0 is (N, 0, ..., 0); the full index is
// n * atomic_count() + atomic_rank.
class SymmetricBasis {
public:
    SymmetricBasis(int n_atoms, int levels, int n_max, std::size_t dim_limit = default_dim_limit);

    int n_atoms() const { return n_atoms_; }
    int levels() const { return levels_; }
    int n_max() const { return n_max_; }
    std::size_t atomic_count() const { return atomic_count_; }
    std::size_t dim() const { return atomic_count_ * static_cast<std::size_t>(n_max_ + 1); }

    std::span<const int> atomic_state(std::size_t rank) const {
        return {occupations_.data() + rank * levels_, static_cast<std::size_t>(levels_)};
    }
    std::size_t atomic_rank(std::span<const int> occupation) const;

    std::size_t rank(int n_photons, std::span<const int> occupation) const {
        return static_cast<std::size_t>(n_photons) * atomic_count_ + atomic_rank(occupation);
    }
    // (photon number, atomic rank)
    std::pair<int, std::size_t> unrank(std::size_t index) const {
        return {static_cast<int>(index / atomic_count_), index % atomic_count_};
    }

    // (n_ph + sum_j j m_j) mod 2
    int parity_bit(std::size_t index) const;

    // Number of occupation vectors with `levels` entries summing to `atoms`,
    // saturating at SIZE_MAX.
    static std::size_t count_states(int atoms, int levels);

private:
    int n_atoms_;
    int levels_;
    int n_max_;
    std::size_t atomic_count_;
    std::vector<int> occupations_;
    std::vector<int> weighted_level_sum_;  // sum_j j m_j per atomic state
    // compositions_[k][r]: occupation vectors with k entries summing to r
    std::vector<std::vector<std::size_t>> compositions_;
};

SymmetricBasis build_basis(int n_atoms, int levels, int n_max,
                           std::size_t dim_limit = default_dim_limit);

// H = omega n_ph + sum_j eps_j m_j
//     + (1/sqrt(N)) (a + a^dag) sum_{j<k} lambda_jk (b_j^dag b_k + b_k^dag b_j)
//     + kappa (a^2 + a^dag^2 + 2 a^dag a + 1)
// with both triangles stored; each off-diagonal entry is written exactly once
// per triangle, so H equals its transpose bit for bit.
SparseMatrix build_hamiltonian(const DickeModel& model, const SymmetricBasis& basis);

struct EdOptions {
    LanczosOptions lanczos;
    std::size_t dim_limit = default_dim_limit;
    // Diagonalize the two parity sectors separately when parity is conserved.
    bool resolve_parity = true;
};

struct EDResult {
    int n_atoms = 0;
    double e0 = 0.0;
    double e0_per_atom = 0.0;
    double photon_density = 0.0;  // <a^dag a> / N
    double quad = 0.0;            // <(a + a^dag)^2> / N
    std::vector<double> populations;
    double parity = 0.0;
    int n_max_used = 0;
    int lanczos_iterations = 0;
    double residual_norm = 0.0;
    double norm_estimate = 0.0;
    std::uint64_t seed = 0;
    // Lowest energy of the other parity sector minus e0; NaN if not resolved.
    double parity_gap = 0.0;
};

struct EdGroundState {
    EDResult result;
    Eigen::VectorXd psi;
};

// Basis-diagonal and two-banded expectation values; energy fields are left at 0.
EDResult observables(const Eigen::VectorXd& psi, const SymmetricBasis& basis,
                     const DickeModel& model);

// <a + a^dag> / sqrt(N)
double field_moment(const Eigen::VectorXd& psi, const SymmetricBasis& basis);

EdGroundState solve_ground(const DickeModel& model, int n_max, const EdOptions& options = {});

struct CutoffSchedule {
    double tol_e = 1e-8;
    double growth = 1.5;
};

int initial_cutoff(const DickeModel& model);

// Raises n_max geometrically from initial_cutoff(model) until consecutive
// ground energies agree to tol_e and returns the lower-cutoff result.
// Throws ResourceError with the energy trace if the basis outgrows dim_limit.
EdGroundState converge_cutoff(const DickeModel& model, const CutoffSchedule& schedule = {},
                              const EdOptions& options = {});

// Binary ground-state dump, little-endian:
//   char[8]  "DICKEPSI"
//   uint32   format version (1)
//   uint32   levels, uint32 n_atoms, uint32 n_max
//   uint64   dim, uint64 count
//   count x { uint64 basis index, float64 coefficient }
// Records are sorted by descending |coefficient| (ties by index); entries with
// |coefficient| <= threshold are omitted.
void write_state_dump(std::ostream& out, const Eigen::VectorXd& psi, const SymmetricBasis& basis,
                      double threshold = 1e-14);

}  // namespace dicke
