#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dicke {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct LanczosOptions {
    double tolerance = 1e-10;           // residual bound relative to norm_estimate(H)
    std::uint64_t seed = 0x5eedULL;     // start-vector seed
    int max_iterations = 0;             // 0: 10 sqrt(dim) + 200
    int krylov_dim = 300;               // basis size before an explicit restart
    std::size_t dense_fallback_dim = 2000;
};

struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;  // normalized, largest-magnitude entry positive
    int iterations = 0;
    double residual_norm = 0.0;  // ||H v - value v||
    double norm_estimate = 0.0;
    std::uint64_t seed = 0;
    bool dense = false;
};

// Max absolute row sum; an upper bound on the spectral norm.
double norm_estimate(const SparseMatrix& h);

// Lowest eigenpair by Lanczos with full reorthogonalization and explicit
// restarts from the current Ritz vector. Throws ConvergenceError carrying the
// best residual when the iteration budget runs out.
EigenPair lanczos_ground_state(const SparseMatrix& h, const LanczosOptions& options = {});

EigenPair dense_ground_state(const Eigen::MatrixXd& h);

// Lanczos, falling back to a dense eigensolver for small matrices that fail to converge.
EigenPair ground_state(const SparseMatrix& h, const LanczosOptions& options = {});

}  // namespace dicke
