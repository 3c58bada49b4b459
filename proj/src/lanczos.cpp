#include "dicke/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "dicke/errors.hpp"

namespace dicke {

namespace {

// Fixes the overall sign so repeated runs emit identical vectors.
void canonical_sign(Eigen::VectorXd& v) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
}

Eigen::VectorXd random_start(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
    return v.normalized();
}

}  // namespace

double norm_estimate(const SparseMatrix& h) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < h.outerSize(); ++r) {
        double sum = 0.0;
        for (SparseMatrix::InnerIterator it(h, r); it; ++it) sum += std::abs(it.value());
        best = std::max(best, sum);
    }
    return best;
}

EigenPair dense_ground_state(const Eigen::MatrixXd& h) {
    if (h.rows() == 0 || h.rows() != h.cols()) throw UsageError("ground state of an empty or non-square matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", std::numeric_limits<double>::infinity());
    EigenPair out;
    out.value = es.eigenvalues()(0);
    out.vector = es.eigenvectors().col(0).normalized();
    canonical_sign(out.vector);
    out.residual_norm = (h * out.vector - out.value * out.vector).norm();
    out.norm_estimate = h.cwiseAbs().rowwise().sum().maxCoeff();
    out.dense = true;
    return out;
}

EigenPair lanczos_ground_state(const SparseMatrix& h, const LanczosOptions& options) {
    const Eigen::Index n = h.rows();
    if (n == 0 || h.cols() != n) throw UsageError("ground state of an empty or non-square matrix");

    EigenPair out;
    out.seed = options.seed;
    out.norm_estimate = norm_estimate(h);
    const double scale = std::max(out.norm_estimate, std::numeric_limits<double>::min());
    const double target = options.tolerance * scale;

    if (n == 1) {
        out.value = h.coeff(0, 0);
        out.vector = Eigen::VectorXd::Ones(1);
        return out;
    }

    const int max_iterations = options.max_iterations > 0
                                   ? options.max_iterations
                                   : static_cast<int>(10.0 * std::sqrt(static_cast<double>(n))) + 200;
    // Keep the Krylov block under ~1.6 GB for very large sectors.
    const Eigen::Index memory_cap = std::max<Eigen::Index>(20, 200'000'000 / n);
    const Eigen::Index m_max = std::min({static_cast<Eigen::Index>(options.krylov_dim), n, memory_cap});

    Eigen::MatrixXd basis(n, m_max);
    Eigen::VectorXd v = random_start(n, options.seed);
    double best_residual = std::numeric_limits<double>::infinity();
    int total = 0;

    while (true) {
        basis.col(0) = v;
        std::vector<double> alpha, beta;
        for (Eigen::Index j = 0; j < m_max; ++j) {
            Eigen::VectorXd w = h * basis.col(j);
            ++total;
            const double a = basis.col(j).dot(w);
            w -= a * basis.col(j);
            if (j > 0) w -= beta[j - 1] * basis.col(j - 1);
            for (int pass = 0; pass < 2; ++pass) {
                const Eigen::VectorXd c = basis.leftCols(j + 1).transpose() * w;
                w -= basis.leftCols(j + 1) * c;
            }
            const double b = w.norm();
            alpha.push_back(a);

            const bool breakdown = b <= 1e-13 * scale;
            const bool last = j + 1 == m_max;
            const bool out_of_budget = total >= max_iterations;
            if (!(breakdown || last || out_of_budget || j % 8 == 7)) {
                beta.push_back(b);
                basis.col(j + 1) = w / b;
                continue;
            }

            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
            const Eigen::Map<const Eigen::VectorXd> diag(alpha.data(), j + 1);
            const Eigen::Map<const Eigen::VectorXd> sub(beta.data(), j);
            tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
            const Eigen::VectorXd s = tri.eigenvectors().col(0);
            const double estimate = b * std::abs(s(j));

            if (estimate <= target || breakdown || last || out_of_budget) {
                Eigen::VectorXd y = basis.leftCols(j + 1) * s;
                y.normalize();
                const Eigen::VectorXd hy = h * y;
                const double theta = y.dot(hy);
                const double residual = (hy - theta * y).norm();
                best_residual = std::min(best_residual, residual);
                if (residual <= target) {
                    out.value = theta;
                    out.vector = std::move(y);
                    canonical_sign(out.vector);
                    out.iterations = total;
                    out.residual_norm = residual;
                    return out;
                }
                if (out_of_budget)
                    throw ConvergenceError("Lanczos did not converge after " + std::to_string(total) +
                                               " iterations (best residual " +
                                               std::to_string(best_residual) + ")",
                                           best_residual);
                if (breakdown || last) {
                    v = std::move(y);
                    break;
                }
            }
            beta.push_back(b);
            basis.col(j + 1) = w / b;
        }
    }
}

EigenPair ground_state(const SparseMatrix& h, const LanczosOptions& options) {
    try {
        return lanczos_ground_state(h, options);
    } catch (const ConvergenceError&) {
        if (static_cast<std::size_t>(h.rows()) > options.dense_fallback_dim) throw;
        EigenPair out = dense_ground_state(Eigen::MatrixXd(h));
        out.seed = options.seed;
        return out;
    }
}

}  // namespace dicke
