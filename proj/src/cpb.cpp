#include "dicke/cpb.hpp"

#include <cmath>
#include <limits>

#include "dicke/errors.hpp"

namespace dicke {

int CpbSpec::minimum_cutoff(double ng) { return 5 + static_cast<int>(std::ceil(std::abs(ng))); }

CpbSpec::CpbSpec(double ec, double ej, double ng, int n_cut) : ec_(ec), ej_(ej), ng_(ng), n_cut_(n_cut) {
    if (!(ec > 0.0) || !std::isfinite(ec)) throw ConfigError("ec: must be > 0");
    if (!(ej >= 0.0) || !std::isfinite(ej)) throw ConfigError("ej: must be >= 0");
    if (!std::isfinite(ng)) throw ConfigError("ng: must be finite");
    if (n_cut < minimum_cutoff(ng))
        throw ConfigError("n_cut: must be >= 5 + ceil(|ng|) = " + std::to_string(minimum_cutoff(ng)));
}

CpbSpec::CpbSpec(double ec, double ej, double ng) : CpbSpec(ec, ej, ng, minimum_cutoff(ng) + 5) {}

Eigen::MatrixXd cpb_hamiltonian(const CpbSpec& spec) {
    const int dim = spec.dim();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double q = (i - spec.n_cut()) - spec.ng();
        h(i, i) = 4.0 * spec.ec() * q * q;
        if (i + 1 < dim) h(i, i + 1) = h(i + 1, i) = -0.5 * spec.ej();
    }
    return h;
}

CpbSpectrum cpb_spectrum(const CpbSpec& spec) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cpb_hamiltonian(spec));
    CpbSpectrum out{es.eigenvalues(), es.eigenvectors()};
    const int dim = spec.dim();

    const double tol = 1e-12 * (spec.ec() + spec.ej());
    int multiplicity = 1;
    while (multiplicity < dim && out.energies(multiplicity) - out.energies(0) <= tol) ++multiplicity;
    if (multiplicity > 2) throw UsageError("ground-state degeneracy beyond tolerance");
    if (multiplicity == 2) {
        Eigen::MatrixXd hop = Eigen::MatrixXd::Zero(dim, dim);
        for (int i = 0; i + 1 < dim; ++i) hop(i, i + 1) = hop(i + 1, i) = -0.5;
        const Eigen::MatrixXd pair = out.states.leftCols(2);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> inner(pair.transpose() * hop * pair);
        out.states.leftCols(2) = pair * inner.eigenvectors();
    }

    const int ref = spec.index_of(static_cast<int>(std::floor(spec.ng())));
    for (int c = 0; c < dim; ++c)
        if (out.states(ref, c) < 0.0) out.states.col(c) *= -1.0;
    return out;
}

namespace {

double pair_overlap(const Eigen::VectorXd& state, int i, int sign) {
    const double amp = (state(i) + sign * state(i + 1)) / std::sqrt(2.0);
    return amp * amp;
}

}  // namespace

SweetSpotReport verify_sweet_spot_states(const CpbSpec& spec) {
    const double n = std::floor(spec.ng());
    if (std::abs(spec.ng() - n - 0.5) > 1e-12) throw UsageError("sweet spot requires n_g = n + 1/2");
    if (spec.ej() > spec.ec()) throw UsageError("sweet-spot check requires E_J <= E_C");

    const CpbSpectrum sp = cpb_spectrum(spec);
    SweetSpotReport r;
    r.n = static_cast<int>(n);
    const int i = spec.index_of(r.n);
    r.overlap_g = pair_overlap(sp.states.col(0), i, +1);
    r.overlap_e = pair_overlap(sp.states.col(1), i, -1);
    r.splitting = sp.energies(1) - sp.energies(0);
    return r;
}

namespace {

TwoLevelReduction reduce(const CpbSpec& spec, const CpbSpectrum& sp) {
    TwoLevelReduction r;
    r.omega0_eff = sp.energies(1) - sp.energies(0);
    r.higher_gap = sp.energies(2) - sp.energies(1);
    double element = 0.0;
    for (int i = 0; i < spec.dim(); ++i) element += sp.states(i, 1) * (i - spec.n_cut()) * sp.states(i, 0);
    r.charge_matrix_element = std::abs(element);
    r.higher_levels_near_degenerate = r.higher_gap < 0.01 * r.omega0_eff;
    return r;
}

}  // namespace

TwoLevelReduction two_level_reduction(const CpbSpec& spec) {
    const CpbSpectrum sp = cpb_spectrum(spec);
    if (!(sp.energies(2) - sp.energies(1) > 0.0))
        throw UsageError("two-level reduction needs E_2 - E_1 > 0");
    return reduce(spec, sp);
}

CpbSweepRow cpb_sweep_row(const CpbSpec& spec) {
    const CpbSpectrum sp = cpb_spectrum(spec);
    CpbSweepRow row;
    row.ec = spec.ec();
    row.ej = spec.ej();
    row.ng = spec.ng();
    for (int k = 0; k < 4; ++k) row.levels[k] = sp.energies(k);
    const int i = spec.index_of(static_cast<int>(std::floor(spec.ng())));
    row.overlap_g = pair_overlap(sp.states.col(0), i, +1);
    row.overlap_e = pair_overlap(sp.states.col(1), i, -1);
    const TwoLevelReduction red = reduce(spec, sp);
    row.omega0_eff = red.omega0_eff;
    row.charge_matrix_element = red.charge_matrix_element;
    return row;
}

}  // namespace dicke
