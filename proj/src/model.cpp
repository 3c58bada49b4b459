#include "dicke/model.hpp"

#include <cmath>
#include <string>

#include "dicke/errors.hpp"

namespace dicke {

LevelPair::LevelPair(int a, int b) : lower(std::min(a, b)), upper(std::max(a, b)) {
    if (a == b) throw UsageError("level pair must join two distinct levels");
    if (lower < 0) throw UsageError("level index must be non-negative");
}

AtomSpec::AtomSpec(std::vector<double> energies, Eigen::MatrixXd couplings)
    : energies_(std::move(energies)), couplings_(std::move(couplings)) {
    const auto d = static_cast<Eigen::Index>(energies_.size());
    if (d < 2) throw ConfigError("atom.energies: need at least 2 levels");
    for (double e : energies_)
        if (!std::isfinite(e)) throw ConfigError("atom.energies: non-finite energy");
    if (energies_[0] != 0.0) throw ConfigError("atom.energies: energies[0] must be 0");
    for (Eigen::Index j = 1; j < d; ++j)
        if (energies_[j] < energies_[j - 1])
            throw ConfigError("atom.energies: must be sorted ascending");
    if (couplings_.rows() != d || couplings_.cols() != d)
        throw ConfigError("atom.couplings: must be " + std::to_string(d) + "x" +
                          std::to_string(d));
    for (Eigen::Index j = 0; j < d; ++j) {
        if (couplings_(j, j) != 0.0) throw ConfigError("atom.couplings: diagonal must be 0");
        for (Eigen::Index k = 0; k < d; ++k) {
            if (!std::isfinite(couplings_(j, k)))
                throw ConfigError("atom.couplings: non-finite entry");
            if (couplings_(j, k) != couplings_(k, j))
                throw ConfigError("atom.couplings: matrix must be symmetric");
        }
    }
}

AtomSpec AtomSpec::two_level(double omega0, double lambda) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
    c(0, 1) = c(1, 0) = lambda;
    return AtomSpec({0.0, omega0}, c);
}

AtomSpec AtomSpec::ladder(double e1, double e2, double lambda01, double lambda12) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 3);
    c(0, 1) = c(1, 0) = lambda01;
    c(1, 2) = c(2, 1) = lambda12;
    return AtomSpec({0.0, e1, e2}, c);
}

AtomSpec AtomSpec::with_coupling(LevelPair pair, double value) const {
    if (pair.upper >= levels()) throw UsageError("level pair outside the atom");
    Eigen::MatrixXd c = couplings_;
    c(pair.lower, pair.upper) = c(pair.upper, pair.lower) = value;
    return AtomSpec(energies_, c);
}

AtomSpec AtomSpec::scaled(double s) const {
    std::vector<double> e = energies_;
    for (double& v : e) v *= s;
    return AtomSpec(std::move(e), couplings_ * s);
}

bool AtomSpec::is_ladder() const { return levels() == 3 && couplings_(0, 2) == 0.0; }

bool AtomSpec::parity_conserving() const {
    for (int j = 0; j < levels(); ++j)
        for (int k = j + 1; k < levels(); ++k)
            if (couplings_(j, k) != 0.0 && (k - j) % 2 == 0) return false;
    return true;
}

double AtomSpec::coupling_row_norm() const {
    return couplings_.cwiseAbs().rowwise().sum().maxCoeff();
}

DickeModel::DickeModel(double omega, int n_atoms, AtomSpec atom, double kappa)
    : omega_(omega), n_atoms_(n_atoms), atom_(std::move(atom)), kappa_(kappa) {
    if (!(omega_ > 0.0) || !std::isfinite(omega_)) throw ConfigError("omega: must be > 0");
    if (n_atoms_ < 1) throw ConfigError("n_atoms: must be >= 1");
    if (!(kappa_ >= 0.0) || !std::isfinite(kappa_)) throw ConfigError("kappa: must be >= 0");
}

DickeModel DickeModel::with_coupling(LevelPair pair, double value) const {
    return {omega_, n_atoms_, atom_.with_coupling(pair, value), kappa_};
}

DickeModel DickeModel::with_kappa(double kappa) const { return {omega_, n_atoms_, atom_, kappa}; }

DickeModel DickeModel::with_atoms(int n_atoms) const { return {omega_, n_atoms, atom_, kappa_}; }

DickeModel DickeModel::scaled(double s) const {
    if (!(s > 0.0)) throw UsageError("scale factor must be positive");
    return {omega_ * s, n_atoms_, atom_.scaled(s), kappa_ * s};
}

Eigen::MatrixXd single_atom_matrix(const AtomSpec& atom, double x) {
    Eigen::MatrixXd m = (2.0 * x) * atom.couplings();
    for (int j = 0; j < atom.levels(); ++j) m(j, j) = atom.energies()[j];
    return m;
}

TrkReport trk_report(const DickeModel& model) {
    const AtomSpec& atom = model.atom();
    const double eps1 = atom.energies()[1];
    if (!(eps1 > 0.0)) throw UsageError("degenerate ground transition");

    TrkReport report;
    const double lambda01 = atom.coupling(0, 1);
    report.kappa_min = lambda01 * lambda01 / eps1;
    report.kappa_saturates_ground = model.kappa() >= report.kappa_min;
    for (int j = 1; j < atom.levels(); ++j)
        for (int k = j + 1; k < atom.levels(); ++k)
            if (atom.coupling(j, k) != 0.0) report.unconstrained.emplace_back(j, k);
    return report;
}

}  // namespace dicke
