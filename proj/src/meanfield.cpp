#include "dicke/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "dicke/errors.hpp"
#include "dicke/parallel.hpp"

namespace dicke {

DickeModel CouplingAxis::apply(const DickeModel& base, double value) const {
    DickeModel m = base.with_coupling(which, value);
    for (const auto& t : tied) m = m.with_coupling(t.pair, t.ratio * value);
    if (kappa_rule == KappaRule::trk_ground) m = m.with_kappa(trk_report(m).kappa_min);
    return m;
}

double energy_density(const DickeModel& model, double x) {
    const Eigen::MatrixXd h = single_atom_matrix(model.atom(), x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    return model.dressed_omega() * x * x + es.eigenvalues()(0);
}

std::vector<double> ground_occupations(const AtomSpec& atom, double x) {
    const int d = atom.levels();
    std::vector<double> occ(d, 0.0);
    if (x == 0.0) {
        // Diagonal matrix; a degenerate ground level is resolved onto level 0.
        occ[0] = 1.0;
        return occ;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(single_atom_matrix(atom, x));
    const Eigen::VectorXd v = es.eigenvectors().col(0);
    const double norm2 = v.squaredNorm();
    for (int j = 0; j < d; ++j) occ[j] = v(j) * v(j) / norm2;
    return occ;
}

double search_radius(const DickeModel& model) {
    const auto& eps = model.atom().energies();
    const double band = eps.back() - eps.front();
    const double l = model.atom().coupling_row_norm();
    const double stiffness = model.dressed_omega();
    const double root = (2.0 * l + std::sqrt(4.0 * l * l + 4.0 * stiffness * band)) / (2.0 * stiffness);
    return root > 0.0 ? root : 1.0;
}

MeanFieldSolution minimize(const DickeModel& model, const MinimizeOptions& options) {
    if (options.grid_points < 3) throw UsageError("minimize: grid needs at least 3 points");
    const auto e = [&](double x) {
        const double v = energy_density(model, x);
        if (!std::isfinite(v)) throw std::logic_error("energy density is not finite");
        return v;
    };

    MeanFieldSolution sol;
    sol.x_max = search_radius(model);
    const int n = options.grid_points;
    std::vector<double> xs(n), es(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = sol.x_max * static_cast<double>(i) / (n - 1);
        es[i] = e(xs[i]);
    }

    constexpr int bits = std::numeric_limits<double>::digits / 2;
    std::vector<LocalMinimum> minima;
    for (int i = 0; i < n; ++i) {
        const bool left_ok = i == 0 || es[i] < es[i - 1];
        const bool right_ok = i == n - 1 || es[i] <= es[i + 1];
        if (!left_ok || !right_ok) continue;
        const double lo = xs[std::max(i - 1, 0)];
        const double hi = xs[std::min(i + 1, n - 1)];
        auto [xr, er] = boost::math::tools::brent_find_minima(e, lo, hi, bits);
        LocalMinimum m{xs[i], es[i]};
        if (er < m.e) m = {xr, er};
        if (lo == 0.0 && es[0] <= m.e) m = {0.0, es[0]};
        if (m.x <= options.x_tol) m = {0.0, es[0]};
        minima.push_back(m);
    }
    // Neighbouring grid candidates can refine onto the same minimum.
    std::sort(minima.begin(), minima.end(), [](auto& a, auto& b) { return a.x < b.x; });
    const double merge = 1e-7 * std::max(1.0, sol.x_max);
    for (const auto& m : minima) {
        if (!sol.local_minima.empty() && m.x - sol.local_minima.back().x <= merge) {
            if (m.e < sol.local_minima.back().e) sol.local_minima.back() = m;
        } else {
            sol.local_minima.push_back(m);
        }
    }

    // Strict comparison keeps the smallest x among exactly degenerate minima.
    const LocalMinimum* best = &sol.local_minima.front();
    for (const auto& m : sol.local_minima)
        if (m.e < best->e) best = &m;
    sol.x_star = best->x;
    sol.e_star = best->e;
    sol.occupations = ground_occupations(model.atom(), sol.x_star);
    return sol;
}

std::vector<MeanFieldSolution> scan_order_parameter(const DickeModel& model,
                                                    const CouplingAxis& axis,
                                                    std::span<const double> values,
                                                    const MinimizeOptions& options,
                                                    int workers) {
    if (values.size() < 2) throw UsageError("scan: need at least 2 coupling values");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1])) throw UsageError("scan: coupling values must be ascending");
    std::vector<MeanFieldSolution> out(values.size());
    parallel_for(values.size(), workers,
                 [&](std::size_t i) { out[i] = minimize(axis.apply(model, values[i]), options); });
    return out;
}

std::string to_string(TransitionOrder order) {
    return order == TransitionOrder::first ? "first" : "second";
}

namespace {

struct Probe {
    double x_jump;
    std::vector<double> pop_jump;
    MeanFieldSolution below, above;
};

Probe probe(const DickeModel& model, const CouplingAxis& axis, double center, double delta,
            const MinimizeOptions& options) {
    Probe p{0.0, {}, minimize(axis.apply(model, center - delta), options),
            minimize(axis.apply(model, center + delta), options)};
    p.x_jump = std::abs(p.above.x_star - p.below.x_star);
    for (std::size_t j = 0; j < p.above.occupations.size(); ++j)
        p.pop_jump.push_back(std::abs(p.above.occupations[j] - p.below.occupations[j]));
    return p;
}

}  // namespace

TransitionPoint critical_coupling(const DickeModel& model, const CouplingAxis& axis,
                                  double lambda_lo, double lambda_hi,
                                  const CriticalOptions& options) {
    if (!(lambda_hi > lambda_lo)) throw UsageError("critical_coupling: bracket must be ascending");
    const double x_tol = options.minimize.x_tol;
    const auto superradiant = [&](double v) {
        return minimize(axis.apply(model, v), options.minimize).x_star > x_tol;
    };
    if (superradiant(lambda_lo) || !superradiant(lambda_hi))
        throw UsageError("no transition in bracket");

    const double target = options.relative_width * (lambda_hi - lambda_lo);
    double lo = lambda_lo, hi = lambda_hi;
    while (hi - lo > target) {
        const double mid = 0.5 * (lo + hi);
        (superradiant(mid) ? hi : lo) = mid;
    }

    TransitionPoint tp;
    tp.coupling_value = 0.5 * (lo + hi);
    tp.delta = options.relative_delta * std::abs(tp.coupling_value);
    const Probe outer = probe(model, axis, tp.coupling_value, tp.delta, options.minimize);
    const Probe inner = probe(model, axis, tp.coupling_value, 0.25 * tp.delta, options.minimize);

    // A square-root onset halves its jump when delta shrinks by 4; a genuine
    // discontinuity keeps it.
    tp.x_jump = std::max(0.0, 2.0 * inner.x_jump - outer.x_jump);
    double pj = 0.0;
    for (std::size_t j = 0; j < outer.pop_jump.size(); ++j)
        pj = std::max(pj, 2.0 * inner.pop_jump[j] - outer.pop_jump[j]);
    tp.pop_jump = std::clamp(pj, 0.0, 1.0);
    tp.order = tp.x_jump > options.jump_threshold ? TransitionOrder::first : TransitionOrder::second;
    tp.x_below = outer.below.x_star;
    tp.x_above = outer.above.x_star;
    tp.occupations_below = outer.below.occupations;
    tp.occupations_above = outer.above.occupations;
    return tp;
}

bool no_go_check(const DickeModel& model, const CouplingAxis& axis, double lambda_max,
                 int n_points, const MinimizeOptions& options) {
    if (n_points < 100) throw UsageError("no_go_check: need at least 100 scan points");
    if (!(lambda_max > 0.0)) throw UsageError("no_go_check: lambda_max must be positive");
    for (int i = 0; i < n_points; ++i) {
        const double v = lambda_max * static_cast<double>(i) / (n_points - 1);
        if (minimize(axis.apply(model, v), options).x_star > options.x_tol) return false;
    }
    return true;
}

}  // namespace dicke
