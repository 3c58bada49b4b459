#pragma once

#include <span>
#include <string>
#include <vector>

#include "dicke/model.hpp"

namespace dicke {

// Thermodynamic-limit variational solver. The ansatz is a photon coherent
// state with <a> = sqrt(N) x times identical single-atom states, giving the
// energy per atom
//
//   e(x) = (omega + 4 kappa) x^2 + lowest eigenvalue of single_atom_matrix(atom, x).
//
// x is taken real and non-negative.

enum class KappaRule {
    fixed,       // kappa stays at the base model's value
    trk_ground,  // kappa = lambda_01^2 / eps_1 at every scan point
};

struct TiedCoupling {
    LevelPair pair;
    double ratio = 0.0;  // lambda_pair = ratio * scanned value
};

// One-parameter family of models obtained by setting one coupling.
struct CouplingAxis {
    LevelPair which{0, 1};
    std::vector<TiedCoupling> tied;
    KappaRule kappa_rule = KappaRule::fixed;

    DickeModel apply(const DickeModel& base, double value) const;
};

struct MinimizeOptions {
    int grid_points = 400;
    double x_tol = 1e-6;  // amplitudes at or below this count as the normal phase
};

struct LocalMinimum {
    double x = 0.0;
    double e = 0.0;
};

struct MeanFieldSolution {
    double x_star = 0.0;
    double e_star = 0.0;
    std::vector<double> occupations;
    std::vector<LocalMinimum> local_minima;  // ascending in x
    double x_max = 0.0;                      // upper end of the search interval
};

double energy_density(const DickeModel& model, double x);

// Ground-state level populations of single_atom_matrix(atom, x).
std::vector<double> ground_occupations(const AtomSpec& atom, double x);

// Interval [0, x_max] guaranteed to contain the global minimum: x_max solves
// (omega + 4 kappa) x^2 = (eps_max - eps_0) + 2 L x with L the coupling row norm.
double search_radius(const DickeModel& model);

MeanFieldSolution minimize(const DickeModel& model, const MinimizeOptions& options = {});

std::vector<MeanFieldSolution> scan_order_parameter(const DickeModel& model,
                                                    const CouplingAxis& axis,
                                                    std::span<const double> values,
                                                    const MinimizeOptions& options = {},
                                                    int workers = 1);

enum class TransitionOrder { first, second };

std::string to_string(TransitionOrder order);

struct CriticalOptions {
    MinimizeOptions minimize;
    double jump_threshold = 0.05;
    double relative_width = 1e-8;  // bisection stops at this fraction of the bracket
    double relative_delta = 1e-4;  // probe offset as a fraction of lambda_c
};

struct TransitionPoint {
    double coupling_value = 0.0;
    TransitionOrder order = TransitionOrder::second;
    // Discontinuity estimates extrapolated from probes at lambda_c +- delta and
    // lambda_c +- delta/4 assuming jump(delta) = jump0 + c sqrt(delta).
    double x_jump = 0.0;
    double pop_jump = 0.0;
    // Raw probes at lambda_c +- delta.
    double delta = 0.0;
    double x_below = 0.0;
    double x_above = 0.0;
    std::vector<double> occupations_below;
    std::vector<double> occupations_above;
};

TransitionPoint critical_coupling(const DickeModel& model, const CouplingAxis& axis,
                                  double lambda_lo, double lambda_hi,
                                  const CriticalOptions& options = {});

// Scans the axis coupling over n_points values in [0, lambda_max]. Returns
// true iff no point is superradiant.
bool no_go_check(const DickeModel& model, const CouplingAxis& axis, double lambda_max,
                 int n_points, const MinimizeOptions& options = {});

}  // namespace dicke
