#include "dicke/exactdiag.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <type_traits>

#include "dicke/errors.hpp"
#include "dicke/meanfield.hpp"

namespace dicke {

namespace {

constexpr std::size_t saturated = std::numeric_limits<std::size_t>::max();

std::size_t saturating_add(std::size_t a, std::size_t b) { return a > saturated - b ? saturated : a + b; }

std::vector<std::vector<std::size_t>> composition_table(int atoms, int levels) {
    std::vector<std::vector<std::size_t>> table(levels + 1, std::vector<std::size_t>(atoms + 1, 0));
    table[0][0] = 1;
    for (int k = 1; k <= levels; ++k)
        for (int r = 0; r <= atoms; ++r)
            for (int v = 0; v <= r; ++v) table[k][r] = saturating_add(table[k][r], table[k - 1][r - v]);
    return table;
}

void enumerate(int pos, int remaining, std::vector<int>& current, std::vector<int>& out) {
    const int levels = static_cast<int>(current.size());
    if (pos == levels - 1) {
        current[pos] = remaining;
        out.insert(out.end(), current.begin(), current.end());
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        current[pos] = v;
        enumerate(pos + 1, remaining - v, current, out);
    }
}

}  // namespace

std::size_t SymmetricBasis::count_states(int atoms, int levels) {
    if (atoms < 0 || levels < 1) return 0;
    return composition_table(atoms, levels)[levels][atoms];
}

SymmetricBasis::SymmetricBasis(int n_atoms, int levels, int n_max, std::size_t dim_limit)
    : n_atoms_(n_atoms), levels_(levels), n_max_(n_max) {
    if (n_atoms < 1) throw UsageError("basis: N must be >= 1");
    if (levels < 2) throw UsageError("basis: need at least 2 levels");
    if (n_max < 0) throw UsageError("basis: photon cutoff must be >= 0");

    compositions_ = composition_table(n_atoms, levels);
    atomic_count_ = compositions_[levels][n_atoms];
    const auto photons = static_cast<std::size_t>(n_max) + 1;
    if (atomic_count_ == saturated || atomic_count_ > dim_limit / photons)
        throw ResourceError("basis dimension for N=" + std::to_string(n_atoms) + ", d=" +
                            std::to_string(levels) + ", n_max=" + std::to_string(n_max) +
                            " exceeds the limit of " + std::to_string(dim_limit));

    occupations_.reserve(atomic_count_ * levels);
    std::vector<int> current(levels, 0);
    enumerate(0, n_atoms, current, occupations_);

    weighted_level_sum_.resize(atomic_count_);
    for (std::size_t a = 0; a < atomic_count_; ++a) {
        const auto occ = atomic_state(a);
        int s = 0;
        for (int j = 0; j < levels; ++j) s += j * occ[j];
        weighted_level_sum_[a] = s;
    }
}

std::size_t SymmetricBasis::atomic_rank(std::span<const int> occupation) const {
    if (static_cast<int>(occupation.size()) != levels_) throw UsageError("occupation has the wrong length");
    std::size_t rank = 0;
    int remaining = n_atoms_;
    for (int pos = 0; pos + 1 < levels_; ++pos) {
        const int m = occupation[pos];
        if (m < 0 || m > remaining) throw UsageError("occupation does not sum to N");
        for (int v = m + 1; v <= remaining; ++v) rank += compositions_[levels_ - pos - 1][remaining - v];
        remaining -= m;
    }
    if (occupation[levels_ - 1] != remaining) throw UsageError("occupation does not sum to N");
    return rank;
}

int SymmetricBasis::parity_bit(std::size_t index) const {
    const auto [n, a] = unrank(index);
    return (n + weighted_level_sum_[a]) & 1;
}

SymmetricBasis build_basis(int n_atoms, int levels, int n_max, std::size_t dim_limit) {
    return SymmetricBasis(n_atoms, levels, n_max, dim_limit);
}

SparseMatrix build_hamiltonian(const DickeModel& model, const SymmetricBasis& basis) {
    const AtomSpec& atom = model.atom();
    if (basis.n_atoms() != model.n_atoms() || basis.levels() != atom.levels())
        throw UsageError("basis does not match the model (N or d differ)");

    const int d = atom.levels();
    const std::size_t na = basis.atomic_count();
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(model.n_atoms()));
    const double kappa = model.kappa();

    struct Transition {
        int to, from;  // b_to^dag b_from
        double lambda;
    };
    std::vector<Transition> transitions;
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k)
            if (atom.coupling(j, k) != 0.0) {
                transitions.push_back({j, k, atom.coupling(j, k)});
                transitions.push_back({k, j, atom.coupling(j, k)});
            }

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(basis.dim() * (1 + 2 * transitions.size() + (kappa != 0.0 ? 2 : 0)));
    std::vector<int> target(d);
    for (int n = 0; n <= basis.n_max(); ++n) {
        for (std::size_t a = 0; a < na; ++a) {
            const auto occ = basis.atomic_state(a);
            const auto row = static_cast<Eigen::Index>(n * na + a);
            double diag = model.omega() * n + kappa * (2.0 * n + 1.0);
            for (int j = 0; j < d; ++j) diag += atom.energies()[j] * occ[j];
            triplets.emplace_back(row, row, diag);

            if (kappa != 0.0 && n + 2 <= basis.n_max()) {
                const double v = kappa * std::sqrt((n + 1.0) * (n + 2.0));
                const auto col = static_cast<Eigen::Index>((n + 2) * na + a);
                triplets.emplace_back(row, col, v);
                triplets.emplace_back(col, row, v);
            }
            if (n + 1 > basis.n_max()) continue;
            const double photon_amp = std::sqrt(n + 1.0) * inv_sqrt_n;
            for (const auto& t : transitions) {
                if (occ[t.from] == 0) continue;
                std::copy(occ.begin(), occ.end(), target.begin());
                const double amp = std::sqrt((target[t.to] + 1.0) * target[t.from]);
                --target[t.from];
                ++target[t.to];
                const double v = t.lambda * photon_amp * amp;
                const auto col = static_cast<Eigen::Index>((n + 1) * na + basis.atomic_rank(target));
                triplets.emplace_back(row, col, v);
                triplets.emplace_back(col, row, v);
            }
        }
    }
    const auto dim = static_cast<Eigen::Index>(basis.dim());
    SparseMatrix h(dim, dim);
    h.setFromTriplets(triplets.begin(), triplets.end());
    return h;
}

EDResult observables(const Eigen::VectorXd& psi, const SymmetricBasis& basis, const DickeModel& model) {
    if (static_cast<std::size_t>(psi.size()) != basis.dim()) throw UsageError("state does not match the basis");
    const int d = basis.levels();
    const std::size_t na = basis.atomic_count();
    const double norm2 = psi.squaredNorm();

    EDResult r;
    r.n_atoms = model.n_atoms();
    r.n_max_used = basis.n_max();
    r.populations.assign(d, 0.0);
    double photons = 0.0, quad = 0.0, parity = 0.0;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const double c = psi(static_cast<Eigen::Index>(i));
        const double p = c * c;
        const auto [n, a] = basis.unrank(i);
        photons += n * p;
        quad += (2.0 * n + 1.0) * p;
        if (n + 2 <= basis.n_max())
            quad += 2.0 * c * psi(static_cast<Eigen::Index>(i + 2 * na)) * std::sqrt((n + 1.0) * (n + 2.0));
        parity += basis.parity_bit(i) ? -p : p;
        const auto occ = basis.atomic_state(a);
        for (int j = 0; j < d; ++j) r.populations[j] += occ[j] * p;
    }
    const double n_atoms = basis.n_atoms();
    r.photon_density = photons / norm2 / n_atoms;
    r.quad = quad / norm2 / n_atoms;
    r.parity = parity / norm2;
    for (double& p : r.populations) p /= norm2 * n_atoms;
    return r;
}

double field_moment(const Eigen::VectorXd& psi, const SymmetricBasis& basis) {
    const std::size_t na = basis.atomic_count();
    double sum = 0.0;
    for (std::size_t i = 0; i + na < basis.dim(); ++i) {
        const int n = basis.unrank(i).first;
        sum += 2.0 * psi(static_cast<Eigen::Index>(i)) * psi(static_cast<Eigen::Index>(i + na)) * std::sqrt(n + 1.0);
    }
    return sum / psi.squaredNorm() / std::sqrt(static_cast<double>(basis.n_atoms()));
}

namespace {

SparseMatrix restrict_to(const SparseMatrix& h, const std::vector<Eigen::Index>& rows,
                         const std::vector<Eigen::Index>& position) {
    const auto m = static_cast<Eigen::Index>(rows.size());
    std::vector<Eigen::Triplet<double>> triplets;
    for (Eigen::Index r = 0; r < m; ++r)
        for (SparseMatrix::InnerIterator it(h, rows[r]); it; ++it)
            if (position[it.col()] >= 0) triplets.emplace_back(r, position[it.col()], it.value());
    SparseMatrix sub(m, m);
    sub.setFromTriplets(triplets.begin(), triplets.end());
    return sub;
}

}  // namespace

EdGroundState solve_ground(const DickeModel& model, int n_max, const EdOptions& options) {
    const SymmetricBasis basis(model.n_atoms(), model.atom().levels(), n_max, options.dim_limit);
    const SparseMatrix h = build_hamiltonian(model, basis);
    const auto dim = static_cast<Eigen::Index>(basis.dim());

    EdGroundState out;
    EigenPair best;
    double gap = std::numeric_limits<double>::quiet_NaN();
    if (options.resolve_parity && model.atom().parity_conserving()) {
        std::vector<Eigen::Index> position(dim, -1);
        std::vector<Eigen::Index> rows[2];
        for (Eigen::Index i = 0; i < dim; ++i) {
            auto& sector = rows[basis.parity_bit(static_cast<std::size_t>(i))];
            position[i] = static_cast<Eigen::Index>(sector.size());
            sector.push_back(i);
        }
        EigenPair sector_ground[2];
        bool present[2] = {false, false};
        int iterations = 0;
        for (int s = 0; s < 2; ++s) {
            if (rows[s].empty()) continue;
            std::vector<Eigen::Index> local(dim, -1);
            for (Eigen::Index i : rows[s]) local[i] = position[i];
            sector_ground[s] = ground_state(restrict_to(h, rows[s], local), options.lanczos);
            iterations += sector_ground[s].iterations;
            present[s] = true;
        }
        // The even sector wins exact ties.
        const int pick = (!present[0] || (present[1] && sector_ground[1].value < sector_ground[0].value)) ? 1 : 0;
        best = sector_ground[pick];
        if (present[1 - pick]) gap = sector_ground[1 - pick].value - best.value;
        Eigen::VectorXd full = Eigen::VectorXd::Zero(dim);
        for (std::size_t k = 0; k < rows[pick].size(); ++k) full(rows[pick][k]) = best.vector(static_cast<Eigen::Index>(k));
        best.vector = std::move(full);
        best.iterations = iterations;
    } else {
        best = ground_state(h, options.lanczos);
    }

    out.result = observables(best.vector, basis, model);
    out.result.e0 = best.value;
    out.result.e0_per_atom = best.value / model.n_atoms();
    out.result.lanczos_iterations = best.iterations;
    out.result.residual_norm = (h * best.vector - best.value * best.vector).norm();
    out.result.norm_estimate = norm_estimate(h);
    out.result.seed = options.lanczos.seed;
    out.result.parity_gap = gap;
    out.psi = std::move(best.vector);
    return out;
}

int initial_cutoff(const DickeModel& model) {
    const double x = minimize(model).x_star;
    const double photons = 4.0 * model.n_atoms() * x * x;
    return std::max(8, static_cast<int>(std::ceil(photons)) + 16);
}

EdGroundState converge_cutoff(const DickeModel& model, const CutoffSchedule& schedule, const EdOptions& options) {
    if (!(schedule.tol_e > 0.0)) throw UsageError("converge_cutoff: tol_e must be positive");
    if (!(schedule.growth > 1.0)) throw UsageError("converge_cutoff: growth factor must exceed 1");
    const std::size_t atomic = SymmetricBasis::count_states(model.n_atoms(), model.atom().levels());

    std::vector<double> trace;
    EdGroundState previous;
    int n_max = initial_cutoff(model);
    while (true) {
        if (atomic == saturated || atomic > options.dim_limit / (static_cast<std::size_t>(n_max) + 1)) {
            std::string msg = "photon cutoff did not converge before the basis limit (n_max=" +
                              std::to_string(n_max) + "); e0 trace:";
            for (double e : trace) msg += " " + std::to_string(e);
            throw ResourceError(msg, trace);
        }
        EdGroundState current = solve_ground(model, n_max, options);
        trace.push_back(current.result.e0);
        if (trace.size() >= 2 && std::abs(trace.back() - trace[trace.size() - 2]) <= schedule.tol_e)
            return previous;
        previous = std::move(current);
        n_max = std::max(n_max + 1, static_cast<int>(std::ceil(schedule.growth * n_max)));
    }
}

namespace {

template <class T>
void put_le(std::ostream& out, T value) {
    static_assert(std::is_unsigned_v<T>);
    for (std::size_t b = 0; b < sizeof(T); ++b) out.put(static_cast<char>((value >> (8 * b)) & 0xff));
}

}  // namespace

void write_state_dump(std::ostream& out, const Eigen::VectorXd& psi, const SymmetricBasis& basis, double threshold) {
    std::vector<std::uint64_t> order;
    for (Eigen::Index i = 0; i < psi.size(); ++i)
        if (std::abs(psi(i)) > threshold) order.push_back(static_cast<std::uint64_t>(i));
    std::stable_sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
        return std::abs(psi(static_cast<Eigen::Index>(a))) > std::abs(psi(static_cast<Eigen::Index>(b)));
    });
    out.write("DICKEPSI", 8);
    put_le<std::uint32_t>(out, 1);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(basis.levels()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(basis.n_atoms()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(basis.n_max()));
    put_le<std::uint64_t>(out, basis.dim());
    put_le<std::uint64_t>(out, order.size());
    for (std::uint64_t i : order) {
        put_le<std::uint64_t>(out, i);
        put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(psi(static_cast<Eigen::Index>(i))));
    }
}

}  // namespace dicke
