#include "bellviol/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "bellviol/builtins.hpp"
#include "bellviol/parallel.hpp"
#include "bellviol/rng.hpp"

namespace bellviol {

double BoundsTable::chsh_ratio() { return std::sqrt(2.0); }

double BoundsTable::ghz_tripartite_bound() {
    return 4.0 * std::sqrt(2.0) * grothendieck_upper;
}

double BoundsTable::ghz_nparty_bound(int parties) {
    if (parties < 2) throw validation_error("bound needs at least two parties");
    return grothendieck_upper * std::pow(2.0 * std::sqrt(2.0), parties - 1);
}

QuantumState ghz_state(int n, int parties) {
    if (n < 1 || parties < 2) throw validation_error("GHZ state needs n >= 1 and >= 2 parties");
    std::vector<int> dims(static_cast<std::size_t>(parties), n);
    const std::size_t D = joint_dim(dims);
    if (D > dim_budget()) {
        throw validation_error("joint dimension " + std::to_string(D) +
                               " exceeds the budget " + std::to_string(dim_budget()) +
                               " (override with BELLVIOL_BUDGET_DIM)");
    }
    Vector psi = Vector::Zero(static_cast<Eigen::Index>(D));
    std::size_t stride = 0;   // index step for |i...i>: 1 + n + n^2 + ...
    std::size_t power = 1;
    for (int j = 0; j < parties; ++j) {
        stride += power;
        power *= static_cast<std::size_t>(n);
    }
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
        psi[static_cast<Eigen::Index>(static_cast<std::size_t>(i) * stride)] = amp;
    }
    return QuantumState::make_pure(std::move(dims), std::move(psi));
}

GhzExperiment ghz_violation_experiment(int n, int settings, int trials,
                                       std::uint64_t seed, int parties,
                                       unsigned threads) {
    if (settings < 1) throw validation_error("experiment needs at least one setting");
    if (trials < 1) throw validation_error("experiment needs at least one trial");
    GhzExperiment exp;
    exp.n = n;
    exp.settings = settings;
    exp.parties = parties;
    exp.trials = trials;
    exp.seed = seed;
    exp.bound = parties == 3 ? BoundsTable::ghz_tripartite_bound()
                             : BoundsTable::ghz_nparty_bound(parties);

    const QuantumState ghz = ghz_state(n, parties);
    const Rng root(seed);
    const std::size_t runs = static_cast<std::size_t>(trials) + 1;   // Mermin instance last
    std::vector<ViolationReport> reports(runs);

    parallel_for(runs, threads, [&](std::size_t t) {
        const bool mermin = t + 1 == runs;
        BellFunctional T = mermin
            ? mermin_klyshko(parties)
            : random_functional(parties, settings, root.child(t).seed());
        SeesawConfig cfg;
        cfg.dims.assign(static_cast<std::size_t>(parties), n);
        cfg.restarts = 4;
        cfg.max_iters = 150;
        cfg.rel_tol = 1e-9;
        cfg.seed = root.child(0x5EED0 + t).seed();
        cfg.threads = 1;
        reports[t] = seesaw(T, cfg, ghz);
    });

    std::size_t best = 0;
    exp.ratios.reserve(runs);
    for (std::size_t t = 0; t < runs; ++t) {
        exp.ratios.push_back(reports[t].ratio);
        if (reports[t].ratio > reports[best].ratio) best = t;
    }
    exp.max_ratio = reports[best].ratio;
    exp.best = std::move(reports[best]);
    exp.within_bound = exp.max_ratio <= exp.bound;
    return exp;
}

namespace {

void check_family(const MatrixFamily& family) {
    if (family.empty()) throw validation_error("matrix family is empty");
    const std::size_t N = family.size();
    for (const auto& row : family) {
        if (row.size() != N) throw validation_error("matrix family must be square in its indices");
        for (const auto& a : row) {
            if (a.rows() != family[0][0].rows() || a.cols() != family[0][0].cols()) {
                throw validation_error("matrix family entries must share one shape");
            }
        }
    }
}

} // namespace

std::vector<double> rc_norm_terms(const MatrixFamily& family) {
    check_family(family);
    const int N = static_cast<int>(family.size());
    const Eigen::Index m = family[0][0].rows();

    Matrix row_sum = Matrix::Zero(m, m);
    Matrix col_sum = Matrix::Zero(m, m);
    for (const auto& row : family) {
        for (const auto& a : row) {
            row_sum += a * a.adjoint();
            col_sum += a.adjoint() * a;
        }
    }

    Matrix mixed_ij = Matrix::Zero(m * N, m * N);
    Matrix mixed_ji = Matrix::Zero(m * N, m * N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            const Matrix& a = family[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            mixed_ij.block(static_cast<Eigen::Index>(i) * m, static_cast<Eigen::Index>(j) * m, m, m) += a;
            mixed_ji.block(static_cast<Eigen::Index>(j) * m, static_cast<Eigen::Index>(i) * m, m, m) += a;
        }
    }

    return {std::sqrt(row_sum.operatorNorm()), std::sqrt(col_sum.operatorNorm()),
            mixed_ij.operatorNorm(), mixed_ji.operatorNorm()};
}

double rc_norm(const MatrixFamily& family) {
    const std::vector<double> t = rc_norm_terms(family);
    return std::max(t[0], t[1]);
}

double rc2_norm(const MatrixFamily& family) {
    const std::vector<double> t = rc_norm_terms(family);
    return *std::max_element(t.begin(), t.end());
}

MatrixFamily matrix_unit_family(int N) {
    if (N < 1) throw validation_error("matrix unit family needs N >= 1");
    MatrixFamily fam(static_cast<std::size_t>(N),
                     std::vector<Matrix>(static_cast<std::size_t>(N)));
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            Matrix e = Matrix::Zero(N, N);
            e(i, j) = 1.0;
            fam[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(e);
        }
    }
    return fam;
}

EnvelopeCheck sqrt_d_envelope(const ViolationReport& report, double slack) {
    if (report.best_state.dims.empty()) {
        throw validation_error("report carries no state dimensions");
    }
    const int d = *std::min_element(report.best_state.dims.begin(),
                                    report.best_state.dims.end());
    EnvelopeCheck check;
    check.ratio = report.ratio;
    check.budget = slack * std::sqrt(static_cast<double>(d));
    check.margin = check.budget - check.ratio;
    check.within = check.ratio <= check.budget;
    return check;
}

} // namespace bellviol
