#include "bellviol/quantum_value.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Eigenvalues>

#include "bellviol/classical_value.hpp"
#include "bellviol/parallel.hpp"
#include "bellviol/random_states.hpp"
#include "bellviol/rng.hpp"

namespace bellviol {

Observable optimal_observable_step(const Matrix& E) {
    if (E.rows() != E.cols() || E.rows() < 1) {
        throw validation_error("effective operator must be a nonempty square matrix");
    }
    const Matrix H = 0.5 * (E + E.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
    Eigen::VectorXd signs(eig.eigenvalues().size());
    for (Eigen::Index k = 0; k < signs.size(); ++k) {
        signs(k) = eig.eigenvalues()(k) < 0.0 ? -1.0 : 1.0;
    }
    Matrix A = eig.eigenvectors() * signs.asDiagonal() * eig.eigenvectors().adjoint();
    A = 0.5 * (A + A.adjoint().eval());
    Observable out;
    out.m = std::move(A);
    return out;
}

QuantumState optimal_state_step(const Matrix& B, const std::vector<int>& dims) {
    const std::size_t D = joint_dim(dims);
    if (static_cast<std::size_t>(B.rows()) != D || B.rows() != B.cols()) {
        throw validation_error("operator shape does not match the dimension list");
    }
    if ((B - B.adjoint()).cwiseAbs().maxCoeff() > operator_herm_tol) {
        throw validation_error("state step needs a Hermitian operator");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (B + B.adjoint()));
    Vector top = eig.eigenvectors().col(eig.eigenvectors().cols() - 1);
    return QuantumState::make_pure(dims, std::move(top));
}

namespace {

struct PureComponent {
    double weight;
    Vector vec;
};

std::vector<PureComponent> pure_components(const QuantumState& state) {
    if (state.pure) return {{1.0, state.psi}};
    Eigen::SelfAdjointEigenSolver<Matrix> eig(state.rho);
    std::vector<PureComponent> parts;
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
        const double w = eig.eigenvalues()(k);
        if (w > 1e-14) parts.push_back({w, eig.eigenvectors().col(k)});
    }
    return parts;
}

// G(a, b) = Sum_{l,r} conj(psi[l,a,r]) chi[l,b,r] over the slot of `party`.
Matrix cross_gram(const Vector& psi, const Vector& chi, int party,
                  const std::vector<int>& dims) {
    const int d = dims[static_cast<std::size_t>(party)];
    std::size_t left = 1, right = 1;
    for (int j = 0; j < party; ++j) left *= static_cast<std::size_t>(dims[static_cast<std::size_t>(j)]);
    for (std::size_t j = static_cast<std::size_t>(party) + 1; j < dims.size(); ++j) {
        right *= static_cast<std::size_t>(dims[j]);
    }
    Matrix G = Matrix::Zero(d, d);
    for (std::size_t l = 0; l < left; ++l) {
        const std::size_t base = l * static_cast<std::size_t>(d) * right;
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                cplx acc(0.0, 0.0);
                const std::size_t oa = base + static_cast<std::size_t>(a) * right;
                const std::size_t ob = base + static_cast<std::size_t>(b) * right;
                for (std::size_t r = 0; r < right; ++r) {
                    acc += std::conj(psi[static_cast<Eigen::Index>(oa + r)]) *
                           chi[static_cast<Eigen::Index>(ob + r)];
                }
                G(a, b) += acc;
            }
        }
    }
    return G;
}

// E_{i_j} such that the objective restricted to party j's block is
// Sum_{i_j} Re tr(A_{i_j} E_{i_j}).
std::vector<Matrix> effective_operators(const BellFunctional& T, const ObservableSet& obs,
                                        const std::vector<PureComponent>& parts, int party,
                                        const std::vector<int>& dims) {
    const int N = T.parties();
    const int d = dims[static_cast<std::size_t>(party)];
    const int M = T.settings[static_cast<std::size_t>(party)];
    std::vector<Matrix> E(static_cast<std::size_t>(M), Matrix::Zero(d, d));

    std::vector<int> rest_radix;
    std::vector<int> rest_party;
    for (int j = 0; j < N; ++j) {
        if (j == party) continue;
        rest_party.push_back(j);
        rest_radix.push_back(T.settings[static_cast<std::size_t>(j)]);
    }
    std::vector<int> full_idx(static_cast<std::size_t>(N), 0);
    std::vector<int> rest_idx(rest_radix.size(), 0);
    do {
        Matrix G = Matrix::Zero(d, d);
        for (const auto& part : parts) {
            Vector chi = part.vec;
            for (std::size_t q = 0; q < rest_party.size(); ++q) {
                const int j = rest_party[q];
                chi = apply_local(chi, obs.parties[static_cast<std::size_t>(j)]
                                           [static_cast<std::size_t>(rest_idx[q])].m, j, dims);
            }
            G += part.weight * cross_gram(part.vec, chi, party, dims);
        }
        const Matrix Et = G.transpose();
        for (std::size_t q = 0; q < rest_party.size(); ++q) {
            full_idx[static_cast<std::size_t>(rest_party[q])] = rest_idx[q];
        }
        for (int m = 0; m < M; ++m) {
            full_idx[static_cast<std::size_t>(party)] = m;
            const double t = T.at(full_idx);
            if (t != 0.0) E[static_cast<std::size_t>(m)] += t * Et;
        }
    } while (!rest_radix.empty() && next_index(rest_idx, rest_radix));
    return E;
}

QuantumState initial_state(const std::vector<int>& dims, StateInit policy, bool last_restart,
                           Rng& rng) {
    const std::size_t D = joint_dim(dims);
    const bool random = policy == StateInit::random ||
                        (policy == StateInit::batch && last_restart);
    Vector psi(static_cast<Eigen::Index>(D));
    if (random) {
        for (Eigen::Index k = 0; k < psi.size(); ++k) psi[k] = rng.cgauss();
        psi.normalize();
    } else {
        const std::size_t d1 = static_cast<std::size_t>(dims[0]);
        const std::size_t rest = D / d1;
        const std::size_t k = std::min(d1, rest);
        psi.setZero();
        const double amp = 1.0 / std::sqrt(static_cast<double>(k));
        for (std::size_t i = 0; i < k; ++i) {
            psi[static_cast<Eigen::Index>(i * rest + i)] = amp;
        }
    }
    return QuantumState::make_pure(dims, std::move(psi));
}

struct RestartOutcome {
    RestartTrace trace;
    QuantumState state;
    ObservableSet observables;
};

RestartOutcome run_restart(const BellFunctional& T, const SeesawConfig& cfg,
                           const std::optional<QuantumState>& fixed_state,
                           std::uint64_t restart_seed, bool last_restart) {
    const int N = T.parties();
    Rng rng(restart_seed);

    std::vector<std::vector<Observable>> parties(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
        const int d = cfg.dims[static_cast<std::size_t>(j)];
        for (int m = 0; m < T.settings[static_cast<std::size_t>(j)]; ++m) {
            Rng sub = rng.child(1000 * static_cast<std::uint64_t>(j) +
                                static_cast<std::uint64_t>(m));
            const Matrix U = haar_unitary(d, sub);
            Eigen::VectorXd diag(d);
            for (int k = 0; k < d; ++k) diag(k) = sub.sign();
            // A scalar +-identity start wastes the restart: it commutes with
            // everything, so force at least one opposite sign when d allows.
            if (d >= 2 && std::abs(diag.sum()) == static_cast<double>(d)) {
                diag(static_cast<Eigen::Index>(sub.integer(static_cast<std::uint64_t>(d)))) *=
                    -1.0;
            }
            Matrix A = U * diag.asDiagonal() * U.adjoint();
            A = 0.5 * (A + A.adjoint().eval());
            Observable o;
            o.m = std::move(A);
            parties[static_cast<std::size_t>(j)].push_back(std::move(o));
        }
    }
    ObservableSet obs = ObservableSet::checked(std::move(parties));

    Rng state_rng = rng.child(777);
    QuantumState state = fixed_state ? *fixed_state
                                     : initial_state(cfg.dims, cfg.init, last_restart, state_rng);
    std::vector<PureComponent> parts = pure_components(state);

    RestartTrace trace;
    trace.seed = restart_seed;
    trace.objective.push_back(contracted_expectation(T, obs, state));

    auto record = [&trace](double value) {
        const double prev = trace.objective.back();
        if (prev - value > trace.max_decrease) trace.max_decrease = prev - value;
        trace.objective.push_back(value);
    };

    double iter_obj = trace.objective.front();
    int stall = 0;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        for (int j = 0; j < N; ++j) {
            const std::vector<Matrix> E = effective_operators(T, obs, parts, j, cfg.dims);
            double obj = 0.0;
            for (int m = 0; m < T.settings[static_cast<std::size_t>(j)]; ++m) {
                Observable a = optimal_observable_step(E[static_cast<std::size_t>(m)]);
                obj += (a.m * E[static_cast<std::size_t>(m)]).trace().real();
                obs.parties[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] =
                    std::move(a);
            }
            record(obj);
        }
        if (!fixed_state) {
            const Matrix B = bell_operator(T, obs);
            state = optimal_state_step(B, cfg.dims);
            parts = pure_components(state);
            record(expectation(state, B));
        }
        trace.iterations = iter + 1;

        const double obj = trace.objective.back();
        const double delta = obj - iter_obj;
        if (iter > 0 && std::abs(delta) <= cfg.rel_tol * std::max(1.0, std::abs(obj))) {
            trace.converged = true;
            break;
        }
        stall = delta > 0.0 ? 0 : stall + 1;
        if (stall > cfg.stagnation_limit) break;
        iter_obj = obj;
    }

    trace.final_value = contracted_expectation(T, obs, state);
    return {std::move(trace), std::move(state), std::move(obs)};
}

} // namespace

ViolationReport seesaw(const BellFunctional& T, const SeesawConfig& cfg,
                       const std::optional<QuantumState>& fixed_state) {
    BellFunctional::checked(T.settings, T.coeffs);
    if (static_cast<int>(cfg.dims.size()) != T.parties()) {
        throw validation_error("dimension list party count does not match the functional");
    }
    const std::size_t D = joint_dim(cfg.dims);
    if (D > dim_budget()) {
        throw validation_error("joint dimension " + std::to_string(D) +
                               " exceeds the budget " + std::to_string(dim_budget()) +
                               " (override with BELLVIOL_BUDGET_DIM)");
    }
    if (cfg.restarts < 1) throw validation_error("see-saw needs at least one restart");
    if (cfg.max_iters < 1) throw validation_error("see-saw needs at least one iteration");
    if (fixed_state && fixed_state->dims != cfg.dims) {
        throw validation_error("fixed state dimensions do not match the configuration");
    }
    bool all_zero = true;
    for (double c : T.coeffs) {
        if (c != 0.0) { all_zero = false; break; }
    }
    if (all_zero) throw validation_error("functional is identically zero; the ratio is undefined");

    ViolationReport report;
    report.functional = T;
    report.seed = cfg.seed;

    const Rng root(cfg.seed);
    ClassicalResult classical;
    try {
        classical = classical_value_exact(T, cfg.threads);
    } catch (const validation_error&) {
        classical = classical_value_heuristic(T, 64, root.child(0xC1A551CA).seed());
    }
    report.classical_value = classical.value;
    report.classical_method = classical.method;

    std::vector<RestartOutcome> outcomes;
    outcomes.resize(static_cast<std::size_t>(cfg.restarts),
                    RestartOutcome{RestartTrace{}, QuantumState{}, ObservableSet{}});
    parallel_for(static_cast<std::size_t>(cfg.restarts), cfg.threads, [&](std::size_t r) {
        const std::uint64_t restart_seed = root.child(r + 1).seed();
        outcomes[r] = run_restart(T, cfg, fixed_state, restart_seed,
                                  r + 1 == static_cast<std::size_t>(cfg.restarts));
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < outcomes.size(); ++r) {
        if (outcomes[r].trace.final_value > outcomes[best].trace.final_value) best = r;
    }
    report.quantum_value = outcomes[best].trace.final_value;
    report.best_state = std::move(outcomes[best].state);
    report.best_observables = std::move(outcomes[best].observables);
    for (auto& o : outcomes) report.traces.push_back(std::move(o.trace));
    report.ratio = report.quantum_value / report.classical_value;
    return report;
}

} // namespace bellviol
