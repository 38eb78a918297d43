#include "bellviol/random_states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "bellviol/parallel.hpp"

namespace bellviol {

Matrix haar_unitary(int N, Rng& rng) {
    if (N < 1) throw validation_error("unitary size must be positive");
    Matrix G(N, N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) G(i, j) = rng.cgauss();
    }
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix U = qr.householderQ();
    for (int k = 0; k < N; ++k) {
        const cplx r = qr.matrixQR()(k, k);
        const double a = std::abs(r);
        const cplx phase = a > 0.0 ? r / a : cplx(1.0, 0.0);
        U.col(k) *= phase;
    }
    return U;
}

UnitaryFamily sample_unitary_family(int n, int N, std::uint64_t seed) {
    if (n < 1) throw validation_error("family size must be positive");
    UnitaryFamily fam;
    fam.n = n;
    fam.N = N;
    fam.seed = seed;
    const Rng root(seed);
    fam.u.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Rng rng = root.child(static_cast<std::uint64_t>(i));
        fam.u.push_back(haar_unitary(N, rng));
    }
    return fam;
}

namespace {

// Discrete Weyl matrix X^a Z^b with X the cyclic shift and Z the clock.
Matrix weyl(int N, int a, int b) {
    Matrix W = Matrix::Zero(N, N);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(N);
    for (int m = 0; m < N; ++m) {
        const cplx phase = std::polar(1.0, step * static_cast<double>(b) * static_cast<double>(m));
        W((m + a) % N, m) = phase;
    }
    return W;
}

} // namespace

UnitaryFamily orthogonal_unitary_family(int n, int N, std::uint64_t seed) {
    if (n < 1 || N < 1) throw validation_error("family shape must be positive");
    if (static_cast<long long>(n) > static_cast<long long>(N) * N) {
        throw validation_error("at most N^2 pairwise trace-orthogonal unitaries exist in M_N");
    }
    const Rng root(seed);
    Rng left_rng = root.child(1);
    Rng right_rng = root.child(2);
    const Matrix V = haar_unitary(N, left_rng);
    const Matrix W = haar_unitary(N, right_rng);
    UnitaryFamily fam;
    fam.n = n;
    fam.N = N;
    fam.seed = seed;
    fam.u.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        fam.u.push_back(V * weyl(N, i / N, i % N) * W);
    }
    return fam;
}

QuantumState tripartite_state_from_family(const UnitaryFamily& fam) {
    const int n = fam.n;
    const int N = fam.N;
    if (static_cast<int>(fam.u.size()) != n) {
        throw validation_error("unitary family is incomplete");
    }
    const std::size_t D = static_cast<std::size_t>(n) * static_cast<std::size_t>(N) *
                          static_cast<std::size_t>(N);
    if (D > dim_budget()) {
        throw validation_error("joint dimension " + std::to_string(D) +
                               " exceeds the budget " + std::to_string(dim_budget()) +
                               " (override with BELLVIOL_BUDGET_DIM)");
    }
    Vector psi(static_cast<Eigen::Index>(D));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n) * static_cast<double>(N));
    for (int i = 0; i < n; ++i) {
        const Matrix& U = fam.u[static_cast<std::size_t>(i)];
        for (int j = 0; j < N; ++j) {
            for (int k = 0; k < N; ++k) {
                // <j| U_i^dag |k> = conj(U_i[k, j])
                psi[static_cast<Eigen::Index>((static_cast<std::size_t>(i) * N + j) * N + k)] =
                    scale * std::conj(U(k, j));
            }
        }
    }
    return QuantumState::make_pure({n, N, N}, std::move(psi));
}

QuantumState random_tripartite_state(int n, int N, std::uint64_t seed) {
    return tripartite_state_from_family(orthogonal_unitary_family(n, N, seed));
}

EpsNormEstimate eps_norm(const UnitaryFamily& fam, int restarts, std::uint64_t seed) {
    if (restarts < 1) throw validation_error("eps_norm needs at least one restart");
    const int n = fam.n;
    const int N = fam.N;
    if (static_cast<int>(fam.u.size()) != n || n < 1) {
        throw validation_error("unitary family is incomplete");
    }

    EpsNormEstimate best;
    best.restarts = restarts;
    best.seed = seed;
    best.value = -1.0;
    const Rng root(seed);

    for (int r = 0; r < restarts; ++r) {
        Rng rng = root.child(static_cast<std::uint64_t>(r));
        Vector x(N), y(N);
        for (int k = 0; k < N; ++k) x[k] = rng.cgauss();
        for (int k = 0; k < N; ++k) y[k] = rng.cgauss();
        x.normalize();
        y.normalize();

        std::vector<cplx> lambda(static_cast<std::size_t>(n));
        double value = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            // Coefficient step: lambda_i proportional to conj(<y| U_i |x>).
            double norm2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const cplx c = y.dot(fam.u[static_cast<std::size_t>(i)] * x);
                lambda[static_cast<std::size_t>(i)] = std::conj(c);
                norm2 += std::norm(c);
            }
            const double norm = std::sqrt(norm2);
            if (norm == 0.0) break;
            for (auto& l : lambda) l /= norm;

            // Singular step: top pair of M = Sum lambda_i U_i, read off the
            // Hermitian eigenproblem of M^dag M (much cheaper than a full SVD).
            Matrix M = Matrix::Zero(N, N);
            for (int i = 0; i < n; ++i) {
                M += lambda[static_cast<std::size_t>(i)] * fam.u[static_cast<std::size_t>(i)];
            }
            Eigen::SelfAdjointEigenSolver<Matrix> es(M.adjoint() * M);
            const double next = std::sqrt(std::max(0.0, es.eigenvalues()(N - 1)));
            if (next == 0.0) break;
            x = es.eigenvectors().col(N - 1);
            y = (M * x) / next;
            if (next - value <= 1e-12 * std::max(1.0, next)) {
                value = std::max(value, next);
                break;
            }
            value = next;
        }
        if (value > best.value) {
            best.value = value;
            best.lambda = lambda;
            best.x = x;
            best.y = y;
        }
    }
    return best;
}

double chevet_bound(int n, int N) {
    if (n < 1 || N < 1) throw validation_error("bound arguments must be positive");
    return 32.0 * std::numbers::pi *
           (1.0 + std::sqrt(static_cast<double>(n) / (4.0 * static_cast<double>(N))));
}

ChevetSummary chevet_montecarlo(int n, int N, int samples, std::uint64_t seed,
                                unsigned threads) {
    if (samples < 1) throw validation_error("Monte Carlo needs at least one sample");
    ChevetSummary summary;
    summary.n = n;
    summary.N = N;
    summary.samples = samples;
    summary.seed = seed;
    summary.bound = chevet_bound(n, N);
    summary.values.assign(static_cast<std::size_t>(samples), 0.0);

    const Rng root(seed);
    parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t s) {
        const Rng sample_rng = root.child(s);
        const UnitaryFamily fam = sample_unitary_family(n, N, sample_rng.child(0).seed());
        summary.values[s] = eps_norm(fam, 16, sample_rng.child(1).seed()).value;
    });

    double sum = 0.0, mx = 0.0;
    for (double v : summary.values) {
        sum += v;
        mx = std::max(mx, v);
    }
    summary.mean = sum / static_cast<double>(samples);
    summary.max = mx;
    double var = 0.0;
    for (double v : summary.values) var += (v - summary.mean) * (v - summary.mean);
    summary.stddev = samples > 1 ? std::sqrt(var / static_cast<double>(samples - 1)) : 0.0;
    return summary;
}

} // namespace bellviol
