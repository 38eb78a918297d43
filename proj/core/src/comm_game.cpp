#include "bellviol/comm_game.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "bellviol/parallel.hpp"
#include "bellviol/rng.hpp"

namespace bellviol {

namespace {

constexpr double spectrum_tol = 1e-9;
constexpr std::uint64_t block_rounds = 65536;

void attach_distribution(GameSpec& spec) {
    spec.coeff_abs_sum = 0.0;
    spec.distribution.resize(spec.T.size());
    for (double c : spec.T.coeffs) spec.coeff_abs_sum += std::abs(c);
    if (spec.coeff_abs_sum <= 0.0) {
        throw validation_error("all coefficients vanish; the input distribution is undefined");
    }
    for (std::size_t i = 0; i < spec.T.size(); ++i) {
        spec.distribution[i] = std::abs(spec.T.coeffs[i]) / spec.coeff_abs_sum;
    }
}

double strategy_correlation(const GameSpec& spec) {
    if (!spec.quantum) return strategy_value(spec.T, spec.classical_strategy);
    return contracted_expectation(spec.T, spec.observables, spec.state);
}

} // namespace

GameSpec GameSpec::classical(BellFunctional T, SignStrategy strategy) {
    GameSpec spec;
    spec.T = BellFunctional::checked(std::move(T.settings), std::move(T.coeffs));
    if (spec.T.parties() != 3) {
        throw validation_error("the broadcast game is defined for exactly three parties");
    }
    strategy_value(spec.T, strategy);   // shape and +-1 validation
    spec.classical_strategy = std::move(strategy);
    spec.quantum = false;
    attach_distribution(spec);
    return spec;
}

GameSpec GameSpec::quantum_strategy(BellFunctional T, QuantumState state,
                                    ObservableSet observables) {
    GameSpec spec;
    spec.T = BellFunctional::checked(std::move(T.settings), std::move(T.coeffs));
    if (spec.T.parties() != 3) {
        throw validation_error("the broadcast game is defined for exactly three parties");
    }
    spec.observables = ObservableSet::checked(std::move(observables.parties));
    if (spec.observables.settings() != spec.T.settings) {
        throw validation_error("observable setting counts do not match the functional");
    }
    if (state.dims != spec.observables.dims()) {
        throw validation_error("state dimensions do not match the observables");
    }
    for (std::size_t j = 0; j < spec.observables.parties.size(); ++j) {
        for (std::size_t m = 0; m < spec.observables.parties[j].size(); ++m) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(spec.observables.parties[j][m].m,
                                                     Eigen::EigenvaluesOnly);
            for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
                if (std::abs(std::abs(es.eigenvalues()[k]) - 1.0) > spectrum_tol) {
                    throw validation_error(
                        "observable for party " + std::to_string(j + 1) + ", setting " +
                        std::to_string(m + 1) + " is not +-1-valued (eigenvalue " +
                        std::to_string(es.eigenvalues()[k]) + ")");
                }
            }
        }
    }
    spec.state = std::move(state);
    spec.quantum = true;
    attach_distribution(spec);
    return spec;
}

double information_gain(double p) {
    if (p < -1e-6 || p > 1.0 + 1e-6) {
        throw validation_error("success probability " + std::to_string(p) + " is not in [0, 1]");
    }
    p = std::clamp(p, 0.0, 1.0);
    auto plog = [](double q) { return q > 0.0 ? q * std::log2(q) : 0.0; };
    return 1.0 + plog(p) + plog(1.0 - p);
}

GameResult exact_success(const GameSpec& spec) {
    GameResult result;
    result.success = 0.5 + strategy_correlation(spec) / (2.0 * spec.coeff_abs_sum);
    result.information_gain = information_gain(result.success);
    return result;
}

double ratio_check(const GameSpec& classical_spec, const GameSpec& quantum_spec) {
    if (classical_spec.T.settings != quantum_spec.T.settings ||
        classical_spec.T.coeffs != quantum_spec.T.coeffs) {
        throw validation_error("the two specs play different games");
    }
    const double base = exact_success(classical_spec).success - 0.5;
    if (std::abs(base) < 1e-12) {
        throw validation_error("baseline success is 1/2; the advantage ratio is undefined");
    }
    return (exact_success(quantum_spec).success - 0.5) / base;
}

namespace {

// Joint +-1 outcome distribution for one input combination, as a cumulative
// table over the 8 sign patterns (bit j of the pattern flags -1 for party j+1).
std::vector<double> outcome_table(const GameSpec& spec, const std::vector<int>& idx) {
    const std::vector<int>& dims = spec.state.dims;
    double corr[8] = {1.0, 0, 0, 0, 0, 0, 0, 0};   // corr[S], S a party bitmask
    for (int S = 1; S < 8; ++S) {
        if (spec.state.pure) {
            Vector v = spec.state.psi;
            for (int j = 0; j < 3; ++j) {
                if (S & (1 << j)) {
                    v = apply_local(v, spec.observables.parties[static_cast<std::size_t>(j)]
                                           [static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])].m,
                                    j, dims);
                }
            }
            corr[S] = spec.state.psi.dot(v).real();
        } else {
            Matrix op = Matrix::Identity(1, 1);
            for (int j = 0; j < 3; ++j) {
                const Matrix factor = (S & (1 << j))
                    ? spec.observables.parties[static_cast<std::size_t>(j)]
                          [static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])].m
                    : Matrix::Identity(dims[static_cast<std::size_t>(j)],
                                       dims[static_cast<std::size_t>(j)]);
                op = kron(op, factor);
            }
            corr[S] = (spec.state.rho * op).trace().real();
        }
    }

    std::vector<double> cum(8);
    double total = 0.0;
    for (int k = 0; k < 8; ++k) {
        double p = 1.0;
        for (int S = 1; S < 8; ++S) {
            const int parity = std::popcount(static_cast<unsigned>(k) & static_cast<unsigned>(S));
            p += ((parity & 1) ? -1.0 : 1.0) * corr[S];
        }
        p /= 8.0;
        if (p < -1e-6) {
            throw validation_error("outcome distribution has negative mass " + std::to_string(p));
        }
        total += std::max(p, 0.0);
        cum[static_cast<std::size_t>(k)] = total;
    }
    for (double& c : cum) c /= total;
    cum[7] = 1.0;
    return cum;
}

} // namespace

GameResult simulate_game(const GameSpec& spec, std::uint64_t rounds,
                         std::uint64_t seed, unsigned threads) {
    if (rounds == 0) throw validation_error("simulation needs at least one round");

    const std::size_t inputs = spec.T.size();
    std::vector<double> cdf(inputs);
    double acc = 0.0;
    for (std::size_t x = 0; x < inputs; ++x) {
        acc += spec.distribution[x];
        cdf[x] = acc;
    }
    cdf[inputs - 1] = 1.0;

    std::vector<int> tsign(inputs, 1);
    for (std::size_t x = 0; x < inputs; ++x) {
        if (spec.T.coeffs[x] < 0.0) tsign[x] = -1;
    }

    // Per-input answer data: a fixed product sign classically, a cumulative
    // outcome table quantumly. Inputs with zero weight are never drawn.
    std::vector<int> prod_sign(inputs, 1);
    std::vector<std::vector<double>> tables(inputs);
    std::vector<int> idx(3, 0);
    std::size_t flat = 0;
    do {
        if (spec.distribution[flat] > 0.0) {
            if (spec.quantum) {
                tables[flat] = outcome_table(spec, idx);
            } else {
                int s = 1;
                for (int j = 0; j < 3; ++j) {
                    s *= spec.classical_strategy.signs[static_cast<std::size_t>(j)]
                             [static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
                }
                prod_sign[flat] = s;
            }
        }
        ++flat;
    } while (next_index(idx, spec.T.settings));

    const Rng root(seed);
    const std::uint64_t n_blocks = (rounds + block_rounds - 1) / block_rounds;
    std::vector<std::uint64_t> hits(static_cast<std::size_t>(n_blocks), 0);

    parallel_for(static_cast<std::size_t>(n_blocks), threads, [&](std::size_t b) {
        Rng g = root.child(b);
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * block_rounds;
        const std::uint64_t n = std::min(block_rounds, rounds - lo);
        std::uint64_t good = 0;
        for (std::uint64_t r = 0; r < n; ++r) {
            const double u = g.uniform();
            const std::size_t x = static_cast<std::size_t>(
                std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            int prod;
            if (spec.quantum) {
                const double v = g.uniform();
                const std::vector<double>& cum = tables[x];
                const int k = static_cast<int>(
                    std::upper_bound(cum.begin(), cum.end(), v) - cum.begin());
                prod = (std::popcount(static_cast<unsigned>(k)) & 1) ? -1 : 1;
            } else {
                prod = prod_sign[x];
            }
            const int y = g.sign() * g.sign() * g.sign();
            // everyone outputs the product of the broadcasts y_i a_i
            if (y * prod == y * tsign[x]) ++good;
        }
        hits[b] = good;
    });

    std::uint64_t total = 0;
    for (std::uint64_t h : hits) total += h;

    GameResult result;
    result.rounds = rounds;
    result.seed = seed;
    result.success = static_cast<double>(total) / static_cast<double>(rounds);
    result.standard_error =
        std::sqrt(result.success * (1.0 - result.success) / static_cast<double>(rounds));
    result.information_gain = information_gain(result.success);
    return result;
}

} // namespace bellviol
