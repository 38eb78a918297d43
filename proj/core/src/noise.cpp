#include "bellviol/noise.hpp"

#include <cmath>
#include <string>

#include "bellviol/classical_value.hpp"
#include "bellviol/errors.hpp"
#include "bellviol/rng.hpp"

namespace bellviol {

QuantumState mix_white_noise(const QuantumState& state, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw validation_error("noise weight p must lie in [0, 1], got " + std::to_string(p));
    }
    Matrix rho = state.density();
    const Eigen::Index D = rho.rows();
    Matrix mixed = p * rho
        + ((1.0 - p) / static_cast<double>(D)) * Matrix::Identity(D, D);
    return QuantumState::make_mixed(state.dims, std::move(mixed));
}

NoiseReport noisy_violation(const BellFunctional& T, const QuantumState& state,
                            const ObservableSet& obs, double p) {
    for (std::size_t j = 0; j < obs.parties.size(); ++j) {
        for (std::size_t m = 0; m < obs.parties[j].size(); ++m) {
            const double tr = std::abs(obs.parties[j][m].m.trace());
            if (tr > traceless_tol) {
                throw validation_error(
                    "observable for party " + std::to_string(j + 1) + ", setting " +
                    std::to_string(m + 1) + " has trace " + std::to_string(tr) +
                    "; split it with make_traceless first");
            }
        }
    }

    NoiseReport report;
    report.p = p;
    report.clean_value = contracted_expectation(T, obs, state);
    if (report.clean_value == 0.0) {
        throw validation_error("clean value is zero; the critical visibility is undefined");
    }
    report.noisy_value = contracted_expectation(T, obs, mix_white_noise(state, p));
    report.predicted = p * report.clean_value;
    const double drift = std::abs(report.noisy_value - report.predicted);
    if (drift > noise_affinity_tol * std::max(1.0, std::abs(report.clean_value))) {
        throw validation_error("noisy value drifted from p * clean by " + std::to_string(drift));
    }

    ClassicalResult classical;
    try {
        classical = classical_value_exact(T);
    } catch (const validation_error&) {
        classical = classical_value_heuristic(T, 64, Rng(T.size()).child(0xC1A551CA).seed());
    }
    report.classical_value = classical.value;
    report.critical_p = report.classical_value / std::abs(report.clean_value);
    return report;
}

} // namespace bellviol
