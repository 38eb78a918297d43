#pragma once

#include "bellviol/tensor_core.hpp"

namespace bellviol {

struct NoiseReport {
    double p = 1.0;
    double clean_value = 0.0;
    double noisy_value = 0.0;
    double predicted = 0.0;       // p * clean_value
    double classical_value = 0.0;
    double critical_p = 0.0;      // classical_value / |clean_value|
};

inline constexpr double traceless_tol = 1e-10;
inline constexpr double noise_affinity_tol = 1e-9;

// rho' = p rho + (1 - p) I / dim. Requires 0 <= p <= 1.
QuantumState mix_white_noise(const QuantumState& rho, double p);

// Violation under white noise. Every observable must already be traceless
// (within traceless_tol); the module rejects non-traceless sets instead of
// silently projecting them, naming the offending party and setting. For
// traceless sets the joint operator is traceless, so the noisy value equals
// p * clean exactly; both paths are evaluated and cross-checked internally.
NoiseReport noisy_violation(const BellFunctional& T, const QuantumState& state,
                            const ObservableSet& obs, double p);

} // namespace bellviol
