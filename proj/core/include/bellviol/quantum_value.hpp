#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bellviol/tensor_core.hpp"

namespace bellviol {

// State initialization policy for see-saw restarts. `batch` uses the
// maximally entangled state across the first-party/rest bipartition for
// every restart except the last one, which starts from a Haar-random pure
// state.
enum class StateInit { batch, entangled, random };

struct SeesawConfig {
    std::vector<int> dims;
    int restarts = 8;
    int max_iters = 300;
    double rel_tol = 1e-9;
    std::uint64_t seed = 0;
    StateInit init = StateInit::batch;
    int stagnation_limit = 200;   // iterations without improvement before giving up
    unsigned threads = 0;         // execution-width hint; 0 = all cores
};

struct RestartTrace {
    std::uint64_t seed = 0;
    std::vector<double> objective;   // one entry per half-step
    int iterations = 0;
    bool converged = false;
    double final_value = 0.0;
    double max_decrease = 0.0;       // largest backward step seen in the trace
};

struct ViolationReport {
    BellFunctional functional;
    double classical_value = 0.0;
    std::string classical_method;
    double quantum_value = 0.0;
    double ratio = 0.0;
    QuantumState best_state;
    ObservableSet best_observables;
    std::vector<RestartTrace> traces;
    std::uint64_t seed = 0;
};

// Exact maximizer of Re tr(E A) over Hermitian contractions: the eigen-sign
// of the Hermitian part of E. Zero eigenvalues map to +1, so E = 0 yields
// the identity.
Observable optimal_observable_step(const Matrix& E);

// Top eigenvector of a Hermitian Bell operator; for degenerate maxima the
// eigensolver's deterministic ordering picks the representative.
QuantumState optimal_state_step(const Matrix& B, const std::vector<int>& dims);

// Alternating lower-bound maximization of the quantum value. Each sweep
// replaces every observable by its eigen-sign update and, unless a fixed
// state is supplied, moves the state to the Bell operator's top eigenvector.
// The objective trace is nondecreasing up to roundoff. The report carries
// classical value, best certificate, and every restart's trace.
ViolationReport seesaw(const BellFunctional& T, const SeesawConfig& cfg,
                       const std::optional<QuantumState>& fixed_state = std::nullopt);

} // namespace bellviol
