#pragma once

#include <cstdint>
#include <vector>

#include "bellviol/classical_value.hpp"
#include "bellviol/tensor_core.hpp"

namespace bellviol {

// Three-party broadcast game: inputs x drawn with probability |T_x| / Sum|T|,
// independent uniform signs y_i, target F(x, y) = (prod_i y_i) sign(T_x).
// Each party broadcasts m_i = y_i a_i and everyone outputs prod_i m_i, so a
// round succeeds exactly when prod_i a_i = sign(T_x).
struct GameSpec {
    BellFunctional T;
    bool quantum = false;
    SignStrategy classical_strategy;   // when !quantum
    QuantumState state;                // when quantum
    ObservableSet observables;         // when quantum; +-1 spectra required
    std::vector<double> distribution;  // |T_x| / Sum |T|, flat row-major
    double coeff_abs_sum = 0.0;

    static GameSpec classical(BellFunctional T, SignStrategy strategy);
    static GameSpec quantum_strategy(BellFunctional T, QuantumState state,
                                     ObservableSet observables);
};

struct GameResult {
    double success = 0.0;          // P
    double standard_error = 0.0;   // 0 for exact evaluation
    std::uint64_t rounds = 0;      // 0 for exact evaluation
    double information_gain = 0.0; // 1 - H(P)
    std::uint64_t seed = 0;
};

// 1 - H(p) in bits, with 0 log 0 = 0.
double information_gain(double p);

// Closed-form success probability P = 1/2 + V / (2 Sum|T|) where V is the
// strategy's correlation value.
GameResult exact_success(const GameSpec& spec);

// (P_quantum - 1/2) / (P_classical - 1/2); equals the violation ratio of the
// two strategies' correlation values. Rejects degenerate P_classical = 1/2.
double ratio_check(const GameSpec& classical_spec, const GameSpec& quantum_spec);

// Samples full protocol rounds (x, y, broadcast, output). Quantum outcomes
// are drawn from the joint +-1 outcome distribution of the binarized
// observables. Rounds are processed in fixed-size blocks with derived seeds,
// so the tally is reproducible for any thread count.
GameResult simulate_game(const GameSpec& spec, std::uint64_t rounds,
                         std::uint64_t seed, unsigned threads = 0);

} // namespace bellviol
