#pragma once

#include <cstdint>
#include <vector>

#include "bellviol/quantum_value.hpp"
#include "bellviol/tensor_core.hpp"

namespace bellviol {

// Pinned constants against which the experiments are judged.
struct BoundsTable {
    // Grothendieck constant bracket (complex case).
    static constexpr double grothendieck_lower = 1.676;
    static constexpr double grothendieck_upper = 1.782;

    // Largest bipartite correlation violation with two settings: sqrt(2).
    static double chsh_ratio();

    // Ceiling for any tripartite GHZ violation: 4 sqrt(2) * grothendieck_upper.
    static double ghz_tripartite_bound();

    // N-party generalization: grothendieck_upper * (2 sqrt(2))^(N-1).
    static double ghz_nparty_bound(int parties);
};

// Uniform superposition (1/sqrt(n)) Sum_i |i...i> on `parties` factors of
// dimension n.
QuantumState ghz_state(int n, int parties);

struct GhzExperiment {
    int n = 0;
    int settings = 0;
    int parties = 3;
    int trials = 0;
    std::uint64_t seed = 0;
    double bound = 0.0;
    std::vector<double> ratios;   // random instances first, Mermin instance last
    double max_ratio = 0.0;
    bool within_bound = false;
    ViolationReport best;         // report of the largest ratio
};

// Fixes the GHZ_n state and see-saws `trials` seeded Gaussian functionals
// (plus one Mermin-family instance) over `settings` inputs per party,
// recording every violation ratio against the GHZ ceiling.
GhzExperiment ghz_violation_experiment(int n, int settings, int trials,
                                       std::uint64_t seed, int parties = 3,
                                       unsigned threads = 0);

// Doubly indexed family A_{ij}, i,j = 1..N, of m x m matrices.
using MatrixFamily = std::vector<std::vector<Matrix>>;

// Row/column intersection norm of the family seen over the flattened index:
// max(||Sum A A^dag||^(1/2), ||Sum A^dag A||^(1/2)).
double rc_norm(const MatrixFamily& family);

// Tensor-refined row/column norm: the maximum of the two quadratic terms
// and the two mixed matrix-unit terms ||Sum A_{ij} x |i><j||| and
// ||Sum A_{ij} x |j><i|||.
double rc2_norm(const MatrixFamily& family);

// Individual terms of rc2_norm, in the order quoted above.
std::vector<double> rc_norm_terms(const MatrixFamily& family);

// A_{ij} = |i><j| in M_N; its rc_norm is exactly sqrt(N).
MatrixFamily matrix_unit_family(int N);

struct EnvelopeCheck {
    double ratio = 0.0;
    double budget = 0.0;   // slack * sqrt(min party dimension)
    double margin = 0.0;
    bool within = false;
};

// Flags reports whose violation ratio exceeds slack * sqrt(d) where d is the
// smallest party dimension. The default slack is generous; desk-scale runs
// sit far below it.
EnvelopeCheck sqrt_d_envelope(const ViolationReport& report, double slack = 10.0);

} // namespace bellviol
