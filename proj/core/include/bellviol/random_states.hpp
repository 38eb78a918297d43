#pragma once

#include <cstdint>
#include <vector>

#include "bellviol/rng.hpp"
#include "bellviol/tensor_core.hpp"

namespace bellviol {

// Family of n unitaries of size N x N.
struct UnitaryFamily {
    int n = 0;
    int N = 0;
    std::vector<Matrix> u;
    std::uint64_t seed = 0;
};

// Haar-distributed unitary: complex Gaussian matrix, QR orthonormalization,
// then each column's phase corrected by the sign of the triangular factor's
// diagonal. Plain QR without the phase fix is not Haar.
Matrix haar_unitary(int N, Rng& rng);

// n independent Haar draws.
UnitaryFamily sample_unitary_family(int n, int N, std::uint64_t seed);

// n marginally-Haar unitaries that are exactly pairwise orthogonal in the
// trace inner product: U_i = V W_i V' with V, V' Haar and W_i the i-th
// discrete Weyl (shift/clock) matrix. Requires n <= N^2.
UnitaryFamily orthogonal_unitary_family(int n, int N, std::uint64_t seed);

// Tripartite vector on C^n x C^N x C^N with amplitudes
// psi_{ijk} = <j| U_i^dag |k> / sqrt(nN); unit norm for any unitary family.
QuantumState tripartite_state_from_family(const UnitaryFamily& fam);

// Random tripartite state built from an orthogonal_unitary_family, so the
// reduced density on party 1 is exactly I/n (parties 2 and 3 are I/N for
// any unitary family).
QuantumState random_tripartite_state(int n, int N, std::uint64_t seed);

struct EpsNormEstimate {
    double value = 0.0;
    std::vector<cplx> lambda;   // unit-ball witness coefficients
    Vector x, y;                // top singular pair of Sum lambda_i U_i
    int restarts = 0;
    std::uint64_t seed = 0;
};

// Lower bound on sup_{sum |lambda_i|^2 <= 1} ||Sum lambda_i U_i|| by
// alternating the coefficient step (lambda_i proportional to the conjugated
// matrix elements <y|U_i|x>) with the top-singular-pair step.
EpsNormEstimate eps_norm(const UnitaryFamily& fam, int restarts = 16,
                         std::uint64_t seed = 0);

// 32 pi (1 + sqrt(n / (4N))), the Gaussian comparison bound on the expected
// family norm above.
double chevet_bound(int n, int N);

struct ChevetSummary {
    int n = 0;
    int N = 0;
    int samples = 0;
    std::uint64_t seed = 0;
    double bound = 0.0;
    double mean = 0.0;
    double max = 0.0;
    double stddev = 0.0;
    std::vector<double> values;
};

// Empirical distribution of eps_norm over independent Haar families.
ChevetSummary chevet_montecarlo(int n, int N, int samples, std::uint64_t seed,
                                unsigned threads = 0);

} // namespace bellviol
