#pragma once

// Reference implementations the unit tests compare the library against.
// Each one recomputes its quantity along an independent code path: explicit
// stride arithmetic, exhaustive enumeration, closed forms, or grid search.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "bellviol/random_states.hpp"
#include "bellviol/rng.hpp"
#include "bellviol/tensor_core.hpp"

namespace oracle {

inline std::size_t flat(const std::vector<int>& idx, const std::vector<int>& radix) {
    std::size_t f = 0;
    for (std::size_t j = 0; j < radix.size(); ++j) {
        f = f * static_cast<std::size_t>(radix[j]) + static_cast<std::size_t>(idx[j]);
    }
    return f;
}

// Exhaustive LHV value: every +-1 assignment of every party's settings, no
// analytic elimination, no Gray code.
inline double exhaustive_classical(const bellviol::BellFunctional& T) {
    int bits = 0;
    for (int m : T.settings) bits += m;
    if (bits > 22) throw std::runtime_error("oracle is exhaustive; keep it small");

    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << bits); ++mask) {
        std::vector<std::vector<int>> signs(T.settings.size());
        int b = 0;
        for (std::size_t j = 0; j < T.settings.size(); ++j) {
            for (int m = 0; m < T.settings[j]; ++m) {
                signs[j].push_back((mask >> b++) & 1 ? -1 : 1);
            }
        }
        double v = 0.0;
        std::vector<int> idx(T.settings.size(), 0);
        bool more = true;
        while (more) {
            double term = T.coeffs[flat(idx, T.settings)];
            for (std::size_t j = 0; j < idx.size(); ++j) {
                term *= signs[j][static_cast<std::size_t>(idx[j])];
            }
            v += term;
            more = false;
            for (int j = static_cast<int>(idx.size()) - 1; j >= 0; --j) {
                if (++idx[static_cast<std::size_t>(j)] < T.settings[static_cast<std::size_t>(j)]) {
                    more = true;
                    break;
                }
                idx[static_cast<std::size_t>(j)] = 0;
            }
        }
        if (std::abs(v) > best) best = std::abs(v);
    }
    return best;
}

// Nuclear norm of a 2x2 Hermitian matrix from the closed-form eigenvalues.
inline double nuclear_2x2(const bellviol::Matrix& h) {
    const double mean = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double off = std::abs(h(0, 1));
    const double r = std::sqrt(0.25 * std::pow(h(0, 0).real() - h(1, 1).real(), 2) + off * off);
    return std::abs(mean + r) + std::abs(mean - r);
}

// Grid maximum of ||cos(t) U0 + sin(t) e^{i phi} U1|| over the unit sphere of
// two coefficients; lower-bounds the pair's family norm within grid error.
inline double pair_grid_norm(const bellviol::Matrix& u0, const bellviol::Matrix& u1,
                             int steps) {
    double best = 0.0;
    for (int a = 0; a <= steps; ++a) {
        const double t = (M_PI / 2.0) * a / steps;
        for (int b = 0; b < steps; ++b) {
            const double phi = (2.0 * M_PI) * b / steps;
            bellviol::Matrix m =
                std::cos(t) * u0 +
                std::sin(t) * std::exp(bellviol::cplx(0, phi)) * u1;
            const double s = m.jacobiSvd().singularValues()[0];
            if (s > best) best = s;
        }
    }
    return best;
}

inline double haar_trace_second_moment(int N, int samples, std::uint64_t seed) {
    bellviol::Rng rng(seed);
    double acc = 0.0;
    for (int s = 0; s < samples; ++s) {
        acc += std::norm(bellviol::haar_unitary(N, rng).trace());
    }
    return acc / samples;
}

} // namespace oracle
