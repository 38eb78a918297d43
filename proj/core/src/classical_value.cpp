#include "bellviol/classical_value.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "bellviol/parallel.hpp"
#include "bellviol/rng.hpp"

namespace bellviol {

double strategy_value(const BellFunctional& T, const SignStrategy& s) {
    if (s.signs.size() != T.settings.size()) {
        throw validation_error("strategy party count does not match the functional");
    }
    for (std::size_t j = 0; j < s.signs.size(); ++j) {
        if (static_cast<int>(s.signs[j].size()) != T.settings[j]) {
            throw validation_error("strategy settings do not match party " + std::to_string(j + 1));
        }
        for (int v : s.signs[j]) {
            if (v != 1 && v != -1) throw validation_error("strategy entries must be +-1");
        }
    }
    double total = 0.0;
    std::vector<int> idx(T.settings.size(), 0);
    std::size_t flat = 0;
    do {
        double prod = T.coeffs[flat++];
        if (prod != 0.0) {
            for (std::size_t j = 0; j < idx.size(); ++j) {
                prod *= s.signs[j][static_cast<std::size_t>(idx[j])];
            }
            total += prod;
        }
    } while (next_index(idx, T.settings));
    return total;
}

namespace {

// +1 sorts before -1, party-major, settings ascending.
bool lex_less(const SignStrategy& a, const SignStrategy& b) {
    for (std::size_t j = 0; j < a.signs.size(); ++j) {
        for (std::size_t m = 0; m < a.signs[j].size(); ++m) {
            const int x = a.signs[j][m] < 0 ? 1 : 0;
            const int y = b.signs[j][m] < 0 ? 1 : 0;
            if (x != y) return x < y;
        }
    }
    return false;
}

struct ChunkResult {
    double value = -1.0;
    SignStrategy strategy;
};

struct EliminationPlan {
    int star = 0;                       // party eliminated analytically
    std::vector<int> rest;              // remaining parties, original order
    std::vector<int> rest_settings;
    int bits = 0;
    std::vector<int> bit_party;         // bit -> position in `rest`
    std::vector<int> bit_setting;
    std::vector<int> bit_offset;        // per rest position
    std::size_t rest_size = 1;          // product of rest settings
    int star_settings = 0;
    std::vector<double> tensor;         // [rest_index * star_settings + star_index]
    std::vector<std::vector<std::vector<std::size_t>>> slices;  // [rest pos][setting] -> rest indices
};

EliminationPlan plan_elimination(const BellFunctional& T) {
    EliminationPlan plan;
    const int N = T.parties();
    plan.star = 0;
    for (int j = 1; j < N; ++j) {
        if (T.settings[static_cast<std::size_t>(j)] >
            T.settings[static_cast<std::size_t>(plan.star)]) {
            plan.star = j;
        }
    }
    for (int j = 0; j < N; ++j) {
        if (j == plan.star) continue;
        plan.rest.push_back(j);
        plan.rest_settings.push_back(T.settings[static_cast<std::size_t>(j)]);
    }
    plan.bits = std::accumulate(plan.rest_settings.begin(), plan.rest_settings.end(), 0);
    if (plan.bits > exact_enumeration_budget) {
        throw validation_error("exact search needs " + std::to_string(plan.bits) +
                               " sign bits after eliminating the widest party; the budget is " +
                               std::to_string(exact_enumeration_budget) +
                               " (use classical_value_heuristic)");
    }
    plan.bit_offset.resize(plan.rest.size());
    int off = 0;
    for (std::size_t q = 0; q < plan.rest.size(); ++q) {
        plan.bit_offset[q] = off;
        for (int m = 0; m < plan.rest_settings[q]; ++m) {
            plan.bit_party.push_back(static_cast<int>(q));
            plan.bit_setting.push_back(m);
        }
        off += plan.rest_settings[q];
    }
    for (int m : plan.rest_settings) plan.rest_size *= static_cast<std::size_t>(m);
    plan.star_settings = T.settings[static_cast<std::size_t>(plan.star)];

    // Transposed copy: rest index slow, eliminated party fast, so the inner
    // update loop is contiguous.
    plan.tensor.assign(plan.rest_size * static_cast<std::size_t>(plan.star_settings), 0.0);
    plan.slices.resize(plan.rest.size());
    for (std::size_t q = 0; q < plan.rest.size(); ++q) {
        plan.slices[q].resize(static_cast<std::size_t>(plan.rest_settings[q]));
    }
    std::vector<int> rest_idx(plan.rest.size(), 0);
    std::vector<int> full_idx(static_cast<std::size_t>(N), 0);
    std::size_t r = 0;
    do {
        for (std::size_t q = 0; q < plan.rest.size(); ++q) {
            full_idx[static_cast<std::size_t>(plan.rest[q])] = rest_idx[q];
            plan.slices[q][static_cast<std::size_t>(rest_idx[q])].push_back(r);
        }
        for (int i = 0; i < plan.star_settings; ++i) {
            full_idx[static_cast<std::size_t>(plan.star)] = i;
            plan.tensor[r * static_cast<std::size_t>(plan.star_settings) +
                        static_cast<std::size_t>(i)] = T.at(full_idx);
        }
        ++r;
    } while (next_index(rest_idx, plan.rest_settings));
    return plan;
}

SignStrategy materialize(const EliminationPlan& plan, const BellFunctional& T,
                         const std::vector<int>& bit_signs,
                         const std::vector<double>& contracted) {
    SignStrategy s;
    s.signs.resize(T.settings.size());
    for (std::size_t j = 0; j < T.settings.size(); ++j) {
        s.signs[j].assign(static_cast<std::size_t>(T.settings[j]), 1);
    }
    for (int b = 0; b < plan.bits; ++b) {
        const int party = plan.rest[static_cast<std::size_t>(plan.bit_party[static_cast<std::size_t>(b)])];
        s.signs[static_cast<std::size_t>(party)]
              [static_cast<std::size_t>(plan.bit_setting[static_cast<std::size_t>(b)])] =
            bit_signs[static_cast<std::size_t>(b)];
    }
    for (int i = 0; i < plan.star_settings; ++i) {
        s.signs[static_cast<std::size_t>(plan.star)][static_cast<std::size_t>(i)] =
            contracted[static_cast<std::size_t>(i)] < 0.0 ? -1 : 1;
    }
    return s;
}

ChunkResult run_chunk(const EliminationPlan& plan, const BellFunctional& T,
                      int low_bits, std::uint64_t prefix) {
    const int M = plan.star_settings;
    std::vector<int> signs(static_cast<std::size_t>(plan.bits), 1);
    for (int b = low_bits; b < plan.bits; ++b) {
        if ((prefix >> (b - low_bits)) & 1u) signs[static_cast<std::size_t>(b)] = -1;
    }
    std::vector<int> prodsign(plan.rest_size, 1);
    {
        std::vector<int> rest_idx(plan.rest.size(), 0);
        std::size_t r = 0;
        do {
            int p = 1;
            for (std::size_t q = 0; q < plan.rest.size(); ++q) {
                p *= signs[static_cast<std::size_t>(plan.bit_offset[q] + rest_idx[q])];
            }
            prodsign[r++] = p;
        } while (next_index(rest_idx, plan.rest_settings));
    }
    std::vector<double> c(static_cast<std::size_t>(M), 0.0);
    for (std::size_t r = 0; r < plan.rest_size; ++r) {
        const double* row = plan.tensor.data() + r * static_cast<std::size_t>(M);
        for (int i = 0; i < M; ++i) c[static_cast<std::size_t>(i)] += prodsign[r] * row[i];
    }
    auto value_of = [&] {
        double v = 0.0;
        for (double x : c) v += std::abs(x);
        return v;
    };

    ChunkResult best;
    best.value = value_of();
    best.strategy = materialize(plan, T, signs, c);

    const std::uint64_t steps = (low_bits >= 64) ? 0 : (std::uint64_t{1} << low_bits);
    for (std::uint64_t t = 1; t < steps; ++t) {
        const int b = std::countr_zero(t);
        const std::size_t q = static_cast<std::size_t>(plan.bit_party[static_cast<std::size_t>(b)]);
        const auto& slice = plan.slices[q][static_cast<std::size_t>(plan.bit_setting[static_cast<std::size_t>(b)])];
        for (const std::size_t r : slice) {
            const double* row = plan.tensor.data() + r * static_cast<std::size_t>(M);
            const double f = -2.0 * prodsign[r];
            for (int i = 0; i < M; ++i) c[static_cast<std::size_t>(i)] += f * row[i];
            prodsign[r] = -prodsign[r];
        }
        signs[static_cast<std::size_t>(b)] = -signs[static_cast<std::size_t>(b)];

        const double v = value_of();
        if (v > best.value) {
            best.value = v;
            best.strategy = materialize(plan, T, signs, c);
        } else if (v == best.value) {
            SignStrategy cand = materialize(plan, T, signs, c);
            if (lex_less(cand, best.strategy)) best.strategy = std::move(cand);
        }
    }
    return best;
}

} // namespace

ClassicalResult classical_value_exact(const BellFunctional& T, unsigned threads) {
    BellFunctional::checked(T.settings, T.coeffs);
    const EliminationPlan plan = plan_elimination(T);

    const unsigned width = resolve_threads(threads);
    int prefix_bits = 0;
    if (width > 1 && plan.bits > 16) {
        while ((1u << prefix_bits) < 4 * width && prefix_bits < plan.bits - 12) ++prefix_bits;
    }
    const int low_bits = plan.bits - prefix_bits;
    const std::size_t chunks = std::size_t{1} << prefix_bits;

    std::vector<ChunkResult> results(chunks);
    parallel_for(chunks, threads, [&](std::size_t chunk) {
        results[chunk] = run_chunk(plan, T, low_bits, chunk);
    });

    ChunkResult best = std::move(results[0]);
    for (std::size_t i = 1; i < chunks; ++i) {
        if (results[i].value > best.value ||
            (results[i].value == best.value && lex_less(results[i].strategy, best.strategy))) {
            best = std::move(results[i]);
        }
    }

    ClassicalResult out;
    out.value = best.value;
    out.strategy = std::move(best.strategy);
    out.method = "exact";
    out.nodes_explored = std::uint64_t{1} << plan.bits;
    return out;
}

ClassicalResult classical_value_heuristic(const BellFunctional& T, int restarts,
                                          std::uint64_t seed) {
    BellFunctional::checked(T.settings, T.coeffs);
    if (restarts < 1) throw validation_error("heuristic needs at least one restart");
    const int N = T.parties();
    const Rng root(seed);

    ClassicalResult best;
    best.value = -1.0;
    best.method = "heuristic";
    std::uint64_t nodes = 0;

    for (int r = 0; r < restarts; ++r) {
        Rng rng = root.child(static_cast<std::uint64_t>(r));
        SignStrategy s;
        s.signs.resize(static_cast<std::size_t>(N));
        for (int j = 0; j < N; ++j) {
            s.signs[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(T.settings[static_cast<std::size_t>(j)]));
            for (int& v : s.signs[static_cast<std::size_t>(j)]) v = rng.sign();
        }
        double v = strategy_value(T, s);
        ++nodes;

        bool improved = true;
        while (improved) {
            improved = false;
            for (int j = 0; j < N && !improved; ++j) {
                for (int m = 0; m < T.settings[static_cast<std::size_t>(j)] && !improved; ++m) {
                    // Slice contraction: flipping s_j[m] shifts the value by
                    // -2 s_j[m] * (slice restricted to i_j = m).
                    double w = 0.0;
                    std::vector<int> idx(static_cast<std::size_t>(N), 0);
                    std::size_t flat = 0;
                    do {
                        if (idx[static_cast<std::size_t>(j)] == m) {
                            double prod = T.coeffs[flat];
                            if (prod != 0.0) {
                                for (int q = 0; q < N; ++q) {
                                    if (q == j) continue;
                                    prod *= s.signs[static_cast<std::size_t>(q)]
                                                  [static_cast<std::size_t>(idx[static_cast<std::size_t>(q)])];
                                }
                                w += prod;
                            }
                        }
                        ++flat;
                    } while (next_index(idx, T.settings));
                    const double flipped =
                        v - 2.0 * s.signs[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] * w;
                    ++nodes;
                    if (std::abs(flipped) > std::abs(v) + 1e-12 * (1.0 + std::abs(v))) {
                        s.signs[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] *= -1;
                        v = flipped;
                        improved = true;
                    }
                }
            }
        }

        const double av = std::abs(v);
        if (av > best.value || (av == best.value && lex_less(s, best.strategy))) {
            best.value = av;
            best.strategy = s;
        }
    }
    best.nodes_explored = nodes;
    return best;
}

} // namespace bellviol
