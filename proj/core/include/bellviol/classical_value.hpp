#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bellviol/tensor_core.hpp"

namespace bellviol {

// +-1 choice per party per setting.
struct SignStrategy {
    std::vector<std::vector<int>> signs;
};

struct ClassicalResult {
    double value = 0.0;
    SignStrategy strategy;
    std::string method;   // "exact" or "heuristic"
    std::uint64_t nodes_explored = 0;
};

// Maximum total sign bits enumerated after one party is eliminated
// analytically; beyond this the exact search refuses.
inline constexpr int exact_enumeration_budget = 28;

// Signed contraction Sum_i T_i prod_j s_j[i_j] of a fixed strategy.
double strategy_value(const BellFunctional& T, const SignStrategy& s);

// Exact LHV value sup_s |strategy_value|. The party with the most settings
// is eliminated analytically (its optimal signs follow from the contracted
// slice), the remaining sign bits are enumerated in Gray-code order with
// incremental slice updates, and the assignment space is split into
// independent chunks by fixed high-order sign prefixes. Ties prefer the
// lexicographically smallest strategy (+1 before -1, party-major order).
ClassicalResult classical_value_exact(const BellFunctional& T, unsigned threads = 0);

// Multi-start single-flip hill climbing; a lower bound on the exact value.
ClassicalResult classical_value_heuristic(const BellFunctional& T, int restarts,
                                          std::uint64_t seed);

} // namespace bellviol
