#pragma once

#include <cstdint>
#include <string>

#include "bellviol/tensor_core.hpp"

namespace bellviol {

// Named functionals: "chsh" ([[1,1],[1,-1]]), "mermin3" (+1 at 001/010/100,
// -1 at 111), "mermin4" (the next Mermin-family member).
BellFunctional builtin_functional(const std::string& name);

// 2 F_N where F_N is the Mermin recursion
// F_N = (F_{N-1} (c_0 + c_1) + F'_{N-1} (c_0 - c_1)) / 2 from F_1 = a_0,
// primes swapping every party's settings. mermin_klyshko(2) is CHSH and
// mermin_klyshko(3) is mermin3.
BellFunctional mermin_klyshko(int parties);

// Coefficients drawn iid standard Gaussian.
BellFunctional random_functional(int parties, int settings, std::uint64_t seed);

// Adds a one-setting third party, turning a bipartite functional into the
// tripartite form the broadcast game expects; values are unchanged.
BellFunctional embed_trivial_third_party(const BellFunctional& bipartite);

} // namespace bellviol
