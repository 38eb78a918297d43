#include "bellviol/builtins.hpp"

#include <cstddef>
#include <vector>

#include "bellviol/rng.hpp"

namespace bellviol {

BellFunctional builtin_functional(const std::string& name) {
    if (name == "chsh") {
        return BellFunctional::checked({2, 2}, {1.0, 1.0, 1.0, -1.0});
    }
    if (name == "mermin3") {
        return BellFunctional::checked({2, 2, 2},
                                       {0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, -1.0});
    }
    if (name == "mermin4") {
        return mermin_klyshko(4);
    }
    throw validation_error("unknown builtin '" + name +
                           "' (known: chsh, mermin3, mermin4)");
}

BellFunctional mermin_klyshko(int parties) {
    if (parties < 2) throw validation_error("the recursion needs at least two parties");
    std::vector<double> f = {1.0, 0.0};   // F_1 = a_0
    for (int n = 2; n <= parties; ++n) {
        const std::size_t half = f.size();
        std::vector<double> next(2 * half);
        for (std::size_t i = 0; i < half; ++i) {
            const double fp = f[~i & (half - 1)];   // prime swaps every setting
            next[2 * i] = 0.5 * (f[i] + fp);
            next[2 * i + 1] = 0.5 * (f[i] - fp);
        }
        f = std::move(next);
    }
    for (double& c : f) c *= 2.0;
    return BellFunctional::checked(std::vector<int>(static_cast<std::size_t>(parties), 2),
                                   std::move(f));
}

BellFunctional random_functional(int parties, int settings, std::uint64_t seed) {
    if (parties < 2) throw validation_error("a functional needs at least two parties");
    if (settings < 1) throw validation_error("each party needs at least one setting");
    std::size_t size = 1;
    for (int j = 0; j < parties; ++j) size *= static_cast<std::size_t>(settings);
    Rng rng(seed);
    std::vector<double> coeffs(size);
    for (double& c : coeffs) c = rng.gauss();
    return BellFunctional::checked(std::vector<int>(static_cast<std::size_t>(parties), settings),
                                   std::move(coeffs));
}

BellFunctional embed_trivial_third_party(const BellFunctional& bipartite) {
    BellFunctional checked = BellFunctional::checked(bipartite.settings, bipartite.coeffs);
    if (checked.parties() != 2) {
        throw validation_error("embedding expects a bipartite functional");
    }
    checked.settings.push_back(1);   // trailing singleton keeps the flat layout
    return checked;
}

} // namespace bellviol
