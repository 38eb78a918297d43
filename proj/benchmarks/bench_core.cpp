#include <benchmark/benchmark.h>

#include "bellviol/builtins.hpp"
#include "bellviol/classical_value.hpp"
#include "bellviol/comm_game.hpp"
#include "bellviol/quantum_value.hpp"
#include "bellviol/random_states.hpp"
#include "bellviol/rng.hpp"
#include "bellviol/tensor_core.hpp"

using namespace bellviol;

namespace {

ObservableSet random_sign_observables(const BellFunctional& T, int d, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<Observable>> parties;
    for (int j = 0; j < T.parties(); ++j) {
        std::vector<Observable> list;
        for (int m = 0; m < T.settings[static_cast<std::size_t>(j)]; ++m) {
            Rng sub = rng.child(static_cast<std::uint64_t>(16 * j + m));
            const Matrix u = haar_unitary(d, sub);
            Eigen::VectorXd diag(d);
            for (int k = 0; k < d; ++k) diag(k) = sub.sign();
            Matrix a = u * diag.asDiagonal() * u.adjoint();
            a = 0.5 * (a + a.adjoint().eval());
            list.push_back(Observable::checked(a));
        }
        parties.push_back(std::move(list));
    }
    return ObservableSet::checked(std::move(parties));
}

void bm_bell_operator(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const BellFunctional T = builtin_functional("mermin3");
    const ObservableSet obs = random_sign_observables(T, d, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bell_operator(T, obs));
    }
}
BENCHMARK(bm_bell_operator)->Arg(2)->Arg(4)->Arg(8);

void bm_classical_exact(benchmark::State& state) {
    const int settings = static_cast<int>(state.range(0));
    const BellFunctional T = random_functional(3, settings, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(classical_value_exact(T, 1));
    }
}
BENCHMARK(bm_classical_exact)->Arg(3)->Arg(5)->Arg(7);

void bm_seesaw_two_setting(benchmark::State& state) {
    const BellFunctional T = builtin_functional("chsh");
    SeesawConfig cfg;
    cfg.dims = {2, 2};
    cfg.restarts = 1;
    cfg.seed = 3;
    cfg.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(seesaw(T, cfg));
    }
}
BENCHMARK(bm_seesaw_two_setting);

void bm_eps_norm(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const UnitaryFamily fam = sample_unitary_family(N / 2, N, 9);
    for (auto _ : state) {
        benchmark::DoNotOptimize(eps_norm(fam, 4, 11));
    }
}
BENCHMARK(bm_eps_norm)->Arg(8)->Arg(16)->Arg(32);

void bm_simulate_game(benchmark::State& state) {
    const BellFunctional T = builtin_functional("mermin3");
    const GameSpec game = GameSpec::classical(T, classical_value_exact(T).strategy);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_game(game, 100000, 7, 1));
    }
}
BENCHMARK(bm_simulate_game);

} // namespace

BENCHMARK_MAIN();
