#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "bellviol/builtins.hpp"
#include "bellviol/random_states.hpp"
#include "bellviol/rng.hpp"
#include "bellviol/tensor_core.hpp"
#include "oracles.hpp"

using namespace bellviol;

namespace {

Matrix pauli_z() {
    Matrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
}

Matrix pauli_x() {
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

Observable random_sign_observable(int d, Rng& rng) {
    Matrix u = haar_unitary(d, rng);
    Matrix s = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) s(i, i) = rng.sign();
    Matrix a = u * s * u.adjoint();
    return Observable::checked(0.5 * (a + a.adjoint()));
}

} // namespace

TEST_CASE("odometer walks row-major with the last index fastest") {
    std::vector<int> idx{0, 0};
    const std::vector<int> radix{2, 3};
    std::vector<std::vector<int>> seen{idx};
    while (next_index(idx, radix)) seen.push_back(idx);
    REQUIRE(seen.size() == 6);
    CHECK(seen[1] == std::vector<int>{0, 1});
    CHECK(seen[2] == std::vector<int>{0, 2});
    CHECK(seen[3] == std::vector<int>{1, 0});
    CHECK(seen[5] == std::vector<int>{1, 2});
    CHECK(idx == std::vector<int>{0, 0});
}

TEST_CASE("flat_index matches explicit stride arithmetic") {
    BellFunctional T = random_functional(3, 3, 5);
    std::vector<int> idx(3, 0);
    std::size_t flat = 0;
    do {
        CHECK(T.flat_index(idx) == oracle::flat(idx, T.settings));
        CHECK(T.flat_index(idx) == flat);
        ++flat;
    } while (next_index(idx, T.settings));
}

TEST_CASE("functional validation names its invariants") {
    CHECK_THROWS_AS((void)BellFunctional::checked({2}, {1.0, 1.0}), validation_error);
    CHECK_THROWS_AS((void)BellFunctional::checked({2, 0}, {}), validation_error);
    CHECK_THROWS_AS((void)BellFunctional::checked({2, 2}, {1.0, 1.0, 1.0}), validation_error);
    CHECK_THROWS_AS((void)BellFunctional::checked({2, 2}, {1.0, 1.0, 1.0, NAN}),
                    validation_error);
}

TEST_CASE("observable validation rejects non-Hermitian and oversized matrices") {
    Matrix bad(2, 2);
    bad << 0, 1, 0, 0;
    CHECK_THROWS_AS((void)Observable::checked(bad), validation_error);
    CHECK_THROWS_AS((void)Observable::checked(1.5 * pauli_z()), validation_error);
    CHECK_NOTHROW((void)Observable::checked(pauli_z()));
}

TEST_CASE("state factories enforce norm, trace and positivity") {
    Vector v(2);
    v << 1.0, 1.0;
    CHECK_THROWS_AS((void)QuantumState::make_pure({2}, v), validation_error);
    CHECK_NOTHROW((void)QuantumState::make_pure({2}, v / std::sqrt(2.0)));

    Matrix rho(2, 2);
    rho << 1.5, 0, 0, -0.5;
    CHECK_THROWS_AS((void)QuantumState::make_mixed({2}, rho), validation_error);
    rho << 0.5, 0, 0, 0.4;   // trace below one
    CHECK_THROWS_AS((void)QuantumState::make_mixed({2}, rho), validation_error);
    rho << 0.5, 0, 0, 0.5;
    CHECK_NOTHROW((void)QuantumState::make_mixed({2}, rho));
}

TEST_CASE("kron matches the elementwise definition") {
    Rng rng(11);
    Matrix a(2, 3), b(3, 2);
    for (int i = 0; i < a.size(); ++i) a(i) = rng.cgauss();
    for (int i = 0; i < b.size(); ++i) b(i) = rng.cgauss();
    Matrix k = kron(a, b);
    REQUIRE(k.rows() == 6);
    REQUIRE(k.cols() == 6);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 2; ++q)
                    CHECK(std::abs(k(i * 3 + p, j * 2 + q) - a(i, j) * b(p, q)) == 0.0);
}

TEST_CASE("all-Z observables turn the two-setting functional into 2 Z x Z") {
    BellFunctional chsh = builtin_functional("chsh");
    Observable z = Observable::checked(pauli_z());
    ObservableSet obs = ObservableSet::checked({{z, z}, {z, z}});
    Matrix B = bell_operator(chsh, obs);
    Matrix expected = 2.0 * kron(pauli_z(), pauli_z());
    CHECK((B - expected).cwiseAbs().maxCoeff() <= 1e-14);

    Vector e00 = Vector::Zero(4);
    e00[0] = 1.0;
    QuantumState s = QuantumState::make_pure({2, 2}, e00);
    CHECK(expectation(s, B) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("joint dimension budget is enforced and re-read from the environment") {
    BellFunctional T = random_functional(3, 2, 1);
    Rng rng(2);
    std::vector<std::vector<Observable>> parties(3);
    for (auto& p : parties) p = {random_sign_observable(4, rng), random_sign_observable(4, rng)};
    ObservableSet obs = ObservableSet::checked(parties);

    setenv("BELLVIOL_BUDGET_DIM", "32", 1);
    CHECK(dim_budget() == 32);
    CHECK_THROWS_AS((void)bell_operator(T, obs), validation_error);   // 64 > 32
    unsetenv("BELLVIOL_BUDGET_DIM");
    CHECK(dim_budget() == default_dim_budget);
    CHECK_NOTHROW((void)bell_operator(T, obs));
}

TEST_CASE("contracted and assembled expectations agree on random instances") {
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        BellFunctional T = random_functional(3, 2, 100 + trial);
        std::vector<int> dims{2, 3, 2};
        std::vector<std::vector<Observable>> parties(3);
        for (int j = 0; j < 3; ++j) {
            parties[j] = {random_sign_observable(dims[j], rng),
                          random_sign_observable(dims[j], rng)};
        }
        ObservableSet obs = ObservableSet::checked(parties);

        Vector psi(12);
        for (int i = 0; i < 12; ++i) psi[i] = rng.cgauss();
        psi.normalize();
        QuantumState pure = QuantumState::make_pure(dims, psi);
        const double direct = contracted_expectation(T, obs, pure);
        const double assembled = expectation(pure, bell_operator(T, obs));
        CHECK(std::abs(direct - assembled) <= 1e-9 * std::max(1.0, std::abs(assembled)));

        Vector phi(12);
        for (int i = 0; i < 12; ++i) phi[i] = rng.cgauss();
        phi.normalize();
        Matrix rho = 0.5 * (psi * psi.adjoint()) + 0.5 * (phi * phi.adjoint());
        QuantumState mixed = QuantumState::make_mixed(dims, rho);
        const double direct_m = contracted_expectation(T, obs, mixed);
        const double assembled_m = expectation(mixed, bell_operator(T, obs));
        CHECK(std::abs(direct_m - assembled_m) <= 1e-9 * std::max(1.0, std::abs(assembled_m)));
    }
}

TEST_CASE("traceless split of diag(1, 0)") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    TracelessSplit split = make_traceless(a);
    CHECK(split.alpha == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(split.traceless(0, 0) - 0.5) <= 1e-15);
    CHECK(std::abs(split.traceless(1, 1) + 0.5) <= 1e-15);
    CHECK(std::abs(split.traceless.trace()) <= 1e-15);
}

TEST_CASE("apply_local equals the assembled kron action") {
    Rng rng(13);
    std::vector<int> dims{2, 3, 2};
    Vector psi(12);
    for (int i = 0; i < 12; ++i) psi[i] = rng.cgauss();
    psi.normalize();
    Matrix op(3, 3);
    for (int i = 0; i < op.size(); ++i) op(i) = rng.cgauss();

    Vector via_local = apply_local(psi, op, 1, dims);
    Matrix joint = kron(kron(Matrix::Identity(2, 2), op), Matrix::Identity(2, 2));
    CHECK((via_local - joint * psi).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("reduced density of a product and an entangled state") {
    Vector prod = Vector::Zero(4);
    prod[1] = 1.0;   // |0> x |1>
    QuantumState s = QuantumState::make_pure({2, 2}, prod);
    Matrix r0 = reduced_density(s, 0);
    CHECK(std::abs(r0(0, 0).real() - 1.0) <= 1e-15);
    CHECK(r0.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));

    Vector bell(4);
    bell << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
    QuantumState b = QuantumState::make_pure({2, 2}, bell);
    Matrix r1 = reduced_density(b, 1);
    CHECK((r1 - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("observables with X on one side pick out the off-diagonal block") {
    BellFunctional chsh = builtin_functional("chsh");
    Observable z = Observable::checked(pauli_z());
    Observable x = Observable::checked(pauli_x());
    ObservableSet obs = ObservableSet::checked({{z, x}, {z, x}});
    Matrix B = bell_operator(chsh, obs);
    Matrix expected = kron(pauli_z(), pauli_z()) + kron(pauli_z(), pauli_x()) +
                      kron(pauli_x(), pauli_z()) - kron(pauli_x(), pauli_x());
    CHECK((B - expected).cwiseAbs().maxCoeff() <= 1e-14);
}
