#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "bellviol/builtins.hpp"
#include "bellviol/noise.hpp"
#include "bellviol/tensor_core.hpp"

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

ObservableSet tsirelson_observables() {
    const double s = 1.0 / std::sqrt(2.0);
    return ObservableSet::checked(
        {{Observable::checked(pauli_z()), Observable::checked(pauli_x())},
         {Observable::checked(s * (pauli_z() + pauli_x())),
          Observable::checked(s * (pauli_z() - pauli_x()))}});
}

QuantumState bell_pair() {
    Vector v(4);
    v << 1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0);
    return QuantumState::make_pure({2, 2}, v);
}

} // namespace

TEST_CASE("white-noise mixing interpolates between the state and the flat state") {
    QuantumState pure = bell_pair();
    QuantumState same = mix_white_noise(pure, 1.0);
    CHECK((same.rho - pure.density()).cwiseAbs().maxCoeff() <= 1e-15);
    QuantumState flat = mix_white_noise(pure, 0.0);
    CHECK((flat.rho - Matrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK_THROWS_AS((void)mix_white_noise(pure, -0.1), validation_error);
    CHECK_THROWS_AS((void)mix_white_noise(pure, 1.1), validation_error);
}

TEST_CASE("noisy value is exactly linear in the visibility for traceless sets") {
    BellFunctional chsh = builtin_functional("chsh");
    ObservableSet obs = tsirelson_observables();
    QuantumState state = bell_pair();

    const double clean = contracted_expectation(chsh, obs, state);
    CHECK(std::abs(clean - 2.0 * std::sqrt(2.0)) <= 1e-12);

    for (double p : {0.25, 0.6, 0.95}) {
        NoiseReport r = noisy_violation(chsh, state, obs, p);
        CHECK(std::abs(r.noisy_value - p * clean) <= 1e-9);
        CHECK(r.predicted == p * r.clean_value);
        CHECK(r.classical_value == 2.0);
    }
}

TEST_CASE("critical visibility of the two-setting functional is 1/sqrt(2)") {
    NoiseReport r = noisy_violation(builtin_functional("chsh"), bell_pair(),
                                    tsirelson_observables(), 0.8);
    CHECK(std::abs(r.critical_p - 1.0 / std::sqrt(2.0)) <= 1e-9);
}

TEST_CASE("linearity also holds for mixed input states") {
    BellFunctional chsh = builtin_functional("chsh");
    ObservableSet obs = tsirelson_observables();
    QuantumState partly = mix_white_noise(bell_pair(), 0.9);
    NoiseReport r = noisy_violation(chsh, partly, obs, 0.5);
    CHECK(std::abs(r.noisy_value - 0.5 * r.clean_value) <= 1e-9);
    CHECK(std::abs(r.clean_value - 0.9 * 2.0 * std::sqrt(2.0)) <= 1e-9);
}

TEST_CASE("non-traceless observables are rejected with the offending slot named") {
    BellFunctional chsh = builtin_functional("chsh");
    Matrix shifted = 0.7 * pauli_z() + 0.3 * Matrix::Identity(2, 2);
    ObservableSet obs = tsirelson_observables();
    obs.parties[1][0] = Observable::checked(shifted);
    try {
        (void)noisy_violation(chsh, bell_pair(), obs, 0.5);
        FAIL("expected rejection");
    } catch (const validation_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("party 2") != std::string::npos);
        CHECK(msg.find("setting 1") != std::string::npos);
        CHECK(msg.find("make_traceless") != std::string::npos);
    }
}

TEST_CASE("a vanishing clean value leaves no critical visibility to report") {
    BellFunctional chsh = builtin_functional("chsh");
    Observable x = Observable::checked(pauli_x());
    ObservableSet obs = ObservableSet::checked({{x, x}, {x, x}});
    Vector e00 = Vector::Zero(4);
    e00[0] = 1.0;
    QuantumState s = QuantumState::make_pure({2, 2}, e00);
    CHECK_THROWS_AS((void)noisy_violation(chsh, s, obs, 0.5), validation_error);
}

TEST_CASE("three-point affinity pins the law, not just two endpoints") {
    BellFunctional chsh = builtin_functional("chsh");
    ObservableSet obs = tsirelson_observables();
    QuantumState state = bell_pair();
    const NoiseReport a = noisy_violation(chsh, state, obs, 0.2);
    const NoiseReport b = noisy_violation(chsh, state, obs, 0.5);
    const NoiseReport c = noisy_violation(chsh, state, obs, 0.8);
    // collinearity of the three (p, value) points
    const double slope_ab = (b.noisy_value - a.noisy_value) / (b.p - a.p);
    const double slope_bc = (c.noisy_value - b.noisy_value) / (c.p - b.p);
    CHECK(std::abs(slope_ab - slope_bc) <= 1e-9);
    CHECK(std::abs(slope_ab - a.clean_value) <= 1e-9);
}
