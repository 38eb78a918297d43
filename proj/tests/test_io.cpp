#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include <json.hpp>

#include "bellviol/builtins.hpp"
#include "bellviol/io.hpp"
#include "bellviol/quantum_value.hpp"
#include "bellviol/random_states.hpp"

using namespace bellviol;

TEST_CASE("named functionals carry the documented coefficients") {
    BellFunctional chsh = builtin_functional("chsh");
    CHECK(chsh.settings == std::vector<int>{2, 2});
    CHECK(chsh.coeffs == std::vector<double>{1, 1, 1, -1});

    BellFunctional m3 = builtin_functional("mermin3");
    CHECK(m3.settings == std::vector<int>{2, 2, 2});
    CHECK(m3.coeffs == std::vector<double>{0, 1, 1, 0, 1, 0, 0, -1});

    CHECK_THROWS_WITH_AS((void)builtin_functional("cglmp"),
                         doctest::Contains("chsh"), validation_error);
}

TEST_CASE("the recursion reproduces the named members and stays dyadic") {
    CHECK(mermin_klyshko(2).coeffs == builtin_functional("chsh").coeffs);
    CHECK(mermin_klyshko(3).coeffs == builtin_functional("mermin3").coeffs);

    BellFunctional m4 = builtin_functional("mermin4");
    CHECK(m4.settings == std::vector<int>(4, 2));
    REQUIRE(m4.coeffs.size() == 16);
    for (double c : m4.coeffs) CHECK(std::abs(c) == 0.5);   // exact dyadic weights

    CHECK_THROWS_AS((void)mermin_klyshko(1), validation_error);
}

TEST_CASE("random functionals are seeded draws of the right shape") {
    BellFunctional a = random_functional(3, 2, 42);
    BellFunctional b = random_functional(3, 2, 42);
    BellFunctional c = random_functional(3, 2, 43);
    CHECK(a.coeffs.size() == 8);
    CHECK(a.coeffs == b.coeffs);
    CHECK(a.coeffs != c.coeffs);
    CHECK_THROWS_AS((void)random_functional(1, 2, 0), validation_error);
    CHECK_THROWS_AS((void)random_functional(2, 0, 0), validation_error);
}

TEST_CASE("embedding adds a silent third party") {
    BellFunctional embedded = embed_trivial_third_party(builtin_functional("chsh"));
    CHECK(embedded.parties() == 3);
    CHECK(embedded.settings == std::vector<int>{2, 2, 1});
    CHECK(embedded.coeffs == builtin_functional("chsh").coeffs);
    CHECK_THROWS_AS((void)embed_trivial_third_party(builtin_functional("mermin3")),
                    validation_error);
}

TEST_CASE("functional JSON round trips bitwise, including awkward doubles") {
    BellFunctional T = BellFunctional::checked(
        {3, 2}, {1.0 / 3.0, 0.1 + 0.2, -7.25e-17, 2.0, 1e300, -0.0});
    BellFunctional back = functional_from_json(to_json_string(T));
    CHECK(back.settings == T.settings);
    REQUIRE(back.coeffs.size() == T.coeffs.size());
    for (std::size_t i = 0; i < T.coeffs.size(); ++i) {
        CHECK(std::memcmp(&back.coeffs[i], &T.coeffs[i], sizeof(double)) == 0);
    }
}

TEST_CASE("coefficients serialize as nested per-party arrays") {
    nlohmann::json j = nlohmann::json::parse(to_json_string(builtin_functional("chsh")));
    CHECK(j["parties"] == 2);
    CHECK(j["settings"] == nlohmann::json::array({2, 2}));
    CHECK(j["coeffs"] == nlohmann::json::parse("[[1.0, 1.0], [1.0, -1.0]]"));

    nlohmann::json m3 = nlohmann::json::parse(to_json_string(builtin_functional("mermin3")));
    CHECK(m3["coeffs"][0][1][0] == 1.0);
    CHECK(m3["coeffs"][1][1][1] == -1.0);
}

TEST_CASE("functional parsing names the violated invariant") {
    CHECK_THROWS_WITH_AS((void)functional_from_json("{ not json"),
                         doctest::Contains("malformed functional JSON"),
                         validation_error);
    CHECK_THROWS_WITH_AS(
        (void)functional_from_json(R"({"settings": [2, 2], "coeffs": [[1, 1], [1]]})"),
        doctest::Contains("nesting"), validation_error);
    CHECK_THROWS_AS(
        (void)functional_from_json(
            R"({"parties": 3, "settings": [2, 2], "coeffs": [[1, 1], [1, -1]]})"),
        validation_error);
    CHECK_THROWS_AS(
        (void)functional_from_json(R"({"settings": [2, 0], "coeffs": [[1], []]})"),
        validation_error);
}

TEST_CASE("pure states round trip bitwise") {
    QuantumState ghz = ghz_state(2, 3);
    QuantumState back = state_from_json(to_json_string(ghz));
    CHECK(back.pure);
    CHECK(back.dims == ghz.dims);
    REQUIRE(back.psi.size() == ghz.psi.size());
    for (Eigen::Index i = 0; i < ghz.psi.size(); ++i) CHECK(back.psi[i] == ghz.psi[i]);
}

TEST_CASE("mixed states round trip through the density matrix") {
    Vector e0 = Vector::Zero(4), e3 = Vector::Zero(4);
    e0[0] = 1;
    e3[3] = 1;
    QuantumState mixed = QuantumState::make_mixed(
        {2, 2}, 0.7 * (e0 * e0.adjoint()) + 0.3 * (e3 * e3.adjoint()));
    QuantumState back = state_from_json(to_json_string(mixed));
    CHECK_FALSE(back.pure);
    CHECK((back.density() - mixed.density()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("state parsing rejects broken payloads") {
    CHECK_THROWS_WITH_AS((void)state_from_json("[1, 2"),
                         doctest::Contains("malformed state JSON"), validation_error);
    CHECK_THROWS_AS(
        (void)state_from_json(
            R"({"dims": [2], "pure": true, "psi": {"re": [1.0, 1.0], "im": [0.0, 0.0]}})"),
        validation_error);   // unnormalized
    CHECK_THROWS_AS(
        (void)state_from_json(
            R"({"dims": [2], "pure": true, "psi": {"re": [1.0], "im": [0.0, 0.0]}})"),
        validation_error);   // ragged re/im
}

TEST_CASE("violation reports survive a full round trip") {
    SeesawConfig cfg;
    cfg.dims = {2, 2};
    cfg.restarts = 2;
    cfg.max_iters = 60;
    cfg.seed = 7;
    cfg.threads = 1;
    ViolationReport r = seesaw(builtin_functional("chsh"), cfg);
    ViolationReport back = report_from_json(to_json_string(r));

    CHECK(back.classical_value == r.classical_value);
    CHECK(back.classical_method == r.classical_method);
    CHECK(back.quantum_value == r.quantum_value);
    CHECK(back.ratio == r.ratio);
    CHECK(back.seed == r.seed);
    CHECK(back.functional.coeffs == r.functional.coeffs);
    REQUIRE(back.traces.size() == r.traces.size());
    for (std::size_t t = 0; t < r.traces.size(); ++t) {
        CHECK(back.traces[t].objective == r.traces[t].objective);
        CHECK(back.traces[t].seed == r.traces[t].seed);
        CHECK(back.traces[t].converged == r.traces[t].converged);
    }
    REQUIRE(back.best_state.pure);
    for (Eigen::Index i = 0; i < r.best_state.psi.size(); ++i) {
        CHECK(back.best_state.psi[i] == r.best_state.psi[i]);
    }
    for (std::size_t p = 0; p < r.best_observables.parties.size(); ++p) {
        for (std::size_t m = 0; m < r.best_observables.parties[p].size(); ++m) {
            const Matrix& a = r.best_observables.parties[p][m].m;
            const Matrix& b = back.best_observables.parties[p][m].m;
            CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("report parsing revalidates the embedded certificate") {
    SeesawConfig cfg;
    cfg.dims = {2, 2};
    cfg.restarts = 1;
    cfg.seed = 3;
    cfg.threads = 1;
    std::string text = to_json_string(seesaw(builtin_functional("chsh"), cfg));
    nlohmann::json j = nlohmann::json::parse(text);
    j["best_state"]["psi"]["re"][0] = 5.0;   // break the norm
    CHECK_THROWS_AS((void)report_from_json(j.dump()), validation_error);
    j = nlohmann::json::parse(text);
    j["best_observables"]["parties"][0][0]["im"][0][0] = 1.0;   // break hermiticity
    CHECK_THROWS_AS((void)report_from_json(j.dump()), validation_error);
}

TEST_CASE("summary serializers expose their headline numbers") {
    ChevetSummary s;
    s.n = 2;
    s.N = 4;
    s.samples = 3;
    s.bound = chevet_bound(2, 4);
    s.values = {1.25, 1.5, 0.125};
    s.mean = (1.25 + 1.5 + 0.125) / 3.0;
    s.max = 1.5;

    nlohmann::json j = nlohmann::json::parse(to_json_string(s));
    CHECK(j["values"].size() == 3);
    CHECK(j["bound"] == s.bound);

    std::string csv = to_csv(s);
    CHECK(csv.rfind("sample,eps_norm,bound\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv.find("1,1.5,") != std::string::npos);
    CHECK(csv.find("2,0.125,") != std::string::npos);
}

TEST_CASE("one-way serializers produce parseable JSON") {
    GameResult g;
    g.success = 0.75;
    g.rounds = 1000;
    g.information_gain = information_gain(0.75);
    nlohmann::json jg = nlohmann::json::parse(to_json_string(g));
    CHECK(jg["success"] == 0.75);
    CHECK(jg["rounds"] == 1000);

    UnitaryFamily fam = sample_unitary_family(2, 3, 5);
    nlohmann::json jf = nlohmann::json::parse(to_json_string(fam));
    CHECK(jf["u"].size() == 2);
    CHECK(jf["u"][0]["re"].size() == 3);

    ClassicalResult cr;
    cr.value = 2.0;
    cr.method = "exact";
    cr.strategy.signs = {{1, -1}, {1, 1}};
    nlohmann::json jc = nlohmann::json::parse(to_json_string(cr));
    CHECK(jc["strategy"] == nlohmann::json::parse("[[1, -1], [1, 1]]"));
}
