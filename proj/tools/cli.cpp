#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellviol/bounds.hpp"
#include "bellviol/builtins.hpp"
#include "bellviol/classical_value.hpp"
#include "bellviol/comm_game.hpp"
#include "bellviol/errors.hpp"
#include "bellviol/io.hpp"
#include "bellviol/noise.hpp"
#include "bellviol/quantum_value.hpp"
#include "bellviol/random_states.hpp"
#include "bellviol/rng.hpp"
#include "bellviol/tensor_core.hpp"
#include "bellviol/version.hpp"

namespace bellviol::cli {

namespace {

using nlohmann::json;

struct Common {
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string output;
    std::string format = "json";
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "root RNG seed (default 0)");
    sub->add_option("--threads", c.threads, "execution width, 0 = all cores");
    sub->add_option("--output", c.output, "write the document to this file instead of stdout");
    sub->add_option("--format", c.format, "json or csv (csv only for chevet)")
        ->check(CLI::IsMember({"json", "csv"}));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Accepts both bare payloads and full CLI documents; the latter are unwrapped
// to their "result" subtree so subcommands chain naturally.
json load_payload(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw validation_error("cannot parse '" + path + "': " + e.what());
    }
    if (j.is_object() && j.contains("result")) return j["result"];
    return j;
}

BellFunctional load_functional(const std::string& path) {
    return functional_from_json(load_payload(path).dump());
}

ViolationReport load_report(const std::string& path) {
    return report_from_json(load_payload(path).dump());
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string digest_string(const std::string& payload) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(payload)));
    return buf;
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text << '\n';
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw validation_error("cannot write '" + path + "'");
    f << text << '\n';
}

json game_result_json(const GameResult& r) {
    return json::parse(to_json_string(r));
}

} // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    const std::vector<std::string> argv_record = args;

    CLI::App app{"numerical laboratory for multipartite correlation inequalities"};
    app.name("bellviol");
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);

    Common common;

    auto* cbuiltin = app.add_subcommand("builtin", "emit a named functional");
    std::string builtin_name;
    cbuiltin->add_option("--name", builtin_name, "chsh, mermin3 or mermin4")->required();
    add_common(cbuiltin, common);

    auto* cclassical = app.add_subcommand("classical", "exact or heuristic LHV value");
    std::string classical_input;
    bool classical_heuristic = false;
    int classical_restarts = 64;
    cclassical->add_option("--input", classical_input, "functional JSON file")->required();
    cclassical->add_flag("--heuristic", classical_heuristic,
                         "hill climbing instead of exact enumeration");
    cclassical->add_option("--restarts", classical_restarts, "hill-climbing restarts");
    add_common(cclassical, common);

    auto* cquantum = app.add_subcommand("quantum", "see-saw lower bound on the quantum value");
    std::string quantum_input, quantum_fixed, quantum_init = "batch";
    std::vector<int> quantum_dims;
    SeesawConfig scfg;
    cquantum->add_option("--input", quantum_input, "functional JSON file")->required();
    cquantum->add_option("--dims", quantum_dims, "local dimensions, e.g. 2,2")
        ->delimiter(',')
        ->required();
    cquantum->add_option("--restarts", scfg.restarts, "see-saw restarts");
    cquantum->add_option("--max-iters", scfg.max_iters, "sweep limit per restart");
    cquantum->add_option("--rel-tol", scfg.rel_tol, "relative convergence tolerance");
    cquantum->add_option("--stagnation", scfg.stagnation_limit,
                         "sweeps without improvement before giving up");
    cquantum->add_option("--init", quantum_init, "state init: batch, entangled or random")
        ->check(CLI::IsMember({"batch", "entangled", "random"}));
    cquantum->add_option("--fixed-state", quantum_fixed,
                         "state JSON file; optimize observables only");
    add_common(cquantum, common);

    auto* crandstate = app.add_subcommand(
        "randstate", "random tripartite state with an exactly flat first marginal");
    int rs_n = 0, rs_N = 0;
    crandstate->add_option("--n", rs_n, "first-party dimension")->required();
    crandstate->add_option("--N", rs_N, "second/third-party dimension")->required();
    add_common(crandstate, common);

    auto* cchevet = app.add_subcommand("chevet", "Monte Carlo norm of random unitary families");
    int ch_n = 0, ch_N = 0, ch_samples = 100;
    cchevet->add_option("--n", ch_n, "family size")->required();
    cchevet->add_option("--N", ch_N, "unitary dimension")->required();
    cchevet->add_option("--samples", ch_samples, "number of sampled families");
    add_common(cchevet, common);

    auto* cghz = app.add_subcommand("ghz-bound", "GHZ-fixed violation ratios against the ceiling");
    int gz_n = 0, gz_settings = 0, gz_trials = 50, gz_parties = 3;
    cghz->add_option("--n", gz_n, "local dimension")->required();
    cghz->add_option("--settings", gz_settings, "settings per party")->required();
    cghz->add_option("--trials", gz_trials, "random functionals per cell");
    cghz->add_option("--parties", gz_parties, "number of parties");
    add_common(cghz, common);

    auto* crc = app.add_subcommand("rc-check", "row/column norm of the matrix-unit family");
    int rc_N = 0;
    crc->add_option("--N", rc_N, "family index range")->required();
    add_common(crc, common);

    auto* cnoise = app.add_subcommand("noise", "violation under white noise");
    std::string noise_report;
    double noise_p = 1.0;
    bool noise_split = false;
    cnoise->add_option("--report", noise_report, "violation report JSON file")->required();
    cnoise->add_option("--p", noise_p, "visibility in [0, 1]")->required();
    cnoise->add_flag("--make-traceless", noise_split,
                     "subtract each observable's identity component first");
    add_common(cnoise, common);

    auto* cgame = app.add_subcommand("ccgame", "broadcast game built from a violation report");
    std::string game_report, game_input, game_strategy = "both";
    std::uint64_t game_rounds = 100000;
    bool game_exact_only = false;
    cgame->add_option("--report", game_report, "violation report JSON file")->required();
    cgame->add_option("--input", game_input,
                      "functional JSON; defaults to the report's functional");
    cgame->add_option("--strategy", game_strategy, "which side to play")
        ->check(CLI::IsMember({"classical", "quantum", "both"}));
    cgame->add_option("--rounds", game_rounds, "simulated rounds per strategy");
    cgame->add_flag("--exact", game_exact_only, "skip the round-by-round simulation");
    add_common(cgame, common);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        const auto t0 = std::chrono::steady_clock::now();
        json result;
        std::string csv;

        if (cbuiltin->parsed()) {
            result = json::parse(to_json_string(builtin_functional(builtin_name)));
        } else if (cclassical->parsed()) {
            const BellFunctional T = load_functional(classical_input);
            const ClassicalResult r = classical_heuristic
                ? classical_value_heuristic(T, classical_restarts, common.seed)
                : classical_value_exact(T, common.threads);
            result = json::parse(to_json_string(r));
        } else if (cquantum->parsed()) {
            const BellFunctional T = load_functional(quantum_input);
            scfg.dims = quantum_dims;
            scfg.seed = common.seed;
            scfg.threads = common.threads;
            scfg.init = quantum_init == "entangled" ? StateInit::entangled
                      : quantum_init == "random"    ? StateInit::random
                                                    : StateInit::batch;
            std::optional<QuantumState> fixed;
            if (!quantum_fixed.empty()) {
                fixed = state_from_json(load_payload(quantum_fixed).dump());
            }
            result = json::parse(to_json_string(seesaw(T, scfg, fixed)));
        } else if (crandstate->parsed()) {
            const UnitaryFamily fam = orthogonal_unitary_family(rs_n, rs_N, common.seed);
            const QuantumState state = tripartite_state_from_family(fam);
            const Matrix r1 = reduced_density(state, 0);
            const double flat_dev =
                (r1 - Matrix::Identity(rs_n, rs_n) / static_cast<double>(rs_n))
                    .cwiseAbs()
                    .maxCoeff();
            result = {{"n", rs_n},
                      {"N", rs_N},
                      {"seed", common.seed},
                      {"state", json::parse(to_json_string(state))},
                      {"family", json::parse(to_json_string(fam))},
                      {"norm_deviation", std::abs(state.psi.norm() - 1.0)},
                      {"reduced_party1_deviation", flat_dev}};
        } else if (cchevet->parsed()) {
            ChevetSummary s = chevet_montecarlo(ch_n, ch_N, ch_samples, common.seed,
                                                common.threads);
            result = json::parse(to_json_string(s));
            if (common.format == "csv") csv = to_csv(s);
        } else if (cghz->parsed()) {
            result = json::parse(to_json_string(ghz_violation_experiment(
                gz_n, gz_settings, gz_trials, common.seed, gz_parties, common.threads)));
        } else if (crc->parsed()) {
            const MatrixFamily fam = matrix_unit_family(rc_N);
            const std::vector<double> terms = rc_norm_terms(fam);
            const double value = rc_norm(fam);
            const double expected = std::sqrt(static_cast<double>(rc_N));
            result = {{"N", rc_N},
                      {"terms", terms},
                      {"rc_norm", value},
                      {"rc2_norm", rc2_norm(fam)},
                      {"expected", expected},
                      {"deviation", std::abs(value - expected)}};
        } else if (cnoise->parsed()) {
            const ViolationReport rep = load_report(noise_report);
            ObservableSet obs = rep.best_observables;
            json alphas = json::array();
            if (noise_split) {
                for (auto& party : obs.parties) {
                    json row = json::array();
                    for (auto& a : party) {
                        TracelessSplit split = make_traceless(a.m);
                        row.push_back(split.alpha);
                        a = Observable{std::move(split.traceless)};
                    }
                    alphas.push_back(std::move(row));
                }
            }
            const NoiseReport nr = noisy_violation(rep.functional, rep.best_state, obs, noise_p);
            result = json::parse(to_json_string(nr));
            if (noise_split) result["removed_identity_components"] = std::move(alphas);
        } else if (cgame->parsed()) {
            const ViolationReport rep = load_report(game_report);
            BellFunctional T = game_input.empty() ? rep.functional
                                                  : load_functional(game_input);
            QuantumState state = rep.best_state;
            ObservableSet obs = rep.best_observables;
            bool embedded = false;
            if (T.parties() == 2) {
                T = embed_trivial_third_party(T);
                if (state.dims.size() == 2) {
                    state.dims.push_back(1);
                    obs.parties.push_back({Observable::checked(Matrix::Identity(1, 1))});
                }
                embedded = true;
            }
            const bool play_classical = game_strategy != "quantum";
            const bool play_quantum = game_strategy != "classical";
            result = {{"embedded", embedded}};
            const Rng root(common.seed);
            std::optional<GameSpec> gc, gq;
            if (play_classical) {
                ClassicalResult cres;
                try {
                    cres = classical_value_exact(T, common.threads);
                } catch (const validation_error&) {
                    cres = classical_value_heuristic(T, 64,
                                                     Rng(common.seed).child(0xC1A551CA).seed());
                }
                gc = GameSpec::classical(T, cres.strategy);
                result["coeff_abs_sum"] = gc->coeff_abs_sum;
                result["classical"] = {{"exact", game_result_json(exact_success(*gc))}};
                if (!game_exact_only) {
                    result["classical"]["simulated"] = game_result_json(
                        simulate_game(*gc, game_rounds, root.child(1).seed(), common.threads));
                }
            }
            if (play_quantum) {
                gq = GameSpec::quantum_strategy(T, std::move(state), std::move(obs));
                result["coeff_abs_sum"] = gq->coeff_abs_sum;
                result["quantum"] = {{"exact", game_result_json(exact_success(*gq))}};
                if (!game_exact_only) {
                    result["quantum"]["simulated"] = game_result_json(
                        simulate_game(*gq, game_rounds, root.child(2).seed(), common.threads));
                }
            }
            if (gc && gq) result["ratio"] = ratio_check(*gc, *gq);
        }

        if (common.format == "csv" && csv.empty()) {
            throw validation_error("csv format is only available for the chevet subcommand");
        }
        if (common.format == "csv" && common.output.empty()) {
            throw validation_error("csv format needs --output so the manifest can sit beside it");
        }

        const std::string payload = common.format == "csv" ? csv : result.dump();
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        json manifest = {{"tool", "bellviol"},
                         {"version", version},
                         {"subcommand", app.get_subcommands().front()->get_name()},
                         {"argv", argv_record},
                         {"seed", common.seed},
                         {"threads", common.threads},
                         {"wall_clock_ms", ms},
                         {"payload_digest", digest_string(payload)}};

        if (common.format == "csv") {
            write_text(csv, common.output, out);
            write_text(json{{"manifest", std::move(manifest)}}.dump(2),
                       common.output + ".manifest.json", out);
        } else {
            write_text(json{{"manifest", std::move(manifest)}, {"result", std::move(result)}}
                           .dump(2),
                       common.output, out);
        }
        return 0;
    } catch (const validation_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace bellviol::cli
