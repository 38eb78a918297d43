#include "bellviol/io.hpp"

#include <utility>

#include <json.hpp>

namespace bellviol {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row_re = json::array();
        json row_im = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row_re.push_back(m(r, c).real());
            row_im.push_back(m(r, c).imag());
        }
        re.push_back(std::move(row_re));
        im.push_back(std::move(row_im));
    }
    return {{"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const json& j) {
    const json& re = j.at("re");
    const json& im = j.at("im");
    if (!re.is_array() || re.empty() || re.size() != im.size()) {
        throw validation_error("matrix re/im blocks must be equally sized row arrays");
    }
    const std::size_t rows = re.size();
    const std::size_t cols = re[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (re[r].size() != cols || im[r].size() != cols) {
            throw validation_error("matrix rows have inconsistent lengths");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                cplx(re[r][c].get<double>(), im[r][c].get<double>());
        }
    }
    return m;
}

json vector_to_json(const Vector& v) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        re.push_back(v[i].real());
        im.push_back(v[i].imag());
    }
    return {{"re", std::move(re)}, {"im", std::move(im)}};
}

Vector vector_from_json(const json& j) {
    const json& re = j.at("re");
    const json& im = j.at("im");
    if (re.size() != im.size()) {
        throw validation_error("vector re/im arrays must have equal length");
    }
    Vector v(static_cast<Eigen::Index>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = cplx(re[i].get<double>(), im[i].get<double>());
    }
    return v;
}

json nest_coeffs(const std::vector<double>& coeffs, const std::vector<int>& settings,
                 std::size_t depth, std::size_t& offset) {
    json out = json::array();
    if (depth + 1 == settings.size()) {
        for (int m = 0; m < settings[depth]; ++m) out.push_back(coeffs[offset++]);
        return out;
    }
    for (int m = 0; m < settings[depth]; ++m) {
        out.push_back(nest_coeffs(coeffs, settings, depth + 1, offset));
    }
    return out;
}

void flatten_coeffs(const json& node, const std::vector<int>& settings,
                    std::size_t depth, std::vector<double>& coeffs) {
    if (!node.is_array() || node.size() != static_cast<std::size_t>(settings[depth])) {
        throw validation_error("coefficient nesting does not match the setting counts");
    }
    if (depth + 1 == settings.size()) {
        for (const json& c : node) coeffs.push_back(c.get<double>());
        return;
    }
    for (const json& sub : node) flatten_coeffs(sub, settings, depth + 1, coeffs);
}

json functional_to_json(const BellFunctional& T) {
    std::size_t offset = 0;
    return {{"parties", T.parties()},
            {"settings", T.settings},
            {"coeffs", nest_coeffs(T.coeffs, T.settings, 0, offset)}};
}

BellFunctional functional_from_obj(const json& j) {
    std::vector<int> settings = j.at("settings").get<std::vector<int>>();
    if (j.contains("parties") &&
        j.at("parties").get<int>() != static_cast<int>(settings.size())) {
        throw validation_error("party count does not match the settings list");
    }
    for (int s : settings) {
        if (s < 1) throw validation_error("setting counts must be positive");
    }
    std::vector<double> coeffs;
    flatten_coeffs(j.at("coeffs"), settings, 0, coeffs);
    return BellFunctional::checked(std::move(settings), std::move(coeffs));
}

json state_to_json(const QuantumState& state) {
    json out = {{"dims", state.dims}, {"pure", state.pure}};
    if (state.pure) {
        out["psi"] = vector_to_json(state.psi);
    } else {
        out["rho"] = matrix_to_json(state.rho);
    }
    return out;
}

QuantumState state_from_obj(const json& j) {
    std::vector<int> dims = j.at("dims").get<std::vector<int>>();
    if (j.at("pure").get<bool>()) {
        return QuantumState::make_pure(std::move(dims), vector_from_json(j.at("psi")));
    }
    return QuantumState::make_mixed(std::move(dims), matrix_from_json(j.at("rho")));
}

json observables_to_json(const ObservableSet& obs) {
    json parties = json::array();
    for (const auto& party : obs.parties) {
        json list = json::array();
        for (const auto& a : party) list.push_back(matrix_to_json(a.m));
        parties.push_back(std::move(list));
    }
    return {{"parties", std::move(parties)}};
}

ObservableSet observables_from_obj(const json& j) {
    std::vector<std::vector<Observable>> parties;
    for (const json& party : j.at("parties")) {
        std::vector<Observable> list;
        for (const json& a : party) list.push_back(Observable::checked(matrix_from_json(a)));
        parties.push_back(std::move(list));
    }
    return ObservableSet::checked(std::move(parties));
}

json trace_to_json(const RestartTrace& t) {
    return {{"seed", t.seed},
            {"objective", t.objective},
            {"iterations", t.iterations},
            {"converged", t.converged},
            {"final_value", t.final_value},
            {"max_decrease", t.max_decrease}};
}

RestartTrace trace_from_obj(const json& j) {
    RestartTrace t;
    t.seed = j.at("seed").get<std::uint64_t>();
    t.objective = j.at("objective").get<std::vector<double>>();
    t.iterations = j.at("iterations").get<int>();
    t.converged = j.at("converged").get<bool>();
    t.final_value = j.at("final_value").get<double>();
    t.max_decrease = j.at("max_decrease").get<double>();
    return t;
}

json report_to_jsonobj(const ViolationReport& r) {
    json traces = json::array();
    for (const auto& t : r.traces) traces.push_back(trace_to_json(t));
    return {{"functional", functional_to_json(r.functional)},
            {"classical_value", r.classical_value},
            {"classical_method", r.classical_method},
            {"quantum_value", r.quantum_value},
            {"ratio", r.ratio},
            {"best_state", state_to_json(r.best_state)},
            {"best_observables", observables_to_json(r.best_observables)},
            {"traces", std::move(traces)},
            {"seed", r.seed}};
}

ViolationReport report_from_obj(const json& j) {
    ViolationReport r;
    r.functional = functional_from_obj(j.at("functional"));
    r.classical_value = j.at("classical_value").get<double>();
    r.classical_method = j.at("classical_method").get<std::string>();
    r.quantum_value = j.at("quantum_value").get<double>();
    r.ratio = j.at("ratio").get<double>();
    r.best_state = state_from_obj(j.at("best_state"));
    r.best_observables = observables_from_obj(j.at("best_observables"));
    for (const json& t : j.at("traces")) r.traces.push_back(trace_from_obj(t));
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
}

template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw validation_error(std::string(what) + ": " + e.what());
    }
}

} // namespace

std::string to_json_string(const BellFunctional& T, int indent) {
    return functional_to_json(T).dump(indent);
}

BellFunctional functional_from_json(const std::string& text) {
    return guarded("malformed functional JSON",
                   [&] { return functional_from_obj(json::parse(text)); });
}

std::string to_json_string(const QuantumState& state, int indent) {
    return state_to_json(state).dump(indent);
}

QuantumState state_from_json(const std::string& text) {
    return guarded("malformed state JSON",
                   [&] { return state_from_obj(json::parse(text)); });
}

std::string to_json_string(const ClassicalResult& result, int indent) {
    json j = {{"value", result.value},
              {"method", result.method},
              {"nodes_explored", result.nodes_explored},
              {"strategy", result.strategy.signs}};
    return j.dump(indent);
}

std::string to_json_string(const ViolationReport& report, int indent) {
    return report_to_jsonobj(report).dump(indent);
}

ViolationReport report_from_json(const std::string& text) {
    return guarded("malformed report JSON",
                   [&] { return report_from_obj(json::parse(text)); });
}

std::string to_json_string(const NoiseReport& report, int indent) {
    json j = {{"p", report.p},
              {"clean_value", report.clean_value},
              {"noisy_value", report.noisy_value},
              {"predicted", report.predicted},
              {"classical_value", report.classical_value},
              {"critical_p", report.critical_p}};
    return j.dump(indent);
}

std::string to_json_string(const GameResult& result, int indent) {
    json j = {{"success", result.success},
              {"standard_error", result.standard_error},
              {"rounds", result.rounds},
              {"information_gain", result.information_gain},
              {"seed", result.seed}};
    return j.dump(indent);
}

std::string to_json_string(const ChevetSummary& summary, int indent) {
    json j = {{"n", summary.n},
              {"N", summary.N},
              {"samples", summary.samples},
              {"seed", summary.seed},
              {"bound", summary.bound},
              {"mean", summary.mean},
              {"max", summary.max},
              {"stddev", summary.stddev},
              {"values", summary.values}};
    return j.dump(indent);
}

std::string to_csv(const ChevetSummary& summary) {
    std::string out = "sample,eps_norm,bound\n";
    for (std::size_t i = 0; i < summary.values.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += json(summary.values[i]).dump();   // shortest round-trip form
        out += ',';
        out += json(summary.bound).dump();
        out += '\n';
    }
    return out;
}

std::string to_json_string(const GhzExperiment& experiment, int indent) {
    json j = {{"n", experiment.n},
              {"settings", experiment.settings},
              {"parties", experiment.parties},
              {"trials", experiment.trials},
              {"seed", experiment.seed},
              {"bound", experiment.bound},
              {"ratios", experiment.ratios},
              {"max_ratio", experiment.max_ratio},
              {"within_bound", experiment.within_bound},
              {"best", report_to_jsonobj(experiment.best)}};
    return j.dump(indent);
}

std::string to_json_string(const UnitaryFamily& family, int indent) {
    json u = json::array();
    for (const Matrix& m : family.u) u.push_back(matrix_to_json(m));
    json j = {{"n", family.n},
              {"N", family.N},
              {"seed", family.seed},
              {"u", std::move(u)}};
    return j.dump(indent);
}

} // namespace bellviol
