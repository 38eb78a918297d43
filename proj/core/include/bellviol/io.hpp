#pragma once

#include <string>

#include "bellviol/bounds.hpp"
#include "bellviol/classical_value.hpp"
#include "bellviol/comm_game.hpp"
#include "bellviol/noise.hpp"
#include "bellviol/quantum_value.hpp"
#include "bellviol/random_states.hpp"
#include "bellviol/tensor_core.hpp"

namespace bellviol {

// JSON wire formats. Functionals are {"parties", "settings", "coeffs"} with
// the coefficients as nested arrays, row-major by party order. Matrices and
// amplitude vectors carry separate "re"/"im" nested arrays. Serialized
// doubles round-trip exactly. Parsers throw validation_error with the
// violated invariant named.

std::string to_json_string(const BellFunctional& T, int indent = 2);
BellFunctional functional_from_json(const std::string& text);

std::string to_json_string(const QuantumState& state, int indent = 2);
QuantumState state_from_json(const std::string& text);

std::string to_json_string(const ClassicalResult& result, int indent = 2);

std::string to_json_string(const ViolationReport& report, int indent = 2);
ViolationReport report_from_json(const std::string& text);

std::string to_json_string(const NoiseReport& report, int indent = 2);

std::string to_json_string(const GameResult& result, int indent = 2);

std::string to_json_string(const ChevetSummary& summary, int indent = 2);
std::string to_csv(const ChevetSummary& summary);

std::string to_json_string(const GhzExperiment& experiment, int indent = 2);

std::string to_json_string(const UnitaryFamily& family, int indent = 2);

} // namespace bellviol
