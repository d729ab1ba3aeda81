#pragma once

#include <filesystem>

#include <json.hpp>

#include "qsm/isomaps.hpp"

namespace qsm {

using json = nlohmann::json;

/// Matrix literal: { "dim": n, "entries": [[[re, im], ...], ...] }.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json to_json(const HermitianOperator& a);
/// Validates the literal, requires Hermitian symmetry to 1e-12 absolute and
/// symmetrizes. Malformed input raises ParseError.
HermitianOperator hermitian_from_json(const json& j);

/// { "dim": n, "vector": [[re, im], ...] }.
json to_json(const PureState& v);
PureState pure_state_from_json(const json& j);

/// { "kind": "unitary" | "antiunitary" | "named", "U": matrix, "params": {...} }.
/// Named maps carry params { "name", "dim", "p" | "c" }; a pinching basis
/// goes in "U". Oracles cannot be serialized.
json to_json(const StateMap& m);
StateMap state_map_from_json(const json& j);

json to_json(const ReconstructionResult& r);
json to_json(const IsometryReport& r);
json to_json(const PreservationReport& r);

/// Reads and parses a JSON file, mapping I/O and syntax failures to ParseError.
json load_json_file(const std::filesystem::path& path);

}  // namespace qsm
