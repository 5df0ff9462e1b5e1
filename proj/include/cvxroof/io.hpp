#pragma once

// JSON file formats.
//
// State / operator file:
//   { "dim": 4, "factors": [2, 2], "matrix": [[[re, im], ...], ...] }
// "factors" is optional; "matrix" is row-major with one [re, im] pair per
// entry. Doubles are written with round-trip precision.
//
// Channel file:
//   { "input_dim": 2, "output_dim": 2, "kraus": [ <matrix>, ... ] }

#include <filesystem>

#include <json.hpp>

#include "cvxroof/channel.hpp"
#include "cvxroof/ensemble.hpp"

namespace cvxroof::io {

using json = nlohmann::json;

json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const json& j);

/// Operator in the state-file layout; must be Hermitian within 1e-9.
json operator_to_json(const HermitianMatrix& h);
HermitianMatrix operator_from_json(const json& j);

json channel_to_json(const Channel& channel);
Channel channel_from_json(const json& j);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

DensityMatrix read_state_file(const std::filesystem::path& path);
void write_state_file(const std::filesystem::path& path, const DensityMatrix& rho);
HermitianMatrix read_operator_file(const std::filesystem::path& path);
Channel read_channel_file(const std::filesystem::path& path);

}  // namespace cvxroof::io
