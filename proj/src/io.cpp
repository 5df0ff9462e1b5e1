#include "cvxroof/io.hpp"

#include <fstream>
#include <string>

namespace cvxroof::io {

namespace {

cplx entry_from_json(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw InvalidInput("matrix entry must be [re, im] or a real number, got " + e.dump());
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  return j.at(key);
}

Eigen::Index require_count(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw InvalidInput(std::string("field '") + key + "' must be a positive integer");
  }
  return Eigen::Index(v.get<long long>());
}

ComplexMatrix square_matrix(const json& j) {
  const Eigen::Index dim = require_count(j, "dim");
  ComplexMatrix m = matrix_from_json(require(j, "matrix"));
  if (m.rows() != dim || m.cols() != dim) {
    throw InvalidInput("matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " but dim is " +
                       std::to_string(dim));
  }
  return m;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw InvalidInput("matrix must be a non-empty array of rows");
  const auto rows = Eigen::Index(j.size());
  const auto cols = Eigen::Index(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[std::size_t(i)];
    if (!row.is_array() || Eigen::Index(row.size()) != cols) throw InvalidInput("matrix rows have unequal length");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = entry_from_json(row[std::size_t(c)]);
  }
  return m;
}

json state_to_json(const DensityMatrix& rho) {
  json j;
  j["dim"] = rho.dim();
  if (!rho.factors().empty()) j["factors"] = rho.factors();
  j["matrix"] = matrix_to_json(rho.matrix());
  return j;
}

DensityMatrix state_from_json(const json& j) {
  const ComplexMatrix m = square_matrix(j);
  std::vector<Eigen::Index> factors;
  if (j.contains("factors")) {
    const json& f = j.at("factors");
    if (!f.is_array()) throw InvalidInput("'factors' must be an array");
    for (const auto& v : f) {
      if (!v.is_number_integer()) throw InvalidInput("'factors' entries must be integers");
      factors.push_back(Eigen::Index(v.get<long long>()));
    }
  }
  return DensityMatrix::from_matrix(m, std::move(factors));
}

json operator_to_json(const HermitianMatrix& h) {
  json j;
  j["dim"] = h.dim();
  j["matrix"] = matrix_to_json(h.matrix());
  return j;
}

HermitianMatrix operator_from_json(const json& j) {
  const ComplexMatrix m = square_matrix(j);
  const double skew = (m - m.adjoint()).norm();
  if (skew > 1e-9 * std::max(1.0, m.norm())) throw InvalidInput("operator is not Hermitian");
  return HermitianMatrix(m);
}

json channel_to_json(const Channel& channel) {
  json j;
  j["input_dim"] = channel.input_dim();
  j["output_dim"] = channel.output_dim();
  j["kraus"] = json::array();
  for (const auto& k : channel.kraus()) j["kraus"].push_back(matrix_to_json(k));
  return j;
}

Channel channel_from_json(const json& j) {
  const Eigen::Index d_in = require_count(j, "input_dim");
  const Eigen::Index d_out = require_count(j, "output_dim");
  const json& list = require(j, "kraus");
  if (!list.is_array() || list.empty()) throw InvalidInput("'kraus' must be a non-empty array");
  std::vector<ComplexMatrix> kraus;
  for (const auto& k : list) {
    kraus.push_back(matrix_from_json(k));
    if (kraus.back().rows() != d_out || kraus.back().cols() != d_in) {
      throw InvalidInput("Kraus operator shape does not match input_dim/output_dim");
    }
  }
  return Channel(std::move(kraus));
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

DensityMatrix read_state_file(const std::filesystem::path& path) { return state_from_json(read_json(path)); }

void write_state_file(const std::filesystem::path& path, const DensityMatrix& rho) {
  write_json(path, state_to_json(rho));
}

HermitianMatrix read_operator_file(const std::filesystem::path& path) {
  return operator_from_json(read_json(path));
}

Channel read_channel_file(const std::filesystem::path& path) { return channel_from_json(read_json(path)); }

}  // namespace cvxroof::io
