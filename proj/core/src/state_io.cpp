#include "tricrit/state_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tricrit::io {

namespace {

using nlohmann::json;

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidInput("complex entry must be a [re, im] pair of numbers");
  }
  const double re = j[0].get<double>();
  const double im = j[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im)) throw InvalidInput("non-finite complex entry");
  return {re, im};
}

Dims dims_from_json(const json& doc) {
  if (!doc.contains("dims")) throw InvalidInput("missing \"dims\"");
  const json& d = doc["dims"];
  if (!d.is_array() || d.size() != 3) throw InvalidInput("\"dims\" must be an array of three integers");
  Dims dims;
  for (int p = 0; p < 3; ++p) {
    if (!d[p].is_number_integer()) throw InvalidInput("\"dims\" entries must be integers");
    dims.n[p] = d[p].get<int>();
    if (dims.n[p] < 2) throw InvalidInput("every dimension must be at least 2");
  }
  return dims;
}

json parse_document(std::string_view text) {
  try {
    json doc = json::parse(text);
    if (!doc.is_object()) throw InvalidInput("state file must hold a JSON object");
    return doc;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

PureState pure_from_doc(const json& doc) {
  const Dims dims = dims_from_json(doc);
  const json& amps = doc["amplitudes"];
  if (!amps.is_array()) throw InvalidInput("\"amplitudes\" must be an array");
  if (static_cast<int>(amps.size()) != dims.total()) {
    throw InvalidInput("expected " + std::to_string(dims.total()) + " amplitudes, got " +
                       std::to_string(amps.size()));
  }
  CVector a(dims.total());
  for (int i = 0; i < dims.total(); ++i) a[i] = complex_from_json(amps[i]);
  return PureState(dims, std::move(a));
}

DensityMatrix density_from_doc(const json& doc) {
  const Dims dims = dims_from_json(doc);
  const json& rows = doc["matrix"];
  const int d = dims.total();
  if (!rows.is_array() || static_cast<int>(rows.size()) != d) {
    throw InvalidInput("\"matrix\" must have " + std::to_string(d) + " rows");
  }
  CMatrix m(d, d);
  for (int r = 0; r < d; ++r) {
    if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != d) {
      throw InvalidInput("row " + std::to_string(r) + " must have " + std::to_string(d) + " entries");
    }
    for (int c = 0; c < d; ++c) m(r, c) = complex_from_json(rows[r][c]);
  }
  return DensityMatrix(dims, std::move(m));
}

json dims_to_json(const Dims& d) { return json::array({d[0], d[1], d[2]}); }

}  // namespace

std::string to_json(const PureState& s) {
  nlohmann::ordered_json doc;
  doc["dims"] = dims_to_json(s.dims());
  json amps = json::array();
  for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) amps.push_back(complex_to_json(s.amplitudes()[i]));
  doc["amplitudes"] = std::move(amps);
  return doc.dump() + "\n";
}

std::string to_json(const DensityMatrix& rho) {
  nlohmann::ordered_json doc;
  doc["dims"] = dims_to_json(rho.dims());
  json rows = json::array();
  for (int r = 0; r < rho.size(); ++r) {
    json row = json::array();
    for (int c = 0; c < rho.size(); ++c) row.push_back(complex_to_json(rho.matrix()(r, c)));
    rows.push_back(std::move(row));
  }
  doc["matrix"] = std::move(rows);
  return doc.dump() + "\n";
}

PureState parse_pure_state(std::string_view text) {
  const json doc = parse_document(text);
  if (!doc.contains("amplitudes")) throw InvalidInput("missing \"amplitudes\"");
  return pure_from_doc(doc);
}

DensityMatrix parse_density(std::string_view text) {
  const json doc = parse_document(text);
  if (!doc.contains("matrix")) throw InvalidInput("missing \"matrix\"");
  return density_from_doc(doc);
}

StateFile parse_state_file(std::string_view text) {
  const json doc = parse_document(text);
  const bool has_amps = doc.contains("amplitudes");
  const bool has_matrix = doc.contains("matrix");
  if (has_amps == has_matrix) throw InvalidInput("state file needs exactly one of \"amplitudes\" or \"matrix\"");
  if (has_amps) return pure_from_doc(doc);
  return density_from_doc(doc);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw InvalidInput("write failed for " + path.string());
}

}  // namespace tricrit::io
