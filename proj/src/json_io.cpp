#include "unimod/json_io.hpp"

#include <fstream>
#include <sstream>

namespace unimod {

using nlohmann::json;

json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

json to_json(const ComplexVector& v) {
  json out = json::array();
  for (const cplx& c : v) out.push_back(to_json(c));
  return out;
}

json to_json(const ComplexMatrix& a) {
  json out = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (const cplx& c : a.row(i)) row.push_back(to_json(c));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const RisInstance& inst) {
  json out;
  out["H_ris_bs"] = to_json(inst.H_ris_bs);
  out["h_ue_ris"] = to_json(inst.h_ue_ris);
  out["h_d"] = inst.h_d ? to_json(*inst.h_d) : json(nullptr);
  out["P"] = inst.transmit_power;
  out["sigma2"] = inst.noise_variance;
  return out;
}

json to_json(const PhaseVector& phases) { return json(phases.values()); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ParseError("expected a complex number [re, im], got " + j.dump());
}

ComplexVector vector_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of complex numbers");
  ComplexVector v;
  v.reserve(j.size());
  for (const json& e : j) v.push_back(complex_from_json(e));
  return v;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (j.is_object()) {
    if (!j.contains("A")) throw ParseError("matrix document must be an array or contain \"A\"");
    return matrix_from_json(j.at("A"));
  }
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<cplx> data;
  for (std::size_t i = 0; i < rows; ++i) {
    ComplexVector row = vector_from_json(j[i]);
    if (i == 0) cols = row.size();
    if (row.empty() || row.size() != cols) throw ParseError("matrix rows must be non-empty and equal length");
    data.insert(data.end(), row.begin(), row.end());
  }
  try {
    return ComplexMatrix(rows, cols, std::move(data));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

RisInstance ris_instance_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("RIS instance must be a JSON object");
  for (const char* key : {"H_ris_bs", "h_ue_ris"}) {
    if (!j.contains(key)) throw ParseError(std::string("RIS instance is missing \"") + key + "\"");
  }
  RisInstance inst;
  inst.H_ris_bs = matrix_from_json(j.at("H_ris_bs"));
  inst.h_ue_ris = vector_from_json(j.at("h_ue_ris"));
  if (j.contains("h_d") && !j.at("h_d").is_null()) inst.h_d = vector_from_json(j.at("h_d"));
  auto positive = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ParseError(std::string("\"") + key + "\" must be a number");
    return j.at(key).get<double>();
  };
  inst.transmit_power = positive("P", 1.0);
  inst.noise_variance = positive("sigma2", 1.0);
  try {
    inst.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return inst;
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str());
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace unimod
