#pragma once

// JSON schema shared by the CLI and the test fixtures. Complex numbers are
// [re, im] pairs (a bare number is read as a real value); matrices are
// row-major nested arrays.
//
// RisInstance: {"H_ris_bs": [[..]], "h_ue_ris": [..], "h_d": [..] | null,
//               "P": 1.0, "sigma2": 1.0}

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "unimod/core.hpp"
#include "unimod/ris.hpp"
#include "unimod/solver.hpp"

namespace unimod {

// Malformed document or schema violation.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json to_json(cplx c);
nlohmann::json to_json(const ComplexVector& v);
nlohmann::json to_json(const ComplexMatrix& a);
nlohmann::json to_json(const RisInstance& inst);
nlohmann::json to_json(const PhaseVector& phases);

cplx complex_from_json(const nlohmann::json& j);
ComplexVector vector_from_json(const nlohmann::json& j);
// Accepts a bare nested array or an object with an "A" member.
ComplexMatrix matrix_from_json(const nlohmann::json& j);
RisInstance ris_instance_from_json(const nlohmann::json& j);

// Parses text; syntax errors become ParseError naming the byte offset.
nlohmann::json parse_json_text(const std::string& text);
nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace unimod
