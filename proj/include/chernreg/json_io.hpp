#pragma once

// JSON encodings shared by every CLI input and report:
//   complex  -> [re, im]   (a bare number is read as a real value)
//   matrix   -> row-major nested arrays of complex
//   vector   -> array of complex
// Readers throw SchemaError naming the JSON path of the offending value.

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "chernreg/grassmann_polylog.hpp"
#include "chernreg/jet_forms.hpp"
#include "chernreg/transgression.hpp"

namespace chernreg {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& path, const std::string& what);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

json to_json(cplx z);
json to_json(const CMatrix& m);
json to_json(const CVector& v);
json to_json(const QuadratureResult& q);
json to_json(const ResidualReport& r);
json to_json(const EquivalenceReport& e);

cplx complex_from_json(const json& j, const std::string& path);
CMatrix matrix_from_json(const json& j, const std::string& path);
CVector vector_from_json(const json& j, const std::string& path);

/// {r, N, h: matrix | "identity" | {"rank1": vector}, g: [matrices], epsilon?}
GroupTuple group_tuple_from_json(const json& j);
/// {r, v: [vectors]}
VectorTuple vector_tuple_from_json(const json& j);
/// {m, k, N, r, family, poly: [{exponent, coefficient}], shift?, elements?,
///  point: {z: vector, tau: [reals]}}
TestScene scene_from_json(const json& j);
json to_json(const TestScene& s);

/// Parses a file; syntax errors become SchemaError at path "$".
json read_json_file(const std::string& filename);

}  // namespace chernreg
