#include "calabi_lab/input_schema.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "calabi_lab/errors.hpp"

namespace calab {

namespace {

using nlohmann::json;

int read_n(const json& doc) {
  if (!doc.contains("n") || !doc["n"].is_number_integer()) throw SchemaError("field 'n' must be an integer");
  const int n = doc["n"].get<int>();
  if (n < 1 || n > 16) throw SchemaError("field 'n' must be between 1 and 16");
  return n;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError(where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw SchemaError(where + " must be finite");
  return x;
}

AlgebraicCurvatureTensor from_calabi(const json& doc) {
  const int n = read_n(doc);
  const int m = n * (n + 1) / 2;
  if (!doc.contains("hermitian") || !doc["hermitian"].is_array()) throw SchemaError("field 'hermitian' must be an array");
  const auto& h = doc["hermitian"];
  if (static_cast<int>(h.size()) != m * (m + 1) / 2)
    throw SchemaError("field 'hermitian' needs " + std::to_string(m * (m + 1) / 2) + " upper-triangle entries");
  CMatrix C(m, m);
  std::size_t k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j, ++k) {
      const auto& e = h[k];
      const std::string where = "hermitian[" + std::to_string(k) + "]";
      if (!e.is_array() || e.size() != 2) throw SchemaError(where + " must be [re, im]");
      const cplx z{number(e[0], where), number(e[1], where)};
      if (i == j && z.imag() != 0.0) throw SchemaError(where + " is diagonal and must be real");
      C(i, j) = z;
      C(j, i) = std::conj(z);
    }
  return tensor_from_calabi(FrameConvention(n), C);
}

AlgebraicCurvatureTensor from_components(const json& doc) {
  const int n = read_n(doc);
  const int d = 2 * n;
  if (!doc.contains("entries") || !doc["entries"].is_array()) throw SchemaError("field 'entries' must be an array");
  std::vector<double> comp(static_cast<std::size_t>(d) * d * d * d, 0.0);
  std::vector<char> set(comp.size(), 0);
  auto idx = [d](int i, int j, int k, int l) { return static_cast<std::size_t>(((i * d + j) * d + k) * d + l); };
  std::size_t pos = 0;
  for (const auto& e : doc["entries"]) {
    const std::string where = "entries[" + std::to_string(pos++) + "]";
    if (!e.is_array() || e.size() != 5) throw SchemaError(where + " must be [i, j, k, l, value]");
    int ix[4];
    for (int t = 0; t < 4; ++t) {
      if (!e[t].is_number_integer()) throw SchemaError(where + " indices must be integers");
      ix[t] = e[t].get<int>() - 1;
      if (ix[t] < 0 || ix[t] >= d) throw SchemaError(where + " index out of range 1.." + std::to_string(d));
    }
    const double v = number(e[4], where);
    const auto [i, j, k, l] = std::tuple{ix[0], ix[1], ix[2], ix[3]};
    const std::pair<std::size_t, double> orbit[] = {
        {idx(i, j, k, l), v},  {idx(j, i, k, l), -v}, {idx(i, j, l, k), -v}, {idx(j, i, l, k), v},
        {idx(k, l, i, j), v},  {idx(l, k, i, j), -v}, {idx(k, l, j, i), -v}, {idx(l, k, j, i), v}};
    for (const auto& [at, val] : orbit) {
      if (set[at] && comp[at] != val) throw SchemaError(where + " conflicts with the pair symmetries or an earlier entry");
      comp[at] = val;
      set[at] = 1;
    }
  }
  return validate_tensor(FrameConvention(n), std::move(comp));
}

}  // namespace

AlgebraicCurvatureTensor parse_curvature_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
    throw SchemaError("document must be an object with a string field 'kind'");
  const auto kind = doc["kind"].get<std::string>();
  if (kind == "calabi") return from_calabi(doc);
  if (kind == "components") return from_components(doc);
  throw SchemaError("unknown kind '" + kind + "' (expected 'calabi' or 'components')");
}

AlgebraicCurvatureTensor load_curvature_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_curvature_json(ss.str());
}

}  // namespace calab
