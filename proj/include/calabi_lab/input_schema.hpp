#pragma once

#include <string>

#include "calabi_lab/curvature.hpp"

namespace calab {

// Accepted documents:
//   {"kind":"calabi","n":N,"hermitian":[[re,im],...]}
//       upper triangle of the Calabi matrix, row-major, n(n+1)/2 rows;
//   {"kind":"components","n":N,"entries":[[i,j,k,l,value],...]}
//       1-based real-frame indices; each entry fixes its whole symmetry orbit,
//       omitted entries are zero.
// Violations raise SchemaError.
AlgebraicCurvatureTensor parse_curvature_json(const std::string& text);
AlgebraicCurvatureTensor load_curvature_file(const std::string& path);

}  // namespace calab
