#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "calabi_lab/curvature.hpp"
#include "calabi_lab/spectral.hpp"

namespace calab {

struct SpaceDescriptor;

struct ChscSpace {
  int n = 1;
  double c = 1.0;
};
struct QuadricSpace {
  int n = 2;
  double scale = 1.0;  // -1 gives the noncompact dual
};
struct ProductSpace {
  std::vector<SpaceDescriptor> factors;
};
struct FlatSpace {
  int k = 1;
};
struct RandomKaehlerSpace {
  int n = 1;
  std::uint64_t seed = 0;
};
struct RandomKaehlerEinsteinSpace {
  int n = 1;
  std::uint64_t seed = 0;
};
struct FileSpace {
  std::string path;
};

struct SpaceDescriptor {
  std::variant<ChscSpace, QuadricSpace, ProductSpace, FlatSpace, RandomKaehlerSpace, RandomKaehlerEinsteinSpace,
               FileSpace>
      v;
};

// Canonical text form, accepted back by parse_space.
std::string describe(const SpaceDescriptor& d);

AlgebraicCurvatureTensor build(const SpaceDescriptor& d);

AlgebraicCurvatureTensor chsc_tensor(int n, double c);
// SO(n+2)/(SO(2) x SO(n)) with largest Calabi eigenvalue normalized to 1, times scale.
AlgebraicCurvatureTensor quadric_tensor(int n, double scale = 1.0);
AlgebraicCurvatureTensor product_tensor(const std::vector<AlgebraicCurvatureTensor>& factors);
AlgebraicCurvatureTensor flat_tensor(int k);
AlgebraicCurvatureTensor random_kaehler(int n, std::uint64_t seed);
AlgebraicCurvatureTensor random_kaehler_einstein(int n, std::uint64_t seed);

struct EinsteinProjection {
  CMatrix C;
  int iterations = 0;
  double residual = 0.0;  // max |traceless part of Ric(Z_a, conj Z_b)|
};
// Minimal-norm Hermitian correction of C whose Ricci form is a multiple of the metric.
EinsteinProjection einstein_project(int n, const CMatrix& C, double tol = 1e-10, int max_iterations = 200);

struct QuadricSpectrum {
  Spectrum spectrum;
  PositivityReport half;  // k = n/2
  RicciData ricci;
};
QuadricSpectrum quadric_spectrum(int n);

}  // namespace calab
