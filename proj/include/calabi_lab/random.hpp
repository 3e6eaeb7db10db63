#pragma once

#include <cstdint>
#include <random>

#include "calabi_lab/forms.hpp"

namespace calab {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);
// Seed of stream `stream` under master seed `seed`; independent of evaluation order.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(stream_seed(seed, stream)) {}
  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  // Standard complex normal: E|z|^2 = 1.
  cplx complex_normal();

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// GUE-style Hermitian matrix: real normal diagonal, complex normal off-diagonal.
CMatrix random_hermitian(int m, Rng& rng);
// Haar-ish unitary from the QR factorization of a complex Gaussian matrix.
CMatrix random_unitary(int m, Rng& rng);

// i.i.d. complex normal coefficients on the (p, q) generators.
Form random_form(const FrameConvention& frame, int p, int q, Rng& rng);
RealForm random_real_form(const FrameConvention& frame, int p, int q, Rng& rng);
RealForm random_real_primitive(const FrameConvention& frame, int p, int q, Rng& rng);
// Real p-form on V (complexified), from a random real alternating tensor.
Form random_real_p_form(const FrameConvention& frame, int p, Rng& rng);

// Random element of the (1,0) symmetric square, normalized to tensor norm 1.
EndoC random_sym2_10(const FrameConvention& frame, Rng& rng);
// Random element of the real Lie algebra u(n).
EndoC random_u(const FrameConvention& frame, Rng& rng);
// Components of a random algebraic curvature tensor (pair symmetries and Bianchi).
std::vector<double> random_riemannian_components(const FrameConvention& frame, Rng& rng);

}  // namespace calab
