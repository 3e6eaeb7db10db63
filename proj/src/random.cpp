#include "calabi_lab/random.hpp"

#include <cmath>

#include "calabi_lab/curvature.hpp"

namespace calab {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) { return mix64(mix64(seed) ^ mix64(~stream)); }

cplx Rng::complex_normal() {
  const double r = 1.0 / std::sqrt(2.0);
  const double re = normal();
  const double im = normal();
  return {r * re, r * im};
}

CMatrix random_hermitian(int m, Rng& rng) {
  CMatrix H(m, m);
  for (int i = 0; i < m; ++i) {
    H(i, i) = rng.normal();
    for (int j = i + 1; j < m; ++j) {
      H(i, j) = rng.complex_normal();
      H(j, i) = std::conj(H(i, j));
    }
  }
  return H;
}

CMatrix random_unitary(int m, Rng& rng) {
  CMatrix G(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) G(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<CMatrix> qr(G);
  CMatrix Q = qr.householderQ() * CMatrix::Identity(m, m);
  return Q;
}

Form random_form(const FrameConvention& frame, int p, int q, Rng& rng) {
  Form f(frame, p + q);
  for (std::size_t r = 0; r < f.dim(); ++r)
    if (unbarred_count(f.mask(r)) == p && barred_count(f.mask(r)) == q) f.coefficients()(r) = rng.complex_normal();
  return f;
}

RealForm random_real_form(const FrameConvention& frame, int p, int q, Rng& rng) {
  return RealForm::from_component(random_form(frame, p, q, rng));
}

RealForm random_real_primitive(const FrameConvention& frame, int p, int q, Rng& rng) {
  return RealForm::from_component(project_primitive(random_form(frame, p, q, rng)));
}

Form random_real_p_form(const FrameConvention& frame, int p, Rng& rng) {
  // Real covectors e^i have slot values E(s, i) in the dual pairing; sum random
  // real multiples of e^{i_1} ^ ... ^ e^{i_p} over increasing index tuples.
  const int d = frame.real_dim();
  Form out(frame, p);
  const CMatrix& E = frame.real_to_slot();
  auto layout = form_layout(frame.n(), p);
  for (Mask m : layout->masks) {
    std::vector<CVector> covs;
    for (int i : slots_of(m)) {
      // e^i(b_s) = g(e_i, b_s) = E(s^1, i).
      CVector c(d);
      for (int s = 0; s < d; ++s) c(s) = E(FrameConvention::partner(s), i);
      covs.push_back(c);
    }
    Form piece = decomposable(frame, covs);
    out += cplx{rng.normal()} * piece;
  }
  return out;
}

EndoC random_sym2_10(const FrameConvention& frame, Rng& rng) {
  EndoC S{CMatrix::Zero(frame.slots(), frame.slots()), AlgebraTag::sym2_10};
  for (auto [a, b] : sym2_pairs(frame.n())) S.m += rng.complex_normal() * sym2_basis_element(frame, a, b).m;
  S.m /= std::sqrt(tensor_norm_sq(S));
  return S;
}

EndoC random_u(const FrameConvention& frame, Rng& rng) {
  // sum c_ab Z_a ^ conj(Z_b) is real iff c is skew-Hermitian.
  const int n = frame.n();
  CMatrix c = kI * random_hermitian(n, rng);
  EndoC L{CMatrix::Zero(frame.slots(), frame.slots()), AlgebraTag::u};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) L.m += c(a, b) * wedge_endo(frame, frame.z(a), frame.zbar(b)).m;
  return L;
}

std::vector<double> random_riemannian_components(const FrameConvention& frame, Rng& rng) {
  const int d = frame.real_dim();
  const std::size_t N = static_cast<std::size_t>(d) * d * d * d;
  auto idx = [d](int i, int j, int k, int l) { return static_cast<std::size_t>(((i * d + j) * d + k) * d + l); };
  std::vector<double> T(N), A(N), B(N);
  for (auto& v : T) v = rng.normal();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          A[idx(i, j, k, l)] = T[idx(i, j, k, l)] - T[idx(j, i, k, l)] - T[idx(i, j, l, k)] + T[idx(j, i, l, k)];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) B[idx(i, j, k, l)] = 0.5 * (A[idx(i, j, k, l)] + A[idx(k, l, i, j)]);
  // Remove the totally antisymmetric part, which is what violates Bianchi.
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          A[idx(i, j, k, l)] =
              B[idx(i, j, k, l)] - (B[idx(i, j, k, l)] + B[idx(j, k, i, l)] + B[idx(k, i, j, l)]) / 3.0;
  return A;
}

}  // namespace calab
