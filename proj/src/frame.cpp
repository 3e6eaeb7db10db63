#include "calabi_lab/frame.hpp"

#include <cmath>

#include "calabi_lab/errors.hpp"

namespace calab {

FrameConvention::FrameConvention(int n) : n_(n) {
  if (n < 1) throw InvalidArgument("complex dimension must be at least 1");
  const double r = 1.0 / std::sqrt(2.0);
  real_to_slot_ = CMatrix::Zero(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    real_to_slot_(z_slot(a), a) = r;
    real_to_slot_(zbar_slot(a), a) = r;
    real_to_slot_(z_slot(a), a + n) = kI * r;
    real_to_slot_(zbar_slot(a), a + n) = -kI * r;
  }
  slot_to_real_ = real_to_slot_.adjoint();
}

CVector FrameConvention::basis(int s) const {
  CVector v = CVector::Zero(slots());
  v(s) = 1.0;
  return v;
}

cplx FrameConvention::g(const CVector& u, const CVector& v) const {
  cplx acc = 0.0;
  for (int s = 0; s < slots(); ++s) acc += u(s) * v(partner(s));
  return acc;
}

CVector FrameConvention::conj(const CVector& v) const {
  CVector out(slots());
  for (int s = 0; s < slots(); ++s) out(s) = std::conj(v(partner(s)));
  return out;
}

RMatrix FrameConvention::complex_structure() const {
  RMatrix J = RMatrix::Zero(2 * n_, 2 * n_);
  for (int a = 0; a < n_; ++a) {
    J(a + n_, a) = 1.0;
    J(a, a + n_) = -1.0;
  }
  return J;
}

std::string to_string(AlgebraTag tag) {
  switch (tag) {
    case AlgebraTag::none: return "none";
    case AlgebraTag::gl: return "gl";
    case AlgebraTag::sym2_10: return "sym2_10";
    case AlgebraTag::wedge2_10: return "wedge2_10";
    case AlgebraTag::so: return "so";
    case AlgebraTag::sym2: return "sym2";
    case AlgebraTag::u: return "u";
    case AlgebraTag::su: return "su";
  }
  return "none";
}

void require_same_size(const FrameConvention& frame, const EndoC& L) {
  if (L.m.rows() != frame.slots() || L.m.cols() != frame.slots())
    throw DimensionMismatch("endomorphism size does not match the frame");
}

EndoC tensor_endo(const FrameConvention& frame, const CVector& v, const CVector& w) {
  // z -> g(v, z) w, and g(v, b_t) = v(t^1).
  CVector gv(frame.slots());
  for (int t = 0; t < frame.slots(); ++t) gv(t) = v(FrameConvention::partner(t));
  return EndoC{w * gv.transpose(), AlgebraTag::gl};
}

EndoC wedge_endo(const FrameConvention& frame, const CVector& v, const CVector& w) {
  EndoC L{tensor_endo(frame, v, w).m - tensor_endo(frame, w, v).m, AlgebraTag::so};
  return L;
}

EndoC sym_endo(const FrameConvention& frame, const CVector& v, const CVector& w) {
  EndoC L{tensor_endo(frame, v, w).m + tensor_endo(frame, w, v).m, AlgebraTag::sym2};
  return L;
}

EndoC conj(const FrameConvention& frame, const EndoC& L) {
  require_same_size(frame, L);
  const int d = frame.slots();
  EndoC out{CMatrix(d, d), L.tag};
  for (int s = 0; s < d; ++s)
    for (int t = 0; t < d; ++t)
      out.m(s, t) = std::conj(L.m(FrameConvention::partner(s), FrameConvention::partner(t)));
  return out;
}

CVector apply(const EndoC& L, const CVector& v) { return L.m * v; }

double tensor_norm_sq(const EndoC& L) { return L.m.squaredNorm(); }

double bivector_norm_sq(const EndoC& L) { return 0.5 * L.m.squaredNorm(); }

cplx endo_inner(const EndoC& A, const EndoC& B) {
  return (A.m.array() * B.m.array().conjugate()).sum();
}

EndoC kaehler_bivector(const FrameConvention& frame) {
  EndoC w{CMatrix::Zero(frame.slots(), frame.slots()), AlgebraTag::u};
  for (int a = 0; a < frame.n(); ++a)
    w.m += kI * wedge_endo(frame, frame.z(a), frame.zbar(a)).m;
  return w;
}

RMatrix to_real_matrix(const FrameConvention& frame, const EndoC& L, double tol) {
  require_same_size(frame, L);
  const CMatrix& E = frame.real_to_slot();
  CMatrix A = E.adjoint() * L.m * E;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if (A.imag().cwiseAbs().maxCoeff() > tol * scale)
    throw NotReal("endomorphism is not the complexification of a real one");
  return A.real();
}

EndoC from_real_matrix(const FrameConvention& frame, const RMatrix& A) {
  if (A.rows() != frame.real_dim() || A.cols() != frame.real_dim())
    throw DimensionMismatch("real matrix size does not match the frame");
  const CMatrix& E = frame.real_to_slot();
  return EndoC{E * A.cast<cplx>() * E.adjoint(), AlgebraTag::gl};
}

}  // namespace calab
