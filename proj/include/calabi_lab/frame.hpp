#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace calab {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline const cplx kI{0.0, 1.0};

// Index conventions for V = R^{2n} with complex structure J.
//
// Real frame: e_0..e_{2n-1} (0-based) with J e_a = e_{a+n}.
// Unitary frame: Z_a = (e_a - i J e_a)/sqrt(2).
// Slot basis of V^C: slot 2a is Z_a, slot 2a+1 is conj(Z_a). The complex
// bilinear metric pairs slot s with slot s^1 and nothing else, and the slot
// basis is orthonormal for h(u, v) = g(u, conj v). Vectors are column vectors
// of slot coordinates.
class FrameConvention {
 public:
  explicit FrameConvention(int n);

  int n() const { return n_; }
  int real_dim() const { return 2 * n_; }
  int slots() const { return 2 * n_; }

  static int z_slot(int a) { return 2 * a; }
  static int zbar_slot(int a) { return 2 * a + 1; }
  static int partner(int s) { return s ^ 1; }
  static bool is_barred(int s) { return (s & 1) != 0; }

  CVector basis(int s) const;
  CVector z(int a) const { return basis(z_slot(a)); }
  CVector zbar(int a) const { return basis(zbar_slot(a)); }
  CVector e(int i) const { return real_to_slot_.col(i); }

  cplx g(const CVector& u, const CVector& v) const;
  cplx h(const CVector& u, const CVector& v) const { return g(u, conj(v)); }
  CVector conj(const CVector& v) const;

  // Column i holds e_i in slot coordinates. The matrix is unitary.
  const CMatrix& real_to_slot() const { return real_to_slot_; }
  // Column s holds b_s in real coordinates.
  const CMatrix& slot_to_real() const { return slot_to_real_; }
  // J as a real matrix on the real frame.
  RMatrix complex_structure() const;

  bool operator==(const FrameConvention& o) const { return n_ == o.n_; }

 private:
  int n_;
  CMatrix real_to_slot_;
  CMatrix slot_to_real_;
};

enum class AlgebraTag { none, gl, sym2_10, wedge2_10, so, sym2, u, su };
std::string to_string(AlgebraTag tag);

// Complex-linear endomorphism of V^C: L b_t = sum_s m(s, t) b_s.
struct EndoC {
  CMatrix m;
  AlgebraTag tag = AlgebraTag::none;
};

void require_same_size(const FrameConvention& frame, const EndoC& L);

// (v (x) w)(z) = g(v, z) w, the identification of V (x) V with End(V).
EndoC tensor_endo(const FrameConvention& frame, const CVector& v, const CVector& w);
EndoC wedge_endo(const FrameConvention& frame, const CVector& v, const CVector& w);
EndoC sym_endo(const FrameConvention& frame, const CVector& v, const CVector& w);

EndoC conj(const FrameConvention& frame, const EndoC& L);
CVector apply(const EndoC& L, const CVector& v);

// Tensor norm |L|^2 (sum of squared moduli of all components).
double tensor_norm_sq(const EndoC& L);
// Norm in which e_i ^ e_j is a unit bivector: half the tensor norm.
double bivector_norm_sq(const EndoC& L);
// Hermitian inner product <A, B> = sum A_st conj(B_st).
cplx endo_inner(const EndoC& A, const EndoC& B);

// omega_K = i sum_a Z_a ^ conj(Z_a); equals -J and has bivector norm n.
EndoC kaehler_bivector(const FrameConvention& frame);

// Endomorphism expressed in the real frame; throws NotReal if it has no real form.
RMatrix to_real_matrix(const FrameConvention& frame, const EndoC& L, double tol = 1e-12);
EndoC from_real_matrix(const FrameConvention& frame, const RMatrix& A);

}  // namespace calab
