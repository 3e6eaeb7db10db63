#pragma once

#include <optional>
#include <string>
#include <vector>

#include "calabi_lab/frame.hpp"

namespace calab {

struct SymmetryResiduals {
  double antisym_first = 0.0;   // R_ijkl + R_jikl
  double antisym_second = 0.0;  // R_ijkl + R_ijlk
  double pair_exchange = 0.0;   // R_ijkl - R_klij
  double bianchi = 0.0;         // R_ijkl + R_jkil + R_kijl
  double kaehler = 0.0;         // R(X,Y,Z,W) - R(JX,JY,Z,W)
};

struct ValidationOptions {
  double tol = 1e-10;  // relative to max(1, max |R_ijkl|)
  bool require_bianchi = false;
  bool require_kaehler = false;
};

// Real algebraic curvature tensor on R^{2n}. Sign convention: R(X,Y,X,Y) is
// the sectional curvature, so the round sphere has R_ijkl = g_ik g_jl - g_il g_jk.
class AlgebraicCurvatureTensor {
 public:
  const FrameConvention& frame() const { return frame_; }
  int n() const { return frame_.n(); }
  int dim() const { return frame_.real_dim(); }

  double operator()(int i, int j, int k, int l) const { return comp_[index(i, j, k, l)]; }
  const std::vector<double>& components() const { return comp_; }
  // Complex-multilinear extension on the slot basis.
  cplx slot(int s, int t, int u, int v) const { return slot_[index(s, t, u, v)]; }
  cplx eval(const CVector& X, const CVector& Y, const CVector& Z, const CVector& W) const;

  bool bianchi_validated() const { return bianchi_; }
  bool kaehler_validated() const { return kaehler_; }
  const SymmetryResiduals& residuals() const { return res_; }
  double max_abs() const;

  // R(X, Y) as an endomorphism: g(R(X,Y)Z, W) = R(X, Y, Z, W).
  EndoC endo(const CVector& X, const CVector& Y) const;

  int index(int i, int j, int k, int l) const { return ((i * dim() + j) * dim() + k) * dim() + l; }

 private:
  friend AlgebraicCurvatureTensor validate_tensor(const FrameConvention&, std::vector<double>,
                                                  const ValidationOptions&);
  explicit AlgebraicCurvatureTensor(const FrameConvention& f) : frame_(f) {}

  FrameConvention frame_;
  std::vector<double> comp_;
  std::vector<cplx> slot_;
  bool bianchi_ = false;
  bool kaehler_ = false;
  SymmetryResiduals res_;
};

// Checks the pair symmetries (throwing SymmetryViolation when they fail) and
// records whether Bianchi and J-invariance hold.
AlgebraicCurvatureTensor validate_tensor(const FrameConvention& frame, std::vector<double> components,
                                         const ValidationOptions& opts = {});

SymmetryResiduals symmetry_residuals(const FrameConvention& frame, const std::vector<double>& comp);

enum class OperatorKind { R1_on_wedge2, R2_on_sym2, R1_full, R2_full, kaehler, calabi, kaehler_su };
std::string to_string(OperatorKind k);

// H(mu, nu) = g(Op(B_nu), conj(B_mu)) in a recorded orthonormal basis.
struct CurvatureOperatorMatrix {
  OperatorKind kind;
  std::string basis;
  std::vector<std::string> basis_labels;
  CMatrix entries;
};

// Pairs (a, b) with a <= b in the order used for the symmetric-square basis.
std::vector<std::pair<int, int>> sym2_pairs(int n);
int sym2_index(int n, int a, int b);
// Z_a (.) Z_b / sqrt 2 for a < b, Z_a (x) Z_a for a == b; unit tensor norm.
EndoC sym2_basis_element(const FrameConvention& frame, int a, int b);

CurvatureOperatorMatrix calabi_from_tensor(const AlgebraicCurvatureTensor& R);
AlgebraicCurvatureTensor tensor_from_calabi(const FrameConvention& frame, const CMatrix& C);

// Basis Z_a ^ conj(Z_b) / sqrt 2, ordered (a, b) row-major.
CurvatureOperatorMatrix kaehler_operator(const AlgebraicCurvatureTensor& R);
struct RicciData;
CurvatureOperatorMatrix restrict_su(const CurvatureOperatorMatrix& K, const RicciData& ric);
// Coefficients (in the Z_a ^ conj Z_b / sqrt 2 basis) of an orthonormal basis of su(n);
// columns. The first n(n-1) are off-diagonal pairs, the rest traceless diagonals.
CMatrix su_basis_coefficients(int n);

struct R1R2 {
  RMatrix r1_full;  // on V (x) V, basis e_i (x) e_j, index i*2n + j
  RMatrix r2_full;
  CurvatureOperatorMatrix r1_wedge2;  // basis e_i ^ e_j / sqrt 2, i < j
  CurvatureOperatorMatrix r2_sym2;    // basis e_i (.) e_j / sqrt 2 (i < j), e_i (x) e_i
  CurvatureOperatorMatrix r2_sym2_10; // R^2 restricted to the (1,0) symmetric square
};
R1R2 r1_r2_operators(const AlgebraicCurvatureTensor& R);

struct RicciData {
  RMatrix ricci;
  double scal = 0.0;
  std::optional<double> einstein_lambda;
  double einstein_residual = 0.0;
};
RicciData ricci(const AlgebraicCurvatureTensor& R, double tol = 1e-10);

// Ric(Z_a, conj Z_b) read off a Calabi matrix, an n x n Hermitian matrix.
CMatrix ricci_from_calabi(int n, const CMatrix& C);

// Test hook: when enabled, calabi_from_tensor returns a sign-flipped matrix.
namespace testing {
void set_calabi_sign_bug(bool enabled);
bool calabi_sign_bug();
class ScopedCalabiSignBug {
 public:
  explicit ScopedCalabiSignBug(bool enabled = true);
  ~ScopedCalabiSignBug();
  ScopedCalabiSignBug(const ScopedCalabiSignBug&) = delete;
  ScopedCalabiSignBug& operator=(const ScopedCalabiSignBug&) = delete;

 private:
  bool previous_;
};
}  // namespace testing

}  // namespace calab
