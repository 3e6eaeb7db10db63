#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "calabi_lab/curvature.hpp"
#include "calabi_lab/forms.hpp"
#include "calabi_lab/spectral.hpp"

namespace calab {

// Complex bilinear extension of the metric to forms: g(a, b) = <a, conj b>.
cplx form_g(const Form& a, const Form& b);

// Ric_L(phi)(x_1..x_k) = sum_i sum_j (R(x_i, e_j) phi)(x_1, .., e_j, .., x_k),
// summed literally over the real frame e_j.
Form ricl_bruteforce(const AlgebraicCurvatureTensor& R, const Form& phi);
// g(Ric_L psi, psi) for a real form.
double ricl_pairing(const AlgebraicCurvatureTensor& R, const RealForm& psi);

// 2 sum_nu sigma_nu |Sigma_nu psi|^2 with Sigma_nu the Calabi eigenvectors.
double ricl_via_calabi(const Spectrum& calabi, const RealForm& psi);

// Orthonormal basis of an algebra acting on V^C. gl, so, sym2, sym2_10 and
// wedge2_10 use the tensor norm; u and su use the bivector norm (half the
// tensor norm), in which omega_K has squared norm n.
std::vector<EndoC> unitary_basis(const FrameConvention& frame, AlgebraTag tag);

struct PhiG {
  AlgebraTag tag = AlgebraTag::none;
  std::vector<EndoC> basis;
  std::vector<Form> images;  // Xi_alpha phi
  double norm_sq() const;
};
PhiG phi_g(const Form& phi, AlgebraTag tag);
PhiG phi_g(const Form& phi, AlgebraTag tag, const std::vector<EndoC>& basis);
double norm_phi_g(const PhiG& pg);

// sum_{alpha,beta} H(beta, alpha) <Xi_alpha phi, Xi_beta phi> for an operator
// matrix H written in the same basis as pg.
double operator_pairing(const PhiG& pg, const CMatrix& H);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs|
  double relative() const;
};

// g(R^2(phi^gl), phi^gl) versus -(p(p-1)/2) sum R_ijkl phi_ijI phi_klI; phi a real p-form.
IdentityCheck check_r2_gl_identity(const AlgebraicCurvatureTensor& R, const Form& phi);

struct SplitCheck {
  IdentityCheck split;   // (3/2) g(Ric_L phi, phi) = g(R^2(phi^S2), phi^S2) + p sum R_ij phi_iI phi_jI
  IdentityCheck remark;  // g(R^1(phi^so), phi^so) = g(Ric_L phi, phi)
};
SplitCheck check_ricl_r2_split(const AlgebraicCurvatureTensor& R, const Form& phi);

// Throws NotSymmetric unless S maps V^{0,1} to V^{1,0} with a symmetric matrix.
CMatrix sym2_coefficients(const FrameConvention& frame, const EndoC& S, double tol = 1e-12);

double estimate_constant(int p, int q);  // 1/2 + min(p, q, sqrt(pq)/2)

struct EstimateResult {
  int p = 0, q = 0;
  double lhs = 0.0;    // |S psi|^2
  double bound = 0.0;  // estimate_constant |S|^2 |psi|^2
  bool holds = false;  // lhs <= bound + 1e-10 scale
  // Primitive inputs only: the same bound phrased through |psi^{sym2_10}|^2.
  std::optional<double> sym_norm_sq;
  std::optional<double> sym_factor;  // (2 + 4 min) / ((p+q)(n+1) - 2pq)
  std::optional<double> sym_bound;   // sym_factor |S|^2 |psi^{sym2_10}|^2
};
EstimateResult estimate_bound(const EndoC& S, const RealForm& psi, bool primitive = false);

struct AchievabilityFamily {
  EndoC S;
  RealForm psi;
};
// S = sum_{a <= p+q} Z_a (x) Z_a and psi = Re(sum_K Z^K) over complementary I, J
// partitioning {1..p+q}.
AchievabilityFamily achievability_family(const FrameConvention& frame, int p, int q);

struct NormalForm {
  CMatrix frame;             // column a holds Z'_a in the Z basis
  std::vector<double> rho;   // nonnegative, descending
  double residual = 0.0;     // max |s - U diag(rho) U^T|
};
// Autonne-Takagi factorization s = U diag(rho) U^T of the symmetric coefficient matrix.
NormalForm normal_form(const FrameConvention& frame, const EndoC& S);

struct StressOptions {
  int iterations = 500;
  double step = 0.05;
  int restarts = 16;
  std::uint64_t seed = 0;
};
struct StressResult {
  double best_ratio = 0.0;  // max |S psi|^2 / (|S|^2 |psi|^2) found
  double conjectured = 0.0; // 1/2 + pq/(p+q)
  double proven = 0.0;      // estimate_constant(p, q)
};
// Projected-gradient ascent over (S, psi) on the unit spheres.
StressResult stress_search(const FrameConvention& frame, int p, int q, const StressOptions& opts = {});

}  // namespace calab
