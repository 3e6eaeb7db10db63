#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "calabi_lab/frame.hpp"

namespace calab {

// A generator of the exterior algebra is a bitmask over the 2n slots. Sorting
// slots ascending reproduces the interleaved ordering of a multi-index (an
// unbarred index precedes the barred copy of the same index), so no extra
// reordering sign is needed.
using Mask = std::uint32_t;

int unbarred_count(Mask m);
int barred_count(Mask m);
std::vector<int> slots_of(Mask m);

// Sorted 0-based index sets: I for Z^i factors, J for conj(Z)^j factors.
struct MultiIndexK {
  std::vector<int> I;
  std::vector<int> J;
};

Mask mask_of(const MultiIndexK& K);
MultiIndexK multi_index_of(Mask m);
std::string to_string(const MultiIndexK& K);

// All degree-k masks in combinatorial order, shared per (n, k).
struct FormLayout {
  int n = 0;
  int k = 0;
  std::vector<Mask> masks;
  std::vector<std::int32_t> rank;  // indexed by mask, -1 when popcount != k
};
std::shared_ptr<const FormLayout> form_layout(int n, int k);

// A complex k-form on V^C, stored by its coefficients on unit-norm generators
// Z^K = (wedge monomial)/sqrt(k!). With this choice |phi|^2 = sum |phi_K|^2
// and phi(b_{s_1}, ..., b_{s_k}) = phi_K / sqrt(k!) for sorted slots.
class Form {
 public:
  Form(const FrameConvention& frame, int degree);

  static Form generator(const FrameConvention& frame, const MultiIndexK& K, cplx c = 1.0);
  static Form from_mask(const FrameConvention& frame, int degree, Mask m, cplx c = 1.0);

  const FrameConvention& frame() const { return frame_; }
  int n() const { return frame_.n(); }
  int degree() const { return layout_->k; }
  std::size_t dim() const { return layout_->masks.size(); }
  const FormLayout& layout() const { return *layout_; }

  Mask mask(std::size_t r) const { return layout_->masks[r]; }
  std::int32_t rank(Mask m) const { return layout_->rank[m]; }
  cplx coeff(Mask m) const;
  void set(Mask m, cplx v);
  void add(Mask m, cplx v);

  const CVector& coefficients() const { return c_; }
  CVector& coefficients() { return c_; }

  double norm_sq() const { return c_.squaredNorm(); }
  double norm() const { return c_.norm(); }
  // Hermitian inner product sum phi_K conj(eta_K), equal to g(phi, conj eta).
  cplx inner(const Form& other) const;

  Form conj() const;
  Form bidegree_part(int p, int q) const;
  // The unique (p, q) carrying nonzero coefficients above tol, if any.
  std::optional<std::pair<int, int>> pure_bidegree(double tol = 0.0) const;
  bool is_real(double tol) const;

  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  Form& operator*=(cplx s);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(cplx s, Form a) { return a *= s; }

 private:
  void require_compatible(const Form& o) const;

  FrameConvention frame_;
  std::shared_ptr<const FormLayout> layout_;
  CVector c_;
};

// Conjugation-invariant form, typically phi + conj(phi) for a (p, q)-form phi.
class RealForm {
 public:
  static RealForm from_component(const Form& phi);
  static RealForm from_real(const Form& psi, double tol = 1e-12);

  const Form& form() const { return psi_; }
  double norm_sq() const { return psi_.norm_sq(); }
  // Bidegree (p, q) of the generating component when known, with p >= q.
  std::optional<std::pair<int, int>> bidegree() const { return bidegree_; }

 private:
  explicit RealForm(Form psi) : psi_(std::move(psi)) {}
  Form psi_;
  std::optional<std::pair<int, int>> bidegree_;
};

// Alternating evaluation on arbitrary vectors (slot coordinates).
cplx evaluate_form(const Form& phi, const std::vector<CVector>& args);

// Derivation action (L phi)(x_1..x_k) = -sum_i phi(.., L x_i, ..).
Form endo_act(const EndoC& L, const Form& phi);

// Interior product iota_X phi = phi(X, ...).
Form insert(const CVector& X, const Form& phi);

// Lambda phi = -i k(k-1) sum_a phi(Z_a, conj Z_a, ...); zero form when k < 2.
Form lefschetz_adjoint(const Form& phi);

// Orthogonal projection onto ker Lambda, computed bidegree by bidegree.
Form project_primitive(const Form& phi);

// The Kaehler form omega(X, Y) = g(JX, Y) as a (1,1)-form.
Form kaehler_form(const FrameConvention& frame);

// alpha_1 ^ ... ^ alpha_k for covectors given by their values on the slot basis.
Form decomposable(const FrameConvention& frame, const std::vector<CVector>& covectors);

}  // namespace calab
