#include "calabi_lab/curvature.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

#include "calabi_lab/errors.hpp"

namespace calab {

namespace {

std::atomic<bool> g_calabi_sign_bug{false};

// out[a,b,c,d] = sum M(i,a) M(j,b) M(k,c) M(l,d) T[i,j,k,l]; one mode at a time.
template <class In>
std::vector<cplx> change_basis(const std::vector<In>& T, const CMatrix& M) {
  const int d = static_cast<int>(M.rows());
  std::vector<cplx> cur(T.begin(), T.end()), next(cur.size());
  for (int mode = 0; mode < 4; ++mode) {
    int stride = 1;
    for (int m = mode + 1; m < 4; ++m) stride *= d;
    const int outer = static_cast<int>(cur.size()) / (stride * d);
    std::fill(next.begin(), next.end(), cplx{0.0});
    for (int o = 0; o < outer; ++o)
      for (int a = 0; a < d; ++a)
        for (int i = 0; i < d; ++i) {
          const cplx m = M(i, a);
          if (m == cplx{0.0}) continue;
          const cplx* src = &cur[(o * d + i) * stride];
          cplx* dst = &next[(o * d + a) * stride];
          for (int r = 0; r < stride; ++r) dst[r] += m * src[r];
        }
    std::swap(cur, next);
  }
  return cur;
}

std::string tuple_str(int i, int j, int k, int l) {
  std::ostringstream os;
  os << "(" << i + 1 << "," << j + 1 << "," << k + 1 << "," << l + 1 << ")";
  return os.str();
}

double beta(int a, int b) { return a == b ? 2.0 : std::sqrt(2.0); }

struct Worst {
  double value = 0.0;
  int i = 0, j = 0, k = 0, l = 0;
  void update(double v, int a, int b, int c, int d) {
    if (v > value) {
      value = v;
      i = a;
      j = b;
      k = c;
      l = d;
    }
  }
};

void check_hermitian(const CMatrix& C, const char* what) {
  if (C.rows() != C.cols()) throw DimensionMismatch(std::string(what) + ": matrix is not square");
  const double scale = std::max(1.0, C.cwiseAbs().maxCoeff());
  if ((C - C.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw NotHermitian(std::string(what) + ": matrix is not Hermitian");
}

}  // namespace

namespace testing {
void set_calabi_sign_bug(bool enabled) { g_calabi_sign_bug.store(enabled); }
bool calabi_sign_bug() { return g_calabi_sign_bug.load(); }
ScopedCalabiSignBug::ScopedCalabiSignBug(bool enabled) : previous_(calabi_sign_bug()) {
  set_calabi_sign_bug(enabled);
}
ScopedCalabiSignBug::~ScopedCalabiSignBug() { set_calabi_sign_bug(previous_); }
}  // namespace testing

cplx AlgebraicCurvatureTensor::eval(const CVector& X, const CVector& Y, const CVector& Z,
                                    const CVector& W) const {
  const int d = dim();
  cplx acc = 0.0;
  for (int s = 0; s < d; ++s) {
    if (X(s) == cplx{0.0}) continue;
    for (int t = 0; t < d; ++t) {
      if (Y(t) == cplx{0.0}) continue;
      for (int u = 0; u < d; ++u) {
        if (Z(u) == cplx{0.0}) continue;
        for (int v = 0; v < d; ++v) acc += X(s) * Y(t) * Z(u) * W(v) * slot(s, t, u, v);
      }
    }
  }
  return acc;
}

double AlgebraicCurvatureTensor::max_abs() const {
  double m = 0.0;
  for (double v : comp_) m = std::max(m, std::abs(v));
  return m;
}

EndoC AlgebraicCurvatureTensor::endo(const CVector& X, const CVector& Y) const {
  // m(s, t) = g(R(X,Y) b_t, b_{s^1}) = R(X, Y, b_t, b_{s^1}).
  const int d = dim();
  EndoC L{CMatrix::Zero(d, d), AlgebraTag::so};
  for (int s = 0; s < d; ++s)
    for (int t = 0; t < d; ++t)
      L.m(s, t) = eval(X, Y, frame_.basis(t), frame_.basis(FrameConvention::partner(s)));
  return L;
}

SymmetryResiduals symmetry_residuals(const FrameConvention& frame, const std::vector<double>& R) {
  const int d = frame.real_dim();
  auto at = [&](int i, int j, int k, int l) { return R[((i * d + j) * d + k) * d + l]; };
  const int n = frame.n();
  // J e_a = e_{a+n}, J e_{a+n} = -e_a.
  auto jidx = [&](int i) { return i < n ? i + n : i - n; };
  auto jsgn = [&](int i) { return i < n ? 1.0 : -1.0; };
  SymmetryResiduals r;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const double v = at(i, j, k, l);
          r.antisym_first = std::max(r.antisym_first, std::abs(v + at(j, i, k, l)));
          r.antisym_second = std::max(r.antisym_second, std::abs(v + at(i, j, l, k)));
          r.pair_exchange = std::max(r.pair_exchange, std::abs(v - at(k, l, i, j)));
          r.bianchi = std::max(r.bianchi, std::abs(v + at(j, k, i, l) + at(k, i, j, l)));
          const double vj = jsgn(i) * jsgn(j) * at(jidx(i), jidx(j), k, l);
          r.kaehler = std::max(r.kaehler, std::abs(v - vj));
        }
  return r;
}

AlgebraicCurvatureTensor validate_tensor(const FrameConvention& frame, std::vector<double> components,
                                         const ValidationOptions& opts) {
  const int d = frame.real_dim();
  const std::size_t expected = static_cast<std::size_t>(d) * d * d * d;
  if (components.size() != expected)
    throw DimensionMismatch("curvature tensor needs " + std::to_string(expected) + " components, got " +
                            std::to_string(components.size()));
  double scale = 1.0;
  for (double v : components) {
    if (!std::isfinite(v)) throw InvalidArgument("curvature component is not finite");
    scale = std::max(scale, std::abs(v));
  }
  const double tol = opts.tol * scale;
  auto at = [&](int i, int j, int k, int l) { return components[((i * d + j) * d + k) * d + l]; };

  Worst w1, w2, w3;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const double v = at(i, j, k, l);
          w1.update(std::abs(v + at(j, i, k, l)), i, j, k, l);
          w2.update(std::abs(v + at(i, j, l, k)), i, j, k, l);
          w3.update(std::abs(v - at(k, l, i, j)), i, j, k, l);
        }
  if (w1.value > tol)
    throw SymmetryViolation("pair symmetry R_ijkl = -R_jikl", tuple_str(w1.i, w1.j, w1.k, w1.l), w1.value);
  if (w2.value > tol)
    throw SymmetryViolation("pair symmetry R_ijkl = -R_ijlk", tuple_str(w2.i, w2.j, w2.k, w2.l), w2.value);
  if (w3.value > tol)
    throw SymmetryViolation("pair symmetry R_ijkl = R_klij", tuple_str(w3.i, w3.j, w3.k, w3.l), w3.value);

  AlgebraicCurvatureTensor R(frame);
  R.res_ = symmetry_residuals(frame, components);
  R.bianchi_ = R.res_.bianchi <= tol;
  R.kaehler_ = R.res_.kaehler <= tol;
  if (opts.require_bianchi && !R.bianchi_)
    throw SymmetryViolation("first Bianchi identity", "(see residuals)", R.res_.bianchi);
  if (opts.require_kaehler && !R.kaehler_)
    throw SymmetryViolation("Kaehler symmetry R(JX,JY,Z,W) = R(X,Y,Z,W)", "(see residuals)", R.res_.kaehler);
  R.slot_ = change_basis(components, frame.slot_to_real());
  R.comp_ = std::move(components);
  return R;
}

std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::R1_on_wedge2: return "R1_on_wedge2";
    case OperatorKind::R2_on_sym2: return "R2_on_sym2";
    case OperatorKind::R1_full: return "R1_full";
    case OperatorKind::R2_full: return "R2_full";
    case OperatorKind::kaehler: return "kaehler";
    case OperatorKind::calabi: return "calabi";
    case OperatorKind::kaehler_su: return "kaehler_su";
  }
  return "unknown";
}

std::vector<std::pair<int, int>> sym2_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) out.emplace_back(a, b);
  return out;
}

int sym2_index(int n, int a, int b) {
  if (a > b) std::swap(a, b);
  // Rows before a hold n + (n-1) + ... + (n-a+1) entries.
  return a * n - a * (a - 1) / 2 + (b - a);
}

EndoC sym2_basis_element(const FrameConvention& frame, int a, int b) {
  EndoC L;
  if (a == b) {
    L = tensor_endo(frame, frame.z(a), frame.z(a));
  } else {
    L.m = (tensor_endo(frame, frame.z(a), frame.z(b)).m + tensor_endo(frame, frame.z(b), frame.z(a)).m) /
          std::sqrt(2.0);
  }
  L.tag = AlgebraTag::sym2_10;
  return L;
}

namespace {
std::vector<std::string> sym2_labels(int n) {
  std::vector<std::string> out;
  for (auto [a, b] : sym2_pairs(n)) {
    std::ostringstream os;
    if (a == b)
      os << "Z" << a + 1 << "(x)Z" << a + 1;
    else
      os << "Z" << a + 1 << "(.)Z" << b + 1 << "/sqrt2";
    out.push_back(os.str());
  }
  return out;
}
}  // namespace

CurvatureOperatorMatrix calabi_from_tensor(const AlgebraicCurvatureTensor& R) {
  if (!R.kaehler_validated()) throw NotKaehler("Calabi operator needs a Kaehler curvature tensor");
  const int n = R.n();
  const auto pairs = sym2_pairs(n);
  const int m = static_cast<int>(pairs.size());
  CMatrix H(m, m);
  for (int nu = 0; nu < m; ++nu) {
    const auto [a, b] = pairs[nu];
    for (int mu = 0; mu < m; ++mu) {
      const auto [c, d] = pairs[mu];
      const cplx r = R.slot(FrameConvention::z_slot(a), FrameConvention::zbar_slot(c),
                            FrameConvention::zbar_slot(d), FrameConvention::z_slot(b));
      H(mu, nu) = 4.0 * r / (beta(a, b) * beta(c, d));
    }
  }
  if (testing::calabi_sign_bug()) H = -H;
  return CurvatureOperatorMatrix{OperatorKind::calabi, "sym2_10_unitary", sym2_labels(n), H};
}

AlgebraicCurvatureTensor tensor_from_calabi(const FrameConvention& frame, const CMatrix& C) {
  const int n = frame.n();
  const int m = n * (n + 1) / 2;
  if (C.rows() != m || C.cols() != m)
    throw DimensionMismatch("Calabi matrix must be " + std::to_string(m) + "x" + std::to_string(m));
  check_hermitian(C, "tensor_from_calabi");
  const int d = 2 * n;
  std::vector<cplx> S(static_cast<std::size_t>(d) * d * d * d, 0.0);
  auto at = [&](int s, int t, int u, int v) -> cplx& { return S[((s * d + t) * d + u) * d + v]; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int dd = 0; dd < n; ++dd) {
          // 4 R(Z_a, conj Z_c, conj Z_d, Z_b) = beta_ab beta_cd C[(cd),(ab)].
          const cplx Q = beta(a, b) * beta(c, dd) * C(sym2_index(n, c, dd), sym2_index(n, a, b));
          const cplx r = -Q / 4.0;  // R(Z_a, conj Z_c, Z_b, conj Z_d)
          const int A = FrameConvention::z_slot(a), Cb = FrameConvention::zbar_slot(c);
          const int B = FrameConvention::z_slot(b), Db = FrameConvention::zbar_slot(dd);
          at(A, Cb, B, Db) += r;
          at(Cb, A, B, Db) -= r;
          at(A, Cb, Db, B) -= r;
          at(Cb, A, Db, B) += r;
        }
  const auto real = change_basis(S, frame.real_to_slot());
  std::vector<double> comp(real.size());
  double imag = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < real.size(); ++i) {
    comp[i] = real[i].real();
    imag = std::max(imag, std::abs(real[i].imag()));
    scale = std::max(scale, std::abs(real[i].real()));
  }
  if (imag > 1e-10 * scale) throw NotHermitian("tensor_from_calabi produced a non-real tensor");
  return validate_tensor(frame, std::move(comp));
}

CurvatureOperatorMatrix kaehler_operator(const AlgebraicCurvatureTensor& R) {
  if (!R.kaehler_validated()) throw NotKaehler("Kaehler operator needs a Kaehler curvature tensor");
  const int n = R.n();
  CMatrix K(n * n, n * n);
  std::vector<std::string> labels;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      labels.push_back("Z" + std::to_string(a + 1) + "^conjZ" + std::to_string(b + 1) + "/sqrt2");
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          K(c * n + d, a * n + b) = -R.slot(FrameConvention::z_slot(a), FrameConvention::zbar_slot(b),
                                            FrameConvention::z_slot(d), FrameConvention::zbar_slot(c));
    }
  return CurvatureOperatorMatrix{OperatorKind::kaehler, "wedge11_unitary", labels, K};
}

CMatrix su_basis_coefficients(int n) {
  CMatrix U = CMatrix::Zero(n * n, n * n - 1);
  int col = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) U(a * n + b, col++) = 1.0;
  for (int j = 1; j < n; ++j) {
    const double f = 1.0 / std::sqrt(static_cast<double>(j * (j + 1)));
    for (int a = 0; a < j; ++a) U(a * n + a, col) = f;
    U(j * n + j, col) = -j * f;
    ++col;
  }
  return U;
}

CurvatureOperatorMatrix restrict_su(const CurvatureOperatorMatrix& K, const RicciData& ric) {
  if (K.kind != OperatorKind::kaehler) throw InvalidArgument("restrict_su expects the Kaehler operator");
  if (!ric.einstein_lambda) throw NotEinstein("restriction to su(n) needs an Einstein tensor");
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(K.entries.rows()))));
  if (n * n != K.entries.rows()) throw DimensionMismatch("Kaehler operator has non-square dimension");
  CVector w = CVector::Zero(n * n);
  for (int a = 0; a < n; ++a) w(a * n + a) = 1.0 / std::sqrt(static_cast<double>(n));
  const double lambda = *ric.einstein_lambda;
  const double scale = std::max(1.0, K.entries.cwiseAbs().maxCoeff());
  if ((K.entries * w - lambda * w).norm() > 1e-9 * scale)
    throw NotEinstein("omega_K is not an eigenvector with eigenvalue lambda");
  const CMatrix U = su_basis_coefficients(n);
  std::vector<std::string> labels;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) labels.push_back("Z" + std::to_string(a + 1) + "^conjZ" + std::to_string(b + 1) + "/sqrt2");
  for (int j = 1; j < n; ++j) labels.push_back("traceless_diagonal_" + std::to_string(j));
  return CurvatureOperatorMatrix{OperatorKind::kaehler_su, "su_unitary", labels, U.adjoint() * K.entries * U};
}

R1R2 r1_r2_operators(const AlgebraicCurvatureTensor& R) {
  const int d = R.dim();
  const int D = d * d;
  R1R2 out;
  out.r1_full = RMatrix(D, D);
  out.r2_full = RMatrix(D, D);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          out.r1_full(k * d + l, i * d + j) = R(i, j, k, l);
          out.r2_full(k * d + l, i * d + j) = R(i, k, l, j);
        }
  const double r2 = 1.0 / std::sqrt(2.0);
  RMatrix W = RMatrix::Zero(D, d * (d - 1) / 2);
  RMatrix S = RMatrix::Zero(D, d * (d + 1) / 2);
  std::vector<std::string> wl, sl;
  int cw = 0, cs = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      const std::string ij = std::to_string(i + 1) + "," + std::to_string(j + 1);
      if (i == j) {
        S(i * d + i, cs++) = 1.0;
        sl.push_back("e" + std::to_string(i + 1) + "(x)e" + std::to_string(i + 1));
        continue;
      }
      W(i * d + j, cw) = r2;
      W(j * d + i, cw++) = -r2;
      wl.push_back("e^e(" + ij + ")/sqrt2");
      S(i * d + j, cs) = r2;
      S(j * d + i, cs++) = r2;
      sl.push_back("e(.)e(" + ij + ")/sqrt2");
    }
  out.r1_wedge2 = {OperatorKind::R1_on_wedge2, "wedge2_real_orthonormal", wl,
                   (W.transpose() * out.r1_full * W).cast<cplx>()};
  out.r2_sym2 = {OperatorKind::R2_on_sym2, "sym2_real_orthonormal", sl,
                 (S.transpose() * out.r2_full * S).cast<cplx>()};

  // R^2 on the (1,0) symmetric square: g(R^2(b_s (x) b_t), b_x (x) b_y) = R(b_s, b_x, b_y, b_t).
  const int n = R.n();
  const auto pairs = sym2_pairs(n);
  const int m = static_cast<int>(pairs.size());
  auto coeffs = [&](int a, int b) {
    std::vector<std::tuple<int, int, double>> c;
    const int A = FrameConvention::z_slot(a), B = FrameConvention::z_slot(b);
    if (a == b)
      c.emplace_back(A, A, 1.0);
    else {
      c.emplace_back(A, B, r2);
      c.emplace_back(B, A, r2);
    }
    return c;
  };
  CMatrix H(m, m);
  for (int nu = 0; nu < m; ++nu)
    for (int mu = 0; mu < m; ++mu) {
      cplx acc = 0.0;
      for (auto [s, t, cv] : coeffs(pairs[nu].first, pairs[nu].second))
        for (auto [u, v, cu] : coeffs(pairs[mu].first, pairs[mu].second))
          acc += cv * cu * R.slot(s, FrameConvention::partner(u), FrameConvention::partner(v), t);
      H(mu, nu) = acc;
    }
  out.r2_sym2_10 = {OperatorKind::R2_on_sym2, "sym2_10_unitary", sym2_labels(n), H};
  return out;
}

RicciData ricci(const AlgebraicCurvatureTensor& R, double tol) {
  const int d = R.dim();
  RicciData out;
  out.ricci = RMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += R(k, i, k, j);
      out.ricci(i, j) = acc;
    }
  out.scal = out.ricci.trace();
  const double lambda = out.scal / d;
  out.einstein_residual = (out.ricci - lambda * RMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, out.ricci.cwiseAbs().maxCoeff());
  if (out.einstein_residual <= tol * scale) out.einstein_lambda = lambda;
  return out;
}

CMatrix ricci_from_calabi(int n, const CMatrix& C) {
  CMatrix ric = CMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      cplx acc = 0.0;
      for (int c = 0; c < n; ++c) acc += beta(a, c) * beta(c, b) * C(sym2_index(n, c, b), sym2_index(n, a, c));
      ric(a, b) = acc / 4.0;
    }
  return ric;
}

}  // namespace calab
