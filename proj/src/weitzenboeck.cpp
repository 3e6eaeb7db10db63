#include "calabi_lab/weitzenboeck.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "calabi_lab/errors.hpp"
#include "calabi_lab/random.hpp"

namespace calab {

namespace {

int parity_sign(int count) { return (count & 1) ? -1 : 1; }

Mask between(int a, int b) {
  if (a > b) std::swap(a, b);
  if (b - a < 2) return 0;
  return ((Mask{1} << b) - 1) & ~((Mask{1} << (a + 1)) - 1);
}

void require_real(const Form& phi, const char* what) {
  if (!phi.is_real(1e-10)) throw NotReal(std::string(what) + ": form must be real");
}

}  // namespace

cplx form_g(const Form& a, const Form& b) { return a.inner(b.conj()); }

Form ricl_bruteforce(const AlgebraicCurvatureTensor& R, const Form& phi) {
  const auto& frame = phi.frame();
  if (!(R.frame() == frame)) throw DimensionMismatch("tensor and form live on different frames");
  const int d = frame.slots();
  const int k = phi.degree();
  Form out(frame, k);
  if (k == 0) return out;
  const CMatrix& E = frame.real_to_slot();

  // eta[u * d + j] = R(b_u, e_j) phi
  std::vector<Form> eta;
  eta.reserve(static_cast<std::size_t>(d) * d);
  for (int u = 0; u < d; ++u)
    for (int j = 0; j < d; ++j) {
      EndoC L{CMatrix::Zero(d, d), AlgebraTag::so};
      for (int s = 0; s < d; ++s)
        for (int t = 0; t < d; ++t) {
          cplx acc = 0.0;
          for (int v = 0; v < d; ++v)
            if (E(v, j) != cplx{0.0}) acc += E(v, j) * R.slot(u, v, t, FrameConvention::partner(s));
          L.m(s, t) = acc;
        }
      eta.push_back(endo_act(L, phi));
    }

  // Slot values of e_j: E(s, j), nonzero for two slots.
  std::vector<std::vector<std::pair<int, cplx>>> ej(d);
  for (int j = 0; j < d; ++j)
    for (int s = 0; s < d; ++s)
      if (E(s, j) != cplx{0.0}) ej[j].emplace_back(s, E(s, j));

  for (std::size_t r = 0; r < out.dim(); ++r) {
    const Mask S = out.mask(r);
    cplx acc = 0.0;
    Mask rest = S;
    while (rest) {
      const int t = std::countr_zero(rest);
      rest &= rest - 1;
      for (int j = 0; j < d; ++j) {
        const Form& e = eta[static_cast<std::size_t>(t * d + j)];
        for (const auto& [s, c] : ej[j]) {
          if (s != t && (S & (Mask{1} << s))) continue;
          const Mask T = s == t ? S : ((S & ~(Mask{1} << t)) | (Mask{1} << s));
          const int sign = s == t ? 1 : parity_sign(std::popcount(S & between(s, t)));
          acc += c * static_cast<double>(sign) * e.coefficients()(e.rank(T));
        }
      }
    }
    out.coefficients()(r) = acc;
  }
  return out;
}

double ricl_pairing(const AlgebraicCurvatureTensor& R, const RealForm& psi) {
  return form_g(ricl_bruteforce(R, psi.form()), psi.form()).real();
}

double ricl_via_calabi(const Spectrum& calabi, const RealForm& psi) {
  const auto& frame = psi.form().frame();
  const int n = frame.n();
  const auto m = static_cast<Eigen::Index>(n * (n + 1) / 2);
  if (!calabi.eigenvectors) throw InvalidArgument("ricl_via_calabi needs eigenvectors");
  const CMatrix& V = *calabi.eigenvectors;
  if (V.rows() != m || V.cols() != m) throw DimensionMismatch("Calabi spectrum has the wrong dimension");
  if ((V.adjoint() * V - CMatrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10)
    throw InvalidArgument("Calabi eigenbasis is not unitary");
  const auto pairs = sym2_pairs(n);
  std::vector<EndoC> B;
  for (auto [a, b] : pairs) B.push_back(sym2_basis_element(frame, a, b));
  double total = 0.0;
  for (Eigen::Index nu = 0; nu < m; ++nu) {
    EndoC Sig{CMatrix::Zero(frame.slots(), frame.slots()), AlgebraTag::sym2_10};
    for (Eigen::Index mu = 0; mu < m; ++mu) Sig.m += V(mu, nu) * B[static_cast<std::size_t>(mu)].m;
    total += calabi.eigenvalues[static_cast<std::size_t>(nu)] * endo_act(Sig, psi.form()).norm_sq();
  }
  return 2.0 * total;
}

std::vector<EndoC> unitary_basis(const FrameConvention& frame, AlgebraTag tag) {
  const int n = frame.n();
  const int d = frame.real_dim();
  const double r2 = 1.0 / std::sqrt(2.0);
  std::vector<EndoC> out;
  auto with_tag = [&](CMatrix m) { out.push_back(EndoC{std::move(m), tag}); };
  switch (tag) {
    case AlgebraTag::gl:
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) with_tag(tensor_endo(frame, frame.e(i), frame.e(j)).m);
      break;
    case AlgebraTag::so:
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) with_tag(r2 * wedge_endo(frame, frame.e(i), frame.e(j)).m);
      break;
    case AlgebraTag::sym2:
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
          if (i == j)
            with_tag(tensor_endo(frame, frame.e(i), frame.e(i)).m);
          else
            with_tag(r2 * sym_endo(frame, frame.e(i), frame.e(j)).m);
        }
      break;
    case AlgebraTag::sym2_10:
      for (auto [a, b] : sym2_pairs(n)) with_tag(sym2_basis_element(frame, a, b).m);
      break;
    case AlgebraTag::wedge2_10:
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) with_tag(r2 * wedge_endo(frame, frame.z(a), frame.z(b)).m);
      break;
    case AlgebraTag::u:
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) with_tag(wedge_endo(frame, frame.z(a), frame.zbar(b)).m);
      break;
    case AlgebraTag::su: {
      const CMatrix U = su_basis_coefficients(n);
      for (Eigen::Index c = 0; c < U.cols(); ++c) {
        CMatrix m = CMatrix::Zero(d, d);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            if (U(a * n + b, c) != cplx{0.0}) m += U(a * n + b, c) * wedge_endo(frame, frame.z(a), frame.zbar(b)).m;
        with_tag(std::move(m));
      }
      break;
    }
    case AlgebraTag::none:
      throw InvalidArgument("no basis for an untagged algebra");
  }
  return out;
}

double PhiG::norm_sq() const {
  double acc = 0.0;
  for (const auto& f : images) acc += f.norm_sq();
  return acc;
}

PhiG phi_g(const Form& phi, AlgebraTag tag) { return phi_g(phi, tag, unitary_basis(phi.frame(), tag)); }

PhiG phi_g(const Form& phi, AlgebraTag tag, const std::vector<EndoC>& basis) {
  PhiG pg;
  pg.tag = tag;
  pg.basis = basis;
  pg.images.reserve(basis.size());
  for (const auto& L : basis) pg.images.push_back(endo_act(L, phi));
  return pg;
}

double norm_phi_g(const PhiG& pg) { return pg.norm_sq(); }

double operator_pairing(const PhiG& pg, const CMatrix& H) {
  const auto m = static_cast<Eigen::Index>(pg.images.size());
  if (H.rows() != m || H.cols() != m) throw DimensionMismatch("operator and basis sizes differ");
  cplx acc = 0.0;
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) {
      if (H(b, a) == cplx{0.0}) continue;
      acc += H(b, a) * pg.images[static_cast<std::size_t>(a)].inner(pg.images[static_cast<std::size_t>(b)]);
    }
  return acc.real();
}

double IdentityCheck::relative() const { return residual / std::max(1.0, std::max(std::abs(lhs), std::abs(rhs))); }

IdentityCheck check_r2_gl_identity(const AlgebraicCurvatureTensor& R, const Form& phi) {
  require_real(phi, "check_r2_gl_identity");
  const auto& frame = phi.frame();
  const int d = frame.real_dim();
  const int p = phi.degree();
  IdentityCheck out;
  const R1R2 ops = r1_r2_operators(R);
  out.lhs = operator_pairing(phi_g(phi, AlgebraTag::gl), ops.r2_full.cast<cplx>());
  if (p >= 2) {
    std::vector<Form> A;  // A[i*d+j] = phi(e_i, e_j, ...)
    for (int i = 0; i < d; ++i) {
      Form ii = insert(frame.e(i), phi);
      for (int j = 0; j < d; ++j) A.push_back(insert(frame.e(j), ii));
    }
    double acc = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            const double r = R(i, j, k, l);
            if (r == 0.0) continue;
            acc += r * A[static_cast<std::size_t>(i * d + j)].inner(A[static_cast<std::size_t>(k * d + l)]).real();
          }
    out.rhs = -0.5 * p * (p - 1) * acc;
  }
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

SplitCheck check_ricl_r2_split(const AlgebraicCurvatureTensor& R, const Form& phi) {
  require_real(phi, "check_ricl_r2_split");
  const auto& frame = phi.frame();
  const int d = frame.real_dim();
  const int p = phi.degree();
  const R1R2 ops = r1_r2_operators(R);
  const double ricl = form_g(ricl_bruteforce(R, phi), phi).real();
  SplitCheck out;
  out.split.lhs = 1.5 * ricl;
  double ric_term = 0.0;
  if (p >= 1) {
    const RicciData rd = ricci(R);
    std::vector<Form> A;
    for (int i = 0; i < d; ++i) A.push_back(insert(frame.e(i), phi));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (rd.ricci(i, j) != 0.0) ric_term += rd.ricci(i, j) * A[i].inner(A[j]).real();
  }
  out.split.rhs = operator_pairing(phi_g(phi, AlgebraTag::sym2), ops.r2_sym2.entries) + p * ric_term;
  out.split.residual = std::abs(out.split.lhs - out.split.rhs);
  out.remark.lhs = operator_pairing(phi_g(phi, AlgebraTag::so), ops.r1_wedge2.entries);
  out.remark.rhs = ricl;
  out.remark.residual = std::abs(out.remark.lhs - out.remark.rhs);
  return out;
}

CMatrix sym2_coefficients(const FrameConvention& frame, const EndoC& S, double tol) {
  require_same_size(frame, S);
  const int n = frame.n();
  const double scale = std::max(1.0, S.m.cwiseAbs().maxCoeff());
  CMatrix s(n, n);
  for (int row = 0; row < frame.slots(); ++row)
    for (int col = 0; col < frame.slots(); ++col) {
      const bool allowed = !FrameConvention::is_barred(row) && FrameConvention::is_barred(col);
      if (!allowed && std::abs(S.m(row, col)) > tol * scale)
        throw NotSymmetric("endomorphism does not map V^{0,1} into V^{1,0}");
    }
  // (Z_a (x) Z_b) has its single entry at (slot Z_b, slot conj Z_a).
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s(a, b) = S.m(FrameConvention::z_slot(b), FrameConvention::zbar_slot(a));
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw NotSymmetric("coefficient matrix is not symmetric");
  return s;
}

double estimate_constant(int p, int q) {
  const double m = std::min({static_cast<double>(p), static_cast<double>(q), std::sqrt(static_cast<double>(p * q)) / 2.0});
  return 0.5 + m;
}

EstimateResult estimate_bound(const EndoC& S, const RealForm& psi, bool primitive) {
  const auto& frame = psi.form().frame();
  sym2_coefficients(frame, S);
  const auto pq = psi.bidegree();
  if (!pq) throw InvalidArgument("estimate_bound needs a form in a single Lambda^{p,q} + Lambda^{q,p}");
  EstimateResult r;
  r.p = pq->first;
  r.q = pq->second;
  const double s2 = tensor_norm_sq(S);
  r.lhs = endo_act(S, psi.form()).norm_sq();
  r.bound = estimate_constant(r.p, r.q) * s2 * psi.norm_sq();
  r.holds = r.lhs <= r.bound + 1e-10 * std::max(1.0, r.bound);
  if (primitive) {
    const int n = frame.n();
    const double denom = (r.p + r.q) * (n + 1.0) - 2.0 * r.p * r.q;
    if (denom > 0.0) {
      r.sym_norm_sq = norm_phi_g(phi_g(psi.form(), AlgebraTag::sym2_10));
      r.sym_factor = 4.0 * estimate_constant(r.p, r.q) / denom;
      r.sym_bound = *r.sym_factor * s2 * *r.sym_norm_sq;
    }
  }
  return r;
}

AchievabilityFamily achievability_family(const FrameConvention& frame, int p, int q) {
  const int k = p + q;
  if (k > frame.n() || p < 0 || q < 0) throw InvalidArgument("achievability family needs p + q <= n");
  EndoC S{CMatrix::Zero(frame.slots(), frame.slots()), AlgebraTag::sym2_10};
  for (int a = 0; a < k; ++a) S.m += tensor_endo(frame, frame.z(a), frame.z(a)).m;
  Form phi(frame, k);
  for (Mask I = 0; I < (Mask{1} << k); ++I) {
    if (std::popcount(I) != p) continue;
    MultiIndexK K;
    for (int a = 0; a < k; ++a) ((I >> a) & 1u ? K.I : K.J).push_back(a);
    phi += Form::generator(frame, K);
  }
  phi *= 0.5;  // psi = Re(phi) = (phi + conj phi) / 2
  return AchievabilityFamily{S, RealForm::from_component(phi)};
}

NormalForm normal_form(const FrameConvention& frame, const EndoC& S) {
  const CMatrix s = sym2_coefficients(frame, S);
  const int n = frame.n();
  CMatrix M(2 * n, 2 * n);
  M.topLeftCorner(n, n) = s.real().cast<cplx>();
  M.topRightCorner(n, n) = s.imag().cast<cplx>();
  M.bottomLeftCorner(n, n) = s.imag().cast<cplx>();
  M.bottomRightCorner(n, n) = -s.real().cast<cplx>();
  const Spectrum sp = eigensystem(M, "takagi_embedding");
  const double top = std::max(0.0, sp.eigenvalues.back());
  const double cut = 1e-10 * std::max(1.0, top);
  NormalForm nf;
  nf.frame = CMatrix::Zero(n, n);
  int filled = 0;
  for (int idx = 2 * n - 1; idx >= n; --idx) {
    const double sigma = sp.eigenvalues[static_cast<std::size_t>(idx)];
    if (sigma <= cut) break;
    const CVector v = sp.eigenvectors->col(idx);
    CVector u(n);
    for (int a = 0; a < n; ++a) u(a) = cplx{v(a).real(), v(a + n).real()};
    nf.frame.col(filled++) = u / u.norm();
    nf.rho.push_back(sigma);
  }
  // Complete with an orthonormal basis of the complement; those carry rho = 0.
  for (int e = 0; e < n && filled < n; ++e) {
    CVector v = CVector::Zero(n);
    v(e) = 1.0;
    for (int c = 0; c < filled; ++c) v -= nf.frame.col(c).dot(v) * nf.frame.col(c);
    if (v.norm() < 1e-8) continue;
    nf.frame.col(filled++) = v / v.norm();
    nf.rho.push_back(0.0);
  }
  CMatrix rec = nf.frame * Eigen::Map<const RVector>(nf.rho.data(), n).cast<cplx>().asDiagonal() *
                nf.frame.transpose();
  nf.residual = (s - rec).cwiseAbs().maxCoeff();
  return nf;
}

namespace {

RMatrix real_gram(const std::vector<Form>& v) {
  const auto m = static_cast<Eigen::Index>(v.size());
  RMatrix G(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i; j < m; ++j) {
      G(i, j) = v[i].inner(v[j]).real();
      G(j, i) = G(i, j);
    }
  return G;
}

// One ascent step on the Rayleigh quotient x'Gx / x'Hx, renormalized to x'Hx = 1.
double ascend(RVector& x, const RMatrix& G, const RMatrix& H, double step) {
  const double den = x.dot(H * x);
  const double f = x.dot(G * x) / den;
  RVector grad = 2.0 * (G * x - f * (H * x)) / den;
  x += step * grad;
  x /= std::sqrt(x.dot(H * x));
  return x.dot(G * x);
}

}  // namespace

StressResult stress_search(const FrameConvention& frame, int p, int q, const StressOptions& opts) {
  StressResult res;
  res.proven = estimate_constant(p, q);
  res.conjectured = (p + q) > 0 ? 0.5 + static_cast<double>(p * q) / (p + q) : 0.5;
  // Real directions of psi: Re and Im of each (p, q) generator, realified.
  std::vector<Form> psi_dirs;
  const auto layout = form_layout(frame.n(), p + q);
  for (Mask m : layout->masks) {
    if (unbarred_count(m) != p || barred_count(m) != q) continue;
    Form g = Form::from_mask(frame, p + q, m);
    psi_dirs.push_back(RealForm::from_component(g).form());
    psi_dirs.push_back(RealForm::from_component(kI * g).form());
  }
  std::vector<EndoC> s_dirs;
  for (auto [a, b] : sym2_pairs(frame.n())) {
    EndoC B = sym2_basis_element(frame, a, b);
    s_dirs.push_back(B);
    s_dirs.push_back(EndoC{kI * B.m, AlgebraTag::sym2_10});
  }
  const RMatrix Hpsi = real_gram(psi_dirs);
  const auto nx = static_cast<Eigen::Index>(psi_dirs.size());
  const auto ny = static_cast<Eigen::Index>(s_dirs.size());
  const RMatrix Hs = RMatrix::Identity(ny, ny);
  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng(opts.seed, static_cast<std::uint64_t>(r));
    RVector x(nx), y(ny);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();
    x /= std::sqrt(x.dot(Hpsi * x));
    y /= y.norm();
    for (int it = 0; it < opts.iterations; ++it) {
      EndoC S{CMatrix::Zero(frame.slots(), frame.slots()), AlgebraTag::sym2_10};
      for (Eigen::Index l = 0; l < ny; ++l) S.m += y(l) * s_dirs[l].m;
      std::vector<Form> zx;
      for (const auto& d : psi_dirs) zx.push_back(endo_act(S, d));
      ascend(x, real_gram(zx), Hpsi, opts.step);
      Form psi(frame, p + q);
      for (Eigen::Index j = 0; j < nx; ++j) psi += cplx{x(j)} * psi_dirs[j];
      std::vector<Form> zy;
      for (const auto& d : s_dirs) zy.push_back(endo_act(d, psi));
      const double f = ascend(y, real_gram(zy), Hs, opts.step);
      res.best_ratio = std::max(res.best_ratio, f);
    }
  }
  return res;
}

}  // namespace calab
