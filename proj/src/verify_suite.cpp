#include "calabi_lab/verify_suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "calabi_lab/certify.hpp"
#include "calabi_lab/curvature.hpp"
#include "calabi_lab/errors.hpp"
#include "calabi_lab/model_spaces.hpp"
#include "calabi_lab/parallel.hpp"
#include "calabi_lab/random.hpp"
#include "calabi_lab/spectral.hpp"
#include "calabi_lab/weitzenboeck.hpp"

namespace calab {

namespace {

struct Tally {
  std::size_t samples = 0;
  std::size_t failures = 0;
  double max_residual = 0.0;

  void add(double residual, double tol) {
    ++samples;
    if (std::isnan(residual) || residual > max_residual) max_residual = residual;
    if (!(residual <= tol)) ++failures;
  }
  // Records a boolean outcome, stored as residual 0 or 1.
  void expect(bool ok) { add(ok ? 0.0 : 1.0, 0.5); }
  void merge(const Tally& o) {
    samples += o.samples;
    failures += o.failures;
    if (std::isnan(o.max_residual) || o.max_residual > max_residual) max_residual = o.max_residual;
  }
};

double rel(double lhs, double rhs) { return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}); }

std::uint64_t stream_of(std::uint64_t check, std::size_t trial) { return (check << 32) | static_cast<std::uint64_t>(trial); }

// Runs f(rng, tally, trial) once per trial and merges in trial order.
template <class F>
Tally run_trials(const VerifyOptions& o, std::uint64_t check, std::size_t trials, F&& f) {
  std::vector<Tally> per(trials);
  parallel_for(trials, [&](std::size_t t) {
    Rng rng(o.seed, stream_of(check, t));
    f(rng, per[t], t);
  });
  Tally total;
  for (const auto& x : per) total.merge(x);
  return total;
}

template <class F>
Tally run_trials(const VerifyOptions& o, std::uint64_t check, F&& f) {
  return run_trials(o, check, static_cast<std::size_t>(std::max(0, o.trials)), std::forward<F>(f));
}

CheckRecord record(std::string name, std::string anchor, const Tally& t, double tol, Json extra = Json::object()) {
  CheckRecord c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.status = t.samples == 0 ? Status::skip : (t.failures == 0 ? Status::pass : Status::fail);
  c.values["samples"] = t.samples;
  c.values["failures"] = t.failures;
  c.values["max_residual"] = t.max_residual;
  c.values["tolerance"] = tol;
  for (auto it = extra.begin(); it != extra.end(); ++it) c.values[it.key()] = it.value();
  return c;
}

CheckRecord skipped(std::string name, std::string anchor, const std::string& reason) {
  CheckRecord c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.status = Status::skip;
  c.values["reason"] = reason;
  return c;
}

// Bidegrees p >= q >= 0 with 1 <= p + q <= max_total and p <= n.
std::vector<std::pair<int, int>> bidegrees(int n, int max_total) {
  std::vector<std::pair<int, int>> out;
  for (int k = 1; k <= max_total; ++k)
    for (int q = 0; 2 * q <= k; ++q) {
      const int p = k - q;
      if (p <= n) out.emplace_back(p, q);
    }
  return out;
}

// Every (p, q) with p, q <= n and lo <= p + q <= hi, both orders.
std::vector<std::pair<int, int>> all_bidegrees(int n, int lo, int hi) {
  std::vector<std::pair<int, int>> out;
  for (int k = lo; k <= hi; ++k)
    for (int p = 0; p <= k; ++p)
      if (p <= n && k - p <= n) out.emplace_back(p, k - p);
  return out;
}

std::uint64_t trial_seed(const VerifyOptions& o, std::uint64_t check, std::size_t trial) {
  return stream_seed(o.seed, stream_of(check, trial) ^ 0x5eedULL);
}

Spectrum calabi_spectrum(const AlgebraicCurvatureTensor& R) {
  return eigensystem(calabi_from_tensor(R).entries, "calabi");
}

// Real coordinates of x (x) y in V (x) V, index i*d + j.
CVector outer(const CVector& x, const CVector& y) {
  const auto d = x.size();
  CVector v(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = x(i) * y(j);
  return v;
}

CVector wedge_vec(const CVector& x, const CVector& y) { return outer(x, y) - outer(y, x); }

// Sigma_nu as endomorphisms, from the eigenvector columns in the symmetric-square basis.
std::vector<EndoC> calabi_eigen_endos(const FrameConvention& frame, const Spectrum& s) {
  const auto pairs = sym2_pairs(frame.n());
  std::vector<EndoC> B;
  for (auto [a, b] : pairs) B.push_back(sym2_basis_element(frame, a, b));
  std::vector<EndoC> out;
  for (Eigen::Index nu = 0; nu < s.eigenvectors->cols(); ++nu) {
    EndoC S{CMatrix::Zero(frame.slots(), frame.slots()), AlgebraTag::sym2_10};
    for (std::size_t mu = 0; mu < B.size(); ++mu) S.m += (*s.eigenvectors)(static_cast<Eigen::Index>(mu), nu) * B[mu].m;
    out.push_back(std::move(S));
  }
  return out;
}

double max_residual(const SymmetryResiduals& r) {
  return std::max({r.antisym_first, r.antisym_second, r.pair_exchange, r.bianchi, r.kaehler});
}

// ---------------------------------------------------------------- checks

CheckRecord check_tensor_validation(const VerifyOptions& o) {
  const int n = o.n;
  Tally t;
  Json models = Json::object();
  auto model = [&](const std::string& label, const AlgebraicCurvatureTensor& R) {
    const double r = max_residual(R.residuals()) / std::max(1.0, R.max_abs());
    models[label] = r;
    t.add(r, 1e-12);
    t.expect(R.bianchi_validated() && R.kaehler_validated());
  };
  model(describe({ChscSpace{n, 1.0}}), chsc_tensor(n, 1.0));
  model(describe({ChscSpace{n, -1.0}}), chsc_tensor(n, -1.0));
  if (n >= 2) {
    model(describe({QuadricSpace{n, 1.0}}), quadric_tensor(n));
    model("product:[chsc:n=1;chsc:n=" + std::to_string(n - 1) + "]",
          product_tensor({chsc_tensor(1, 1.0), chsc_tensor(n - 1, 1.0)}));
  }
  model(describe({FlatSpace{n}}), flat_tensor(n));
  model(describe({RandomKaehlerSpace{n, o.seed}}), random_kaehler(n, o.seed));
  model(describe({RandomKaehlerEinsteinSpace{n, o.seed}}), random_kaehler_einstein(n, o.seed));

  // A single perturbed entry has to be rejected with the pair symmetry named.
  const FrameConvention fc(n);
  std::vector<double> comp = chsc_tensor(n, 1.0).components();
  comp[static_cast<std::size_t>(((0 * 2 * n + 1) * 2 * n + 0) * 2 * n + 1)] += 1e-3;
  bool rejected = false;
  std::string identity;
  try {
    validate_tensor(fc, comp);
  } catch (const SymmetryViolation& e) {
    rejected = true;
    identity = e.identity();
  }
  t.expect(rejected);
  return record("tensor_validation", "model tensors satisfy the curvature symmetries; perturbations are rejected", t,
                1e-12, Json{{"models", models}, {"perturbed_rejected_by", identity}});
}

CheckRecord check_calabi_round_trip(const VerifyOptions& o) {
  const int n = o.n;
  const int m = n * (n + 1) / 2;
  const FrameConvention fc(n);
  std::vector<double> bianchi(static_cast<std::size_t>(std::max(0, o.trials)), 0.0);
  Tally t = run_trials(o, 2, [&](Rng& rng, Tally& tally, std::size_t trial) {
    const CMatrix C = random_hermitian(m, rng);
    const auto R = tensor_from_calabi(fc, C);
    const double scale = std::max(1.0, C.cwiseAbs().maxCoeff());
    tally.add((calabi_from_tensor(R).entries - C).cwiseAbs().maxCoeff() / scale, 1e-12);
    tally.add(R.residuals().bianchi / scale, 1e-12);
    bianchi[trial] = R.residuals().bianchi / scale;
    // The other direction, tensor -> matrix -> tensor.
    const auto R2 = tensor_from_calabi(fc, calabi_from_tensor(R).entries);
    double d = 0.0;
    for (std::size_t i = 0; i < R.components().size(); ++i)
      d = std::max(d, std::abs(R.components()[i] - R2.components()[i]));
    tally.add(d / std::max(1.0, R.max_abs()), 1e-12);
  });
  const double worst_bianchi = bianchi.empty() ? 0.0 : *std::max_element(bianchi.begin(), bianchi.end());
  return record("calabi_round_trip", "Kaehler tensors correspond one to one with Hermitian operators on the (1,0) symmetric square",
                t, 1e-12, Json{{"max_bianchi_residual", worst_bianchi}});
}

CheckRecord check_operator_relations(const VerifyOptions& o) {
  const int n = o.n;
  const FrameConvention fc(n);
  const int d = fc.real_dim();
  Tally t = run_trials(o, 3, [&](Rng&, Tally& tally, std::size_t trial) {
    const auto R = random_kaehler(n, trial_seed(o, 3, trial));
    const R1R2 ops = r1_r2_operators(R);
    const CMatrix r1 = ops.r1_full.cast<cplx>();
    const CMatrix r2 = ops.r2_full.cast<cplx>();
    const double scale = std::max(1.0, R.max_abs());
    double res_r1 = 0.0, res_r2 = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        // Real frame vectors in real coordinates are unit vectors.
        CVector ei = CVector::Zero(d), ej = CVector::Zero(d);
        ei(i) = 1.0;
        ej(j) = 1.0;
        const CVector w_ij = wedge_vec(ei, ej);
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            CVector ek = CVector::Zero(d), el = CVector::Zero(d);
            ek(k) = 1.0;
            el(l) = 1.0;
            const CVector w_kl = wedge_vec(ek, el);
            const cplx g1 = w_kl.transpose() * r1 * w_ij;
            const cplx g2 = w_kl.transpose() * r2 * w_ij;
            res_r1 = std::max(res_r1, std::abs(g1 - 4.0 * R(i, j, k, l)));
            res_r2 = std::max(res_r2, std::abs(g2 + 0.5 * g1));
          }
      }
    tally.add(res_r1 / scale, o.tol);
    tally.add(res_r2 / scale, o.tol);

    // R^2 on the (1,0) symmetric square, assembled from the full real matrix.
    const CMatrix& B = fc.slot_to_real();
    const auto pairs = sym2_pairs(n);
    const auto m = static_cast<Eigen::Index>(pairs.size());
    std::vector<CVector> basis;
    for (auto [a, b] : pairs) {
      const CVector za = B.col(FrameConvention::z_slot(a)), zb = B.col(FrameConvention::z_slot(b));
      basis.push_back(a == b ? outer(za, za) : CVector((outer(za, zb) + outer(zb, za)) / std::sqrt(2.0)));
    }
    CMatrix H(m, m);
    for (Eigen::Index nu = 0; nu < m; ++nu)
      for (Eigen::Index mu = 0; mu < m; ++mu)
        H(mu, nu) = basis[static_cast<std::size_t>(mu)].conjugate().transpose() * r2 * basis[static_cast<std::size_t>(nu)];
    tally.add((H - calabi_from_tensor(R).entries).cwiseAbs().maxCoeff() / scale, o.tol);

    // Kaehler tensors annihilate Lambda^{2,0}, and the (1,1) slots commute.
    double van = 0.0, exch = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const CVector zab = wedge_vec(B.col(FrameConvention::z_slot(a)), B.col(FrameConvention::z_slot(b)));
        for (int c = 0; c < n; ++c)
          for (int e = 0; e < n; ++e) {
            const CVector zcd = wedge_vec(B.col(FrameConvention::z_slot(c)), B.col(FrameConvention::z_slot(e)));
            van = std::max(van, std::abs(cplx(zcd.conjugate().transpose() * r1 * zab)));
            const int X = FrameConvention::z_slot(a), Yb = FrameConvention::zbar_slot(b);
            const int Z = FrameConvention::z_slot(c), Wb = FrameConvention::zbar_slot(e);
            const cplx base = R.slot(X, Yb, Z, Wb);
            exch = std::max({exch, std::abs(base - R.slot(Z, Yb, X, Wb)), std::abs(base - R.slot(X, Wb, Z, Yb))});
          }
      }
    tally.add(van / scale, o.tol);
    tally.add(exch / scale, o.tol);
  });
  return record("curvature_operator_relations",
                "R1 pairs wedges to 4R; R2 = -R1/2 on wedges; R2 on the (1,0) symmetric square is the Calabi operator; "
                "Kaehler vanishing on (2,0) bivectors and exchange symmetry",
                t, o.tol);
}

CheckRecord check_eigen_expansion(const VerifyOptions& o) {
  const int n = o.n;
  const FrameConvention fc(n);
  Tally t = run_trials(o, 4, [&](Rng&, Tally& tally, std::size_t trial) {
    const auto R = random_kaehler(n, trial_seed(o, 4, trial));
    const Spectrum s = calabi_spectrum(R);
    const auto sig = calabi_eigen_endos(fc, s);
    double res = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        CMatrix rhs = CMatrix::Zero(fc.slots(), fc.slots());
        for (std::size_t nu = 0; nu < sig.size(); ++nu) {
          const CVector x = calab::apply(conj(fc, sig[nu]), fc.z(a));
          const CVector y = calab::apply(sig[nu], fc.zbar(b));
          rhs -= s.eigenvalues[nu] * wedge_endo(fc, x, y).m;
        }
        res = std::max(res, (R.endo(fc.z(a), fc.zbar(b)).m - rhs).cwiseAbs().maxCoeff());
      }
    tally.add(res / std::max(1.0, R.max_abs()), o.eig_tol);
  });
  return record("calabi_eigen_expansion", "R(Z_a, conj Z_b) expands over the Calabi eigenbasis", t, o.eig_tol);
}

CheckRecord check_r2_gl(const VerifyOptions& o) {
  const FrameConvention fc(o.n);
  const int pmax = std::min(3, fc.real_dim());
  Tally t = run_trials(o, 5, [&](Rng& rng, Tally& tally, std::size_t) {
    const auto R = validate_tensor(fc, random_riemannian_components(fc, rng));
    for (int p = 1; p <= pmax; ++p) {
      const Form phi = random_real_p_form(fc, p, rng);
      tally.add(check_r2_gl_identity(R, phi).relative(), o.eig_tol);
    }
  });
  return record("r2_gl_identity", "R2 paired on phi^gl equals -(p(p-1)/2) R_ijkl phi_ijI phi_klI", t, o.eig_tol,
                Json{{"degrees", "1.." + std::to_string(pmax)}});
}

std::pair<CheckRecord, CheckRecord> check_ricl_split(const VerifyOptions& o) {
  const FrameConvention fc(o.n);
  const int pmax = std::min(3, fc.real_dim());
  const auto trials = static_cast<std::size_t>(std::max(0, o.trials));
  std::vector<Tally> split(trials), remark(trials);
  parallel_for(trials, [&](std::size_t tr) {
    Rng rng(o.seed, stream_of(6, tr));
    const auto R = validate_tensor(fc, random_riemannian_components(fc, rng));
    for (int p = 1; p <= pmax; ++p) {
      const SplitCheck c = check_ricl_r2_split(R, random_real_p_form(fc, p, rng));
      split[tr].add(c.split.relative(), o.eig_tol);
      remark[tr].add(c.remark.relative(), o.eig_tol);
    }
  });
  Tally a, b;
  for (std::size_t i = 0; i < trials; ++i) {
    a.merge(split[i]);
    b.merge(remark[i]);
  }
  return {record("ricl_r2_split", "(3/2) g(Ric_L phi, phi) = g(R2 phi^S2, phi^S2) + p Ric(phi, phi)", a, o.eig_tol),
          record("ricl_so_translation", "g(R1 phi^so, phi^so) = g(Ric_L phi, phi)", b, o.eig_tol)};
}

CheckRecord check_curvature_term(const VerifyOptions& o) {
  const int n = o.n;
  const FrameConvention fc(n);
  const auto degs = bidegrees(n, std::min(n, o.max_degree));
  Tally t = run_trials(o, 7, [&](Rng& rng, Tally& tally, std::size_t trial) {
    const auto R = random_kaehler(n, trial_seed(o, 7, trial));
    const Spectrum s = calabi_spectrum(R);
    for (auto [p, q] : degs) {
      const RealForm psi = random_real_primitive(fc, p, q, rng);
      const double brute = ricl_pairing(R, psi);
      const double via = ricl_via_calabi(s, psi);
      tally.add(std::abs(brute - via) / std::max(1.0, std::abs(brute)), o.eig_tol);
    }
  });
  return record("curvature_term_calabi", "g(Ric_L psi, psi) = 2 sum sigma_nu |Sigma_nu psi|^2 on real primitive forms", t,
                o.eig_tol, Json{{"bidegrees", degs.size()}});
}

CheckRecord check_ricl_special(const VerifyOptions& o) {
  const int n = o.n;
  const FrameConvention fc(n);
  const CMatrix& B = fc.slot_to_real();
  std::vector<double> ratio(static_cast<std::size_t>(std::max(0, o.trials)), 0.5);
  Tally t = run_trials(o, 8, [&](Rng& rng, Tally& tally, std::size_t trial) {
    const auto R = random_kaehler(n, trial_seed(o, 8, trial));
    const RicciData rd = ricci(R);
    const CMatrix ric_slot = B.transpose() * rd.ricci.cast<cplx>() * B;  // Ric(b_u, b_v)
    // (1,0)-forms: Ric on the metric duals.
    const Form phi = random_form(fc, 1, 0, rng);
    const Form phibar = phi.conj();
    const cplx lhs = form_g(ricl_bruteforce(R, phi), phibar);
    cplx rhs = 0.0;
    for (int s = 0; s < fc.slots(); ++s)
      for (int u = 0; u < fc.slots(); ++u)
        rhs += phi.coeff(Mask{1} << s) * phibar.coeff(Mask{1} << u) *
               ric_slot(FrameConvention::partner(s), FrameConvention::partner(u));
    tally.add(std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)), o.tol);
    // (n,0)-forms: half the scalar curvature. At n = 1 this is the (1,0) case
    // above with Ric = (scal/2) g, which fixes the factor.
    const Form top = random_form(fc, n, 0, rng);
    const cplx lt = form_g(ricl_bruteforce(R, top), top.conj());
    const double rt = 0.5 * rd.scal * top.norm_sq();
    tally.add(std::abs(lt - rt) / std::max(1.0, std::abs(rt)), o.tol);
    if (std::abs(rd.scal) > 1e-6) ratio[trial] = lt.real() / (rd.scal * top.norm_sq());
  });
  double lo = 0.0, hi = 0.0;
  if (!ratio.empty()) {
    lo = *std::min_element(ratio.begin(), ratio.end());
    hi = *std::max_element(ratio.begin(), ratio.end());
  }
  return record("ricl_special_degrees",
                "g(Ric_L phi, conj phi) is Ric(phi, conj phi) on (1,0)-forms and (scal/2)|phi|^2 on (n,0)-forms", t,
                o.tol, Json{{"top_degree_ratio_to_scal", Json::array({lo, hi})}});
}

CheckRecord check_insertion_norm(const VerifyOptions& o) {
  const int n = o.n;
  const FrameConvention fc(n);
  const auto degs = all_bidegrees(n, 2, std::min(2 * n, o.max_degree));
  Tally t = run_trials(o, 9, [&](Rng& rng, Tally& tally, std::size_t) {
    for (auto [p, q] : degs) {
      const Form phi = random_form(fc, p, q, rng);
      const int k = p + q;
      double acc = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) acc += insert(fc.z(a), insert(fc.zbar(b), phi)).norm_sq();
      tally.add(rel(k * (k - 1) * acc, p * q * phi.norm_sq()), o.tol);
    }
  });
  return record("insertion_norm", "(p+q)(p+q-1) sum |iota_Z_a iota_conjZ_b phi|^2 = pq |phi|^2", t, o.tol);
}

std::pair<CheckRecord, CheckRecord> check_sym2_norms(const VerifyOptions& o) {
  const int n = o.n;
  const FrameConvention fc(n);
  const auto degs = bidegrees(n, std::min(n, o.max_degree));
  const auto basis = unitary_basis(fc, AlgebraTag::sym2_10);
  const auto trials = static_cast<std::size_t>(std::max(0, o.trials));
  std::vector<Tally> prim(trials), corr(trials);
  parallel_for(trials, [&](std::size_t tr) {
    Rng rng(o.seed, stream_of(10, tr));
    for (auto [p, q] : degs) {
      const int k = p + q;
      const double c = 0.25 * (k * (n + 1.0) - 2.0 * p * q);
      const RealForm psi = random_real_primitive(fc, p, q, rng);
      prim[tr].add(rel(norm_phi_g(phi_g(psi.form(), AlgebraTag::sym2_10, basis)), c * psi.norm_sq()), o.tol);
      const RealForm chi = random_real_form(fc, p, q, rng);
      double lam = 0.0;
      if (k >= 2) lam = lefschetz_adjoint(chi.form()).norm_sq() / (2.0 * k * (k - 1));
      corr[tr].add(rel(norm_phi_g(phi_g(chi.form(), AlgebraTag::sym2_10, basis)), c * chi.norm_sq() - lam), o.tol);
    }
  });
  Tally a, b;
  for (std::size_t i = 0; i < trials; ++i) {
    a.merge(prim[i]);
    b.merge(corr[i]);
  }
  return {record("sym2_norm_primitive", "|psi^sym2|^2 = ((p+q)(n+1) - 2pq)|psi|^2 / 4 for real primitive psi", a, o.tol),
          record("sym2_norm_lambda_corrected",
                 "|psi^sym2|^2 = ((p+q)(n+1) - 2pq)|psi|^2 / 4 - |Lambda psi|^2 / (2(p+q)(p+q-1)) for real psi", b,
                 o.tol)};
}

std::vector<CheckRecord> check_unitary_norms(const VerifyOptions& o) {
  const int n = o.n;
  const FrameConvention fc(n);
  const auto degs = bidegrees(n, std::min(n, o.max_degree));
  const auto ubasis = unitary_basis(fc, AlgebraTag::u);
  const auto subasis = unitary_basis(fc, AlgebraTag::su);
  const EndoC omega = kaehler_bivector(fc);
  const auto trials = static_cast<std::size_t>(std::max(0, o.trials));
  std::vector<Tally> su(trials), dec(trials), est(trials), omega_act(trials);
  parallel_for(trials, [&](std::size_t tr) {
    Rng rng(o.seed, stream_of(11, tr));
    for (auto [p0, q0] : degs)
      for (int flip = 0; flip < 2; ++flip) {
        const int p = flip ? q0 : p0, q = flip ? p0 : q0;
        if (flip && p == q) continue;
        const int k = p + q;
        const Form phi = project_primitive(random_form(fc, p, q, rng));
        const double c = 2.0 * p * q + k * (n + 1.0 - k) - static_cast<double>((p - q) * (p - q)) / n;
        const double su_norm = norm_phi_g(phi_g(phi, AlgebraTag::su, subasis));
        su[tr].add(rel(su_norm, c * phi.norm_sq()), o.tol);

        const Form any = random_form(fc, p, q, rng);
        const double u_norm = norm_phi_g(phi_g(any, AlgebraTag::u, ubasis));
        const Form wphi = endo_act(omega, any);
        dec[tr].add(rel(u_norm, wphi.norm_sq() / n + norm_phi_g(phi_g(any, AlgebraTag::su, subasis))), o.tol);
        omega_act[tr].add((wphi - kI * static_cast<double>(p - q) * any).norm() / std::max(1.0, any.norm()), o.tol);

        const EndoC L = random_u(fc, rng);
        const double lhs = endo_act(L, phi).norm_sq();
        const double bound = k * bivector_norm_sq(L) * phi.norm_sq();
        est[tr].add(std::max(0.0, lhs - bound) / std::max(1.0, bound), o.tol);
      }
  });
  Tally a, b, c, d;
  for (std::size_t i = 0; i < trials; ++i) {
    a.merge(su[i]);
    b.merge(dec[i]);
    c.merge(est[i]);
    d.merge(omega_act[i]);
  }
  return {record("su_norm_primitive", "|phi^su|^2 = (2pq + (p+q)(n+1-p-q) - (p-q)^2/n)|phi|^2 for primitive phi", a, o.tol),
          record("u_decomposition", "|phi^u|^2 = |omega_K phi|^2 / n + |phi^su|^2", b, o.tol),
          record("kaehler_bivector_action", "omega_K acts on (p,q)-forms by i(p-q)", d, o.tol),
          record("u_estimate", "|L phi|^2 <= (p+q)|L|^2 |phi|^2 for L in u(n), phi primitive", c, o.tol)};
}

std::vector<CheckRecord> check_main_estimate(const VerifyOptions& o) {
  const int n = o.n;
  const FrameConvention fc(n);
  const auto degs = bidegrees(n, std::min(n, o.max_degree));
  const auto trials = static_cast<std::size_t>(std::max(0, o.trials));
  std::vector<Tally> gen(trials), prim(trials), shift(trials);
  std::vector<double> ratio(trials, 0.0);
  parallel_for(trials, [&](std::size_t tr) {
    Rng rng(o.seed, stream_of(12, tr));
    for (auto [p, q] : degs) {
      const EndoC S = random_sym2_10(fc, rng);
      const EstimateResult r = estimate_bound(S, random_real_form(fc, p, q, rng));
      gen[tr].expect(r.holds);
      ratio[tr] = std::max(ratio[tr], r.lhs / r.bound);
      const EstimateResult rp = estimate_bound(S, random_real_primitive(fc, p, q, rng), true);
      prim[tr].expect(rp.holds);
      if (rp.sym_bound) prim[tr].expect(rp.lhs <= *rp.sym_bound + 1e-10 * std::max(1.0, *rp.sym_bound));
      // S lowers the holomorphic degree by one.
      for (int flip = 0; flip < 2; ++flip) {
        const int a = flip ? q : p, b = flip ? p : q;
        const Form img = endo_act(S, random_form(fc, a, b, rng));
        const double scale = std::max(1.0, img.norm());
        const double off = (img - img.bidegree_part(a - 1, b + 1)).norm();
        shift[tr].add(a == 0 ? img.norm() / scale : off / scale, o.tol);
      }
    }
  });
  Tally a, b, c;
  double worst = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    a.merge(gen[i]);
    b.merge(prim[i]);
    c.merge(shift[i]);
    worst = std::max(worst, ratio[i]);
  }
  return {record("main_estimate", "|S psi|^2 <= (1/2 + min(p, q, sqrt(pq)/2))|S|^2 |psi|^2", a, 0.5,
                 Json{{"max_lhs_over_bound", worst}}),
          record("main_estimate_primitive", "primitive phrasing through |psi^sym2|^2", b, 0.5),
          record("sym2_type_shift", "S in the (1,0) symmetric square maps (p,q)-forms to (p-1,q+1)-forms", c, o.tol)};
}

CheckRecord check_achievability(const VerifyOptions& o) {
  const int n = o.n;
  const FrameConvention fc(n);
  Tally t;
  Json rows = Json::array();
  for (auto [p, q] : bidegrees(n, n)) {
    const auto fam = achievability_family(fc, p, q);
    const double lhs = endo_act(fam.S, fam.psi.form()).norm_sq();
    const double target = (0.5 + static_cast<double>(p * q) / (p + q)) * tensor_norm_sq(fam.S) * fam.psi.norm_sq();
    const double r = rel(lhs, target);
    t.add(r, o.tol);
    rows.push_back(Json{{"p", p}, {"q", q}, {"ratio", lhs / (tensor_norm_sq(fam.S) * fam.psi.norm_sq())}});
  }
  return record("estimate_achievability", "the extremal family attains (1/2 + pq/(p+q))|S|^2 |psi|^2", t, o.tol,
                Json{{"cases", rows}});
}

CheckRecord check_normal_form(const VerifyOptions& o) {
  const FrameConvention fc(o.n);
  Tally t = run_trials(o, 13, [&](Rng& rng, Tally& tally, std::size_t) {
    const NormalForm nf = normal_form(fc, random_sym2_10(fc, rng));
    tally.add(nf.residual, o.tol);
    tally.expect(std::all_of(nf.rho.begin(), nf.rho.end(), [](double r) { return r >= 0.0; }));
    tally.add((nf.frame.adjoint() * nf.frame - CMatrix::Identity(o.n, o.n)).cwiseAbs().maxCoeff(), o.tol);
  });
  return record("sym2_normal_form", "S = sum rho_a Z'_a (x) Z'_a with rho_a >= 0 in a unitary frame", t, o.tol);
}

CheckRecord check_weight_principle(const VerifyOptions& o) {
  const int m = o.n * (o.n + 1) / 2;
  Tally t = run_trials(o, 14, [&](Rng& rng, Tally& tally, std::size_t) {
    std::vector<double> ev(static_cast<std::size_t>(m));
    for (auto& x : ev) x = rng.normal();
    const Spectrum s = spectrum_from_values(ev, "random");
    const double W = 0.5 + rng.uniform();
    std::vector<double> w(static_cast<std::size_t>(m));
    double total = 0.0;
    for (auto& x : w) total += (x = W * rng.uniform());
    if (total <= 0.0) return;
    const double ups = total / W;
    const double kappa = std::min(0.0, partial_sum(s.eigenvalues, ups) / ups);
    const auto r = weight_principle(s, w, total, W, kappa);
    tally.expect(r.certified);
    tally.add(std::max(0.0, r.bound - r.weighted_sum) / std::max(1.0, std::abs(r.bound)), 1e-12);
    // A kappa above the certified value must be refused.
    const double above = kappa + 0.25;
    if (above <= 0.0) tally.expect(!weight_principle(s, w, total, W, above).certified);
  });
  return record("weight_principle", "Upsilon-nonnegativity bounds sum w_nu lambda_nu below by kappa * total weight", t,
                1e-12);
}

CheckRecord check_weight_instantiated(const VerifyOptions& o) {
  const int n = o.n;
  const FrameConvention fc(n);
  const auto degs = bidegrees(n, std::min(n, o.max_degree));
  Tally t = run_trials(o, 15, [&](Rng& rng, Tally& tally, std::size_t trial) {
    const auto R = random_kaehler(n, trial_seed(o, 15, trial));
    const Spectrum s = calabi_spectrum(R);
    const auto sig = calabi_eigen_endos(fc, s);
    for (auto [p, q] : degs) {
      const RealForm psi = random_real_primitive(fc, p, q, rng);
      std::vector<double> w;
      double total_direct = 0.0;
      for (const auto& S : sig) total_direct += w.emplace_back(endo_act(S, psi.form()).norm_sq());
      const int k = p + q;
      const double total = 0.25 * (k * (n + 1.0) - 2.0 * p * q) * psi.norm_sq();
      const double maxw = estimate_constant(p, q) * psi.norm_sq();
      tally.add(rel(total_direct, total), o.eig_tol);
      const double ups = total / maxw;
      const double kappa = std::min(0.0, partial_sum(s.eigenvalues, ups) / ups);
      const auto r = weight_principle(s, w, total, maxw, kappa, 1e-8);
      tally.expect(r.certified);
      const double ricl = ricl_pairing(R, psi);
      tally.add(std::max(0.0, 2.0 * r.bound - ricl) / std::max(1.0, std::abs(ricl)), o.eig_tol);
    }
  });
  return record("weight_principle_instantiated",
                "weights |Sigma_nu psi|^2 with total |psi^sym2|^2 and cap from the main estimate bound Ric_L", t,
                o.eig_tol);
}

CheckRecord check_certificate_soundness(const VerifyOptions& o) {
  const int n = o.n;
  const FrameConvention fc(n);
  const int m = n * (n + 1) / 2;
  const auto degs = bidegrees(n, std::min(n, o.max_degree));
  Tally t = run_trials(o, 16, [&](Rng& rng, Tally& tally, std::size_t) {
    // Shift a random operator so one bidegree sits exactly on its threshold.
    const auto [p0, q0] = degs[static_cast<std::size_t>(rng.uniform() * degs.size()) % degs.size()];
    CMatrix C = random_hermitian(m, rng);
    const double ups = upsilon(n, p0, q0).value;
    const Spectrum s0 = eigensystem(C);
    C += (-partial_sum(s0.eigenvalues, ups) / ups) * CMatrix::Identity(m, m);
    const auto R = tensor_from_calabi(fc, C);
    const Certificate cert = certify_calabi(calabi_spectrum(R), n);
    for (auto [p, q] : degs) {
      const auto& v = cert.at(p, q);
      if (v.verdict == Verdict::not_certified) continue;
      const RealForm psi = random_real_primitive(fc, p, q, rng);
      const double val = ricl_pairing(R, psi);
      const double scale = std::max(1.0, C.cwiseAbs().maxCoeff()) * psi.norm_sq();
      tally.add(std::max(0.0, -val) / scale, o.eig_tol);
      if (v.verdict == Verdict::vanishes) tally.expect(val > 0.0);
    }
  });
  return record("certificate_soundness", "granted verdicts imply g(Ric_L psi, psi) >= 0 on real primitive forms", t,
                o.eig_tol);
}

CheckRecord check_ke_identities(const VerifyOptions& o) {
  const int n = o.n;
  Tally t = run_trials(o, 17, [&](Rng&, Tally& tally, std::size_t trial) {
    const auto R = random_kaehler_einstein(n, trial_seed(o, 17, trial));
    const RicciData rd = ricci(R);
    tally.expect(rd.einstein_lambda.has_value());
    if (!rd.einstein_lambda) return;
    const double lambda = *rd.einstein_lambda;
    const auto K = kaehler_operator(R);
    CVector w = CVector::Zero(n * n);
    for (int a = 0; a < n; ++a) w(a * n + a) = kI / std::sqrt(static_cast<double>(n));
    const double scale = std::max(1.0, R.max_abs());
    tally.add((K.entries * w - lambda * w).norm() / scale, o.eig_tol);
    const auto Ksu = restrict_su(K, rd);
    tally.add(rel(Ksu.entries.trace().real(), (n - 1) * lambda), o.eig_tol);
    tally.add(rel(lambda, rd.scal / (2.0 * n)), o.eig_tol);
    tally.add(rel(lambda, K.entries.trace().real() / n), o.eig_tol);
  });
  return record("kaehler_einstein_identities",
                "omega_K is a lambda-eigenvector of K, tr K|su = (n-1) lambda, lambda = scal/2n = tr K / n", t,
                o.eig_tol);
}

std::vector<CheckRecord> check_thresholds(const VerifyOptions& o) {
  const int n = o.n;
  Tally id, ups_bound;
  for (int p = 1; p <= n; ++p) {
    const auto upp = upsilon(n, p, p);
    id.expect(upp.exact && *upp.exact == Rational(p * (n + 1 - p), 1 + p));
    const auto up0 = upsilon(n, p, 0);
    id.expect(up0.exact && *up0.exact == Rational(p * (n + 1), 2));
    if (n >= 2 || p < n) {
      const auto gpp = gamma(n, p, p);
      if (gpp) id.expect(gpp->exact && *gpp->exact == Rational(n + 1 - p));
    }
  }
  id.expect(upsilon(n, 1, 1).exact == Rational(n, 2) || n < 1);
  id.expect(upsilon(n, n, 0).exact == Rational(n * (n + 1), 2));
  const auto gn0 = gamma(n, n, 0);
  id.expect(gn0 && gn0->exact && *gn0->exact == Rational(n * n - 1, n));
  Tally gam;
  for (int p = 0; p <= n; ++p)
    for (int q = 0; p + q <= n; ++q) {
      if (p + q == 0) continue;
      ups_bound.expect(upsilon(n, p, q).value >= n / 2.0);
    }
  const bool red = ke_reduction_holds(n);
  gam.expect(red);
  return {record("threshold_identities", "closed forms of Upsilon_{p,p}, Upsilon_{p,0}, Upsilon_{1,1}, Upsilon_{n,0}, "
                                         "Gamma_{n,0}, Gamma_{p,p}",
                 id, 0.5),
          record("upsilon_lower_bound", "Upsilon_{p,q} >= n/2 for 1 <= p+q <= n", ups_bound, 0.5),
          record("ke_reduction_threshold", "Gamma_{p,q} >= n/2 + 1 for 1 <= p+q <= n", gam, 0.5,
                 Json{{"holds", red}})};
}

std::vector<CheckRecord> check_model_spaces(const VerifyOptions& o) {
  const int n = o.n;
  std::vector<CheckRecord> out;
  {
    Tally t;
    const int m = n * (n + 1) / 2;
    const auto C = calabi_from_tensor(chsc_tensor(n, 1.0)).entries;
    t.add((C - CMatrix::Identity(m, m)).cwiseAbs().maxCoeff(), 1e-12);
    const RicciData rd = ricci(chsc_tensor(n, 1.0));
    t.expect(rd.einstein_lambda && *rd.einstein_lambda > 0.0);
    out.push_back(record("chsc_identity", "constant holomorphic sectional curvature 1 has Calabi operator Id", t, 1e-12,
                         Json{{"lambda", rd.einstein_lambda.value_or(0.0)}}));
  }
  if (n >= 2) {
    Tally t;
    const QuadricSpectrum qs = quadric_spectrum(n);
    t.expect(qs.ricci.einstein_lambda && *qs.ricci.einstein_lambda > 0.0);
    if (n >= 3) t.expect(qs.spectrum.eigenvalues.front() < -1e-9);
    if (n % 2 == 0) {
      t.expect(qs.half.nonneg);
      t.expect(!qs.half.positive);
    }
    out.push_back(record("quadric_facts",
                         "the quadric is Einstein with lambda > 0, has a negative Calabi eigenvalue for n >= 3 and "
                         "is n/2-nonnegative but not n/2-positive for even n",
                         t, 0.5,
                         Json{{"lambda", qs.ricci.einstein_lambda.value_or(0.0)},
                              {"eigenvalues", qs.spectrum.eigenvalues},
                              {"half_partial_sum", qs.half.partial_sum}}));
    // Products: the mixed part of the symmetric square lies in the kernel.
    Tally pk;
    const auto P = product_tensor({chsc_tensor(1, 1.0), chsc_tensor(n - 1, 1.0)});
    const Spectrum ps = calabi_spectrum(P);
    const int expect_kernel = n - 1;
    int kernel = 0;
    for (double v : ps.eigenvalues)
      if (std::abs(v) < 1e-9) ++kernel;
    pk.expect(kernel >= expect_kernel);
    out.push_back(record("product_kernel", "a product of dimensions n_i has Calabi kernel of dimension >= sum n_i n_j", pk,
                         0.5, Json{{"kernel_dimension", kernel}, {"lower_bound", expect_kernel}}));
  } else {
    out.push_back(skipped("quadric_facts", "quadric facts need n >= 2", "n < 2"));
    out.push_back(skipped("product_kernel", "products need n >= 2", "n < 2"));
  }
  return out;
}

CheckRecord check_stress(const VerifyOptions& o) {
  const FrameConvention fc(o.n);
  Json rows = Json::array();
  Tally t;
  for (auto [p, q] : bidegrees(o.n, std::min(o.n, o.max_degree))) {
    StressOptions so;
    so.seed = stream_seed(o.seed, stream_of(18, static_cast<std::size_t>(p * 64 + q)));
    const StressResult r = stress_search(fc, p, q, so);
    t.expect(r.best_ratio <= r.proven + 1e-9);
    rows.push_back(Json{{"p", p}, {"q", q}, {"best_ratio", r.best_ratio}, {"conjectured", r.conjectured},
                        {"proven", r.proven}});
  }
  return record("estimate_stress_search", "local search for the largest |S psi|^2 / (|S|^2 |psi|^2)", t, 0.5,
                Json{{"cases", rows}});
}

}  // namespace

std::vector<CheckRecord> run_verify_suite(const VerifyOptions& o) {
  if (o.n < 1) throw InvalidArgument("n must be at least 1");
  std::vector<CheckRecord> out;
  // Each check is isolated: an exception marks it failed and the suite moves on.
  auto guard = [&](const std::string& name, const std::function<std::vector<CheckRecord>()>& f) {
    try {
      for (auto& c : f()) out.push_back(std::move(c));
    } catch (const std::exception& e) {
      CheckRecord c;
      c.name = name;
      c.anchor = "check raised an error";
      c.status = Status::fail;
      c.values["error"] = e.what();
      out.push_back(std::move(c));
    }
  };
  auto one = [](CheckRecord c) { return std::vector<CheckRecord>{std::move(c)}; };
  auto two = [](std::pair<CheckRecord, CheckRecord> p) { return std::vector<CheckRecord>{std::move(p.first), std::move(p.second)}; };

  guard("tensor_validation", [&] { return one(check_tensor_validation(o)); });
  guard("calabi_round_trip", [&] { return one(check_calabi_round_trip(o)); });
  guard("curvature_operator_relations", [&] { return one(check_operator_relations(o)); });
  guard("calabi_eigen_expansion", [&] { return one(check_eigen_expansion(o)); });
  guard("r2_gl_identity", [&] { return one(check_r2_gl(o)); });
  guard("ricl_r2_split", [&] { return two(check_ricl_split(o)); });
  guard("curvature_term_calabi", [&] { return one(check_curvature_term(o)); });
  guard("ricl_special_degrees", [&] { return one(check_ricl_special(o)); });
  guard("insertion_norm", [&] { return one(check_insertion_norm(o)); });
  guard("sym2_norm", [&] { return two(check_sym2_norms(o)); });
  guard("unitary_norms", [&] { return check_unitary_norms(o); });
  guard("main_estimate", [&] { return check_main_estimate(o); });
  guard("estimate_achievability", [&] { return one(check_achievability(o)); });
  guard("sym2_normal_form", [&] { return one(check_normal_form(o)); });
  guard("weight_principle", [&] { return one(check_weight_principle(o)); });
  guard("weight_principle_instantiated", [&] { return one(check_weight_instantiated(o)); });
  guard("certificate_soundness", [&] { return one(check_certificate_soundness(o)); });
  guard("kaehler_einstein_identities", [&] { return one(check_ke_identities(o)); });
  guard("thresholds", [&] { return check_thresholds(o); });
  guard("model_spaces", [&] { return check_model_spaces(o); });
  if (o.stress) guard("estimate_stress_search", [&] { return one(check_stress(o)); });
  return out;
}

}  // namespace calab
