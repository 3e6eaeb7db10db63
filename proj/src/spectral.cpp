#include "calabi_lab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "calabi_lab/errors.hpp"

namespace calab {

double Spectrum::max_abs() const {
  double m = 0.0;
  for (double v : eigenvalues) m = std::max(m, std::abs(v));
  return m;
}

namespace {

double off_norm(const CMatrix& H) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < H.cols(); ++j)
    for (Eigen::Index i = 0; i < H.rows(); ++i)
      if (i != j) acc += std::norm(H(i, j));
  return std::sqrt(acc);
}

CVector phase_normalized(const CVector& v) {
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > mag * (1.0 + 1e-9)) {
      mag = std::abs(v(i));
      best = i;
    }
  if (mag <= 0.0) return v;
  return v * (std::abs(v(best)) / v(best));
}

bool lex_less(const CVector& a, const CVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

Spectrum eigensystem(const CMatrix& H0, std::string source, const JacobiOptions& opts) {
  if (H0.rows() != H0.cols()) throw DimensionMismatch("eigensystem: matrix is not square");
  const Eigen::Index m = H0.rows();
  const double scale = std::max(1.0, H0.cwiseAbs().maxCoeff());
  if ((H0 - H0.adjoint()).cwiseAbs().maxCoeff() > opts.hermitian_tol * scale)
    throw NotHermitian("eigensystem: matrix is not Hermitian");

  CMatrix H = (H0 + H0.adjoint()) / 2.0;
  CMatrix V = CMatrix::Identity(m, m);
  const double norm = H.norm();
  int sweep = 0;
  while (norm > 0.0 && off_norm(H) >= opts.rel_threshold * norm) {
    if (++sweep > opts.max_sweeps)
      throw ConvergenceFailure("Jacobi eigensolver exceeded " + std::to_string(opts.max_sweeps) + " sweeps");
    for (Eigen::Index p = 0; p < m - 1; ++p)
      for (Eigen::Index q = p + 1; q < m; ++q) {
        const cplx apq = H(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const cplx w = apq / r;
        const double tau = (H(q, q).real() - H(p, p).real()) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx wc = std::conj(w);
        // U = [[c, s], [-s conj(w), c conj(w)]] on rows/cols (p, q).
        for (Eigen::Index k = 0; k < m; ++k) {
          const cplx hp = H(k, p), hq = H(k, q);
          H(k, p) = c * hp - s * wc * hq;
          H(k, q) = s * hp + c * wc * hq;
          const cplx vp = V(k, p), vq = V(k, q);
          V(k, p) = c * vp - s * wc * vq;
          V(k, q) = s * vp + c * wc * vq;
        }
        for (Eigen::Index k = 0; k < m; ++k) {
          const cplx hp = H(p, k), hq = H(q, k);
          H(p, k) = c * hp - s * w * hq;
          H(q, k) = s * hp + c * w * hq;
        }
        H(p, q) = 0.0;
        H(q, p) = 0.0;
        H(p, p) = H(p, p).real();
        H(q, q) = H(q, q).real();
      }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::vector<CVector> vecs;
  for (Eigen::Index j = 0; j < m; ++j) vecs.push_back(phase_normalized(V.col(j)));
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double la = H(a, a).real(), lb = H(b, b).real();
    if (la != lb) return la < lb;
    return lex_less(vecs[a], vecs[b]);
  });
  // Near-equal eigenvalues are ordered by eigenvector so the output does not
  // depend on roundoff in the last bits.
  const double tie = 1e-12 * std::max(1.0, norm);
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && H(order[j], order[j]).real() - H(order[j - 1], order[j - 1]).real() <= tie) ++j;
    std::sort(order.begin() + static_cast<long>(i), order.begin() + static_cast<long>(j),
              [&](Eigen::Index a, Eigen::Index b) { return lex_less(vecs[a], vecs[b]); });
    i = j;
  }

  Spectrum out;
  out.source = std::move(source);
  CMatrix U(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    out.eigenvalues.push_back(H(order[j], order[j]).real());
    U.col(j) = vecs[order[j]];
  }
  // Group members may be out of value order by at most the tie width.
  std::vector<double> sorted = out.eigenvalues;
  std::sort(sorted.begin(), sorted.end());
  out.eigenvalues = sorted;
  out.eigenvectors = U;
  return out;
}

Spectrum spectrum_from_values(std::vector<double> values, std::string source) {
  std::sort(values.begin(), values.end());
  Spectrum s;
  s.eigenvalues = std::move(values);
  s.source = std::move(source);
  return s;
}

double partial_sum(const std::vector<double>& ev, double k) {
  const double m = static_cast<double>(ev.size());
  if (!(k > 0.0)) throw InvalidArgument("k must be positive");
  if (k > m * (1.0 + 1e-12)) throw InvalidArgument("k exceeds the dimension of the spectrum");
  k = std::min(k, m);
  const auto fl = static_cast<std::size_t>(std::floor(k));
  double acc = 0.0;
  for (std::size_t i = 0; i < fl; ++i) acc += ev[i];
  if (fl < ev.size()) acc += (k - static_cast<double>(fl)) * ev[fl];
  return acc;
}

PositivityReport k_test(const Spectrum& s, double k, double eps) {
  PositivityReport r;
  r.k = k;
  r.partial_sum = partial_sum(s.eigenvalues, k);
  r.tolerance = eps * k * s.max_abs();
  r.nonneg = r.partial_sum >= -r.tolerance;
  r.positive = r.partial_sum > r.tolerance;
  r.kappa_bound = r.partial_sum / k;
  return r;
}

WeightPrincipleResult weight_principle(const Spectrum& s, const std::vector<double>& w, double total,
                                       double max_weight, double kappa, double tol) {
  if (w.size() != s.size()) throw DimensionMismatch("one weight per eigenvalue is required");
  if (kappa > 0.0) throw InvalidArgument("kappa must be nonpositive");
  if (!(max_weight > 0.0)) throw InvalidArgument("maxWeight must be positive");
  double sum = 0.0;
  for (double x : w) {
    if (x < -tol * max_weight || x > max_weight * (1.0 + tol))
      throw InvalidArgument("weight outside [0, maxWeight]");
    sum += x;
  }
  if (std::abs(sum - total) > tol * std::max(1.0, std::abs(total)))
    throw InvalidArgument("weights do not sum to totalWeight");
  WeightPrincipleResult r;
  r.upsilon = total / max_weight;
  if (r.upsilon > static_cast<double>(s.size()) * (1.0 + 1e-12))
    throw InvalidArgument("totalWeight / maxWeight exceeds the dimension");
  for (std::size_t i = 0; i < w.size(); ++i) r.weighted_sum += w[i] * s.eigenvalues[i];
  if (r.upsilon <= 0.0) {
    r.certified = true;
    return r;
  }
  r.partial_sum = partial_sum(s.eigenvalues, r.upsilon);
  r.chain_bound = max_weight * r.partial_sum;
  r.certified = r.partial_sum >= kappa * r.upsilon - tol * r.upsilon * std::max(1.0, s.max_abs());
  if (r.certified) r.bound = kappa * total;
  return r;
}

}  // namespace calab
