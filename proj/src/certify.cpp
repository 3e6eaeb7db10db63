#include "calabi_lab/certify.hpp"

#include <cmath>

#include "calabi_lab/errors.hpp"

namespace calab {

namespace {

std::optional<std::int64_t> exact_sqrt(std::int64_t x) {
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(x))));
  for (std::int64_t c = std::max<std::int64_t>(0, r - 1); c <= r + 1; ++c)
    if (c * c == x) return c;
  return std::nullopt;
}

double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

Verdict verdict_of(const PositivityReport& r) {
  if (r.positive) return Verdict::vanishes;
  if (r.nonneg) return Verdict::parallel_only;
  return Verdict::not_certified;
}

Certificate assemble(const Spectrum& s, int n, CertMode mode) {
  Certificate cert;
  cert.mode = mode;
  cert.n = n;
  cert.source = s.source;
  auto threshold = [&](int p, int q) -> double {
    if (mode == CertMode::calabi_upsilon) return upsilon(n, p, q).value;
    const auto g = gamma(n, p, q);
    if (!g) throw InvalidArgument("Gamma threshold undefined at this bidegree");
    return g->value;
  };
  std::map<std::pair<int, int>, BidegreeVerdict> direct;
  for (int p = 0; p <= n; ++p)
    for (int q = 0; p + q <= n; ++q) {
      if (p + q == 0) continue;
      BidegreeVerdict v;
      v.p = v.from_p = p;
      v.q = v.from_q = q;
      v.threshold = threshold(p, q);
      if (v.threshold <= 0.0) {
        // Empty partial sum: the curvature term vanishes identically.
        v.report.k = v.threshold;
        v.report.nonneg = true;
        v.report.positive = false;
      } else {
        v.report = k_test(s, v.threshold);
      }
      v.verdict = verdict_of(v.report);
      direct[{p, q}] = v;
    }
  cert.summary_certified = true;
  for (const auto& [pq, v] : direct)
    if (v.verdict != Verdict::vanishes) cert.summary_certified = false;
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) {
      if ((p == 0 && q == 0) || (p == n && q == n)) continue;
      if (p + q <= n) {
        cert.verdicts.push_back(direct.at({p, q}));
        continue;
      }
      BidegreeVerdict v = direct.at({n - p, n - q});
      v.p = p;
      v.q = q;
      v.provenance = Provenance::duality;
      cert.verdicts.push_back(v);
    }
  return cert;
}

}  // namespace

ThresholdValue upsilon(int n, int p, int q) {
  if (n < 1 || p < 0 || q < 0) throw InvalidArgument("upsilon needs n >= 1 and p, q >= 0");
  const std::int64_t num = static_cast<std::int64_t>(p + q) * (n + 1) - 2LL * p * q;
  const int lo = std::min(p, q), hi = std::max(p, q);
  ThresholdValue t;
  const double m = std::min({static_cast<double>(lo), std::sqrt(static_cast<double>(p) * q) / 2.0});
  t.value = static_cast<double>(num) / (2.0 + 4.0 * m);
  if (lo == 0 || hi >= 4 * lo) {
    t.exact = Rational(num, 2 + 4LL * lo);
  } else if (auto r = exact_sqrt(static_cast<std::int64_t>(p) * q)) {
    t.exact = Rational(num, 2 + 2 * *r);  // 2 + 4 (r/2)
  }
  if (t.exact) t.value = to_double(*t.exact);
  return t;
}

std::optional<ThresholdValue> gamma(int n, int p, int q) {
  if (n < 1 || p < 0 || q < 0) throw InvalidArgument("gamma needs n >= 1 and p, q >= 0");
  const std::int64_t N = n;
  const std::int64_t num = N * (N * N - 1) * (p + q) - 2 * N * (N - 1) * p * q;
  const std::int64_t den = N * (N - 1) * (p + q) + static_cast<std::int64_t>(p - q) * (p - q);
  if (den == 0) return std::nullopt;
  ThresholdValue t;
  t.exact = Rational(num, den);
  t.value = to_double(*t.exact);
  return t;
}

ThresholdTable thresholds(int n) {
  if (n < 1) throw InvalidArgument("thresholds need n >= 1");
  ThresholdTable t;
  t.n = n;
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) {
      if (p == 0 && q == 0) continue;
      t.upsilon[{p, q}] = upsilon(n, p, q);
      t.gamma[{p, q}] = gamma(n, p, q);
    }
  return t;
}

bool ke_reduction_holds(int n) {
  const Rational target(n + 2, 2);
  for (int p = 0; p <= n; ++p)
    for (int q = 0; p + q <= n; ++q) {
      if (p + q == 0) continue;
      const auto g = gamma(n, p, q);
      if (!g || *g->exact < target) return false;
    }
  return true;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::vanishes: return "vanishes";
    case Verdict::parallel_only: return "parallel_only";
    case Verdict::not_certified: return "not_certified";
  }
  return "not_certified";
}

std::string to_string(Provenance p) { return p == Provenance::direct ? "direct" : "duality"; }

std::string to_string(CertMode m) { return m == CertMode::calabi_upsilon ? "calabi" : "ke"; }

const BidegreeVerdict& Certificate::at(int p, int q) const {
  for (const auto& v : verdicts)
    if (v.p == p && v.q == q) return v;
  throw InvalidArgument("no verdict for this bidegree");
}

Certificate certify_calabi(const Spectrum& calabi, int n) {
  if (n < 1) throw InvalidArgument("n must be positive");
  if (static_cast<int>(calabi.size()) != n * (n + 1) / 2)
    throw DimensionMismatch("Calabi spectrum must have n(n+1)/2 eigenvalues");
  return assemble(calabi, n, CertMode::calabi_upsilon);
}

Certificate certify_ke(const Spectrum& ksu, int n) {
  if (n < 1) throw InvalidArgument("n must be positive");
  if (static_cast<int>(ksu.size()) != n * n - 1)
    throw DimensionMismatch("su(n) spectrum must have n^2 - 1 eigenvalues");
  Certificate cert = assemble(ksu, n, CertMode::ke_gamma);
  cert.reduction_holds = ke_reduction_holds(n);
  if (ksu.size() > 0) cert.ladder_test = k_test(ksu, std::min(n / 2.0 + 1.0, static_cast<double>(ksu.size())));
  return cert;
}

}  // namespace calab
