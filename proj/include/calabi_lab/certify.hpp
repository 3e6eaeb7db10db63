#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "calabi_lab/spectral.hpp"

namespace calab {

using Rational = boost::rational<std::int64_t>;

struct ThresholdValue {
  double value = 0.0;
  std::optional<Rational> exact;  // absent when the value involves an irrational sqrt(pq)/2
};

// ((p+q)(n+1) - 2pq) / (2 + 4 min(p, q, sqrt(pq)/2))
ThresholdValue upsilon(int n, int p, int q);
// (n(n^2-1)(p+q) - 2n(n-1)pq) / (n(n-1)(p+q) + (p-q)^2); absent when the denominator vanishes.
std::optional<ThresholdValue> gamma(int n, int p, int q);

struct ThresholdTable {
  int n = 0;
  std::map<std::pair<int, int>, ThresholdValue> upsilon;
  std::map<std::pair<int, int>, std::optional<ThresholdValue>> gamma;
};
// Entries for 0 <= p, q <= n except (0, 0).
ThresholdTable thresholds(int n);

enum class Verdict { vanishes, parallel_only, not_certified };
enum class Provenance { direct, duality };
enum class CertMode { calabi_upsilon, ke_gamma };
std::string to_string(Verdict v);
std::string to_string(Provenance p);
std::string to_string(CertMode m);

struct BidegreeVerdict {
  int p = 0, q = 0;
  Verdict verdict = Verdict::not_certified;
  Provenance provenance = Provenance::direct;
  int from_p = 0, from_q = 0;  // bidegree whose test decided this one
  double threshold = 0.0;
  PositivityReport report;
};

struct Certificate {
  CertMode mode = CertMode::calabi_upsilon;
  int n = 0;
  std::string source;
  std::vector<BidegreeVerdict> verdicts;  // all 0 <= p, q <= n except (0,0) and (n,n)
  bool summary_certified = false;         // every 1 <= p+q <= n is strict
  // KE mode: whether Gamma_{p,q} >= n/2 + 1 on 1 <= p+q <= n, and the test at n/2 + 1.
  std::optional<bool> reduction_holds;
  std::optional<PositivityReport> ladder_test;
  std::string scope = "pointwise curvature hypothesis; harmonic-form conclusions are manifold-level";
  const BidegreeVerdict& at(int p, int q) const;
};

Certificate certify_calabi(const Spectrum& calabi, int n);
Certificate certify_ke(const Spectrum& kaehler_su, int n);

// Gamma_{p,q} >= n/2 + 1 for every 1 <= p+q <= n (exact arithmetic).
bool ke_reduction_holds(int n);

}  // namespace calab
