#pragma once

#include <optional>
#include <string>
#include <vector>

#include "calabi_lab/frame.hpp"

namespace calab {

struct Spectrum {
  std::vector<double> eigenvalues;      // ascending
  std::optional<CMatrix> eigenvectors;  // column j belongs to eigenvalues[j]
  std::string source;
  std::size_t size() const { return eigenvalues.size(); }
  double max_abs() const;
};

struct JacobiOptions {
  double rel_threshold = 1e-13;
  int max_sweeps = 100;
  double hermitian_tol = 1e-10;
};

// Cyclic complex Jacobi. Ties in eigenvalue are ordered by the phase-normalized
// eigenvectors, compared lexicographically.
Spectrum eigensystem(const CMatrix& H, std::string source = {}, const JacobiOptions& opts = {});

// Spectrum without eigenvectors; values are sorted.
Spectrum spectrum_from_values(std::vector<double> values, std::string source = {});

// lambda_1 + ... + lambda_floor(k) + (k - floor k) lambda_{floor(k)+1}; the
// fractional term is dropped when floor(k) equals the dimension.
double partial_sum(const std::vector<double>& ascending, double k);

struct PositivityReport {
  double k = 0.0;
  double partial_sum = 0.0;
  bool nonneg = false;
  bool positive = false;
  std::optional<double> kappa_bound;  // partial_sum / k
  double tolerance = 0.0;             // margin used for both flags
};

// nonneg iff partial_sum >= -eps k |s|_inf, positive iff partial_sum > eps k |s|_inf.
PositivityReport k_test(const Spectrum& s, double k, double eps = 1e-10);

struct WeightPrincipleResult {
  bool certified = false;
  double upsilon = 0.0;        // totalWeight / maxWeight
  double partial_sum = 0.0;    // at upsilon
  double chain_bound = 0.0;    // maxWeight * partial_sum, the greedy minimum of sum w lambda
  double bound = 0.0;          // kappa * totalWeight when certified
  double weighted_sum = 0.0;   // direct evaluation of sum w_nu lambda_nu
};

// Weights are indexed like s.eigenvalues.
WeightPrincipleResult weight_principle(const Spectrum& s, const std::vector<double>& weights,
                                       double total_weight, double max_weight, double kappa,
                                       double tol = 1e-9);

}  // namespace calab
