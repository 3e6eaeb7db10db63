#pragma once

#include <cstdint>
#include <vector>

#include "calabi_lab/report.hpp"

namespace calab {

struct VerifyOptions {
  int n = 3;
  int trials = 20;
  std::uint64_t seed = 0;
  double tol = 1e-10;      // direct multilinear identities
  double eig_tol = 1e-9;   // identities routed through an eigendecomposition
  int max_degree = 4;      // cap on p + q in form sweeps
  bool stress = false;     // run the local search for the optimal estimate constant
};

// Every check of the identity suite, in a fixed order. Trials fan out over
// threads; each trial draws from its own stream so the report is independent
// of scheduling.
std::vector<CheckRecord> run_verify_suite(const VerifyOptions& opts);

}  // namespace calab
