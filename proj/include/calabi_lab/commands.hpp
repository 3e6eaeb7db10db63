#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "calabi_lab/report.hpp"

namespace calab {

struct RunConfig {
  std::string command;
  int n = 3;
  std::optional<int> p, q;  // bidegree filter for thresholds and certify
  std::string space;
  int trials = 20;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  double eig_tol = 1e-9;
  std::string format = "table";
  std::string output;  // empty means stdout
  std::string mode = "calabi";
  int max_n = 4;       // ceiling for verify sweeps
  int max_degree = 4;
  bool stress = false;
  bool inject_sign_bug = false;

  // Echo for reports. The output path is left out; fault injection is
  // listed only when enabled.
  Json to_json() const;
};

ReportEnvelope cmd_verify(const RunConfig& cfg);
ReportEnvelope cmd_spectrum(const RunConfig& cfg);
ReportEnvelope cmd_thresholds(const RunConfig& cfg);
ReportEnvelope cmd_certify(const RunConfig& cfg);
ReportEnvelope dispatch(const RunConfig& cfg);

}  // namespace calab
