#include "calabi_lab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "calabi_lab/certify.hpp"
#include "calabi_lab/curvature.hpp"
#include "calabi_lab/errors.hpp"
#include "calabi_lab/model_spaces.hpp"
#include "calabi_lab/space_parser.hpp"
#include "calabi_lab/spectral.hpp"
#include "calabi_lab/verify_suite.hpp"

namespace calab {

Json RunConfig::to_json() const {
  Json j;
  j["command"] = command;
  if (command == "verify" || command == "thresholds") j["n"] = n;
  if (p) j["p"] = *p;
  if (q) j["q"] = *q;
  if (!space.empty()) j["space"] = space;
  if (command == "verify") {
    j["trials"] = trials;
    j["seed"] = seed;
    j["tol"] = tol;
    j["eig_tol"] = eig_tol;
    j["max_n"] = max_n;
    j["max_degree"] = max_degree;
    j["stress"] = stress;
  }
  if (command == "certify") j["mode"] = mode;
  j["format"] = format;
  if (inject_sign_bug) j["inject_sign_bug"] = true;
  return j;
}

namespace {

Json rational_json(const std::optional<Rational>& r) {
  if (!r) return nullptr;
  if (r->denominator() == 1) return std::to_string(r->numerator());
  return std::to_string(r->numerator()) + "/" + std::to_string(r->denominator());
}

Json threshold_json(const ThresholdValue& v) { return Json{{"value", v.value}, {"exact", rational_json(v.exact)}}; }

Json report_json(const PositivityReport& r) {
  return Json{{"k", r.k},
              {"partial_sum", r.partial_sum},
              {"nonneg", r.nonneg},
              {"positive", r.positive},
              {"kappa_bound", r.kappa_bound ? Json(*r.kappa_bound) : Json(nullptr)},
              {"tolerance", r.tolerance}};
}

bool keep(const RunConfig& cfg, int p, int q) { return (!cfg.p || *cfg.p == p) && (!cfg.q || *cfg.q == q); }

struct Loaded {
  SpaceDescriptor desc;
  AlgebraicCurvatureTensor R;
};

Loaded load_space(const RunConfig& cfg) {
  if (cfg.space.empty()) throw InvalidArgument("--space is required");
  SpaceDescriptor d = parse_space(cfg.space);
  return Loaded{d, build(d)};
}

CheckRecord validation_record(const AlgebraicCurvatureTensor& R) {
  const auto& r = R.residuals();
  CheckRecord c;
  c.name = "tensor_validation";
  c.anchor = "input satisfies the curvature and Kaehler symmetries";
  c.status = R.kaehler_validated() && R.bianchi_validated() ? Status::pass : Status::fail;
  c.values = Json{{"antisym_first", r.antisym_first}, {"antisym_second", r.antisym_second},
                  {"pair_exchange", r.pair_exchange}, {"bianchi", r.bianchi},
                  {"kaehler", r.kaehler}};
  return c;
}

void require_kaehler(const AlgebraicCurvatureTensor& R) {
  if (!R.kaehler_validated()) throw NotKaehler("input tensor is not J-invariant");
}

}  // namespace

ReportEnvelope cmd_verify(const RunConfig& cfg) {
  if (cfg.n < 1) throw InvalidArgument("--n must be at least 1");
  if (cfg.n > cfg.max_n) throw InvalidArgument("--n exceeds --max-n (" + std::to_string(cfg.max_n) + ")");
  if (cfg.trials < 1) throw InvalidArgument("--trials must be positive");
  VerifyOptions o;
  o.n = cfg.n;
  o.trials = cfg.trials;
  o.seed = cfg.seed;
  o.tol = cfg.tol;
  o.eig_tol = cfg.eig_tol;
  o.max_degree = cfg.max_degree;
  o.stress = cfg.stress;
  ReportEnvelope r;
  r.command = "verify";
  r.config = cfg.to_json();
  r.checks = run_verify_suite(o);
  return r;
}

ReportEnvelope cmd_spectrum(const RunConfig& cfg) {
  const Loaded in = load_space(cfg);
  require_kaehler(in.R);
  const int n = in.R.n();
  const Spectrum s = eigensystem(calabi_from_tensor(in.R).entries, "calabi:" + describe(in.desc));
  const double m = static_cast<double>(s.size());

  // k values with every label that produced them, ascending.
  std::map<double, std::vector<std::string>> ks;
  ks[1.0].push_back("1");
  ks[n / 2.0].push_back("n/2");
  ks[n / 2.0 + 1.0].push_back("n/2+1");
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= p && p + q <= n; ++q)
      if (p + q >= 1) ks[upsilon(n, p, q).value].push_back("Upsilon_" + std::to_string(p) + "," + std::to_string(q));
  Json ladder = Json::array();
  for (const auto& [k, labels] : ks) {
    if (!(k > 0.0) || k > m) continue;
    Json row = report_json(k_test(s, k));
    row["labels"] = labels;
    ladder.push_back(std::move(row));
  }
  ReportEnvelope r;
  r.command = "spectrum";
  r.config = cfg.to_json();
  r.checks.push_back(validation_record(in.R));
  r.results["space"] = describe(in.desc);
  r.results["n"] = n;
  r.results["operator"] = "calabi";
  r.results["basis"] = "Z_a (.) Z_b / sqrt 2 (a < b), Z_a (x) Z_a";
  r.results["eigenvalues"] = s.eigenvalues;
  r.results["ladder"] = std::move(ladder);
  const RicciData rd = ricci(in.R);
  r.results["scal"] = rd.scal;
  r.results["einstein_lambda"] = rd.einstein_lambda ? Json(*rd.einstein_lambda) : Json(nullptr);
  if (rd.einstein_lambda && n >= 2) {
    const Spectrum ksu = eigensystem(restrict_su(kaehler_operator(in.R), rd).entries, "kaehler_su");
    r.results["kaehler_su_eigenvalues"] = ksu.eigenvalues;
  }
  return r;
}

ReportEnvelope cmd_thresholds(const RunConfig& cfg) {
  if (cfg.n < 1) throw InvalidArgument("--n must be at least 1");
  if (cfg.n > 64) throw InvalidArgument("--n is limited to 64 for threshold tables");
  const int n = cfg.n;
  const ThresholdTable t = thresholds(n);
  Json rows = Json::array();
  bool ups_ok = true;
  for (const auto& [pq, u] : t.upsilon) {
    const auto [p, q] = pq;
    if (p + q >= 1 && p + q <= n && u.value < n / 2.0) ups_ok = false;
    if (!keep(cfg, p, q)) continue;
    const auto& g = t.gamma.at(pq);
    rows.push_back(Json{{"p", p}, {"q", q}, {"upsilon", threshold_json(u)},
                        {"gamma", g ? threshold_json(*g) : Json(nullptr)}});
  }
  ReportEnvelope r;
  r.command = "thresholds";
  r.config = cfg.to_json();
  CheckRecord a;
  a.name = "upsilon_lower_bound";
  a.anchor = "Upsilon_{p,q} >= n/2 for 1 <= p+q <= n";
  a.status = ups_ok ? Status::pass : Status::fail;
  a.values = Json{{"n", n}, {"bound", n / 2.0}};
  r.checks.push_back(a);
  CheckRecord b;
  b.name = "ke_reduction_threshold";
  b.anchor = "Gamma_{p,q} >= n/2 + 1 for 1 <= p+q <= n";
  const bool red = ke_reduction_holds(n);
  b.status = red ? Status::pass : Status::fail;
  b.values = Json{{"n", n}, {"bound", n / 2.0 + 1.0}};
  r.checks.push_back(b);
  r.results["n"] = n;
  r.results["table"] = std::move(rows);
  return r;
}

ReportEnvelope cmd_certify(const RunConfig& cfg) {
  const Loaded in = load_space(cfg);
  require_kaehler(in.R);
  const int n = in.R.n();
  Certificate cert;
  Spectrum s;
  if (cfg.mode == "calabi") {
    s = eigensystem(calabi_from_tensor(in.R).entries, "calabi:" + describe(in.desc));
    cert = certify_calabi(s, n);
  } else if (cfg.mode == "ke") {
    if (n < 2) throw InvalidArgument("ke mode needs n >= 2");
    const RicciData rd = ricci(in.R);
    s = eigensystem(restrict_su(kaehler_operator(in.R), rd).entries, "kaehler_su:" + describe(in.desc));
    cert = certify_ke(s, n);
  } else {
    throw InvalidArgument("--mode must be calabi or ke");
  }
  Json verdicts = Json::array();
  for (const auto& v : cert.verdicts) {
    if (!keep(cfg, v.p, v.q)) continue;
    Json row{{"p", v.p},
             {"q", v.q},
             {"verdict", to_string(v.verdict)},
             {"provenance", to_string(v.provenance)},
             {"from", Json::array({v.from_p, v.from_q})},
             {"threshold", v.threshold}};
    row["test"] = report_json(v.report);
    verdicts.push_back(std::move(row));
  }
  ReportEnvelope r;
  r.command = "certify";
  r.config = cfg.to_json();
  r.checks.push_back(validation_record(in.R));
  r.results["space"] = describe(in.desc);
  r.results["n"] = n;
  r.results["mode"] = to_string(cert.mode);
  r.results["eigenvalues"] = s.eigenvalues;
  r.results["verdicts"] = std::move(verdicts);
  r.results["summary_certified"] = cert.summary_certified;
  r.results["summary_label"] = cert.summary_certified ? "rational cohomology of P^n (pointwise hypothesis met)"
                                                      : "not certified";
  if (cert.reduction_holds) r.results["reduction_holds"] = *cert.reduction_holds;
  if (cert.ladder_test) r.results["ladder_test"] = report_json(*cert.ladder_test);
  r.results["scope"] = cert.scope;
  return r;
}

ReportEnvelope dispatch(const RunConfig& cfg) {
  testing::ScopedCalabiSignBug bug(cfg.inject_sign_bug);
  if (cfg.command == "verify") return cmd_verify(cfg);
  if (cfg.command == "spectrum") return cmd_spectrum(cfg);
  if (cfg.command == "thresholds") return cmd_thresholds(cfg);
  if (cfg.command == "certify") return cmd_certify(cfg);
  throw InvalidArgument("unknown command '" + cfg.command + "'");
}

}  // namespace calab
