// calabi-lab: curvature operators, Weitzenboeck terms and vanishing certificates.
//
// Exit codes: 0 every check passed, 1 some check failed, 2 usage or input error.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "calabi_lab/commands.hpp"
#include "calabi_lab/errors.hpp"

namespace {

void add_format(CLI::App* app, calab::RunConfig& cfg) {
  app->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"table", "json", "csv"}));
  app->add_option("--output,-o", cfg.output, "Write the report to this file instead of stdout");
}

void add_filter(CLI::App* app, calab::RunConfig& cfg) {
  app->add_option("--p", cfg.p, "Only report this holomorphic degree")->check(CLI::NonNegativeNumber);
  app->add_option("--q", cfg.q, "Only report this antiholomorphic degree")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  calab::RunConfig cfg;
  CLI::App app{"Calabi and Kaehler curvature operators, Weitzenboeck curvature terms on (p,q)-forms, "
               "and Hodge-number vanishing certificates"};
  app.set_version_flag("--version", std::string(CALABI_LAB_VERSION));
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Run the identity and estimate suite on random inputs");
  verify->add_option("--n", cfg.n, "Complex dimension")->check(CLI::PositiveNumber);
  verify->add_option("--trials", cfg.trials, "Random trials per check")->check(CLI::PositiveNumber);
  verify->add_option("--seed", cfg.seed, "Master seed");
  verify->add_option("--tol", cfg.tol, "Relative tolerance for direct identities");
  verify->add_option("--eig-tol", cfg.eig_tol, "Relative tolerance for identities through eigendecompositions");
  verify->add_option("--max-n", cfg.max_n, "Largest accepted --n")->check(CLI::Range(1, 8));
  verify->add_option("--max-degree", cfg.max_degree, "Largest p+q in form sweeps")->check(CLI::Range(1, 16));
  verify->add_flag("--stress", cfg.stress, "Also run the local search for the optimal estimate constant");
  add_format(verify, cfg);

  auto* spectrum = app.add_subcommand("spectrum", "Calabi spectrum and k-positivity ladder of a space");
  spectrum->add_option("--space", cfg.space, "Space descriptor, e.g. chsc:n=3,c=1 or quadric:n=4")->required();
  add_format(spectrum, cfg);

  auto* thresholds = app.add_subcommand("thresholds", "Tables of the Upsilon and Gamma thresholds");
  thresholds->add_option("--n", cfg.n, "Complex dimension")->check(CLI::PositiveNumber);
  add_filter(thresholds, cfg);
  add_format(thresholds, cfg);

  auto* certify = app.add_subcommand("certify", "Per-bidegree vanishing certificate for a space");
  certify->add_option("--space", cfg.space, "Space descriptor")->required();
  certify->add_option("--mode", cfg.mode, "Operator to test")->check(CLI::IsMember({"calabi", "ke"}));
  add_filter(certify, cfg);
  add_format(certify, cfg);

  // Fault injection for mutation testing; intentionally undocumented.
  for (auto* sub : {verify, spectrum, thresholds, certify})
    sub->add_flag("--inject-sign-bug", cfg.inject_sign_bug)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    const calab::ReportEnvelope report = calab::dispatch(cfg);
    const std::string text = calab::render(report, cfg.format);
    if (cfg.output.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.output, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << cfg.output << '\n';
        return 2;
      }
      out << text;
    }
    return report.passed() ? 0 : 1;
  } catch (const calab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
