// contactforge: batch verification runner.
//
//   contactforge verify --manifold <name> --suite <name> [--samples N] [--seed S]
//                       [--tol name=value ...] [--report json|text] [--out PATH] [--config FILE]
//   contactforge list-checks --suite <name> [--manifold <name>]
//
// Exit status: 0 all checks pass, 1 some check failed, 2 configuration or usage error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cforge/manifold.hpp"
#include "cforge/report.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

void parse_tolerances(const std::vector<std::string>& items, cforge::SuiteConfig& c) {
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw cforge::Error(cforge::ErrorCode::Config, "--tol expects name=value, got '" + item + "'");
    }
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty()) {
      throw cforge::Error(cforge::ErrorCode::Config, "tolerance '" + value + "' is not a number");
    }
    c.tolerances[name] = v;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of almost contact metric geometry on octonionic spheres"};
  app.require_subcommand(1);

  CLI::App* verify = app.add_subcommand("verify", "Run a suite and emit a report");
  std::string config_path;
  std::string manifold;
  std::string suite;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> tols;
  std::string report;
  std::string out;
  verify->add_option("--config", config_path, "JSON config file; flags override its values");
  auto* o_manifold = verify->add_option("--manifold", manifold, "s6, s5-geodesic or s5-umbilical");
  auto* o_suite = verify->add_option("--suite", suite, "suite name or 'all'");
  auto* o_samples = verify->add_option("--samples", samples, "sample points per check (default 50)");
  auto* o_seed = verify->add_option("--seed", seed, "sampling seed (default 42)");
  auto* o_tol = verify->add_option("--tol", tols, "tolerance override name=value (repeatable)");
  auto* o_report = verify->add_option("--report", report, "json or text (default json)");
  auto* o_out = verify->add_option("--out", out, "output path (default stdout)");

  CLI::App* list = app.add_subcommand("list-checks", "List the checks of a suite");
  std::string list_suite;
  std::string list_manifold = "s5-umbilical";
  list->add_option("--suite", list_suite, "suite name or 'all'")->required();
  list->add_option("--manifold", list_manifold, "manifold selecting mode-dependent checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*list) {
      for (const auto& d : cforge::list_checks(list_suite, list_manifold)) {
        std::cout << d.name << "\t" << d.formula << "\n";
      }
      return kExitPass;
    }

    cforge::SuiteConfig c;
    if (!config_path.empty()) c = cforge::load_config_file(config_path, c);
    if (*o_manifold) c.manifold = manifold;
    if (*o_suite) c.suite = suite;
    if (*o_samples) c.samples = samples;
    if (*o_seed) c.seed = seed;
    if (*o_tol) parse_tolerances(tols, c);
    if (*o_report) c.format = cforge::parse_report_format(report);
    if (*o_out) c.out = out;

    const cforge::VerificationReport r = cforge::run_suite(c);
    cforge::emit(r, c.format, c.out);
    return r.overall_pass ? kExitPass : kExitFail;
  } catch (const cforge::Error& e) {
    std::cerr << "contactforge: " << e.what() << "\n";
    return kExitUsage;
  }
}
