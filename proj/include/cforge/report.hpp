#pragma once

// Batch verification: named checks grouped into suites, evaluated at
// deterministic sample points, aggregated by max and emitted as JSON or text.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cforge/acm.hpp"
#include "cforge/octonion.hpp"

namespace cforge {

inline constexpr const char* kReportSchema = "contact-forge/1";

enum class ReportFormat { Json, Text };
const char* to_string(ReportFormat f);
/// "json" or "text"; Config error otherwise.
ReportFormat parse_report_format(const std::string& s);

struct SuiteConfig {
  std::string manifold = "s5-umbilical";
  std::string suite = "all";
  int samples = 50;
  std::map<std::string, double> tolerances;  // overrides by check name
  std::uint64_t seed = 42;
  ReportFormat format = ReportFormat::Json;
  std::string out;  // empty: stdout
};

std::vector<std::string> suite_names();
/// Throws Config (bad suite, samples, tolerance, suite/manifold mismatch) or
/// UnknownManifold.
void validate(const SuiteConfig& c);

/// Upper: pass iff value ≤ tolerance. Lower: pass iff value ≥ tolerance and the
/// reported value is the observed minimum.
enum class Bound { Upper, Lower };

struct CheckDef {
  std::string name;
  std::string formula;
  double tolerance = 0.0;
  Bound bound = Bound::Upper;
};

/// Several checks that share work. Exactly one of at_point / global is set;
/// both return one value per entry of `checks`.
struct CheckGroup {
  std::vector<CheckDef> checks;
  std::function<std::vector<double>(const Vec&)> at_point;
  std::function<std::vector<double>(const std::vector<Vec>&)> global;
  int global_points = 0;  // points_evaluated for global groups; 0 means the sample count
};

CheckGroup single(const PointCheck& c, double tolerance);

struct CheckResult {
  std::string name;
  std::string formula;
  double max_residual = 0.0;
  double tolerance = 0.0;
  Bound bound = Bound::Upper;
  bool pass = false;
  int points_evaluated = 0;
  std::string error;  // set when evaluation threw; the check then fails
};

struct VerificationReport {
  SuiteConfig config;
  std::vector<CheckResult> checks;
  bool overall_pass = false;
  double wall_time_ms = 0.0;

  const CheckResult* find(const std::string& name) const;
  std::vector<std::string> failing() const;
};

/// Check groups of a suite on a manifold, in report order. "all" is the union
/// of the suites applicable to the manifold.
std::vector<CheckGroup> suite_checks(const std::string& suite, const std::string& manifold, std::uint64_t seed);

/// Building blocks, public so that perturbed structures can be checked.
std::vector<CheckGroup> acm_axiom_checks(const AcmStructure& s);
std::vector<CheckGroup> octonion_checks(const CayleyTable& t, int pairs, std::uint64_t seed);

/// Evaluates groups at sample_points(manifold, samples, seed). Errors thrown by
/// a check are recorded on its results.
VerificationReport run_checks(const SuiteConfig& c, const std::vector<CheckGroup>& groups);
/// validate + suite_checks + run_checks.
VerificationReport run_suite(const SuiteConfig& c);

/// Check names of a suite; the manifold picks among mode-dependent variants.
std::vector<CheckDef> list_checks(const std::string& suite, const std::string& manifold);

std::string to_json(const VerificationReport& r);
std::string to_text(const VerificationReport& r);
/// Writes to `path`, or stdout when empty. Throws Io.
void emit(const VerificationReport& r, ReportFormat f, const std::string& path);

/// Reads a JSON config object with keys manifold, suite, samples, seed, tol,
/// report, out. Throws Config or Io.
SuiteConfig load_config_file(const std::string& path, SuiteConfig base = {});

}  // namespace cforge
