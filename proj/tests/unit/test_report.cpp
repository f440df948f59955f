#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "cforge/hypersurface.hpp"
#include "cforge/report.hpp"
#include "json.hpp"

using namespace cforge;

namespace {

SuiteConfig config(const std::string& manifold, const std::string& suite, int samples = 3) {
  SuiteConfig c;
  c.manifold = manifold;
  c.suite = suite;
  c.samples = samples;
  c.seed = 1;
  return c;
}

std::string without_wall_time(std::string json) {
  auto j = nlohmann::ordered_json::parse(json);
  j.erase("wall_time_ms");
  return j.dump();
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

}  // namespace

TEST(Report, SamplePointsDeterministicAndOnManifold) {
  const ManifoldDescriptor s6 = descriptor_by_name("s6");
  const auto a = sample_points(s6, 5, 42);
  const auto b = sample_points(s6, 5, 42);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].c, b[i].c);
    EXPECT_LT(std::abs(norm(a[i]) - 1.0), 1e-12);
  }
  for (const Vec& x : sample_points(descriptor_by_name("s5-umbilical"), 100, 7)) {
    EXPECT_EQ(x[6], std::sqrt(2.0) / 2.0);
  }
}

TEST(Report, NearlySasakianSuitePasses) {
  const VerificationReport r = run_suite(config("s5-umbilical", "nearly-sasakian", 5));
  EXPECT_TRUE(r.overall_pass) << ::testing::PrintToString(r.failing());
  ASSERT_NE(r.find("ns_defect"), nullptr);
  EXPECT_EQ(r.find("ns_defect")->points_evaluated, 5);
}

TEST(Report, NegativeControlFailsDefectFamilyOnly) {
  const VerificationReport r = run_suite(config("s5-geodesic", "nearly-sasakian"));
  EXPECT_FALSE(r.overall_pass);
  const std::vector<std::string> expected{"ns_defect", "ns_diagonal", "ns_dphi_identity"};
  EXPECT_EQ(r.failing(), expected);
  for (const auto& n : expected) EXPECT_GT(r.find(n)->max_residual, 0.05);
}

TEST(Report, AllContainsEveryCheckOnce) {
  const VerificationReport r = run_suite(config("s5-umbilical", "all", 1));
  std::set<std::string> names;
  for (const auto& c : r.checks) EXPECT_TRUE(names.insert(c.name).second) << c.name;
  for (const auto& suite : suite_names()) {
    if (suite == "all" || suite == "nearly-cosymplectic") continue;
    for (const auto& d : list_checks(suite, "s5-umbilical")) EXPECT_EQ(names.count(d.name), 1u) << suite << " " << d.name;
  }
  EXPECT_TRUE(r.overall_pass) << ::testing::PrintToString(r.failing());
}

TEST(Report, DeterministicJson) {
  const SuiteConfig c = config("s5-geodesic", "spectral", 4);
  const std::string a = to_json(run_suite(c));
  const std::string b = to_json(run_suite(c));
  EXPECT_EQ(without_wall_time(a), without_wall_time(b));
}

TEST(Report, JsonSchemaRoundTrips) {
  SuiteConfig c = config("s5-umbilical", "contact", 2);
  c.tolerances["contact_xi_interior_deta"] = 1e-6;
  const auto j = nlohmann::json::parse(to_json(run_suite(c)));
  EXPECT_EQ(j.at("schema"), "contact-forge/1");
  EXPECT_EQ(j.at("manifold"), "s5-umbilical");
  EXPECT_EQ(j.at("suite"), "contact");
  EXPECT_EQ(j.at("seed"), 1);
  EXPECT_EQ(j.at("samples"), 2);
  EXPECT_TRUE(j.at("overall_pass").get<bool>());
  EXPECT_TRUE(j.at("wall_time_ms").is_number());
  ASSERT_EQ(j.at("checks").size(), 2u);
  for (const auto& e : j.at("checks")) {
    for (const char* k : {"name", "paper_ref", "max_residual", "tolerance", "pass"}) EXPECT_TRUE(e.contains(k)) << k;
  }
  EXPECT_EQ(j.at("checks")[1].at("tolerance"), 1e-6);
  EXPECT_EQ(j.at("checks")[0].at("bound"), "lower");
}

TEST(Report, TextHasOneLinePerCheck) {
  const VerificationReport r = run_suite(config("s5-umbilical", "acm-axioms", 2));
  const std::string text = to_text(r);
  for (const auto& c : r.checks) {
    const auto pos = text.find(c.name);
    ASSERT_NE(pos, std::string::npos);
    const std::string line = text.substr(pos, text.find('\n', pos) - pos);
    EXPECT_NE(line.find("e-"), std::string::npos) << line;
  }
}

TEST(Report, ConfigErrors) {
  auto code = [](const SuiteConfig& c) {
    try {
      run_suite(c);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;  // sentinel: no error
  };
  EXPECT_EQ(code(config("s7", "su2")), ErrorCode::UnknownManifold);
  EXPECT_EQ(code(config("s5-umbilical", "nonsense")), ErrorCode::Config);
  EXPECT_EQ(code(config("s5-umbilical", "su2", 0)), ErrorCode::Config);
  EXPECT_EQ(code(config("s6", "su2")), ErrorCode::Config);
  EXPECT_EQ(code(config("s5-geodesic", "connections")), ErrorCode::Config);
  SuiteConfig bad_tol = config("s5-umbilical", "contact");
  bad_tol.tolerances["contact_volume"] = -1.0;
  EXPECT_EQ(code(bad_tol), ErrorCode::Config);
  SuiteConfig unknown_tol = config("s5-umbilical", "contact");
  unknown_tol.tolerances["nope"] = 1.0;
  EXPECT_EQ(code(unknown_tol), ErrorCode::Config);
  EXPECT_THROW(parse_report_format("xml"), Error);
}

TEST(Report, LowerBoundAndNaNSemantics) {
  CheckGroup g;
  g.checks = {{"lower", "", 1.0, Bound::Lower}, {"upper", "", 1.0, Bound::Upper}, {"nan", "", 1.0, Bound::Upper}};
  int calls = 0;
  g.at_point = [&calls](const Vec&) {
    ++calls;
    return std::vector<double>{calls == 2 ? 0.5 : 3.0, 0.25 * calls, calls == 1 ? std::nan("") : 0.0};
  };
  const VerificationReport r = run_checks(config("s6", "all", 3), {g});
  EXPECT_EQ(r.find("lower")->max_residual, 0.5);
  EXPECT_FALSE(r.find("lower")->pass);
  EXPECT_EQ(r.find("upper")->max_residual, 0.75);
  EXPECT_TRUE(r.find("upper")->pass);
  EXPECT_TRUE(std::isnan(r.find("nan")->max_residual));
  EXPECT_FALSE(r.find("nan")->pass);
  EXPECT_FALSE(r.overall_pass);
  EXPECT_NE(to_json(r).find("null"), std::string::npos);
}

TEST(Report, ThrowingCheckFailsWithMessage) {
  CheckGroup g;
  g.checks = {{"boom", "", 1.0, Bound::Upper}};
  g.at_point = [](const Vec&) -> std::vector<double> { throw Error(ErrorCode::DegeneratePlane, "flat"); };
  const VerificationReport r = run_checks(config("s6", "all", 2), {g});
  EXPECT_FALSE(r.checks[0].pass);
  EXPECT_NE(r.checks[0].error.find("flat"), std::string::npos);
}

TEST(Report, PerturbedStructuresFail) {
  AcmStructure s = structure_by_name("s5-umbilical");
  s.phi = 1.1 * s.phi;
  const VerificationReport r = run_checks(config("s5-umbilical", "acm-axioms"), acm_axiom_checks(s));
  ASSERT_NE(r.find("acm_phi_squared"), nullptr);
  EXPECT_FALSE(r.find("acm_phi_squared")->pass);
  EXPECT_GT(r.find("acm_phi_squared")->max_residual, 0.05);

  const CayleyTable bad =
      table_from_lines({{{1, 2, 3}, {1, 4, 5}, {1, 7, 6}, {2, 5, 7}, {2, 6, 4}, {3, 4, 7}, {3, 6, 5}}});
  const VerificationReport o = run_checks(config("s6", "hypersurface"), octonion_checks(bad, 200, 5));
  EXPECT_FALSE(o.find("octonion_norm_composition")->pass);
  EXPECT_GT(o.find("octonion_norm_composition")->max_residual, 0.05);
  EXPECT_EQ(o.find("octonion_norm_composition")->points_evaluated, 200);
}

TEST(Report, ConfigFileAndEmit) {
  const std::string cfg = temp_path("cforge_cfg.json");
  {
    std::ofstream out(cfg);
    out << R"({"manifold": "s5-geodesic", "suite": "contact", "samples": 2, "seed": 9,
              "tol": {"contact_volume": 0.25}, "report": "text"})";
  }
  const SuiteConfig c = load_config_file(cfg);
  EXPECT_EQ(c.manifold, "s5-geodesic");
  EXPECT_EQ(c.samples, 2);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.tolerances.at("contact_volume"), 0.25);
  EXPECT_EQ(c.format, ReportFormat::Text);

  const std::string path = temp_path("cforge_report.txt");
  emit(run_suite(c), c.format, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_NE(ss.str().find("contact_volume"), std::string::npos);
  std::remove(path.c_str());

  {
    std::ofstream out(cfg);
    out << R"({"manifold": "s6", "colour": "blue"})";
  }
  EXPECT_THROW(load_config_file(cfg), Error);
  std::remove(cfg.c_str());
  EXPECT_THROW(load_config_file(temp_path("missing_cfg.json")), Error);
  EXPECT_THROW(emit(run_suite(c), ReportFormat::Json, "/nonexistent-dir/x.json"), Error);
}
