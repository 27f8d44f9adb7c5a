#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "waclab/report.hpp"

using namespace waclab;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  fs::path p = fs::temp_directory_path() / "waclab_harness_test";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Config small_identities_cfg() {
  Config cfg;
  cfg.set("instances.count", "2");
  cfg.set("instances.sizes", "2x1,2x2");
  cfg.set("instances.target", "0");  // a nonzero target is unreachable at dim 2
  return cfg;
}

}  // namespace

TEST_CASE("config text parses sections, comments, and top-level keys") {
  Config cfg = parse_config_text(
      "seed = 9\n"
      "[instances]\n"
      "count = 3   # trailing comment\n"
      "n=2\n"
      "; full-line comment\n"
      "k = 1\n"
      "[suite]\n"
      "name = identities\n");
  CHECK(cfg.get("seed") == "9");
  CHECK(cfg.get_u64("seed", 0) == 9);
  CHECK(cfg.get_num("instances.count", 0) == 3.0);
  CHECK(cfg.has("instances.k"));
  CHECK(cfg.get("suite.name") == "identities");
  CHECK(cfg.get("missing", "fallback") == "fallback");
  CHECK(cfg.get_num("missing", 2.5) == 2.5);
}

TEST_CASE("config errors carry line numbers and bad values are typed errors") {
  try {
    parse_config_text("a = 1\nnonsense\n");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("[unterminated\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("= 5\n"), ConfigError);

  Config cfg = parse_config_text("x = banana\ny = 1.5\n");
  CHECK_THROWS_AS(cfg.get_num("x", 0), ConfigError);
  CHECK_THROWS_AS(cfg.get_u64("y", 0), ConfigError);  // not an integer
  CHECK(cfg.get_num("y", 0) == 1.5);

  CHECK_THROWS_AS(parse_config_file(tmp_dir() / "no_such_config.ini"), IoError);
}

TEST_CASE("matrix json round-trips bitwise and validates its shape") {
  Mat a(3, 2);
  a << cplx(1.0 / 3.0, -0.25), cplx(2e-17, 7.0), cplx(-1.5, 0.0), cplx(0.0, -3e8),
      cplx(0.1, 0.2), cplx(123456.789, -9.87e-5);
  Json j = matrix_to_json(a);
  Mat b = matrix_from_json(j);
  REQUIRE(b.rows() == 3);
  REQUIRE(b.cols() == 2);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);

  fs::path file = tmp_dir() / "m.json";
  write_matrix_file(file, a);
  Mat c = read_matrix_file(file);
  CHECK((a - c).cwiseAbs().maxCoeff() == 0.0);  // shortest-round-trip doubles

  Json missing = {{"rows", 2}, {"cols", 2}, {"re", {1, 2, 3, 4}}};
  CHECK_THROWS_AS(matrix_from_json(missing), IoError);
  Json short_im = {{"rows", 2}, {"cols", 2}, {"re", {1, 2, 3, 4}}, {"im", {0, 0}}};
  CHECK_THROWS_AS(matrix_from_json(short_im), IoError);
  CHECK_THROWS_AS(read_matrix_file(tmp_dir() / "absent.json"), IoError);
}

TEST_CASE("instance roster honors count, size cycling, and per-index seeds") {
  Config cfg;
  cfg.set("instances.count", "3");
  cfg.set("instances.sizes", "2x1, 4x2");
  cfg.set("instances.target", "0");
  std::vector<GeneratedPair> a = make_instances(cfg, 42, 10);
  REQUIRE(a.size() == 3);
  CHECK(a[0].s.dim() == 2);
  CHECK(a[1].s.dim() == 8);
  CHECK(a[2].s.dim() == 2);  // roster cycles
  CHECK(a[1].shape.n == 4);

  std::vector<GeneratedPair> b = make_instances(cfg, 42, 10);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(pair_hash(a[i].s.matrix(), a[i].t.matrix()) ==
          pair_hash(b[i].s.matrix(), b[i].t.matrix()));
  std::vector<GeneratedPair> c = make_instances(cfg, 43, 10);
  CHECK(pair_hash(a[0].s.matrix(), a[0].t.matrix()) !=
        pair_hash(c[0].s.matrix(), c[0].t.matrix()));

  Config empty;
  CHECK(make_instances(empty, 1, 2).size() == 2);  // default count and (n,k)
}

TEST_CASE("instance roster rejects bad configuration as ConfigError") {
  Config cfg;
  cfg.set("instances.count", "0");
  CHECK_THROWS_AS(make_instances(cfg, 1, 4), ConfigError);

  Config cons;
  cons.set("instances.construction", "frobnicate");
  CHECK_THROWS_AS(make_instances(cons, 1, 1), ConfigError);

  Config sizes;
  sizes.set("instances.sizes", "2y1");
  CHECK_THROWS_AS(make_instances(sizes, 1, 1), ConfigError);

  Config odd;  // module dimension 1 is infeasible for anticommuting pairs
  odd.set("instances.sizes", "1x1");
  CHECK_THROWS_AS(make_instances(odd, 1, 1), ConfigError);

  Config tiny;  // 1x1 blocks commute, so no nonzero anticommutator target exists
  tiny.set("instances.sizes", "2x1");
  tiny.set("instances.target", "1.0");
  CHECK_THROWS_AS(make_instances(tiny, 1, 1), ConfigError);

  Config user;
  user.set("instances.construction", "user_matrix");
  CHECK_THROWS_AS(make_instances(user, 1, 1), ConfigError);  // no files named
}

TEST_CASE("user matrices load through the roster with the hermitization tolerance") {
  fs::path sf = tmp_dir() / "s.json", tf = tmp_dir() / "t.json";
  write_matrix_file(sf, sigma1());
  write_matrix_file(tf, sigma2());

  Config cfg;
  cfg.set("instances.construction", "user_matrix");
  cfg.set("instances.s_file", sf.string());
  cfg.set("instances.t_file", tf.string());
  cfg.set("instances.n", "2");
  cfg.set("instances.k", "1");
  std::vector<GeneratedPair> got = make_instances(cfg, 1, 5);
  REQUIRE(got.size() == 1);  // user matrices are a single instance
  CHECK(got[0].construction == "user_matrix");
  CHECK(got[0].s.norm() == doctest::Approx(1.0).epsilon(1e-12));

  Mat skew = sigma1();
  skew(0, 1) += 0.5;  // grossly non-hermitian
  fs::path bad = tmp_dir() / "bad.json";
  write_matrix_file(bad, skew);
  cfg.set("instances.s_file", bad.string());
  CHECK_THROWS_AS(make_instances(cfg, 1, 5), ConfigError);

  cfg.set("tolerance", "1.0");  // widen the acceptance window: now symmetrized
  CHECK(make_instances(cfg, 1, 5).size() == 1);
}

TEST_CASE("identity suite runs clean end to end") {
  ExperimentReport rep = run_suite("identities", small_identities_cfg(), 5);
  CHECK(rep.suite == "identities");
  CHECK(rep.seed == 5);
  REQUIRE(rep.instances.size() == 2);
  CHECK(rep.instances[0].id == "instance_0");
  CHECK(rep.instances[0].dim == 2);
  CHECK(rep.instances[1].dim == 4);
  REQUIRE(!rep.checks.empty());
  for (const auto& c : rep.checks) CHECK(c.pass);
  CHECK(rep.passed);
  CHECK(rep.results.contains("families"));
}

TEST_CASE("sum-converge publishes the fitted decay rate per instance") {
  Config cfg;
  cfg.set("instances.count", "1");
  ExperimentReport rep = run_suite("sum-converge", cfg, 3);
  CHECK(rep.passed);
  REQUIRE(rep.results.contains("per_instance"));
  const Json& row = rep.results["per_instance"][0];
  REQUIRE(row.contains("fitted_rate"));
  double rate = row["fitted_rate"];
  CHECK(rate >= -1.15);
  CHECK(rate <= -0.85);
}

TEST_CASE("exactly seven runnable suites; unknown names are configuration errors") {
  CHECK(suite_names().size() == 7);
  Config cfg;
  CHECK_THROWS_AS(run_suite("bogus", cfg, 1), ConfigError);
  CHECK_THROWS_AS(run_suite("", cfg, 1), ConfigError);
}

TEST_CASE("reports serialize deterministically with meta quarantined") {
  Config cfg = small_identities_cfg();
  ExperimentReport r1 = run_suite("identities", cfg, 9);
  ExperimentReport r2 = run_suite("identities", cfg, 9);
  std::string body = report_body_bytes(r1);
  CHECK(body == report_body_bytes(r2));
  CHECK(body.find("\"meta\"") == std::string::npos);
  CHECK(body.find("wall_ms") == std::string::npos);

  setenv("WACLAB_THREADS", "3", 1);
  ExperimentReport r3 = run_suite("identities", cfg, 9);
  unsetenv("WACLAB_THREADS");
  CHECK(body == report_body_bytes(r3));  // worker count never leaks into results

  Json full = report_to_json(r1);
  CHECK(full["schema"] == 1);
  CHECK(full["suite"] == "identities");
  CHECK(full.contains("meta"));
  CHECK(full["meta"].contains("timestamp"));
  CHECK(full["meta"].contains("threads"));
}

TEST_CASE("report files land on disk with matching exit codes") {
  fs::path out1 = tmp_dir() / "out_pass";
  fs::remove_all(out1);
  ExperimentReport rep = run_suite("identities", small_identities_cfg(), 11);
  REQUIRE(rep.passed);
  CHECK(write_report_files(out1, rep) == 0);
  REQUIRE(fs::exists(out1 / "report.json"));
  Json j = Json::parse(slurp(out1 / "report.json"));
  CHECK(j["schema"] == 1);
  CHECK(fs::exists(out1 / "identities.csv") == !rep.csv_header.empty());

  ExperimentReport failed = rep;
  failed.passed = false;
  fs::path out2 = tmp_dir() / "out_fail";
  fs::remove_all(out2);
  CHECK(write_report_files(out2, failed) == 1);
  CHECK(fs::exists(out2 / "report.json"));  // report written even on failure

  CHECK_THROWS_AS(write_report_files("/dev/null/waclab_nowhere", rep), IoError);
}

TEST_CASE("csv rows use full round-trip precision") {
  fs::path file = tmp_dir() / "t.csv";
  write_csv(file, {"a", "b"}, {{0.1, 2.0}});
  CHECK(slurp(file) == "a,b\n0.10000000000000001,2\n");
}

TEST_CASE("timestamps are ISO-8601 UTC at second resolution") {
  std::string s = utc_timestamp();
  REQUIRE(s.size() == 20);
  CHECK(s[4] == '-');
  CHECK(s[10] == 'T');
  CHECK(s.back() == 'Z');
}
