#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "waclab/report.hpp"

namespace {

int run_named_suite(const std::string& suite, const waclab::Config& cfg, std::uint64_t seed,
                    const std::string& out_dir) {
  waclab::ExperimentReport rep = waclab::run_suite(suite, cfg, seed);
  int code = waclab::write_report_files(out_dir, rep);
  for (const auto& c : rep.checks)
    std::printf("%-28s %13.6g  vs %13.6g  %s\n", c.name.c_str(), c.value, c.bound,
                c.pass ? "pass" : "FAIL");
  std::printf("%s: %s (%.0f ms, report in %s)\n", suite.c_str(), rep.passed ? "pass" : "FAIL",
              rep.wall_ms, out_dir.c_str());
  return code;
}

int run_generate(const waclab::Config& cfg, std::uint64_t seed, const std::string& out_dir) {
  auto instances = waclab::make_instances(cfg, seed, 10);
  std::filesystem::path out(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw waclab::IoError("cannot create output directory: " + out.string());
  waclab::Json manifest = waclab::Json::array();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    waclab::InstanceRow row = waclab::describe_instance(instances[i], static_cast<int>(i));
    std::string s_file = row.id + "_s.json", t_file = row.id + "_t.json";
    waclab::write_matrix_file(out / s_file, instances[i].s.matrix());
    waclab::write_matrix_file(out / t_file, instances[i].t.matrix());
    char hash[19];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(row.hash));
    manifest.push_back(waclab::Json{{"id", row.id},
                                    {"construction", row.construction},
                                    {"n", row.n},
                                    {"k", row.k},
                                    {"seed", instances[i].seed},
                                    {"norm_s", row.norm_s},
                                    {"norm_t", row.norm_t},
                                    {"norm_k", row.norm_k},
                                    {"hash", hash},
                                    {"s_file", s_file},
                                    {"t_file", t_file}});
  }
  std::ofstream mf(out / "instances.json");
  if (!mf) throw waclab::IoError("cannot open for writing: " + (out / "instances.json").string());
  mf << manifest.dump(2) << "\n";
  if (!mf) throw waclab::IoError("write failed: " + (out / "instances.json").string());
  std::printf("generate: wrote %zu instance pairs to %s\n", instances.size(), out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for weakly anticommuting operator pairs"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::uint64_t seed = 1;
  double tol = 1e-10;
  app.add_option("--config", config_path, "experiment config file (sectioned key=value text)");
  app.add_option("--seed", seed, "base instance seed")->capture_default_str();
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--tol", tol, "hermitization tolerance for user-supplied matrices")
      ->capture_default_str();

  CLI::App* generate = app.add_subcommand("generate", "write seeded instance pairs to disk");
  CLI::App* report = app.add_subcommand("report", "run the suite named by the config");
  for (const auto& name : waclab::suite_names())
    app.add_subcommand(name, "run the " + name + " suite");
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    waclab::Config cfg;
    if (!config_path.empty()) cfg = waclab::parse_config_file(config_path);
    if (app.count("--tol") > 0) cfg.set("tolerance", std::to_string(tol));
    if (app.count("--seed") > 0) cfg.set("seed", std::to_string(seed));
    std::uint64_t run_seed = cfg.get_u64("seed", seed);

    CLI::App* sub = app.get_subcommands().front();
    if (sub == generate) return run_generate(cfg, run_seed, out_dir);
    std::string suite = sub == report ? cfg.get("suite.name") : sub->get_name();
    return run_named_suite(suite, cfg, run_seed, out_dir);
  } catch (const waclab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const waclab::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
