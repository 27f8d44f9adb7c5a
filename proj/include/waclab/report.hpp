#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "waclab/generator.hpp"

namespace waclab {

// insertion-ordered JSON so report bytes are reproducible
using Json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// matrices travel as {"rows", "cols", "re", "im"} with row-major entry lists
Json matrix_to_json(const Mat& a);
Mat matrix_from_json(const Json& j);
void write_matrix_file(const std::filesystem::path& path, const Mat& a);
Mat read_matrix_file(const std::filesystem::path& path);

// Flat sectioned key-value text: "[section]" lines open a prefix, "key = value"
// lines define "section.key", '#' and ';' start comments. Unparseable lines
// raise ConfigError with the line number.
struct Config {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  double get_num(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  void set(const std::string& key, const std::string& value) { values[key] = value; }
};
Config parse_config_text(const std::string& text);
Config parse_config_file(const std::filesystem::path& path);

// one asserted quantity: pass is decided by the emitting suite, value/bound
// record what was compared
struct CheckLine {
  std::string name;
  double value = 0;
  double bound = 0;
  bool pass = false;
};

struct InstanceRow {
  std::string id;
  std::string construction;
  int n = 0, k = 0, dim = 0;
  double norm_s = 0, norm_t = 0, norm_k = 0;
  std::uint64_t hash = 0;
};

struct ExperimentReport {
  std::string suite;
  std::uint64_t seed = 0;
  Config config;
  std::vector<InstanceRow> instances;
  Json results;  // suite-specific payload
  std::vector<CheckLine> checks;
  bool passed = false;
  // quarantined under "meta": excluded from determinism comparisons
  std::string timestamp;
  double wall_ms = 0;
  unsigned threads = 1;
  // one CSV side-table per suite
  std::vector<std::string> csv_header;
  std::vector<std::vector<double>> csv_rows;
  // additional artifacts written next to the report (path relative to out dir)
  std::vector<std::pair<std::string, std::string>> extra_files;
};

// full document, schema = 1, meta subtree last
Json report_to_json(const ExperimentReport& rep);
// serialized document with the meta subtree removed (byte-comparison form)
std::string report_body_bytes(const ExperimentReport& rep);

// header + "%.17g" rows
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// instances shared by every suite: seeds seed+i, shapes cycling through the
// configured (n,k); construction and calibration from [instances] keys
std::vector<GeneratedPair> make_instances(const Config& cfg, std::uint64_t seed,
                                          int default_count);
InstanceRow describe_instance(const GeneratedPair& p, int index);

const std::vector<std::string>& suite_names();  // the seven runnable suites

// Runs one named suite. Unknown or empty names raise ConfigError. The report
// carries every asserted check; passed = all checks pass.
ExperimentReport run_suite(const std::string& suite, const Config& cfg, std::uint64_t seed);

// writes <out>/report.json and <out>/<suite>.csv; raises IoError on failure;
// returns 0 when rep.passed, 1 otherwise (the report is written either way)
int write_report_files(const std::filesystem::path& out_dir, const ExperimentReport& rep);

// ISO-8601 UTC, seconds resolution
std::string utc_timestamp();

}  // namespace waclab
