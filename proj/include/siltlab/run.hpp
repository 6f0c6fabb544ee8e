#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace siltlab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One batch run. Flags override config-file values override these defaults;
// the effective configuration is always dumped next to the results.
struct RunConfig {
  std::string subcommand;
  std::uint64_t seed = 1;
  double dt = 0.005;
  double eps = 0.04;
  std::uint64_t n_replicas = 10000;
  unsigned parallelism = 0;  // 0 = hardware concurrency
  std::string out_dir = "out";
  bool allow_small_eps = false;

  // tails
  std::string tail_kind = "alpha";  // alpha | beta-upper | beta-lower | alpha-small-a
  std::vector<double> thresholds;   // levels of -beta for beta-lower
  double fit_lo = 0.0;
  double fit_hi = 0.0;
  double small_a = 0.25;

  // expect / alpha / beta horizons
  std::string expect_kind = "alpha";  // alpha | centering | cn
  double s = 1.0;
  double t = 1.0;
  double horizon = 1.0;  // T for beta / identity-check / decomp-check / occ-sup
  double dist = 0.0;     // |x0 - y0| for expect alpha
  std::uint64_t n_units = 4;

  // lil
  double q = 1.7782794100389228;
  std::uint64_t n_checkpoints = 16;

  // gn
  double gn_tol = 1e-10;
  double u0_lo = 1.0;
  double u0_hi = 4.0;

  // identity-check
  double cell_size = 0.0;  // 0 = sqrt(eps)/4
};

// Full JSON round trip (every field).
nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

// Hash of the canonical JSON document of the numerical inputs. Output path
// and parallelism are execution details, not configuration semantics, so
// runs that must produce identical numbers share a fingerprint.
std::string config_fingerprint(const RunConfig& config);

// Everything a run produces; run() writes these to config.out_dir.
struct RunArtifacts {
  std::string fingerprint;
  std::map<std::string, std::string> csv_files;  // name -> contents
  std::string metadata;                          // metadata.json contents
  std::string table;                             // human-readable stdout block
  int exit_code = 0;
};

// Executes the subcommand; throws ConfigError / NumericalError /
// std::invalid_argument on bad input or numerical failure.
RunArtifacts execute(const RunConfig& config);

// execute() plus artifact writing and error mapping: returns 0 on success,
// 2 on configuration errors, 3 on numerical failures; on failure a
// machine-readable error object goes to stderr.
int run(const RunConfig& config);

// Formats a double so the exact bits round-trip ("%.17g").
std::string format_double(double v);

constexpr int kCsvSchemaVersion = 1;

}  // namespace siltlab
