#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "siltlab/rng.hpp"
#include "siltlab/run.hpp"

using namespace siltlab;
namespace fs = std::filesystem;

namespace {

RunConfig random_config(std::uint64_t seed) {
  rng::NormalStream stream(seed);
  RunConfig config;
  config.subcommand = "tails";
  config.seed = seed * 977 + 13;
  config.dt = 0.001 + stream.uniform() * 0.01;
  config.eps = config.dt * (4.0 + stream.uniform() * 8.0);
  config.n_replicas = 1 + static_cast<std::uint64_t>(stream.uniform() * 1e6);
  config.parallelism = static_cast<unsigned>(stream.uniform() * 16.0);
  config.out_dir = "dir_" + std::to_string(seed);
  config.allow_small_eps = stream.uniform() < 0.5;
  config.tail_kind = "beta-upper";
  config.thresholds = {stream.uniform(), 1.0 + stream.uniform()};
  config.fit_lo = stream.uniform();
  config.fit_hi = 2.0 + stream.uniform();
  config.small_a = 0.05 + stream.uniform() * 0.9;
  config.expect_kind = "centering";
  config.s = stream.uniform() * 3.0;
  config.t = stream.uniform() * 3.0;
  config.horizon = 0.5 + stream.uniform();
  config.dist = stream.uniform();
  config.n_units = 1 + static_cast<std::uint64_t>(stream.uniform() * 9.0);
  config.q = 1.1 + stream.uniform();
  config.n_checkpoints = 1 + static_cast<std::uint64_t>(stream.uniform() * 20.0);
  config.gn_tol = 1e-10 * (1.0 + stream.uniform());
  config.u0_lo = 1.0 + stream.uniform() * 0.2;
  config.u0_hi = 3.0 + stream.uniform();
  config.cell_size = stream.uniform() * 0.01;
  return config;
}

bool configs_equal(const RunConfig& a, const RunConfig& b) {
  return config_to_json(a) == config_to_json(b);
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config JSON round trip is lossless (property)") {
  for (std::uint64_t s = 1; s <= 50; ++s) {
    const RunConfig config = random_config(s);
    const RunConfig back = config_from_json(config_to_json(config));
    CHECK(configs_equal(config, back));
  }
}

TEST_CASE("fingerprint ignores execution details, tracks numerical inputs") {
  RunConfig a = random_config(3);
  RunConfig b = a;
  b.out_dir = "elsewhere";
  b.parallelism = a.parallelism + 3;
  CHECK(config_fingerprint(a) == config_fingerprint(b));

  RunConfig c = a;
  c.seed += 1;
  CHECK(config_fingerprint(a) != config_fingerprint(c));
}

TEST_CASE("expect subcommand: closed-form values in csv and table") {
  RunConfig config;
  config.subcommand = "expect";
  config.expect_kind = "alpha";
  config.s = 1.0;
  config.t = 1.0;
  const RunArtifacts artifacts = execute(config);
  REQUIRE(artifacts.csv_files.count("expect.csv") == 1);
  const std::string& csv = artifacts.csv_files.at("expect.csv");
  CHECK(csv.find("quantity,value") == 0);
  CHECK(csv.find("0.22063560015265") != std::string::npos);

  RunConfig centering = config;
  centering.expect_kind = "centering";
  centering.horizon = 1.0;
  centering.eps = 1.0;
  const RunArtifacts c2 = execute(centering);
  CHECK(c2.csv_files.at("expect.csv").find("0.0614806") != std::string::npos);

  RunConfig cn = config;
  cn.expect_kind = "cn";
  cn.n_units = 4;
  const RunArtifacts c3 = execute(cn);
  // 4 log 4 / (2 pi) = 0.8825424...
  CHECK(c3.csv_files.at("expect.csv").find("0.8825424") != std::string::npos);
}

TEST_CASE("run: artifacts on disk, headers, byte-identical across pool sizes") {
  TempDir dir("siltlab_cli_test");
  RunConfig config;
  config.subcommand = "beta";
  config.seed = 9;
  config.dt = 0.02;
  config.eps = 0.16;
  config.horizon = 1.0;
  config.n_replicas = 64;
  config.parallelism = 1;
  config.out_dir = (dir.path / "p1").string();
  REQUIRE(run(config) == 0);

  config.parallelism = 8;
  config.out_dir = (dir.path / "p8").string();
  REQUIRE(run(config) == 0);

  const std::string csv1 = slurp(dir.path / "p1" / "beta.csv");
  const std::string csv8 = slurp(dir.path / "p8" / "beta.csv");
  CHECK(csv1 == csv8);
  CHECK(csv1.rfind("replica_index,value", 0) == 0);

  const auto meta = nlohmann::json::parse(slurp(dir.path / "p1" / "metadata.json"));
  CHECK(meta.contains("config_fingerprint"));
  CHECK(meta.contains("wall_time_seconds"));
  CHECK(meta["csv_schema_version"] == kCsvSchemaVersion);
  CHECK(meta["summary"].contains("mean"));
  const auto meta8 = nlohmann::json::parse(slurp(dir.path / "p8" / "metadata.json"));
  CHECK(meta["config_fingerprint"] == meta8["config_fingerprint"]);
}

TEST_CASE("exit codes: 2 for config trouble, 3 for numerical failure") {
  TempDir dir("siltlab_cli_codes");
  RunConfig bad;
  bad.subcommand = "beta";
  bad.dt = 0.02;
  bad.eps = 0.02;  // ratio 1 < 4 without the override flag
  bad.out_dir = (dir.path / "bad").string();
  CHECK(run(bad) == 2);
  bad.allow_small_eps = true;
  bad.n_replicas = 4;
  CHECK(run(bad) == 0);

  RunConfig unknown;
  unknown.subcommand = "nonsense";
  unknown.out_dir = (dir.path / "unknown").string();
  CHECK(run(unknown) == 2);

  RunConfig numeric;
  numeric.subcommand = "gn";
  numeric.u0_lo = 3.5;  // both ends overshoot: no bracket
  numeric.u0_hi = 4.0;
  numeric.out_dir = (dir.path / "numeric").string();
  CHECK(run(numeric) == 3);

  RunConfig degenerate;
  degenerate.subcommand = "tails";
  degenerate.tail_kind = "alpha";
  degenerate.seed = 5;
  degenerate.dt = 0.02;
  degenerate.eps = 0.16;
  degenerate.n_replicas = 50;
  degenerate.thresholds = {75.0, 100.0};  // unreachable: zero exceedances
  degenerate.out_dir = (dir.path / "degenerate").string();
  CHECK(run(degenerate) == 3);
}

TEST_CASE("decomp and identity subcommands emit their audit columns") {
  TempDir dir("siltlab_cli_audit");
  RunConfig config;
  config.subcommand = "decomp-check";
  config.seed = 15;
  config.dt = 0.01;
  config.eps = 0.08;
  config.horizon = 1.0;
  config.n_replicas = 10;
  config.out_dir = (dir.path / "decomp").string();
  REQUIRE(run(config) == 0);
  const std::string decomp_csv = slurp(dir.path / "decomp" / "decomp_check.csv");
  CHECK(decomp_csv.rfind("path_index,n_pieces,beta_value,total,rel_gap", 0) == 0);

  RunConfig identity;
  identity.subcommand = "identity-check";
  identity.seed = 16;
  identity.eps = 0.01;
  identity.dt = identity.eps / 8.0;
  identity.horizon = 1.0;
  identity.n_replicas = 2;
  identity.out_dir = (dir.path / "identity").string();
  REQUIRE(run(identity) == 0);
  const std::string id_csv = slurp(dir.path / "identity" / "identity_check.csv");
  CHECK(id_csv.rfind("path_index,pairwise,half_l2,rel_gap", 0) == 0);
  const auto meta = nlohmann::json::parse(slurp(dir.path / "identity" / "metadata.json"));
  CHECK(meta["summary"]["max_rel_gap"].get<double>() <= 0.02);
}

TEST_CASE("tails and lil subcommands: headers and domain columns") {
  TempDir dir("siltlab_cli_tails");
  RunConfig config;
  config.subcommand = "tails";
  config.tail_kind = "beta-upper";
  config.seed = 21;
  config.dt = 0.02;
  config.eps = 0.16;
  config.n_replicas = 400;
  config.thresholds = {0.05, 0.1, 0.2, 0.4};
  config.out_dir = (dir.path / "tails").string();
  REQUIRE(run(config) == 0);
  const std::string tails_csv = slurp(dir.path / "tails" / "tails.csv");
  CHECK(tails_csv.rfind("threshold,exceed_count,n_replicas,log_survival,in_fit_window",
                        0) == 0);

  RunConfig lower = config;
  lower.tail_kind = "beta-lower";
  lower.thresholds = {0.0, 0.05, 0.1};
  lower.out_dir = (dir.path / "lower").string();
  REQUIRE(run(lower) == 0);
  CHECK(slurp(dir.path / "lower" / "tails.csv").find("l_proxy") != std::string::npos);

  RunConfig lil;
  lil.subcommand = "lil";
  lil.seed = 23;
  lil.q = 2.0;
  lil.n_checkpoints = 5;
  lil.dt = 0.05;
  lil.eps = 0.4;
  lil.n_replicas = 3;
  lil.out_dir = (dir.path / "lil").string();
  REQUIRE(run(lil) == 0);
  const std::string lil_csv = slurp(dir.path / "lil" / "lil.csv");
  CHECK(lil_csv.rfind("replica_index,checkpoint_t,beta_hat,norm_up,norm_down", 0) == 0);
  CHECK(lil_csv.find("nan") != std::string::npos);  // t = 2 sits outside both domains
  const auto meta = nlohmann::json::parse(slurp(dir.path / "lil" / "metadata.json"));
  CHECK(meta["summary"].contains("reference_up"));
  CHECK(meta["summary"].contains("reference_down"));
}
