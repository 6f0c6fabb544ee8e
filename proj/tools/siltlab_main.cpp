// Batch front end: subcommands map one-to-one onto library operations and
// emit CSV results plus a metadata JSON with the configuration fingerprint.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "siltlab/run.hpp"
#include "siltlab/version.hpp"

namespace {

using siltlab::RunConfig;

void add_common(CLI::App* cmd, RunConfig& config, std::string& config_file) {
  cmd->add_option("--config", config_file, "JSON config file (flags take precedence)");
  cmd->add_option("--seed", config.seed, "base seed");
  cmd->add_option("--replicas", config.n_replicas, "replica count");
  cmd->add_option("--dt", config.dt, "time step");
  cmd->add_option("--eps", config.eps, "mollifier bandwidth");
  cmd->add_option("--out", config.out_dir, "output directory");
  cmd->add_option("--parallelism", config.parallelism,
                  "worker pool size (0 = hardware; SILTLAB_THREADS overrides)");
  cmd->add_flag("--allow-small-eps", config.allow_small_eps,
                "permit eps/dt below 4 (prints a bias warning)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for planar Brownian self-intersection local time"};
  app.set_version_flag("--version", siltlab::kVersion);
  app.require_subcommand(1);

  RunConfig config;
  std::string config_file;

  CLI::App* gn = app.add_subcommand("gn", "ground state and variational constants");
  add_common(gn, config, config_file);
  gn->add_option("--tol", config.gn_tol, "bisection bracket tolerance on u(0)");
  gn->add_option("--u0-lo", config.u0_lo, "lower end of the u(0) bracket");
  gn->add_option("--u0-hi", config.u0_hi, "upper end of the u(0) bracket");

  CLI::App* expect = app.add_subcommand("expect", "closed-form expectation oracles");
  add_common(expect, config, config_file);
  expect->add_option("kind", config.expect_kind, "alpha | centering | cn")->required();
  expect->add_option("--s", config.s, "first horizon");
  expect->add_option("--t", config.t, "second horizon");
  expect->add_option("--dist", config.dist, "distance between starting points");
  expect->add_option("--T", config.horizon, "horizon for the centering term");
  expect->add_option("--n", config.n_units, "number of unit blocks");

  CLI::App* beta = app.add_subcommand("beta", "replica batch of the centered estimator");
  add_common(beta, config, config_file);
  beta->add_option("--T", config.horizon, "horizon");

  CLI::App* alpha = app.add_subcommand("alpha", "replica batch of the mutual estimator");
  add_common(alpha, config, config_file);
  alpha->add_option("--s", config.s, "first horizon");
  alpha->add_option("--t", config.t, "second horizon");

  CLI::App* decomp = app.add_subcommand("decomp-check",
                                        "sub-path reconstruction identity audit");
  add_common(decomp, config, config_file);
  decomp->add_option("--T", config.horizon, "horizon");

  CLI::App* identity = app.add_subcommand("identity-check",
                                          "occupation-density identity audit");
  add_common(identity, config, config_file);
  identity->add_option("--T", config.horizon, "horizon");
  identity->add_option("--cell", config.cell_size, "grid cell size (0 = sqrt(eps)/4)");

  CLI::App* tails = app.add_subcommand("tails", "empirical tail curves");
  add_common(tails, config, config_file);
  tails->add_option("--kind", config.tail_kind,
                    "alpha | beta-upper | beta-lower | alpha-small-a");
  tails->add_option("--thresholds", config.thresholds,
                    "explicit thresholds (levels for beta-lower)");
  tails->add_option("--fit-lo", config.fit_lo, "fit window lower edge");
  tails->add_option("--fit-hi", config.fit_hi, "fit window upper edge");
  tails->add_option("--a", config.small_a, "second horizon for alpha-small-a");

  CLI::App* lil = app.add_subcommand("lil", "long-horizon normalized trajectories");
  add_common(lil, config, config_file);
  lil->add_option("--q", config.q, "checkpoint growth factor (> 1)");
  lil->add_option("--checkpoints", config.n_checkpoints, "number of checkpoints");

  CLI::App* occ = app.add_subcommand("occ-sup", "dyadic occupation statistic batch");
  add_common(occ, config, config_file);
  occ->add_option("--T", config.horizon, "horizon");

  CLI11_PARSE(app, argc, argv);

  CLI::App* active = app.get_subcommands().front();
  config.subcommand = active->get_name();

  if (!config_file.empty()) {
    // Config file fills everything the command line did not set explicitly.
    std::ifstream in(config_file);
    if (!in) {
      std::cerr << nlohmann::json{{"error", "config"},
                                  {"message", "cannot open " + config_file}}
                       .dump()
                << "\n";
      return 2;
    }
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      std::cerr << nlohmann::json{{"error", "config"}, {"message", e.what()}}.dump()
                << "\n";
      return 2;
    }
    RunConfig from_file = siltlab::config_from_json(j);
    from_file.subcommand = config.subcommand;
    auto was_set = [&](const std::string& name) {
      const CLI::Option* opt = active->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    auto keep = [&](const std::string& flag, auto member) {
      if (was_set(flag)) from_file.*member = config.*member;
    };
    keep("--seed", &RunConfig::seed);
    keep("--replicas", &RunConfig::n_replicas);
    keep("--dt", &RunConfig::dt);
    keep("--eps", &RunConfig::eps);
    keep("--out", &RunConfig::out_dir);
    keep("--parallelism", &RunConfig::parallelism);
    keep("--allow-small-eps", &RunConfig::allow_small_eps);
    keep("--tol", &RunConfig::gn_tol);
    keep("--u0-lo", &RunConfig::u0_lo);
    keep("--u0-hi", &RunConfig::u0_hi);
    keep("kind", &RunConfig::expect_kind);
    keep("--s", &RunConfig::s);
    keep("--t", &RunConfig::t);
    keep("--dist", &RunConfig::dist);
    keep("--T", &RunConfig::horizon);
    keep("--n", &RunConfig::n_units);
    keep("--cell", &RunConfig::cell_size);
    keep("--kind", &RunConfig::tail_kind);
    keep("--thresholds", &RunConfig::thresholds);
    keep("--fit-lo", &RunConfig::fit_lo);
    keep("--fit-hi", &RunConfig::fit_hi);
    keep("--a", &RunConfig::small_a);
    keep("--q", &RunConfig::q);
    keep("--checkpoints", &RunConfig::n_checkpoints);
    config = from_file;
  }

  return siltlab::run(config);
}
