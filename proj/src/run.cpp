#include "siltlab/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "siltlab/asymptotics.hpp"
#include "siltlab/estimators.hpp"
#include "siltlab/gn.hpp"
#include "siltlab/path.hpp"
#include "siltlab/rng.hpp"
#include "siltlab/silt.hpp"
#include "siltlab/version.hpp"

namespace siltlab {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string format_u64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%llu", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t checked_count(double horizon, double dt, const char* what) {
  const double steps = horizon / dt;
  const auto n = static_cast<std::uint64_t>(std::llround(steps));
  if (!(steps > 0.0) || steps > 4.0e9 ||
      std::abs(steps - static_cast<double>(n)) > 1e-9 * std::max(1.0, steps)) {
    throw ConfigError(std::string(what) + ": horizon must be a positive multiple of dt");
  }
  return n;
}

class CsvBuilder {
 public:
  explicit CsvBuilder(std::initializer_list<const char*> columns) {
    bool first = true;
    for (const char* c : columns) {
      if (!first) out_ << ',';
      out_ << c;
      first = false;
    }
    out_ << '\n';
    n_columns_ = columns.size();
  }

  CsvBuilder& cell(double v) { return raw(format_double(v)); }
  CsvBuilder& cell(std::uint64_t v) { return raw(format_u64(v)); }
  CsvBuilder& cell(int v) { return raw(std::to_string(v)); }
  CsvBuilder& cell(const std::string& v) { return raw(v); }

  std::string str() const { return out_.str(); }

 private:
  CsvBuilder& raw(const std::string& text) {
    out_ << text;
    if (++column_ == n_columns_) {
      out_ << '\n';
      column_ = 0;
    } else {
      out_ << ',';
    }
    return *this;
  }

  std::ostringstream out_;
  std::size_t n_columns_ = 0;
  std::size_t column_ = 0;
};

void validate(const RunConfig& config) {
  if (!(config.dt > 0.0) || !(config.eps > 0.0)) {
    throw ConfigError("dt and eps must be positive");
  }
  if (config.subcommand != "gn" && config.subcommand != "expect") {
    if (config.eps / config.dt < 4.0 && !config.allow_small_eps) {
      throw ConfigError("eps/dt = " + format_double(config.eps / config.dt) +
                        " is below 4; quadrature bias grows like dt/eps "
                        "(pass --allow-small-eps to override)");
    }
    if (config.eps / config.dt < 4.0) {
      std::cerr << "warning: eps/dt below 4; expect visible quadrature bias\n";
    }
  }
}

TailConfig tail_config(const RunConfig& config) {
  TailConfig tc;
  tc.seed = config.seed;
  tc.n_replicas = config.n_replicas;
  tc.dt = config.dt;
  tc.eps = config.eps;
  tc.thresholds = config.thresholds;
  tc.fit_lo = config.fit_lo;
  tc.fit_hi = config.fit_hi;
  tc.threads = config.parallelism;
  return tc;
}

std::vector<double> default_thresholds(const std::string& kind, double small_a) {
  // Geometric ladders sized so the smallest threshold keeps a healthy
  // exceedance count at typical replica budgets.
  auto geometric = [](double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(n - 1));
    double v = lo;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = v;
      v *= ratio;
    }
    return out;
  };
  if (kind == "alpha" || kind == "beta-upper") return geometric(0.5, 2.5, 21);
  if (kind == "beta-lower") {
    std::vector<double> levels;
    for (int i = 0; i < 16; ++i) levels.push_back(0.02 + 0.02 * i);
    return levels;
  }
  if (kind == "alpha-small-a") {
    return geometric(0.05 * std::sqrt(small_a) / 0.5, 2.0 * std::sqrt(small_a), 21);
  }
  throw ConfigError("unknown tail kind: " + kind);
}

json tail_summary(const TailCurve& curve) {
  json j;
  j["n_replicas"] = curve.n_replicas;
  j["sample_mean"] = curve.sample_mean.mean;
  j["sample_std_error"] = curve.sample_mean.std_error;
  j["fingerprint"] = curve.config_fingerprint;
  j["slope"] = curve.slope_fit.slope;
  j["slope_stderr"] = curve.slope_fit.stderr_slope;
  j["slope_ci95"] = curve.slope_fit.ci95;
  j["fit_points"] = curve.slope_fit.n_points;
  j["fit_window_lo"] = curve.slope_fit.window_lo;
  j["fit_window_hi"] = curve.slope_fit.window_hi;
  j["fit_valid"] = curve.slope_fit.valid;
  return j;
}

std::string tail_csv(const TailCurve& curve, const std::vector<double>* l_proxy) {
  const std::vector<bool> in_window = curve.in_fit_window();
  std::string csv;
  if (l_proxy) {
    CsvBuilder builder{"threshold", "exceed_count", "n_replicas", "log_survival",
                       "in_fit_window", "l_proxy"};
    for (std::size_t k = 0; k < curve.thresholds.size(); ++k) {
      builder.cell(curve.thresholds[k])
          .cell(curve.exceed_counts[k])
          .cell(curve.n_replicas)
          .cell(curve.log_survival[k])
          .cell(in_window[k] ? 1 : 0)
          .cell((*l_proxy)[k]);
    }
    csv = builder.str();
  } else {
    CsvBuilder builder{"threshold", "exceed_count", "n_replicas", "log_survival",
                       "in_fit_window"};
    for (std::size_t k = 0; k < curve.thresholds.size(); ++k) {
      builder.cell(curve.thresholds[k])
          .cell(curve.exceed_counts[k])
          .cell(curve.n_replicas)
          .cell(curve.log_survival[k])
          .cell(in_window[k] ? 1 : 0);
    }
    csv = builder.str();
  }
  return csv;
}

void run_gn(const RunConfig& config, RunArtifacts& artifacts, json& summary) {
  ShootingOptions options;
  options.u0_lo = config.u0_lo;
  options.u0_hi = config.u0_hi;
  const GroundState gs = solve_ground_state(config.gn_tol, options);
  const GNConstants constants = gn_constants(gs);

  ShootingOptions halved = options;
  halved.grid_step = options.grid_step / 2.0;
  const GNConstants refined = gn_constants(solve_ground_state(config.gn_tol, halved));

  // Internal consistency triangle: gamma from the profile norm, from the
  // variational supremum over the solver's own rescaling family, and the
  // printed reference value they are checked against downstream.
  const double sigma_star = std::sqrt(gs.l4) / gs.grad_sq;
  const double objective_at_opt =
      evaluate_objective(rescaled_ground_state(gs, sigma_star)).value;
  const double gamma_from_objective = 1.0 / (2.0 * objective_at_opt);

  CsvBuilder builder{"quantity", "value"};
  builder.cell(std::string("u0")).cell(gs.u0);
  builder.cell(std::string("l2_sq")).cell(gs.l2_sq);
  builder.cell(std::string("grad_sq")).cell(gs.grad_sq);
  builder.cell(std::string("l4")).cell(gs.l4);
  builder.cell(std::string("A")).cell(constants.A);
  builder.cell(std::string("gamma_beta")).cell(constants.gamma_beta);
  builder.cell(std::string("M")).cell(constants.M);
  builder.cell(std::string("gamma_from_objective")).cell(gamma_from_objective);
  builder.cell(std::string("delta_A_halved_grid")).cell(std::abs(refined.A - constants.A));
  builder.cell(std::string("delta_gamma_halved_grid"))
      .cell(std::abs(refined.gamma_beta - constants.gamma_beta));
  artifacts.csv_files["gn.csv"] = builder.str();

  summary["u0"] = gs.u0;
  summary["l2_sq"] = gs.l2_sq;
  summary["A"] = constants.A;
  summary["gamma_beta"] = constants.gamma_beta;
  summary["M"] = constants.M;
  summary["gamma_from_objective"] = gamma_from_objective;
  summary["delta_A_halved_grid"] = std::abs(refined.A - constants.A);
  summary["delta_gamma_halved_grid"] = std::abs(refined.gamma_beta - constants.gamma_beta);

  std::ostringstream table;
  table << "ground state and variational constants\n"
        << "  u0                 " << format_double(gs.u0) << "\n"
        << "  ||Q||_2^2          " << format_double(gs.l2_sq) << "\n"
        << "  A                  " << format_double(constants.A) << "\n"
        << "  gamma_beta         " << format_double(constants.gamma_beta) << "\n"
        << "  M                  " << format_double(constants.M) << "\n"
        << "  gamma (objective)  " << format_double(gamma_from_objective) << "\n"
        << "  |dA| grid/2        " << format_double(std::abs(refined.A - constants.A)) << "\n"
        << "  |dgamma| grid/2    "
        << format_double(std::abs(refined.gamma_beta - constants.gamma_beta)) << "\n";
  artifacts.table = table.str();
}

void run_expect(const RunConfig& config, RunArtifacts& artifacts, json& summary) {
  CsvBuilder builder{"quantity", "value"};
  std::ostringstream table;
  if (config.expect_kind == "alpha") {
    const double value =
        expected_alpha(config.s, config.t, Vec2{0.0, 0.0}, Vec2{config.dist, 0.0});
    builder.cell(std::string("expected_alpha")).cell(value);
    summary["expected_alpha"] = value;
    table << "expected_alpha(s=" << format_double(config.s)
          << ", t=" << format_double(config.t) << ", dist=" << format_double(config.dist)
          << ") = " << format_double(value) << "\n";
  } else if (config.expect_kind == "centering") {
    const double value = centering_term(config.horizon, MollifierScale(config.eps));
    builder.cell(std::string("centering_term")).cell(value);
    summary["centering_term"] = value;
    table << "centering_term(T=" << format_double(config.horizon)
          << ", eps=" << format_double(config.eps) << ") = " << format_double(value)
          << "\n";
  } else if (config.expect_kind == "cn") {
    const auto n = static_cast<double>(config.n_units);
    const double value = n * std::log(n) / kTwoPi;
    builder.cell(std::string("expected_c_n")).cell(value);
    summary["expected_c_n"] = value;
    table << "expected_c_n(n=" << format_u64(config.n_units)
          << ") = " << format_double(value) << "\n";
  } else {
    throw ConfigError("unknown expect kind: " + config.expect_kind);
  }
  artifacts.csv_files["expect.csv"] = builder.str();
  artifacts.table = table.str();
}

void run_value_batch(const RunConfig& config, RunArtifacts& artifacts, json& summary,
                     const char* name) {
  std::vector<double> values;
  std::string id;
  double horizon = config.horizon;
  if (std::strcmp(name, "beta") == 0) {
    const std::uint64_t n = checked_count(config.horizon, config.dt, "beta");
    const MollifierScale eps(config.eps);
    values = run_replicas(config.n_replicas, config.parallelism,
                          [&](std::uint64_t r) {
                            const PlanarPath path = generate_path(
                                rng::stream_seed(config.seed, r), config.dt, n);
                            return beta_hat(path, Interval{0, n}, eps).value;
                          });
    id = "beta-batch";
  } else if (std::strcmp(name, "alpha") == 0) {
    const std::uint64_t ns = checked_count(config.s, config.dt, "alpha s");
    const std::uint64_t nt = checked_count(config.t, config.dt, "alpha t");
    const MollifierScale eps(config.eps);
    values = run_replicas(config.n_replicas, config.parallelism,
                          [&](std::uint64_t r) {
                            const auto [x, y] = independent_pair(
                                rng::stream_seed(config.seed, r), config.dt, ns, nt);
                            return alpha_hat(x, y, eps, config.s, config.t);
                          });
    id = "alpha-batch";
    horizon = std::max(config.s, config.t);
  } else {
    const std::uint64_t n = checked_count(config.horizon, config.dt, "occ-sup");
    values = run_replicas(config.n_replicas, config.parallelism,
                          [&](std::uint64_t r) {
                            const PlanarPath path = generate_path(
                                rng::stream_seed(config.seed, r), config.dt, n);
                            return occupation_sup_stat(path, config.horizon);
                          });
    id = "occupation-sup";
  }
  CsvBuilder builder{"replica_index", "value"};
  for (std::size_t r = 0; r < values.size(); ++r) {
    builder.cell(static_cast<std::uint64_t>(r)).cell(values[r]);
  }
  const std::string file = std::string(name) == "occ-sup" ? "occ_sup.csv"
                                                          : std::string(name) + ".csv";
  artifacts.csv_files[file] = builder.str();

  const stats::MeanStdErr stats_out = stats::mean_std_error(values);
  EstimatorResult result;
  result.value = stats_out.mean;
  result.std_error = stats_out.std_error;
  result.n_replicas = values.size();
  result.config_fingerprint = estimator_fingerprint(id.c_str(), config.seed, config.dt,
                                                    config.eps, horizon, values.size());
  summary["mean"] = result.value;
  summary["std_error"] = result.std_error;
  summary["n_replicas"] = result.n_replicas;
  summary["estimator_fingerprint"] = result.config_fingerprint;

  std::ostringstream table;
  table << name << ": mean = " << format_double(result.value)
        << ", std_error = " << format_double(result.std_error) << " over "
        << format_u64(result.n_replicas) << " replicas\n";
  artifacts.table = table.str();
}

void run_decomp_check(const RunConfig& config, RunArtifacts& artifacts, json& summary) {
  const std::uint64_t n = checked_count(config.horizon, config.dt, "decomp-check");
  if (n < 16) throw ConfigError("decomp-check: horizon too short for partitions");
  const MollifierScale eps(config.eps);
  const unsigned pool = config.parallelism;

  struct Row {
    std::size_t n_pieces;
    double beta_value, total, rel_gap;
  };
  std::vector<Row> rows(config.n_replicas);
  run_replicas(config.n_replicas, pool, [&](std::uint64_t r) {
    const std::uint64_t replica_seed = rng::stream_seed(config.seed, r);
    const PlanarPath path = generate_path(replica_seed, config.dt, n);
    // Partition cuts come from a dedicated sub-stream of the replica seed.
    rng::NormalStream cuts_rng(rng::stream_seed(replica_seed, 7));
    const std::size_t n_pieces =
        2 + static_cast<std::size_t>(cuts_rng.uniform() * 7.0);  // 2..8
    std::vector<std::size_t> cuts{0, static_cast<std::size_t>(n)};
    while (cuts.size() < n_pieces + 1) {
      const auto c = 1 + static_cast<std::size_t>(cuts_rng.uniform() *
                                                  static_cast<double>(n - 1));
      if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<Interval> pieces;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      pieces.push_back(Interval{cuts[k], cuts[k + 1]});
    }
    const CenteredSilt whole = beta_hat(path, Interval{0, static_cast<std::size_t>(n)}, eps);
    const Decomposition decomp = decompose(path, pieces, eps);
    const double gap = std::abs(decomp.total - whole.value) /
                       std::max(1.0, std::abs(whole.value));
    rows[r] = Row{pieces.size(), whole.value, decomp.total, gap};
    return gap;
  });

  CsvBuilder builder{"path_index", "n_pieces", "beta_value", "total", "rel_gap"};
  double max_gap = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    builder.cell(static_cast<std::uint64_t>(r))
        .cell(static_cast<std::uint64_t>(rows[r].n_pieces))
        .cell(rows[r].beta_value)
        .cell(rows[r].total)
        .cell(rows[r].rel_gap);
    max_gap = std::max(max_gap, rows[r].rel_gap);
  }
  artifacts.csv_files["decomp_check.csv"] = builder.str();
  summary["max_rel_gap"] = max_gap;
  std::ostringstream table;
  table << "decomp-check: max relative reconstruction gap = " << format_double(max_gap)
        << " over " << format_u64(config.n_replicas) << " paths\n";
  artifacts.table = table.str();
}

void run_identity_check(const RunConfig& config, RunArtifacts& artifacts, json& summary) {
  const std::uint64_t n = checked_count(config.horizon, config.dt, "identity-check");
  const MollifierScale eps(config.eps);
  struct Row {
    double pairwise, half_l2, rel_gap;
  };
  std::vector<Row> rows(config.n_replicas);
  run_replicas(config.n_replicas, config.parallelism, [&](std::uint64_t r) {
    const PlanarPath path =
        generate_path(rng::stream_seed(config.seed, r), config.dt, n);
    const IdentityCheck check =
        identity_check(path, eps, config.horizon, config.cell_size);
    rows[r] = Row{check.pairwise, check.half_l2, check.rel_gap};
    return check.rel_gap;
  });
  CsvBuilder builder{"path_index", "pairwise", "half_l2", "rel_gap"};
  double max_gap = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    builder.cell(static_cast<std::uint64_t>(r))
        .cell(rows[r].pairwise)
        .cell(rows[r].half_l2)
        .cell(rows[r].rel_gap);
    max_gap = std::max(max_gap, rows[r].rel_gap);
  }
  artifacts.csv_files["identity_check.csv"] = builder.str();
  summary["max_rel_gap"] = max_gap;
  std::ostringstream table;
  table << "identity-check: max relative gap = " << format_double(max_gap) << " over "
        << format_u64(config.n_replicas) << " paths\n";
  artifacts.table = table.str();
}

void run_tails(const RunConfig& config, RunArtifacts& artifacts, json& summary) {
  TailConfig tc = tail_config(config);
  if (tc.thresholds.empty()) {
    tc.thresholds = default_thresholds(config.tail_kind, config.small_a);
  }
  if (config.tail_kind == "alpha") {
    const TailCurve curve = tail_curve_alpha(tc);
    artifacts.csv_files["tails.csv"] = tail_csv(curve, nullptr);
    summary = tail_summary(curve);
  } else if (config.tail_kind == "beta-upper") {
    const TailCurve curve = tail_curve_beta_upper(tc);
    artifacts.csv_files["tails.csv"] = tail_csv(curve, nullptr);
    summary = tail_summary(curve);
  } else if (config.tail_kind == "beta-lower") {
    const LowerTailCurve lower = tail_curve_beta_lower(tc);
    artifacts.csv_files["tails.csv"] = tail_csv(lower.curve, &lower.l_proxy);
    summary = tail_summary(lower.curve);
  } else if (config.tail_kind == "alpha-small-a") {
    const TailCurve curve = alpha_small_a_tail(config.small_a, tc);
    artifacts.csv_files["tails.csv"] = tail_csv(curve, nullptr);
    summary = tail_summary(curve);
    summary["a"] = config.small_a;
  } else {
    throw ConfigError("unknown tail kind: " + config.tail_kind);
  }
  summary["kind"] = config.tail_kind;
  std::ostringstream table;
  table << "tails (" << config.tail_kind
        << "): slope = " << format_double(summary["slope"].get<double>())
        << " +- " << format_double(summary["slope_ci95"].get<double>()) << " over "
        << summary["fit_points"].get<std::size_t>() << " bins\n";
  artifacts.table = table.str();
}

void run_lil(const RunConfig& config, RunArtifacts& artifacts, json& summary) {
  LilConfig lc;
  lc.q = config.q;
  lc.n_checkpoints = config.n_checkpoints;
  lc.dt = config.dt;
  lc.eps = config.eps;

  std::vector<LilTrace> traces(config.n_replicas);
  run_replicas(config.n_replicas, config.parallelism, [&](std::uint64_t r) {
    LilConfig mine = lc;
    mine.seed = rng::stream_seed(config.seed, r);
    traces[r] = lil_trace(mine);
    return 0.0;
  });

  CsvBuilder builder{"replica_index", "checkpoint_t", "beta_hat", "norm_up", "norm_down"};
  for (std::size_t r = 0; r < traces.size(); ++r) {
    const LilTrace& trace = traces[r];
    for (std::size_t k = 0; k < trace.checkpoints.size(); ++k) {
      builder.cell(static_cast<std::uint64_t>(r))
          .cell(trace.checkpoints[k])
          .cell(trace.values[k])
          .cell(trace.normalized_up[k])
          .cell(trace.normalized_down[k]);
    }
  }
  artifacts.csv_files["lil.csv"] = builder.str();

  LilBatchSummary batch = lil_batch_summary(traces);
  const GNConstants constants = gn_constants(solve_ground_state(1e-10));
  batch.reference_up = 1.0 / constants.gamma_beta;
  batch.reference_down = 1.0 / kTwoPi;
  summary["n_replicas"] = batch.n_replicas;
  summary["max_norm_up_median"] = batch.up_median;
  summary["max_norm_up_q1"] = batch.up_q1;
  summary["max_norm_up_q3"] = batch.up_q3;
  summary["max_norm_down_median"] = batch.down_median;
  summary["max_norm_down_q1"] = batch.down_q1;
  summary["max_norm_down_q3"] = batch.down_q3;
  summary["reference_up"] = batch.reference_up;
  summary["reference_down"] = batch.reference_down;
  summary["note"] = "exploratory finite-horizon statistics; the reference lines are "
                    "asymptotic limits and are not attainable at these horizons";

  std::ostringstream table;
  table << "lil: max norm_up median " << format_double(batch.up_median) << " [q1 "
        << format_double(batch.up_q1) << ", q3 " << format_double(batch.up_q3)
        << "], reference " << format_double(batch.reference_up) << "\n"
        << "     max norm_down median " << format_double(batch.down_median) << " [q1 "
        << format_double(batch.down_q1) << ", q3 " << format_double(batch.down_q3)
        << "], reference " << format_double(batch.reference_down) << "\n";
  artifacts.table = table.str();
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["seed"] = c.seed;
  j["dt"] = c.dt;
  j["eps"] = c.eps;
  j["n_replicas"] = c.n_replicas;
  j["parallelism"] = c.parallelism;
  j["out_dir"] = c.out_dir;
  j["allow_small_eps"] = c.allow_small_eps;
  j["tail_kind"] = c.tail_kind;
  j["thresholds"] = c.thresholds;
  j["fit_lo"] = c.fit_lo;
  j["fit_hi"] = c.fit_hi;
  j["small_a"] = c.small_a;
  j["expect_kind"] = c.expect_kind;
  j["s"] = c.s;
  j["t"] = c.t;
  j["horizon"] = c.horizon;
  j["dist"] = c.dist;
  j["n_units"] = c.n_units;
  j["q"] = c.q;
  j["n_checkpoints"] = c.n_checkpoints;
  j["gn_tol"] = c.gn_tol;
  j["u0_lo"] = c.u0_lo;
  j["u0_hi"] = c.u0_hi;
  j["cell_size"] = c.cell_size;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("subcommand", c.subcommand);
  get("seed", c.seed);
  get("dt", c.dt);
  get("eps", c.eps);
  get("n_replicas", c.n_replicas);
  get("parallelism", c.parallelism);
  get("out_dir", c.out_dir);
  get("allow_small_eps", c.allow_small_eps);
  get("tail_kind", c.tail_kind);
  get("thresholds", c.thresholds);
  get("fit_lo", c.fit_lo);
  get("fit_hi", c.fit_hi);
  get("small_a", c.small_a);
  get("expect_kind", c.expect_kind);
  get("s", c.s);
  get("t", c.t);
  get("horizon", c.horizon);
  get("dist", c.dist);
  get("n_units", c.n_units);
  get("q", c.q);
  get("n_checkpoints", c.n_checkpoints);
  get("gn_tol", c.gn_tol);
  get("u0_lo", c.u0_lo);
  get("u0_hi", c.u0_hi);
  get("cell_size", c.cell_size);
  return c;
}

std::string config_fingerprint(const RunConfig& config) {
  json j = config_to_json(config);
  j.erase("out_dir");
  j.erase("parallelism");
  const std::string canonical = j.dump();
  const std::uint64_t h = rng::fnv1a(canonical.data(), canonical.size());
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

RunArtifacts execute(const RunConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();

  RunArtifacts artifacts;
  artifacts.fingerprint = config_fingerprint(config);
  json summary;
  if (config.subcommand == "gn") {
    run_gn(config, artifacts, summary);
  } else if (config.subcommand == "expect") {
    run_expect(config, artifacts, summary);
  } else if (config.subcommand == "beta" || config.subcommand == "alpha" ||
             config.subcommand == "occ-sup") {
    run_value_batch(config, artifacts, summary, config.subcommand.c_str());
  } else if (config.subcommand == "decomp-check") {
    run_decomp_check(config, artifacts, summary);
  } else if (config.subcommand == "identity-check") {
    run_identity_check(config, artifacts, summary);
  } else if (config.subcommand == "tails") {
    run_tails(config, artifacts, summary);
  } else if (config.subcommand == "lil") {
    run_lil(config, artifacts, summary);
  } else {
    throw ConfigError("unknown subcommand: " + config.subcommand);
  }

  const auto elapsed = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - start);
  json metadata;
  metadata["subcommand"] = config.subcommand;
  metadata["config_fingerprint"] = artifacts.fingerprint;
  metadata["version"] = kVersion;
  metadata["csv_schema_version"] = kCsvSchemaVersion;
  metadata["wall_time_seconds"] = elapsed.count();
  metadata["effective_config"] = config_to_json(config);
  metadata["summary"] = summary;
  artifacts.metadata = metadata.dump(2) + "\n";
  return artifacts;
}

int run(const RunConfig& config) {
  try {
    const RunArtifacts artifacts = execute(config);
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    for (const auto& [name, contents] : artifacts.csv_files) {
      std::ofstream out(fs::path(config.out_dir) / name, std::ios::binary);
      out << contents;
      if (!out) throw std::runtime_error("failed writing " + name);
    }
    std::ofstream meta(fs::path(config.out_dir) / "metadata.json", std::ios::binary);
    meta << artifacts.metadata;
    if (!meta) throw std::runtime_error("failed writing metadata.json");
    if (!artifacts.table.empty()) std::cout << artifacts.table;
    return 0;
  } catch (const ConfigError& e) {
    json err{{"error", "config"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    json err{{"error", "config"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json err{{"error", "numerical"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 3;
  }
}

}  // namespace siltlab
