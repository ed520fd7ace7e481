// mdcnet: analytic model, simulator and cross-validation harness for MDC-assisted
// sensor networks. Exit codes: 0 ok, 1 config error, 2 unstable or not converged,
// 3 no data, 4 validation failed.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "mdcnet/analytic.hpp"
#include "mdcnet/config.hpp"
#include "mdcnet/csv.hpp"
#include "mdcnet/harness.hpp"
#include "mdcnet/simulator.hpp"

using namespace mdcnet;

namespace {

enum Exit { kOk = 0, kConfig = 1, kUnstable = 2, kNoData = 3, kValidation = 4 };

struct Common {
  std::string config;
  std::string out;
  std::uint64_t seed = 1;
  std::string seeds;
  long horizon = 20000;
  double warmup_frac = 0.2;
  std::string sensor_access = "one_per_mdc";
  std::string ap_access = "one_per_ap";
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ConfigCandidate load_candidate(const Common& c) {
  return c.config.empty() ? ConfigCandidate{} : load_config_file(c.config);
}

std::string scenario_name(const Common& c) {
  return c.config.empty() ? "baseline" : std::filesystem::path(c.config).stem().string();
}

std::vector<std::uint64_t> seed_list(const Common& c) {
  if (c.seeds.empty()) return {c.seed};
  auto dots = c.seeds.find("..");
  try {
    if (dots == std::string::npos) return {std::stoull(c.seeds)};
    auto a = std::stoull(c.seeds.substr(0, dots)), b = std::stoull(c.seeds.substr(dots + 2));
    if (b < a) throw UsageError("--seeds N..M needs N <= M");
    std::vector<std::uint64_t> s;
    for (auto x = a; x <= b; ++x) s.push_back(x);
    return s;
  } catch (const std::logic_error&) {
    throw UsageError("--seeds expects N..M, got '" + c.seeds + "'");
  }
}

SimOptions sim_options(const Common& c) {
  SimOptions o;
  o.sensor_access = c.sensor_access == "concurrent" ? SensorAccess::concurrent : SensorAccess::one_per_mdc;
  o.ap_access = c.ap_access == "concurrent" ? ApAccess::concurrent : ApAccess::one_per_ap;
  return o;
}

long warmup_slots(const Common& c) {
  if (!(c.warmup_frac >= 0 && c.warmup_frac < 1)) throw UsageError("--warmup-frac must lie in [0, 1)");
  return static_cast<long>(c.warmup_frac * static_cast<double>(c.horizon));
}

// Writes to --out when given, stdout otherwise.
template <class F>
void emit(const std::string& path, F&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot open " + path + " for writing");
  write(f);
}

void print_summary(std::ostream& os, const AnalyticReport& r) {
  os << "E(D) " << r.contact.e_d << " m, E(CT) " << r.contact.e_ct << " s, E(ICT) " << r.contact.e_ict
     << " s, P_ct " << r.contact.p_ct << "\n";
  if (r.mdc)
    os << "P_cov^M " << r.mdc->p_cov_m << ", lambda_s' " << r.mdc->lambda_s_eff << ", rho " << r.rho
       << ", arrival-rate bound " << r.xi_bound << " pkt/s\n";
  if (r.queue)
    os << "Xi " << r.queue->xi_cap << ", E(Psi) " << r.queue->e_psi << ", E(L*) " << r.queue->e_l_star
       << ", E(L) " << r.queue->e_l << ", D_q^s " << r.queue->d_q_s << " s\n";
  if (r.ap)
    os << "P_cov^A " << r.ap->p_cov_a << " (plain " << r.p_cov_a_plain << ", full-plane " << r.p_cov_a_full_plane
       << "), lambda_m' " << r.ap->lambda_m_eff << "\n";
  if (r.delay)
    os << "delay total " << r.delay->total << " s (batch-averaged reading " << r.delay->total_averaged
       << " s), D_q^m " << r.delay->d_q_m << " / " << r.delay->d_q_m_averaged << " s\n";
  if (r.energy) os << "E_s " << r.energy->e_sensor << " mJ/pkt, E_n " << r.energy->e_network << "\n";
  for (const auto& w : r.warnings) os << "warning: " << w << "\n";
  if (!r.ok) os << "error: " << r.message << "\n";
}

int cmd_analytic(const Common& c) {
  auto cfg = validate_config(load_candidate(c));
  auto r = analyze(cfg);
  emit(c.out, [&](std::ostream& os) { write_csv(os, analytic_rows(r, {scenario_name(c), "", {}})); });
  print_summary(std::cerr, r);
  return r.ok ? kOk : kUnstable;
}

SimReport simulate_seeds(const NetworkConfig& cfg, const std::vector<std::uint64_t>& seeds, long horizon,
                         long warmup, const SimOptions& o) {
  if (seeds.size() >= 2) return replicate(cfg, seeds, horizon, warmup, o);
  SimReport rep;
  rep.config = cfg;
  rep.seeds = seeds;
  rep.replications.push_back(run_once(cfg, seeds.front(), horizon, warmup, o));
  rep.pooled = pool_metrics(rep.replications);
  return rep;
}

int cmd_simulate(const Common& c) {
  auto cfg = validate_config(load_candidate(c));
  auto seeds = seed_list(c);
  auto rep = simulate_seeds(cfg, seeds, c.horizon, warmup_slots(c), sim_options(c));
  emit(c.out, [&](std::ostream& os) { write_csv(os, sim_rows(rep, {scenario_name(c), "", {}}, seeds.size() > 1)); });
  return kOk;
}

int cmd_sweep(const Common& c, const std::string& param, const std::string& grid_text, const std::string& mode) {
  if (!is_config_key(param) || param == "boundary_mode") throw UsageError("--param: unknown numeric key '" + param + "'");
  std::vector<double> grid;
  {
    std::stringstream ss(grid_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        grid.push_back(v);
      } catch (const std::logic_error&) {
        throw UsageError("--grid: not a number: '" + tok + "'");
      }
    }
  }
  if (grid.empty()) throw UsageError("--grid must not be empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw UsageError("--grid must be strictly increasing");
  const bool do_analytic = mode != "sim", do_sim = mode != "analytic";
  auto base = load_candidate(c);
  validate_config(base);
  auto seeds = seed_list(c);
  const long warm = warmup_slots(c);
  const auto opt = sim_options(c);
  const std::string stem = scenario_name(c);

  std::vector<CsvRow> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    RowContext ctx{stem + "/" + std::to_string(i), param, grid[i]};
    auto cand = base;
    set_config_value(cand, param, grid[i]);
    NetworkConfig cfg;
    try {
      cfg = validate_config(cand);
    } catch (const ConfigError& e) {
      if (do_analytic) rows.push_back({ctx.scenario_id, param, grid[i], "status", "analytic", NAN, {}, {}, std::string(to_string(e.kind())), ""});
      if (do_sim) rows.push_back(failed_sim_row(ctx, e.kind(), seed_range(seeds)));
      std::cerr << "point " << i << ": " << e.what() << "\n";
      continue;
    }
    if (do_analytic) {
      auto r = analyze(cfg);
      if (!r.ok) std::cerr << "point " << i << ": " << r.message << "\n";
      auto a = analytic_rows(r, ctx);
      rows.insert(rows.end(), a.begin(), a.end());
    }
    if (do_sim) {
      try {
        auto rep = simulate_seeds(cfg, seeds, c.horizon, warm, opt);
        auto s = sim_rows(rep, ctx, false);
        rows.insert(rows.end(), s.begin(), s.end());
      } catch (const Error& e) {
        std::cerr << "point " << i << ": " << e.what() << "\n";
        rows.push_back(failed_sim_row(ctx, e.kind(), seed_range(seeds)));
      }
    }
  }
  emit(c.out, [&](std::ostream& os) { write_csv(os, rows); });
  return kOk;
}

int cmd_validate(const Common& c, const std::vector<int>& which, double ect_scale) {
  auto cfg = validate_config(load_candidate(c));
  auto a = analyze(cfg);
  if (!a.ok || !a.stable) {
    std::cerr << "refusing to validate: " << (a.ok ? "configuration is unstable" : a.message) << "\n";
    return kUnstable;
  }
  AcceptanceOptions o;
  o.seed = c.seed;
  o.sim = sim_options(c);
  o.ect_scale = ect_scale;
  std::vector<CriterionResult> results;
  std::vector<int> ids = which;
  if (ids.empty())
    for (int i = 1; i <= static_cast<int>(criteria().size()); ++i) ids.push_back(i);
  bool all = true;
  for (int id : ids) {
    results.push_back(run_criterion(id, cfg, o));
    all = all && results.back().pass();
    std::cerr << summary_line(results.back()) << "\n";
  }
  emit(c.out, [&](std::ostream& os) { write_verdict_csv(os, results); });
  return all ? kOk : kValidation;
}

void add_common(CLI::App* app, Common& c, bool sim_flags) {
  app->add_option("--config", c.config, "configuration file (key = value); baseline when omitted")->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "output CSV path; stdout when omitted");
  if (!sim_flags) return;
  auto* seed = app->add_option("--seed", c.seed, "master seed");
  app->add_option("--seeds", c.seeds, "replication seeds N..M")->excludes(seed);
  app->add_option("--horizon-slots", c.horizon, "slots simulated per replication")->check(CLI::PositiveNumber);
  app->add_option("--warmup-frac", c.warmup_frac, "fraction of the horizon discarded as warm-up");
  app->add_option("--sensor-access", c.sensor_access, "sensor uplink access")
      ->check(CLI::IsMember({"one_per_mdc", "concurrent"}));
  app->add_option("--ap-access", c.ap_access, "MDC to AP access")->check(CLI::IsMember({"one_per_ap", "concurrent"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mdcnet: analytic model and simulator for MDC-assisted sensor networks"};
  app.require_subcommand(1);
  Common c;

  auto* analytic = app.add_subcommand("analytic", "run the analytic chain");
  add_common(analytic, c, false);

  auto* simulate = app.add_subcommand("simulate", "run the simulator");
  add_common(simulate, c, true);

  std::string param, grid, mode = "analytic";
  auto* sweep = app.add_subcommand("sweep", "sweep one parameter");
  add_common(sweep, c, true);
  sweep->add_option("--param", param, "configuration key to sweep")->required();
  sweep->add_option("--grid", grid, "comma-separated values, strictly increasing")->required();
  sweep->add_option("--mode", mode, "analytic, sim or both")->check(CLI::IsMember({"analytic", "sim", "both"}));

  std::vector<int> which;
  double ect_scale = 1.0;
  auto* validate = app.add_subcommand("validate", "run the acceptance suite at a configuration");
  add_common(validate, c, true);
  validate->add_option("--criteria", which, "subset of criteria to run")->delimiter(',')->check(CLI::Range(1, 10));
  validate->add_option("--test-ect-scale", ect_scale, "test hook: scale analytic E(CT) in verdicts")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    if (*analytic) return cmd_analytic(c);
    if (*simulate) return cmd_simulate(c);
    if (*sweep) return cmd_sweep(c, param, grid, mode);
    if (*validate) return cmd_validate(c, which, ect_scale);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::UnknownKey:
      case ErrorKind::ParseError:
      case ErrorKind::InvalidArgument:
      case ErrorKind::NonPositiveParameter:
      case ErrorKind::WalkTooShort:
      case ErrorKind::PathLossTooSmall:
      case ErrorKind::ArenaTooSmall:
        return kConfig;
      case ErrorKind::NoDeliveries:
      case ErrorKind::EmptyPointSet:
        return kNoData;
      default:
        return kUnstable;
    }
  }
  return kOk;
}
