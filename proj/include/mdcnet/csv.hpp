#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mdcnet/analytic.hpp"
#include "mdcnet/simulator.hpp"

namespace mdcnet {

// Bump when the column set changes.
inline constexpr int kCsvSchemaVersion = 1;

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> c = {"scenario_id", "param_name", "param_value", "metric", "source",
                                             "value", "ci_low", "ci_high", "status", "seed"};
  return c;
}

struct CsvRow {
  std::string scenario_id;
  std::string param_name;
  std::optional<double> param_value;
  std::string metric;
  std::string source;  // analytic | sim
  double value = NAN;
  std::optional<double> ci_low, ci_high;
  std::string status = "ok";
  std::string seed;  // one seed, a pooled range "N..M", or empty for analytic rows
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace detail {
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}
inline std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }
}  // namespace detail

inline void write_csv_header(std::ostream& os) {
  const auto& c = csv_columns();
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << '\n';
}

inline void write_csv_row(std::ostream& os, const CsvRow& r) {
  using detail::csv_field;
  os << csv_field(r.scenario_id) << ',' << csv_field(r.param_name) << ',' << detail::opt_number(r.param_value)
     << ',' << csv_field(r.metric) << ',' << r.source << ',' << format_number(r.value) << ','
     << detail::opt_number(r.ci_low) << ',' << detail::opt_number(r.ci_high) << ',' << csv_field(r.status)
     << ',' << r.seed << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
  write_csv_header(os);
  for (const auto& r : rows) write_csv_row(os, r);
}

struct RowContext {
  std::string scenario_id;
  std::string param_name;
  std::optional<double> param_value;
};

inline std::string status_of(const AnalyticReport& r) {
  return r.ok ? "ok" : (r.failure ? std::string(to_string(*r.failure)) : "failed");
}

// Every quantity the analytic chain produced. A failed chain keeps the stages it
// finished; all its rows carry the failure status, and a chain that produced nothing
// still yields one "status" row so the grid point stays visible.
inline std::vector<std::pair<std::string, double>> analytic_metrics(const AnalyticReport& r) {
  std::vector<std::pair<std::string, double>> m;
  const auto& k = r.contact;
  if (k.e_d > 0) {
    m.insert(m.end(), {{"e_d", k.e_d}, {"e_ct", k.e_ct}, {"e_ict", k.e_ict}, {"e_ict_s", k.e_ict_s},
                       {"p_ct", k.p_ct}});
  }
  if (r.mdc) {
    m.insert(m.end(), {{"p_cov_m", r.mdc->p_cov_m}, {"p_q", r.mdc->p_q}, {"p_act_s", r.mdc->p_act_s},
                       {"lambda_s_eff", r.mdc->lambda_s_eff}, {"rho", r.rho}, {"xi_bound", r.xi_bound},
                       {"stability_margin", r.stability_margin}});
  }
  if (r.queue) {
    const auto& q = *r.queue;
    m.insert(m.end(), {{"xi_cap", static_cast<double>(q.xi_cap)}, {"e_psi", q.e_psi}, {"e_v", q.e_v},
                       {"e_l_star", q.e_l_star}, {"e_l_star_printed", q.e_l_star_printed}, {"e_l", q.e_l}});
  }
  if (r.ap) {
    const auto& a = *r.ap;
    m.insert(m.end(), {{"p_cov_a", a.p_cov_a}, {"p_cov_a_plain", r.p_cov_a_plain},
                       {"p_cov_a_full_plane", r.p_cov_a_full_plane}, {"a_b", a.a_b}, {"p_act_m", a.p_act_m},
                       {"lambda_m_eff", a.lambda_m_eff}, {"n_c", a.lifecycle.n_c},
                       {"t_collect", a.lifecycle.e_t_collect}, {"t_smov", a.lifecycle.e_t_smov},
                       {"t_trans", a.lifecycle.e_t_trans}});
  }
  if (r.delay) {
    const auto& d = *r.delay;
    m.insert(m.end(), {{"d_q_s", d.d_q_s}, {"d_t_s", d.d_t_s}, {"d_q_m", d.d_q_m},
                       {"d_q_m_averaged", d.d_q_m_averaged}, {"d_t_m", d.d_t_m}, {"total_delay", d.total},
                       {"total_delay_averaged", d.total_averaged}});
  }
  if (r.energy) m.insert(m.end(), {{"e_sensor", r.energy->e_sensor}, {"e_network", r.energy->e_network}});
  return m;
}

inline std::vector<CsvRow> analytic_rows(const AnalyticReport& r, const RowContext& ctx) {
  std::vector<CsvRow> rows;
  const std::string status = status_of(r);
  for (const auto& [name, v] : analytic_metrics(r))
    rows.push_back({ctx.scenario_id, ctx.param_name, ctx.param_value, name, "analytic", v, {}, {}, status, ""});
  if (rows.empty())
    rows.push_back({ctx.scenario_id, ctx.param_name, ctx.param_value, "status", "analytic", NAN, {}, {}, status, ""});
  return rows;
}

inline std::string seed_range(const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) return "";
  if (seeds.size() == 1) return std::to_string(seeds.front());
  return std::to_string(seeds.front()) + ".." + std::to_string(seeds.back());
}

// Pooled rows first (seed column holds the range), then one block per replication.
inline std::vector<CsvRow> sim_rows(const SimReport& rep, const RowContext& ctx, bool with_replications) {
  std::vector<CsvRow> rows;
  const std::string range = seed_range(rep.seeds);
  for (const auto& [name, e] : rep.pooled)
    rows.push_back({ctx.scenario_id, ctx.param_name, ctx.param_value, name, "sim", e.value,
                    std::isfinite(e.ci_low) ? std::optional(e.ci_low) : std::nullopt,
                    std::isfinite(e.ci_high) ? std::optional(e.ci_high) : std::nullopt, "ok", range});
  if (!with_replications) return rows;
  for (std::size_t i = 0; i < rep.replications.size(); ++i)
    for (const auto& f : sim_metric_fields())
      rows.push_back({ctx.scenario_id, ctx.param_name, ctx.param_value, std::string(f.name), "sim",
                      rep.replications[i].*(f.member), {}, {}, "ok", std::to_string(rep.seeds[i])});
  return rows;
}

inline CsvRow failed_sim_row(const RowContext& ctx, ErrorKind kind, const std::string& seeds) {
  return {ctx.scenario_id, ctx.param_name, ctx.param_value, "status", "sim", NAN, {}, {},
          std::string(to_string(kind)), seeds};
}

}  // namespace mdcnet
