#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mdcnet/config.hpp"
#include "mdcnet/contact.hpp"
#include "mdcnet/coverage.hpp"
#include "mdcnet/delay_energy.hpp"
#include "mdcnet/vacation_queue.hpp"

namespace mdcnet {

struct SteadyState {
  MdcFixedPoint mdc;
  ApFixedPoint ap;
};

struct AnalyticOptions {
  ChordMethod chord = ChordMethod::integral;
  ApCoverageVariant ap_variant = ApCoverageVariant::verbatim;
  bool alternate_ap_variants = true;  // also evaluate the other AP coverage variants at lambda_m'
};

struct AnalyticReport {
  NetworkConfig config;
  ContactStats contact;
  std::optional<MdcFixedPoint> mdc;
  double rho = 0;
  double xi_bound = 0;  // largest stable arrival rate, pkt/s
  double stability_margin = 0;
  bool stable = false;
  std::optional<GLimitedSolution> queue;
  std::optional<ApFixedPoint> ap;
  std::optional<DelayBreakdown> delay;
  std::optional<EnergyReport> energy;
  double p_cov_a_plain = 0;
  double p_cov_a_full_plane = 0;
  std::vector<std::string> warnings;

  bool ok = false;
  std::optional<ErrorKind> failure;
  std::string message;
};

// Runs the whole analytic chain; model failures are recorded in the report, not thrown.
inline AnalyticReport analyze(const NetworkConfig& c, AnalyticOptions o = {}) {
  AnalyticReport r;
  r.config = c;
  try {
    r.contact = compute_contact_stats(c, o.chord);
    if (c.mdc_density <= 0) throw Error(ErrorKind::ZeroDensity, "MDC density is zero");
    if (!(c.mdc_density > c.ap_density))
      r.warnings.push_back("MDC density does not exceed AP density; association formula assumes it does");
    r.mdc = solve_mdc_fixed_point(c, r.contact);
    const double p = r.mdc->p_cov_m;
    r.rho = c.arrival_rate * c.slot / p;
    r.xi_bound = arrival_rate_bound(p, c.slot, r.contact.e_ct, r.contact.e_ict);
    auto st = check_stability(r.rho, r.contact.p_ct);
    r.stable = st.stable;
    r.stability_margin = st.margin;
    QueueInputs qi{c.arrival_rate, c.slot, p, r.contact.e_ct, r.contact.e_ict};
    r.queue = solve_g_limited(qi);
    if (r.queue->large_xi_fallback)
      r.warnings.push_back("contact capacity above linear-solve cap; large-capacity approximation used");
    r.ap = solve_ap_fixed_point(c, r.contact, r.queue->e_psi, {}, o.ap_variant);
    if (o.alternate_ap_variants) {
      r.p_cov_a_plain = coverage_ap(r.ap->lambda_m_eff, c, ApCoverageVariant::plain_pgfl);
      r.p_cov_a_full_plane = coverage_ap(r.ap->lambda_m_eff, c, ApCoverageVariant::full_plane);
    }
    auto t = transmission_delays(c.slot, p, r.ap->p_cov_a);
    auto m = mdc_queueing_delay(c, r.contact, r.queue->e_psi, r.ap->lifecycle);
    r.delay = end_to_end_delay(r.queue->d_q_s, t, m);
    r.energy = energy(c, p, r.ap->p_cov_a, r.mdc->lambda_s_eff, r.ap->lambda_m_eff, r.rho);
    r.ok = true;
  } catch (const Error& e) {
    r.failure = e.kind();
    r.message = e.what();
  }
  return r;
}

}  // namespace mdcnet
