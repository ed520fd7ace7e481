#pragma once

#include "mdcnet/config.hpp"
#include "mdcnet/contact.hpp"
#include "mdcnet/coverage.hpp"
#include "mdcnet/error.hpp"

namespace mdcnet {

struct DelayBreakdown {
  double d_q_s = 0;
  double d_t_s = 0;
  double d_q_m = 0;
  double d_t_m = 0;
  double total = 0;
  double d_q_m_averaged = 0;
  double total_averaged = 0;
};

struct EnergyReport {
  double e_sensor = 0;   // mJ per packet
  double e_network = 0;  // mJ per packet per m^2
};

struct TransmissionDelays {
  double d_t_s;
  double d_t_m;
};

inline TransmissionDelays transmission_delays(double delta, double p_cov_m, double p_cov_a) {
  if (!(p_cov_m > 0) || !(p_cov_a > 0))
    throw Error(ErrorKind::ZeroCoverage, "coverage probability must be > 0");
  return {delta / p_cov_m, delta / p_cov_a};
}

struct MdcQueueingDelay {
  double d_q_m;           // batch completion time after the first contact, plus travel
  double d_q_m_averaged;  // averaged over the contact that collects the tagged packet
};

inline MdcQueueingDelay mdc_queueing_delay(const NetworkConfig& c, const ContactStats& k,
                                           double e_psi, const Lifecycle& l) {
  double cycle_s = k.e_ct + k.e_ict_s;
  double verbatim = c.batch_size * cycle_s / e_psi - k.e_ict_s / 2.0 + l.e_t_smov;
  double averaged = (l.n_c - 1.0) / 2.0 * cycle_s + k.e_ct / 2.0 + l.e_t_smov;
  return {verbatim, averaged};
}

inline DelayBreakdown end_to_end_delay(double d_q_s, const TransmissionDelays& t,
                                       const MdcQueueingDelay& m) {
  DelayBreakdown d;
  d.d_q_s = d_q_s;
  d.d_t_s = t.d_t_s;
  d.d_q_m = m.d_q_m;
  d.d_t_m = t.d_t_m;
  d.d_q_m_averaged = m.d_q_m_averaged;
  d.total = d.d_q_s + d.d_t_s + d.d_q_m + d.d_t_m;
  d.total_averaged = d.d_q_s + d.d_t_s + d.d_q_m_averaged + d.d_t_m;
  return d;
}

inline EnergyReport energy(const NetworkConfig& c, double p_cov_m, double p_cov_a,
                           double lambda_s_eff, double lambda_m_eff, double rho) {
  EnergyReport e;
  e.e_sensor = c.sensor_power_mw * c.slot / p_cov_m + (1.0 - rho) / c.arrival_rate * c.sleep_power_mw;
  e.e_network = lambda_s_eff * e.e_sensor + lambda_m_eff * c.mdc_power_mw * c.slot / p_cov_a;
  return e;
}

}  // namespace mdcnet
