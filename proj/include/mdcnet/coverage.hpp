#pragma once

#include <boost/math/tools/toms748_solve.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mdcnet/config.hpp"
#include "mdcnet/contact.hpp"
#include "mdcnet/error.hpp"
#include "mdcnet/quadrature.hpp"

namespace mdcnet {

// H(s) = int_s^inf T t / (T + t^alpha) dt, the per-unit-r0^2 interference exponent from
// interferers farther than s*r0.
inline double interference_tail(double s, double threshold, double alpha, double tol = 1e-12) {
  const double t = threshold;
  if (s <= 1.0) {
    double h0 = std::pow(t, 2.0 / alpha) * (std::numbers::pi / alpha) /
                std::sin(2.0 * std::numbers::pi / alpha);
    if (s <= 0.0) return h0;
    auto head = integrate([&](double x) { return t * x / (t + std::pow(x, alpha)); }, 0.0, s,
                          {tol, tol, 20});
    return h0 - head.value;
  }
  // t -> s/u maps [s, inf) onto (0, 1]
  double sa = std::pow(s, alpha);
  auto f = [&](double u) {
    return t * s * s * std::pow(u, alpha - 3.0) / (t * std::pow(u, alpha) + sa);
  };
  return integrate(f, 0.0, 1.0, {tol, tol, 24}).value;
}

struct QuadSettings {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
};

inline double coverage_mdc(double lambda_s_eff, const NetworkConfig& c, QuadSettings q = {}) {
  if (!(lambda_s_eff >= 0)) throw Error(ErrorKind::InvalidArgument, "lambda_s' must be >= 0");
  const double t = c.sensor_threshold, a = c.path_loss_exp, rs = c.contact_radius;
  const double j = interference_tail(1.0, t, a);
  const double noise = t * c.noise_mw / c.sensor_power_mw;
  auto f = [&](double r) {
    return std::exp(-noise * std::pow(r, a) - 2.0 * std::numbers::pi * lambda_s_eff * r * r * j) *
           2.0 * r / (rs * rs);
  };
  return integrate(f, 0.0, rs, {q.abs_tol, q.rel_tol, 20}).value;
}

enum class ApCoverageVariant {
  verbatim,    // interferer-distance layer over the aggregation disk
  plain_pgfl,  // interferers beyond the serving distance only
  full_plane,  // interferers anywhere in the plane
};

inline std::string_view to_string(ApCoverageVariant v) {
  switch (v) {
    case ApCoverageVariant::verbatim: return "verbatim";
    case ApCoverageVariant::plain_pgfl: return "plain_pgfl";
    case ApCoverageVariant::full_plane: return "full_plane";
  }
  return "?";
}

inline double coverage_ap(double lambda_m_eff, const NetworkConfig& c,
                          ApCoverageVariant variant = ApCoverageVariant::verbatim,
                          QuadSettings q = {1e-8, 1e-8}) {
  if (!(lambda_m_eff >= 0)) throw Error(ErrorKind::InvalidArgument, "lambda_m' must be >= 0");
  const double t = c.ap_threshold, a = c.path_loss_exp, ra = c.aggregation_radius;
  const double noise = t * c.noise_mw / c.mdc_power_mw;
  const double j = interference_tail(1.0, t, a);
  const double h0 = interference_tail(0.0, t, a);
  auto layer = [&](double r0) {
    // int_0^Ra (2 rx / Ra^2) H(rx / r0) drx
    auto g = [&](double rx) { return 2.0 * rx / (ra * ra) * interference_tail(rx / r0, t, a, 1e-11); };
    return integrate(g, 0.0, ra, {1e-10, 1e-9, 16}).value;
  };
  auto f = [&](double r0) {
    double shape = 0.0;
    if (lambda_m_eff > 0) {
      switch (variant) {
        case ApCoverageVariant::verbatim: shape = layer(r0); break;
        case ApCoverageVariant::plain_pgfl: shape = j; break;
        case ApCoverageVariant::full_plane: shape = h0; break;
      }
    }
    return 2.0 * r0 / (ra * ra) *
           std::exp(-noise * std::pow(r0, a) -
                    2.0 * std::numbers::pi * lambda_m_eff * r0 * r0 * shape);
  };
  return integrate(f, 0.0, ra, {q.abs_tol, q.rel_tol, 18}).value;
}

inline double sensor_nonempty_probability(double p_cov_m, const NetworkConfig& c,
                                          const ContactStats& k) {
  double busy = c.slot * c.arrival_rate * (k.e_ct + k.e_ict) / p_cov_m;
  return std::min(busy, k.e_ct) / k.e_ct;
}

inline double ap_association_probability(double lambda_m, double lambda_b) {
  return 1.0 - std::pow(1.0 + lambda_m / (3.5 * lambda_b), -3.5);
}

struct FixedPointOptions {
  double damping = 0.5;
  double tol = 1e-9;  // on |F(x) - x|
  int max_iter = 200;
  std::optional<double> start;
};

namespace detail {

struct FixedPointResult {
  double x;
  int iterations;
  double residual;
};

// x = F(x) for an increasing F mapping [lo, hi] into itself. Damped iteration first;
// when it stalls (slope of F close to 1) the bracket [lo, hi] is handed to TOMS 748.
template <class F>
std::optional<FixedPointResult> solve_monotone_fixed_point(F&& f, double lo, double hi, double x,
                                                           const FixedPointOptions& o) {
  double res = 0;
  int it = 1;
  for (; it <= o.max_iter; ++it) {
    double fx = f(x);
    res = std::abs(fx - x);
    if (res < o.tol) return FixedPointResult{x, it, res};
    x = (1.0 - o.damping) * x + o.damping * fx;
  }
  auto g = [&](double y) { return f(y) - y; };
  double glo = g(lo), ghi = g(hi);
  if (std::abs(glo) < o.tol) return FixedPointResult{lo, it, std::abs(glo)};
  if (std::abs(ghi) < o.tol) return FixedPointResult{hi, it, std::abs(ghi)};
  if (glo * ghi > 0) return std::nullopt;
  std::uintmax_t evals = 200;
  auto stop = [&](double a, double b) { return std::abs(b - a) < 0.1 * o.tol; };
  auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, stop, evals);
  double root = 0.5 * (a + b);
  res = std::abs(g(root));
  if (!(res < o.tol)) return std::nullopt;
  return FixedPointResult{root, it + static_cast<int>(evals), res};
}

}  // namespace detail

struct MdcFixedPoint {
  double p_cov_m = 0;
  double p_q = 0;
  double p_act_s = 0;
  double lambda_s_eff = 0;
  int iterations = 0;
  double residual = 0;
  bool saturated = false;
};

inline MdcFixedPoint solve_mdc_fixed_point(const NetworkConfig& c, const ContactStats& k,
                                           FixedPointOptions o = {}) {
  if (!(k.p_ct > 0)) throw Error(ErrorKind::ZeroDensity, "no MDC contact: P_ct = 0");
  auto pack = [&](double x, int it, double res, bool sat) {
    MdcFixedPoint r;
    r.p_cov_m = x;
    r.p_q = sensor_nonempty_probability(x, c, k);
    r.p_act_s = k.p_ct * r.p_q;
    r.lambda_s_eff = r.p_act_s * c.sensor_density;
    r.iterations = it;
    r.residual = res;
    r.saturated = sat;
    return r;
  };
  if (!o.start) {
    double x_sat = coverage_mdc(k.p_ct * c.sensor_density, c);
    if (sensor_nonempty_probability(x_sat, c, k) >= 1.0) return pack(x_sat, 1, 0.0, true);
  }
  auto F = [&](double x) {
    return coverage_mdc(k.p_ct * sensor_nonempty_probability(x, c, k) * c.sensor_density, c);
  };
  const double hi = coverage_mdc(0.0, c);
  const double lo = coverage_mdc(k.p_ct * c.sensor_density, c);
  auto fp = detail::solve_monotone_fixed_point(F, lo, hi, o.start.value_or(hi), o);
  if (!fp) {
    std::ostringstream m;
    m << "MDC coverage fixed point did not converge in [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::FixedPointNotConverged, m.str());
  }
  return pack(fp->x, fp->iterations, fp->residual, sensor_nonempty_probability(fp->x, c, k) >= 1.0);
}

struct Lifecycle {
  double n_c = 0;
  double e_ht = 0;
  double e_t_collect = 0;
  double e_t_smov = 0;
  double e_t_trans = 0;
  double e_t_ag = 0;
};

// Mean straight-line travel time to the nearest AP, counting only the part beyond R_a.
inline double straight_move_time(const NetworkConfig& c) {
  const double lb = c.ap_density, ra = c.aggregation_radius;
  const double scale = 1.0 / std::sqrt(lb);
  auto f = [&](double u) {
    if (u >= 1.0) return 0.0;
    double r = ra + scale * u / (1.0 - u);
    double jac = scale / ((1.0 - u) * (1.0 - u));
    return r / c.speed * 2.0 * std::numbers::pi * lb * r * std::exp(-std::numbers::pi * lb * r * r) * jac;
  };
  return integrate(f, 0.0, 1.0, {1e-12, 1e-11, 20}).value;
}

inline Lifecycle lifecycle_times(const NetworkConfig& c, const ContactStats& k, double e_psi,
                                 double p_cov_a) {
  if (!(e_psi > 0)) throw Error(ErrorKind::InvalidArgument, "E(Psi) must be > 0");
  if (!(p_cov_a > 0)) throw Error(ErrorKind::ZeroCoverage, "AP coverage is zero");
  Lifecycle l;
  l.n_c = c.batch_size / e_psi;
  l.e_ht = k.e_ict_s / 2.0;
  l.e_t_collect = l.n_c * (k.e_ct + k.e_ict_s) - k.e_ict_s / 2.0;
  l.e_t_smov = straight_move_time(c);
  l.e_t_trans = c.batch_size * c.slot / p_cov_a;
  l.e_t_ag = l.e_t_smov + l.e_t_trans;
  return l;
}

struct ApFixedPoint {
  double p_cov_a = 0;
  double p_act_m = 0;
  double lambda_m_eff = 0;
  double a_b = 0;
  Lifecycle lifecycle;
  int iterations = 0;
  double residual = 0;
};

inline ApFixedPoint solve_ap_fixed_point(const NetworkConfig& c, const ContactStats& k,
                                         double e_psi, FixedPointOptions o = {},
                                         ApCoverageVariant variant = ApCoverageVariant::verbatim) {
  const double a_b = ap_association_probability(c.mdc_density, c.ap_density);
  const Lifecycle base = lifecycle_times(c, k, e_psi, 1.0);
  auto pack = [&](double y, int it, double res) {
    ApFixedPoint r;
    r.p_cov_a = y;
    r.a_b = a_b;
    r.lifecycle = base;
    r.lifecycle.e_t_trans = c.batch_size * c.slot / y;
    r.lifecycle.e_t_ag = base.e_t_smov + r.lifecycle.e_t_trans;
    r.p_act_m = r.lifecycle.e_t_trans / (base.e_t_collect + r.lifecycle.e_t_ag);
    r.lambda_m_eff = a_b * r.p_act_m * c.ap_density;
    r.iterations = it;
    r.residual = res;
    return r;
  };
  auto F = [&](double y) { return coverage_ap(pack(y, 0, 0).lambda_m_eff, c, variant); };
  const double hi = coverage_ap(0.0, c, variant);
  if (!(hi > 0)) throw Error(ErrorKind::ZeroCoverage, "AP coverage is zero without interference");
  const double lo = coverage_ap(a_b * c.ap_density, c, variant);
  auto fp = detail::solve_monotone_fixed_point(F, lo, hi, o.start.value_or(hi), o);
  if (!fp) {
    std::ostringstream m;
    m << "AP coverage fixed point did not converge in [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::FixedPointNotConverged, m.str());
  }
  return pack(fp->x, fp->iterations, fp->residual);
}

}  // namespace mdcnet
