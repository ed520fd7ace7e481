#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "mdcnet/error.hpp"

namespace mdcnet {

using cplx = std::complex<double>;

struct QueueInputs {
  double xi;       // packets/s
  double delta;    // s
  double p_cov_m;  // per-slot success probability
  double e_ct;     // s
  double e_ict;    // s
};

struct CycleQuantities {
  int xi_cap;    // most packets served in one contact
  double e_psi;  // packets arriving per contact cycle
  double e_s;    // s
  double e_v;    // s
  double rho;
};

struct GLimitedSolution {
  int xi_cap = 0;
  double e_psi = 0;
  double e_s = 0;
  double e_v = 0;  // s
  double rho = 0;
  std::vector<cplx> roots;
  std::vector<double> q;
  double e_l_star = 0;
  double e_l_star_printed = 0;  // the closed form as printed, kept for comparison only
  double e_l = 0;
  double d_q_s = 0;  // s
  double b2 = 0;     // slots^2
  bool large_xi_fallback = false;
};

inline constexpr int kMaxXiForLinearSolve = 512;

// Per-slot service-time LST (geometric number of slots).
inline cplx service_lst(cplx z, double p) {
  cplx e = std::exp(-z);
  return p * e / (1.0 - (1.0 - p) * e);
}

inline cplx vacation_lst(cplx z, double e_v) { return 1.0 / (z * e_v + 1.0); }

inline double service_second_moment(double p) { return (2.0 - p) / (p * p); }

inline CycleQuantities derive_cycle_quantities(const QueueInputs& in) {
  double mu = in.p_cov_m / in.delta;
  double cap = std::floor(mu * in.e_ct * (1.0 + 1e-12));
  if (cap < 1.0) {
    std::ostringstream m;
    m << "contact too short to serve a packet: mu*E(CT) = " << mu * in.e_ct;
    throw Error(ErrorKind::XiZero, m.str());
  }
  double cycle = in.e_ct + in.e_ict;
  double rho = in.xi / mu;
  return {static_cast<int>(cap), in.xi * cycle, rho * cycle, (1.0 - rho) * cycle, rho};
}

struct Stability {
  bool stable;
  double margin;
};

inline Stability check_stability(double rho, double p_ct) { return {rho < p_ct, p_ct - rho}; }

// Largest arrival rate (packets/s) keeping the queue stable.
inline double arrival_rate_bound(double p_cov_m, double delta, double e_ct, double e_ict) {
  return p_cov_m / delta * e_ct / (e_ct + e_ict);
}

namespace detail {

// Per-slot quantities for the boundary equation z^X = V(xs - xs z) B(xs - xs z)^X.
struct RootProblem {
  int cap;
  double xs;    // arrivals per slot
  double p;     // per-slot success probability
  double e_vs;  // mean vacation, slots

  cplx s(cplx z) const { return xs - xs * z; }
  cplx b(cplx z) const { return service_lst(s(z), p); }
  cplx v(cplx z) const { return vacation_lst(s(z), e_vs); }
  cplx f(cplx z) const { return std::pow(z, cap) - v(z) * std::pow(b(z), cap); }
  cplx df(cplx z) const {
    cplx sz = s(z);
    cplx x = std::exp(-sz);
    cplx den = 1.0 - (1.0 - p) * x;
    cplx db = xs * p * x / (den * den);
    cplx vv = v(z);
    cplx dv = e_vs * xs * vv * vv;
    cplx bb = b(z);
    return double(cap) * std::pow(z, cap - 1) -
           (dv * std::pow(bb, cap) + vv * double(cap) * std::pow(bb, cap - 1) * db);
  }
};

}  // namespace detail

inline constexpr double kRootResidualTol = 1e-10;

inline std::vector<cplx> find_boundary_roots(int xi_cap, double xi, double delta, double p_cov_m,
                                             double e_v) {
  std::vector<cplx> roots;
  if (xi_cap <= 1) return roots;
  detail::RootProblem rp{xi_cap, xi * delta, p_cov_m, e_v / delta};
  const double two_pi = 2.0 * std::numbers::pi;
  for (int m = 1; m < xi_cap; ++m) {
    cplx omega = std::polar(1.0, two_pi * m / xi_cap);
    cplx z = 0.0;
    for (int it = 0; it < 200; ++it) {
      // principal branch of V^(1/X); B^X needs no root extraction
      cplx zn = omega * std::pow(rp.v(z), 1.0 / xi_cap) * rp.b(z);
      bool done = std::abs(zn - z) < 1e-15;
      z = zn;
      if (done) break;
    }
    for (int it = 0; it < 3; ++it) {
      cplx d = rp.df(z);
      if (std::abs(d) == 0.0) break;
      z -= rp.f(z) / d;
    }
    double res = std::abs(rp.f(z));
    if (!(res < kRootResidualTol)) {
      std::ostringstream msg;
      msg << "root " << m << " residual " << res;
      throw Error(ErrorKind::RootNotConverged, msg.str());
    }
    if (!(std::abs(z) < 1.0 - 1e-12)) {
      std::ostringstream msg;
      msg << "root " << m << " has |z| = " << std::abs(z);
      throw Error(ErrorKind::RootOnUnitCircle, msg.str());
    }
    roots.push_back(z);
  }
  return roots;
}

inline std::vector<double> solve_q_coefficients(const std::vector<cplx>& roots, int xi_cap,
                                                double xi, double delta, double e_v, double rho,
                                                double p_cov_m) {
  const double xs = xi * delta;
  const double e_vs = e_v / delta;
  const double norm_rhs = xi_cap - xs * e_vs / (1.0 - rho);
  if (xi_cap == 1) {
    if (norm_rhs < -1e-8) throw Error(ErrorKind::NegativeMass, "q_0 < 0");
    return {norm_rhs};
  }
  if (static_cast<int>(roots.size()) != xi_cap - 1)
    throw Error(ErrorKind::InvalidArgument, "root count must equal Xi-1");
  detail::RootProblem rp{xi_cap, xs, p_cov_m, e_vs};
  const int n = xi_cap;
  // Roots come in conjugate pairs, so each pair contributes the real and imaginary parts
  // of one row and the system stays real.
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  int row = 0;
  for (int i = 0; i < n - 1; ++i) {
    cplx z = roots[i];
    bool real_root = std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z));
    if (!real_root && z.imag() < 0) continue;
    if (row + (real_root ? 1 : 2) > n - 1) break;
    cplx bz = rp.b(z);
    cplx zx = std::pow(z, n), bx = std::pow(bz, n);
    cplx zk = 1.0, bk = 1.0;
    for (int k = 0; k < n; ++k) {
      cplx e = zx * bk - bx * zk;
      a(row, k) = e.real();
      if (!real_root) a(row + 1, k) = e.imag();
      zk *= z;
      bk *= bz;
    }
    // rows scaled to unit size; the pivoting then sees comparable magnitudes
    for (int r = row; r < row + (real_root ? 1 : 2); ++r) {
      double m = a.row(r).cwiseAbs().maxCoeff();
      if (m > 0) a.row(r) /= m;
    }
    row += real_root ? 1 : 2;
  }
  if (row != n - 1) {
    std::ostringstream m;
    m << "boundary roots do not pair into conjugates (" << row << " rows for Xi-1 = " << n - 1 << ")";
    throw Error(ErrorKind::SingularSystem, m.str());
  }
  for (int k = 0; k < n; ++k) a(n - 1, k) = double(n - k);
  rhs(n - 1) = norm_rhs;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (!(lu.rcond() > 1e-15)) {
    std::ostringstream m;
    m << "reciprocal condition number " << lu.rcond();
    throw Error(ErrorKind::SingularSystem, m.str());
  }
  Eigen::VectorXd sol = lu.solve(rhs);
  double resid = (a * sol - rhs).cwiseAbs().maxCoeff();
  if (!(resid < 1e-8)) {
    std::ostringstream m;
    m << "linear residual " << resid;
    throw Error(ErrorKind::SingularSystem, m.str());
  }
  std::vector<double> q(n);
  for (int k = 0; k < n; ++k) {
    q[k] = sol(k);
    if (q[k] < -1e-8) {
      std::ostringstream m;
      m << "q_" << k << " = " << q[k];
      throw Error(ErrorKind::NegativeMass, m.str());
    }
  }
  return q;
}

struct QueueLengths {
  double e_l_star;
  double e_l_star_printed;
  double e_l;
};

// Mean queue length at service-period start and time-average queue length, in packets.
// e_l_star comes from differentiating the queue-length PGF twice at z=1. The printed
// closed form carries an extra 2(1-rho)E(Psi)^2/(Xi-E(Psi)) in its first term and
// overstates the oracle; it is returned alongside, never used downstream.
inline QueueLengths mean_queue_lengths(int xi_cap, double xi, double delta, double p_cov_m,
                                       double e_v, const std::vector<double>& q) {
  const double xs = xi * delta;
  const double rho = xs / p_cov_m;
  const double b2 = service_second_moment(p_cov_m);
  const double e_psi = xs * (e_v / delta) / (1.0 - rho);
  const double cap = xi_cap;
  if (!(e_psi < cap)) {
    std::ostringstream m;
    m << "E(Psi) = " << e_psi << " >= Xi = " << xi_cap;
    throw Error(ErrorKind::CapacityExceeded, m.str());
  }
  double s0 = 0, s2 = 0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    double kk = static_cast<double>(k);
    s0 += q[k];
    s2 += kk * (kk - 1.0) * q[k];
  }
  const double gap = cap - e_psi;
  const double tail = (1.0 + rho) * (s2 + cap * (cap - 1.0) * (1.0 - s0)) / (2.0 * gap);
  const double service_term = xs * xs * b2 * e_psi / (2.0 * (1.0 - rho) * gap);
  QueueLengths out;
  out.e_l_star = cap * e_psi / gap + service_term - tail;
  out.e_l_star_printed = e_psi * (cap + 2.0 * (1.0 - rho) * e_psi) / gap + service_term - tail;
  out.e_l = rho + xs * xs * b2 / (2.0 * (1.0 - rho)) + out.e_l_star;
  return out;
}

inline double sensor_queueing_delay(const QueueInputs& in, double e_l_star) {
  const double xs = in.xi * in.delta;
  const double p = in.p_cov_m;
  if (!(xs < p)) {
    std::ostringstream m;
    m << "per-slot arrival rate " << xs << " >= per-slot service probability " << p;
    throw Error(ErrorKind::Unstable, m.str());
  }
  return (xs * (2.0 - p) / (2.0 * p * (p - xs)) + e_l_star / xs) * in.delta;
}

// Full G-limited solve. Requires rho < P_ct.
inline GLimitedSolution solve_g_limited(const QueueInputs& in) {
  GLimitedSolution s;
  auto cq = derive_cycle_quantities(in);
  s.xi_cap = cq.xi_cap;
  s.e_psi = cq.e_psi;
  s.e_s = cq.e_s;
  s.e_v = cq.e_v;
  s.rho = cq.rho;
  s.b2 = service_second_moment(in.p_cov_m);
  double p_ct = in.e_ct / (in.e_ct + in.e_ict);
  auto st = check_stability(cq.rho, p_ct);
  if (!st.stable) {
    std::ostringstream m;
    m << "rho = " << cq.rho << " >= P_ct = " << p_ct << " (arrival rate bound "
      << arrival_rate_bound(in.p_cov_m, in.delta, in.e_ct, in.e_ict) << " pkt/s)";
    throw Error(ErrorKind::Unstable, m.str());
  }
  if (!(cq.e_psi < cq.xi_cap)) {
    std::ostringstream m;
    m << "E(Psi) = " << cq.e_psi << " >= Xi = " << cq.xi_cap;
    throw Error(ErrorKind::CapacityExceeded, m.str());
  }
  const double xs = in.xi * in.delta;
  if (cq.xi_cap > kMaxXiForLinearSolve) {
    // Xi -> infinity: every cycle's arrivals are served next cycle, so L* averages E(Psi).
    s.large_xi_fallback = true;
    s.e_l_star = s.e_l_star_printed = cq.e_psi;
    s.e_l = cq.rho + xs * xs * s.b2 / (2.0 * (1.0 - cq.rho)) + s.e_l_star;
  } else {
    s.roots = find_boundary_roots(cq.xi_cap, in.xi, in.delta, in.p_cov_m, cq.e_v);
    s.q = solve_q_coefficients(s.roots, cq.xi_cap, in.xi, in.delta, cq.e_v, cq.rho, in.p_cov_m);
    auto ql = mean_queue_lengths(cq.xi_cap, in.xi, in.delta, in.p_cov_m, cq.e_v, s.q);
    s.e_l_star = ql.e_l_star;
    s.e_l_star_printed = ql.e_l_star_printed;
    s.e_l = ql.e_l;
  }
  s.d_q_s = sensor_queueing_delay(in, s.e_l_star);
  return s;
}

}  // namespace mdcnet
