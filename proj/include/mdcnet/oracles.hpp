#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "mdcnet/config.hpp"
#include "mdcnet/contact.hpp"
#include "mdcnet/geometry.hpp"
#include "mdcnet/rng.hpp"
#include "mdcnet/stats.hpp"

namespace mdcnet {

// ---------------------------------------------------------------------------
// Continuous-time SRWP contact experiment. MDCs start at a uniformly random phase of
// their pause/walk cycle, sensors are fixed probes, and contact intervals come from
// exact segment/disc intersections, merged across MDCs per sensor. Always on the torus.

struct ContactExperiment {
  RunningStats ct;
  RunningStats ict;
  double horizon = 0;  // s
  std::size_t sensors = 0;
  std::size_t mdcs = 0;
};

namespace detail {

struct Interval {
  double a, b;
};

inline void add_walk_intervals(Vec2 start, Vec2 dir, double speed, double t0, double t1,
                               const std::vector<Vec2>& probes, const SpatialGrid& grid,
                               double r, double side, BoundaryMode mode,
                               std::vector<std::vector<Interval>>& out) {
  const double len = speed * (t1 - t0);
  Vec2 mid = start + dir * (0.5 * len);
  if (mode == BoundaryMode::torus) mid = {wrap_coord(mid.x, side), wrap_coord(mid.y, side)};
  grid.for_each_within(mid, 0.5 * len + r, [&](std::size_t id, double) {
    // probe relative to the segment start, in the segment's unwrapped frame
    Vec2 d = displacement(start, probes[id], side, mode);
    double proj = d.x * dir.x + d.y * dir.y;
    double perp2 = d.x * d.x + d.y * d.y - proj * proj;
    if (perp2 >= r * r) return;
    double half = std::sqrt(r * r - perp2);
    double s0 = std::max(0.0, proj - half), s1 = std::min(len, proj + half);
    if (s1 <= s0) return;
    out[id].push_back({t0 + s0 / speed, t0 + s1 / speed});
  });
}

inline void add_pause_intervals(Vec2 p, double t0, double t1, const SpatialGrid& grid, double r,
                                std::vector<std::vector<Interval>>& out) {
  grid.for_each_within(p, r, [&](std::size_t id, double d) {
    if (d < r) out[id].push_back({t0, t1});
  });
}

}  // namespace detail

inline ContactExperiment contact_experiment(const NetworkConfig& c, std::uint64_t seed,
                                            double horizon) {
  const double side = c.arena_side, r = c.contact_radius, v = c.speed;
  const double w = c.walk_time, p = c.pause_time;
  const auto mode = BoundaryMode::torus;
  auto sensors = sample_ppp(c.sensor_density, side, derive_seed(seed, 11), mode);
  // MDC count pinned to its mean: a single Poisson draw would shift every gap by ~10%
  std::vector<Vec2> mdcs;
  {
    Rng place(derive_seed(seed, 12));
    auto n = static_cast<long>(std::llround(c.mdc_density * side * side));
    for (long i = 0; i < n; ++i) mdcs.push_back({place.uniform(0.0, side), place.uniform(0.0, side)});
  }
  SpatialGrid grid(side, mode, std::max(r, v * w / 4.0));
  grid.build(sensors.points);
  std::vector<std::vector<detail::Interval>> iv(sensors.size());
  Rng rng(seed, Stream::oracle);
  for (Vec2 pos : mdcs) {
    Vec2 heading{1, 0};
    auto new_heading = [&] {
      double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
      heading = {std::cos(th), std::sin(th)};
    };
    double phase = rng.uniform(0.0, w + p);
    double t = 0.0;
    bool pausing = phase < p;
    double remaining = pausing ? p - phase : w - (phase - p);
    if (!pausing) new_heading();
    while (t < horizon) {
      double t1 = std::min(horizon, t + remaining);
      if (pausing) {
        detail::add_pause_intervals(pos, t, t1, grid, r, iv);
      } else {
        detail::add_walk_intervals(pos, heading, v, t, t1, sensors.points, grid, r, side, mode, iv);
        pos = pos + heading * (v * (t1 - t));
        pos = {wrap_coord(pos.x, side), wrap_coord(pos.y, side)};
      }
      t = t1;
      pausing = !pausing;
      remaining = pausing ? p : w;
      if (!pausing) new_heading();
    }
  }
  ContactExperiment out;
  out.horizon = horizon;
  out.sensors = sensors.size();
  out.mdcs = mdcs.size();
  for (auto& list : iv) {
    if (list.empty()) continue;
    std::sort(list.begin(), list.end(), [](auto& x, auto& y) { return x.a < y.a; });
    std::vector<detail::Interval> merged;
    for (const auto& x : list) {
      if (!merged.empty() && x.a <= merged.back().b + 1e-12)
        merged.back().b = std::max(merged.back().b, x.b);
      else
        merged.push_back(x);
    }
    for (std::size_t k = 0; k < merged.size(); ++k) {
      bool censored = merged[k].a <= 0.0 || merged[k].b >= horizon;
      if (!censored) out.ct.add(merged[k].b - merged[k].a);
      if (k + 1 < merged.size()) out.ict.add(merged[k + 1].a - merged[k].b);
    }
  }
  return out;
}

// Runs the experiment with a horizon sized for at least min_contacts contacts and
// min_gaps gaps, doubling it if the first try falls short. The horizon is also kept
// long against the mean gap, since gaps cut by the window edges are dropped.
inline ContactExperiment contact_experiment_sized(const NetworkConfig& c, std::uint64_t seed,
                                                  std::size_t min_contacts, std::size_t min_gaps) {
  auto k = compute_contact_stats(c);
  double per_sensor_rate = 1.0 / (k.e_ct + k.e_ict);
  double sensors = std::max(1.0, c.sensor_density * c.arena_side * c.arena_side);
  double need = static_cast<double>(std::max(min_contacts, min_gaps));
  double horizon = std::max(1.3 * need / (per_sensor_rate * sensors), 200.0 * (k.e_ct + k.e_ict));
  for (int attempt = 0; attempt < 6; ++attempt) {
    auto r = contact_experiment(c, seed, horizon);
    if (r.ct.count() >= min_contacts && r.ict.count() >= min_gaps) return r;
    horizon *= 2.0;
  }
  return contact_experiment(c, seed, horizon);
}

// ---------------------------------------------------------------------------
// Embedded G-limited vacation queue: at each vacation end, the packets present are
// gated and at most Xi of them are served one after another (geometric slots each);
// arrivals during service wait for the next period; then an exponential vacation.

struct QueueOracleResult {
  std::vector<double> q;  // P(L* = k), k < Xi
  double e_l = 0;         // time-average number in system, packets
  double wait = 0;        // mean wait before service starts, slots
  double e_l_star = 0;    // mean number present at service-period start
  std::uint64_t cycles = 0;
};

inline QueueOracleResult queue_oracle(int xi_cap, double xs, double p, double e_vs,
                                      std::uint64_t cycles, std::uint64_t seed) {
  Rng rng(seed, Stream::oracle);
  std::deque<double> queue;
  std::vector<double> hist(static_cast<std::size_t>(xi_cap), 0.0);
  double now = 0.0, area = 0.0, waited = 0.0, lstar = 0.0;
  std::uint64_t served = 0;
  std::vector<double> times;
  auto arrive = [&](double t0, double dur, std::size_t in_system) {
    long k = rng.poisson(xs * dur);
    times.clear();
    for (long i = 0; i < k; ++i) times.push_back(t0 + dur * rng.uniform());
    std::sort(times.begin(), times.end());
    area += static_cast<double>(in_system) * dur;
    for (double ta : times) {
      area += t0 + dur - ta;
      queue.push_back(ta);
    }
  };
  for (std::uint64_t c = 0; c < cycles; ++c) {
    std::size_t n = queue.size();
    lstar += static_cast<double>(n);
    if (n < hist.size()) hist[n] += 1.0;
    std::size_t batch = std::min<std::size_t>(n, static_cast<std::size_t>(xi_cap));
    for (std::size_t i = 0; i < batch; ++i) {
      double ta = queue.front();
      queue.pop_front();
      waited += now - ta;
      ++served;
      double s = static_cast<double>(rng.geometric_trials(p));
      arrive(now, s, queue.size() + 1);
      now += s;
    }
    double vac = rng.exponential(e_vs);
    arrive(now, vac, queue.size());
    now += vac;
  }
  QueueOracleResult r;
  r.cycles = cycles;
  for (auto& h : hist) h /= static_cast<double>(cycles);
  r.q = hist;
  r.e_l = area / now;
  r.wait = served ? waited / static_cast<double>(served) : 0.0;
  r.e_l_star = lstar / static_cast<double>(cycles);
  return r;
}

inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0, ta = 0.0, tb = 0.0;
  for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k) {
    double x = k < a.size() ? a[k] : 0.0, y = k < b.size() ? b[k] : 0.0;
    s += std::abs(x - y);
    ta += x;
    tb += y;
  }
  // the mass at k >= Xi is the remainder of each vector
  s += std::abs((1.0 - ta) - (1.0 - tb));
  return 0.5 * s;
}

// ---------------------------------------------------------------------------
// Contact-cycle queue: exponential contacts and gaps, one attempt per slot while in
// contact, success probability p, gated at contact start. Returns the time-average
// queue length across independent sensors over evenly spaced windows; within a cycle
// the queue is held at its value at contact start.

struct QueueTrace {
  std::vector<double> t;     // s, window ends
  std::vector<double> mean;  // packets per sensor
};

inline QueueTrace contact_cycle_queue(double xi, double delta, double p, double e_ct, double e_ict,
                                      double horizon, int sensors, int windows, std::uint64_t seed) {
  Rng rng(seed, Stream::oracle);
  const auto nw = static_cast<std::size_t>(windows);
  const double width = horizon / windows;
  QueueTrace tr;
  tr.t.resize(nw);
  tr.mean.assign(nw, 0.0);
  for (std::size_t k = 0; k < nw; ++k) tr.t[k] = width * static_cast<double>(k + 1);
  for (int s = 0; s < sensors; ++s) {
    double t = 0.0;
    long q = 0;
    while (t < horizon) {
      double ct = rng.exponential(e_ct), ict = rng.exponential(e_ict);
      double end = t + ct + ict;
      for (double a = t; a < std::min(end, horizon);) {
        auto k = std::min(nw - 1, static_cast<std::size_t>(a / width));
        double b = std::min({end, horizon, tr.t[k]});
        tr.mean[k] += static_cast<double>(q) * (b - a);
        a = b;
        if (b == tr.t[k] && k + 1 == nw) break;
      }
      long slots = static_cast<long>(std::floor(ct / delta));
      long cap = slots > 0 ? std::binomial_distribution<long>(slots, p)(rng) : 0;
      q = q - std::min(q, cap) + rng.poisson(xi * (ct + ict));
      t = end;
    }
  }
  for (auto& m : tr.mean) m /= sensors * width;
  return tr;
}

// Relative change of the mean over the last quarter of the windows against the quarter
// before it.
inline double last_quartile_drift(const QueueTrace& tr) {
  std::size_t n = tr.mean.size(), q = n / 4;
  double q3 = 0, q4 = 0;
  for (std::size_t k = n - 2 * q; k < n - q; ++k) q3 += tr.mean[k];
  for (std::size_t k = n - q; k < n; ++k) q4 += tr.mean[k];
  return q3 > 0 ? q4 / q3 - 1.0 : (q4 > 0 ? std::numeric_limits<double>::infinity() : 0.0);
}

// ---------------------------------------------------------------------------
// SINR Monte Carlo: receiver at the origin, serving link length with density 2r/R^2 on
// [0, R], Rayleigh fading everywhere, interferers a PPP on the annulus
// [exclusion(r0), r_max].

enum class InterfererRegion { beyond_link, whole_plane };

inline double sinr_coverage_mc(double lambda, double link_radius, double threshold, double alpha,
                               double power, double noise, InterfererRegion region, double r_max,
                               long samples, std::uint64_t seed) {
  Rng rng(seed, Stream::oracle);
  long ok = 0;
  for (long n = 0; n < samples; ++n) {
    double r0 = link_radius * std::sqrt(rng.uniform());
    double inner = region == InterfererRegion::beyond_link ? r0 : 0.0;
    double area = std::numbers::pi * (r_max * r_max - inner * inner);
    long k = rng.poisson(lambda * area);
    double interf = 0.0;
    for (long i = 0; i < k; ++i) {
      double rx = std::sqrt(inner * inner + (r_max * r_max - inner * inner) * rng.uniform());
      interf += power * rng.exponential(1.0) * std::pow(std::max(rx, 1e-6), -alpha);
    }
    double sig = power * rng.exponential(1.0) * std::pow(std::max(r0, 1e-9), -alpha);
    if (sig > threshold * (interf + noise)) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(samples);
}

}  // namespace mdcnet
