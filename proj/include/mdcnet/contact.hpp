#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "mdcnet/config.hpp"
#include "mdcnet/error.hpp"
#include "mdcnet/quadrature.hpp"

namespace mdcnet {

struct ContactStats {
  double e_ct = 0;     // s
  double e_ict = 0;    // s, gap between MDC contacts seen by a sensor
  double e_ict_s = 0;  // s, gap between sensor contacts seen by an MDC
  double e_d = 0;      // m
  double p_pause = 0;
  double e_tw = 0;  // s
  double e_tp = 0;  // s
  double p_ct = 0;
};

enum class ChordMethod { integral, fit };

inline constexpr double kChordFitCoefficient = 1.1318;

// Mean distance between a uniform point of the contact disk and a uniform point of its
// rim, as a triple integral: two angles by periodic trapezoid, radius adaptively.
inline double expected_chord(double r_s, ChordMethod method = ChordMethod::integral,
                             int angle_points = 256, double rel_tol = 1e-9) {
  if (!(r_s > 0)) throw Error(ErrorKind::NonPositiveParameter, "r_s must be > 0");
  if (method == ChordMethod::fit) return kChordFitCoefficient * r_s;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  QuadTolerance tol{1e-14 * r_s * r_s * r_s, rel_tol, 20};
  auto radial = [&](double a, double t) {
    double ca = std::cos(a), sa = std::sin(a), ct = std::cos(t), st = std::sin(t);
    auto f = [&](double r) {
      double dx = r * ca - r_s * ct, dy = r * sa - r_s * st;
      return std::sqrt(dx * dx + dy * dy) * r;
    };
    return integrate(f, 0.0, r_s, tol).value;
  };
  double total = periodic_trapezoid(
      [&](double t) {
        return periodic_trapezoid([&](double a) { return radial(a, t); }, 0.0, two_pi, angle_points);
      },
      0.0, two_pi, angle_points);
  return total / (2.0 * std::numbers::pi * std::numbers::pi * r_s * r_s);
}

// E(D) for a unit radius, computed once; E(D) is homogeneous of degree one in r_s.
inline double unit_expected_chord() {
  static const double v = expected_chord(1.0);
  return v;
}

struct ContactComponents {
  double p_pause;
  double e_tw;
  double e_tp;
};

inline ContactComponents contact_components(const NetworkConfig& c, double e_d) {
  double p_pause = std::numbers::pi * c.contact_radius / (2.0 * c.walk_time * c.speed);
  double e_tw = std::numbers::pi * c.contact_radius / (2.0 * c.speed);
  double e_tp = 2.0 * e_d / c.speed + c.pause_time;
  return {p_pause, e_tw, e_tp};
}

inline double expected_contact_time(const NetworkConfig& c, double e_d) {
  const double pi = std::numbers::pi;
  double r = c.contact_radius, v = c.speed;
  return pi * r * (2.0 * v * (c.walk_time + c.pause_time) + 4.0 * e_d - pi * r) /
         (4.0 * c.walk_time * v * v);
}

inline double expected_contact_time(const NetworkConfig& c) {
  return expected_contact_time(c, unit_expected_chord() * c.contact_radius);
}

inline double expected_intercontact_time(double r, double v, double w, double p, double density) {
  if (!(density > 0))
    throw Error(ErrorKind::ZeroDensity, "inter-contact time undefined for zero density");
  return (w + p) / (2.0 * w * v * density * r);
}

enum class ContactProbabilityMethod { exact, approx };

inline ContactStats compute_contact_stats(const NetworkConfig& c,
                                          ChordMethod chord = ChordMethod::integral) {
  ContactStats s;
  s.e_d = chord == ChordMethod::integral ? unit_expected_chord() * c.contact_radius
                                         : expected_chord(c.contact_radius, ChordMethod::fit);
  auto comp = contact_components(c, s.e_d);
  s.p_pause = comp.p_pause;
  s.e_tw = comp.e_tw;
  s.e_tp = comp.e_tp;
  s.e_ct = expected_contact_time(c, s.e_d);
  s.e_ict = c.mdc_density > 0
                ? expected_intercontact_time(c.contact_radius, c.speed, c.walk_time, c.pause_time,
                                             c.mdc_density)
                : std::numeric_limits<double>::infinity();
  s.e_ict_s = expected_intercontact_time(c.contact_radius, c.speed, c.walk_time, c.pause_time,
                                         c.sensor_density);
  s.p_ct = std::isfinite(s.e_ict) ? s.e_ct / (s.e_ct + s.e_ict) : 0.0;
  return s;
}

inline double contact_probability(const NetworkConfig& c,
                                  ContactProbabilityMethod m = ContactProbabilityMethod::exact) {
  if (c.mdc_density <= 0) return 0.0;
  if (m == ContactProbabilityMethod::exact) return compute_contact_stats(c).p_ct;
  double r = c.contact_radius;
  double x = std::numbers::pi * r * r * c.mdc_density *
             (1.0 + 0.6428 * r / (c.speed * (c.walk_time + c.pause_time)));
  return 1.0 / (1.0 + 1.0 / x);
}

}  // namespace mdcnet
