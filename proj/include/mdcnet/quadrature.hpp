#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mdcnet/error.hpp"

namespace mdcnet {

struct QuadResult {
  double value;
  double error;
};

struct QuadTolerance {
  double abs = 1e-10;
  double rel = 1e-8;
  unsigned max_depth = 18;
};

// Adaptive Gauss-Kronrod (31 nodes) on a finite interval. Throws when the error
// estimate exceeds max(abs, rel*|I|).
template <class F>
QuadResult integrate(F&& f, double a, double b, QuadTolerance tol = {}) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  if (a == b) return {0.0, 0.0};
  double err = 0.0;
  double l1 = 0.0;
  double v = GK::integrate(f, a, b, tol.max_depth, tol.rel * 0.5, &err, &l1);
  double allowed = std::max(tol.abs, tol.rel * std::abs(v));
  if (!std::isfinite(v) || err > allowed) {
    std::ostringstream m;
    m << "integral over [" << a << ", " << b << "] = " << v << " with error estimate " << err
      << " > " << allowed;
    throw Error(ErrorKind::QuadratureNotConverged, m.str());
  }
  return {v, err};
}

// Trapezoid rule on a full period; spectrally accurate for smooth periodic f.
template <class F>
double periodic_trapezoid(F&& f, double a, double period, int n) {
  double h = period / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(a + i * h);
  return s * h;
}

}  // namespace mdcnet
