// Copyright 2026 The hypwarp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "hypwarp/parallel.hpp"

/**
 * Warped products g = f(t)^2 g_hyp + dt^2 over a hyperbolic surface, with
 *
 *   f(t) = cosh(l t) / l + chi(t) (1 - 1/l),
 *
 * where chi is a C^2 cutoff equal to 1 on |t| <= t0 and 0 on |t| >= M.
 * Outside [-M, M] the metric is cosh^2(l t)/l^2 g_hyp + dt^2, which has
 * constant curvature -l^2. At t = 0 the fiber is totally geodesic with
 * curvature -1.
 *
 * cosh(l t) overflows double precision for l|t| > ~710 and f^2 already for
 * l|t| > ~355, so curvature is evaluated from f, f', f'' divided by
 * cosh(l t). The ratios that enter the curvature are unchanged.
 */
namespace hypwarp::warped {

/// Margin tolerance for the K <= -1 certificate.
inline constexpr double kMarginTol = 1e-9;
/// Relative tolerance between closed-form and finite-difference curvature.
inline constexpr double kFdTol = 1e-5;

/// max |S'| and max |S''| of the quintic smoothstep S(s) = 6s^5 - 15s^4 + 10s^3 on [0,1].
inline constexpr double kSmoothstepD1 = 15.0 / 8.0;
inline constexpr double kSmoothstepD2 = 10.0 / 1.7320508075688772;

/// C^2 cutoff: 1 on |t| <= t0, quintic smoothstep down to 0 on [t0, M], 0 beyond.
struct CutoffSpec {
  double t0 = 0.5;
  double M = 188.0;
  double derivative_bound = 0.01;  // certified max(|chi'|, |chi''|)

  static CutoffSpec smoothstep(double t0, double M) {
    if (!(t0 > 0.0) || !(M > t0)) throw std::invalid_argument("CutoffSpec: need 0 < t0 < M");
    const double w = M - t0;
    return {t0, M, std::max(kSmoothstepD1 / w, kSmoothstepD2 / (w * w))};
  }

  /// Smallest M whose closed-form smoothstep bounds give derivative_bound <= bound.
  static CutoffSpec with_bound(double t0, double bound) {
    if (!(bound > 0.0)) throw std::invalid_argument("CutoffSpec: bound must be positive");
    const double w = std::max(kSmoothstepD1 / bound, std::sqrt(kSmoothstepD2 / bound));
    return smoothstep(t0, t0 + w);
  }
};

struct Jet {
  double value, d1, d2;
};

inline Jet chi(const CutoffSpec& spec, double t) {
  const double a = std::abs(t);
  if (a <= spec.t0) return {1.0, 0.0, 0.0};
  if (a >= spec.M) return {0.0, 0.0, 0.0};
  const double w = spec.M - spec.t0;
  const double s = (a - spec.t0) / w;
  const double s2 = s * s, s3 = s2 * s;
  const double step = s3 * (10.0 - 15.0 * s + 6.0 * s2);
  const double dstep = 30.0 * s2 * (1.0 - s) * (1.0 - s);
  const double ddstep = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
  const double sign = t < 0.0 ? -1.0 : 1.0;  // chi is even, chi' is odd
  return {1.0 - step, -sign * dstep / w, -ddstep / (w * w)};
}

struct WarpedMetric {
  double ell = 2.0;
  CutoffSpec cutoff;
  int n = 3;

  explicit WarpedMetric(double ell_, CutoffSpec cutoff_ = CutoffSpec::with_bound(0.5, 0.01), int n_ = 3)
      : ell(ell_), cutoff(cutoff_), n(n_) {
    if (!(ell >= 1.0) || !std::isfinite(ell)) throw std::invalid_argument("WarpedMetric: need ell >= 1");
    if (n != 3) throw std::invalid_argument("WarpedMetric: only 3-dimensional total spaces are supported");
  }

  double cutoff_weight() const { return 1.0 - 1.0 / ell; }
};

/// f, f', f'' at t. Overflows to inf for l|t| beyond ~710.
inline Jet warp_f(const WarpedMetric& m, double t) {
  const Jet c = chi(m.cutoff, t);
  const double w = m.cutoff_weight(), l = m.ell;
  return {std::cosh(l * t) / l + c.value * w, std::sinh(l * t) + c.d1 * w, l * std::cosh(l * t) + c.d2 * w};
}

/// f, f', f'' divided by cosh(l t), together with sech(l t).
struct ScaledJet {
  double f, d1, d2, sech;
};

inline double sech(double x) {
  const double e = std::exp(-std::abs(x));
  return 2.0 * e / (1.0 + e * e);
}

inline ScaledJet warp_scaled(const WarpedMetric& m, double t) {
  const Jet c = chi(m.cutoff, t);
  const double w = m.cutoff_weight(), l = m.ell, s = sech(l * t);
  return {1.0 / l + c.value * w * s, std::tanh(l * t) + c.d1 * w * s, l + c.d2 * w * s, s};
}

/// (K_S - f'^2) / f^2 with K_S = -1: curvature of planes tangent to the fiber.
inline double fiber_term(const WarpedMetric& m, double t) {
  const ScaledJet j = warp_scaled(m, t);
  return (-j.sech * j.sech - j.d1 * j.d1) / (j.f * j.f);
}

/// -f''/f: curvature of planes containing d/dt.
inline double radial_curvature(const WarpedMetric& m, double t) {
  const ScaledJet j = warp_scaled(m, t);
  return -j.d2 / j.f;
}

/// A tangent 2-plane at height t, summarized by mix = g(X,dt)^2 + g(Y,dt)^2
/// for an orthonormal basis X, Y of the plane.
struct PlaneAtPoint {
  double t;
  double mix;
};

/// K = (K_S - f'^2)/f^2 + ((-K_S + f'^2 - f'' f)/f^2) mix, with K_S = -1.
inline double sectional_curvature(const WarpedMetric& m, const PlaneAtPoint& p) {
  if (!(p.mix >= 0.0 && p.mix <= 1.0)) throw std::invalid_argument("sectional_curvature: mix must lie in [0,1]");
  const ScaledJet j = warp_scaled(m, p.t);
  const double f2 = j.f * j.f, s2 = j.sech * j.sech, fp2 = j.d1 * j.d1;
  return (-s2 - fp2) / f2 + ((s2 + fp2 - j.d2 * j.f) / f2) * p.mix;
}

/// Second fundamental form scale of the fiber t = 0, |f'(0)/f(0)|.
inline double totally_geodesic_check(const WarpedMetric& m) {
  const Jet j = warp_f(m, 0.0);
  return std::abs(j.d1 / j.value);
}

/// Terms of the fiber-term derivative without chi' or chi'', mirrored to
/// t >= 0 and divided by cosh^3(l t). Must be <= 0 on the plateau.
inline double plateau_rhs(const WarpedMetric& m, double t) {
  const double l = m.ell, a = l * std::abs(t);
  const double s = sech(a), th = std::tanh(a);
  const double x = chi(m.cutoff, t).value;
  return th * (-2.0 - 2.0 * l * x * m.cutoff_weight() * s + s * s + th * th);
}

/// Right-hand side of 1 <= l^2 cosh/(cosh + l - 1) + chi''(l-1)/(cosh + l - 1),
/// the sufficient condition for -f''/f <= -1 off the plateau.
inline double cutoff_rhs(const WarpedMetric& m, double t) {
  const double l = m.ell, s = sech(l * t);
  const double denom = 1.0 + (l - 1.0) * s;
  return l * l / denom + chi(m.cutoff, t).d2 * (l - 1.0) * s / denom;
}

struct GridCell {
  double t;
  double mix;
  double K;
  double margin;  // -1 - K
  std::size_t index;
};

struct CertificateReport {
  double ell, t0, M, derivative_bound;
  double t_lo, t_hi;
  std::size_t t_intervals, mix_intervals;
  double margin_min = std::numeric_limits<double>::infinity();
  GridCell argmin{};
  bool pass = false;
  std::size_t violations = 0;
  bool plateau_pass = true, cutoff_pass = true;
  double plateau_max = -std::numeric_limits<double>::infinity();  // largest rhs on the plateau (want <= 0)
  double cutoff_min = std::numeric_limits<double>::infinity();   // smallest rhs off the plateau (want >= 1)
  std::vector<GridCell> worst;  // lowest-margin cells, best first
};

namespace detail {

inline bool cell_before(const GridCell& a, const GridCell& b) {
  return a.margin < b.margin || (a.margin == b.margin && a.index < b.index);
}

}  // namespace detail

/**
 * Sweeps K over (t, mix) on a (t_intervals+1) x (mix_intervals+1) node grid
 * covering [t_lo, t_hi] x [0, 1], and checks the two sufficient inequalities
 * on their ranges. Passing is evidence on the grid, not a proof.
 * Result does not depend on the number of workers.
 */
inline CertificateReport verify_bound(const WarpedMetric& m, double t_lo, double t_hi, std::size_t t_intervals,
                                      std::size_t mix_intervals, unsigned threads = 1, std::size_t keep_worst = 10) {
  if (t_intervals < 1000 || mix_intervals < 100) {
    throw std::invalid_argument("verify_bound: grid must be at least 1000 x 100");
  }
  if (!(t_hi > t_lo)) throw std::invalid_argument("verify_bound: empty t range");
  threads = std::max(1u, threads);
  const std::size_t nt = t_intervals + 1, nm = mix_intervals + 1;

  auto run = [&](std::size_t row_begin, std::size_t row_end, CertificateReport& r) {
    for (std::size_t i = row_begin; i < row_end; ++i) {
      // Symmetric node placement keeps the grid exactly even when t_lo = -t_hi.
      const double u = static_cast<double>(i) / static_cast<double>(t_intervals);
      const double t = (i * 2 == t_intervals) ? 0.5 * (t_lo + t_hi) : t_lo + (t_hi - t_lo) * u;
      const ScaledJet j = warp_scaled(m, t);
      const double f2 = j.f * j.f, s2 = j.sech * j.sech, fp2 = j.d1 * j.d1;
      const double base = (-s2 - fp2) / f2, slope = (s2 + fp2 - j.d2 * j.f) / f2;
      for (std::size_t k = 0; k < nm; ++k) {
        const double mix = static_cast<double>(k) / static_cast<double>(mix_intervals);
        const double K = base + slope * mix;
        const GridCell cell{t, mix, K, -1.0 - K, i * nm + k};
        if (cell.margin < -kMarginTol) ++r.violations;
        if (r.worst.size() < keep_worst || detail::cell_before(cell, r.worst.back())) {
          r.worst.insert(std::upper_bound(r.worst.begin(), r.worst.end(), cell, detail::cell_before), cell);
          if (r.worst.size() > keep_worst) r.worst.pop_back();
        }
      }
      if (std::abs(t) < m.cutoff.t0) {
        const double v = plateau_rhs(m, t);
        r.plateau_max = std::max(r.plateau_max, v);
        if (v > kMarginTol) r.plateau_pass = false;
      } else if (std::abs(t) > m.cutoff.t0) {
        const double v = cutoff_rhs(m, t);
        r.cutoff_min = std::min(r.cutoff_min, v);
        if (v < 1.0 - kMarginTol) r.cutoff_pass = false;
      }
    }
  };

  std::vector<CertificateReport> parts(threads);
  std::vector<std::thread> pool;
  const std::size_t chunk = (nt + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t b = std::min(nt, w * chunk), e = std::min(nt, b + chunk);
    if (threads == 1) {
      run(b, e, parts[w]);
    } else {
      pool.emplace_back(run, b, e, std::ref(parts[w]));
    }
  }
  for (auto& th : pool) th.join();

  CertificateReport rep;
  rep.ell = m.ell;
  rep.t0 = m.cutoff.t0;
  rep.M = m.cutoff.M;
  rep.derivative_bound = m.cutoff.derivative_bound;
  rep.t_lo = t_lo;
  rep.t_hi = t_hi;
  rep.t_intervals = t_intervals;
  rep.mix_intervals = mix_intervals;
  for (const auto& p : parts) {
    rep.violations += p.violations;
    rep.plateau_pass = rep.plateau_pass && p.plateau_pass;
    rep.cutoff_pass = rep.cutoff_pass && p.cutoff_pass;
    rep.plateau_max = std::max(rep.plateau_max, p.plateau_max);
    rep.cutoff_min = std::min(rep.cutoff_min, p.cutoff_min);
    rep.worst.insert(rep.worst.end(), p.worst.begin(), p.worst.end());
  }
  std::sort(rep.worst.begin(), rep.worst.end(), detail::cell_before);
  if (rep.worst.size() > keep_worst) rep.worst.resize(keep_worst);
  rep.argmin = rep.worst.front();
  rep.margin_min = rep.argmin.margin;
  rep.pass = rep.margin_min >= -kMarginTol;
  return rep;
}

// ---------------------------------------------------------------------------
// Finite-difference Riemann tensor oracle.

/// A 3x3 symmetric metric in coordinates (r, theta, t).
using Metric3 = Eigen::Matrix3d;
using Point3 = Eigen::Vector3d;

/**
 * Sectional curvature of span(X, Y) for the metric field g at x, computed
 * from finite-difference first and second partials of g (fourth-order
 * central stencils) via
 *
 *   R_abcd = 1/2 (g_ad,bc + g_bc,ad - g_ac,bd - g_bd,ac)
 *            + g_ef (G^e_bc G^f_ad - G^e_bd G^f_ac).
 *
 * Independent of the warped-product curvature formula.
 */
template <typename MetricField>
double fd_sectional_curvature(const MetricField& g, const Point3& x, const Point3& X, const Point3& Y, double h) {
  if (!(h > 1e-12 * std::max(1.0, x.cwiseAbs().maxCoeff()))) {
    throw std::invalid_argument("fd_sectional_curvature: step size underflow");
  }
  const auto shift = [&](int a, double da, int b, double db) {
    Point3 y = x;
    y[a] += da;
    y[b] += db;
    return y;
  };
  std::array<Metric3, 3> dg;
  std::array<std::array<Metric3, 3>, 3> ddg;
  // f'(0) ~ (-f(2h) + 8 f(h) - 8 f(-h) + f(-2h)) / 12h
  constexpr std::array<double, 4> off = {-2.0, -1.0, 1.0, 2.0};
  constexpr std::array<double, 4> w1 = {1.0, -8.0, 8.0, -1.0};
  for (int a = 0; a < 3; ++a) {
    Metric3 acc = Metric3::Zero();
    for (int k = 0; k < 4; ++k) acc += w1[k] * g(shift(a, off[k] * h, a, 0.0));
    dg[a] = acc / (12.0 * h);
  }
  // f''(0) ~ (-f(2h) + 16 f(h) - 30 f(0) + 16 f(-h) - f(-2h)) / 12h^2
  const Metric3 g0 = g(x);
  for (int a = 0; a < 3; ++a) {
    Metric3 acc = -30.0 * g0;
    constexpr std::array<double, 4> w2 = {-1.0, 16.0, 16.0, -1.0};
    for (int k = 0; k < 4; ++k) acc += w2[k] * g(shift(a, off[k] * h, a, 0.0));
    ddg[a][a] = acc / (12.0 * h * h);
  }
  // Mixed partials: tensor product of the first-derivative stencil.
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      Metric3 acc = Metric3::Zero();
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) acc += w1[k] * w1[l] * g(shift(a, off[k] * h, b, off[l] * h));
      ddg[a][b] = ddg[b][a] = acc / (144.0 * h * h);
    }

  const Metric3 ginv = g0.inverse();
  // Gamma[e](b,c) = G^e_bc
  std::array<Metric3, 3> gamma;
  for (int e = 0; e < 3; ++e)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l) s += ginv(e, l) * (dg[b](l, c) + dg[c](l, b) - dg[l](b, c));
        gamma[e](b, c) = 0.5 * s;
      }
  const auto riemann = [&](int a, int b, int c, int d) {
    double r = 0.5 * (ddg[b][c](a, d) + ddg[a][d](b, c) - ddg[b][d](a, c) - ddg[a][c](b, d));
    for (int e = 0; e < 3; ++e)
      for (int f = 0; f < 3; ++f) r += g0(e, f) * (gamma[e](b, c) * gamma[f](a, d) - gamma[e](b, d) * gamma[f](a, c));
    return r;
  };
  double num = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) num += riemann(a, b, c, d) * X[a] * Y[b] * X[c] * Y[d];
  const double xx = X.dot(g0 * X), yy = Y.dot(g0 * Y), xy = X.dot(g0 * Y);
  const double area2 = xx * yy - xy * xy;
  if (!(area2 > 0.0)) throw std::invalid_argument("fd_sectional_curvature: X and Y are not independent");
  return num / area2;
}

/**
 * Explicit chart of the warped metric around height t_star: coordinates
 * (r, theta, t) with fiber chart dr^2 + F(r)^2 dtheta^2 rescaled by
 * f(t_star), i.e.
 *
 *   g = phi(t)^2 (dr^2 + F(r)^2 dtheta^2) + dt^2,
 *   phi = f(t)/f(t_star),  F(r) = f(t_star) sinh(r / f(t_star)).
 *
 * This is the polar chart of the hyperbolic fiber, rescaled so that no
 * coordinate value overflows.
 */
class WarpedChart {
 public:
  WarpedChart(const WarpedMetric& m, double t_star) : m_(m), log_scale_(m.ell * std::abs(t_star)) {
    f_star_scaled_ = scaled_f(t_star);
  }

  Metric3 operator()(const Point3& x) const {
    const double phi = scaled_f(x[2]) / f_star_scaled_;
    const double F = x[0] * sinhc(x[0] * std::exp(-log_scale_) / f_star_scaled_);
    Metric3 g = Metric3::Zero();
    g(0, 0) = phi * phi;
    g(1, 1) = phi * phi * F * F;
    g(2, 2) = 1.0;
    return g;
  }

 private:
  static double sinhc(double x) { return std::abs(x) < 1e-8 ? 1.0 : std::sinh(x) / x; }

  // f(t) e^{-log_scale}, with cosh(l t) = e^{l|t|} (1 + e^{-2l|t|}) / 2.
  double scaled_f(double t) const {
    const double a = m_.ell * std::abs(t);
    const double c = std::exp(a - log_scale_) * 0.5 * (1.0 + std::exp(-2.0 * a));
    return c / m_.ell + chi(m_.cutoff, t).value * m_.cutoff_weight() * std::exp(-log_scale_);
  }

  WarpedMetric m_;
  double log_scale_;
  double f_star_scaled_;
};

/// Fiber radius at which the oracle chart is evaluated.
inline constexpr double kOracleRadius = 0.8;
/// Finite-difference step for the oracle.
inline constexpr double kOracleStep = 2e-3;

/// Sectional curvature at height t of the plane spanned by chart vectors X, Y
/// (components along d/dr, d/dtheta, d/dt), by finite differences.
inline double fd_riemann_oracle(const WarpedMetric& m, double t, const Point3& X, const Point3& Y,
                                double h = kOracleStep) {
  const WarpedChart chart(m, t);
  return fd_sectional_curvature(chart, Point3(kOracleRadius, 0.0, t), X, Y, h);
}

/// mix = g(X,dt)^2 + g(Y,dt)^2 for an orthonormalized basis of span(X, Y),
/// using the oracle chart's metric at its base point.
inline double plane_mix(const WarpedMetric& m, double t, const Point3& X, const Point3& Y) {
  const Metric3 g = WarpedChart(m, t)(Point3(kOracleRadius, 0.0, t));
  const auto ip = [&](const Point3& a, const Point3& b) { return a.dot(g * b); };
  const Point3 e1 = X / std::sqrt(ip(X, X));
  Point3 y = Y - ip(Y, e1) * e1;
  const Point3 e2 = y / std::sqrt(ip(y, y));
  const Point3 dt(0.0, 0.0, 1.0);
  return std::clamp(std::pow(ip(e1, dt), 2) + std::pow(ip(e2, dt), 2), 0.0, 1.0);
}

}  // namespace hypwarp::warped
