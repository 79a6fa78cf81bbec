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
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

/**
 * Hyperbolic n-space in the hyperboloid model.
 *
 * Points live on the upper sheet of <x,x> = -1 in R^{n,1}, where
 * <x,y> = -x0*y0 + x1*y1 + ... + xn*yn. Tangent vectors at p are the vectors
 * Minkowski-orthogonal to p; they are spacelike, so the form restricted to a
 * tangent space is positive definite.
 *
 * Every operation producing a point re-projects onto the hyperboloid by
 * recomputing the timelike coordinate from the spatial ones, so long chains
 * of operations do not drift off the sheet.
 */
namespace hypwarp {

/// Point/tangent tolerance.
inline constexpr double kPointTol = 1e-9;
/// Isometry (Lorentz matrix) tolerance.
inline constexpr double kIsoTol = 1e-8;

/// Raised for invalid geometric input: off-sheet points, non-unit tangents,
/// mismatched dimensions, degenerate configurations.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raw coordinates in R^{n,1}. No normalization is implied.
class MinkowskiVec {
 public:
  MinkowskiVec() = default;
  explicit MinkowskiVec(Vec coords) : c_(std::move(coords)) {}
  MinkowskiVec(std::initializer_list<double> coords) : c_(coords.size()) {
    std::size_t i = 0;
    for (double x : coords) c_[static_cast<Eigen::Index>(i++)] = x;
  }

  static MinkowskiVec zeros(std::size_t ambient) {
    return MinkowskiVec(Vec::Zero(static_cast<Eigen::Index>(ambient)));
  }
  /// Unit coordinate vector e_i of R^{n,1}.
  static MinkowskiVec basis(std::size_t ambient, std::size_t i) {
    Vec v = Vec::Zero(static_cast<Eigen::Index>(ambient));
    v[static_cast<Eigen::Index>(i)] = 1.0;
    return MinkowskiVec(std::move(v));
  }

  std::size_t size() const { return static_cast<std::size_t>(c_.size()); }
  double operator[](std::size_t i) const { return c_[static_cast<Eigen::Index>(i)]; }
  double& operator[](std::size_t i) { return c_[static_cast<Eigen::Index>(i)]; }
  const Vec& coords() const { return c_; }
  Vec& coords() { return c_; }

  std::vector<double> to_std() const { return {c_.data(), c_.data() + c_.size()}; }

  MinkowskiVec& operator+=(const MinkowskiVec& o) { c_ += o.c_; return *this; }
  MinkowskiVec& operator-=(const MinkowskiVec& o) { c_ -= o.c_; return *this; }
  MinkowskiVec& operator*=(double s) { c_ *= s; return *this; }
  friend MinkowskiVec operator+(MinkowskiVec a, const MinkowskiVec& b) { return a += b; }
  friend MinkowskiVec operator-(MinkowskiVec a, const MinkowskiVec& b) { return a -= b; }
  friend MinkowskiVec operator*(double s, MinkowskiVec a) { return a *= s; }
  friend MinkowskiVec operator*(MinkowskiVec a, double s) { return a *= s; }
  friend MinkowskiVec operator-(MinkowskiVec a) { return a *= -1.0; }

 private:
  Vec c_;
};

/// -x0*y0 + sum_i xi*yi. Throws on dimension mismatch.
inline double mink_inner(const MinkowskiVec& x, const MinkowskiVec& y) {
  if (x.size() != y.size()) {
    throw GeometryError("mink_inner: dimension mismatch (" + std::to_string(x.size()) +
                        " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() == 0) return 0.0;
  const auto n = x.coords().size();
  return -x[0] * y[0] + x.coords().tail(n - 1).dot(y.coords().tail(n - 1));
}

/// The Minkowski metric diag(-1, 1, ..., 1) of size ambient x ambient.
inline Mat minkowski_metric(std::size_t ambient) {
  Mat j = Mat::Identity(static_cast<Eigen::Index>(ambient), static_cast<Eigen::Index>(ambient));
  j(0, 0) = -1.0;
  return j;
}

/// A point of H^n on the upper sheet.
class HPoint {
 public:
  /// Validates <v,v> = -1 within kPointTol and v0 > 0, then re-projects.
  static HPoint from_vec(const MinkowskiVec& v, double tol = kPointTol) {
    if (v.size() < 3) throw GeometryError("HPoint: need n >= 2 (ambient dimension >= 3)");
    const double q = mink_inner(v, v);
    if (!std::isfinite(q) || std::abs(q + 1.0) > tol * std::max(1.0, v[0] * v[0])) {
      throw GeometryError("HPoint: <v,v> = " + std::to_string(q) + ", expected -1");
    }
    if (v[0] <= 0.0) throw GeometryError("HPoint: not on the upper sheet");
    return project(v);
  }

  /// Keeps the spatial coordinates and recomputes x0 = sqrt(1 + |x|^2).
  static HPoint project(const MinkowskiVec& v) {
    HPoint p;
    p.v_ = v;
    const auto n = v.coords().size();
    p.v_[0] = std::sqrt(1.0 + v.coords().tail(n - 1).squaredNorm());
    return p;
  }

  /// Rescales a timelike future-pointing vector onto the sheet.
  static HPoint normalize_timelike(const MinkowskiVec& v) {
    const double q = mink_inner(v, v);
    if (!(q < 0.0)) throw GeometryError("HPoint: vector is not timelike");
    MinkowskiVec w = (1.0 / std::sqrt(-q)) * v;
    if (w[0] < 0.0) w = -w;
    return project(w);
  }

  /// The basepoint (1, 0, ..., 0) of H^n.
  static HPoint origin(std::size_t n) { return project(MinkowskiVec::basis(n + 1, 0)); }

  /// n, the dimension of the hyperbolic space.
  std::size_t dim() const { return v_.size() - 1; }
  const MinkowskiVec& vec() const { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }

 private:
  HPoint() = default;
  MinkowskiVec v_;
};

/// A tangent vector dir at base, <base, dir> = 0.
class HTangent {
 public:
  HTangent(HPoint base, MinkowskiVec dir, double tol = kPointTol)
      : base_(std::move(base)), dir_(std::move(dir)) {
    if (dir_.size() != base_.vec().size()) throw GeometryError("HTangent: dimension mismatch");
    const double scale = std::max(1.0, std::abs(base_[0]) * dir_.coords().cwiseAbs().maxCoeff());
    if (std::abs(mink_inner(base_.vec(), dir_)) > tol * scale) {
      throw GeometryError("HTangent: direction is not tangent to the base point");
    }
    // <p,p> = -1, so adding <v,p> p removes the normal component exactly.
    dir_ += mink_inner(dir_, base_.vec()) * base_.vec();
  }

  /// Projects an arbitrary ambient vector onto the tangent space at base.
  static HTangent project(const HPoint& base, const MinkowskiVec& v) {
    return HTangent(base, v + mink_inner(v, base.vec()) * base.vec(), 1e300);
  }

  const HPoint& base() const { return base_; }
  const MinkowskiVec& dir() const { return dir_; }
  double norm() const { return std::sqrt(std::max(0.0, mink_inner(dir_, dir_))); }
  /// Relative to |dir|^2, the rounding scale of the Minkowski form.
  bool is_unit(double tol = kPointTol) const {
    return std::abs(mink_inner(dir_, dir_) - 1.0) <= tol * std::max(1.0, dir_.coords().squaredNorm());
  }
  HTangent normalized() const {
    const double nr = norm();
    if (nr <= 0.0) throw GeometryError("HTangent: cannot normalize a zero vector");
    return HTangent(base_, (1.0 / nr) * dir_, 1e300);
  }
  HTangent scaled(double s) const { return HTangent(base_, s * dir_, 1e300); }

 private:
  HPoint base_;
  MinkowskiVec dir_;
};

/// Geodesic distance, arccosh(-<p,q>). For nearby points the equivalent
/// 2*asinh(|p-q|/2) form is used; it does not lose half the digits near 0.
inline double dist(const HPoint& p, const HPoint& q) {
  const double c = -mink_inner(p.vec(), q.vec());
  if (c < 2.0) {
    const MinkowskiVec d = p.vec() - q.vec();
    const double chord2 = std::max(0.0, mink_inner(d, d));
    return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
  }
  return std::acosh(std::max(1.0, c));
}

/// Point reached at time t along the unit-speed geodesic with initial velocity v.
inline HPoint exp_map(const HTangent& v, double t) {
  if (!v.is_unit()) throw GeometryError("exp_map: direction is not a unit vector");
  return HPoint::project(std::cosh(t) * v.base().vec() + std::sinh(t) * v.dir());
}

/// Unit tangent at p pointing to q.
inline HTangent log_map(const HPoint& p, const HPoint& q) {
  if (p.dim() != q.dim()) throw GeometryError("log_map: dimension mismatch");
  if (dist(p, q) <= kPointTol) throw GeometryError("log_map: degenerate direction (p == q)");
  const MinkowskiVec u = q.vec() + mink_inner(p.vec(), q.vec()) * p.vec();
  return HTangent::project(p, u).normalized();
}

namespace detail {
inline void require_same_base(const HPoint& a, const HPoint& b, const char* what) {
  if (a.dim() != b.dim() || dist(a, b) > kPointTol) {
    throw GeometryError(std::string(what) + ": tangent vectors have different base points");
  }
}
}  // namespace detail

/// Angle in [0, pi] between two unit tangents at the same point.
inline double angle(const HTangent& u, const HTangent& v) {
  detail::require_same_base(u.base(), v.base(), "angle");
  if (!u.is_unit() || !v.is_unit()) throw GeometryError("angle: tangent vectors must be unit");
  // 2 atan2(|u-v|, |u+v|) keeps full precision at both 0 and pi.
  const MinkowskiVec d = u.dir() - v.dir();
  const MinkowskiVec s = u.dir() + v.dir();
  return 2.0 * std::atan2(std::sqrt(std::max(0.0, mink_inner(d, d))),
                          std::sqrt(std::max(0.0, mink_inner(s, s))));
}

/// Geodesic segment between two points.
struct GeodesicSegment {
  HPoint start;
  HPoint end;
  double length;

  static GeodesicSegment between(const HPoint& p, const HPoint& q) { return {p, q, dist(p, q)}; }
};

/// Complete unit-speed geodesic s -> cosh(s) origin + sinh(s) direction.
struct Geodesic {
  HPoint origin;
  MinkowskiVec direction;  // unit, tangent at origin

  static Geodesic through(const HTangent& v) {
    if (!v.is_unit()) throw GeometryError("Geodesic: direction is not a unit vector");
    return {v.base(), v.dir()};
  }
  static Geodesic between(const HPoint& p, const HPoint& q) { return through(log_map(p, q)); }

  HPoint at(double s) const {
    return HPoint::project(std::cosh(s) * origin.vec() + std::sinh(s) * direction);
  }
  HTangent tangent_at(double s) const {
    return HTangent::project(at(s), std::sinh(s) * origin.vec() + std::cosh(s) * direction);
  }
  /// Null vectors representing the endpoints at s -> +inf and s -> -inf.
  std::pair<MinkowskiVec, MinkowskiVec> ideal_endpoints() const {
    return {origin.vec() + direction, origin.vec() - direction};
  }
  std::size_t dim() const { return origin.dim(); }
};

/// Parallel transport of v along the segment. Requires v based at along.start.
inline HTangent parallel_transport(const HTangent& v, const GeodesicSegment& along) {
  detail::require_same_base(v.base(), along.start, "parallel_transport");
  const MinkowskiVec& p = along.start.vec();
  const MinkowskiVec& q = along.end.vec();
  const double denom = 1.0 - mink_inner(p, q);
  const MinkowskiVec w = v.dir() + (mink_inner(q, v.dir()) / denom) * (p + q);
  return HTangent::project(along.end, w);
}

/// A Lorentz transformation preserving the upper sheet.
class Isometry {
 public:
  explicit Isometry(Mat m, double tol = kIsoTol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 3) throw GeometryError("Isometry: bad matrix shape");
    const Mat j = minkowski_metric(static_cast<std::size_t>(m_.rows()));
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff() * m_.cwiseAbs().maxCoeff());
    const double err = (m_.transpose() * j * m_ - j).cwiseAbs().maxCoeff();
    if (!(err <= tol * scale)) {
      throw GeometryError("Isometry: matrix does not preserve the Minkowski form (err " +
                          std::to_string(err) + ")");
    }
    if (m_(0, 0) <= 0.0) throw GeometryError("Isometry: matrix swaps the sheets");
  }

  static Isometry identity(std::size_t n) {
    return Isometry(Mat::Identity(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n + 1)));
  }

  /// Reflection x -> x - 2<x,u>u in the hyperplane with unit spacelike normal u.
  static Isometry reflection(const MinkowskiVec& u) {
    const Mat j = minkowski_metric(u.size());
    return Isometry(Mat::Identity(j.rows(), j.cols()) - 2.0 * u.coords() * (j * u.coords()).transpose());
  }

  /// Unit-speed translation by distance s along the geodesic through the
  /// basepoint in direction e_axis.
  static Isometry boost(std::size_t n, std::size_t axis, double s) {
    Mat m = Mat::Identity(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n + 1));
    const auto a = static_cast<Eigen::Index>(axis);
    m(0, 0) = std::cosh(s);
    m(0, a) = std::sinh(s);
    m(a, 0) = std::sinh(s);
    m(a, a) = std::cosh(s);
    return Isometry(std::move(m));
  }

  const Mat& matrix() const { return m_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()) - 1; }

  MinkowskiVec apply(const MinkowskiVec& v) const { return MinkowskiVec(m_ * v.coords()); }
  HPoint apply(const HPoint& p) const { return HPoint::project(apply(p.vec())); }
  HTangent apply(const HTangent& v) const { return HTangent::project(apply(v.base()), apply(v.dir())); }

  Isometry inverse() const {
    const Mat j = minkowski_metric(static_cast<std::size_t>(m_.rows()));
    return Isometry(j * m_.transpose() * j);
  }
  friend Isometry operator*(const Isometry& a, const Isometry& b) { return Isometry(a.m_ * b.m_); }

 private:
  Mat m_;
};

/// Gram matrix <v_i, v_j> of a list of tangent vectors.
inline Mat gram(std::span<const HTangent> vs) {
  const auto k = static_cast<Eigen::Index>(vs.size());
  Mat g(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      g(i, j) = mink_inner(vs[static_cast<std::size_t>(i)].dir(), vs[static_cast<std::size_t>(j)].dir());
  return g;
}

/// Gram-Schmidt in the tangent space at p. Vectors that become dependent
/// (residual below tol) are dropped, so the result may be shorter than the input.
inline std::vector<HTangent> orthonormalize(const HPoint& p, std::span<const MinkowskiVec> vs,
                                            double tol = 1e-12) {
  std::vector<HTangent> out;
  for (const auto& v : vs) {
    MinkowskiVec w = HTangent::project(p, v).dir();
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : out) w -= mink_inner(w, e.dir()) * e.dir();
    const double nr2 = mink_inner(w, w);
    if (nr2 > tol * tol) out.push_back(HTangent(p, (1.0 / std::sqrt(nr2)) * w, 1e300));
  }
  return out;
}

/// Completes a (possibly empty) orthonormal set at p to a full orthonormal frame of T_pH^n.
inline std::vector<HTangent> complete_frame(const HPoint& p, std::span<const HTangent> partial) {
  std::vector<MinkowskiVec> vs;
  for (const auto& t : partial) vs.push_back(t.dir());
  for (std::size_t i = 1; i <= p.dim(); ++i) vs.push_back(MinkowskiVec::basis(p.dim() + 1, i));
  auto frame = orthonormalize(p, vs, 1e-6);
  if (frame.size() < p.dim()) throw GeometryError("complete_frame: could not span the tangent space");
  frame.resize(p.dim(), frame.front());
  return frame;
}

/// Standard frame e_1..e_n at the basepoint.
inline std::vector<HTangent> standard_frame(std::size_t n) {
  const HPoint o = HPoint::origin(n);
  std::vector<HTangent> f;
  for (std::size_t i = 1; i <= n; ++i) f.emplace_back(o, MinkowskiVec::basis(n + 1, i));
  return f;
}

/// The unique isometry taking p to q and frame_p[i] to frame_q[i].
inline Isometry isometry_from_frames(const HPoint& p, std::span<const HTangent> frame_p,
                                     const HPoint& q, std::span<const HTangent> frame_q) {
  const std::size_t n = p.dim();
  if (q.dim() != n || frame_p.size() != n || frame_q.size() != n) {
    throw GeometryError("isometry_from_frames: frames must have n vectors of matching dimension");
  }
  const auto check = [n](const HPoint& base, std::span<const HTangent> f) {
    for (const auto& t : f) detail::require_same_base(t.base(), base, "isometry_from_frames");
    const double err = (gram(f) - Mat::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)))
                           .cwiseAbs()
                           .maxCoeff();
    if (err > kIsoTol) throw GeometryError("isometry_from_frames: frame is not orthonormal");
  };
  check(p, frame_p);
  check(q, frame_q);

  const auto a = static_cast<Eigen::Index>(n + 1);
  Mat s(a, a), t(a, a);
  s.col(0) = p.vec().coords();
  t.col(0) = q.vec().coords();
  for (std::size_t i = 0; i < n; ++i) {
    s.col(static_cast<Eigen::Index>(i + 1)) = frame_p[i].dir().coords();
    t.col(static_cast<Eigen::Index>(i + 1)) = frame_q[i].dir().coords();
  }
  // S^T J S = J for a Minkowski-orthonormal basis, hence S^{-1} = J S^T J.
  const Mat j = minkowski_metric(n + 1);
  return Isometry(t * j * s.transpose() * j);
}

}  // namespace hypwarp
