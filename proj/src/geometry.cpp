#include "dartscore/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "dartscore/errors.hpp"

namespace dartscore {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

double Homography::determinant() const {
  const auto& m = m_;
  return m[0] * (m[4] * m[8] - m[5] * m[7]) -
         m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Homography Homography::normalized() const {
  double norm = 0.0;
  for (double v : m_) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0) throw DegenerateConfiguration("zero homography matrix");
  double sign = 1.0;
  if (m_[8] != 0.0) {
    sign = m_[8] > 0 ? 1.0 : -1.0;
  } else {
    for (double v : m_) {
      if (v != 0.0) {
        sign = v > 0 ? 1.0 : -1.0;
        break;
      }
    }
  }
  Matrix out;
  for (int i = 0; i < 9; ++i) out[i] = sign * m_[i] / norm;
  return Homography(out);
}

Point Homography::apply(Point p) const {
  const auto& m = m_;
  const double lambda = m[6] * p.x + m[7] * p.y + m[8];
  if (!(std::abs(lambda) > tol::kHomogeneousEps)) {
    throw PointAtInfinity("point maps to the line at infinity");
  }
  return {(m[0] * p.x + m[1] * p.y + m[2]) / lambda,
          (m[3] * p.x + m[4] * p.y + m[5]) / lambda};
}

Homography operator*(const Homography& a, const Homography& b) {
  Homography::Matrix out{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a(r, k) * b(k, c);
      out[3 * r + c] = s;
    }
  }
  return Homography(out);
}

namespace {

// Translate centroid to the origin and scale to RMS distance sqrt(2).
Homography normalizing_transform(std::span<const Point, 4> pts) {
  Point c{};
  for (const Point& p : pts) c = c + p;
  c = 0.25 * c;
  double ms = 0.0;
  for (const Point& p : pts) {
    const Point d = p - c;
    ms += d.x * d.x + d.y * d.y;
  }
  const double rms = std::sqrt(ms / 4.0);
  if (!(rms > 0.0)) throw DegenerateConfiguration("coincident points");
  const double s = std::numbers::sqrt2 / rms;
  return Homography({s, 0, -s * c.x, 0, s, -s * c.y, 0, 0, 1});
}

void require_general_position(std::span<const Point, 4> pts, const char* which) {
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      for (int k = j + 1; k < 4; ++k) {
        const Point u = pts[j] - pts[i];
        const Point v = pts[k] - pts[i];
        const double lu = std::hypot(u.x, u.y);
        const double lv = std::hypot(v.x, v.y);
        if (lu == 0.0 || lv == 0.0 ||
            std::abs(cross(u, v)) <= tol::kCollinearEps * lu * lv) {
          throw DegenerateConfiguration(std::string(which) +
                                        " points contain a collinear triple");
        }
      }
    }
  }
}

// Gaussian elimination with partial pivoting on an 8x8 system.
std::array<double, 8> solve8(std::array<std::array<double, 9>, 8> a) {
  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 8; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < tol::kPivotEps) {
      throw DegenerateConfiguration("singular DLT system");
    }
    std::swap(a[col], a[pivot]);
    for (int r = col + 1; r < 8; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < 9; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::array<double, 8> x{};
  for (int r = 7; r >= 0; --r) {
    double s = a[r][8];
    for (int c = r + 1; c < 8; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

}  // namespace

Homography estimate_homography(std::span<const Point, 4> src,
                               std::span<const Point, 4> dst) {
  require_general_position(src, "source");
  require_general_position(dst, "destination");

  const Homography ts = normalizing_transform(src);
  const Homography td = normalizing_transform(dst);

  std::array<std::array<double, 9>, 8> a{};
  for (int i = 0; i < 4; ++i) {
    const Point p = ts.apply(src[i]);
    const Point q = td.apply(dst[i]);
    a[2 * i] = {p.x, p.y, 1, 0, 0, 0, -q.x * p.x, -q.x * p.y, q.x};
    a[2 * i + 1] = {0, 0, 0, p.x, p.y, 1, -q.y * p.x, -q.y * p.y, q.y};
  }
  const auto h = solve8(a);
  const Homography hn({h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], 1.0});
  return invert(td) * hn * ts;
}

bool is_singular(const Homography& h) {
  const auto& m = h.matrix();
  const double terms = std::abs(m[0] * m[4] * m[8]) + std::abs(m[0] * m[5] * m[7]) +
                       std::abs(m[1] * m[3] * m[8]) + std::abs(m[1] * m[5] * m[6]) +
                       std::abs(m[2] * m[3] * m[7]) + std::abs(m[2] * m[4] * m[6]);
  return !(std::abs(h.determinant()) > tol::kSingularDet * terms);
}

Homography invert(const Homography& h) {
  const Homography n = h.normalized();
  const double det = n.determinant();
  if (is_singular(n)) {
    throw DegenerateConfiguration("singular homography");
  }
  const auto& m = n.matrix();
  Homography::Matrix adj{
      m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8], m[1] * m[5] - m[2] * m[4],
      m[5] * m[6] - m[3] * m[8], m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
      m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7], m[0] * m[4] - m[1] * m[3]};
  for (double& v : adj) v /= det;
  return Homography(adj);
}

Homography similarity(const SimilarityParams& p) {
  if (p.scale == 0.0) throw std::invalid_argument("similarity scale must be nonzero");
  const double rad = p.rotation_deg * std::numbers::pi / 180.0;
  const double c = std::cos(rad);
  const double s = std::sin(rad);
  const double fx = p.flip_x ? -1.0 : 1.0;
  const double fy = p.flip_y ? -1.0 : 1.0;
  // scale * R * F
  const Homography linear({p.scale * c * fx, -p.scale * s * fy, 0,
                           p.scale * s * fx, p.scale * c * fy, 0,
                           0, 0, 1});
  return Homography::translation(p.center.x + p.translate.x,
                                 p.center.y + p.translate.y) *
         linear * Homography::translation(-p.center.x, -p.center.y);
}

double projective_distance(const Homography& a, const Homography& b) {
  const Homography::Matrix ma = a.normalized().matrix();
  const Homography::Matrix mb = b.normalized().matrix();
  double same = 0.0;
  double flipped = 0.0;
  for (int i = 0; i < 9; ++i) {
    same = std::max(same, std::abs(ma[i] - mb[i]));
    flipped = std::max(flipped, std::abs(ma[i] + mb[i]));
  }
  return std::min(same, flipped);
}

}  // namespace dartscore
