#pragma once

#include <array>
#include <span>

namespace dartscore {

// Numerical tolerances shared by the geometry routines.
namespace tol {
inline constexpr double kHomogeneousEps = 1e-12;  // |lambda| floor in apply()
inline constexpr double kSingularDet = 1e-12;     // |det| relative to its expansion terms
inline constexpr double kPivotEps = 1e-12;        // DLT elimination pivot floor
inline constexpr double kCollinearEps = 1e-9;     // normalized cross product
}  // namespace tol

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point a, Point b) = default;
};

double distance(Point a, Point b);
double cross(Point a, Point b);

// 3x3 projective map, row-major. Defined up to a nonzero scale.
class Homography {
 public:
  using Matrix = std::array<double, 9>;

  Homography() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}
  explicit Homography(const Matrix& m) : m_(m) {}

  static Homography identity() { return {}; }
  static Homography diagonal(double a, double b, double c = 1.0) {
    return Homography({a, 0, 0, 0, b, 0, 0, 0, c});
  }
  static Homography translation(double tx, double ty) {
    return Homography({1, 0, tx, 0, 1, ty, 0, 0, 1});
  }

  double operator()(int r, int c) const { return m_[3 * r + c]; }
  double& operator()(int r, int c) { return m_[3 * r + c]; }
  const Matrix& matrix() const { return m_; }

  double determinant() const;

  // Scaled copy with unit Frobenius norm and m[2][2] >= 0 (first nonzero
  // entry positive when m[2][2] == 0). Canonical representative of the class.
  Homography normalized() const;

  // Throws PointAtInfinity when |lambda| <= tol::kHomogeneousEps.
  Point apply(Point p) const;
  Point operator()(Point p) const { return apply(p); }

  // (a * b)(p) == a(b(p))
  friend Homography operator*(const Homography& a, const Homography& b);

 private:
  Matrix m_;
};

// Direct linear transform on exactly four correspondences, with isotropic
// normalization of both point sets and m[2][2] pinned to 1.
// Throws DegenerateConfiguration for collinear triples or a singular system.
Homography estimate_homography(std::span<const Point, 4> src,
                               std::span<const Point, 4> dst);

// True when the determinant is lost to cancellation: |det| is at most
// tol::kSingularDet times the summed magnitudes of its six expansion terms.
bool is_singular(const Homography& h);

// Throws DegenerateConfiguration when is_singular(h).
Homography invert(const Homography& h);

inline Homography compose(const Homography& outer, const Homography& inner) {
  return outer * inner;
}

struct SimilarityParams {
  double rotation_deg = 0.0;  // clockwise positive in y-down coordinates
  bool flip_x = false;        // mirror x about center
  bool flip_y = false;        // mirror y about center
  Point translate{};
  double scale = 1.0;
  Point center{};
};

// About `center`: flips, then rotation, then uniform scale, then translation.
// Throws std::invalid_argument for scale == 0.
Homography similarity(const SimilarityParams& p);

// Max element-wise deviation between the scale-normalized forms of a and b,
// after resolving the sign ambiguity.
double projective_distance(const Homography& a, const Homography& b);

}  // namespace dartscore
