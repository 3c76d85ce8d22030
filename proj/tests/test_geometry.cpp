#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"

#include "dartscore/errors.hpp"
#include "dartscore/geometry.hpp"

using namespace dartscore;

TEST_SUITE("geometry") {

TEST_CASE("apply on trivial maps") {
  const Point p = Homography::identity().apply({3.5, -2});
  CHECK(p.x == 3.5);
  CHECK(p.y == -2);
  const Point q = Homography::diagonal(2, 2).apply({1, 1});
  CHECK(q.x == 2);
  CHECK(q.y == 2);
}

TEST_CASE("apply throws on the line at infinity") {
  const Homography h({1, 0, 0, 0, 1, 0, 1, 0, 0});
  CHECK_THROWS_AS(h.apply({0, 5}), PointAtInfinity);
  CHECK_NOTHROW(h.apply({1, 5}));
}

TEST_CASE("scale invariance of apply") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const Homography h = testutil::random_extra_homography(rng);
    const double lambda = uniform(rng, -5, 5);
    if (std::abs(lambda) < 1e-3) continue;
    auto m = h.matrix();
    for (double& v : m) v *= lambda;
    const Point p{uniform(rng, 0, 800), uniform(rng, 0, 800)};
    const Point a = h.apply(p);
    const Point b = Homography(m).apply(p);
    CHECK(distance(a, b) < 1e-9);
  }
}

TEST_CASE("estimate_homography trivial cases") {
  const std::array<Point, 4> sq{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  const std::array<Point, 4> sq2{{{0, 0}, {2, 0}, {2, 2}, {0, 2}}};
  CHECK(projective_distance(estimate_homography(sq, sq), Homography::identity()) < 1e-12);
  CHECK(projective_distance(estimate_homography(sq, sq2), Homography::diagonal(2, 2)) < 1e-12);
}

TEST_CASE("estimate_homography rejects collinear triples") {
  const std::array<Point, 4> bad{{{0, 0}, {1, 1}, {2, 2}, {0, 1}}};
  const std::array<Point, 4> sq{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  CHECK_THROWS_AS(estimate_homography(bad, sq), DegenerateConfiguration);
  CHECK_THROWS_AS(estimate_homography(sq, bad), DegenerateConfiguration);
  const std::array<Point, 4> dup{{{0, 0}, {0, 0}, {1, 1}, {0, 1}}};
  CHECK_THROWS_AS(estimate_homography(dup, sq), DegenerateConfiguration);
}

TEST_CASE("estimate_homography matches an SVD null-space solve") {
  Rng rng(5);
  for (int t = 0; t < 300; ++t) {
    const auto src = testutil::random_quad(rng, 1000, 2000);
    const auto dst = testutil::random_quad(rng, 1000, 2000);
    const Homography h = estimate_homography(src, dst);
    const Eigen::Matrix3d ref = oracle::svd_homography(src, dst);
    CHECK(oracle::projective_gap(oracle::to_eigen(h), ref) < 1e-7);
  }
}

TEST_CASE("round trip through a known homography") {
  Rng rng(6);
  for (int t = 0; t < 300; ++t) {
    const Homography h0 = testutil::random_extra_homography(rng);
    const auto src = testutil::random_quad(rng, 800, 2000);
    const auto dst = testutil::transform(h0, src);
    const Homography h = estimate_homography(src, dst);
    CHECK(projective_distance(h, h0) < 1e-9);
    for (int i = 0; i < 4; ++i) CHECK(distance(h.apply(src[i]), dst[i]) < 1e-9);
  }
}

TEST_CASE("exact on its own correspondences at magnitude 1e4") {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const auto src = testutil::random_quad(rng, 1e4, 2e5);
    const auto dst = testutil::random_quad(rng, 1e4, 2e5);
    const Homography h = estimate_homography(src, dst);
    for (int i = 0; i < 4; ++i) {
      const Point p = h.apply(src[i]);
      CHECK(distance(p, dst[i]) < 1e-9 * std::max(1.0, std::hypot(dst[i].x, dst[i].y)));
    }
  }
}

TEST_CASE("invert") {
  CHECK(projective_distance(invert(Homography::identity()), Homography::identity()) < 1e-15);
  CHECK(projective_distance(invert(Homography::diagonal(2, 2)), Homography::diagonal(0.5, 0.5)) <
        1e-15);
  CHECK_THROWS_AS(invert(Homography({1, 2, 3, 2, 4, 6, 0, 0, 1})), DegenerateConfiguration);

  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const Homography h = testutil::random_extra_homography(rng);
    const Homography hi = invert(h);
    const auto n = (h * hi).normalized().matrix();
    const auto id = Homography::identity().normalized().matrix();
    for (int i = 0; i < 9; ++i) CHECK(std::abs(n[i] - id[i]) < 1e-9);
    const Point p{uniform(rng, 0, 800), uniform(rng, 0, 800)};
    CHECK(distance(hi.apply(h.apply(p)), p) < 1e-9);
  }
}

TEST_CASE("compose is associative") {
  Rng rng(10);
  for (int t = 0; t < 100; ++t) {
    const Homography a = testutil::random_extra_homography(rng);
    const Homography b = testutil::random_extra_homography(rng);
    const Homography c = testutil::random_extra_homography(rng);
    CHECK(projective_distance(compose(compose(a, b), c), compose(a, compose(b, c))) < 1e-9);
    const Point p{uniform(rng, 0, 800), uniform(rng, 0, 800)};
    CHECK(distance(compose(a, b).apply(p), a.apply(b.apply(p))) < 1e-6);
  }
}

TEST_CASE("similarity") {
  CHECK(projective_distance(similarity({}), Homography::identity()) < 1e-15);
  const Homography half_turn = similarity({.rotation_deg = 180});
  const Homography both_flips = similarity({.flip_x = true, .flip_y = true});
  CHECK(projective_distance(half_turn, both_flips) < 1e-12);

  const Homography quarter = similarity({.rotation_deg = 90, .center = {3, 4}});
  CHECK(projective_distance(quarter * quarter * quarter * quarter, Homography::identity()) < 1e-12);

  // Positive angles turn clockwise on screen: up goes to right.
  const Point r = similarity({.rotation_deg = 90}).apply({0, -1});
  CHECK(r.x == doctest::Approx(1.0));
  CHECK(std::abs(r.y) < 1e-15);

  const Homography s = similarity({.translate = {5, 6}, .scale = 2, .center = {1, 1}});
  const Point c = s.apply({1, 1});
  CHECK(c.x == doctest::Approx(6));
  CHECK(c.y == doctest::Approx(7));
  CHECK_THROWS_AS(similarity({.scale = 0}), std::invalid_argument);
}

TEST_CASE("normalized is canonical up to sign and scale") {
  const Homography h({2, 0, 1, 0, 2, 3, 0, 0, 2});
  auto m = h.matrix();
  for (double& v : m) v *= -7;
  const auto a = h.normalized().matrix();
  const auto b = Homography(m).normalized().matrix();
  for (int i = 0; i < 9; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-15);
  CHECK(h.normalized()(2, 2) > 0);
}

TEST_CASE("singularity test is scale aware") {
  // A shrinking map with a large translation is far from singular even though
  // its unit-norm determinant is tiny.
  const Homography small({0.02, 0, 900, 0, 0.02, 900, 0, 0, 1});
  CHECK(std::abs(small.normalized().determinant()) < 1e-12);
  CHECK_FALSE(is_singular(small));
  CHECK_NOTHROW(invert(small));

  const Homography rank2({1, 2, 3, 2, 4, 6, 0, 1, 1});
  CHECK(is_singular(rank2));
  CHECK_THROWS_AS(invert(rank2), DegenerateConfiguration);
  CHECK(is_singular(Homography({0, 0, 0, 0, 0, 0, 0, 0, 1})));
}

}
