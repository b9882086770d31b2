#include "adfric/surface.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace adfric;

namespace {

// a strip over explicit control coordinates
BsplineStrip make_strip(const std::vector<Vec2>& pts) {
  std::vector<int> ids(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) ids[i] = static_cast<int>(i);
  return BsplineStrip(ids, pts);
}

} // namespace

TEST_CASE("flat strip: basis and projection") {
  // straight line from (0,0) to (2,0), 3 control points, single span
  BsplineStrip strip = make_strip({{0, 0}, {1, 0}, {2, 0}});
  const SurfaceBasis b = strip.basis_at(0.5);
  CHECK(b.x.x() == doctest::Approx(1.0));
  CHECK(b.x.y() == doctest::Approx(0.0));
  CHECK(b.a1.y() == doctest::Approx(0.0));
  CHECK(b.a1.x() == doctest::Approx(2.0)); // dx/dxi under unit-span parametrization
  CHECK(b.n.x() == doctest::Approx(0.0));
  CHECK(b.n.y() == doctest::Approx(-1.0)); // rot(-90) of +x tangent
  CHECK(b.J_cl == doctest::Approx(1.0));

  auto proj = strip.project(Vec2(1.2, -0.7));
  REQUIRE(proj.has_value());
  CHECK(proj->x_p.x() == doctest::Approx(1.2));
  CHECK(proj->x_p.y() == doctest::Approx(0.0));
  CHECK(proj->g_n == doctest::Approx(0.7)); // below the line, along -y normal
  CHECK(!proj->clamped);
}

TEST_CASE("projection onto a rigid plane is the foot of the perpendicular") {
  RigidLine plane(Vec2(0, 0), Vec2(-1, 0), -10, 10); // normal +y
  auto proj = plane.project(Vec2(3.2, 0.7));
  REQUIRE(proj.has_value());
  CHECK(proj->x_p.x() == doctest::Approx(3.2));
  CHECK(proj->x_p.y() == doctest::Approx(0.0));
  CHECK(proj->g_n == doctest::Approx(0.7));
  CHECK(proj->basis.n.y() == doctest::Approx(1.0));
}

TEST_CASE("projection onto a rigid circle is radial") {
  RigidCircle circle(Vec2(1, 2), 3.0);
  const Vec2 x_k = Vec2(1, 2) + 4.5 * Vec2(std::cos(0.7), std::sin(0.7));
  auto proj = circle.project(x_k);
  REQUIRE(proj.has_value());
  CHECK(proj->g_n == doctest::Approx(1.5));
  const Vec2 dir = (proj->x_p - Vec2(1, 2)).normalized();
  CHECK(dir.x() == doctest::Approx(std::cos(0.7)));
  CHECK(dir.y() == doctest::Approx(std::sin(0.7)));
  // outward normal is radial
  CHECK(proj->basis.n.dot(dir) == doctest::Approx(1.0));
}

TEST_CASE("partition of unity and duality on a random quadratic patch") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  std::vector<Vec2> pts;
  for (int i = 0; i < 7; ++i)
    pts.push_back(Vec2(i + jitter(rng), 0.3 * i * i / 7.0 + jitter(rng)));
  BsplineStrip strip = make_strip(pts);

  for (double xi : {0.01, 0.7, 1.3, 2.0, 3.9, 4.99}) {
    const SpanWeights w = strip.weights_at(xi);
    double sum = 0, dsum = 0;
    for (int r = 0; r < w.count; ++r) {
      sum += w.N[r];
      dsum += w.dN[r];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dsum == doctest::Approx(0.0).epsilon(1e-12));

    const SurfaceBasis b = strip.basis_at(xi);
    // contra-variant duality a^1 . a_1 = 1
    CHECK(b.a1_con.dot(b.a1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.n.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(b.n.dot(b.a1)) < 1e-12 * b.a1.norm());
  }
}

TEST_CASE("C1 continuity across spans") {
  std::vector<Vec2> pts;
  for (int i = 0; i < 6; ++i) pts.push_back(Vec2(i, std::sin(0.8 * i)));
  BsplineStrip strip = make_strip(pts);
  for (int k = 1; k < strip.span_count(); ++k) {
    const double h = 1e-10;
    const SurfaceBasis lo = strip.basis_at(k - h);
    const SurfaceBasis hi = strip.basis_at(k + h);
    CHECK((lo.x - hi.x).norm() < 1e-8);
    CHECK((lo.a1 - hi.a1).norm() < 1e-8);
  }
}

TEST_CASE("projection orthogonality on a curved strip") {
  std::vector<Vec2> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(Vec2(i, 0.2 * std::cos(1.1 * i)));
  BsplineStrip strip = make_strip(pts);

  std::mt19937 rng(31);
  std::uniform_real_distribution<double> dx(0.8, 6.2), dy(0.05, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Vec2 x_k(dx(rng), dy(rng));
    auto proj = strip.project(x_k);
    REQUIRE(proj.has_value());
    if (proj->clamped) continue;
    const double ortho = std::abs(proj->gap_vec.dot(proj->basis.a1));
    CHECK(ortho <= 1e-9 * proj->basis.a1.norm() * 8.0);
    // gap is purely normal
    CHECK((proj->gap_vec - proj->g_n * proj->basis.n).norm() < 1e-8);
  }
}

TEST_CASE("gap is invariant under rigid motion of both bodies") {
  std::vector<Vec2> pts;
  for (int i = 0; i < 6; ++i) pts.push_back(Vec2(0.9 * i, 0.1 * i * i));
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> ang(-1.0, 1.0);

  const Vec2 x_k(2.3, 0.9);
  BsplineStrip strip = make_strip(pts);
  const double g0 = strip.project(x_k)->g_n;

  for (int trial = 0; trial < 5; ++trial) {
    const double th = ang(rng);
    const Vec2 t(ang(rng), ang(rng));
    Mat2 R;
    R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    std::vector<Vec2> moved;
    for (const Vec2& p : pts) moved.push_back(R * p + t);
    BsplineStrip s2 = make_strip(moved);
    const double g1 = s2.project(R * x_k + t)->g_n;
    CHECK(std::abs(g1 - g0) <= 1e-10);
  }
}

TEST_CASE("points on the surface project with zero gap") {
  std::vector<Vec2> pts;
  for (int i = 0; i < 6; ++i) pts.push_back(Vec2(i, 0.3 * std::sin(i)));
  BsplineStrip strip = make_strip(pts);
  for (double xi : {0.4, 1.9, 3.3}) {
    const Vec2 on = strip.position(xi);
    auto proj = strip.project(on);
    REQUIRE(proj.has_value());
    CHECK(std::abs(proj->g_n) < 1e-10);
  }
}

TEST_CASE("kinked two-patch tie breaks to the lower patch id") {
  // two straight strips forming a symmetric V; the probe sits on the axis
  BsplineStrip left = make_strip({{-2, 2}, {-1, 1}, {0, 0}});
  BsplineStrip right = make_strip({{0, 0}, {1, 1}, {2, 2}});
  std::vector<const ContactSurface*> patches{&left, &right};
  const Vec2 probe(0.0, 1.5);
  auto hit = closest_point_projection(probe, patches, 10.0);
  REQUIRE(hit.has_value());
  CHECK(hit->second == 0);
}

TEST_CASE("curvature-corrected metric") {
  SUBCASE("flat patch returns the plain inverse metric") {
    BsplineStrip strip = make_strip({{0, 0}, {1, 0}, {2, 0}});
    const SurfaceBasis b = strip.basis_at(0.5);
    auto c = curvature_corrected_metric(b, 0.37);
    REQUIRE(c.has_value());
    CHECK(*c == doctest::Approx(b.inv_a11).epsilon(1e-14));
  }
  SUBCASE("zero gap returns the plain inverse metric") {
    std::vector<Vec2> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(Vec2(i, 0.2 * i * i));
    BsplineStrip strip = make_strip(pts);
    const SurfaceBasis b = strip.basis_at(1.7);
    auto c = curvature_corrected_metric(b, 0.0);
    REQUIRE(c.has_value());
    CHECK(*c == doctest::Approx(b.inv_a11).epsilon(1e-14));
  }
  SUBCASE("analytic circle value") {
    RigidCircle circle(Vec2(0, 0), 2.5);
    const SurfaceBasis b = circle.basis_at(1.0);
    const double g = 0.4;
    auto c = curvature_corrected_metric(b, g);
    REQUIRE(c.has_value());
    // outward normal, point outside: c = 1 / (a11 (1 + g/R))
    CHECK(*c == doctest::Approx(1.0 / (1.0 + g / 2.5)).epsilon(1e-13));
  }
  SUBCASE("focal-distance singularity is reported") {
    RigidCircle circle(Vec2(0, 0), 1.0, /*outward=*/false);
    const SurfaceBasis b = circle.basis_at(0.3);
    // inward normal: denominator vanishes at g = -R ... use the signed value
    const double g_singular = b.a11 / b.n.dot(b.a11_vec);
    CHECK(!curvature_corrected_metric(b, g_singular).has_value());
  }
}

TEST_CASE("surface stretch of a uniformly stretched line") {
  std::vector<Vec2> ref;
  for (int i = 0; i < 5; ++i) ref.push_back(Vec2(i, 0));
  std::vector<int> ids{0, 1, 2, 3, 4};
  BsplineStrip strip(ids, ref);

  std::vector<Vec2> cur;
  for (int i = 0; i < 5; ++i) cur.push_back(Vec2(1.001 * i, 0));
  strip.update(cur);
  for (double xi : {0.3, 1.5, 2.9}) {
    CHECK(strip.basis_at(xi).J_cl == doctest::Approx(1.001).epsilon(1e-12));
  }

  // random affine map restricted to the line: J_cl equals the tangential
  // stretch of that map
  Mat2 A;
  A << 1.13, 0.21, -0.08, 0.94;
  std::vector<Vec2> mapped;
  for (const Vec2& p : ref) mapped.push_back(A * p);
  strip.update(mapped);
  const double expected = (A * Vec2(1, 0)).norm();
  for (double xi : {0.2, 1.1, 2.8}) {
    CHECK(strip.basis_at(xi).J_cl == doctest::Approx(expected).epsilon(1e-12));
  }
}
