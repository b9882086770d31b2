#include "adfric/friction_update.hpp"

#include <doctest.h>

#include <random>

using namespace adfric;

namespace {

struct Fixture {
  RigidLine line{Vec2(0, 0), Vec2(1, 0), -50, 50};
  Projection proj;
  Fixture() { proj = *line.project(Vec2(0.0, -0.2)); } // normal (0,-1), body below
};

} // namespace

TEST_CASE("trial traction") {
  Fixture f;
  SUBCASE("zero elastic gap gives zero trial") {
    ContactPointState st;
    st.has_anchor = true;
    st.xi_s = f.proj.xi;
    CHECK(trial_traction(st, f.line, f.proj, 100.0).norm() == 0.0);
  }
  SUBCASE("flat surface: linear spring from the anchor offset") {
    ContactPointState st;
    st.has_anchor = true;
    st.xi_s = f.proj.xi - 0.01;
    const Vec2 t = trial_traction(st, f.line, f.proj, 100.0);
    CHECK(t.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.x() == doctest::Approx(1.0)); // foot ahead of anchor along +x
  }
  SUBCASE("missing anchor snaps to the foot point") {
    ContactPointState st;
    const Vec2 t = trial_traction(st, f.line, f.proj, 100.0);
    CHECK(t.norm() == 0.0);
    CHECK(st.has_anchor);
    CHECK(st.xi_s == doctest::Approx(f.proj.xi));
  }
  SUBCASE("out-of-domain anchor re-anchors") {
    ContactPointState st;
    st.has_anchor = true;
    st.xi_s = 1e4;
    const Vec2 t = trial_traction(st, f.line, f.proj, 100.0);
    CHECK(t.norm() == 0.0);
    CHECK(st.xi_s == doctest::Approx(f.proj.xi));
  }
  SUBCASE("curved patch: trial follows the chord between surface points") {
    std::vector<Vec2> pts{{0, 0}, {1, 0.4}, {2, 0.1}, {3, 0.5}};
    std::vector<int> ids{0, 1, 2, 3};
    BsplineStrip strip(ids, pts);
    const Projection proj = *strip.project(Vec2(1.2, 1.0));
    ContactPointState st;
    st.has_anchor = true;
    st.xi_s = proj.xi - 0.37;
    const Vec2 chord = proj.x_p - strip.position(st.xi_s);
    const Vec2 t = trial_traction(st, strip, proj, 42.0);
    CHECK((t - 42.0 * chord).norm() < 1e-12);
  }
}

TEST_CASE("sliding criterion") {
  CHECK(sliding_criterion(Vec2(0, 0), 1.0) == doctest::Approx(-1.0));
  CHECK(sliding_criterion(Vec2(1, 0), 1.0) == doctest::Approx(0.0));
  CHECK(sliding_criterion(Vec2(0.9, 1.2), 1.0) == doctest::Approx(0.5));
}

TEST_CASE("return map") {
  Fixture f;
  ContactPointState st;
  st.has_anchor = true;
  st.xi_s = f.proj.xi;

  SUBCASE("stick branch keeps the trial") {
    const Vec2 trial(0.5, 0.0);
    const TangentialUpdate upd = return_map(st, f.proj, trial, 1.0, 100.0);
    CHECK(!upd.sliding);
    CHECK(upd.t_t == trial);
    CHECK(upd.dgamma == 0.0);
    CHECK(upd.xi_s_new == st.xi_s);
  }

  SUBCASE("slide branch: forced magnitudes") {
    const Vec2 trial(1.5, 0.0);
    const TangentialUpdate upd = return_map(st, f.proj, trial, 1.0, 100.0);
    CHECK(upd.sliding);
    CHECK(upd.dgamma == doctest::Approx(0.005));
    CHECK(upd.t_t.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(upd.t_t.normalized().dot(trial.normalized()) == doctest::Approx(1.0));
    // anchor advances along the slip direction
    CHECK(upd.xi_s_new == doctest::Approx(st.xi_s + 0.005));
  }

  SUBCASE("radial-return property on random trials") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> comp(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
      const Vec2 trial(comp(rng), comp(rng));
      const double ts = std::abs(comp(rng)) * 0.3 + 1e-3;
      const TangentialUpdate upd = return_map(st, f.proj, trial, ts, 100.0);
      if (upd.f_s < 0.0) {
        CHECK(upd.t_t == trial);
      } else {
        CHECK(upd.t_t.norm() == doctest::Approx(ts).epsilon(1e-10));
        // corrected traction is the closest point on the sphere
        CHECK((upd.t_t - trial).norm() == doctest::Approx(upd.f_s).epsilon(1e-10));
        // dissipation non-negativity: t . (dgamma n_t) >= 0
        CHECK(upd.t_t.dot(upd.dgamma * upd.n_t) >= 0.0);
      }
    }
  }

  SUBCASE("idempotence: re-applying in the same geometric state sticks") {
    ContactPointState st1 = st;
    st1.xi_s = f.proj.xi - 0.03; // geometric anchor offset past the threshold
    const Vec2 trial = trial_traction(st1, f.line, f.proj, 100.0);
    const TangentialUpdate first = return_map(st1, f.proj, trial, 1.0, 100.0);
    REQUIRE(first.sliding);
    ContactPointState st2 = st1;
    st2.xi_s = first.xi_s_new;
    const Vec2 trial2 = trial_traction(st2, f.line, f.proj, 100.0);
    const TangentialUpdate second = return_map(st2, f.proj, trial2, 1.0, 100.0);
    CHECK(second.f_s <= 1e-12);
    CHECK((second.t_t - first.t_t).norm() < 1e-10);
    CHECK(second.xi_s_new == doctest::Approx(first.xi_s_new).epsilon(1e-12));
  }

  SUBCASE("zero trial with zero threshold delegates to the frictionless reset") {
    const TangentialUpdate upd = return_map(st, f.proj, Vec2(0, 0), 0.0, 100.0);
    CHECK(upd.t_t.norm() == 0.0);
    CHECK(upd.xi_s_new == doctest::Approx(f.proj.xi));
  }
}

TEST_CASE("frictionless reset") {
  Fixture f;
  const TangentialUpdate upd = frictionless_reset(f.proj);
  CHECK(upd.t_t.norm() == 0.0);
  CHECK(upd.xi_s_new == doctest::Approx(f.proj.xi));
}

TEST_CASE("history path-dependence: A-B-A loading leaves the anchor moved") {
  RigidLine line(Vec2(0, 0), Vec2(1, 0), -50, 50);
  ContactPointState st;
  st.has_anchor = true;
  st.xi_s = 0.0;
  const double eps = 100.0, ts = 1.0;

  // drag the foot point right past the threshold, then back to the start
  auto proj_at = [&](double x) { return *line.project(Vec2(x, -0.2)); };
  const Projection pA = proj_at(0.0);
  const Projection pB = proj_at(0.05);

  ContactPointState cur = st;
  const TangentialUpdate u1 =
      return_map(cur, pB, trial_traction(cur, line, pB, eps), ts, eps);
  CHECK(u1.sliding);
  cur.xi_s = u1.xi_s_new;
  const TangentialUpdate u2 =
      return_map(cur, pA, trial_traction(cur, line, pA, eps), ts, eps);
  cur.xi_s = u2.xi_s_new;
  CHECK(cur.xi_s != doctest::Approx(st.xi_s).epsilon(1e-6));
}
