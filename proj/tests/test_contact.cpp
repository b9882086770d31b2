#include "adfric/contact.hpp"
#include "adfric/scenarios.hpp"
#include "adfric/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace adfric;

namespace {

// Two stacked 2-element bodies whose facing boundaries form a contact pair.
// With jitter > 0 every node of the reference mesh and the displacement
// vector is randomized, so J_cl != 1 and all curvature terms are exercised.
struct PatchFixture {
  Model model;

  PatchFixture(FrictionLaw law, double gap_scale, unsigned seed, double jitter,
               double eps_t = 1.0, bool use_stretch = true) {
    AdhesionParams adh = AdhesionParams::from_hamaker(0.05, 0.4);
    adh.g_far = default_g_far(law, adh);
    const double gap = gap_scale * adh.g_eq;

    Mesh lower = make_rectangle_mesh(0, -1, 2, 1, 2, 1, ElemType::Q1);
    Mesh upper = make_rectangle_mesh(0, gap, 2, 1, 2, 1, ElemType::Q1);
    Mesh& mesh = model.mesh;
    mesh = lower;
    const int off = lower.node_count();
    for (const Vec2& p : upper.nodes) mesh.nodes.push_back(p);
    for (Element el : upper.elements) {
      for (int a = 0; a < el.node_count(); ++a) el.nodes[a] += off;
      mesh.elements.push_back(el);
    }
    std::vector<int> upper_bottom = upper.boundary_strips["bottom"];
    for (int& id : upper_bottom) id += off;
    mesh.boundary_strips.clear();
    mesh.boundary_strips["lower_top"] = lower.boundary_strips["top"];
    mesh.boundary_strips["upper_bottom"] = upper_bottom;

    if (jitter > 0.0) {
      std::mt19937 rng(seed);
      std::uniform_real_distribution<double> d(-jitter, jitter);
      for (Vec2& p : mesh.nodes) p += Vec2(d(rng), d(rng));
    }

    model.material.E = 1.0;
    model.material.nu = 0.3;
    model.surfaces.push_back(std::make_unique<BsplineStrip>(
        mesh.boundary_strips["lower_top"], mesh.nodes));
    model.surfaces.push_back(std::make_unique<BsplineStrip>(
        mesh.boundary_strips["upper_bottom"], mesh.nodes));

    ContactPair pair;
    pair.a = model.surfaces[0].get();
    pair.b = model.surfaces[1].get();
    pair.params.adhesion = adh;
    pair.params.law = law;
    pair.params.eps_t = eps_t;
    pair.params.use_stretch = use_stretch;
    model.pairs.push_back(pair);
    model.finalize();

    if (jitter > 0.0) {
      std::mt19937 rng(seed + 1);
      std::uniform_real_distribution<double> d(-jitter, jitter);
      for (int i = 0; i < model.u.size(); ++i) model.u[i] = d(rng);
      model.refresh_surfaces();
    }
  }

  //! Commit the requested branch at every in-range point. The anchor offset
  //! is chosen per point: stick keeps the trial safely inside the threshold,
  //! slide pushes it safely past.
  void commit_status(ContactStatus st) {
    ContactPair& pair = model.pairs[0];
    for (int pass = 0; pass < pair.pass_count(); ++pass) {
      const auto evals = evaluate_pass(pair, pass);
      for (std::size_t i = 0; i < evals.size(); ++i) {
        ContactPointState& state = pair.states[pass][i];
        if (!evals[i].in_range) {
          state.status = ContactStatus::far;
          continue;
        }
        state.status = st;
        state.has_anchor = true;
        const double a_len = std::sqrt(evals[i].proj.basis.a11);
        const double ts = std::max(evals[i].t_slide, 1e-8);
        double dxi = 0.0;
        if (st == ContactStatus::stick)
          dxi = 0.4 * ts / (pair.params.eps_t * a_len);
        else if (st == ContactStatus::slide)
          dxi = 3.0 * ts / (pair.params.eps_t * a_len) + 0.02;
        // keep the anchor inside the neighbor domain so it stays valid
        const ContactSurface* l = pair.surf_l(pass);
        dxi = std::min(dxi, evals[i].proj.xi - l->xi_begin() - 1e-3);
        state.xi_s = evals[i].proj.xi - dxi;
      }
    }
  }

  Vec2 pass_force(int pass) {
    const auto evals = evaluate_pass(model.pairs[0], pass);
    ContactOutput out;
    std::vector<ContactStatus> status(evals.size());
    for (std::size_t i = 0; i < evals.size(); ++i)
      status[i] = model.pairs[0].states[pass][i].status;
    assemble_pass(model.pairs[0], pass, evals, status, out);
    return out.pair_force_sum;
  }
};

const AdhesionParams kAdh = AdhesionParams::from_hamaker(0.05, 0.4);

} // namespace

TEST_CASE("normal force landmarks on parallel flat surfaces") {
  SUBCASE("zero traction at the equilibrium gap") {
    PatchFixture fx(Frictionless{}, 1.0, 0, 0.0);
    fx.commit_status(ContactStatus::frictionless_slide);
    CHECK(fx.pass_force(0).norm() < 1e-13);
    CHECK(fx.pass_force(1).norm() < 1e-13);
  }
  SUBCASE("T_max times length at g_max, pulling the bodies together") {
    PatchFixture fx(Frictionless{}, kAdh.g_max / kAdh.g_eq, 0, 0.0);
    fx.commit_status(ContactStatus::frictionless_slide);
    const Vec2 f0 = fx.pass_force(0); // f_c rows of the lower body
    CHECK(f0.norm() == doctest::Approx(kAdh.T_max * 2.0).epsilon(1e-12));
    // applied force (-f_c) points along the neighbor normal: up, toward it
    CHECK(-f0.y() > 0.0);
    CHECK(std::abs(f0.x()) < 1e-13);
  }
}

TEST_CASE("two-half-pass force balance near equilibrium") {
  // mild compression; the half passes are independent but their totals must
  // agree up to the LJ asymmetry of the discretizations
  PatchFixture fx(Frictionless{}, 0.9, 0, 0.0);
  fx.commit_status(ContactStatus::frictionless_slide);
  const Vec2 f0 = fx.pass_force(0);
  const Vec2 f1 = fx.pass_force(1);
  CHECK((f0 + f1).norm() <= 1e-3 * f0.norm());
}

TEST_CASE("zero measure: fully separated pair assembles nothing") {
  PatchFixture fx(Frictionless{}, 50.0, 0, 0.0);
  fx.commit_status(ContactStatus::frictionless_slide); // ends up far anyway
  Eigen::VectorXd f_c = Eigen::VectorXd::Zero(fx.model.n_dofs());
  std::vector<Eigen::Triplet<double>> K;
  const auto evals = evaluate_pass(fx.model.pairs[0], 0);
  ContactOutput out;
  out.f_c = &f_c;
  out.K = &K;
  std::vector<ContactStatus> status(evals.size(), ContactStatus::far);
  assemble_pass(fx.model.pairs[0], 0, evals, status, out);
  CHECK(f_c.norm() == 0.0);
  CHECK(K.empty());
}

TEST_CASE("tangential force landmarks") {
  SUBCASE("all sticking with zero elastic gap") {
    PatchFixture fx(LawDI{0.5 * kAdh.T_max, kAdh.g_max, 80.0 / kAdh.r0}, 1.0, 0, 0.0);
    ContactPair& pair = fx.model.pairs[0];
    for (int pass = 0; pass < 2; ++pass) {
      const auto evals = evaluate_pass(pair, pass);
      for (std::size_t i = 0; i < evals.size(); ++i) {
        pair.states[pass][i].status = ContactStatus::stick;
        pair.states[pass][i].has_anchor = true;
        pair.states[pass][i].xi_s = evals[i].proj.xi;
      }
    }
    // at g_eq the normal traction vanishes, so any net force is tangential
    CHECK(fx.pass_force(0).norm() < 1e-13);
  }

  SUBCASE("fully sliding DI on flat geometry integrates tau times length") {
    const double tau = 0.5 * kAdh.T_max;
    PatchFixture fx(LawDI{tau, kAdh.g_max, 80.0 / kAdh.r0}, 1.0, 0, 0.0);
    fx.commit_status(ContactStatus::slide);
    const Vec2 f0 = fx.pass_force(0);
    // the DI threshold at g_eq is within 4e-5 of tau (logistic tail)
    CHECK(f0.norm() == doctest::Approx(tau * 2.0).epsilon(1e-3));
    CHECK(std::abs(f0.y()) < 1e-10); // traction is tangential here
  }

  SUBCASE("fully sliding EA with s_cut = 1 at g_eq integrates mu T_max length") {
    PatchFixture fx(LawEA{0.3, 1.0}, 1.0, 0, 0.0);
    fx.commit_status(ContactStatus::slide);
    const Vec2 f0 = fx.pass_force(0);
    CHECK(f0.norm() == doctest::Approx(0.3 * kAdh.T_max * 2.0).epsilon(1e-10));
  }

  SUBCASE("DI with the mapped friction parameter matches EA on a flat interface") {
    const double mu_EA = 0.3;
    const double mu_DI = equivalent_mu_DI(mu_EA, kAdh.g_max, kAdh);
    PatchFixture ea(LawEA{mu_EA, 1.0}, 1.0, 0, 0.0);
    PatchFixture di(LawDI{mu_DI * kAdh.T_max, kAdh.g_max, 80.0 / kAdh.r0}, 1.0, 0, 0.0);
    ea.commit_status(ContactStatus::slide);
    di.commit_status(ContactStatus::slide);
    const Vec2 f_ea = ea.pass_force(0);
    const Vec2 f_di = di.pass_force(0);
    CHECK((f_ea - f_di).norm() <= 1e-3 * f_ea.norm());
  }
}

TEST_CASE("contact tangents match central finite differences") {
  // randomized deformable-deformable patches; this exercises every block of
  // the consistent linearization including the neighbor and anchor coupling
  const LawDI di{0.5 * kAdh.T_max, kAdh.g_max, 80.0 / kAdh.r0};
  const LawEA ea{0.4, 1.0};

  SUBCASE("adhesion only") {
    PatchFixture fx(Frictionless{}, 1.05, 101, 0.01);
    fx.commit_status(ContactStatus::frictionless_slide);
    CHECK(verify_tangent(fx.model) <= 1e-5);
  }
  SUBCASE("DI stick") {
    PatchFixture fx(di, 1.0, 102, 0.01);
    fx.commit_status(ContactStatus::stick);
    CHECK(verify_tangent(fx.model) <= 1e-5);
  }
  SUBCASE("DI slide") {
    PatchFixture fx(di, 0.95, 103, 0.01);
    fx.commit_status(ContactStatus::slide);
    CHECK(verify_tangent(fx.model) <= 1e-5);
  }
  SUBCASE("EA stick") {
    PatchFixture fx(ea, 1.0, 104, 0.01);
    fx.commit_status(ContactStatus::stick);
    CHECK(verify_tangent(fx.model) <= 1e-5);
  }
  SUBCASE("EA slide") {
    PatchFixture fx(ea, 0.9, 105, 0.01);
    fx.commit_status(ContactStatus::slide);
    CHECK(verify_tangent(fx.model) <= 1e-5);
  }
  SUBCASE("DI slide without the surface-stretch terms") {
    PatchFixture fx(di, 0.95, 106, 0.01, 1.0, /*use_stretch=*/false);
    fx.commit_status(ContactStatus::slide);
    CHECK(verify_tangent(fx.model) <= 1e-5);
  }
  SUBCASE("EA with the negative s_cut workaround, stick") {
    PatchFixture fx(LawEA{0.4, -0.001}, 0.93, 107, 0.005);
    fx.commit_status(ContactStatus::stick);
    CHECK(verify_tangent(fx.model) <= 1e-5);
  }
}

TEST_CASE("translation invariance of the contact tangent") {
  // rigid translation of both bodies leaves forces unchanged: the tangent
  // contracted with a uniform translation vanishes
  PatchFixture fx(LawDI{0.5 * kAdh.T_max, kAdh.g_max, 80.0 / kAdh.r0}, 0.95, 108, 0.01);
  fx.commit_status(ContactStatus::slide);
  Model& m = fx.model;
  m.refresh_surfaces();
  std::vector<ActiveSets> sets{sets_from_committed(m.pairs[0])};
  Model::SystemOutput sys;
  m.assemble_system(m.evaluate_all(), sets, true, sys);

  const int n = m.n_dofs();
  Eigen::VectorXd tx = Eigen::VectorXd::Zero(n), ty = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m.mesh.node_count(); ++i) {
    tx[2 * i] = 1.0;
    ty[2 * i + 1] = 1.0;
  }
  Eigen::SparseMatrix<double> K(n, n);
  K.setFromTriplets(sys.K.begin(), sys.K.end());
  double scale = 0.0;
  for (int k = 0; k < K.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, k); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  CHECK((K * tx).norm() <= 1e-9 * scale);
  CHECK((K * ty).norm() <= 1e-9 * scale);
}

TEST_CASE("active set tracker") {
  PatchFixture fx(Frictionless{}, 1.0, 0, 0.0);
  ContactPair& pair = fx.model.pairs[0];
  auto evals = fx.model.evaluate_pair(0);

  ActiveSetTracker tracker({1e-2, 6});

  SUBCASE("first iteration is always frozen") {
    const ActiveSets s = tracker.decide(pair, evals, 0, 1e-12, 1.0);
    CHECK(s.frozen);
  }
  SUBCASE("large residual keeps the committed sets") {
    const ActiveSets s = tracker.decide(pair, evals, 3, 0.5, 1.0);
    CHECK(s.frozen);
  }
  SUBCASE("small residual adopts the fresh classification") {
    const ActiveSets s = tracker.decide(pair, evals, 3, 1e-5, 1.0);
    CHECK(!s.frozen);
    for (std::size_t i = 0; i < evals[0].size(); ++i)
      CHECK(s.status[0][i] == evals[0][i].fresh);
  }
  SUBCASE("membership oscillation requests a load-step cut") {
    auto flip = [&](ContactStatus st) {
      for (auto& ev : evals[0]) ev.fresh = st;
      for (auto& ev : evals[1]) ev.fresh = st;
    };
    tracker.decide(pair, evals, 0, 1.0, 1.0);
    flip(ContactStatus::stick);
    tracker.decide(pair, evals, 1, 1e-5, 1.0);
    flip(ContactStatus::slide);
    tracker.decide(pair, evals, 2, 1e-5, 1.0);
    flip(ContactStatus::stick);
    tracker.decide(pair, evals, 3, 1e-5, 1.0);
    flip(ContactStatus::slide);
    tracker.decide(pair, evals, 4, 1e-5, 1.0);
    flip(ContactStatus::stick);
    tracker.decide(pair, evals, 5, 1e-5, 1.0);
    CHECK(tracker.cut_requested());
  }
}

TEST_CASE("far classification beyond the interaction cutoff") {
  PatchFixture fx(Frictionless{}, 1.0, 0, 0.0);
  // push the upper body away beyond g_far
  Model& m = fx.model;
  for (int i = 6; i < 12; ++i) m.u[2 * i + 1] = 10.0;
  m.refresh_surfaces();
  const auto evals = evaluate_pass(m.pairs[0], 0);
  for (const auto& ev : evals) {
    CHECK(!ev.in_range);
    CHECK(ev.fresh == ContactStatus::far);
  }
}
