#include "adfric/scenarios.hpp"

#include <cmath>
#include <stdexcept>

namespace adfric {

AdhesionParams ScenarioConfig::make_adhesion() const {
  AdhesionParams p = (A_H > 0.0 && r0 > 0.0)
                         ? AdhesionParams::from_hamaker(A_H, r0)
                         : AdhesionParams::from_macroscopic(T_max, W_adh);
  p.adhesive = law != LawChoice::nonadhesive_di;
  const FrictionLaw l = make_law(p);
  p.g_far = g_far_scale > 0.0 ? g_far_scale * p.g_max : default_g_far(l, p);
  return p;
}

FrictionLaw ScenarioConfig::make_law(const AdhesionParams& p) const {
  switch (law) {
    case LawChoice::frictionless:
      return Frictionless{};
    case LawChoice::di:
    case LawChoice::nonadhesive_di:
      return LawDI{mu * p.T_max, p.g_max, k_DI / p.r0};
    case LawChoice::ea:
      return LawEA{mu, s_cut};
  }
  throw std::logic_error("make_law");
}

Material ScenarioConfig::make_material() const {
  Material m;
  m.E = E;
  m.nu = nu;
  m.variant = variant;
  return m;
}

SolverConfig ScenarioConfig::make_solver_config() const {
  SolverConfig sc;
  // the traction well is a fraction of g_eq wide; bound the Newton steps
  // accordingly so the iterates walk into it instead of jumping across
  sc.du_max = 0.5 * make_adhesion().g_eq;
  return sc;
}

namespace {

ContactParams contact_params(const ScenarioConfig& cfg) {
  ContactParams prm;
  prm.adhesion = cfg.make_adhesion();
  prm.law = cfg.make_law(prm.adhesion);
  prm.eps_t = cfg.eps_t;
  prm.use_stretch = cfg.use_stretch;
  return prm;
}

} // namespace

StripSetup build_strip(const ScenarioConfig& cfg) {
  StripSetup s;
  const ContactParams prm = contact_params(cfg);
  const double g_eq = prm.adhesion.g_eq;
  const int nx = std::max(4, static_cast<int>(std::lround(80 * cfg.resolution_scale)));
  const int ny = std::max(1, static_cast<int>(std::lround(4 * cfg.resolution_scale)));

  // strip rests at the equilibrium gap: zero initial normal traction
  s.model.mesh = make_rectangle_mesh(0.0, g_eq, cfg.strip_length, cfg.strip_height,
                                     nx, ny, ElemType::Q2);
  s.model.material = cfg.make_material();
  s.length = cfg.strip_length;

  auto strip = std::make_unique<BsplineStrip>(s.model.mesh.boundary_strips["bottom"],
                                              s.model.mesh.nodes);
  auto substrate = std::make_unique<RigidLine>(Vec2(0.0, 0.0), Vec2(-1.0, 0.0),
                                               -2.0 * cfg.strip_length,
                                               2.0 * cfg.strip_length);
  s.model.surfaces.push_back(std::move(strip));
  s.model.surfaces.push_back(std::move(substrate));

  ContactPair pair;
  pair.a = s.model.surfaces[0].get();
  pair.b = s.model.surfaces[1].get();
  pair.params = prm;
  s.model.pairs.push_back(pair);

  // pulled node: midpoint of the right boundary; both components prescribed
  const auto& right = s.model.mesh.boundary_strips["right"];
  s.pull_node = right[right.size() / 2];
  const double u_max = cfg.u_max;
  s.model.dirichlet.push_back({2 * s.pull_node, [](double) { return 0.0; }});
  s.model.dirichlet.push_back({2 * s.pull_node + 1, [u_max](double t) { return u_max * t; }});

  s.model.finalize();
  return s;
}

CylindersSetup build_cylinders(const ScenarioConfig& cfg, double initial_offset) {
  CylindersSetup s;
  const ContactParams prm = contact_params(cfg);
  const double R = cfg.cyl_radius;
  s.R = R;
  const int nx = std::max(8, static_cast<int>(std::lround(40 * cfg.resolution_scale)));
  const int ny = std::max(2, static_cast<int>(std::lround(10 * cfg.resolution_scale)));

  Mesh lower = make_circular_segment_mesh(R, R, 0.0, nx, ny, ElemType::Q1);
  Mesh upper = lower;
  // point reflection puts the second body dome-down above the first with the
  // prescribed vertical interference
  const Vec2 center(0.5 * initial_offset, 0.5 * (2.0 * R - cfg.cyl_overlap * R));
  point_reflect_mesh(upper, center);

  s.lower_nodes = lower.node_count();
  s.corner_elem = 0; // element at the lower-left base corner of the lower body

  Mesh& mesh = s.model.mesh;
  mesh = lower;
  const int off = lower.node_count();
  for (const Vec2& p : upper.nodes) mesh.nodes.push_back(p);
  for (Element el : upper.elements) {
    for (int a = 0; a < el.node_count(); ++a) el.nodes[a] += off;
    mesh.elements.push_back(el);
  }
  mesh.boundary_strips["arc1"] = lower.boundary_strips["arc"];
  mesh.boundary_strips["base1"] = lower.boundary_strips["base"];
  std::vector<int> arc2 = upper.boundary_strips["arc"];
  std::vector<int> base2 = upper.boundary_strips["base"];
  for (int& id : arc2) id += off;
  for (int& id : base2) id += off;
  mesh.boundary_strips["arc2"] = arc2;
  mesh.boundary_strips["base2"] = base2;
  mesh.boundary_strips.erase("arc");
  mesh.boundary_strips.erase("base");
  mesh.boundary_strips.erase("left");
  mesh.boundary_strips.erase("right");

  s.base_profile_nodes = mesh.boundary_strips["base1"];
  s.model.material = cfg.make_material();

  s.model.surfaces.push_back(std::make_unique<BsplineStrip>(mesh.boundary_strips["arc1"],
                                                            mesh.nodes));
  s.model.surfaces.push_back(std::make_unique<BsplineStrip>(mesh.boundary_strips["arc2"],
                                                            mesh.nodes));
  ContactPair pair;
  pair.a = s.model.surfaces[0].get();
  pair.b = s.model.surfaces[1].get();
  pair.params = prm;
  s.model.pairs.push_back(pair);

  for (int id : mesh.boundary_strips["base1"]) {
    s.model.dirichlet.push_back({2 * id, [](double) { return 0.0; }});
    s.model.dirichlet.push_back({2 * id + 1, [](double) { return 0.0; }});
  }
  const double travel = 2.0 * R;
  for (int id : mesh.boundary_strips["base2"]) {
    s.model.dirichlet.push_back({2 * id, [travel](double t) { return travel * t; }});
    s.model.dirichlet.push_back({2 * id + 1, [](double) { return 0.0; }});
    s.upper_base_dofs.push_back(2 * id);
  }

  s.model.finalize();
  return s;
}

CapSetup build_cap(const ScenarioConfig& cfg, double F_n, double preload_frac) {
  CapSetup s;
  const ContactParams prm = contact_params(cfg);
  const double c = 0.5 * cfg.cap_chord;
  const double h = cfg.cap_height;
  s.apex = h;

  const double target = 5000.0 * cfg.resolution_scale * cfg.resolution_scale;
  const int nx = std::max(12, static_cast<int>(std::lround(std::sqrt(target * 2.9))));
  const int ny = std::max(4, static_cast<int>(std::lround(target / nx)));

  s.model.mesh = make_circular_segment_mesh(c, h, 0.0, nx, ny, ElemType::Q1);
  s.model.material = cfg.make_material();

  s.model.surfaces.push_back(std::make_unique<BsplineStrip>(
      s.model.mesh.boundary_strips["arc"], s.model.mesh.nodes));
  // the plate starts mildly pressed into the apex: the regularized repulsive
  // branch is linear there, which gives the force ramp a stable starting
  // point (approaching from far would have to jump into contact)
  const double span = c + cfg.cap_shear_umax + 5.0;
  s.model.surfaces.push_back(std::make_unique<RigidLine>(
      Vec2(0.0, h + 0.8 * prm.adhesion.g_eq), Vec2(1.0, 0.0), -span, span));

  ContactPair pair;
  pair.a = s.model.surfaces[0].get();
  pair.b = s.model.surfaces[1].get();
  pair.params = prm;
  s.model.pairs.push_back(pair);

  for (int id : s.model.mesh.boundary_strips["base"]) {
    s.model.dirichlet.push_back({2 * id, [](double) { return 0.0; }});
    s.model.dirichlet.push_back({2 * id + 1, [](double) { return 0.0; }});
  }

  // phase A (t < preload_frac): ramp the normal force from the as-built
  // value to the prescribed one at zero shear; phase B: constant normal
  // force, horizontal displacement ramp
  RigidDrive drive;
  drive.surface = 1;
  const double u_shear = cfg.cap_shear_umax;
  drive.ux = [preload_frac, u_shear](double t) {
    return t <= preload_frac ? 0.0
                             : u_shear * (t - preload_frac) / (1.0 - preload_frac);
  };
  drive.force_controlled_y = true;
  s.model.rigid_drives.push_back(drive);
  s.plate_drive = 0;

  s.model.finalize();

  const double F_init = -s.model.applied_contact_force(0, 0).y();
  s.model.rigid_drives[0].fn_target = [preload_frac, F_n, F_init](double t) {
    return t <= preload_frac
               ? F_init + (F_n - F_init) * t / preload_frac
               : F_n;
  };
  return s;
}

} // namespace adfric
