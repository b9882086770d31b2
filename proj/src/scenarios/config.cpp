#include "adfric/scenarios.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>

namespace adfric {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

// keys starting with '#' are comments; anything else unknown is rejected
void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!key.empty() && key[0] == '#') continue;
    if (!allowed.count(key)) config_error("unknown key '" + key + "' in " + where);
  }
}

double get_num(const json& obj, const std::string& key, double fallback) {
  return obj.contains(key) ? obj.at(key).get<double>() : fallback;
}

} // namespace

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    config_error(std::string("parse error: ") + e.what());
  }

  check_keys(j, "top level",
             {"scenario", "geometry", "material", "adhesion", "law", "mesh",
              "loading", "output"});

  ScenarioConfig cfg;
  if (!j.contains("scenario")) config_error("missing key 'scenario'");
  const std::string sc = j.at("scenario").get<std::string>();
  if (sc == "strip")
    cfg.scenario = ScenarioId::strip;
  else if (sc == "cylinders")
    cfg.scenario = ScenarioId::cylinders;
  else if (sc == "cap")
    cfg.scenario = ScenarioId::cap;
  else
    config_error("unknown scenario '" + sc + "'");

  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    check_keys(g, "geometry",
               {"strip_length", "strip_height", "cyl_radius", "cyl_overlap",
                "cap_chord", "cap_height"});
    cfg.strip_length = get_num(g, "strip_length", cfg.strip_length);
    cfg.strip_height = get_num(g, "strip_height", cfg.strip_height);
    cfg.cyl_radius = get_num(g, "cyl_radius", cfg.cyl_radius);
    cfg.cyl_overlap = get_num(g, "cyl_overlap", cfg.cyl_overlap);
    cfg.cap_chord = get_num(g, "cap_chord", cfg.cap_chord);
    cfg.cap_height = get_num(g, "cap_height", cfg.cap_height);
  }

  if (!j.contains("material")) config_error("missing key 'material'");
  {
    const json& m = j.at("material");
    check_keys(m, "material", {"E", "nu", "variant"});
    cfg.E = get_num(m, "E", 1.0);
    cfg.nu = get_num(m, "nu", cfg.nu);
    const std::string v = m.contains("variant") ? m.at("variant").get<std::string>()
                                                : "standard";
    if (v == "standard")
      cfg.variant = Material::Variant::standard_compressible;
    else if (v == "nearly_incompressible")
      cfg.variant = Material::Variant::nearly_incompressible_reduced_dilatation;
    else
      config_error("unknown material variant '" + v + "'");
  }

  if (!j.contains("adhesion")) config_error("missing key 'adhesion'");
  {
    const json& a = j.at("adhesion");
    check_keys(a, "adhesion", {"A_H", "r0", "T_max", "W_adh", "g_far_scale"});
    cfg.A_H = get_num(a, "A_H", 0.0);
    cfg.r0 = get_num(a, "r0", 0.0);
    cfg.T_max = get_num(a, "T_max", 0.0);
    cfg.W_adh = get_num(a, "W_adh", 0.0);
    cfg.g_far_scale = get_num(a, "g_far_scale", 0.0);
    const bool micro = cfg.A_H > 0.0 && cfg.r0 > 0.0;
    const bool macro = cfg.T_max > 0.0 && cfg.W_adh > 0.0;
    if (!micro && !macro)
      config_error("adhesion needs (A_H, r0) or (T_max, W_adh)");
  }

  if (j.contains("law")) {
    const json& l = j.at("law");
    check_keys(l, "law", {"type", "mu", "s_cut", "k_DI", "eps_t", "use_stretch"});
    const std::string t = l.contains("type") ? l.at("type").get<std::string>()
                                             : "frictionless";
    if (t == "di")
      cfg.law = LawChoice::di;
    else if (t == "ea")
      cfg.law = LawChoice::ea;
    else if (t == "frictionless")
      cfg.law = LawChoice::frictionless;
    else if (t == "nonadhesive-di")
      cfg.law = LawChoice::nonadhesive_di;
    else
      config_error("unknown law type '" + t + "'");
    cfg.mu = get_num(l, "mu", cfg.mu);
    cfg.s_cut = get_num(l, "s_cut", cfg.s_cut);
    if (cfg.s_cut < -0.01 || cfg.s_cut > 1.0)
      config_error("s_cut must lie in [-0.01, 1]");
    cfg.k_DI = get_num(l, "k_DI", cfg.k_DI);
    cfg.eps_t = get_num(l, "eps_t", cfg.eps_t);
    if (l.contains("use_stretch")) cfg.use_stretch = l.at("use_stretch").get<bool>();
  }

  if (j.contains("mesh")) {
    const json& m = j.at("mesh");
    check_keys(m, "mesh", {"resolution_scale"});
    cfg.resolution_scale = get_num(m, "resolution_scale", 1.0);
    if (cfg.resolution_scale <= 0.0) config_error("resolution_scale must be > 0");
  }

  if (j.contains("loading")) {
    const json& l = j.at("loading");
    check_keys(l, "loading",
               {"u_max", "step", "cap_loads", "cap_detach_load", "cap_shear_umax",
                "cap_shear_step", "cap_preload_steps", "threads"});
    cfg.u_max = get_num(l, "u_max", cfg.u_max);
    cfg.step = get_num(l, "step", cfg.step);
    if (l.contains("cap_loads"))
      cfg.cap_loads = l.at("cap_loads").get<std::vector<double>>();
    cfg.cap_detach_load = get_num(l, "cap_detach_load", cfg.cap_detach_load);
    cfg.cap_shear_umax = get_num(l, "cap_shear_umax", cfg.cap_shear_umax);
    cfg.cap_shear_step = get_num(l, "cap_shear_step", cfg.cap_shear_step);
    cfg.cap_preload_steps = get_num(l, "cap_preload_steps", cfg.cap_preload_steps);
    cfg.threads = static_cast<int>(get_num(l, "threads", cfg.threads));
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output", {"dir", "dump_qp", "seed"});
    if (o.contains("dir")) cfg.out_dir = o.at("dir").get<std::string>();
    if (o.contains("dump_qp")) cfg.dump_qp = o.at("dump_qp").get<bool>();
    cfg.seed = static_cast<int>(get_num(o, "seed", 0));
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// output
// ---------------------------------------------------------------------------

namespace {

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/" + name);
  if (!out) throw std::runtime_error("cannot write " + dir + "/" + name);
  out.precision(17);
  return out;
}

void write_series(const ScenarioConfig& cfg, const ScenarioResult& r,
                  const std::string& suffix) {
  auto forces = open_out(cfg.out_dir, "forces" + suffix + ".csv");
  forces << "step,t,u,Fx,Fy\n";
  for (std::size_t i = 0; i < r.series.size(); ++i) {
    const auto& s = r.series[i];
    forces << i << "," << s.t << "," << s.u << "," << s.Fx << "," << s.Fy << "\n";
  }

  auto contact = open_out(cfg.out_dir, "contact" + suffix + ".csv");
  contact << "step,u,L_c,L_peel,L_slide,n_contact,n_stick,n_slide,full_sliding\n";
  for (std::size_t i = 0; i < r.series.size(); ++i) {
    const auto& s = r.series[i];
    contact << i << "," << s.u << "," << s.L_c << "," << s.L_peel << ","
            << s.L_slide << "," << s.n_contact << "," << s.n_stick << ","
            << s.n_slide << "," << (s.full_sliding ? 1 : 0) << "\n";
  }

  auto energies = open_out(cfg.out_dir, "energies" + suffix + ".csv");
  energies << "step,u,Pi_ext,Pi_int,dPi,L_peel,Gamma\n";
  for (std::size_t i = 0; i < r.series.size(); ++i) {
    const auto& s = r.series[i];
    double gamma = 0.0;
    for (const auto& g : r.gamma_curve)
      if (std::abs(g[0] - s.L_peel) < 1e-9) gamma = g[1];
    energies << i << "," << s.u << "," << s.Pi_ext << "," << s.Pi_int << ","
             << (s.Pi_ext - s.Pi_int) << "," << s.L_peel << "," << gamma << "\n";
  }
}

json fit_json(const QuadraticFit& f) {
  return {{"ok", f.ok}, {"L_c0", f.L_c0}, {"xi", f.xi}, {"r2", f.r2}};
}

json fit_json(const PowerFit& f) {
  return {{"ok", f.ok},
          {"exponent", f.exponent},
          {"r2", f.r2},
          {"excluded", f.excluded}};
}

json result_json(const ScenarioResult& r) {
  json j;
  j["steps"] = r.series.size();
  j["completed"] = r.report.completed;
  j["detached"] = r.detached;
  j["last_L_c"] = r.last_L_c;
  j["W_adh"] = r.W_adh;
  j["T_max"] = r.T_max;
  j["gamma_mean"] = r.gamma_mean;
  j["gamma_rel_std"] = r.gamma_rel_std;
  j["quadratic_fit"] = fit_json(r.quad);
  j["eta_fit"] = fit_json(r.eta);
  if (!r.report.failure.empty()) j["failure"] = r.report.failure;
  return j;
}

} // namespace

void write_outputs(const ScenarioConfig& cfg, const ScenarioResult& r,
                   const std::string& suffix) {
  if (cfg.out_dir.empty()) return;
  write_series(cfg, r, suffix);
  if (!r.base_profile.empty()) {
    auto prof = open_out(cfg.out_dir, "base_profile" + suffix + ".csv");
    prof << "x,sigma_yy\n";
    for (const auto& p : r.base_profile) prof << p[0] << "," << p[1] << "\n";
  }
  auto out = open_out(cfg.out_dir, "summary" + suffix + ".json");
  out << result_json(r).dump(2) << "\n";
}

void write_suite_outputs(const ScenarioConfig& cfg, const CapSuiteResult& suite) {
  if (cfg.out_dir.empty()) return;
  json j;
  j["loads"] = suite.loads;
  j["beta"] = fit_json(suite.beta);
  json runs = json::array();
  for (std::size_t i = 0; i < suite.runs.size(); ++i) {
    ScenarioConfig sub = cfg;
    write_series(sub, suite.runs[i], "_Fn" + std::to_string(i));
    runs.push_back(result_json(suite.runs[i]));
  }
  j["runs"] = runs;
  auto out = open_out(cfg.out_dir, "summary.json");
  out << j.dump(2) << "\n";
}

void dump_quadrature_points(const Model& model, const std::string& path) {
  std::ofstream out(path);
  out.precision(17);
  out << "pass,elem,gp,gn,status,ttx,tty,Tslide\n";
  for (std::size_t ip = 0; ip < model.pairs.size(); ++ip) {
    const ContactPair& pair = model.pairs[ip];
    for (int pass = 0; pass < pair.pass_count(); ++pass) {
      const auto evals = evaluate_pass(pair, pass);
      const int gps = pair.params.gauss_per_span;
      for (std::size_t i = 0; i < evals.size(); ++i) {
        const auto& st = pair.states[pass][i];
        out << pass << "," << (i / gps) << "," << (i % gps) << ","
            << (evals[i].in_range ? evals[i].proj.g_n : 0.0) << ","
            << to_string(st.status) << "," << st.t_last.x() << "," << st.t_last.y()
            << "," << evals[i].t_slide << "\n";
      }
    }
  }
}

} // namespace adfric
