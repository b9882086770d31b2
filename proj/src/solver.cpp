#include "adfric/solver.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace adfric {

void Model::finalize() {
  u.setZero(2 * mesh.node_count());
  constrained_.assign(n_node_dofs(), false);
  for (const auto& bc : dirichlet) constrained_[bc.dof] = true;

  aug_.clear();
  for (auto& drive : rigid_drives) {
    if (drive.force_controlled_y) {
      drive.aug_dof = n_node_dofs() + static_cast<int>(aug_.size());
      aug_.push_back(drive.y_position);
    }
  }
  for (auto& pair : pairs) {
    pair.init_states();
    pair.b_rigid_dofs = {-1, -1};
    for (const auto& drive : rigid_drives) {
      if (drive.surface >= 0 && surfaces[drive.surface].get() == pair.b &&
          drive.force_controlled_y)
        pair.b_rigid_dofs[1] = drive.aug_dof;
    }
  }
  refresh_surfaces();

  // seed the contact memberships from the initial geometry, so the first
  // frozen Newton iteration starts from a meaningful classification
  const auto evals = evaluate_all();
  std::vector<ActiveSets> sets(pairs.size());
  for (std::size_t ip = 0; ip < pairs.size(); ++ip)
    sets[ip] = sets_from_evals(pairs[ip], evals[ip]);
  commit(evals, sets);
}

void Model::apply_drives(double t) {
  for (const auto& bc : dirichlet) u[bc.dof] = bc.value(t);
  for (auto& drive : rigid_drives) {
    drive.prescribed = Vec2(drive.ux(t), drive.uy(t));
    drive.fn_current = drive.fn_target(t);
  }
  refresh_surfaces();
}

void Model::refresh_surfaces() {
  const std::vector<Vec2> coords = current_coords();
  for (auto& s : surfaces)
    if (auto* strip = dynamic_cast<BsplineStrip*>(s.get())) strip->update(coords);
  for (auto& drive : rigid_drives) {
    Vec2 tr = drive.prescribed;
    if (drive.force_controlled_y) {
      tr.y() = aug_[drive.aug_dof - n_node_dofs()];
      drive.y_position = tr.y();
    }
    surfaces[drive.surface]->set_translation(tr);
  }
}

std::vector<Vec2> Model::current_coords() const {
  std::vector<Vec2> coords(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i)
    coords[i] = mesh.nodes[i] + Vec2(u[2 * i], u[2 * i + 1]);
  return coords;
}

std::array<std::vector<PointEval>, 2> Model::evaluate_pair(int pair_id) const {
  std::array<std::vector<PointEval>, 2> evals;
  for (int p = 0; p < pairs[pair_id].pass_count(); ++p)
    evals[p] = evaluate_pass(pairs[pair_id], p);
  return evals;
}

std::vector<std::array<std::vector<PointEval>, 2>> Model::evaluate_all() const {
  std::vector<std::array<std::vector<PointEval>, 2>> all(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) all[i] = evaluate_pair(static_cast<int>(i));
  return all;
}

void Model::assemble_system(
    const std::vector<std::array<std::vector<PointEval>, 2>>& evals,
    const std::vector<ActiveSets>& sets, bool want_tangent, SystemOutput& out) const {
  const int n = n_dofs();
  out.R.setZero(n);
  out.K.clear();
  out.stats = {};

  Eigen::VectorXd f_int = Eigen::VectorXd::Zero(n);
  {
    Eigen::VectorXd f_bulk = Eigen::VectorXd::Zero(n_node_dofs());
    assemble_bulk(mesh, material, u, f_bulk, want_tangent ? &out.K : nullptr);
    f_int.head(n_node_dofs()) = f_bulk;
  }
  out.R = f_int;

  Eigen::VectorXd f_c = Eigen::VectorXd::Zero(n);
  for (std::size_t ip = 0; ip < pairs.size(); ++ip) {
    for (int pass = 0; pass < pairs[ip].pass_count(); ++pass) {
      ContactOutput co;
      co.f_c = &f_c;
      co.K = want_tangent ? &out.K : nullptr;
      assemble_pass(pairs[ip], pass, evals[ip][pass], sets[ip].status[pass], co);
      out.pair_force[ip][pass] = co.pair_force_sum;
      out.stats.far += co.stats.far;
      out.stats.frictionless += co.stats.frictionless;
      out.stats.stick += co.stats.stick;
      out.stats.slide += co.stats.slide;
      out.stats.projection_failures += co.stats.projection_failures;
    }
  }
  out.R += f_c;

  // force balance of force-controlled rigid bodies
  for (const auto& drive : rigid_drives) {
    if (!drive.force_controlled_y) continue;
    double sum_y = 0.0;
    for (std::size_t ip = 0; ip < pairs.size(); ++ip)
      if (surfaces[drive.surface].get() == pairs[ip].b)
        sum_y += out.pair_force[ip][0].y();
    out.R[drive.aug_dof] = sum_y - drive.fn_current;
  }
}

void Model::commit(const std::vector<std::array<std::vector<PointEval>, 2>>& evals,
                   const std::vector<ActiveSets>& sets) {
  for (std::size_t ip = 0; ip < pairs.size(); ++ip)
    for (int pass = 0; pass < pairs[ip].pass_count(); ++pass)
      commit_pass(pairs[ip], pass, evals[ip][pass], sets[ip].status[pass]);
}

Vec2 Model::applied_contact_force(int pair_id, int pass) const {
  auto evals = evaluate_pair(pair_id);
  ContactOutput co;
  std::vector<ContactStatus> status(evals[pass].size());
  for (std::size_t i = 0; i < status.size(); ++i) status[i] = evals[pass][i].fresh;
  assemble_pass(pairs[pair_id], pass, evals[pass], status, co);
  return -co.pair_force_sum;
}

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

namespace {

double free_norm(const Model& model, const Eigen::VectorXd& R) {
  double s = 0.0;
  for (int i = 0; i < R.size(); ++i) {
    if (i < 2 * model.mesh.node_count() && model.is_constrained(i)) continue;
    s += R[i] * R[i];
  }
  return std::sqrt(s);
}

} // namespace

bool Solver::try_step(double t_from, double t_to, StepRecord& rec) {
  (void)t_from;
  const Eigen::VectorXd u_saved = model_.u;
  const std::vector<double> aug_saved = model_.aug_;

  model_.apply_drives(t_to);

  std::vector<ActiveSetTracker> trackers(model_.pairs.size(),
                                         ActiveSetTracker({cfg_.freeze_tol, cfg_.max_cuts}));

  const double floor = cfg_.abs_floor * std::max(1.0, model_.material.E);
  double res_ref = floor;
  double res_prev = std::numeric_limits<double>::max();
  std::uint64_t prev_sig = 0;
  Eigen::VectorXd delta;
  bool halved = false;

  Model::SystemOutput sys;
  std::vector<ActiveSets> sets(model_.pairs.size());

  for (int it = 0; it < cfg_.max_iterations; ++it) {
    model_.refresh_surfaces();
    std::vector<std::array<std::vector<PointEval>, 2>> evals;
    try {
      evals = model_.evaluate_all();
      bool cut = false;
      for (std::size_t ip = 0; ip < model_.pairs.size(); ++ip) {
        sets[ip] = trackers[ip].decide(model_.pairs[ip], evals[ip], it, res_prev, res_ref);
        cut = cut || trackers[ip].cut_requested();
      }
      if (cut) {
        model_.u = u_saved;
        model_.aug_ = aug_saved;
        model_.refresh_surfaces();
        return false;
      }
      model_.assemble_system(evals, sets, true, sys);
    } catch (const std::exception&) { // element inversion, degenerate geometry
      model_.u = u_saved;
      model_.aug_ = aug_saved;
      model_.refresh_surfaces();
      return false;
    }

    double res = free_norm(model_, sys.R);
    rec.residuals.push_back(res);
    rec.iterations = it + 1;

    if (it == 0) res_ref = std::max(res, floor);

    // one optional back-track when the residual grows
    if (cfg_.line_search && it > 0 && res > res_prev && !halved && delta.size()) {
      halved = true;
      int j = 0;
      for (int d = 0; d < model_.n_dofs(); ++d) {
        if (d < model_.n_node_dofs()) {
          if (model_.is_constrained(d)) continue;
          model_.u[d] -= 0.5 * delta[j++];
        } else {
          model_.aug_[d - model_.n_node_dofs()] -= 0.5 * delta[j++];
        }
      }
      rec.residuals.pop_back();
      continue;
    }
    halved = false;
    res_prev = res;

    // stability: the sets used this iteration repeat the previous ones (or
    // the residual is at the absolute floor)
    bool stable = true;
    std::uint64_t sig = 0;
    for (std::size_t ip = 0; ip < model_.pairs.size(); ++ip) {
      sig = sig * 1099511628211ull + sets[ip].signature();
      rec.set_changes = std::max(rec.set_changes, trackers[ip].set_changes());
    }
    if (it == 0 || sig != prev_sig) stable = res <= floor;
    prev_sig = sig;
    if ((res <= cfg_.rtol * res_ref || res <= floor) && stable) {
      model_.commit(evals, sets);
      rec.converged = true;
      last_residual_ = sys.R;
      return true;
    }

    // reduced solve on free dofs
    std::vector<int> map(model_.n_dofs(), -1);
    int n_free = 0;
    for (int d = 0; d < model_.n_dofs(); ++d)
      if (d >= model_.n_node_dofs() || !model_.is_constrained(d)) map[d] = n_free++;

    std::vector<Eigen::Triplet<double>> kt;
    kt.reserve(sys.K.size());
    for (const auto& t : sys.K)
      if (map[t.row()] >= 0 && map[t.col()] >= 0)
        kt.emplace_back(map[t.row()], map[t.col()], t.value());
    Eigen::SparseMatrix<double> K(n_free, n_free);
    K.setFromTriplets(kt.begin(), kt.end());

    Eigen::VectorXd rhs(n_free);
    for (int d = 0; d < model_.n_dofs(); ++d)
      if (map[d] >= 0) rhs[map[d]] = -sys.R[d];

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(K);
    if (lu.info() != Eigen::Success) {
      model_.u = u_saved;
      model_.aug_ = aug_saved;
      model_.refresh_surfaces();
      return false;
    }
    delta = lu.solve(rhs);
    if (!delta.allFinite()) {
      model_.u = u_saved;
      model_.aug_ = aug_saved;
      model_.refresh_surfaces();
      return false;
    }
    if (cfg_.du_max > 0.0) {
      const double dmax = delta.lpNorm<Eigen::Infinity>();
      if (dmax > cfg_.du_max) delta *= cfg_.du_max / dmax;
    }

    for (int d = 0; d < model_.n_dofs(); ++d) {
      if (map[d] < 0) continue;
      if (d < model_.n_node_dofs())
        model_.u[d] += delta[map[d]];
      else
        model_.aug_[d - model_.n_node_dofs()] += delta[map[d]];
    }
  }

  model_.u = u_saved;
  model_.aug_ = aug_saved;
  model_.refresh_surfaces();
  return false;
}

SolveReport Solver::run(const std::vector<double>& stations, const Observer& observer) {
  SolveReport report;
  if (stations.size() < 2) {
    report.completed = true;
    return report;
  }

  // reactions at the initial state, for the work integral
  {
    model_.apply_drives(stations.front());
    auto evals = model_.evaluate_all();
    std::vector<ActiveSets> sets(model_.pairs.size());
    for (std::size_t ip = 0; ip < model_.pairs.size(); ++ip)
      sets[ip] = sets_from_committed(model_.pairs[ip]);
    Model::SystemOutput sys;
    model_.assemble_system(evals, sets, false, sys);
    last_residual_ = sys.R;
    driven_prev_.clear();
    reactions_prev_.resize(model_.dirichlet.size());
    for (std::size_t i = 0; i < model_.dirichlet.size(); ++i) {
      reactions_prev_[i] = sys.R[model_.dirichlet[i].dof];
      driven_prev_.push_back(model_.u[model_.dirichlet[i].dof]);
    }
  }

  double t = stations.front();
  for (std::size_t k = 1; k < stations.size(); ++k) {
    const double target = stations[k];
    double dt = target - t;
    int cuts = 0;
    int guard = 0;
    while (t < target - 1e-15 * std::abs(target)) {
      if (++guard > 10000) {
        report.failed_step = static_cast<int>(k);
        report.failure = "sub-step guard exceeded at t = " + std::to_string(t);
        return report;
      }
      const double t_next = std::min(target, t + dt);
      StepRecord rec;
      rec.t = t_next;
      rec.cutbacks = cuts;
      if (try_step(t, t_next, rec)) {
        cuts = 0;
        report.steps.push_back(rec);
        // trapezoidal external work from constrained-dof reactions
        for (std::size_t i = 0; i < model_.dirichlet.size(); ++i) {
          const int dof = model_.dirichlet[i].dof;
          const double f_now = last_residual_[dof];
          const double u_now = model_.u[dof];
          external_work_ += 0.5 * (f_now + reactions_prev_[i]) * (u_now - driven_prev_[i]);
          reactions_prev_[i] = f_now;
          driven_prev_[i] = u_now;
        }
        t = t_next;
        if (std::abs(t_next - target) < 1e-15 * std::max(1.0, std::abs(target))) break;
        dt = std::min(2.0 * dt, target - t);
      } else {
        ++cuts;
        if (cuts > cfg_.max_cuts) {
          report.failed_step = static_cast<int>(k);
          report.failure = "no convergence after " + std::to_string(cfg_.max_cuts) +
                           " cut-backs at t = " + std::to_string(t_next);
          return report;
        }
        dt *= 0.5;
      }
    }
    if (observer) {
      StepContext ctx{target, report.steps.back(), external_work_};
      ctx.residual = &last_residual_;
      if (!observer(model_, ctx)) break;
    }
  }
  report.completed = true;
  return report;
}

// ---------------------------------------------------------------------------

double verify_tangent(Model& model, double h) {
  model.refresh_surfaces();
  std::vector<ActiveSets> sets(model.pairs.size());
  for (std::size_t ip = 0; ip < model.pairs.size(); ++ip)
    sets[ip] = sets_from_committed(model.pairs[ip]);

  auto residual = [&]() {
    Model::SystemOutput sys;
    model.assemble_system(model.evaluate_all(), sets, false, sys);
    return sys.R;
  };

  Model::SystemOutput sys;
  model.assemble_system(model.evaluate_all(), sets, true, sys);
  const int n = model.n_dofs();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : sys.K) K(t.row(), t.col()) += t.value();

  auto get = [&](int d) {
    return d < model.n_node_dofs() ? model.u[d] : model.aug_[d - model.n_node_dofs()];
  };
  auto set = [&](int d, double v) {
    if (d < model.n_node_dofs())
      model.u[d] = v;
    else
      model.aug_[d - model.n_node_dofs()] = v;
    model.refresh_surfaces();
  };

  Eigen::MatrixXd K_fd(n, n);
  for (int d = 0; d < n; ++d) {
    const double v0 = get(d);
    set(d, v0 + h);
    const Eigen::VectorXd Rp = residual();
    set(d, v0 - h);
    const Eigen::VectorXd Rm = residual();
    set(d, v0);
    K_fd.col(d) = (Rp - Rm) / (2.0 * h);
  }
  return (K_fd - K).norm() / std::max(K_fd.norm(), 1e-300);
}

} // namespace adfric
