#pragma once

#include "adfric/contact.hpp"
#include "adfric/fem.hpp"

#include <functional>
#include <memory>

namespace adfric {

//! Time-parametrized prescribed value (absolute, not incremental).
using DriveFn = std::function<double(double)>;

struct DirichletBc {
  int dof;       // global dof id (2*node + component)
  DriveFn value;
};

//! Motion program of one rigid surface. The y translation is either
//! prescribed or replaced by a force balance on the augmented dof
//! (constant prescribed normal force, compressive positive).
struct RigidDrive {
  int surface = -1; // index into Model::surfaces
  DriveFn ux = [](double) { return 0.0; };
  DriveFn uy = [](double) { return 0.0; };
  bool force_controlled_y = false;
  DriveFn fn_target = [](double) { return 0.0; };
  double y_position = 0.0; // augmented unknown (offset), persists across steps
  int aug_dof = -1;        // assigned in Model::finalize

  // current set points, written by Model::apply_drives
  Vec2 prescribed{0.0, 0.0};
  double fn_current = 0.0;
};

//! Quasi-static model: one bulk mesh (possibly several disjoint bodies),
//! contact surfaces, pairs, boundary conditions, and rigid-body drives.
class Model {
public:
  Mesh mesh;
  Material material;
  std::vector<std::unique_ptr<ContactSurface>> surfaces;
  std::vector<ContactPair> pairs;
  std::vector<DirichletBc> dirichlet;
  std::vector<RigidDrive> rigid_drives;

  Eigen::VectorXd u; // nodal displacements

  //! Call after the mesh/surfaces/pairs are set up: sizes vectors, assigns
  //! augmented dofs, initializes contact states.
  void finalize();

  int n_node_dofs() const { return 2 * mesh.node_count(); }
  int n_dofs() const { return n_node_dofs() + static_cast<int>(aug_.size()); }
  bool is_constrained(int dof) const { return constrained_[dof]; }

  //! Apply prescribed values at pseudo-time t (Dirichlet dofs and rigid
  //! translations), then refresh the deformed surface geometry.
  void apply_drives(double t);
  void refresh_surfaces();

  std::vector<Vec2> current_coords() const;

  //! Residual R = f_int + f_c - f_ext and tangent under explicit active
  //! sets. evals must come from evaluate_all() at the same state.
  struct SystemOutput {
    Eigen::VectorXd R;
    std::vector<Eigen::Triplet<double>> K;
    PassStats stats;
    Vec2 pair_force[4][2]; // per pair, per pass: sum of f_c rows
  };
  std::array<std::vector<PointEval>, 2> evaluate_pair(int pair_id) const;
  std::vector<std::array<std::vector<PointEval>, 2>> evaluate_all() const;
  void assemble_system(const std::vector<std::array<std::vector<PointEval>, 2>>& evals,
                       const std::vector<ActiveSets>& sets, bool want_tangent,
                       SystemOutput& out) const;

  void commit(const std::vector<std::array<std::vector<PointEval>, 2>>& evals,
              const std::vector<ActiveSets>& sets);

  double strain_energy() const { return bulk_energy(mesh, material, u); }

  //! Total contact force applied to the body integrated in the given pass
  //! of a pair (physical sign: minus the f_c row sum).
  Vec2 applied_contact_force(int pair_id, int pass) const;

  double rigid_y(int drive_id) const { return rigid_drives[drive_id].y_position; }

private:
  std::vector<bool> constrained_;
  std::vector<double> aug_; // mirrors rigid_drives' force-controlled positions
  friend class Solver;
  friend double verify_tangent(Model&, double);
};

struct StepRecord {
  double t = 0.0;
  int iterations = 0;
  int cutbacks = 0;
  int set_changes = 0;
  std::vector<double> residuals;
  bool converged = false;
};

struct SolveReport {
  std::vector<StepRecord> steps;
  bool completed = false;
  int failed_step = -1;
  std::string failure;
};

struct SolverConfig {
  double rtol = 1e-8;
  double abs_floor = 1e-14;
  int max_iterations = 30;
  int max_cuts = 6;
  double freeze_tol = 1e-2;
  bool line_search = false; // optional single back-track on residual growth
  // uniform scaling of the Newton increment when its infinity norm exceeds
  // this bound (0: disabled); keeps iterates from overshooting the narrow
  // traction well. Full steps resume near the solution.
  double du_max = 0.0;
};

//! Per converged step the observer sees the model and bookkeeping; external
//! work is accumulated from constrained-dof reactions (trapezoidal).
struct StepContext {
  double t;
  const StepRecord& record;
  double external_work;                        // cumulative
  const Eigen::VectorXd* residual = nullptr;   // converged R (reactions at
                                               // constrained dofs)
};
//! Return false to stop the march early (reported as completed).
using Observer = std::function<bool(const Model&, const StepContext&)>;

class Solver {
public:
  Solver(Model& model, SolverConfig cfg = {}) : model_(model), cfg_(cfg) {}

  //! March through the pseudo-time stations. Cut-backs subdivide intervals
  //! (halving, up to max_cuts); failure aborts with a partial trajectory.
  SolveReport run(const std::vector<double>& stations, const Observer& observer = {});

  //! One Newton solve from the committed state to pseudo-time t_to;
  //! restores the state on failure.
  bool try_step(double t_from, double t_to, StepRecord& rec);

  double external_work() const { return external_work_; }

private:

  Model& model_;
  SolverConfig cfg_;
  double external_work_ = 0.0;
  Eigen::VectorXd last_residual_;  // R at the last committed state
  Eigen::VectorXd reactions_prev_; // reactions at the last committed state
  std::vector<double> driven_prev_;
};

//! Central finite difference of the full residual against the assembled
//! tangent at the current state; returns the relative Frobenius error.
double verify_tangent(Model& model, double h = 1e-7);

} // namespace adfric
