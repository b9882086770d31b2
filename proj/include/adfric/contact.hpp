#pragma once

#include "adfric/friction_update.hpp"
#include "adfric/interface_laws.hpp"
#include "adfric/mesh.hpp"

#include <Eigen/Sparse>

#include <cstdint>

namespace adfric {

struct ContactParams {
  AdhesionParams adhesion;
  FrictionLaw law = Frictionless{};
  double eps_t = 50.0;     // tangential penalty (current area for DI, reference for EA)
  bool use_stretch = true; // J_cl in the traction laws (off: J_cl := 1)
  int gauss_per_span = 4;
};

//! Two-half-pass contact pair. Pass 0 integrates over surface a and projects
//! onto b; pass 1 the reverse. A rigid b generates no second pass. Each pass
//! keeps its own quadrature-point history.
struct ContactPair {
  ContactSurface* a = nullptr; // must be deformable
  ContactSurface* b = nullptr;
  ContactParams params;
  // augmented dof ids of a rigid, translating b (x, y); -1 when prescribed
  std::array<int, 2> b_rigid_dofs{-1, -1};

  std::array<std::vector<ContactPointState>, 2> states;

  void init_states();
  int pass_count() const { return b->is_rigid() ? 1 : 2; }
  int points_per_pass(int pass) const;
  const ContactSurface* surf_k(int pass) const { return pass == 0 ? a : b; }
  const ContactSurface* surf_l(int pass) const { return pass == 0 ? b : a; }
};

//! Everything evaluated at one contact quadrature point for the current
//! configuration: projection, law values, predictor-corrector outcome, and
//! the proposed active-set membership.
struct PointEval {
  bool in_range = false;
  bool projection_failed = false;
  Projection proj;
  SpanWeights wl;        // neighbor weights at xi_p
  SpanWeights wl_anchor; // neighbor weights at the committed anchor
  double c11 = 0.0;
  double Tn = 0.0, Tnp = 0.0;
  double t_slide = 0.0, t_slide_d = 0.0;
  double J_eff = 1.0; // J_cl used in the laws (1 when stretch is off)
  TangentialUpdate upd;
  double xi_s_used = 0.0; // anchor after a possible first-touch snap
  ContactStatus fresh = ContactStatus::far;

  // integration-side data
  Vec2 x_k;
  SurfaceBasis kb;
  SpanWeights wk;
  double dA = 0.0, da = 0.0;
};

//! Evaluate all quadrature points of one pass against the committed states.
//! Pure with respect to the pair (states are copied before anchor snaps).
std::vector<PointEval> evaluate_pass(const ContactPair& pair, int pass);

struct PassStats {
  int far = 0, frictionless = 0, stick = 0, slide = 0;
  int projection_failures = 0;
};

//! Output of a contact assembly sweep. f_c and the triplets follow the
//! f_c = f_n - f_t sign convention; the solver adds them to the residual
//! R = f_int + f_c - f_ext and the tangent K = K_int + k_c.
struct ContactOutput {
  Eigen::VectorXd* f_c = nullptr;
  std::vector<Eigen::Triplet<double>>* K = nullptr; // nullable: force only
  Vec2 pair_force_sum{0.0, 0.0}; // sum of f_c rows of the last assembled pair
  PassStats stats;
};

//! Assemble force and consistent tangent of one pass under the given
//! active-set memberships (one status per quadrature point).
void assemble_pass(const ContactPair& pair, int pass,
                   const std::vector<PointEval>& evals,
                   const std::vector<ContactStatus>& status, ContactOutput& out);

//! Commit converged quadrature-point histories.
void commit_pass(ContactPair& pair, int pass, const std::vector<PointEval>& evals,
                 const std::vector<ContactStatus>& status);

// ---------------------------------------------------------------------------
// Active sets
// ---------------------------------------------------------------------------

struct ActiveSetConfig {
  double freeze_tol = 1e-2; // unfreeze when residual < freeze_tol * step residual
  int max_cuts = 6;
};

struct ActiveSets {
  std::array<std::vector<ContactStatus>, 2> status; // per pass
  bool frozen = true;

  std::uint64_t signature() const;
  int difference(const ActiveSets& other) const;
};

ActiveSets sets_from_committed(const ContactPair& pair);
ActiveSets sets_from_evals(const ContactPair& pair,
                           const std::array<std::vector<PointEval>, 2>& evals);

//! Freezing and cycling bookkeeping across the Newton iterations of one
//! load step.
class ActiveSetTracker {
public:
  explicit ActiveSetTracker(ActiveSetConfig cfg) : cfg_(cfg) {}

  //! Decide the sets for this iteration. residual_norm is from the previous
  //! iteration; reference_residual from the first. Raises cut_requested()
  //! when memberships cycle A->B->A twice.
  ActiveSets decide(const ContactPair& pair,
                    const std::array<std::vector<PointEval>, 2>& evals,
                    int iteration, double residual_norm, double reference_residual);

  bool cut_requested() const { return cut_requested_; }
  int set_changes() const { return set_changes_; }
  void reset() {
    history_.clear();
    cut_requested_ = false;
    set_changes_ = 0;
    zigzags_ = 0;
    unfrozen_ = false;
    frozen_sets_.reset();
  }

private:
  ActiveSetConfig cfg_;
  std::vector<std::uint64_t> history_;
  std::optional<ActiveSets> frozen_sets_;
  bool cut_requested_ = false;
  bool unfrozen_ = false;
  int set_changes_ = 0;
  int zigzags_ = 0;
};

} // namespace adfric
