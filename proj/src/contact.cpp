#include "adfric/contact.hpp"

#include <cassert>
#include <cmath>

namespace adfric {

void ContactPair::init_states() {
  assert(a && b && !a->is_rigid());
  for (int pass = 0; pass < 2; ++pass) {
    states[pass].clear();
    if (pass < pass_count())
      states[pass].resize(points_per_pass(pass));
  }
}

int ContactPair::points_per_pass(int pass) const {
  return surf_k(pass)->span_count() * params.gauss_per_span;
}

std::vector<PointEval> evaluate_pass(const ContactPair& pair, int pass) {
  const ContactSurface* k = pair.surf_k(pass);
  const ContactSurface* l = pair.surf_l(pass);
  const ContactParams& prm = pair.params;
  const AdhesionParams& adh = prm.adhesion;
  const GaussRule rule = gauss_rule(prm.gauss_per_span);

  std::vector<PointEval> evals(pair.points_per_pass(pass));
  const Aabb l_box = l->bounding_box(adh.g_far);

  int idx = 0;
  for (int s = 0; s < k->span_count(); ++s) {
    for (int q = 0; q < prm.gauss_per_span; ++q, ++idx) {
      PointEval& ev = evals[idx];
      const double xi = s + 0.5 * (1.0 + rule.points[q]);
      ev.kb = k->basis_at(xi);
      ev.wk = k->weights_at(xi);
      ev.x_k = ev.kb.x;
      const double w = 0.5 * rule.weights[q];
      ev.dA = w * ev.kb.A1.norm();
      ev.da = w * std::sqrt(ev.kb.a11);

      if (!l_box.contains(ev.x_k)) continue;
      auto proj = l->project(ev.x_k);
      if (!proj) {
        ev.projection_failed = true;
        continue;
      }
      if (proj->clamped) continue;
      if (proj->g_n >= adh.g_far) continue;
      const auto c11 = curvature_corrected_metric(proj->basis, proj->g_n);
      if (!c11) continue; // gap at the focal distance: degrade to far

      ev.in_range = true;
      ev.proj = *proj;
      ev.c11 = *c11;
      ev.J_eff = prm.use_stretch ? proj->basis.J_cl : 1.0;
      ev.Tn = normal_traction(proj->g_n, adh);
      ev.Tnp = normal_traction_derivative(proj->g_n, adh);
      ev.t_slide = slide_threshold(prm.law, proj->g_n, ev.J_eff, adh);
      ev.t_slide_d = slide_threshold_derivative(prm.law, proj->g_n, ev.J_eff, adh);

      ContactPointState state = pair.states[pass][idx];
      const bool had_valid_anchor = state.has_anchor &&
                                    state.xi_s >= l->xi_begin() &&
                                    state.xi_s <= l->xi_end();
      const Vec2 t_trial = trial_traction(state, *l, *proj, prm.eps_t);
      ev.xi_s_used = state.xi_s;
      ev.upd = return_map(state, *proj, t_trial, ev.t_slide, prm.eps_t);
      ev.upd.reanchored = ev.upd.reanchored || !had_valid_anchor;

      if (!l->is_rigid()) {
        ev.wl = l->weights_at(proj->xi);
        ev.wl_anchor = l->weights_at(ev.xi_s_used);
      }

      if (threshold_is_zero(prm.law, proj->g_n, adh))
        ev.fresh = ContactStatus::frictionless_slide;
      else
        ev.fresh = ev.upd.f_s < 0.0 ? ContactStatus::stick : ContactStatus::slide;
    }
  }
  return evals;
}

namespace {

inline int dof_of(const SpanWeights& w, int a, int i) { return 2 * w.nodes[a] + i; }

// scatters one pass; tracks the plate force-balance row when the rigid
// counter-body carries a force-controlled dof
struct Scatter {
  ContactOutput& out;
  int plate_row = -1; // global dof of the force-control equation

  void force(const SpanWeights& wk, int a, const Vec2& f) {
    out.pair_force_sum += f;
    if (!out.f_c) return;
    (*out.f_c)[dof_of(wk, a, 0)] += f.x();
    (*out.f_c)[dof_of(wk, a, 1)] += f.y();
  }

  void entry(int r, int c, double v) {
    if (v == 0.0) return;
    out.K->emplace_back(r, c, v);
    if (plate_row >= 0 && r % 2 == 1) out.K->emplace_back(plate_row, c, v);
  }

  void block(const SpanWeights& wk, int a, const SpanWeights& wc, int b, const Mat2& m) {
    if (!out.K) return;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        entry(dof_of(wk, a, i), dof_of(wc, b, j), m(i, j));
  }

  void column(const SpanWeights& wk, int a, int dof, const Vec2& v) {
    if (!out.K) return;
    entry(dof_of(wk, a, 0), dof, v.x());
    entry(dof_of(wk, a, 1), dof, v.y());
  }
};

} // namespace

void assemble_pass(const ContactPair& pair, int pass,
                   const std::vector<PointEval>& evals,
                   const std::vector<ContactStatus>& status, ContactOutput& out) {
  const ContactParams& prm = pair.params;
  const bool di = std::holds_alternative<LawDI>(prm.law);
  const bool ea = std::holds_alternative<LawEA>(prm.law);
  const bool frictional = di || ea;
  const double eps = prm.eps_t;

  const bool plate = pass == 0 && pair.b->is_rigid();
  Scatter sc{out, plate ? pair.b_rigid_dofs[1] : -1};

  out.pair_force_sum.setZero();

  for (std::size_t ip = 0; ip < evals.size(); ++ip) {
    const PointEval& ev = evals[ip];
    const ContactStatus st = status[ip];
    if (ev.projection_failed) ++out.stats.projection_failures;
    if (st == ContactStatus::far || !ev.in_range) {
      ++out.stats.far;
      continue;
    }

    const SurfaceBasis& pb = ev.proj.basis;
    const Vec2& n = pb.n;
    const Vec2& ap = pb.a1;
    const Vec2& apc = pb.a1_con;
    const double gn = ev.proj.g_n;
    const double c11 = ev.c11;
    const double Jl = ev.J_eff;
    const double Jl_xi = prm.use_stretch ? pb.J_cl_xi : 0.0;
    const Vec2 dJdx = Jl_xi * c11 * ap;

    Eigen::Matrix<double, 6, 6> KK = Eigen::Matrix<double, 6, 6>::Zero();

    // --- normal contribution: f_n^e = -int N^T (Tn/Jl) n dA
    {
      const Vec2 Tvec = (ev.Tn / Jl) * n;
      for (int a = 0; a < 3; ++a)
        sc.force(ev.wk, a, -ev.wk.N[a] * ev.dA * Tvec);

      if (out.K) {
        const double kappa = n.dot(pb.a11_vec);
        const Mat2 dn_dx = -kappa * pb.inv_a11 * c11 * (ap * ap.transpose());
        Mat2 dTdx = (ev.Tnp / Jl) * (n * n.transpose()) + (ev.Tn / Jl) * dn_dx;
        if (prm.use_stretch)
          dTdx -= (ev.Tn / (Jl * Jl)) * (n * dJdx.transpose());

        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            KK.block<2, 2>(2 * a, 2 * b) -= ev.wk.N[a] * ev.wk.N[b] * ev.dA * dTdx;

        if (ev.wl.count) {
          // the n x a^1 and n x n pieces stem from the variation of the
          // neighbor surface stretch; they vanish when J_cl is frozen at 1
          Mat2 Bn = c11 * (ap * n.transpose());
          if (prm.use_stretch)
            Bn += n * apc.transpose() +
                  gn * (Jl_xi / Jl) * c11 * (n * n.transpose());
          for (int b = 0; b < ev.wl.count; ++b) {
            const Mat2 col = -dTdx * ev.wl.N[b] - (ev.Tn / Jl) * Bn * ev.wl.dN[b];
            for (int a = 0; a < 3; ++a)
              sc.block(ev.wk, a, ev.wl, b, -ev.wk.N[a] * ev.dA * col);
          }
        }
      }
    }

    // --- tangential contribution: f_c gains -f_t^e = +int N^T t dm
    // a freshly re-anchored point has no elastic memory this step: its trial
    // is identically zero under any perturbation, so it contributes nothing
    const bool tangential = frictional && !ev.upd.reanchored &&
                            (st == ContactStatus::stick ||
                             st == ContactStatus::slide);
    if (tangential) {
      const double m = di ? ev.da : ev.dA;
      const Vec2& trial = ev.upd.t_trial;
      const double trial_norm = trial.norm();
      const bool slide = st == ContactStatus::slide && trial_norm > 0.0;

      Vec2 t_vec;
      Mat2 p_t = Mat2::Zero();
      Vec2 n_t = Vec2::Zero();
      if (slide) {
        n_t = trial / trial_norm;
        t_vec = ev.t_slide * n_t;
        p_t = (ev.t_slide / trial_norm) *
              (Mat2::Identity() - n_t * n_t.transpose());
      } else {
        t_vec = trial;
      }

      for (int a = 0; a < 3; ++a)
        sc.force(ev.wk, a, ev.wk.N[a] * m * t_vec);

      if (out.K) {
        const Mat2 D = eps * c11 * (ap * ap.transpose());

        Vec2 dts_dx = ev.t_slide_d * n;
        if (ea && prm.use_stretch) dts_dx -= (ev.t_slide / Jl) * dJdx;

        const Mat2 M = slide ? Mat2(p_t * D + n_t * dts_dx.transpose()) : D;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            KK.block<2, 2>(2 * a, 2 * b) += ev.wk.N[a] * ev.wk.N[b] * m * M;

        if (di) {
          // current-configuration area change of the integration surface
          const Mat2 area = t_vec * ev.kb.a1_con.transpose();
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
              KK.block<2, 2>(2 * a, 2 * b) += ev.wk.N[a] * ev.wk.dN[b] * ev.da * area;
        }

        if (ev.wl.count) {
          for (int b = 0; b < ev.wl.count; ++b) {
            Mat2 Tcol = -D * ev.wl.N[b] + eps * ev.wl.N[b] * Mat2::Identity() +
                        eps * gn * c11 * (ap * n.transpose()) * ev.wl.dN[b];
            Mat2 Ecol;
            if (slide) {
              Vec2 dts_dul = -ev.t_slide_d * ev.wl.N[b] * n;
              if (ea && prm.use_stretch) {
                const Vec2 dJdul = -Jl_xi * c11 * ap * ev.wl.N[b] +
                                   (Jl * apc + gn * Jl_xi * c11 * n) * ev.wl.dN[b];
                dts_dul -= (ev.t_slide / Jl) * dJdul;
              }
              Ecol = p_t * Tcol + n_t * dts_dul.transpose();
            } else {
              Ecol = Tcol;
            }
            for (int a = 0; a < 3; ++a)
              sc.block(ev.wk, a, ev.wl, b, ev.wk.N[a] * m * Ecol);
          }
          // anchor shape functions couple to the anchor span
          for (int b = 0; b < ev.wl_anchor.count; ++b) {
            Mat2 Acol = -eps * ev.wl_anchor.N[b] * Mat2::Identity();
            if (slide) Acol = p_t * Acol;
            for (int a = 0; a < 3; ++a)
              sc.block(ev.wk, a, ev.wl_anchor, b, ev.wk.N[a] * m * Acol);
          }
        }
      }
    }

    // scatter the kk block and, for a translating rigid counter-body, the
    // equivalent columns (-KK contracted with a uniform translation)
    if (out.K) {
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          sc.block(ev.wk, a, ev.wk, b, KK.block<2, 2>(2 * a, 2 * b));
      if (plate) {
        for (int j = 0; j < 2; ++j) {
          const int dj = pair.b_rigid_dofs[j];
          if (dj < 0) continue;
          for (int a = 0; a < 3; ++a) {
            Vec2 col = Vec2::Zero();
            for (int b = 0; b < 3; ++b) col -= KK.block<2, 2>(2 * a, 2 * b).col(j);
            sc.column(ev.wk, a, dj, col);
          }
        }
      }
    }

    switch (st) {
      case ContactStatus::frictionless_slide: ++out.stats.frictionless; break;
      case ContactStatus::stick: ++out.stats.stick; break;
      case ContactStatus::slide: ++out.stats.slide; break;
      default: break;
    }
  }
}

void commit_pass(ContactPair& pair, int pass, const std::vector<PointEval>& evals,
                 const std::vector<ContactStatus>& status) {
  for (std::size_t i = 0; i < evals.size(); ++i) {
    ContactPointState& st = pair.states[pass][i];
    const PointEval& ev = evals[i];
    const ContactStatus s = ev.in_range ? status[i] : ContactStatus::far;
    st.status = s;
    st.frozen = false;
    switch (s) {
      case ContactStatus::far:
        st.has_anchor = false;
        st.t_last.setZero();
        st.dgamma_last = 0.0;
        break;
      case ContactStatus::frictionless_slide:
        st.xi_s = ev.proj.xi;
        st.has_anchor = true;
        st.t_last.setZero();
        st.dgamma_last = 0.0;
        break;
      case ContactStatus::stick:
        st.xi_s = ev.xi_s_used;
        st.has_anchor = true;
        st.t_last = ev.upd.t_trial;
        st.dgamma_last = 0.0;
        break;
      case ContactStatus::slide:
        st.xi_s = ev.upd.sliding ? ev.upd.xi_s_new : ev.proj.xi;
        st.has_anchor = true;
        st.t_last = ev.upd.t_t;
        st.dgamma_last = ev.upd.dgamma;
        break;
    }
  }
}

// ---------------------------------------------------------------------------
// Active sets
// ---------------------------------------------------------------------------

std::uint64_t ActiveSets::signature() const {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& pass : status)
    for (ContactStatus s : pass) {
      h ^= static_cast<std::uint64_t>(s) + 1;
      h *= 1099511628211ull;
    }
  return h;
}

int ActiveSets::difference(const ActiveSets& other) const {
  int n = 0;
  for (int p = 0; p < 2; ++p) {
    if (status[p].size() != other.status[p].size()) return 1 << 30;
    for (std::size_t i = 0; i < status[p].size(); ++i)
      if (status[p][i] != other.status[p][i]) ++n;
  }
  return n;
}

ActiveSets sets_from_committed(const ContactPair& pair) {
  ActiveSets sets;
  sets.frozen = true;
  for (int p = 0; p < pair.pass_count(); ++p) {
    sets.status[p].resize(pair.states[p].size());
    for (std::size_t i = 0; i < pair.states[p].size(); ++i)
      sets.status[p][i] = pair.states[p][i].status;
  }
  return sets;
}

ActiveSets sets_from_evals(const ContactPair& pair,
                           const std::array<std::vector<PointEval>, 2>& evals) {
  ActiveSets sets;
  sets.frozen = false;
  for (int p = 0; p < pair.pass_count(); ++p) {
    sets.status[p].resize(evals[p].size());
    for (std::size_t i = 0; i < evals[p].size(); ++i)
      sets.status[p][i] = evals[p][i].fresh;
  }
  return sets;
}

ActiveSets ActiveSetTracker::decide(const ContactPair& pair,
                                    const std::array<std::vector<PointEval>, 2>& evals,
                                    int iteration, double residual_norm,
                                    double reference_residual) {
  if (!frozen_sets_) frozen_sets_ = sets_from_committed(pair);
  // one-way gate: once the residual has dropped enough the sets follow the
  // iterates for the rest of the step (re-freezing causes limit cycles)
  if (iteration == 0 || cut_requested_ ||
      (!unfrozen_ && residual_norm > cfg_.freeze_tol * reference_residual))
    return *frozen_sets_;
  unfrozen_ = true;

  ActiveSets fresh = sets_from_evals(pair, evals);
  const std::uint64_t sig = fresh.signature();
  if (!history_.empty() && sig != history_.back()) ++set_changes_;
  if (history_.size() >= 2 && sig == history_[history_.size() - 2] &&
      sig != history_.back()) {
    if (++zigzags_ >= 2) {
      cut_requested_ = true;
      return *frozen_sets_;
    }
  }
  history_.push_back(sig);
  return fresh;
}

} // namespace adfric
