#pragma once

#include "adfric/surface.hpp"

namespace adfric {

enum class ContactStatus { far, frictionless_slide, stick, slide };

const char* to_string(ContactStatus s);

//! History carried by one contact quadrature point between load steps.
//! The stick anchor xi_s lives on the *neighboring* surface and encodes the
//! irreversible part of the tangential gap.
struct ContactPointState {
  double xi_s = 0.0;
  bool has_anchor = false;
  ContactStatus status = ContactStatus::far;
  Vec2 t_last{0.0, 0.0};    // last committed tangential traction
  double dgamma_last = 0.0; // last committed slip increment
  bool frozen = false;
};

//! Outcome of the predictor-corrector update at one point.
struct TangentialUpdate {
  Vec2 t_t{0.0, 0.0};     // corrected traction
  Vec2 t_trial{0.0, 0.0}; // predictor
  Vec2 n_t{0.0, 0.0};     // slip direction (valid when sliding)
  double xi_s_new = 0.0;
  double dgamma = 0.0;
  double f_s = 0.0; // sliding criterion at the trial state
  bool sliding = false;
  bool reanchored = false; // anchor was invalid and snapped to the foot point
};

//! Sticking predictor: elastic traction from the gap between the current
//! foot point and the committed anchor, both evaluated on the current
//! neighbor geometry. Snaps the anchor to the foot point when the state
//! carries none (first touch) or the anchor left the surface domain.
Vec2 trial_traction(ContactPointState& state, const ContactSurface& neighbor,
                    const Projection& proj, double eps_t);

//! f_s = ||t_trial|| - t_slide.
inline double sliding_criterion(const Vec2& t_trial, double t_slide) {
  return t_trial.norm() - t_slide;
}

//! Radial return: stick keeps the predictor, slide scales it back onto the
//! admissible sphere and advances the anchor along the slip direction.
TangentialUpdate return_map(const ContactPointState& state, const Projection& proj,
                            const Vec2& t_trial, double t_slide, double eps_t);

//! Frictionless sliding: zero traction, anchor snapped to the foot point.
TangentialUpdate frictionless_reset(const Projection& proj);

} // namespace adfric
