#pragma once

#include <Eigen/Dense>

#include <array>
#include <memory>
#include <optional>
#include <vector>

namespace adfric {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

//! Rotate by -90 degrees; maps the tangent of a counter-clockwise oriented
//! boundary to the outward normal.
inline Vec2 rot90cw(const Vec2& v) { return Vec2(v.y(), -v.x()); }

//! Co-variant basis, metric and curvature of a 2D contact curve at one
//! parametric location. The out-of-plane direction is the fixed second
//! tangent, so all metric quantities reduce to scalars.
struct SurfaceBasis {
  Vec2 x;        // position
  Vec2 a1;       // co-variant tangent dx/dxi
  Vec2 a1_con;   // contra-variant tangent a1/a11
  Vec2 n;        // unit outward normal
  Vec2 a11_vec;  // curvature vector d2x/dxi2
  double a11 = 0.0;      // metric a_11
  double inv_a11 = 0.0;  // inverse metric a^11

  // reference-configuration counterparts (equal to current for rigid patches)
  Vec2 X;
  Vec2 A1;
  Vec2 A11_vec;

  double J_cl = 1.0;    // surface stretch |a1|/|A1|
  double J_cl_xi = 0.0; // dJ_cl/dxi
};

//! Curvature-corrected inverse metric c^11 = 1/(a_11 - g_n * n.a_{1,1}).
//! Returns nullopt when the matrix is singular (gap at the focal distance).
std::optional<double> curvature_corrected_metric(const SurfaceBasis& b, double g_n);

//! Result of a closest-point projection onto a contact surface.
struct Projection {
  double xi = 0.0;  // parameter of the foot point
  int patch = 0;    // span (patch) index containing xi
  Vec2 x_p;         // foot point
  Vec2 gap_vec;     // x_k - x_p
  double g_n = 0.0; // signed normal gap
  SurfaceBasis basis;
  bool clamped = false;   // foot clamped to the end of the parametric domain
  bool converged = true;
};

//! Shape-function weights tying a parametric location to mesh nodes.
//! count == 0 for rigid patches (no nodal coupling).
struct SpanWeights {
  int count = 0;
  std::array<int, 3> nodes{-1, -1, -1}; // global node ids
  std::array<double, 3> N{};            // values
  std::array<double, 3> dN{};           // d/dxi
  std::array<double, 3> ddN{};          // d2/dxi2
};

struct Aabb {
  Vec2 lo{0, 0}, hi{0, 0};
  bool contains(const Vec2& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
};

//! A contact surface: parametrized curve with C1 interior, supporting basis
//! evaluation and closest-point projection. Deformable surfaces couple to
//! mesh nodes through SpanWeights; rigid ones move by prescribed translation.
class ContactSurface {
public:
  virtual ~ContactSurface() = default;

  virtual int span_count() const = 0;
  virtual double xi_begin() const = 0;
  virtual double xi_end() const = 0;

  virtual SurfaceBasis basis_at(double xi) const = 0;
  virtual SpanWeights weights_at(double xi) const = 0;
  virtual std::optional<Projection> project(const Vec2& x_k) const = 0;
  virtual Aabb bounding_box(double inflate) const = 0;
  virtual bool is_rigid() const = 0;

  //! Rigid-body translation of a rigid patch; no-op for deformable strips.
  virtual void set_translation(const Vec2&) {}

  Vec2 position(double xi) const { return basis_at(xi).x; }
  int span_of(double xi) const;
};

//! Quadratic B-spline over an ordered strip of boundary nodes (open uniform
//! knot vector). Control points are the strip nodes themselves; the curve is
//! C1 across spans, which supplies the curvature terms of the contact
//! tangents. Call update() whenever nodal coordinates change.
class BsplineStrip final : public ContactSurface {
public:
  BsplineStrip(std::vector<int> node_ids, const std::vector<Vec2>& reference_coords);

  void update(const std::vector<Vec2>& current_coords);

  int span_count() const override { return n_spans_; }
  double xi_begin() const override { return 0.0; }
  double xi_end() const override { return static_cast<double>(n_spans_); }

  SurfaceBasis basis_at(double xi) const override;
  SpanWeights weights_at(double xi) const override;
  std::optional<Projection> project(const Vec2& x_k) const override;
  Aabb bounding_box(double inflate) const override;
  bool is_rigid() const override { return false; }

  const std::vector<int>& node_ids() const { return node_ids_; }

private:
  // basis of the 3 active functions on the span containing xi
  void eval_basis(double xi, int& span, std::array<double, 3>& N,
                  std::array<double, 3>& dN, std::array<double, 3>& ddN) const;

  std::vector<int> node_ids_;
  std::vector<Vec2> ref_;  // reference control points
  std::vector<Vec2> cur_;  // current control points
  std::vector<double> knots_;
  int n_spans_ = 0;
};

//! Rigid straight patch. Parametrized by arc length along the tangent;
//! the outward normal is the tangent rotated by -90 degrees, so orient the
//! tangent such that the normal faces the opposing body.
class RigidLine final : public ContactSurface {
public:
  RigidLine(const Vec2& origin, const Vec2& tangent, double xi_lo, double xi_hi);

  void set_translation(const Vec2& u) override { trans_ = u; }
  const Vec2& translation() const { return trans_; }
  const Vec2& normal() const { return n_; }
  const Vec2& tangent() const { return t_; }

  int span_count() const override { return 1; }
  double xi_begin() const override { return lo_; }
  double xi_end() const override { return hi_; }

  SurfaceBasis basis_at(double xi) const override;
  SpanWeights weights_at(double) const override { return {}; }
  std::optional<Projection> project(const Vec2& x_k) const override;
  Aabb bounding_box(double inflate) const override;
  bool is_rigid() const override { return true; }

private:
  Vec2 origin_, t_, n_, trans_{0, 0};
  double lo_, hi_;
};

//! Rigid circular patch, parametrized by arc length. outward = true gives a
//! normal pointing away from the center (convex body of radius R).
class RigidCircle final : public ContactSurface {
public:
  RigidCircle(const Vec2& center, double radius, bool outward = true);

  void set_translation(const Vec2& u) override { trans_ = u; }

  int span_count() const override { return 1; }
  double xi_begin() const override { return 0.0; }
  double xi_end() const override { return 2.0 * 3.14159265358979323846 * R_; }

  SurfaceBasis basis_at(double xi) const override;
  SpanWeights weights_at(double) const override { return {}; }
  std::optional<Projection> project(const Vec2& x_k) const override;
  Aabb bounding_box(double inflate) const override;
  bool is_rigid() const override { return true; }

private:
  Vec2 center_, trans_{0, 0};
  double R_;
  bool outward_;
};

//! Surface stretch of a converged projection (Eq. of the area map restricted
//! to the surface): current over reference arc-length measure.
inline double surface_stretch(const Projection& proj) { return proj.basis.J_cl; }

//! Project x_k onto the closest of several patches (smallest |g_n|; ties
//! broken by lowest patch index). Patches outside the broad-phase radius of
//! x_k are skipped. Returns nullopt when nothing is in range.
std::optional<std::pair<Projection, int>>
closest_point_projection(const Vec2& x_k,
                         const std::vector<const ContactSurface*>& patches,
                         double search_radius);

} // namespace adfric
