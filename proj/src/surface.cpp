#include "adfric/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adfric {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::optional<double> curvature_corrected_metric(const SurfaceBasis& b, double g_n) {
  const double denom = b.a11 - g_n * b.n.dot(b.a11_vec);
  if (std::abs(denom) < 1e-12 * b.a11) return std::nullopt;
  return 1.0 / denom;
}

int ContactSurface::span_of(double xi) const {
  const double lo = xi_begin(), hi = xi_end();
  const double w = (hi - lo) / span_count();
  int s = static_cast<int>(std::floor((xi - lo) / w));
  return std::clamp(s, 0, span_count() - 1);
}

// ---------------------------------------------------------------------------
// BsplineStrip
// ---------------------------------------------------------------------------

BsplineStrip::BsplineStrip(std::vector<int> node_ids,
                           const std::vector<Vec2>& reference_coords)
    : node_ids_(std::move(node_ids)) {
  const int n_ctrl = static_cast<int>(node_ids_.size());
  if (n_ctrl < 3)
    throw std::invalid_argument("BsplineStrip: need at least 3 control nodes");
  n_spans_ = n_ctrl - 2;

  // open uniform knot vector [0,0,0,1,...,n-1,n,n,n]
  knots_.resize(n_ctrl + 3);
  for (int i = 0; i < 3; ++i) knots_[i] = 0.0;
  for (int k = 1; k < n_spans_; ++k) knots_[2 + k] = static_cast<double>(k);
  for (int i = 0; i < 3; ++i) knots_[n_ctrl + i] = static_cast<double>(n_spans_);

  ref_.resize(n_ctrl);
  cur_.resize(n_ctrl);
  for (int i = 0; i < n_ctrl; ++i) ref_[i] = reference_coords[node_ids_[i]];
  cur_ = ref_;
}

void BsplineStrip::update(const std::vector<Vec2>& current_coords) {
  for (std::size_t i = 0; i < node_ids_.size(); ++i)
    cur_[i] = current_coords[node_ids_[i]];
}

void BsplineStrip::eval_basis(double xi, int& span, std::array<double, 3>& N,
                              std::array<double, 3>& dN,
                              std::array<double, 3>& ddN) const {
  span = span_of(xi);
  const int m = span + 2; // knot index with knots_[m] <= xi <= knots_[m+1]

  // degree-1 hat functions restricted to span m
  auto hat = [&](int j) -> double {
    if (j == m) {
      const double d = knots_[j + 1] - knots_[j];
      return d > 0.0 ? (xi - knots_[j]) / d : 0.0;
    }
    if (j == m - 1) {
      const double d = knots_[j + 2] - knots_[j + 1];
      return d > 0.0 ? (knots_[j + 2] - xi) / d : 0.0;
    }
    return 0.0;
  };
  auto dhat = [&](int j) -> double {
    if (j == m) {
      const double d = knots_[j + 1] - knots_[j];
      return d > 0.0 ? 1.0 / d : 0.0;
    }
    if (j == m - 1) {
      const double d = knots_[j + 2] - knots_[j + 1];
      return d > 0.0 ? -1.0 / d : 0.0;
    }
    return 0.0;
  };

  for (int r = 0; r < 3; ++r) {
    const int j = span + r;
    const double d1 = knots_[j + 2] - knots_[j];
    const double d2 = knots_[j + 3] - knots_[j + 1];
    const double w1 = d1 > 0.0 ? 1.0 / d1 : 0.0;
    const double w2 = d2 > 0.0 ? 1.0 / d2 : 0.0;
    N[r] = (xi - knots_[j]) * w1 * hat(j) + (knots_[j + 3] - xi) * w2 * hat(j + 1);
    dN[r] = 2.0 * (w1 * hat(j) - w2 * hat(j + 1));
    ddN[r] = 2.0 * (w1 * dhat(j) - w2 * dhat(j + 1));
  }
}

SurfaceBasis BsplineStrip::basis_at(double xi) const {
  int span;
  std::array<double, 3> N, dN, ddN;
  eval_basis(xi, span, N, dN, ddN);

  SurfaceBasis b;
  b.x.setZero();
  b.a1.setZero();
  b.a11_vec.setZero();
  b.X.setZero();
  b.A1.setZero();
  b.A11_vec.setZero();
  for (int r = 0; r < 3; ++r) {
    const Vec2& pc = cur_[span + r];
    const Vec2& pr = ref_[span + r];
    b.x += N[r] * pc;
    b.a1 += dN[r] * pc;
    b.a11_vec += ddN[r] * pc;
    b.X += N[r] * pr;
    b.A1 += dN[r] * pr;
    b.A11_vec += ddN[r] * pr;
  }
  b.a11 = b.a1.squaredNorm();
  const double len = std::sqrt(b.a11);
  const double ref_len = b.A1.norm();
  if (len < 1e-14 || ref_len < 1e-14)
    throw std::runtime_error("BsplineStrip: degenerate surface metric");
  b.inv_a11 = 1.0 / b.a11;
  b.a1_con = b.a1 * b.inv_a11;
  b.n = rot90cw(b.a1) / len;
  b.J_cl = len / ref_len;
  // dJ_cl/dxi = J_cl * (a^1.a_{1,1} - A^1.A_{1,1})
  b.J_cl_xi = b.J_cl * (b.a1_con.dot(b.a11_vec) -
                        b.A1.dot(b.A11_vec) / b.A1.squaredNorm());
  return b;
}

SpanWeights BsplineStrip::weights_at(double xi) const {
  int span;
  SpanWeights w;
  eval_basis(xi, span, w.N, w.dN, w.ddN);
  w.count = 3;
  for (int r = 0; r < 3; ++r) w.nodes[r] = node_ids_[span + r];
  return w;
}

std::optional<Projection> BsplineStrip::project(const Vec2& x_k) const {
  const double lo = 0.0, hi = static_cast<double>(n_spans_);

  // seed at the parametric midpoint of the span whose control midpoint is
  // nearest; refine by Newton on (x_p - x_k).a1 = 0
  auto seed_scan = [&](int samples_per_span) {
    double best = std::numeric_limits<double>::max();
    double xi_best = 0.5 * (lo + hi);
    for (int s = 0; s < n_spans_; ++s) {
      for (int q = 0; q < samples_per_span; ++q) {
        const double xi = s + (q + 0.5) / samples_per_span;
        const double d2 = (basis_at(xi).x - x_k).squaredNorm();
        if (d2 < best) {
          best = d2;
          xi_best = xi;
        }
      }
    }
    return xi_best;
  };

  const double scale = (bounding_box(0).hi - bounding_box(0).lo).norm() + 1e-30;

  auto newton = [&](double xi, bool& ok) {
    ok = false;
    for (int it = 0; it < 50; ++it) {
      const SurfaceBasis b = basis_at(xi);
      const Vec2 d = b.x - x_k;
      const double f = d.dot(b.a1);
      const double fp = b.a11 + d.dot(b.a11_vec);
      double dxi = (std::abs(fp) > 1e-30) ? -f / fp : 0.0;
      dxi = std::clamp(dxi, -0.5, 0.5);
      double xi_new = std::clamp(xi + dxi, lo, hi);
      const bool at_bound = (xi_new == lo || xi_new == hi);
      if (std::abs(xi_new - xi) < 1e-14 * std::max(1.0, hi)) {
        xi = xi_new;
        const SurfaceBasis bb = basis_at(xi);
        const double res = std::abs((bb.x - x_k).dot(bb.a1));
        const double tol = 1e-10 * std::sqrt(bb.a11) * scale;
        if (res <= tol || at_bound) {
          ok = true;
          return xi;
        }
      }
      xi = xi_new;
    }
    return xi;
  };

  bool ok = false;
  double xi = newton(seed_scan(1), ok);
  if (!ok) xi = newton(seed_scan(5), ok);

  Projection proj;
  proj.converged = ok;
  if (!ok) return std::nullopt;

  proj.xi = xi;
  proj.patch = span_of(xi);
  proj.basis = basis_at(xi);
  proj.x_p = proj.basis.x;
  proj.gap_vec = x_k - proj.x_p;
  proj.g_n = proj.gap_vec.dot(proj.basis.n);
  const double ortho = std::abs(proj.gap_vec.dot(proj.basis.a1));
  proj.clamped = (xi <= lo || xi >= hi) &&
                 ortho > 1e-9 * std::sqrt(proj.basis.a11) * scale;
  return proj;
}

Aabb BsplineStrip::bounding_box(double inflate) const {
  // the curve lies in the convex hull of its control points
  Aabb box;
  box.lo = Vec2(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
  box.hi = -box.lo;
  for (const Vec2& p : cur_) {
    box.lo = box.lo.cwiseMin(p);
    box.hi = box.hi.cwiseMax(p);
  }
  box.lo.array() -= inflate;
  box.hi.array() += inflate;
  return box;
}

// ---------------------------------------------------------------------------
// RigidLine
// ---------------------------------------------------------------------------

RigidLine::RigidLine(const Vec2& origin, const Vec2& tangent, double xi_lo, double xi_hi)
    : origin_(origin), t_(tangent.normalized()), n_(rot90cw(tangent.normalized())),
      lo_(xi_lo), hi_(xi_hi) {}

SurfaceBasis RigidLine::basis_at(double xi) const {
  SurfaceBasis b;
  b.x = origin_ + trans_ + xi * t_;
  b.X = b.x;
  b.a1 = t_;
  b.a11 = 1.0;
  b.inv_a11 = 1.0;
  b.a1_con = t_;
  b.n = n_;
  b.a11_vec.setZero();
  b.A1 = t_;
  b.A11_vec.setZero();
  b.J_cl = 1.0;
  b.J_cl_xi = 0.0;
  return b;
}

std::optional<Projection> RigidLine::project(const Vec2& x_k) const {
  const double xi_raw = (x_k - origin_ - trans_).dot(t_);
  const double xi = std::clamp(xi_raw, lo_, hi_);
  Projection proj;
  proj.xi = xi;
  proj.patch = 0;
  proj.basis = basis_at(xi);
  proj.x_p = proj.basis.x;
  proj.gap_vec = x_k - proj.x_p;
  proj.g_n = proj.gap_vec.dot(proj.basis.n);
  proj.clamped = xi != xi_raw;
  return proj;
}

Aabb RigidLine::bounding_box(double inflate) const {
  const Vec2 a = origin_ + trans_ + lo_ * t_;
  const Vec2 b = origin_ + trans_ + hi_ * t_;
  Aabb box;
  box.lo = a.cwiseMin(b).array() - inflate;
  box.hi = a.cwiseMax(b).array() + inflate;
  return box;
}

// ---------------------------------------------------------------------------
// RigidCircle
// ---------------------------------------------------------------------------

RigidCircle::RigidCircle(const Vec2& center, double radius, bool outward)
    : center_(center), R_(radius), outward_(outward) {}

SurfaceBasis RigidCircle::basis_at(double xi) const {
  const double s = outward_ ? 1.0 : -1.0;
  const double th = s * xi / R_;
  const Vec2 rad(std::cos(th), std::sin(th));
  SurfaceBasis b;
  b.x = center_ + trans_ + R_ * rad;
  b.X = b.x;
  b.a1 = s * Vec2(-rad.y(), rad.x());
  b.a11 = 1.0;
  b.inv_a11 = 1.0;
  b.a1_con = b.a1;
  b.n = s * rad;
  b.a11_vec = -rad / R_;
  b.A1 = b.a1;
  b.A11_vec = b.a11_vec;
  b.J_cl = 1.0;
  b.J_cl_xi = 0.0;
  return b;
}

std::optional<Projection> RigidCircle::project(const Vec2& x_k) const {
  const double s = outward_ ? 1.0 : -1.0;
  const Vec2 d = x_k - center_ - trans_;
  const double r = d.norm();
  if (r < 1e-12 * R_) return std::nullopt; // center: projection undefined
  double th = std::atan2(d.y(), d.x());
  if (th < 0.0) th += 2.0 * kPi;
  Projection proj;
  proj.xi = s > 0 ? th * R_ : (2.0 * kPi - th) * R_;
  proj.patch = 0;
  proj.basis = basis_at(proj.xi);
  proj.x_p = proj.basis.x;
  proj.gap_vec = x_k - proj.x_p;
  proj.g_n = proj.gap_vec.dot(proj.basis.n);
  return proj;
}

Aabb RigidCircle::bounding_box(double inflate) const {
  Aabb box;
  box.lo = center_ + trans_ - Vec2(R_ + inflate, R_ + inflate);
  box.hi = center_ + trans_ + Vec2(R_ + inflate, R_ + inflate);
  return box;
}

// ---------------------------------------------------------------------------

std::optional<std::pair<Projection, int>>
closest_point_projection(const Vec2& x_k,
                         const std::vector<const ContactSurface*>& patches,
                         double search_radius) {
  std::optional<std::pair<Projection, int>> best;
  for (int i = 0; i < static_cast<int>(patches.size()); ++i) {
    if (!patches[i]->bounding_box(search_radius).contains(x_k)) continue;
    auto proj = patches[i]->project(x_k);
    if (!proj || !proj->converged) continue;
    if (!best || std::abs(proj->g_n) < std::abs(best->first.g_n))
      best = std::make_pair(*proj, i);
  }
  return best;
}

} // namespace adfric
