#include "adfric/scenarios.hpp"

#include <cmath>

namespace adfric {

namespace {

double r_squared(const std::vector<double>& y, const std::vector<double>& fit) {
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= y.size();
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_tot += (y[i] - mean) * (y[i] - mean);
    ss_res += (y[i] - fit[i]) * (y[i] - fit[i]);
  }
  return ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
}

} // namespace

QuadraticFit fit_quadratic_xi(const std::vector<double>& F_t,
                              const std::vector<double>& L_c) {
  QuadraticFit fit;
  if (F_t.size() != L_c.size() || F_t.size() < 2) return fit;
  // least squares for L = a - b * F^2
  double s1 = static_cast<double>(F_t.size());
  double sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (std::size_t i = 0; i < F_t.size(); ++i) {
    const double x = F_t[i] * F_t[i];
    sx += x;
    sxx += x * x;
    sy += L_c[i];
    sxy += x * L_c[i];
  }
  const double det = s1 * sxx - sx * sx;
  if (std::abs(det) < 1e-300) return fit;
  fit.L_c0 = (sxx * sy - sx * sxy) / det;
  const double slope = (s1 * sxy - sx * sy) / det;
  fit.xi = -slope;
  std::vector<double> model(F_t.size());
  for (std::size_t i = 0; i < F_t.size(); ++i)
    model[i] = fit.L_c0 - fit.xi * F_t[i] * F_t[i];
  fit.r2 = r_squared(L_c, model);
  fit.ok = true;
  return fit;
}

PowerFit fit_power(const std::vector<double>& x, const std::vector<double>& y) {
  PowerFit fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    } else {
      ++fit.excluded;
    }
  }
  if (lx.size() < 2) return fit;
  const double n = static_cast<double>(lx.size());
  double sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sxx += lx[i] * lx[i];
    sy += ly[i];
    sxy += lx[i] * ly[i];
  }
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-300) return fit;
  fit.exponent = (n * sxy - sx * sy) / det;
  fit.ln_prefactor = (sy - fit.exponent * sx) / n;
  std::vector<double> model(lx.size());
  for (std::size_t i = 0; i < lx.size(); ++i)
    model[i] = fit.ln_prefactor + fit.exponent * lx[i];
  fit.r2 = r_squared(ly, model);
  fit.ok = true;
  return fit;
}

// Gamma* = d(dPi)/dL_peel via centered differences on the monotone samples,
// taken on a uniform L_peel grid (the raw per-step spacing aliases the
// front's discrete hops into the derivative)
std::vector<std::array<double, 2>>
fracture_energy_curve(const std::vector<StepSample>& series) {
  std::vector<std::array<double, 2>> pts; // (L_peel, dPi), strictly increasing L
  for (const auto& s : series) {
    const double dpi = s.Pi_ext - s.Pi_int;
    if (pts.empty() || s.L_peel > pts.back()[0] + 1e-12)
      pts.push_back({s.L_peel, dpi});
  }
  std::vector<std::array<double, 2>> gamma;
  if (pts.size() < 3) return gamma;

  const double spacing = 2.0;
  const double L0 = pts.front()[0], L1 = pts.back()[0];
  const int n = static_cast<int>((L1 - L0) / spacing);
  if (n < 3) return gamma;
  auto interp = [&](double L) {
    auto it = std::lower_bound(pts.begin(), pts.end(), L,
                               [](const auto& p, double v) { return p[0] < v; });
    if (it == pts.begin()) return (*it)[1];
    if (it == pts.end()) return pts.back()[1];
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double w = (L - a[0]) / (b[0] - a[0]);
    return a[1] + w * (b[1] - a[1]);
  };
  for (int i = 1; i + 1 < n; ++i) {
    const double L = L0 + i * spacing;
    gamma.push_back({L, (interp(L + spacing) - interp(L - spacing)) / (2.0 * spacing)});
  }
  return gamma;
}

ContactMeasures measure_contact(const Model& model, int pair_id, double ref_right_end) {
  ContactMeasures m;
  const ContactPair& pair = model.pairs[pair_id];
  const auto evals = evaluate_pass(pair, 0);
  const AdhesionParams& adh = pair.params.adhesion;

  // gap samples along the surface, ordered by current x for the span measure
  struct Sample {
    double x, X, gn, dA;
    ContactStatus status;
  };
  std::vector<Sample> samples;
  samples.reserve(evals.size());
  for (std::size_t i = 0; i < evals.size(); ++i) {
    Sample s;
    s.x = evals[i].x_k.x();
    s.X = evals[i].kb.X.x();
    s.gn = evals[i].in_range ? evals[i].proj.g_n : adh.g_far;
    s.dA = evals[i].dA;
    s.status = pair.states[0][i].status;
    samples.push_back(s);
  }

  double x_lo = 0.0, x_hi = 0.0, X_attach_max = -1e300;
  bool any = false;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    if (in_contact_area(s.gn, adh)) {
      ++m.n_contact;
      if (!any) {
        x_lo = x_hi = s.x;
        any = true;
      }
      x_lo = std::min(x_lo, s.x);
      x_hi = std::max(x_hi, s.x);
      X_attach_max = std::max(X_attach_max, s.X);
    }
    if (s.status == ContactStatus::stick) {
      ++m.n_stick;
      m.L_stick += s.dA;
    }
    if (s.status == ContactStatus::slide) ++m.n_slide;
  }

  // refine the contact edges by interpolating the g_n = g_area crossings of
  // neighboring quadrature points (the raw span jumps by the gp spacing)
  if (any) {
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      const Sample &a = samples[i], &b = samples[i + 1];
      const bool ca = in_contact_area(a.gn, adh), cb = in_contact_area(b.gn, adh);
      if (ca == cb) continue;
      const double denom = b.gn - a.gn;
      if (std::abs(denom) < 1e-300) continue;
      const double w = (adh.g_area - a.gn) / denom;
      const double xc = a.x + w * (b.x - a.x);
      x_lo = std::min(x_lo, xc);
      x_hi = std::max(x_hi, xc);
      const double Xc = a.X + w * (b.X - a.X);
      if (ca || cb) X_attach_max = std::max(X_attach_max, Xc);
    }
    m.L_c = x_hi - x_lo;
  }

  m.L_peel = any ? std::max(0.0, ref_right_end - X_attach_max) : ref_right_end;
  m.full_sliding = m.n_stick == 0 && m.n_slide > 0 && m.n_contact > 0;
  return m;
}

} // namespace adfric
