#include "adfric/fem.hpp"

#include <cmath>

namespace adfric {

namespace {

inline Mat2 inverse_transpose(const Mat2& F, double detF) {
  Mat2 Fit;
  Fit << F(1, 1), -F(1, 0), -F(0, 1), F(0, 0);
  return Fit / detF;
}

inline int idx(int i, int J) { return 2 * i + J; }

} // namespace

void nh_deviatoric(const Mat2& F, double mu, Mat2& P, Tangent4& A) {
  const double detF = F.determinant();
  if (detF <= 0.0) throw std::domain_error("nh_deviatoric: det F <= 0");
  const Mat2 Fit = inverse_transpose(F, detF);
  P = mu * (F - Fit);
  for (int i = 0; i < 2; ++i)
    for (int J = 0; J < 2; ++J)
      for (int k = 0; k < 2; ++k)
        for (int L = 0; L < 2; ++L)
          A(idx(i, J), idx(k, L)) =
              mu * ((i == k && J == L ? 1.0 : 0.0) + Fit(i, L) * Fit(k, J));
}

void nh_dilatational(const Mat2& F, double lambda, Mat2& P, Tangent4& A) {
  const double detF = F.determinant();
  if (detF <= 0.0) throw std::domain_error("nh_dilatational: det F <= 0");
  const double lnJ = std::log(detF);
  const Mat2 Fit = inverse_transpose(F, detF);
  P = lambda * lnJ * Fit;
  for (int i = 0; i < 2; ++i)
    for (int J = 0; J < 2; ++J)
      for (int k = 0; k < 2; ++k)
        for (int L = 0; L < 2; ++L)
          A(idx(i, J), idx(k, L)) =
              lambda * (Fit(i, J) * Fit(k, L) - lnJ * Fit(i, L) * Fit(k, J));
}

void neo_hookean_stress_and_tangent(const Mat2& F, const Material& m, Mat2& P,
                                    Tangent4& A) {
  Mat2 Pv;
  Tangent4 Av;
  nh_deviatoric(F, m.mu(), P, A);
  nh_dilatational(F, m.lambda(), Pv, Av);
  P += Pv;
  A += Av;
}

double neo_hookean_energy(const Mat2& F, const Material& m) {
  const double detF = F.determinant();
  if (detF <= 0.0) throw std::domain_error("neo_hookean_energy: det F <= 0");
  const double lnJ = std::log(detF);
  const double I1 = F.squaredNorm() + 1.0; // plane strain: F_33 = 1
  return 0.5 * m.mu() * (I1 - 3.0) - m.mu() * lnJ + 0.5 * m.lambda() * lnJ * lnJ;
}

namespace {

struct GpData {
  double w;             // quadrature weight * detJ_ref
  Eigen::Matrix<double, 9, 2> dNdX; // reference gradients (rows used: node_count)
};

// reference-configuration shape gradients and measure at one parent point
GpData gp_data(const Mesh& mesh, const Element& el, double xi, double eta, double w,
               int elem_id) {
  double N[9];
  double dN[9][2];
  shape_functions(el.type, xi, eta, N, dN);
  Mat2 J = Mat2::Zero(); // dX/dxi
  const int n = el.node_count();
  for (int a = 0; a < n; ++a)
    J += mesh.nodes[el.nodes[a]] * Eigen::RowVector2d(dN[a][0], dN[a][1]);
  const double detJ = J.determinant();
  if (detJ <= 0.0) throw ElementInversion(elem_id);
  const Mat2 Jinv = J.inverse();
  GpData g;
  g.w = w * detJ;
  g.dNdX.setZero();
  for (int a = 0; a < n; ++a)
    g.dNdX.row(a) = Eigen::RowVector2d(dN[a][0], dN[a][1]) * Jinv;
  return g;
}

Mat2 def_gradient(const Element& el, const GpData& g,
                  const Eigen::VectorXd& u) {
  Mat2 F = Mat2::Identity();
  for (int a = 0; a < el.node_count(); ++a) {
    const int n = el.nodes[a];
    F += Vec2(u[2 * n], u[2 * n + 1]) * g.dNdX.row(a);
  }
  return F;
}

template <class Fn>
void for_each_gp(const Mesh& mesh, int elem_id, const Material& m, Fn&& fn) {
  const Element& el = mesh.elements[elem_id];
  const GaussRule rule = gauss_rule(el.type == ElemType::Q1 ? 2 : 3);
  const bool reduced =
      m.variant == Material::Variant::nearly_incompressible_reduced_dilatation;
  for (std::size_t q2 = 0; q2 < rule.points.size(); ++q2)
    for (std::size_t q1 = 0; q1 < rule.points.size(); ++q1) {
      const GpData g = gp_data(mesh, el, rule.points[q1], rule.points[q2],
                               rule.weights[q1] * rule.weights[q2], elem_id);
      fn(g, /*dev=*/true, /*vol=*/!reduced);
    }
  if (reduced) {
    const GpData g = gp_data(mesh, el, 0.0, 0.0, 4.0, elem_id);
    fn(g, /*dev=*/false, /*vol=*/true);
  }
}

} // namespace

void element_force_and_stiffness(const Mesh& mesh, int elem_id, const Material& m,
                                 const Eigen::VectorXd& u, Eigen::VectorXd& f_e,
                                 Eigen::MatrixXd& K_e) {
  const Element& el = mesh.elements[elem_id];
  const int n = el.node_count();
  f_e.setZero(2 * n);
  K_e.setZero(2 * n, 2 * n);

  for_each_gp(mesh, elem_id, m, [&](const GpData& g, bool dev, bool vol) {
    const Mat2 F = def_gradient(el, g, u);
    if (F.determinant() <= 0.0) throw ElementInversion(elem_id);
    Mat2 P = Mat2::Zero();
    Tangent4 A = Tangent4::Zero();
    Mat2 Pp;
    Tangent4 Ap;
    if (dev) {
      nh_deviatoric(F, m.mu(), Pp, Ap);
      P += Pp;
      A += Ap;
    }
    if (vol) {
      nh_dilatational(F, m.lambda(), Pp, Ap);
      P += Pp;
      A += Ap;
    }
    for (int a = 0; a < n; ++a) {
      f_e.segment<2>(2 * a) += g.w * P * g.dNdX.row(a).transpose();
      for (int b = 0; b < n; ++b) {
        Mat2 Kab = Mat2::Zero();
        for (int i = 0; i < 2; ++i)
          for (int k = 0; k < 2; ++k) {
            double s = 0.0;
            for (int J = 0; J < 2; ++J)
              for (int L = 0; L < 2; ++L)
                s += g.dNdX(a, J) * A(idx(i, J), idx(k, L)) * g.dNdX(b, L);
            Kab(i, k) = s;
          }
        K_e.block<2, 2>(2 * a, 2 * b) += g.w * Kab;
      }
    }
  });
}

double element_energy(const Mesh& mesh, int elem_id, const Material& m,
                      const Eigen::VectorXd& u) {
  const Element& el = mesh.elements[elem_id];
  double W = 0.0;
  for_each_gp(mesh, elem_id, m, [&](const GpData& g, bool dev, bool vol) {
    const Mat2 F = def_gradient(el, g, u);
    const double detF = F.determinant();
    if (detF <= 0.0) throw ElementInversion(elem_id);
    const double lnJ = std::log(detF);
    double psi = 0.0;
    if (dev) psi += 0.5 * m.mu() * (F.squaredNorm() + 1.0 - 3.0) - m.mu() * lnJ;
    if (vol) psi += 0.5 * m.lambda() * lnJ * lnJ;
    W += g.w * psi;
  });
  return W;
}

Mat2 cauchy_stress(const Mesh& mesh, int elem_id, const Material& m,
                   const Eigen::VectorXd& u, double xi, double eta) {
  const Element& el = mesh.elements[elem_id];
  const GpData g = gp_data(mesh, el, xi, eta, 1.0, elem_id);
  const Mat2 F = def_gradient(el, g, u);
  Mat2 P;
  Tangent4 A;
  neo_hookean_stress_and_tangent(F, m, P, A);
  return P * F.transpose() / F.determinant();
}

void assemble_bulk(const Mesh& mesh, const Material& m, const Eigen::VectorXd& u,
                   Eigen::VectorXd& f_int,
                   std::vector<Eigen::Triplet<double>>* K) {
  Eigen::VectorXd f_e;
  Eigen::MatrixXd K_e;
  for (int e = 0; e < mesh.element_count(); ++e) {
    element_force_and_stiffness(mesh, e, m, u, f_e, K_e);
    const Element& el = mesh.elements[e];
    const int n = el.node_count();
    for (int a = 0; a < n; ++a) {
      f_int.segment<2>(2 * el.nodes[a]) += f_e.segment<2>(2 * a);
      if (K)
        for (int b = 0; b < n; ++b)
          for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k)
              K->emplace_back(2 * el.nodes[a] + i, 2 * el.nodes[b] + k,
                              K_e(2 * a + i, 2 * b + k));
    }
  }
}

double bulk_energy(const Mesh& mesh, const Material& m, const Eigen::VectorXd& u) {
  double W = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) W += element_energy(mesh, e, m, u);
  return W;
}

} // namespace adfric
