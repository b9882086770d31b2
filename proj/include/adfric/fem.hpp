#pragma once

#include "adfric/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace adfric {

//! Compressible Neo-Hookean solid (Bonet & Wood form):
//!   psi = mu/2 (I1 - 3) - mu ln J + lambda/2 (ln J)^2
//! The nearly-incompressible variant integrates the lambda (dilatational)
//! stress and stiffness with a 1-point rule to avoid volumetric locking.
struct Material {
  enum class Variant { standard_compressible, nearly_incompressible_reduced_dilatation };

  double E = 1.0;
  double nu = 0.3;
  Variant variant = Variant::standard_compressible;

  double mu() const { return E / (2.0 * (1.0 + nu)); }
  double lambda() const { return E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
};

struct ElementInversion : std::runtime_error {
  explicit ElementInversion(int elem)
      : std::runtime_error("element inversion (det F <= 0) in element " +
                           std::to_string(elem)),
        element(elem) {}
  int element;
};

using Tangent4 = Eigen::Matrix<double, 4, 4>; // dP/dF, index 2*i+J by 2*k+L

//! First Piola-Kirchhoff stress and material tangent, plane strain
//! (out-of-plane stretch 1). Throws std::domain_error for det F <= 0.
void neo_hookean_stress_and_tangent(const Mat2& F, const Material& m, Mat2& P,
                                    Tangent4& A);
double neo_hookean_energy(const Mat2& F, const Material& m);

// deviatoric/dilatational split used for selective reduced integration
void nh_deviatoric(const Mat2& F, double mu, Mat2& P, Tangent4& A);
void nh_dilatational(const Mat2& F, double lambda, Mat2& P, Tangent4& A);

//! Internal force and consistent stiffness of one element under the nodal
//! displacement vector u (global layout, 2 dofs per node).
void element_force_and_stiffness(const Mesh& mesh, int elem_id, const Material& m,
                                 const Eigen::VectorXd& u, Eigen::VectorXd& f_e,
                                 Eigen::MatrixXd& K_e);

double element_energy(const Mesh& mesh, int elem_id, const Material& m,
                      const Eigen::VectorXd& u);

//! Cauchy stress at a parent-space point of an element.
Mat2 cauchy_stress(const Mesh& mesh, int elem_id, const Material& m,
                   const Eigen::VectorXd& u, double xi, double eta);

//! Assemble all bulk contributions into the global force vector and,
//! if K is non-null, stiffness triplets. Deterministic element order.
void assemble_bulk(const Mesh& mesh, const Material& m, const Eigen::VectorXd& u,
                   Eigen::VectorXd& f_int,
                   std::vector<Eigen::Triplet<double>>* K);

double bulk_energy(const Mesh& mesh, const Material& m, const Eigen::VectorXd& u);

} // namespace adfric
