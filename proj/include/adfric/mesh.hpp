#pragma once

#include "adfric/surface.hpp"

#include <map>
#include <string>
#include <vector>

namespace adfric {

enum class ElemType { Q1 = 4, Q2 = 9 };

struct Element {
  ElemType type = ElemType::Q1;
  std::array<int, 9> nodes{}; // first 4 (Q1) or 9 (Q2) used
  int node_count() const { return static_cast<int>(type); }
};

//! Plane-strain quad mesh with tagged boundary strips. Boundary strips are
//! ordered node paths; contact strips follow the counter-clockwise
//! orientation of the body so that the outward normal rule holds.
struct Mesh {
  std::vector<Vec2> nodes; // reference coordinates
  std::vector<Element> elements;
  std::map<std::string, std::vector<int>> boundary_strips; // tag -> ordered node ids

  int node_count() const { return static_cast<int>(nodes.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }
};

//! Plain-text mesh exchange format:
//!   line 1: <n_nodes> <n_elements>
//!   then   "id x y" per node, "id type n1..n9" per element (type 4 or 9),
//!   then   one line per boundary strip: "strip <tag> <n> id..."
void save_mesh(const Mesh& mesh, const std::string& path);
Mesh load_mesh(const std::string& path);

//! 1D Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> points, weights;
};
GaussRule gauss_rule(int n);

//! Shape functions and parent-space gradients of quad elements.
//! N has node_count entries; dN is node_count x 2.
void shape_functions(ElemType type, double xi, double eta, double* N, double (*dN)[2]);

// structured generators (counter-clockwise boundary tags: "bottom", "right",
// "top", "left" for the rectangle; segment generators tag "base" and "arc")
Mesh make_rectangle_mesh(double x0, double y0, double lx, double ly, int nx, int ny,
                         ElemType type);

//! Circular-segment body: chord of half-width c on y = y0, apex at height h.
//! Structured nx x ny grid blended between chord and arc.
Mesh make_circular_segment_mesh(double c, double h, double y0, int nx, int ny,
                                ElemType type);

//! Rigid transform applied to every node (point reflection when s = -1):
//! x -> center + s * (x - center).
void point_reflect_mesh(Mesh& mesh, const Vec2& center);

} // namespace adfric
