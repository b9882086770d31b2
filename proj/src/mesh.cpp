#include "adfric/mesh.hpp"
#include <functional>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace adfric {

void save_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_mesh: cannot open " + path);
  out.precision(17);
  out << mesh.node_count() << " " << mesh.element_count() << "\n";
  for (int i = 0; i < mesh.node_count(); ++i)
    out << i << " " << mesh.nodes[i].x() << " " << mesh.nodes[i].y() << "\n";
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Element& el = mesh.elements[e];
    out << e << " " << el.node_count();
    for (int a = 0; a < el.node_count(); ++a) out << " " << el.nodes[a];
    out << "\n";
  }
  for (const auto& [tag, strip] : mesh.boundary_strips) {
    out << "strip " << tag << " " << strip.size();
    for (int id : strip) out << " " << id;
    out << "\n";
  }
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_mesh: cannot open " + path);
  Mesh mesh;
  int nn, ne;
  in >> nn >> ne;
  if (!in) throw std::runtime_error("load_mesh: bad header");
  mesh.nodes.resize(nn);
  for (int i = 0; i < nn; ++i) {
    int id;
    double x, y;
    in >> id >> x >> y;
    mesh.nodes[id] = Vec2(x, y);
  }
  mesh.elements.resize(ne);
  for (int e = 0; e < ne; ++e) {
    int id, type;
    in >> id >> type;
    Element& el = mesh.elements[id];
    el.type = static_cast<ElemType>(type);
    for (int a = 0; a < el.node_count(); ++a) in >> el.nodes[a];
  }
  std::string word;
  while (in >> word) {
    if (word != "strip") throw std::runtime_error("load_mesh: expected strip line");
    std::string tag;
    std::size_t n;
    in >> tag >> n;
    std::vector<int> ids(n);
    for (auto& id : ids) in >> id;
    mesh.boundary_strips[tag] = std::move(ids);
  }
  return mesh;
}

GaussRule gauss_rule(int n) {
  GaussRule r;
  switch (n) {
    case 1:
      r.points = {0.0};
      r.weights = {2.0};
      break;
    case 2: {
      const double a = 1.0 / std::sqrt(3.0);
      r.points = {-a, a};
      r.weights = {1.0, 1.0};
      break;
    }
    case 3: {
      const double a = std::sqrt(3.0 / 5.0);
      r.points = {-a, 0.0, a};
      r.weights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    }
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
      r.points = {-b, -a, a, b};
      r.weights = {wb, wa, wa, wb};
      break;
    }
    default:
      throw std::invalid_argument("gauss_rule: unsupported order");
  }
  return r;
}

void shape_functions(ElemType type, double xi, double eta, double* N, double (*dN)[2]) {
  if (type == ElemType::Q1) {
    const double xs[4] = {-1, 1, 1, -1};
    const double ys[4] = {-1, -1, 1, 1};
    for (int a = 0; a < 4; ++a) {
      N[a] = 0.25 * (1 + xs[a] * xi) * (1 + ys[a] * eta);
      dN[a][0] = 0.25 * xs[a] * (1 + ys[a] * eta);
      dN[a][1] = 0.25 * ys[a] * (1 + xs[a] * xi);
    }
    return;
  }
  // Q2: tensor-product quadratic Lagrange, nodes at {-1,0,1}^2,
  // local index a = 3*j + i
  auto l = [](int i, double s) {
    return i == 0 ? 0.5 * s * (s - 1) : (i == 1 ? 1 - s * s : 0.5 * s * (s + 1));
  };
  auto dl = [](int i, double s) {
    return i == 0 ? s - 0.5 : (i == 1 ? -2 * s : s + 0.5);
  };
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) {
      const int a = 3 * j + i;
      N[a] = l(i, xi) * l(j, eta);
      dN[a][0] = dl(i, xi) * l(j, eta);
      dN[a][1] = l(i, xi) * dl(j, eta);
    }
}

namespace {

// assemble a structured grid of (nx*ny) quads from a node-position functor;
// grid index (i,j) with i along the first coordinate
Mesh structured_mesh(int nx, int ny, ElemType type,
                     const std::function<Vec2(double, double)>& map) {
  Mesh mesh;
  const int per = type == ElemType::Q1 ? 1 : 2;
  const int mx = per * nx + 1, my = per * ny + 1;
  mesh.nodes.resize(mx * my);
  for (int j = 0; j < my; ++j)
    for (int i = 0; i < mx; ++i)
      mesh.nodes[j * mx + i] =
          map(static_cast<double>(i) / (mx - 1), static_cast<double>(j) / (my - 1));

  mesh.elements.reserve(nx * ny);
  for (int ej = 0; ej < ny; ++ej)
    for (int ei = 0; ei < nx; ++ei) {
      Element el;
      el.type = type;
      const int i0 = per * ei, j0 = per * ej;
      auto gid = [&](int di, int dj) { return (j0 + dj) * mx + (i0 + di); };
      if (type == ElemType::Q1) {
        el.nodes = {gid(0, 0), gid(1, 0), gid(1, 1), gid(0, 1), 0, 0, 0, 0, 0};
      } else {
        for (int dj = 0; dj < 3; ++dj)
          for (int di = 0; di < 3; ++di) el.nodes[3 * dj + di] = gid(di, dj);
      }
      mesh.elements.push_back(el);
    }

  // boundary strips in counter-clockwise body orientation
  std::vector<int> bottom, right, top, left;
  for (int i = 0; i < mx; ++i) bottom.push_back(i);
  for (int j = 0; j < my; ++j) right.push_back(j * mx + (mx - 1));
  for (int i = mx - 1; i >= 0; --i) top.push_back((my - 1) * mx + i);
  for (int j = my - 1; j >= 0; --j) left.push_back(j * mx);
  mesh.boundary_strips["bottom"] = bottom;
  mesh.boundary_strips["right"] = right;
  mesh.boundary_strips["top"] = top;
  mesh.boundary_strips["left"] = left;
  return mesh;
}

} // namespace

Mesh make_rectangle_mesh(double x0, double y0, double lx, double ly, int nx, int ny,
                         ElemType type) {
  return structured_mesh(nx, ny, type, [&](double s, double t) {
    return Vec2(x0 + s * lx, y0 + t * ly);
  });
}

Mesh make_circular_segment_mesh(double c, double h, double y0, int nx, int ny,
                                ElemType type) {
  if (h <= 0 || c <= 0) throw std::invalid_argument("segment: c, h must be positive");
  const double R = (c * c + h * h) / (2.0 * h); // circle through chord ends and apex
  const double yc = y0 + h - R;                 // center below the chord
  const double phi = std::asin(c / R);          // half opening angle
  Mesh mesh = structured_mesh(nx, ny, type, [&](double s, double t) -> Vec2 {
    const double u = 2.0 * s - 1.0; // [-1,1] across the chord
    const Vec2 chord(u * c, y0);
    const double th = u * phi;
    const Vec2 arc(R * std::sin(th), yc + R * std::cos(th));
    return Vec2((1.0 - t) * chord + t * arc);
  });
  mesh.boundary_strips["base"] = mesh.boundary_strips["bottom"];
  mesh.boundary_strips["arc"] = mesh.boundary_strips["top"];
  mesh.boundary_strips.erase("bottom");
  mesh.boundary_strips.erase("top");
  return mesh;
}

void point_reflect_mesh(Mesh& mesh, const Vec2& center) {
  for (Vec2& x : mesh.nodes) x = 2.0 * center - x;
  // a point reflection preserves orientation; strips stay valid
}

} // namespace adfric
