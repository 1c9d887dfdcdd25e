#include "symflow/flow/density.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace symflow::flow {

namespace {

// Dunavant degree-5 rule: barycentric points and weights summing to 1.
struct QuadPoint {
  double a, b, c, w;
};
constexpr double kA1 = 0.059715871789770, kB1 = 0.470142064105115;
constexpr double kA2 = 0.797426985353087, kB2 = 0.101286507323456;
constexpr double kW1 = 0.132394152788506, kW2 = 0.125939180544827;
constexpr std::array<QuadPoint, 7> kRule = {{{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225},
                                             {kA1, kB1, kB1, kW1},
                                             {kB1, kA1, kB1, kW1},
                                             {kB1, kB1, kA1, kW1},
                                             {kA2, kB2, kB2, kW2},
                                             {kB2, kA2, kB2, kW2},
                                             {kB2, kB2, kA2, kW2}}};

}  // namespace

double cutoff(double rho, double r) {
  if (rho <= r) return 1.0;
  if (rho >= 2.0 * r) return 0.0;
  const double x = (rho - r) / r;
  return 1.0 - x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

double chart_density(const std::vector<Vec4>& points, const std::vector<std::array<int, 3>>& triangles, double r,
                     bool use_cutoff) {
  if (!(r > 0.0)) throw std::invalid_argument("chart_density: r must be positive");
  const double norm = 1.0 / (4.0 * std::numbers::pi * r * r);
  double total = 0.0;
  for (const auto& t : triangles) {
    const Vec4& p0 = points[static_cast<std::size_t>(t[0])];
    const Vec4& p1 = points[static_cast<std::size_t>(t[1])];
    const Vec4& p2 = points[static_cast<std::size_t>(t[2])];
    if (use_cutoff) {
      const double reach = 2.0 * r + std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
      if (std::min({p0.norm(), p1.norm(), p2.norm()}) > reach) continue;
    }
    const Vec4 u = p1 - p0, v = p2 - p0;
    const double area = 0.5 * std::sqrt(std::max(0.0, u.squaredNorm() * v.squaredNorm() - std::pow(u.dot(v), 2)));
    double sum = 0.0;
    for (const auto& q : kRule) {
      const Vec4 x = q.a * p0 + q.b * p1 + q.c * p2;
      const double d2 = x.squaredNorm();
      const double phi = use_cutoff ? cutoff(std::sqrt(d2), r) : 1.0;
      if (phi > 0.0) sum += q.w * phi * std::exp(-d2 / (4.0 * r * r));
    }
    total += area * sum;
  }
  return norm * total;
}

double gaussian_density(const SurfaceMesh& mesh, const AmbientCP2& ambient, const Herm& x0, double r,
                        bool use_cutoff) {
  const double inj = ambient.injectivity_radius();
  if (!(r > 0.0) || !(2.0 * r < inj))
    throw std::invalid_argument("gaussian_density: need 0 < 2r < injectivity radius");
  const TangentBasis basis = ambient.tangent_basis(x0);
  std::vector<Vec4> pts(mesh.vertices.size());
  std::vector<bool> inside(mesh.vertices.size());
  // Triangles reaching towards the cut locus are dropped; with the cutoff they lie
  // outside its support anyway.
  const double chart_limit = 0.9 * inj;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    pts[i] = ambient.log_map(basis, mesh.vertices[i]);
    inside[i] = pts[i].norm() < chart_limit;
  }
  std::vector<std::array<int, 3>> tris;
  tris.reserve(mesh.triangles.size());
  for (const auto& t : mesh.triangles)
    if (inside[static_cast<std::size_t>(t[0])] && inside[static_cast<std::size_t>(t[1])] &&
        inside[static_cast<std::size_t>(t[2])])
      tris.push_back(t);
  return chart_density(pts, tris, r, use_cutoff);
}

DensityScan density_scan(const SurfaceMesh& mesh, const AmbientCP2& ambient, const Herm& x0,
                         const std::vector<double>& radii, double eps0) {
  DensityScan scan;
  for (double r : radii) {
    const double phi = gaussian_density(mesh, ambient, x0, r);
    scan.radii.push_back(r);
    scan.phi.push_back(phi);
    if (phi <= 1.0 + eps0 / 2.0 && (!scan.r0 || r > *scan.r0)) scan.r0 = r;
  }
  return scan;
}

}  // namespace symflow::flow
