#include "symflow/flow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "symflow/flow/geometry.hpp"

namespace symflow::flow {

namespace {

double tri_area(const Herm& a, const Herm& b, const Herm& c, double s) {
  const Herm u = s * (b - a);
  const Herm v = s * (c - a);
  const double uu = frob_dot(u, u), vv = frob_dot(v, v), uv = frob_dot(u, v);
  return 0.5 * std::sqrt(std::max(0.0, uu * vv - uv * uv));
}

// Geodesic icosahedral grid of the given frequency on the unit sphere, outward oriented.
void icosphere(int freq, std::vector<Eigen::Vector3d>& pts, std::vector<std::array<int, 3>>& tris) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  const std::array<Eigen::Vector3d, 12> v = {{{-1, t, 0},
                                              {1, t, 0},
                                              {-1, -t, 0},
                                              {1, -t, 0},
                                              {0, -1, t},
                                              {0, 1, t},
                                              {0, -1, -t},
                                              {0, 1, -t},
                                              {t, 0, -1},
                                              {t, 0, 1},
                                              {-t, 0, -1},
                                              {-t, 0, 1}}};
  const int faces[20][3] = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
                            {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
                            {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  // Vertices are keyed by their barycentric weights on the icosahedron's corners so
  // that points on shared edges and corners are created once.
  std::map<std::vector<std::pair<int, int>>, int> ids;
  pts.clear();
  tris.clear();
  for (const auto& f : faces) {
    std::vector<std::vector<int>> idx(static_cast<std::size_t>(freq + 1));
    for (int i = 0; i <= freq; ++i) {
      for (int j = 0; j <= freq - i; ++j) {
        const int k = freq - i - j;
        std::vector<std::pair<int, int>> key;
        if (i > 0) key.emplace_back(f[0], i);
        if (j > 0) key.emplace_back(f[1], j);
        if (k > 0) key.emplace_back(f[2], k);
        std::sort(key.begin(), key.end());
        auto [it, inserted] = ids.try_emplace(key, static_cast<int>(pts.size()));
        if (inserted) pts.push_back(((i * v[f[0]] + j * v[f[1]] + k * v[f[2]]) / freq).normalized());
        idx[static_cast<std::size_t>(i)].push_back(it->second);
      }
    }
    auto at = [&](int i, int j) { return idx[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
    for (int i = 0; i < freq; ++i) {
      for (int j = 0; j < freq - i; ++j) {
        tris.push_back({at(i, j), at(i + 1, j), at(i, j + 1)});
        if (i + j < freq - 1) tris.push_back({at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)});
      }
    }
  }
  const auto& f0 = tris.front();
  const Eigen::Vector3d& a = pts[static_cast<std::size_t>(f0[0])];
  const Eigen::Vector3d& b = pts[static_cast<std::size_t>(f0[1])];
  const Eigen::Vector3d& c = pts[static_cast<std::size_t>(f0[2])];
  if (a.dot((b - a).cross(c - a)) < 0.0)
    for (auto& tr : tris) std::swap(tr[1], tr[2]);
}

// Sum over triangles of omega(F_b - F_a, F_c - F_a) at P_a; positive for a
// positively oriented symplectic surface.
double symplectic_orientation(const SurfaceMesh& mesh, const AmbientCP2& ambient) {
  double total = 0.0;
  for (const auto& t : mesh.triangles) {
    const Herm& pa = mesh.vertices[static_cast<std::size_t>(t[0])];
    const Herm x = AmbientCP2::tangent_projection(pa, mesh.vertices[static_cast<std::size_t>(t[1])] - pa);
    const Herm y = AmbientCP2::tangent_projection(pa, mesh.vertices[static_cast<std::size_t>(t[2])] - pa);
    total += ambient.scale() * ambient.scale() * frob_dot(AmbientCP2::apply_j(pa, x), y);
  }
  return total;
}

SurfaceMesh line_mesh(int freq, double amplitude) {
  std::vector<Eigen::Vector3d> pts;
  SurfaceMesh mesh;
  icosphere(freq, pts, mesh.triangles);
  mesh.vertices.reserve(pts.size());
  for (const auto& n : pts) {
    const Vec4 x = hopf_lift(n);
    const std::complex<double> z0(x[0], x[1]);
    const std::complex<double> z1(x[2], x[3]);
    mesh.vertices.push_back(projector(CVec3(z0, z1, amplitude * std::conj(z0) * z1 * z1)));
  }
  return mesh;
}

SurfaceMesh torus_mesh(int m, const TorusParams& tp) {
  SurfaceMesh mesh;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double t = two_pi * i / m;
      const double u = two_pi * j / m;
      const double r1 = tp.r1 * (1.0 + tp.amplitude * std::cos(tp.p * t + tp.q * u));
      mesh.vertices.push_back(projector(CVec3(1.0, std::polar(r1, t), std::polar(tp.r2, u))));
    }
  }
  auto id = [m](int i, int j) { return ((i + m) % m) * m + (j + m) % m; };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return mesh;
}

}  // namespace

MeshTopology MeshTopology::build(const SurfaceMesh& mesh, int min_points) {
  const std::size_t n = mesh.vertices.size();
  MeshTopology topo;
  std::vector<std::set<int>> nb(n);
  topo.incident.resize(n);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    for (int a = 0; a < 3; ++a) {
      const auto va = static_cast<std::size_t>(tr[static_cast<std::size_t>(a)]);
      topo.incident[va].push_back(static_cast<int>(t));
      for (int b = 0; b < 3; ++b)
        if (a != b) nb[va].insert(tr[static_cast<std::size_t>(b)]);
    }
  }
  topo.one_ring.resize(n);
  for (std::size_t i = 0; i < n; ++i) topo.one_ring[i].assign(nb[i].begin(), nb[i].end());

  topo.stencil.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::set<int> seen{static_cast<int>(i)};
    std::vector<int> frontier{static_cast<int>(i)};
    std::vector<int> out;
    while (static_cast<int>(out.size()) < min_points && !frontier.empty()) {
      std::vector<int> next;
      for (int v : frontier)
        for (int w : topo.one_ring[static_cast<std::size_t>(v)])
          if (seen.insert(w).second) next.push_back(w);
      out.insert(out.end(), next.begin(), next.end());
      frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    topo.stencil[i] = std::move(out);
  }
  return topo;
}

std::string topology_defect(const SurfaceMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  std::map<std::pair<int, int>, int> directed;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    for (int a = 0; a < 3; ++a) {
      const int u = tr[static_cast<std::size_t>(a)];
      const int v = tr[static_cast<std::size_t>((a + 1) % 3)];
      if (u < 0 || u >= n || v < 0 || v >= n || u == v) {
        std::ostringstream os;
        os << "triangle " << t << " has an invalid vertex index";
        return os.str();
      }
      ++directed[{u, v}];
    }
  }
  for (const auto& [e, count] : directed) {
    if (count != 1 || directed.find({e.second, e.first}) == directed.end()) {
      std::ostringstream os;
      os << "edge (" << e.first << ", " << e.second << ") is "
         << (count != 1 ? "repeated with the same orientation" : "a boundary edge");
      return os.str();
    }
  }
  return {};
}

int euler_characteristic(const SurfaceMesh& mesh) {
  std::set<std::pair<int, int>> edges;
  for (const auto& tr : mesh.triangles)
    for (int a = 0; a < 3; ++a) {
      const int u = tr[static_cast<std::size_t>(a)];
      const int v = tr[static_cast<std::size_t>((a + 1) % 3)];
      edges.insert({std::min(u, v), std::max(u, v)});
    }
  return static_cast<int>(mesh.vertices.size()) - static_cast<int>(edges.size()) +
         static_cast<int>(mesh.triangles.size());
}

double max_projector_defect(const SurfaceMesh& mesh) {
  double worst = 0.0;
  for (const auto& p : mesh.vertices) worst = std::max(worst, projector_defect(p));
  return worst;
}

std::vector<double> triangle_areas(const SurfaceMesh& mesh, const AmbientCP2& ambient) {
  std::vector<double> out;
  out.reserve(mesh.triangles.size());
  for (const auto& t : mesh.triangles)
    out.push_back(tri_area(mesh.vertices[static_cast<std::size_t>(t[0])], mesh.vertices[static_cast<std::size_t>(t[1])],
                           mesh.vertices[static_cast<std::size_t>(t[2])], ambient.scale()));
  return out;
}

std::vector<double> dual_areas(const SurfaceMesh& mesh, const AmbientCP2& ambient) {
  std::vector<double> out(mesh.vertices.size(), 0.0);
  const std::vector<double> ta = triangle_areas(mesh, ambient);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
    for (int v : mesh.triangles[t]) out[static_cast<std::size_t>(v)] += ta[t] / 3.0;
  return out;
}

double total_area(const SurfaceMesh& mesh, const AmbientCP2& ambient) {
  double a = 0.0;
  for (double x : triangle_areas(mesh, ambient)) a += x;
  return a;
}

double min_edge_length(const SurfaceMesh& mesh, const AmbientCP2& ambient) {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& t : mesh.triangles)
    for (int a = 0; a < 3; ++a) {
      const Herm d = mesh.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(a)])] -
                     mesh.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((a + 1) % 3)])];
      h = std::min(h, ambient.scale() * frob_norm(d));
    }
  return h;
}

double max_displacement(const SurfaceMesh& a, const SurfaceMesh& b, const AmbientCP2& ambient) {
  if (a.vertices.size() != b.vertices.size()) throw std::invalid_argument("max_displacement: vertex count mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.vertices.size(); ++i)
    worst = std::max(worst, ambient.scale() * frob_norm(a.vertices[i] - b.vertices[i]));
  return worst;
}

FixtureKind parse_fixture_kind(const std::string& name) {
  if (name == "holomorphic_line") return FixtureKind::holomorphic_line;
  if (name == "perturbed_line") return FixtureKind::perturbed_line;
  if (name == "graph_torus") return FixtureKind::graph_torus;
  throw std::invalid_argument("unknown fixture '" + name + "'");
}

std::string to_string(FixtureKind kind) {
  switch (kind) {
    case FixtureKind::holomorphic_line:
      return "holomorphic_line";
    case FixtureKind::perturbed_line:
      return "perturbed_line";
    case FixtureKind::graph_torus:
      return "graph_torus";
  }
  return "unknown";
}

SurfaceMesh make_initial_surface(const FixtureSpec& spec, const AmbientCP2& ambient) {
  if (spec.resolution < 8) throw std::invalid_argument("make_initial_surface: resolution must be >= 8");
  if (spec.kind == FixtureKind::graph_torus) {
    const TorusParams& tp = spec.torus;
    if (!(tp.r1 > 0.0) || !(tp.r2 > 0.0) || !(std::abs(tp.amplitude) < 1.0))
      throw std::invalid_argument("make_initial_surface: torus needs r1, r2 > 0 and |amplitude| < 1");
    return torus_mesh(spec.resolution, tp);
  }
  if (spec.amplitude < 0.0) throw std::invalid_argument("make_initial_surface: amplitude must be >= 0");
  const double a = spec.kind == FixtureKind::perturbed_line ? spec.amplitude : 0.0;
  SurfaceMesh mesh = line_mesh(spec.resolution / 4, a);
  if (symplectic_orientation(mesh, ambient) < 0.0)
    for (auto& tr : mesh.triangles) std::swap(tr[1], tr[2]);
  if (spec.kind == FixtureKind::perturbed_line && a > 0.0) {
    double min_cos = 1.0;
    for (const auto& g : vertex_geometry(mesh, ambient)) min_cos = std::min(min_cos, g.cos_alpha);
    if (!(min_cos > spec.min_cos_floor)) {
      std::ostringstream os;
      os << "make_initial_surface: perturbed_line amplitude " << a << " gives min cos(alpha) = " << min_cos
         << ", not above " << spec.min_cos_floor;
      throw std::invalid_argument(os.str());
    }
  }
  return mesh;
}

}  // namespace symflow::flow
