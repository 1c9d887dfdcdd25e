#pragma once

#include <array>
#include <string>
#include <vector>

#include "symflow/flow/ambient.hpp"

namespace symflow::flow {

/// Closed oriented triangle mesh with vertices stored as rank-1 projectors.
struct SurfaceMesh {
  std::vector<Herm> vertices;
  std::vector<std::array<int, 3>> triangles;
};

/// Connectivity derived from the triangle list. Fixed along the flow.
struct MeshTopology {
  std::vector<std::vector<int>> one_ring;
  std::vector<std::vector<int>> incident;  ///< triangle indices per vertex
  /// Smallest ring (1, 2, ...) around each vertex holding at least `min_points`
  /// neighbours, excluding the vertex itself.
  std::vector<std::vector<int>> stencil;

  static MeshTopology build(const SurfaceMesh& mesh, int min_points);
};

/// Empty if the mesh is closed and consistently oriented (each directed edge
/// appears once and its reverse once); otherwise a description of the first defect.
std::string topology_defect(const SurfaceMesh& mesh);
int euler_characteristic(const SurfaceMesh& mesh);
double max_projector_defect(const SurfaceMesh& mesh);

/// Triangle areas in the embedding.
std::vector<double> triangle_areas(const SurfaceMesh& mesh, const AmbientCP2& ambient);
/// One third of the incident triangle areas.
std::vector<double> dual_areas(const SurfaceMesh& mesh, const AmbientCP2& ambient);
double total_area(const SurfaceMesh& mesh, const AmbientCP2& ambient);
double min_edge_length(const SurfaceMesh& mesh, const AmbientCP2& ambient);
/// max over vertices of |F_i - G_i| in the embedding.
double max_displacement(const SurfaceMesh& a, const SurfaceMesh& b, const AmbientCP2& ambient);

enum class FixtureKind { holomorphic_line, perturbed_line, graph_torus };

/// Torus [1 : r1 (1 + a cos(p t + q u)) e^{i t} : r2 e^{i u}] over a resolution x resolution grid.
/// r1 = r2 = 1, a = 0 is the minimal Lagrangian Clifford torus.
struct TorusParams {
  double r1 = 1.0;
  double r2 = 1.0;
  double amplitude = 0.0;
  int p = 1;
  int q = 1;
};

struct FixtureSpec {
  FixtureKind kind = FixtureKind::holomorphic_line;
  int resolution = 64;
  /// perturbed_line: the line [z0 : z1 : a conj(z0) z1^2] over unit (z0, z1).
  double amplitude = 0.0;
  TorusParams torus;
  /// perturbed_line is rejected unless its measured min cos(alpha) exceeds this.
  double min_cos_floor = 0.0;
};

FixtureKind parse_fixture_kind(const std::string& name);
std::string to_string(FixtureKind kind);

/// Line fixtures mesh the sphere with a geodesic icosahedral grid of frequency
/// resolution / 4, oriented so that the holomorphic line has cos(alpha) = +1.
/// Throws std::invalid_argument for resolution < 8, a negative amplitude, or a
/// perturbed line whose measured min cos(alpha) is not above `min_cos_floor`
/// (the message carries the measured value).
SurfaceMesh make_initial_surface(const FixtureSpec& spec, const AmbientCP2& ambient);

}  // namespace symflow::flow
