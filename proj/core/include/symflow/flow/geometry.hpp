#pragma once

#include <stdexcept>
#include <vector>

#include "symflow/frame.hpp"
#include "symflow/flow/mesh.hpp"

namespace symflow::flow {

enum class MeanCurvatureScheme {
  /// Trace of the fitted second fundamental form.
  fit,
  /// Cotangent Laplacian of the embedding with mixed Voronoi areas, projected onto
  /// the normal plane of the surface in CP^2.
  cotangent,
};

struct GeometryOptions {
  MeanCurvatureScheme mean_curvature = MeanCurvatureScheme::fit;
  /// Degree of the local Taylor fits (lowered automatically on small stencils).
  int fit_degree = 4;
  /// Tangent-plane refinements from the fitted slopes.
  int tilt_iterations = 3;
  /// Pinching constants for Q = |A|^2 - sigma |H|^2 - b k1, with k1 the ambient k.
  double sigma = 2.0 / 3.0;
  double b = 0.5;
  /// Gauge controls used to test frame independence: rotation of (e3, e4) and
  /// a unitary change of the tangent basis of CP^2.
  double normal_angle = 0.0;
  double basis_phase = 0.0;
};

/// Per-vertex geometry. Frame coordinates are taken in the tangent basis of
/// CP^2 at the vertex, where J is the standard J0.
struct VertexGeometry {
  AdaptedFrame frame;
  std::array<Herm, 4> e;  ///< frame vectors in the embedding
  double cos_alpha = 1.0;
  SecondFundamentalForm h;
  Herm h_vec = Herm::Zero();  ///< mean curvature vector in the embedding (drives the flow)
  double asq = 0.0;
  double hsq = 0.0;
  double nabla_j_sq = 0.0;
  double q = 0.0;
  double lap_cos = 0.0;  ///< Laplace-Beltrami of cos(alpha) from a local fit
  Eigen::Vector2d grad_cos_fit = Eigen::Vector2d::Zero();
  Eigen::Vector2d grad_cos = Eigen::Vector2d::Zero();  ///< from h and the frame
  double area = 0.0;                                   ///< dual area
};

class DegenerateMeshError : public std::runtime_error {
 public:
  DegenerateMeshError(int vertex, const std::string& what) : std::runtime_error(what), vertex_(vertex) {}
  int vertex() const { return vertex_; }

 private:
  int vertex_;
};

/// Stencil size used for a given fit degree.
int stencil_points(int fit_degree);

/// Tangent plane by a local PCA refined with fitted slopes; second fundamental
/// form from quartic (by default) height fits over the stencil in the adapted
/// frame; the mean curvature vector is the trace. Throws DegenerateMeshError
/// when an incident triangle has area below 1e-14.
std::vector<VertexGeometry> vertex_geometry(const SurfaceMesh& mesh, const AmbientCP2& ambient,
                                            const GeometryOptions& options = {},
                                            const MeshTopology* topology = nullptr);

}  // namespace symflow::flow
