#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "symflow/flow/geometry.hpp"

namespace symflow::flow {

/// dt = cfl * min(1 / max(max |A|^2, 1e-8), h_min^2).
double stable_dt(const std::vector<VertexGeometry>& geometry, double h_min, double cfl);

/// P <- retract(P + dt H / s) at every vertex.
SurfaceMesh euler_update(const SurfaceMesh& mesh, const std::vector<VertexGeometry>& geometry,
                         const AmbientCP2& ambient, double dt);

struct StepResult {
  SurfaceMesh mesh;
  double dt = 0.0;
  std::vector<VertexGeometry> geometry;  ///< of the input mesh
};

/// One explicit Euler step of mean curvature flow. Throws std::runtime_error if
/// dt falls below `min_dt`.
StepResult mcf_step(const SurfaceMesh& mesh, const AmbientCP2& ambient, double cfl, const GeometryOptions& options = {},
                    const MeshTopology* topology = nullptr, double min_dt = 1e-12);

/// Area-weighted RMS over vertices of
///   (cos' - cos) / dt - Lap cos - |grad J|^2 cos - (3/2) k cos sin^2,
/// the evolution equation of cos(alpha) in CP^2, where Ric(J e1, e2) = (3/2) k cos(alpha).
double cos_alpha_residual(const std::vector<VertexGeometry>& now, const std::vector<VertexGeometry>& next, double dt,
                          double k);
double cos_alpha_residual(const SurfaceMesh& mesh, const SurfaceMesh& mesh_next, double dt, const AmbientCP2& ambient,
                          const GeometryOptions& options = {});

struct FlowConfig {
  FixtureSpec fixture;
  double k = 4.0;
  double cfl = 0.1;
  int steps = 500;
  double horizon = std::numeric_limits<double>::infinity();
  GeometryOptions geometry;
  double min_dt = 1e-12;
  /// Allowed per-step decrease of min cos(alpha).
  double monotonicity_slack = 1e-4;
  /// max Q may not exceed q_slack * k1.
  double q_slack = 1e-3;
  /// Relative tolerance on the conservation of the integral of cos(alpha).
  double int_cos_tolerance = 1e-3;
  /// The fitted decay rate must reach this fraction of (3/4)(2 - lambda) k1.
  double decay_fraction = 0.9;
  /// Gaussian density sampled at this vertex and radius each step; radius 0 disables.
  int density_vertex = 0;
  double density_radius = 0.1;
};

struct FlowRecord {
  int step = 0;
  double t = 0.0;
  double dt = 0.0;  ///< step size that produced this state (0 for the initial one)
  double min_cos = 0.0;
  double max_cos = 0.0;
  double int_sin2_over_cos = 0.0;
  double int_cos = 0.0;
  double area = 0.0;
  double max_hsq = 0.0;
  double max_q = 0.0;
  double residual = std::numeric_limits<double>::quiet_NaN();  ///< of the step into this state
  double density_sample = std::numeric_limits<double>::quiet_NaN();
  double max_half_angle = 0.0;  ///< max sin^2(alpha / 2)
  double int_abs_h = 0.0;
  double gradient_audit = 0.0;  ///< max |grad cos|^2 - sin^2 |grad J|^2
  double nabla_j_audit = 0.0;   ///< max |H|^2 / 2 - |grad J|^2
};

struct ClaimCheck {
  std::string name;
  bool enabled = true;
  bool passed = true;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
  std::string disabled_reason;
};

struct FlowDiagnostics {
  std::vector<FlowRecord> records;
  bool halted = false;
  std::string halt_reason;
  int vertices = 0;
  double initial_area = 0.0;
  double c0 = 0.0;  ///< integral of sin^2 / cos at t = 0
  double fitted_decay_rate = 0.0;
  double expected_decay_rate = 0.0;
  double fitted_half_angle_rate = 0.0;
  double expected_half_angle_rate = 0.0;
  double spacetime_abs_h = 0.0;  ///< integral over time of the integral of |H|
  double spacetime_abs_h_bound = 0.0;
  double max_drift = 0.0;
  double max_projector_defect = 0.0;
  std::vector<ClaimCheck> checks;

  bool passed() const;
};

using SnapshotFn = std::function<void(int step, double t, const SurfaceMesh& mesh)>;

/// Runs the flow until `steps` or `horizon`, records diagnostics and evaluates
/// the claim checks. Halts (recorded, not thrown) on dt underflow, a degenerate
/// mesh or a projector defect above 1e-10. Fixture errors propagate.
FlowDiagnostics run_flow(const FlowConfig& config, const SnapshotFn& snapshot = {}, int snapshot_every = 0);

/// Least-squares slope of log(y) against t over the records with index >= first and y > floor.
double fitted_log_slope(const std::vector<double>& t, const std::vector<double>& y, std::size_t first, double floor);

}  // namespace symflow::flow
