#include "symflow/flow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "symflow/flow/density.hpp"

namespace symflow::flow {

namespace {

constexpr double kProjectorTolerance = 1e-10;

struct Integrals {
  double min_cos = 1.0, max_cos = -1.0;
  double sin2_over_cos = 0.0, cos = 0.0, area = 0.0, abs_h = 0.0;
  double max_hsq = 0.0, max_q = -std::numeric_limits<double>::infinity();
  double gradient_audit = -std::numeric_limits<double>::infinity();
  double nabla_j_audit = -std::numeric_limits<double>::infinity();
};

Integrals integrate(const std::vector<VertexGeometry>& geom) {
  Integrals s;
  for (const auto& g : geom) {
    const double c = g.cos_alpha;
    const double sin2 = std::max(0.0, 1.0 - c * c);
    s.min_cos = std::min(s.min_cos, c);
    s.max_cos = std::max(s.max_cos, c);
    s.sin2_over_cos += g.area * sin2 / c;
    s.cos += g.area * c;
    s.area += g.area;
    s.abs_h += g.area * std::sqrt(g.hsq);
    s.max_hsq = std::max(s.max_hsq, g.hsq);
    s.max_q = std::max(s.max_q, g.q);
    s.gradient_audit = std::max(s.gradient_audit, g.grad_cos.squaredNorm() - sin2 * g.nabla_j_sq);
    s.nabla_j_audit = std::max(s.nabla_j_audit, 0.5 * g.hsq - g.nabla_j_sq);
  }
  return s;
}

ClaimCheck make_check(std::string name, bool enabled, bool passed, double value, double threshold,
                      std::string detail = {}) {
  ClaimCheck c;
  c.name = std::move(name);
  c.enabled = enabled;
  c.passed = !enabled || passed;
  c.value = value;
  c.threshold = threshold;
  c.detail = std::move(detail);
  return c;
}

}  // namespace

double stable_dt(const std::vector<VertexGeometry>& geometry, double h_min, double cfl) {
  double max_asq = 0.0;
  for (const auto& g : geometry) max_asq = std::max(max_asq, g.asq);
  return cfl * std::min(1.0 / std::max(max_asq, 1e-8), h_min * h_min);
}

SurfaceMesh euler_update(const SurfaceMesh& mesh, const std::vector<VertexGeometry>& geometry,
                         const AmbientCP2& ambient, double dt) {
  SurfaceMesh next;
  next.triangles = mesh.triangles;
  next.vertices.reserve(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    next.vertices.push_back(retract(mesh.vertices[i] + dt * geometry[i].h_vec / ambient.scale()));
  return next;
}

StepResult mcf_step(const SurfaceMesh& mesh, const AmbientCP2& ambient, double cfl, const GeometryOptions& options,
                    const MeshTopology* topology, double min_dt) {
  StepResult r;
  r.geometry = vertex_geometry(mesh, ambient, options, topology);
  r.dt = stable_dt(r.geometry, min_edge_length(mesh, ambient), cfl);
  if (!(r.dt >= min_dt)) {
    std::ostringstream os;
    os << "mcf_step: dt underflow (" << r.dt << " < " << min_dt << ")";
    throw std::runtime_error(os.str());
  }
  r.mesh = euler_update(mesh, r.geometry, ambient, r.dt);
  return r;
}

double cos_alpha_residual(const std::vector<VertexGeometry>& now, const std::vector<VertexGeometry>& next, double dt,
                          double k) {
  if (now.size() != next.size()) throw std::invalid_argument("cos_alpha_residual: vertex count mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("cos_alpha_residual: dt must be positive");
  double sum = 0.0, area = 0.0;
  for (std::size_t i = 0; i < now.size(); ++i) {
    const VertexGeometry& g = now[i];
    const double c = g.cos_alpha;
    const double rhs = g.lap_cos + g.nabla_j_sq * c + 1.5 * k * c * (1.0 - c * c);
    const double res = (next[i].cos_alpha - c) / dt - rhs;
    sum += g.area * res * res;
    area += g.area;
  }
  return std::sqrt(sum / area);
}

double cos_alpha_residual(const SurfaceMesh& mesh, const SurfaceMesh& mesh_next, double dt, const AmbientCP2& ambient,
                          const GeometryOptions& options) {
  const MeshTopology topo = MeshTopology::build(mesh, stencil_points(options.fit_degree));
  return cos_alpha_residual(vertex_geometry(mesh, ambient, options, &topo),
                            vertex_geometry(mesh_next, ambient, options, &topo), dt, ambient.k());
}

double fitted_log_slope(const std::vector<double>& t, const std::vector<double>& y, std::size_t first, double floor) {
  double n = 0.0, st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = first; i < t.size() && i < y.size(); ++i) {
    if (!(y[i] > floor)) continue;
    const double ly = std::log(y[i]);
    n += 1.0;
    st += t[i];
    sy += ly;
    stt += t[i] * t[i];
    sty += t[i] * ly;
  }
  const double den = n * stt - st * st;
  if (n < 2.0 || !(std::abs(den) > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return (n * sty - st * sy) / den;
}

bool FlowDiagnostics::passed() const {
  if (halted) return false;
  return std::all_of(checks.begin(), checks.end(), [](const ClaimCheck& c) { return c.passed; });
}

FlowDiagnostics run_flow(const FlowConfig& config, const SnapshotFn& snapshot, int snapshot_every) {
  if (!(config.cfl > 0.0)) throw std::invalid_argument("run_flow: cfl must be positive");
  if (config.steps < 0) throw std::invalid_argument("run_flow: steps must be >= 0");
  const AmbientCP2 ambient(config.k);
  const double k1 = config.k;  // the simulator's ambient has lambda = 1
  SurfaceMesh mesh = make_initial_surface(config.fixture, ambient);
  const SurfaceMesh initial = mesh;
  const MeshTopology topo = MeshTopology::build(mesh, stencil_points(config.geometry.fit_degree));
  const bool sample_density = config.density_radius > 0.0 && config.density_vertex >= 0 &&
                              config.density_vertex < static_cast<int>(mesh.vertices.size());

  FlowDiagnostics diag;
  diag.vertices = static_cast<int>(mesh.vertices.size());
  diag.expected_decay_rate = 0.75 * k1;
  diag.expected_half_angle_rate = 4.0 / 9.0 * k1;

  std::vector<VertexGeometry> geom = vertex_geometry(mesh, ambient, config.geometry, &topo);
  double t = 0.0;
  double last_dt = 0.0;
  double last_residual = std::numeric_limits<double>::quiet_NaN();
  for (int step = 0;; ++step) {
    const Integrals in = integrate(geom);
    FlowRecord rec;
    rec.step = step;
    rec.t = t;
    rec.dt = last_dt;
    rec.min_cos = in.min_cos;
    rec.max_cos = in.max_cos;
    rec.int_sin2_over_cos = in.sin2_over_cos;
    rec.int_cos = in.cos;
    rec.area = in.area;
    rec.max_hsq = in.max_hsq;
    rec.max_q = in.max_q;
    rec.residual = last_residual;
    rec.max_half_angle = 0.5 * (1.0 - in.min_cos);
    rec.int_abs_h = in.abs_h;
    rec.gradient_audit = in.gradient_audit;
    rec.nabla_j_audit = in.nabla_j_audit;
    if (sample_density)
      rec.density_sample = gaussian_density(mesh, ambient, mesh.vertices[static_cast<std::size_t>(config.density_vertex)],
                                            config.density_radius);
    diag.records.push_back(rec);
    diag.max_projector_defect = std::max(diag.max_projector_defect, max_projector_defect(mesh));
    if (snapshot && snapshot_every > 0 && step % snapshot_every == 0) snapshot(step, t, mesh);

    if (step >= config.steps || t >= config.horizon) break;
    const double dt = stable_dt(geom, min_edge_length(mesh, ambient), config.cfl);
    if (!(dt >= config.min_dt)) {
      diag.halted = true;
      std::ostringstream os;
      os << "dt underflow at step " << step << " (dt = " << dt << ")";
      diag.halt_reason = os.str();
      break;
    }
    SurfaceMesh next = euler_update(mesh, geom, ambient, dt);
    const double defect = max_projector_defect(next);
    if (!(defect < kProjectorTolerance)) {
      diag.halted = true;
      diag.halt_reason = "projector constraint breached at step " + std::to_string(step + 1);
      break;
    }
    std::vector<VertexGeometry> next_geom;
    try {
      next_geom = vertex_geometry(next, ambient, config.geometry, &topo);
    } catch (const DegenerateMeshError& e) {
      diag.halted = true;
      diag.halt_reason = e.what();
      break;
    }
    last_residual = cos_alpha_residual(geom, next_geom, dt, ambient.k());
    diag.spacetime_abs_h += dt * in.abs_h;
    mesh = std::move(next);
    geom = std::move(next_geom);
    t += dt;
    last_dt = dt;
  }
  if (snapshot && snapshot_every > 0 && diag.records.back().step % snapshot_every != 0)
    snapshot(diag.records.back().step, diag.records.back().t, mesh);
  diag.max_drift = max_displacement(initial, mesh, ambient);

  // Claim checks.
  const std::vector<FlowRecord>& r = diag.records;
  const FlowRecord& r0 = r.front();
  diag.initial_area = r0.area;
  diag.c0 = r0.int_sin2_over_cos;

  double worst_drop = 0.0;
  int worst_drop_step = 0;
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double drop = r[i - 1].min_cos - r[i].min_cos;
    if (drop > worst_drop) {
      worst_drop = drop;
      worst_drop_step = r[i].step;
    }
  }
  diag.checks.push_back(make_check("min_cos_monotone", r0.min_cos > 0.0, worst_drop <= config.monotonicity_slack,
                                   worst_drop, config.monotonicity_slack,
                                   "largest per-step decrease of min cos(alpha), at step " +
                                       std::to_string(worst_drop_step)));

  double worst_cos = 0.0;
  for (const auto& x : r) worst_cos = std::max(worst_cos, std::abs(x.int_cos - r0.int_cos) / std::abs(r0.int_cos));
  diag.checks.push_back(make_check("int_cos_conserved", true, worst_cos <= config.int_cos_tolerance, worst_cos,
                                   config.int_cos_tolerance, "max relative change of the integral of cos(alpha)"));

  // Decay of the integral of sin^2/cos over the second half of the run; the floor
  // keeps roundoff-level values of near-holomorphic states out of the fit.
  std::vector<double> ts, ys, hs;
  for (const auto& x : r) {
    ts.push_back(x.t);
    ys.push_back(x.int_sin2_over_cos);
    hs.push_back(x.max_half_angle);
  }
  const double floor = 1e-12 * std::max(r0.area, 1e-300);
  const bool decay_enabled = r0.int_sin2_over_cos > floor && r.size() >= 4;
  diag.fitted_decay_rate = decay_enabled ? -fitted_log_slope(ts, ys, r.size() / 2, floor) : 0.0;
  diag.fitted_half_angle_rate = decay_enabled ? -fitted_log_slope(ts, hs, r.size() / 2, 1e-14) : 0.0;
  diag.checks.push_back(make_check("sin2_over_cos_decay_rate", decay_enabled,
                                   diag.fitted_decay_rate >= config.decay_fraction * diag.expected_decay_rate,
                                   diag.fitted_decay_rate, config.decay_fraction * diag.expected_decay_rate,
                                   "fitted exponential rate over the second half of the run"));

  const std::string no_decay = r.size() < 4 ? "fewer than 4 records" : "initial integral of sin^2/cos is at roundoff level";
  diag.checks.back().disabled_reason = no_decay;

  double worst_prop41 = 0.0;
  for (const auto& x : r) {
    const double bound = r0.int_sin2_over_cos * std::exp(-diag.expected_decay_rate * x.t);
    worst_prop41 = std::max(worst_prop41, x.int_sin2_over_cos - bound);
  }
  diag.checks.push_back(make_check("sin2_over_cos_bound", decay_enabled, worst_prop41 <= 1e-9 * r0.int_sin2_over_cos,
                                   worst_prop41, 1e-9 * r0.int_sin2_over_cos,
                                   "max excess over C0 exp(-(3/4)(2 - lambda) k1 t)"));
  diag.checks.back().disabled_reason = no_decay;

  double worst_env = 0.0;
  for (const auto& x : r) {
    const double env = r0.max_half_angle * std::exp(-diag.expected_half_angle_rate * x.t);
    worst_env = std::max(worst_env, x.max_half_angle - env);
  }
  const double env_slack = std::max(1e-9 * r0.max_half_angle, 1e-12);
  diag.checks.push_back(make_check("half_angle_envelope", true, worst_env <= env_slack, worst_env, env_slack,
                                   "max excess of max sin^2(alpha/2) over C exp(-(4/9) k1 t), C from t = 0"));

  const bool pinched = r0.max_q <= 0.0 && r0.min_cos >= std::sqrt(5.0 / 6.0);
  double max_q = -std::numeric_limits<double>::infinity();
  for (const auto& x : r) max_q = std::max(max_q, x.max_q);
  diag.checks.push_back(make_check("pinching_preserved", pinched, max_q <= config.q_slack * k1, max_q,
                                   config.q_slack * k1, "max Q over the run"));
  diag.checks.back().disabled_reason = "initial data not pinched (needs max Q <= 0 and min cos >= sqrt(5/6))";

  diag.spacetime_abs_h_bound =
      std::sqrt(diag.c0) * std::sqrt(diag.initial_area) / (1.0 - std::exp(-0.375 * k1));
  diag.checks.push_back(make_check("mean_curvature_l1_bound", decay_enabled,
                                   diag.spacetime_abs_h <= diag.spacetime_abs_h_bound, diag.spacetime_abs_h,
                                   diag.spacetime_abs_h_bound, "space-time integral of |H|"));
  diag.checks.back().disabled_reason = no_decay;

  double grad_audit = -std::numeric_limits<double>::infinity(), nj_audit = grad_audit;
  for (const auto& x : r) {
    grad_audit = std::max(grad_audit, x.gradient_audit);
    nj_audit = std::max(nj_audit, x.nabla_j_audit);
  }
  diag.checks.push_back(make_check("cos_gradient_bound", true, grad_audit <= 1e-8, grad_audit, 1e-8,
                                   "max over vertices of |grad cos|^2 - sin^2 |grad J|^2"));
  diag.checks.push_back(make_check("nabla_j_lower_bound", true, nj_audit <= 1e-8, nj_audit, 1e-8,
                                   "max over vertices of |H|^2/2 - |grad J|^2"));
  diag.checks.push_back(make_check("projector_constraint", true, diag.max_projector_defect < kProjectorTolerance,
                                   diag.max_projector_defect, kProjectorTolerance));
  return diag;
}

}  // namespace symflow::flow
