#include "symflow/flow/geometry.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <sstream>

#include "symflow/flow/local_fit.hpp"

namespace symflow::flow {

namespace {

constexpr double kMinTriangleArea = 1e-14;

// Completes orthonormal t1, t2 in R^4 to an orthonormal basis.
Mat4 complete_basis(const Vec4& t1, const Vec4& t2) {
  Mat4 b;
  b.col(0) = t1;
  b.col(1) = t2;
  int filled = 2;
  for (int a = 0; a < 4 && filled < 4; ++a) {
    Vec4 v = Vec4::Unit(a);
    for (int i = 0; i < filled; ++i) v -= b.col(i).dot(v) * b.col(i);
    if (v.norm() > 0.5) b.col(filled++) = v.normalized();
  }
  return b;
}

void orthonormalize(Vec4& t1, Vec4& t2) {
  t1.normalize();
  t2 -= t1.dot(t2) * t1;
  t2.normalize();
}

double cot(const Herm& u, const Herm& v) {
  const double uv = frob_dot(u, v);
  return uv / std::sqrt(std::max(1e-300, frob_dot(u, u) * frob_dot(v, v) - uv * uv));
}

// Cotangent Laplacian of the embedding F = s P with mixed Voronoi areas.
std::vector<Herm> cotangent_laplacian(const SurfaceMesh& mesh, double s, const std::vector<double>& tri_area) {
  const std::size_t n = mesh.vertices.size();
  std::vector<Herm> lap(n, Herm::Zero());
  std::vector<double> area(n, 0.0);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    std::array<Herm, 3> f;
    for (int a = 0; a < 3; ++a) f[static_cast<std::size_t>(a)] = s * mesh.vertices[static_cast<std::size_t>(tr[static_cast<std::size_t>(a)])];
    std::array<double, 3> c;  // cotangent of the angle at each corner
    bool obtuse = false;
    int obtuse_at = -1;
    for (int a = 0; a < 3; ++a) {
      const Herm& p = f[static_cast<std::size_t>(a)];
      const Herm u = f[static_cast<std::size_t>((a + 1) % 3)] - p;
      const Herm v = f[static_cast<std::size_t>((a + 2) % 3)] - p;
      c[static_cast<std::size_t>(a)] = cot(u, v);
      if (frob_dot(u, v) < 0.0) {
        obtuse = true;
        obtuse_at = a;
      }
    }
    for (int a = 0; a < 3; ++a) {
      const auto i = static_cast<std::size_t>(tr[static_cast<std::size_t>(a)]);
      const auto ia = static_cast<std::size_t>(a);
      const auto ib = static_cast<std::size_t>((a + 1) % 3);
      const auto ic = static_cast<std::size_t>((a + 2) % 3);
      // Edge (a, b) is opposite corner c and edge (a, c) opposite corner b.
      lap[i] += 0.5 * (c[ic] * (f[ib] - f[ia]) + c[ib] * (f[ic] - f[ia]));
      if (!obtuse) {
        area[i] += 0.125 * (frob_dot(f[ib] - f[ia], f[ib] - f[ia]) * c[ic] + frob_dot(f[ic] - f[ia], f[ic] - f[ia]) * c[ib]);
      } else {
        area[i] += tri_area[t] * (obtuse_at == a ? 0.5 : 0.25);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) lap[i] /= area[i];
  return lap;
}

}  // namespace

int stencil_points(int fit_degree) { return TaylorFit::unknowns(fit_degree) + 4; }

std::vector<VertexGeometry> vertex_geometry(const SurfaceMesh& mesh, const AmbientCP2& ambient,
                                            const GeometryOptions& options, const MeshTopology* topology) {
  std::unique_ptr<MeshTopology> own;
  if (topology == nullptr) {
    own = std::make_unique<MeshTopology>(MeshTopology::build(mesh, stencil_points(options.fit_degree)));
    topology = own.get();
  }
  const std::size_t n = mesh.vertices.size();
  const double s = ambient.scale();
  const std::vector<double> tri_area = triangle_areas(mesh, ambient);

  std::vector<VertexGeometry> out(n);
  std::vector<std::optional<TaylorFit>> fits(n);

  for (std::size_t i = 0; i < n; ++i) {
    VertexGeometry& g = out[i];
    for (int t : topology->incident[i]) {
      const double a = tri_area[static_cast<std::size_t>(t)];
      if (!(a >= kMinTriangleArea)) {
        std::ostringstream os;
        os << "degenerate triangle " << t << " (area " << a << ") at vertex " << i;
        throw DegenerateMeshError(static_cast<int>(i), os.str());
      }
      g.area += a / 3.0;
    }

    const Herm& p = mesh.vertices[i];
    const TangentBasis basis = ambient.tangent_basis(p, options.basis_phase);
    const std::vector<int>& st = topology->stencil[i];
    std::vector<Vec4> x(st.size());
    for (std::size_t j = 0; j < st.size(); ++j)
      x[j] = basis.coords(s * (mesh.vertices[static_cast<std::size_t>(st[j])] - p));

    // Initial plane from the one-ring.
    Mat4 cov = Mat4::Zero();
    for (int j : topology->one_ring[i]) {
      const Vec4 d = basis.coords(s * (mesh.vertices[static_cast<std::size_t>(j)] - p));
      cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat4> pca(cov);
    Vec4 t1 = pca.eigenvectors().col(3);
    Vec4 t2 = pca.eigenvectors().col(2);

    std::vector<Eigen::Vector2d> uv(st.size());
    Eigen::VectorXd w3(static_cast<Eigen::Index>(st.size())), w4(static_cast<Eigen::Index>(st.size()));
    auto project = [&](const Mat4& b) {
      for (std::size_t j = 0; j < st.size(); ++j) {
        uv[j] = {x[j].dot(b.col(0)), x[j].dot(b.col(1))};
        w3(static_cast<Eigen::Index>(j)) = x[j].dot(b.col(2));
        w4(static_cast<Eigen::Index>(j)) = x[j].dot(b.col(3));
      }
    };
    for (int it = 0; it < options.tilt_iterations; ++it) {
      const Mat4 b = complete_basis(t1, t2);
      project(b);
      const TaylorFit fit(uv, options.fit_degree);
      const Jet2 j3 = fit.fit(w3);
      const Jet2 j4 = fit.fit(w4);
      t1 = b.col(0) + j3.gradient(0) * b.col(2) + j4.gradient(0) * b.col(3);
      t2 = b.col(1) + j3.gradient(1) * b.col(2) + j4.gradient(1) * b.col(3);
      orthonormalize(t1, t2);
    }

    // Orient the plane with the incident triangles.
    double orient = 0.0;
    for (int t : topology->incident[i]) {
      const auto& tr = mesh.triangles[static_cast<std::size_t>(t)];
      int k = 0;
      while (tr[static_cast<std::size_t>(k)] != static_cast<int>(i)) ++k;
      const auto j1 = static_cast<std::size_t>(tr[static_cast<std::size_t>((k + 1) % 3)]);
      const auto j2 = static_cast<std::size_t>(tr[static_cast<std::size_t>((k + 2) % 3)]);
      const Vec4 a = basis.coords(s * (mesh.vertices[j1] - p));
      const Vec4 c = basis.coords(s * (mesh.vertices[j2] - p));
      orient += a.dot(t1) * c.dot(t2) - a.dot(t2) * c.dot(t1);
    }
    if (orient < 0.0) t2 = -t2;

    g.frame = adapted_frame_from_plane(t1, t2);
    if (options.normal_angle != 0.0) g.frame = rotate_normal_frame(g.frame, options.normal_angle);
    project(g.frame.e);
    fits[i].emplace(uv, options.fit_degree);
    g.h.h[0] = fits[i]->fit(w3).hessian;
    g.h.h[1] = fits[i]->fit(w4).hessian;

    for (int a = 0; a < 4; ++a) g.e[static_cast<std::size_t>(a)] = basis.from_coords(g.frame.e.col(a));
    g.cos_alpha = g.frame.cos_alpha;
    const Eigen::Vector2d mean = g.h.mean();
    g.h_vec = mean(0) * g.e[2] + mean(1) * g.e[3];
    const NablaJFunctionals nj = nabla_J_functionals(g.h);
    g.asq = nj.asq;
    g.hsq = nj.hsq;
    g.nabla_j_sq = nj.nabla_j_sq;
    g.q = g.asq - options.sigma * g.hsq - options.b * ambient.k();
    g.grad_cos = cos_alpha_gradient(g.h, g.frame);
  }

  if (options.mean_curvature == MeanCurvatureScheme::cotangent) {
    const std::vector<Herm> lap = cotangent_laplacian(mesh, s, tri_area);
    for (std::size_t i = 0; i < n; ++i) {
      VertexGeometry& g = out[i];
      g.h_vec = frob_dot(lap[i], g.e[2]) * g.e[2] + frob_dot(lap[i], g.e[3]) * g.e[3];
    }
  }

  // Derivatives of cos(alpha) over the same stencils.
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<int>& st = topology->stencil[i];
    Eigen::VectorXd c(static_cast<Eigen::Index>(st.size()));
    for (std::size_t j = 0; j < st.size(); ++j)
      c(static_cast<Eigen::Index>(j)) = out[static_cast<std::size_t>(st[j])].cos_alpha - out[i].cos_alpha;
    const Jet2 jet = fits[i]->fit(c);
    out[i].lap_cos = jet.laplacian();
    out[i].grad_cos_fit = jet.gradient;
  }
  return out;
}

}  // namespace symflow::flow
