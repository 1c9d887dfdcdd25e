#pragma once

#include <array>
#include <optional>
#include <vector>

#include "symflow/flow/mesh.hpp"

namespace symflow::flow {

/// C^2 cutoff: 1 on [0, r], 0 beyond 2r, smootherstep in between (|phi'| <= 1.875 / r).
double cutoff(double rho, double r);

/// Integral of phi(X) exp(-|X|^2 / 4r^2) / (4 pi r^2) over a triangulated surface in
/// R^4 around the origin, with a degree-5 rule on each triangle. Without the cutoff
/// phi = 1.
double chart_density(const std::vector<Vec4>& points, const std::vector<std::array<int, 3>>& triangles, double r,
                     bool use_cutoff = true);

/// The same integral for a mesh in CP^2, in normal coordinates centred at x0.
/// Throws std::invalid_argument unless 0 < 2r < injectivity radius.
double gaussian_density(const SurfaceMesh& mesh, const AmbientCP2& ambient, const Herm& x0, double r,
                        bool use_cutoff = true);

struct DensityScan {
  std::vector<double> radii;
  std::vector<double> phi;
  /// Largest radius with phi <= 1 + eps0 / 2, if any.
  std::optional<double> r0;
};

DensityScan density_scan(const SurfaceMesh& mesh, const AmbientCP2& ambient, const Herm& x0,
                         const std::vector<double>& radii, double eps0);

}  // namespace symflow::flow
