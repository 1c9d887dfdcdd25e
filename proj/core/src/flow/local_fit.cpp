#include "symflow/flow/local_fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace symflow::flow {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TaylorFit::TaylorFit(const std::vector<Eigen::Vector2d>& points, int degree) : degree_(degree), length_(0.0) {
  const int n = static_cast<int>(points.size());
  while (degree_ > 2 && unknowns(degree_) > n) --degree_;
  if (degree_ < 2 || unknowns(degree_) > n) throw std::invalid_argument("TaylorFit: too few points");
  for (const auto& p : points) length_ = std::max(length_, p.norm());
  if (!(length_ > 0.0)) throw std::invalid_argument("TaylorFit: all points at the origin");

  // Monomials u^a v^b / (a! b!) in coordinates scaled by the stencil radius, so
  // that the coefficients of degree 1 and 2 are the derivatives directly.
  Eigen::MatrixXd m(n, unknowns(degree_));
  for (int j = 0; j < n; ++j) {
    const double u = points[static_cast<std::size_t>(j)].x() / length_;
    const double v = points[static_cast<std::size_t>(j)].y() / length_;
    int col = 0;
    for (int d = 1; d <= degree_; ++d)
      for (int b = 0; b <= d; ++b) {
        const int a = d - b;
        m(j, col++) = std::pow(u, a) * std::pow(v, b) / (factorial(a) * factorial(b));
      }
  }
  qr_.compute(m);
}

Jet2 TaylorFit::fit(const Eigen::VectorXd& values) const {
  const Eigen::VectorXd c = qr_.solve(values);
  // Column order: u, v, uu, uv, vv, ...
  Jet2 jet;
  jet.gradient << c(0) / length_, c(1) / length_;
  const double l2 = length_ * length_;
  jet.hessian << c(2) / l2, c(3) / l2, c(3) / l2, c(4) / l2;
  return jet;
}

}  // namespace symflow::flow
