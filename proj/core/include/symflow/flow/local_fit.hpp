#pragma once

#include <vector>

#include <Eigen/Dense>

namespace symflow::flow {

/// First and second derivatives at the origin.
struct Jet2 {
  Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hessian = Eigen::Matrix2d::Zero();

  double laplacian() const { return hessian.trace(); }
};

/// Least-squares Taylor fit f(u, v) - f(0) ~ sum of monomials of total degree
/// 1..degree over scattered sample points around the origin. The design matrix
/// is factored once and reused for any number of value vectors.
class TaylorFit {
 public:
  /// Lowers the degree (not below 2) until there are at least as many points as
  /// unknowns; throws std::invalid_argument if even a quadratic is underdetermined.
  TaylorFit(const std::vector<Eigen::Vector2d>& points, int degree);

  int degree() const { return degree_; }
  static int unknowns(int degree) { return (degree + 1) * (degree + 2) / 2 - 1; }

  /// `values[j]` is f(points[j]) - f(0).
  Jet2 fit(const Eigen::VectorXd& values) const;

 private:
  int degree_;
  double length_;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr_;
};

}  // namespace symflow::flow
