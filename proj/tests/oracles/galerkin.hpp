#pragma once

// Eigenvalues of -u''/2 - (w2/2) y^2 u = K u on [0,1], Dirichlet, by a
// Galerkin projection onto sqrt(2) sin(n pi y). The y^2 matrix is assembled
// by quadrature, not from the closed forms.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "cavity/quadrature.hpp"

namespace oracle {

inline std::vector<double> galerkin_roots(double hbar_b2, int modes, int count) {
  using std::numbers::pi;
  const double w2 = 0.25 * hbar_b2;
  const auto rule = cavity::composite_gauss_legendre(0.0, 1.0, 4 * modes, 16);
  Eigen::MatrixXd S(rule.nodes.size(), modes);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    for (int n = 1; n <= modes; ++n) S(k, n - 1) = std::sqrt(2.0) * std::sin(n * pi * rule.nodes[k]);
  Eigen::VectorXd wy2(rule.nodes.size());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) wy2(k) = rule.weights[k] * rule.nodes[k] * rule.nodes[k];
  Eigen::MatrixXd H = -0.5 * w2 * (S.transpose() * wy2.asDiagonal() * S);
  for (int n = 1; n <= modes; ++n) H(n - 1, n - 1) += n * n * pi * pi / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

}  // namespace oracle
