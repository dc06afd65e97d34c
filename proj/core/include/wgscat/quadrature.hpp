#pragma once

#include <Eigen/Dense>
#include <vector>

namespace wgscat::quadrature {

struct Rule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

/// Gauss-Legendre rule with n points, cached per n.
const Rule& gauss_legendre(int n);

constexpr int kPanelOrder = 16;

/// Row i gives weights v_j with
///   sum_j v_j p(x_j) = integral_{-1}^{1} p(t) ln|t - x_i| dt
/// exact for polynomials p of degree < kPanelOrder, where x_j are the
/// kPanelOrder-point Gauss-Legendre nodes. Used by the singular self-panel
/// rule for the log-split single-layer kernel.
const Eigen::Matrix<double, kPanelOrder, kPanelOrder>& log_weight_matrix();

/// Interpolation matrix from the kPanelOrder Gauss-Legendre nodes to the
/// points `t` (barycentric Lagrange). Result is size(t) x kPanelOrder.
Eigen::MatrixXd interp_from_gl16(const std::vector<double>& t);

}  // namespace wgscat::quadrature
