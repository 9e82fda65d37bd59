#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace gwnet::detail {

struct SupportCell {
  Eigen::Index row;
  Eigen::Index col;
  double mass;
};

inline std::vector<SupportCell> plan_support(const Eigen::MatrixXd& plan) {
  std::vector<SupportCell> cells;
  for (Eigen::Index j = 0; j < plan.cols(); ++j) {
    for (Eigen::Index i = 0; i < plan.rows(); ++i) {
      if (plan(i, j) > 0.0) cells.push_back({i, j, plan(i, j)});
    }
  }
  return cells;
}

// |x|^p with the common orders special-cased.
inline double abs_pow(double x, double p) {
  const double a = std::abs(x);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

inline double root(double x, double p) {
  if (x <= 0.0) return 0.0;
  if (p == 1.0) return x;
  if (p == 2.0) return std::sqrt(x);
  return std::pow(x, 1.0 / p);
}

}  // namespace gwnet::detail
