#include "gwnet/lower_bounds.hpp"

#include <cmath>

#include "gwnet/error.hpp"
#include "gwnet/ot.hpp"
#include "internal.hpp"

namespace gwnet {

namespace {

void check_bound_order(double p) {
  check_order(p);
  if (std::isinf(p)) {
    throw Error(ErrorCode::kInvalidArgument, "lower bounds are implemented for finite p only");
  }
}

}  // namespace

double szlb(const MeasureNetwork& X, const MeasureNetwork& Y, double p) {
  check_bound_order(p);
  return std::abs(size_p(X, p) - size_p(Y, p));
}

double rflb(const MeasureNetwork& X, const MeasureNetwork& Y, double p, Direction direction) {
  check_bound_order(p);
  return wasserstein_1d(ecc_pushforward(X, p, direction), ecc_pushforward(Y, p, direction), p);
}

double rslb(const MeasureNetwork& X, const MeasureNetwork& Y, double p) {
  check_bound_order(p);
  return wasserstein_1d(weight_pushforward(X), weight_pushforward(Y), p);
}

TlbCostMatrix tlb_cost(const MeasureNetwork& X, const MeasureNetwork& Y, double p,
                       Direction direction) {
  check_bound_order(p);
  std::vector<DiscreteDistribution> local_x, local_y;
  local_x.reserve(X.size());
  local_y.reserve(Y.size());
  for (Eigen::Index i = 0; i < X.size(); ++i) local_x.push_back(local_distribution(X, i, direction));
  for (Eigen::Index j = 0; j < Y.size(); ++j) local_y.push_back(local_distribution(Y, j, direction));

  Matrix cost(X.size(), Y.size());
  for (Eigen::Index j = 0; j < Y.size(); ++j) {
    for (Eigen::Index i = 0; i < X.size(); ++i) {
      cost(i, j) = wasserstein_1d(local_x[i], local_y[j], p);
    }
  }
  return {std::move(cost), direction, p};
}

TlbResult rtlb_from_cost(const TlbCostMatrix& cost, const Vector& mu_x, const Vector& mu_y) {
  const double p = cost.order;
  const Matrix powered = cost.cost.unaryExpr([p](double c) { return detail::abs_pow(c, p); });
  auto solved = exact_ot(powered, mu_x, mu_y);
  return {detail::root(solved.objective, p), std::move(solved.plan)};
}

TlbResult rtlb(const MeasureNetwork& X, const MeasureNetwork& Y, double p, Direction direction) {
  return rtlb_from_cost(tlb_cost(X, Y, p, direction), X.measure(), Y.measure());
}

BoundReport rtlb_max(const MeasureNetwork& X, const MeasureNetwork& Y, double p) {
  check_bound_order(p);
  BoundReport report;
  report.order = p;
  report.szlb = szlb(X, Y, p);
  report.rflb_out = rflb(X, Y, p, Direction::kOut);
  report.rflb_in = rflb(X, Y, p, Direction::kIn);
  report.rslb = rslb(X, Y, p);
  auto out = rtlb(X, Y, p, Direction::kOut);
  auto in = rtlb(X, Y, p, Direction::kIn);
  report.rtlb_out = out.value;
  report.rtlb_in = in.value;
  if (out.value >= in.value) {
    report.rtlb_max = out.value;
    report.tlb_coupling = std::move(out.coupling);
  } else {
    report.rtlb_max = in.value;
    report.tlb_coupling = std::move(in.coupling);
  }
  return report;
}

}  // namespace gwnet
