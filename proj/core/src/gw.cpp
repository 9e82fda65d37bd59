#include "gwnet/gw.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gwnet/invariants.hpp"
#include "internal.hpp"

namespace gwnet {

namespace {

// ½ dis_2 of a plan whose marginals are the network measures (not re-checked).
double half_p2_distortion(const MeasureNetwork& X, const MeasureNetwork& Y, const Matrix& plan) {
  const Vector& mx = X.measure();
  const Vector& my = Y.measure();
  const double size_x = mx.dot(X.weights().array().square().matrix() * mx);
  const double size_y = my.dot(Y.weights().array().square().matrix() * my);
  const double cross = (X.weights() * plan * Y.weights().transpose()).cwiseProduct(plan).sum();
  return 0.5 * std::sqrt(std::max(0.0, size_x + size_y - 2.0 * cross));
}

// dis_p(plan)^p, or dis_∞ for p = ∞, over the plan's support.
double raw_distortion(const Matrix& wx, const Matrix& wy, const Matrix& plan, double p) {
  const auto support = detail::plan_support(plan);
  double total = 0.0;
  for (const auto& a : support) {
    for (const auto& b : support) {
      const double d = wx(a.row, b.row) - wy(a.col, b.col);
      if (std::isinf(p)) {
        total = std::max(total, std::abs(d));
      } else {
        total += detail::abs_pow(d, p) * a.mass * b.mass;
      }
    }
  }
  return total;
}

// Parametrizes plans by their top-left (m-1)x(n-1) block; the last row and
// column follow from the marginals.
class PlanChart {
 public:
  PlanChart(const Vector& mu, const Vector& nu) : mu_(mu), nu_(nu) {}

  Eigen::Index dims() const { return (mu_.size() - 1) * (nu_.size() - 1); }
  double cap(Eigen::Index k) const {
    const Eigen::Index cols = nu_.size() - 1;
    return std::min(mu_(k / cols), nu_(k % cols));
  }

  // Returns false when the completed plan has a negative entry.
  bool complete(const std::vector<double>& free, Matrix& plan) const {
    const Eigen::Index m = mu_.size(), n = nu_.size();
    plan.resize(m, n);
    for (Eigen::Index k = 0; k < dims(); ++k) {
      if (free[k] < 0.0) return false;
      plan(k / (n - 1), k % (n - 1)) = free[k];
    }
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
      plan(i, n - 1) = mu_(i) - plan.row(i).head(n - 1).sum();
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      plan(m - 1, j) = nu_(j) - plan.col(j).head(m - 1).sum();
    }
    constexpr double kSlack = 1e-15;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < m; ++i) {
        if (plan(i, j) < -kSlack) return false;
        if (plan(i, j) < 0.0) plan(i, j) = 0.0;
      }
    }
    return true;
  }

 private:
  const Vector& mu_;
  const Vector& nu_;
};

}  // namespace

GwNotConverged::GwNotConverged(GwResult last)
    : Error(ErrorCode::kMaxItersExceeded,
            "entropic GW outer loop stopped after " + std::to_string(last.iterations) +
                " iterations"),
      last_(std::move(last)) {}

Matrix gw_linearized_cost(const MeasureNetwork& X, const MeasureNetwork& Y, const Matrix& plan) {
  if (plan.rows() != X.size() || plan.cols() != Y.size()) {
    throw Error(ErrorCode::kSizeMismatch, "plan shape does not match the networks");
  }
  const Vector row_mass = plan.rowwise().sum();
  const Vector col_mass = plan.colwise().sum().transpose();
  const Vector a = X.weights().array().square().matrix() * row_mass;
  const Vector b = Y.weights().array().square().matrix() * col_mass;
  Matrix cost = -2.0 * X.weights() * plan * Y.weights().transpose();
  cost.colwise() += a;
  cost.rowwise() += b.transpose();
  return cost;
}

GwResult entropic_gw(const MeasureNetwork& X, const MeasureNetwork& Y, const GwOptions& options) {
  options.sinkhorn.validate();
  if (options.outer_iters <= 0 || !(options.plan_tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "outer_iters and plan_tolerance must be positive");
  }
  const Vector& mx = X.measure();
  const Vector& my = Y.measure();

  Matrix plan;
  const bool same_measure =
      X.size() == Y.size() && (mx - my).cwiseAbs().maxCoeff() <= 1e-12;
  if (options.diagonal_init && same_measure) {
    plan = mx.asDiagonal();
  } else {
    plan = mx * my.transpose();
  }

  SinkhornDiagnostics last_diag;
  int it = 0;
  bool converged = false;
  while (it < options.outer_iters) {
    ++it;
    const Matrix cost = gw_linearized_cost(X, Y, plan);
    std::optional<KernelState> init;
    if (options.log_init) init = log_initialize(cost, options.sinkhorn.lambda);
    SinkhornResult step = sinkhorn_log(cost, options.sinkhorn, mx, my, init);
    const double change = (step.plan - plan).cwiseAbs().sum();
    plan = std::move(step.plan);
    last_diag = step.diagnostics;
    if (change <= options.plan_tolerance) {
      converged = true;
      break;
    }
  }

  const double tolerance = std::max(options.sinkhorn.tolerance, kMarginalTolerance);
  const double value = half_p2_distortion(X, Y, plan);
  GwResult result{Coupling(std::move(plan), mx, my, tolerance), value, it, converged, last_diag};
  if (!converged) throw GwNotConverged(std::move(result));
  return result;
}

double gw_bruteforce(const MeasureNetwork& X, const MeasureNetwork& Y, double p,
                     const BruteforceOptions& options) {
  check_order(p);
  if (X.size() * Y.size() > 9) {
    std::ostringstream os;
    os << "brute force is limited to |X|*|Y| <= 9, got " << X.size() * Y.size();
    throw Error(ErrorCode::kInstanceTooLarge, os.str());
  }
  if (options.grid < 1 || options.refine_from < 0) {
    throw Error(ErrorCode::kInvalidArgument, "grid must be >= 1 and refine_from >= 0");
  }
  const Matrix& wx = X.weights();
  const Matrix& wy = Y.weights();
  const auto half_value = [&](const Matrix& plan) {
    return 0.5 * (std::isinf(p) ? raw_distortion(wx, wy, plan, p)
                                : detail::root(raw_distortion(wx, wy, plan, p), p));
  };

  const PlanChart chart(X.measure(), Y.measure());
  const Eigen::Index dims = chart.dims();
  Matrix plan;
  if (dims == 0) {
    chart.complete({}, plan);
    return half_value(plan);
  }

  // Grid enumeration: free entry k takes values cap(k) * level / grid.
  std::vector<std::pair<double, std::vector<double>>> scored;
  std::vector<int> level(dims, 0);
  std::vector<double> free(dims);
  for (;;) {
    for (Eigen::Index k = 0; k < dims; ++k) {
      free[k] = chart.cap(k) * level[k] / options.grid;
    }
    if (chart.complete(free, plan)) scored.emplace_back(half_value(plan), free);
    Eigen::Index k = 0;
    while (k < dims && ++level[k] > options.grid) level[k++] = 0;
    if (k == dims) break;
  }
  if (scored.empty()) {
    throw Error(ErrorCode::kInfeasible, "no feasible plan on the search grid");
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // Pattern search along ±e_a and ±e_a ± e_b from the best grid points.
  std::vector<std::vector<double>> moves;
  for (Eigen::Index a = 0; a < dims; ++a) {
    for (double sa : {-1.0, 1.0}) {
      std::vector<double> d(dims, 0.0);
      d[a] = sa;
      moves.push_back(d);
      for (Eigen::Index b = a + 1; b < dims; ++b) {
        for (double sb : {-1.0, 1.0}) {
          auto e = d;
          e[b] = sb;
          moves.push_back(e);
        }
      }
    }
  }

  double best = scored.front().first;
  const std::size_t starts = std::min<std::size_t>(options.refine_from, scored.size());
  for (std::size_t s = 0; s < starts; ++s) {
    auto point = scored[s].second;
    double value = scored[s].first;
    double step = 1.0 / options.grid;
    while (step > 1e-12) {
      bool improved = false;
      for (const auto& move : moves) {
        std::vector<double> trial(dims);
        for (Eigen::Index k = 0; k < dims; ++k) trial[k] = point[k] + step * move[k];
        if (!chart.complete(trial, plan)) continue;
        const double v = half_value(plan);
        if (v < value) {
          value = v;
          point = std::move(trial);
          improved = true;
          break;
        }
      }
      if (!improved) step /= 2.0;
    }
    best = std::min(best, value);
  }
  return best;
}

RescaledNetwork cosine_rescale(const MeasureNetwork& X) {
  const double size = size_p(X, 2.0);
  if (!(size > 0.0)) {
    throw Error(ErrorCode::kZeroSize, "cosine rescaling needs a network with nonzero size_2");
  }
  const double s = 0.5 * size;
  return {X.with_weights(X.weights() / (2.0 * s)), s};
}

Matrix lambda_rescale(const Matrix& cost, double lambda_xy, double lambda_star) {
  if (!(lambda_xy > 0.0) || !(lambda_star > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "both regularization parameters must be positive");
  }
  return (lambda_xy / lambda_star) * cost;
}

double cosine_rule_inner(const MeasureNetwork& X, const MeasureNetwork& Y, const Coupling& mu) {
  check_coupling(X, Y, mu);
  const double s = 0.5 * size_p(X, 2.0);
  const double t = 0.5 * size_p(Y, 2.0);
  const Matrix& plan = mu.plan();
  const double inner = (X.weights() * plan * Y.weights().transpose()).cwiseProduct(plan).sum();
  return s * s + t * t - 0.5 * inner;
}

}  // namespace gwnet
