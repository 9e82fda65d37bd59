#include "gwnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gwnet/error.hpp"
#include "internal.hpp"

namespace gwnet {

void check_order(double p) {
  if (!(p >= 1.0)) {
    std::ostringstream os;
    os << "order p must lie in [1, inf], got " << p;
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
}

namespace {

Vector validated_measure(const Vector& measure, Eigen::Index n) {
  if (measure.size() != n) {
    std::ostringstream os;
    os << "measure has " << measure.size() << " entries for " << n << " nodes";
    throw Error(ErrorCode::kSizeMismatch, os.str());
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(measure(i))) {
      throw Error(ErrorCode::kNonFiniteValue, "measure entry " + std::to_string(i));
    }
    if (measure(i) <= 0.0) {
      std::ostringstream os;
      os << "node " << i << " has mass " << measure(i) << "; measures must have full support";
      throw Error(ErrorCode::kNonPositiveMass, os.str());
    }
  }
  const double total = measure.sum();
  if (std::abs(total - 1.0) > kRenormalizeTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "measure sums to " << total;
    throw Error(ErrorCode::kMeasureNotNormalized, os.str());
  }
  return measure / total;
}

}  // namespace

MeasureNetwork::MeasureNetwork(Matrix weights, Vector measure, std::vector<std::string> labels)
    : weights_(std::move(weights)), labels_(std::move(labels)) {
  if (weights_.rows() != weights_.cols()) {
    std::ostringstream os;
    os << "weights are " << weights_.rows() << "x" << weights_.cols();
    throw Error(ErrorCode::kNonSquareWeights, os.str());
  }
  if (weights_.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "network must have at least one node");
  }
  if (!weights_.allFinite()) {
    throw Error(ErrorCode::kNonFiniteValue, "weights contain NaN or infinity");
  }
  measure_ = validated_measure(measure, weights_.rows());
  if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != weights_.rows()) {
    throw Error(ErrorCode::kSizeMismatch, "label count differs from node count");
  }
}

MeasureNetwork MeasureNetwork::with_uniform_measure(Matrix weights,
                                                    std::vector<std::string> labels) {
  const Eigen::Index n = weights.rows();
  Vector measure = Vector::Constant(n, n > 0 ? 1.0 / static_cast<double>(n) : 0.0);
  return MeasureNetwork(std::move(weights), std::move(measure), std::move(labels));
}

MeasureNetwork MeasureNetwork::one_point(double a) {
  return MeasureNetwork(Matrix::Constant(1, 1, a), Vector::Ones(1));
}

MeasureNetwork MeasureNetwork::with_weights(Matrix weights) const {
  if (weights.rows() != size() || weights.cols() != size()) {
    throw Error(ErrorCode::kSizeMismatch, "replacement weights change the node count");
  }
  return MeasureNetwork(std::move(weights), measure_, labels_);
}

Coupling::Coupling(Matrix plan, Vector row_marginal, Vector col_marginal, double tolerance)
    : plan_(std::move(plan)),
      row_marginal_(std::move(row_marginal)),
      col_marginal_(std::move(col_marginal)) {
  if (plan_.rows() != row_marginal_.size() || plan_.cols() != col_marginal_.size()) {
    throw Error(ErrorCode::kSizeMismatch, "plan shape does not match its marginals");
  }
  if (!plan_.allFinite()) {
    throw Error(ErrorCode::kNonFiniteValue, "plan contains NaN or infinity");
  }
  if ((plan_.array() < 0.0).any()) {
    throw Error(ErrorCode::kInvalidArgument, "plan has negative entries");
  }
  const double row_err = (plan_.rowwise().sum() - row_marginal_).cwiseAbs().maxCoeff();
  const double col_err = (plan_.colwise().sum().transpose() - col_marginal_).cwiseAbs().maxCoeff();
  if (row_err > tolerance || col_err > tolerance) {
    std::ostringstream os;
    os << "plan marginal error " << std::max(row_err, col_err) << " exceeds " << tolerance;
    throw Error(ErrorCode::kMarginalMismatch, os.str());
  }
}

Coupling Coupling::from_plan(Matrix plan) {
  Vector rows = plan.rowwise().sum();
  Vector cols = plan.colwise().sum().transpose();
  return Coupling(std::move(plan), std::move(rows), std::move(cols));
}

Coupling Coupling::transpose() const {
  return Coupling(plan_.transpose(), col_marginal_, row_marginal_, kInfinity);
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> atoms, std::vector<double> masses) {
  if (atoms.size() != masses.size()) {
    throw Error(ErrorCode::kSizeMismatch, "atoms and masses differ in length");
  }
  if (atoms.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "distribution needs at least one atom");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (!std::isfinite(atoms[k]) || !std::isfinite(masses[k])) {
      throw Error(ErrorCode::kNonFiniteValue, "atom or mass is not finite");
    }
    if (masses[k] <= 0.0) {
      throw Error(ErrorCode::kNonPositiveMass, "distribution masses must be positive");
    }
    total += masses[k];
  }
  if (std::abs(total - 1.0) > kRenormalizeTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "distribution masses sum to " << total;
    throw Error(ErrorCode::kMeasureNotNormalized, os.str());
  }

  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
  atoms_.reserve(atoms.size());
  masses_.reserve(atoms.size());
  for (std::size_t k : order) {
    if (!atoms_.empty() && atoms_.back() == atoms[k]) {
      masses_.back() += masses[k] / total;
    } else {
      atoms_.push_back(atoms[k]);
      masses_.push_back(masses[k] / total);
    }
  }
}

DiscreteDistribution DiscreteDistribution::dirac(double location) {
  return DiscreteDistribution({location}, {1.0});
}

Coupling product_coupling(const Vector& mu, const Vector& nu) {
  Matrix plan = mu * nu.transpose();
  return Coupling(std::move(plan), mu, nu);
}

Coupling diagonal_coupling(const Vector& mu) {
  Matrix plan = mu.asDiagonal();
  return Coupling(std::move(plan), mu, mu);
}

void check_coupling(const MeasureNetwork& X, const MeasureNetwork& Y, const Coupling& mu) {
  if (mu.rows() != X.size() || mu.cols() != Y.size()) {
    std::ostringstream os;
    os << "coupling is " << mu.rows() << "x" << mu.cols() << " for networks of size "
       << X.size() << " and " << Y.size();
    throw Error(ErrorCode::kMarginalMismatch, os.str());
  }
  const double row_err = (mu.plan().rowwise().sum() - X.measure()).cwiseAbs().maxCoeff();
  const double col_err =
      (mu.plan().colwise().sum().transpose() - Y.measure()).cwiseAbs().maxCoeff();
  if (row_err > kMarginalTolerance || col_err > kMarginalTolerance) {
    std::ostringstream os;
    os << "coupling marginals differ from the network measures by "
       << std::max(row_err, col_err);
    throw Error(ErrorCode::kMarginalMismatch, os.str());
  }
}

double distortion(const MeasureNetwork& X, const MeasureNetwork& Y, const Coupling& mu,
                  double p) {
  check_order(p);
  check_coupling(X, Y, mu);
  const auto support = detail::plan_support(mu.plan());
  const Matrix& wx = X.weights();
  const Matrix& wy = Y.weights();

  if (std::isinf(p)) {
    double worst = 0.0;
    for (const auto& a : support) {
      for (const auto& b : support) {
        worst = std::max(worst, std::abs(wx(a.row, b.row) - wy(a.col, b.col)));
      }
    }
    return worst;
  }

  double total = 0.0;
  for (const auto& a : support) {
    double inner = 0.0;
    for (const auto& b : support) {
      inner += detail::abs_pow(wx(a.row, b.row) - wy(a.col, b.col), p) * b.mass;
    }
    total += inner * a.mass;
  }
  return detail::root(total, p);
}

double distortion_p2_fast(const MeasureNetwork& X, const MeasureNetwork& Y,
                          const Coupling& mu) {
  check_coupling(X, Y, mu);
  const Vector& mx = X.measure();
  const Vector& my = Y.measure();
  const double size_x = mx.dot(X.weights().array().square().matrix() * mx);
  const double size_y = my.dot(Y.weights().array().square().matrix() * my);
  const Matrix& plan = mu.plan();
  const double cross = (X.weights() * plan * Y.weights().transpose()).cwiseProduct(plan).sum();
  return std::sqrt(std::max(0.0, size_x + size_y - 2.0 * cross));
}

double dnp_to_point(const MeasureNetwork& X, double a, double p) {
  check_order(p);
  const Matrix diff = (X.weights().array() - a).abs().matrix();
  if (std::isinf(p)) {
    return 0.5 * diff.maxCoeff();
  }
  const Vector& m = X.measure();
  const double total = m.dot(diff.unaryExpr([p](double d) { return detail::abs_pow(d, p); }) * m);
  return 0.5 * detail::root(total, p);
}

GpEvaluation gp_objective(const MeasureNetwork& X, const MeasureNetwork& Y, const Coupling& mu,
                          double eps, double alpha) {
  if (!(eps >= 0.0) || !(alpha >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "eps and alpha must be nonnegative");
  }
  check_coupling(X, Y, mu);
  const auto support = detail::plan_support(mu.plan());
  double mass = 0.0;
  for (const auto& a : support) {
    for (const auto& b : support) {
      if (std::abs(X.weight(a.row, b.row) - Y.weight(a.col, b.col)) >= eps) {
        mass += a.mass * b.mass;
      }
    }
  }
  return {mass, mass <= alpha * eps};
}

}  // namespace gwnet
