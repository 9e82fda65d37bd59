#include "gwnet/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gwnet/error.hpp"
#include "internal.hpp"

namespace gwnet {

namespace {

constexpr double kPi = std::numbers::pi;

void check_finite_order(double p, const char* what) {
  check_order(p);
  if (std::isinf(p)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " requires a finite order");
  }
}

double lp_norm(const Eigen::Ref<const Vector>& values, const Vector& measure, double p) {
  if (std::isinf(p)) return values.cwiseAbs().maxCoeff();
  double total = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    total += detail::abs_pow(values(k), p) * measure(k);
  }
  return detail::root(total, p);
}

template <typename Keep>
double masked_size(const MeasureNetwork& X, double p, Keep keep) {
  const Matrix& w = X.weights();
  const Vector& m = X.measure();
  double total = 0.0;
  for (Eigen::Index k = 0; k < w.cols(); ++k) {
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      if (keep(w(i, k))) total += detail::abs_pow(w(i, k), p) * m(i) * m(k);
    }
  }
  return detail::root(total, p);
}

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 50);
}

}  // namespace

SizeCurve::SizeCurve(std::vector<double> grid, std::vector<double> values, double order,
                     LevelKind kind)
    : grid_(std::move(grid)), values_(std::move(values)), order_(order), kind_(kind) {
  if (grid_.empty() || grid_.size() != values_.size()) {
    throw Error(ErrorCode::kSizeMismatch, "size curve needs equally many grid points and values");
  }
  double scale = 1.0;
  for (double v : values_) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 1; k < grid_.size(); ++k) {
    if (!(grid_[k] > grid_[k - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "size curve grid must be strictly ascending");
    }
    const double step = values_[k] - values_[k - 1];
    const bool monotone =
        kind_ == LevelKind::kSublevel ? step >= -1e-12 * scale : step <= 1e-12 * scale;
    if (!monotone) {
      throw Error(ErrorCode::kInvalidArgument,
                  kind_ == LevelKind::kSublevel ? "sublevel curve must be nondecreasing"
                                                : "superlevel curve must be nonincreasing");
    }
  }
}

double SizeCurve::at(double t) const {
  if (t <= grid_.front()) return values_.front();
  if (t >= grid_.back()) return values_.back();
  const auto hi = std::upper_bound(grid_.begin(), grid_.end(), t);
  const std::size_t k = static_cast<std::size_t>(hi - grid_.begin());
  const double t0 = grid_[k - 1], t1 = grid_[k];
  const double w = (t - t0) / (t1 - t0);
  return values_[k - 1] + w * (values_[k] - values_[k - 1]);
}

double size_p(const MeasureNetwork& X, double p) {
  check_order(p);
  if (std::isinf(p)) return X.weights().cwiseAbs().maxCoeff();
  return masked_size(X, p, [](double) { return true; });
}

EccentricityVector eccentricity(const MeasureNetwork& X, double p, Direction direction) {
  check_order(p);
  const Eigen::Index n = X.size();
  Vector values(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    values(i) = direction == Direction::kOut ? lp_norm(X.weights().row(i).transpose(), X.measure(), p)
                                             : lp_norm(X.weights().col(i), X.measure(), p);
  }
  return {std::move(values), direction, p};
}

DiscreteDistribution local_distribution(const MeasureNetwork& X, Eigen::Index node,
                                        Direction direction) {
  if (node < 0 || node >= X.size()) {
    std::ostringstream os;
    os << "node " << node << " outside [0, " << X.size() << ")";
    throw Error(ErrorCode::kIndexOutOfRange, os.str());
  }
  const Eigen::Index n = X.size();
  std::vector<double> atoms(n), masses(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    atoms[k] = direction == Direction::kOut ? X.weight(node, k) : X.weight(k, node);
    masses[k] = X.mass(k);
  }
  return DiscreteDistribution(std::move(atoms), std::move(masses));
}

DiscreteDistribution ecc_pushforward(const MeasureNetwork& X, double p, Direction direction) {
  const Vector ecc = eccentricity(X, p, direction).values;
  std::vector<double> atoms(ecc.data(), ecc.data() + ecc.size());
  std::vector<double> masses(X.measure().data(), X.measure().data() + X.size());
  return DiscreteDistribution(std::move(atoms), std::move(masses));
}

DiscreteDistribution weight_pushforward(const MeasureNetwork& X) {
  const Eigen::Index n = X.size();
  std::vector<double> atoms, masses;
  atoms.reserve(n * n);
  masses.reserve(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      atoms.push_back(X.weight(i, k));
      masses.push_back(X.mass(i) * X.mass(k));
    }
  }
  return DiscreteDistribution(std::move(atoms), std::move(masses));
}

double sub_size(const MeasureNetwork& X, double p, double t) {
  check_finite_order(p, "sub_size");
  return masked_size(X, p, [t](double w) { return w <= t; });
}

double sup_size(const MeasureNetwork& X, double p, double t) {
  check_finite_order(p, "sup_size");
  return masked_size(X, p, [t](double w) { return w >= t; });
}

std::vector<double> uniform_grid(double lo, double hi, int samples) {
  if (samples < 2 || !(hi > lo)) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs at least two samples on a proper interval");
  }
  std::vector<double> grid(samples);
  for (int k = 0; k < samples; ++k) {
    grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
  }
  grid.back() = hi;
  return grid;
}

SizeCurve size_curve(const MeasureNetwork& X, double p, LevelKind kind,
                     const std::vector<double>& grid) {
  check_finite_order(p, "size_curve");
  // Sort the weight masses once; every threshold is then a prefix/suffix sum.
  const Matrix& w = X.weights();
  std::vector<std::pair<double, double>> cells;
  cells.reserve(w.size());
  for (Eigen::Index k = 0; k < w.cols(); ++k) {
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      cells.emplace_back(w(i, k), detail::abs_pow(w(i, k), p) * X.mass(i) * X.mass(k));
    }
  }
  std::sort(cells.begin(), cells.end());

  std::vector<double> values(grid.size());
  if (kind == LevelKind::kSublevel) {
    std::size_t next = 0;
    double acc = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      while (next < cells.size() && cells[next].first <= grid[g]) acc += cells[next++].second;
      values[g] = detail::root(acc, p);
    }
  } else {
    std::size_t next = cells.size();
    double acc = 0.0;
    for (std::size_t g = grid.size(); g-- > 0;) {
      while (next > 0 && cells[next - 1].first >= grid[g]) acc += cells[--next].second;
      values[g] = detail::root(acc, p);
    }
  }
  return SizeCurve(grid, std::move(values), p, kind);
}

SizeCurve size_curve(const MeasureNetwork& X, double p, LevelKind kind) {
  const double top = X.weights().maxCoeff();
  const double hi = top > 0.0 ? top : 1.0;
  return size_curve(X, p, kind, uniform_grid(0.0, hi, 512));
}

double sphere_area(int n) {
  if (n < 0) throw Error(ErrorCode::kUnsupportedDimension, "sphere dimension must be >= 0");
  if (n == 0) return 2.0;
  if (n == 1) return 2.0 * kPi;
  return 2.0 * kPi * sphere_area(n - 2) / static_cast<double>(n - 1);
}

double sphere_subsize_closed_form(int n, double p, double t) {
  check_finite_order(p, "sphere_subsize_closed_form");
  if (n < 1) throw Error(ErrorCode::kUnsupportedDimension, "sphere dimension must be >= 1");
  if (!(t >= 0.0 && t <= kPi)) {
    std::ostringstream os;
    os << "threshold " << t << " outside [0, pi]";
    throw Error(ErrorCode::kDomainError, os.str());
  }
  if (n == 1) {
    return detail::root(std::pow(t, p + 1.0) / ((p + 1.0) * kPi), p);
  }
  const double ratio = sphere_area(n - 1) / sphere_area(n);
  const auto integrand = [n, p](double phi) {
    return std::pow(phi, p) * std::pow(std::sin(phi), n - 1);
  };
  return detail::root(ratio * integrate(integrand, 0.0, t, 1e-10), p);
}

SizeCurve sphere_size_curve(int n, double p, int samples) {
  const auto grid = uniform_grid(0.0, kPi, samples);
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    values[k] = sphere_subsize_closed_form(n, p, grid[k]);
  }
  return SizeCurve(grid, std::move(values), p, LevelKind::kSublevel);
}

double interleaving_distance(const SizeCurve& f, const SizeCurve& g,
                             const InterleavingOptions& options) {
  if (f.kind() != LevelKind::kSublevel || g.kind() != LevelKind::kSublevel) {
    throw Error(ErrorCode::kKindMismatch, "interleaving distance needs sublevel curves");
  }
  if (!(options.tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bisection tolerance must be positive");
  }

  // f ≤ h^ε on every grid point of f.
  const auto dominated = [](const SizeCurve& lower, const SizeCurve& upper, double eps) {
    const double top = upper.grid().back();
    for (std::size_t k = 0; k < lower.grid().size(); ++k) {
      const double shifted = upper.at(std::min(lower.grid()[k] + eps, top)) + eps;
      if (lower.values()[k] > shifted + 1e-12) return false;
    }
    return true;
  };
  const auto feasible = [&](double eps) { return dominated(f, g, eps) && dominated(g, f, eps); };

  if (feasible(0.0)) return 0.0;
  double lo = 0.0;
  double hi = std::max({f.values().back() - g.values().front(),
                        g.values().back() - f.values().front(), options.tolerance});
  while (!feasible(hi)) hi *= 2.0;
  while (hi - lo > options.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

MeasureNetwork sphere_discretize(int n, int resolution) {
  if (n == 1) {
    if (resolution < 1) {
      throw Error(ErrorCode::kInvalidArgument, "circle resolution must be positive");
    }
    Matrix w(resolution, resolution);
    for (int i = 0; i < resolution; ++i) {
      for (int k = 0; k < resolution; ++k) {
        const int steps = std::abs(i - k);
        const int arc = std::min(steps, resolution - steps);
        w(i, k) = 2.0 * kPi * static_cast<double>(arc) / static_cast<double>(resolution);
      }
    }
    return MeasureNetwork::with_uniform_measure(std::move(w));
  }
  if (n == 2) {
    if (resolution < 8) {
      throw Error(ErrorCode::kInvalidArgument, "sphere resolution must be at least 8");
    }
    const int bands = std::max(2, static_cast<int>(std::lround(std::sqrt(resolution / 2.0))));
    const int per_band = 2 * bands;
    const int total = bands * per_band;
    std::vector<Eigen::Vector3d> points;
    Vector measure(total);
    points.reserve(total);
    for (int b = 0; b < bands; ++b) {
      const double lo = kPi * b / bands;
      const double hi = kPi * (b + 1) / bands;
      const double theta = 0.5 * (lo + hi);
      const double band_mass = 0.5 * (std::cos(lo) - std::cos(hi));
      for (int k = 0; k < per_band; ++k) {
        const double phi = 2.0 * kPi * k / per_band;
        points.emplace_back(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                            std::cos(theta));
        measure(b * per_band + k) = band_mass / per_band;
      }
    }
    Matrix w(total, total);
    for (int i = 0; i < total; ++i) {
      for (int k = 0; k < total; ++k) {
        w(i, k) = i == k ? 0.0
                         : std::atan2(points[i].cross(points[k]).norm(), points[i].dot(points[k]));
      }
    }
    w = 0.5 * (w + w.transpose()).eval();
    return MeasureNetwork(std::move(w), std::move(measure));
  }
  throw Error(ErrorCode::kUnsupportedDimension,
              "sphere_discretize supports n = 1 or 2, got " + std::to_string(n));
}

}  // namespace gwnet
