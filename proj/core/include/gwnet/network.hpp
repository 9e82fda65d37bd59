#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gwnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Order value for p = ∞.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Tolerance used to validate the marginals of a coupling.
inline constexpr double kMarginalTolerance = 1e-9;

/// Measures whose total mass is within this distance of 1 are renormalized;
/// anything further off is rejected.
inline constexpr double kRenormalizeTolerance = 1e-9;

/// Throws InvalidArgument unless p ∈ [1, ∞].
void check_order(double p);

/// A finite measure network: square weight matrix of arbitrary sign, fully
/// supported probability measure on the nodes, optional node labels.
///
/// Immutable after construction. The constructor validates its inputs and
/// renormalizes the measure when its total is within 1e-9 of 1.
class MeasureNetwork {
 public:
  MeasureNetwork(Matrix weights, Vector measure, std::vector<std::string> labels = {});

  /// Network with the uniform measure 1/n.
  static MeasureNetwork with_uniform_measure(Matrix weights,
                                             std::vector<std::string> labels = {});

  /// The one-node network N_1(a).
  static MeasureNetwork one_point(double a);

  Eigen::Index size() const noexcept { return weights_.rows(); }
  const Matrix& weights() const noexcept { return weights_; }
  const Vector& measure() const noexcept { return measure_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  double weight(Eigen::Index i, Eigen::Index k) const { return weights_(i, k); }
  double mass(Eigen::Index i) const { return measure_(i); }

  /// Same measure and labels, new weights of the same shape.
  MeasureNetwork with_weights(Matrix weights) const;

 private:
  Matrix weights_;
  Vector measure_;
  std::vector<std::string> labels_;
};

/// Transport plan between two node measures.
class Coupling {
 public:
  /// Validates nonnegativity and that row/column sums match the marginals
  /// within `tolerance`.
  Coupling(Matrix plan, Vector row_marginal, Vector col_marginal,
           double tolerance = kMarginalTolerance);

  /// Marginals taken from the plan's own row and column sums.
  static Coupling from_plan(Matrix plan);

  const Matrix& plan() const noexcept { return plan_; }
  const Vector& row_marginal() const noexcept { return row_marginal_; }
  const Vector& col_marginal() const noexcept { return col_marginal_; }
  Eigen::Index rows() const noexcept { return plan_.rows(); }
  Eigen::Index cols() const noexcept { return plan_.cols(); }

  Coupling transpose() const;

 private:
  Matrix plan_;
  Vector row_marginal_;
  Vector col_marginal_;
};

/// Finite distribution on the real line: sorted atoms with merged duplicates.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<double> atoms, std::vector<double> masses);

  static DiscreteDistribution dirac(double location);

  const std::vector<double>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& masses() const noexcept { return masses_; }
  std::size_t size() const noexcept { return atoms_.size(); }

 private:
  std::vector<double> atoms_;
  std::vector<double> masses_;
};

Coupling product_coupling(const Vector& mu, const Vector& nu);
Coupling diagonal_coupling(const Vector& mu);

/// Throws MarginalMismatch unless `mu` couples the measures of X and Y.
void check_coupling(const MeasureNetwork& X, const MeasureNetwork& Y, const Coupling& mu);

/// p-distortion of a coupling, evaluated as the quadruple sum over the
/// support of the plan. For p = ∞ this is the maximum weight discrepancy over
/// pairs of support cells.
double distortion(const MeasureNetwork& X, const MeasureNetwork& Y, const Coupling& mu,
                  double p);

/// p = 2 distortion through ‖ω_X‖² + ‖ω_Y‖² − 2⟨ω_X μ ω_Yᵀ, μ⟩.
/// O(m n (m + n)) instead of O(m² n²).
double distortion_p2_fast(const MeasureNetwork& X, const MeasureNetwork& Y,
                          const Coupling& mu);

/// d_{N,p}(X, N_1(a)) = ½‖ω_X − a‖_{L^p(μ_X ⊗ μ_X)}.
double dnp_to_point(const MeasureNetwork& X, double a, double p);

struct GpEvaluation {
  double violating_mass;  // μ⊗μ({|ω_X − ω_Y| ≥ eps})
  bool feasible;          // violating_mass ≤ alpha · eps
};

/// Evaluates the Gromov-Prokhorov constraint for one coupling. No
/// minimization over couplings is attempted.
GpEvaluation gp_objective(const MeasureNetwork& X, const MeasureNetwork& Y, const Coupling& mu,
                          double eps, double alpha);

}  // namespace gwnet
