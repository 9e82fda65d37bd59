#pragma once

#include <optional>

#include "gwnet/error.hpp"
#include "gwnet/network.hpp"

namespace gwnet {

// ---------------------------------------------------------------------------
// Exact discrete optimal transport
// ---------------------------------------------------------------------------

struct ExactOtResult {
  Coupling plan;
  double objective;
  // Dual certificate: row_potential(i) + col_potential(j) ≤ cost(i, j), with
  // equality on the support of the plan.
  Vector row_potential;
  Vector col_potential;
  int augmentations;
};

/// Minimizes Σ cost(i,j) π(i,j) over couplings of mu and nu.
///
/// Min-cost flow by successive shortest paths on the bipartite transport
/// graph (Dijkstra on reduced costs, dense O(m n) per search). The returned
/// potentials certify optimality.
///
/// Throws Infeasible when the marginals are not probability vectors of equal
/// mass (within 1e-9), InvalidArgument for non-finite costs.
ExactOtResult exact_ot(const Matrix& cost, const Vector& mu, const Vector& nu);

// ---------------------------------------------------------------------------
// Optimal transport on the real line
// ---------------------------------------------------------------------------

/// W_p between distributions on ℝ, via the merged quantile breakpoints:
/// (∫₀¹ |F⁻¹(t) − G⁻¹(t)|^p dt)^{1/p}. Exact for discrete inputs.
double wasserstein_1d(const DiscreteDistribution& a, const DiscreteDistribution& b, double p);

/// W_1 as ∫ |F(x) − G(x)| dx over the merged atom grid.
double wasserstein_1d_p1(const DiscreteDistribution& a, const DiscreteDistribution& b);

// ---------------------------------------------------------------------------
// Entropic optimal transport
// ---------------------------------------------------------------------------

struct SinkhornConfig {
  double lambda = 1.0;          // regularization λ, kernel exp(−λ M)
  int max_iters = 10000;
  double tolerance = 1e-9;      // L∞ marginal error
  double absorb_threshold = 1e30;

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

/// Stabilized kernel K_ij = exp(λ(−M_ij + u_i + v_j)) with its log-domain
/// potentials.
struct KernelState {
  Matrix kernel;
  Vector u;
  Vector v;
  double gamma = 0.0;
};

struct SinkhornDiagnostics {
  int iterations = 0;
  double marginal_error = 0.0;
  int absorptions = 0;
  // Extremes over every kernel built during the run.
  double min_kernel_entry = 0.0;
  double max_kernel_entry = 0.0;
};

struct SinkhornResult {
  Matrix plan;
  SinkhornDiagnostics diagnostics;

  /// The plan as a coupling, validated against mu and nu at the given
  /// tolerance.
  Coupling coupling(const Vector& mu, const Vector& nu,
                    double tolerance = kMarginalTolerance) const;
};

/// Raised when Sinkhorn exhausts max_iters; carries the last iterate.
class SinkhornNotConverged : public Error {
 public:
  explicit SinkhornNotConverged(SinkhornResult last);
  const SinkhornResult& last() const noexcept { return last_; }

 private:
  SinkhornResult last_;
};

/// Plain Sinkhorn scaling. Throws KernelUnderflow when some exp(−λ M_ij) is
/// zero or subnormal (or overflows), SinkhornNotConverged on max_iters.
SinkhornResult sinkhorn(const Matrix& cost, const SinkhornConfig& cfg, const Vector& mu,
                        const Vector& nu);

/// Sinkhorn with log-domain absorption of large scalings. Starts from
/// `init` when given (see log_initialize), otherwise from K = exp(−λ M).
SinkhornResult sinkhorn_log(const Matrix& cost, const SinkhornConfig& cfg, const Vector& mu,
                            const Vector& nu, const std::optional<KernelState>& init = {});

/// Translation factor γ for log initialization: (α + β) / 4, which centers
/// the kernel exponents λ(−M + 2γ) on zero.
double decide_param(double alpha, double beta);

/// Builds K = exp(λ(−M + 2γ)) with γ = decide_param(min M, max M); the shift
/// is held in the potentials u = v = γ. Throws RangeTooWide when
/// λ(max M − min M)/2 exceeds log(DBL_MAX).
KernelState log_initialize(const Matrix& cost, double lambda);

}  // namespace gwnet
