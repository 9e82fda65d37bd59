#pragma once

#include <optional>

#include "gwnet/error.hpp"
#include "gwnet/network.hpp"
#include "gwnet/ot.hpp"

namespace gwnet {

/// Upper-bound estimate of d_{N,2} from a feasible coupling.
struct GwResult {
  Coupling coupling;
  double value;  // ½ · dis_2(coupling)
  int iterations;
  bool converged;
  SinkhornDiagnostics last_sinkhorn;
};

struct GwOptions {
  SinkhornConfig sinkhorn;
  int outer_iters = 200;
  double plan_tolerance = 1e-8;  // L1 change between outer iterates
  // Start from the diagonal coupling when both networks share the same
  // measure; otherwise the product coupling is used.
  bool diagonal_init = false;
  // Build each inner kernel with log_initialize.
  bool log_init = true;
};

/// Thrown when the outer loop exhausts outer_iters. The carried result is
/// still a valid upper bound.
class GwNotConverged : public Error {
 public:
  explicit GwNotConverged(GwResult last);
  const GwResult& last() const noexcept { return last_; }

 private:
  GwResult last_;
};

/// Linearized GW cost at plan π: M(i,j) = Σ_{k,l} |ω_X(i,k) − ω_Y(j,l)|² π(k,l).
Matrix gw_linearized_cost(const MeasureNetwork& X, const MeasureNetwork& Y, const Matrix& plan);

/// Entropic GW for p = 2: alternate the linearized cost with a log-domain
/// Sinkhorn projection until the plan stops moving.
GwResult entropic_gw(const MeasureNetwork& X, const MeasureNetwork& Y, const GwOptions& options);

struct BruteforceOptions {
  int grid = 10;      // plan entries are searched on multiples of 1/grid
  int refine_from = 10;
};

/// Desk-scale search over the transportation polytope for min ½·dis_p.
/// Returns the best value found, an upper bound on d_{N,p}. Requires
/// |X|·|Y| ≤ 9 (InstanceTooLarge otherwise).
double gw_bruteforce(const MeasureNetwork& X, const MeasureNetwork& Y, double p,
                     const BruteforceOptions& options = {});

struct RescaledNetwork {
  MeasureNetwork network;
  double scale;  // s = ½ size_2(X); weights were divided by 2s
};

/// Rescales X to unit size_2. Throws ZeroSize when ω ≡ 0.
RescaledNetwork cosine_rescale(const MeasureNetwork& X);

/// M* = (λ_XY / λ*) M, so that exp(−λ* M*) = exp(−λ_XY M).
Matrix lambda_rescale(const Matrix& cost, double lambda_xy, double lambda_star);

/// s² + t² − ½ Σ ω_X(i,k) ω_Y(j,l) π(i,j) π(k,l), with s, t the half-sizes;
/// equals ¼ dis_2(π)².
double cosine_rule_inner(const MeasureNetwork& X, const MeasureNetwork& Y, const Coupling& mu);

}  // namespace gwnet
