#pragma once

#include <optional>

#include "gwnet/invariants.hpp"
#include "gwnet/network.hpp"

namespace gwnet {

/// Third-lower-bound cost: C(x, y) = W_p(ω_X(x,·)_* μ_X, ω_Y(y,·)_* μ_Y), or
/// the column analogue for the incoming direction.
struct TlbCostMatrix {
  Matrix cost;
  Direction direction;
  double order;
};

/// Every bound of the hierarchy for one pair at one order p.
/// szlb ≤ rflb_d ≤ rtlb_d holds for both directions.
struct BoundReport {
  double order = 2.0;
  double szlb = 0.0;
  double rflb_out = 0.0;
  double rflb_in = 0.0;
  double rslb = 0.0;
  double rtlb_out = 0.0;
  double rtlb_in = 0.0;
  double rtlb_max = 0.0;
  // Optimal plan of whichever direction attains rtlb_max.
  std::optional<Coupling> tlb_coupling;
};

struct TlbResult {
  double value;
  Coupling coupling;
};

// All bounds take a finite order p ≥ 1 and bound 2·d_{N,p}(X, Y) from below.

double szlb(const MeasureNetwork& X, const MeasureNetwork& Y, double p);
double rflb(const MeasureNetwork& X, const MeasureNetwork& Y, double p, Direction direction);
double rslb(const MeasureNetwork& X, const MeasureNetwork& Y, double p);

TlbCostMatrix tlb_cost(const MeasureNetwork& X, const MeasureNetwork& Y, double p,
                       Direction direction);

/// min over couplings of ‖C‖_{L^p(π)}: exact OT on C^p, then the p-th root.
TlbResult rtlb(const MeasureNetwork& X, const MeasureNetwork& Y, double p, Direction direction);

/// Same as above with a precomputed cost matrix.
TlbResult rtlb_from_cost(const TlbCostMatrix& cost, const Vector& mu_x, const Vector& mu_y);

BoundReport rtlb_max(const MeasureNetwork& X, const MeasureNetwork& Y, double p);

}  // namespace gwnet
