#pragma once

#include <functional>
#include <vector>

#include "gwnet/network.hpp"

namespace gwnet {

enum class Direction { kOut, kIn };

struct EccentricityVector {
  Vector values;
  Direction direction;
  double order;
};

enum class LevelKind { kSublevel, kSuperlevel };

/// A size function sampled on an ascending threshold grid.
class SizeCurve {
 public:
  /// Throws InvalidArgument when the grid is not strictly ascending or the
  /// values are not monotone in the direction implied by `kind` (1e-12 slack).
  SizeCurve(std::vector<double> grid, std::vector<double> values, double order, LevelKind kind);

  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double order() const noexcept { return order_; }
  LevelKind kind() const noexcept { return kind_; }

  /// Linear interpolation, clamped to the end values outside the grid.
  double at(double t) const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
  double order_;
  LevelKind kind_;
};

/// ‖ω_X‖_{L^p(μ_X ⊗ μ_X)}; p = ∞ gives max |ω_X|.
double size_p(const MeasureNetwork& X, double p);

/// Row (out) or column (in) L^p(μ_X) norms of ω_X.
EccentricityVector eccentricity(const MeasureNetwork& X, double p, Direction direction);

/// ω_X(i, ·)_* μ_X (out) or ω_X(·, i)_* μ_X (in).
DiscreteDistribution local_distribution(const MeasureNetwork& X, Eigen::Index node,
                                        Direction direction);

/// (ecc_{p,X})_* μ_X.
DiscreteDistribution ecc_pushforward(const MeasureNetwork& X, double p, Direction direction);

/// (ω_X)_* (μ_X ⊗ μ_X).
DiscreteDistribution weight_pushforward(const MeasureNetwork& X);

/// ‖ω_X 1{ω_X ≤ t}‖_{L^p(μ_X ⊗ μ_X)}, finite p only.
double sub_size(const MeasureNetwork& X, double p, double t);

/// ‖ω_X 1{ω_X ≥ t}‖_{L^p(μ_X ⊗ μ_X)}, finite p only.
double sup_size(const MeasureNetwork& X, double p, double t);

/// Uniform grid of `samples` points on [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, int samples);

/// Samples sub_size (or sup_size) of X on `grid`.
SizeCurve size_curve(const MeasureNetwork& X, double p, LevelKind kind,
                     const std::vector<double>& grid);

/// Default sublevel curve: 512 samples on [0, max ω_X].
SizeCurve size_curve(const MeasureNetwork& X, double p, LevelKind kind = LevelKind::kSublevel);

/// Surface area of the unit n-sphere (S_0 = 2, S_1 = 2π, S_n = 2π S_{n-2}/(n-1)).
double sphere_area(int n);

/// subSize_{p,t}(Sⁿ) for the round sphere with geodesic distance and
/// normalized volume measure. Closed form for n = 1, adaptive Simpson
/// quadrature (absolute error 1e-10) for n ≥ 2. Throws DomainError unless
/// t ∈ [0, π].
double sphere_subsize_closed_form(int n, double p, double t);

/// Sublevel size curve of Sⁿ sampled on `samples` points of [0, π].
SizeCurve sphere_size_curve(int n, double p, int samples = 512);

struct InterleavingOptions {
  double tolerance = 1e-4;
};

/// inf{ε ≥ 0 : f ≤ g^ε and g ≤ f^ε} with h^ε(t) = h(min(t + ε, T_max)) + ε,
/// found by bisection. Feasibility is checked at every grid point of both
/// curves; the returned ε is feasible and within `tolerance` of the infimum.
double interleaving_distance(const SizeCurve& f, const SizeCurve& g,
                             const InterleavingOptions& options = {});

/// Finite model of Sⁿ for n ∈ {1, 2}.
///
/// n = 1: `resolution` equally spaced angles, arc-length distance, uniform
/// measure. n = 2: latitude bands of equal angular height, each carrying
/// 2 × (band count) equally spaced nodes; mass proportional to band area;
/// great-circle distance. The band count is round(sqrt(resolution / 2)).
MeasureNetwork sphere_discretize(int n, int resolution);

}  // namespace gwnet
