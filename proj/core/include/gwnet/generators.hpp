#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gwnet/network.hpp"

namespace gwnet {

/// Gaussian stochastic block model: block pair (a, b) draws every weight
/// from Normal(means(a, b), variances(a, b)).
struct SbmSpec {
  Matrix means;
  Matrix variances;
  std::vector<int> block_sizes;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument / SizeMismatch / EmptyBlock on a malformed spec.
  void validate() const;
};

/// Samples one network: Σ n_i nodes ordered block by block, uniform
/// measure. Identical output for identical specs on every platform.
MeasureNetwork sbm_sample(const SbmSpec& spec);

/// G_N(v): entry (i, j) = v[(j − i) mod N]; row i is v right-shifted i times.
Matrix cycle_network(const std::vector<double>& v);

/// Experiment presets "table1" (five community SBM classes) and "table3"
/// (two-community sliding means). Variances are 5 everywhere; seeds are 0.
std::vector<SbmSpec> experiment_preset(std::string_view name);

struct LabeledNetwork {
  std::string label;
  int class_id;  // 1-based
  MeasureNetwork network;
};

/// `per_class` samples of every spec. Sample k of class c is seeded from
/// (seed, c, k), so collections are reproducible and classes independent.
std::vector<LabeledNetwork> sample_collection(const std::vector<SbmSpec>& specs, int per_class,
                                              std::uint64_t seed);

/// Divides every weight by max |ω|. Throws ZeroNetwork when ω ≡ 0.
MeasureNetwork normalize_max_abs(const MeasureNetwork& X);

}  // namespace gwnet
