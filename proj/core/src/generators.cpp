#include "gwnet/generators.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gwnet/error.hpp"

namespace gwnet {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// std::normal_distribution differs between standard libraries; Box-Muller
// over mt19937_64 (whose output the standard fixes) does not.
class StableNormal {
 public:
  explicit StableNormal(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

SbmSpec cycle_spec(const std::vector<double>& v, int block_size) {
  SbmSpec spec;
  spec.means = cycle_network(v);
  spec.variances = Matrix::Constant(spec.means.rows(), spec.means.cols(), 5.0);
  spec.block_sizes.assign(v.size(), block_size);
  return spec;
}

}  // namespace

void SbmSpec::validate() const {
  if (means.rows() != means.cols() || variances.rows() != variances.cols() ||
      means.rows() != variances.rows()) {
    throw Error(ErrorCode::kSizeMismatch, "means and variances must be square of equal size");
  }
  if (static_cast<Eigen::Index>(block_sizes.size()) != means.rows()) {
    throw Error(ErrorCode::kSizeMismatch, "one block size per community required");
  }
  if (block_sizes.empty()) {
    throw Error(ErrorCode::kEmptyBlock, "SBM needs at least one block");
  }
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    if (block_sizes[b] <= 0) {
      throw Error(ErrorCode::kEmptyBlock, "block " + std::to_string(b) + " has no nodes");
    }
  }
  if (!means.allFinite() || !variances.allFinite()) {
    throw Error(ErrorCode::kNonFiniteValue, "SBM parameters must be finite");
  }
  if ((variances.array() < 0.0).any()) {
    throw Error(ErrorCode::kInvalidArgument, "SBM variances must be nonnegative");
  }
}

MeasureNetwork sbm_sample(const SbmSpec& spec) {
  spec.validate();
  std::vector<int> block_of;
  for (std::size_t b = 0; b < spec.block_sizes.size(); ++b) {
    block_of.insert(block_of.end(), spec.block_sizes[b], static_cast<int>(b));
  }
  const Eigen::Index n = static_cast<Eigen::Index>(block_of.size());
  const Matrix sd = spec.variances.cwiseSqrt();

  StableNormal normal(spec.seed);
  Matrix w(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const int a = block_of[i], b = block_of[k];
      const double z = normal();
      w(i, k) = spec.means(a, b) + sd(a, b) * z;
    }
  }
  return MeasureNetwork::with_uniform_measure(std::move(w));
}

Matrix cycle_network(const std::vector<double>& v) {
  const Eigen::Index n = static_cast<Eigen::Index>(v.size());
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "cycle network needs a nonempty vector");
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      g(i, j) = v[static_cast<std::size_t>(((j - i) % n + n) % n)];
    }
  }
  return g;
}

std::vector<SbmSpec> experiment_preset(std::string_view name) {
  if (name == "table1") {
    return {
        cycle_spec({0, 25, 50, 75, 100}, 10),
        cycle_spec({0, 50, 100, 150, 200}, 10),
        cycle_spec({0, 25, 50, 75, 100}, 20),
        cycle_spec({0, 100}, 25),
        cycle_spec({-100, -50, 0, 50, 100}, 10),
    };
  }
  if (name == "table3") {
    return {
        cycle_spec({0, 0}, 10),  cycle_spec({0, 5}, 10),  cycle_spec({0, 10}, 10),
        cycle_spec({0, 15}, 10), cycle_spec({0, 20}, 10),
    };
  }
  throw Error(ErrorCode::kUnknownPreset,
              "unknown preset '" + std::string(name) + "' (expected table1 or table3)");
}

std::vector<LabeledNetwork> sample_collection(const std::vector<SbmSpec>& specs, int per_class,
                                              std::uint64_t seed) {
  if (per_class <= 0) throw Error(ErrorCode::kInvalidArgument, "per_class must be positive");
  std::vector<LabeledNetwork> out;
  out.reserve(specs.size() * static_cast<std::size_t>(per_class));
  for (std::size_t c = 0; c < specs.size(); ++c) {
    for (int k = 0; k < per_class; ++k) {
      SbmSpec spec = specs[c];
      spec.seed = splitmix64(splitmix64(splitmix64(seed) ^ (c + 1)) ^ static_cast<std::uint64_t>(k));
      std::ostringstream label;
      label << "c" << (c + 1) << "_" << k;
      out.push_back({label.str(), static_cast<int>(c + 1), sbm_sample(spec)});
    }
  }
  return out;
}

MeasureNetwork normalize_max_abs(const MeasureNetwork& X) {
  const double top = X.weights().cwiseAbs().maxCoeff();
  if (!(top > 0.0)) {
    throw Error(ErrorCode::kZeroNetwork, "cannot normalize a network whose weights are all zero");
  }
  return X.with_weights(X.weights() / top);
}

}  // namespace gwnet
