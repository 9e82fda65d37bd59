#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>

#include "gwnet/ot.hpp"

namespace gwnet {

namespace {

// Largest |exponent| for which exp() stays finite and normal.
const double kMaxExponent = std::min(std::log(DBL_MAX), -std::log(DBL_MIN));

void check_problem(const Matrix& cost, const Vector& mu, const Vector& nu) {
  if (mu.size() != cost.rows() || nu.size() != cost.cols()) {
    throw Error(ErrorCode::kSizeMismatch, "cost shape does not match the marginals");
  }
  if (cost.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty transport problem");
  }
  if (!cost.allFinite()) {
    throw Error(ErrorCode::kNonFiniteValue, "cost matrix has non-finite entries");
  }
  if ((mu.array() <= 0.0).any() || (nu.array() <= 0.0).any()) {
    throw Error(ErrorCode::kNonPositiveMass, "Sinkhorn marginals must be strictly positive");
  }
}

Matrix build_kernel(const Matrix& cost, double lambda, const Vector& u, const Vector& v) {
  Matrix k(cost.rows(), cost.cols());
  for (Eigen::Index j = 0; j < cost.cols(); ++j) {
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
      k(i, j) = std::exp(lambda * (-cost(i, j) + u(i) + v(j)));
    }
  }
  return k;
}

void track_kernel(const Matrix& kernel, SinkhornDiagnostics& diag) {
  diag.min_kernel_entry = std::min(diag.min_kernel_entry, kernel.minCoeff());
  diag.max_kernel_entry = std::max(diag.max_kernel_entry, kernel.maxCoeff());
}

// Alternating scaling b <- nu ./ (K'a), a <- mu ./ (K b). With `absorb`,
// scalings above the threshold are moved into the log potentials and the
// kernel is rebuilt.
SinkhornResult run_scaling(const Matrix& cost, const SinkhornConfig& cfg, const Vector& mu,
                           const Vector& nu, KernelState state, bool absorb) {
  SinkhornResult result;
  auto& diag = result.diagnostics;
  diag.min_kernel_entry = std::numeric_limits<double>::infinity();
  diag.max_kernel_entry = 0.0;
  track_kernel(state.kernel, diag);

  Matrix& kernel = state.kernel;
  Vector a = Vector::Ones(cost.rows());
  Vector b = Vector::Ones(cost.cols());
  double error = std::numeric_limits<double>::infinity();

  int it = 0;
  while (it < cfg.max_iters) {
    ++it;
    b = nu.cwiseQuotient(kernel.transpose() * a);
    a = mu.cwiseQuotient(kernel * b);
    if (!a.allFinite() || !b.allFinite()) {
      throw Error(ErrorCode::kKernelUnderflow,
                  "scaling vectors left the floating-point range at iteration " +
                      std::to_string(it));
    }

    if (absorb && std::max(a.maxCoeff(), b.maxCoeff()) > cfg.absorb_threshold) {
      state.u += a.array().log().matrix() / cfg.lambda;
      state.v += b.array().log().matrix() / cfg.lambda;
      kernel = build_kernel(cost, cfg.lambda, state.u, state.v);
      track_kernel(kernel, diag);
      a.setOnes();
      b.setOnes();
      ++diag.absorptions;
    }

    const Vector rows = a.cwiseProduct(kernel * b);
    const Vector cols = b.cwiseProduct(kernel.transpose() * a);
    error = std::max((rows - mu).cwiseAbs().maxCoeff(), (cols - nu).cwiseAbs().maxCoeff());
    if (error <= cfg.tolerance) break;
  }

  diag.iterations = it;
  diag.marginal_error = error;
  result.plan = a.asDiagonal() * kernel * b.asDiagonal();
  if (error > cfg.tolerance) {
    throw SinkhornNotConverged(std::move(result));
  }
  return result;
}

}  // namespace

void SinkhornConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be positive and finite");
  }
  if (max_iters <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_iters must be positive");
  }
  if (!(tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  }
  if (!(absorb_threshold > 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "absorb_threshold must exceed 1");
  }
}

Coupling SinkhornResult::coupling(const Vector& mu, const Vector& nu, double tolerance) const {
  return Coupling(plan, mu, nu, tolerance);
}

SinkhornNotConverged::SinkhornNotConverged(SinkhornResult last)
    : Error(ErrorCode::kMaxItersExceeded,
            "Sinkhorn stopped after " + std::to_string(last.diagnostics.iterations) +
                " iterations with marginal error " +
                std::to_string(last.diagnostics.marginal_error)),
      last_(std::move(last)) {}

SinkhornResult sinkhorn(const Matrix& cost, const SinkhornConfig& cfg, const Vector& mu,
                        const Vector& nu) {
  cfg.validate();
  check_problem(cost, mu, nu);
  KernelState state;
  state.u = Vector::Zero(cost.rows());
  state.v = Vector::Zero(cost.cols());
  state.kernel = build_kernel(cost, cfg.lambda, state.u, state.v);
  for (Eigen::Index j = 0; j < cost.cols(); ++j) {
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
      const double k = state.kernel(i, j);
      if (!(k >= DBL_MIN) || !std::isfinite(k)) {
        std::ostringstream os;
        os << "exp(-lambda * M(" << i << "," << j << ")) = " << k
           << " is outside the normal floating-point range; use sinkhorn_log";
        throw Error(ErrorCode::kKernelUnderflow, os.str());
      }
    }
  }
  return run_scaling(cost, cfg, mu, nu, std::move(state), /*absorb=*/false);
}

SinkhornResult sinkhorn_log(const Matrix& cost, const SinkhornConfig& cfg, const Vector& mu,
                            const Vector& nu, const std::optional<KernelState>& init) {
  cfg.validate();
  check_problem(cost, mu, nu);
  KernelState state;
  if (init) {
    if (init->kernel.rows() != cost.rows() || init->kernel.cols() != cost.cols() ||
        init->u.size() != cost.rows() || init->v.size() != cost.cols()) {
      throw Error(ErrorCode::kSizeMismatch, "kernel state does not match the cost matrix");
    }
    state = *init;
  } else {
    state.u = Vector::Zero(cost.rows());
    state.v = Vector::Zero(cost.cols());
    state.kernel = build_kernel(cost, cfg.lambda, state.u, state.v);
  }
  return run_scaling(cost, cfg, mu, nu, std::move(state), /*absorb=*/true);
}

double decide_param(double alpha, double beta) {
  if (alpha > beta) {
    throw Error(ErrorCode::kInvalidArgument, "decide_param requires alpha <= beta");
  }
  return (alpha + beta) / 4.0;
}

KernelState log_initialize(const Matrix& cost, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be positive and finite");
  }
  if (cost.size() == 0 || !cost.allFinite()) {
    throw Error(ErrorCode::kNonFiniteValue, "cost matrix is empty or has non-finite entries");
  }
  const double alpha = cost.minCoeff();
  const double beta = cost.maxCoeff();
  const double half_range = lambda * (beta - alpha) / 2.0;
  if (half_range > kMaxExponent) {
    std::ostringstream os;
    os << "lambda * (max M - min M) / 2 = " << half_range << " exceeds " << kMaxExponent
       << "; no translation keeps the kernel representable";
    throw Error(ErrorCode::kRangeTooWide, os.str());
  }
  KernelState state;
  state.gamma = decide_param(alpha, beta);
  state.u = Vector::Constant(cost.rows(), state.gamma);
  state.v = Vector::Constant(cost.cols(), state.gamma);
  state.kernel = build_kernel(cost, lambda, state.u, state.v);
  return state;
}

}  // namespace gwnet
