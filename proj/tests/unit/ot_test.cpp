#include <gtest/gtest.h>

#include <cfloat>
#include <cmath>

#include "test_support.hpp"

using namespace gwnet;
using gwtest::Rng;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

DiscreteDistribution random_distribution(Rng& rng, int max_atoms) {
  const int k = rng.integer(1, max_atoms);
  std::vector<double> atoms(k), masses(k);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    atoms[i] = rng.integer(0, 2) == 0 ? rng.integer(-3, 3) : rng.uniform(-5, 5);
    masses[i] = rng.uniform(0.05, 1.0);
    total += masses[i];
  }
  for (double& m : masses) m /= total;
  return {atoms, masses};
}

}  // namespace

TEST(ExactOt, ZeroCost) {
  const auto r = exact_ot(Matrix::Zero(3, 4), vec({0.2, 0.3, 0.5}), vec({0.25, 0.25, 0.25, 0.25}));
  EXPECT_EQ(r.objective, 0.0);
}

TEST(ExactOt, SingleSourceIsForced) {
  Matrix cost(1, 3);
  cost << 1, 5, -2;
  const Vector nu = vec({0.2, 0.3, 0.5});
  const auto r = exact_ot(cost, vec({1.0}), nu);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(r.plan.plan()(0, j), nu(j), 1e-15);
  EXPECT_NEAR(r.objective, nu.dot(cost.row(0).transpose()), 1e-14);
}

TEST(ExactOt, TwoByTwoMatchesSweep) {
  Matrix cost(2, 2);
  cost << 0, 1, 1, 0;
  const auto r = exact_ot(cost, vec({0.5, 0.5}), vec({0.5, 0.5}));
  EXPECT_NEAR(r.objective, 0.0, 1e-15);
  EXPECT_NEAR(r.plan.plan()(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(r.plan.plan()(1, 1), 0.5, 1e-15);

  // 2x2 plans are fixed by t = plan(0, 0); sweep t over its feasible range.
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix c = rng.matrix(2, -3, 3);
    const Vector mu = rng.measure(2), nu = rng.measure(2);
    const double lo = std::max(0.0, mu(0) - nu(1)), hi = std::min(mu(0), nu(0));
    double best = INFINITY;
    for (int s = 0; s <= 20000; ++s) {
      const double t = lo + (hi - lo) * s / 20000.0;
      const double v = c(0, 0) * t + c(0, 1) * (mu(0) - t) + c(1, 0) * (nu(0) - t) +
                       c(1, 1) * (mu(1) - nu(0) + t);
      best = std::min(best, v);
    }
    EXPECT_NEAR(exact_ot(c, mu, nu).objective, best, 1e-12);
  }
}

TEST(ExactOt, DualCertificate) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = rng.integer(1, 15), n = rng.integer(1, 15);
    Matrix cost(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) cost(i, j) = rng.uniform(-10, 10);
    const Vector mu = rng.measure(m), nu = rng.measure(n);
    const auto r = exact_ot(cost, mu, nu);
    const auto check = gwtest::dual_check(cost, r, mu, nu);
    EXPECT_LE(check.max_violation, 1e-10);
    EXPECT_LE(check.gap, 1e-9 * (1 + std::abs(r.objective)));
    EXPECT_LE((r.plan.plan().rowwise().sum() - mu).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((r.plan.plan().colwise().sum().transpose() - nu).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ExactOt, BeatsRandomPlans) {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = rng.integer(2, 8), n = rng.integer(2, 8);
    Matrix cost(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) cost(i, j) = rng.uniform(0, 10);
    const Vector mu = rng.measure(m), nu = rng.measure(n);
    const double best = exact_ot(cost, mu, nu).objective;
    for (int k = 0; k < 100; ++k) {
      EXPECT_LE(best, cost.cwiseProduct(rng.coupling(mu, nu).plan()).sum() + 1e-12);
    }
  }
}

TEST(ExactOt, Errors) {
  EXPECT_THROW(exact_ot(Matrix::Zero(2, 2), vec({0.5, 0.5}), vec({0.7, 0.7})), Error);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = INFINITY;
  EXPECT_THROW(exact_ot(bad, vec({0.5, 0.5}), vec({0.5, 0.5})), Error);
}

TEST(Wasserstein1d, Examples) {
  const DiscreteDistribution a({0.0, 1.0}, {0.5, 0.5});
  for (double p : {1.0, 2.0, 3.0}) {
    EXPECT_EQ(wasserstein_1d(a, a, p), 0.0);
    EXPECT_NEAR(wasserstein_1d(DiscreteDistribution::dirac(0), DiscreteDistribution::dirac(3), p),
                3.0, 1e-15);
  }
  const DiscreteDistribution b({0.0, 1.0}, {0.25, 0.75});
  EXPECT_NEAR(wasserstein_1d(a, b, 1.0), 0.25, 1e-15);
  EXPECT_NEAR(wasserstein_1d_p1(a, b), 0.25, 1e-15);
  const DiscreteDistribution c({0.0, 2.0}, {0.5, 0.5});
  EXPECT_NEAR(wasserstein_1d_p1(c, DiscreteDistribution::dirac(1)), 1.0, 1e-15);
  EXPECT_NEAR(wasserstein_1d(c, DiscreteDistribution::dirac(1), 1.0), 1.0, 1e-15);
  EXPECT_EQ(wasserstein_1d_p1(DiscreteDistribution::dirac(5), DiscreteDistribution::dirac(5)), 0.0);
}

TEST(Wasserstein1d, MatchesLinearProgram) {
  Rng rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_distribution(rng, 20), b = random_distribution(rng, 20);
    for (double p : {1.0, 2.0, 3.0}) {
      EXPECT_NEAR(wasserstein_1d(a, b, p), gwtest::wasserstein_lp(a, b, p), 1e-10);
    }
  }
}

TEST(Wasserstein1d, P1FormulasAgree) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_distribution(rng, 20), b = random_distribution(rng, 20);
    EXPECT_NEAR(wasserstein_1d(a, b, 1.0), wasserstein_1d_p1(a, b), 1e-12);
  }
}

TEST(DecideParam, Examples) {
  EXPECT_EQ(decide_param(3.0, 3.0), 1.5);
  EXPECT_EQ(decide_param(0.0, 1000.0), 250.0);
  EXPECT_EQ(decide_param(-100.0, 100.0), 0.0);
}

TEST(LogInitialize, ConstantCostGivesOnes) {
  const auto s = log_initialize(Matrix::Constant(3, 2, 7.0), 3.0);
  EXPECT_DOUBLE_EQ(s.gamma, 3.5);
  EXPECT_TRUE(s.kernel.isApprox(Matrix::Ones(3, 2), 1e-14));
}

TEST(LogInitialize, RangeLimits) {
  Matrix cost(1, 2);
  cost << 0, 1000;
  const auto s = log_initialize(cost, 0.5);
  EXPECT_GE(s.kernel.minCoeff(), DBL_MIN);
  EXPECT_TRUE(s.kernel.allFinite());
  cost << 0, 4000;
  try {
    log_initialize(cost, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRangeTooWide);
  }
}

TEST(LogInitialize, KernelEntriesNormal) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix cost = rng.matrix(rng.integer(1, 8), 0, rng.uniform(0, 100));
    const double lambda = rng.uniform(0.1, 20);
    try {
      const auto s = log_initialize(cost, lambda);
      EXPECT_GE(s.kernel.minCoeff(), DBL_MIN);
      EXPECT_TRUE(s.kernel.allFinite());
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kRangeTooWide);
      EXPECT_GT(lambda * (cost.maxCoeff() - cost.minCoeff()) / 2, 700.0);
    }
  }
}

TEST(Sinkhorn, ZeroCostGivesProduct) {
  const Vector mu = vec({0.2, 0.8}), nu = vec({0.1, 0.6, 0.3});
  for (double lambda : {0.1, 10.0}) {
    SinkhornConfig cfg;
    cfg.lambda = lambda;
    const auto r = sinkhorn(Matrix::Zero(2, 3), cfg, mu, nu);
    EXPECT_TRUE(r.plan.isApprox(mu * nu.transpose(), 1e-12));
    const auto l = sinkhorn_log(Matrix::Zero(2, 3), cfg, mu, nu);
    EXPECT_EQ(l.diagnostics.absorptions, 0);
  }
}

TEST(Sinkhorn, SingleRowIsForced) {
  const Vector nu = vec({0.2, 0.3, 0.5});
  Matrix cost(1, 3);
  cost << 0.3, 1.0, 2.0;
  const auto r = sinkhorn(cost, {}, vec({1.0}), nu);
  EXPECT_LE((r.plan.row(0).transpose() - nu).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Sinkhorn, TwoByTwoFixedPoint) {
  Matrix cost(2, 2);
  cost << 0, 1, 1, 0;
  SinkhornConfig cfg;
  cfg.lambda = 10;
  const Vector half = vec({0.5, 0.5});
  const auto r = sinkhorn(cost, cfg, half, half);
  EXPECT_NEAR(r.plan(0, 1), r.plan(1, 0), 1e-12);
  EXPECT_NEAR(r.plan(0, 0), r.plan(1, 1), 1e-12);
  EXPECT_GT(r.plan(0, 0), r.plan(0, 1));
  // Symmetric fixed point: diagonal/off-diagonal ratio is e^λ.
  EXPECT_NEAR(r.plan(0, 0) / r.plan(0, 1), std::exp(10.0), 1e-6 * std::exp(10.0));
  EXPECT_LE(r.diagnostics.marginal_error, 1e-9);
}

TEST(Sinkhorn, LogDomainAgreesWithPlain) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = rng.integer(1, 8), n = rng.integer(1, 8);
    Matrix cost(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) cost(i, j) = rng.uniform(0, 5);
    SinkhornConfig cfg;
    cfg.lambda = rng.uniform(0.5, 5);
    cfg.absorb_threshold = 1e3;  // force absorptions on some instances
    const Vector mu = rng.measure(m), nu = rng.measure(n);
    const auto plain = sinkhorn(cost, cfg, mu, nu);
    const auto logd = sinkhorn_log(cost, cfg, mu, nu);
    const auto init = sinkhorn_log(cost, cfg, mu, nu, log_initialize(cost, cfg.lambda));
    EXPECT_LE((plain.plan - logd.plan).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE((plain.plan - init.plan).cwiseAbs().maxCoeff(), 1e-8);
    for (const auto* r : {&plain, &logd, &init}) {
      EXPECT_GE(r->plan.minCoeff(), 0.0);
      EXPECT_LE((r->plan.rowwise().sum() - mu).cwiseAbs().maxCoeff(), 1e-9);
      EXPECT_LE((r->plan.colwise().sum().transpose() - nu).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(Sinkhorn, UnderflowIsReported) {
  Matrix cost(2, 2);
  cost << 0, 1000, 1000, 0;
  SinkhornConfig cfg;
  cfg.lambda = 200;
  try {
    sinkhorn(cost, cfg, vec({0.5, 0.5}), vec({0.5, 0.5}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kKernelUnderflow);
  }
}

TEST(Sinkhorn, MaxItersCarriesLastIterate) {
  Matrix cost(3, 3);
  cost << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  SinkhornConfig cfg;
  cfg.lambda = 30;
  cfg.max_iters = 2;
  cfg.tolerance = 1e-14;
  const Vector mu = vec({0.7, 0.2, 0.1}), nu = vec({0.1, 0.2, 0.7});
  try {
    sinkhorn(cost, cfg, mu, nu);
    FAIL();
  } catch (const SinkhornNotConverged& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMaxItersExceeded);
    EXPECT_EQ(e.last().diagnostics.iterations, 2);
    EXPECT_GT(e.last().diagnostics.marginal_error, cfg.tolerance);
  }
}

TEST(SinkhornConfig, Validation) {
  SinkhornConfig cfg;
  cfg.lambda = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.absorb_threshold = 1.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.tolerance = 0;
  EXPECT_THROW(cfg.validate(), Error);
}
