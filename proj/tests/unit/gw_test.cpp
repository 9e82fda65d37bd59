#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace gwnet;
using gwtest::Rng;

namespace {

// min over 2x2 plans of ½ dis_p, sweeping t = plan(0, 0).
double sweep_2x2(const MeasureNetwork& X, const MeasureNetwork& Y, double p, int steps = 20000) {
  const Vector& mu = X.measure();
  const Vector& nu = Y.measure();
  const double lo = std::max(0.0, mu(0) - nu(1)), hi = std::min(mu(0), nu(0));
  double best = INFINITY;
  for (int s = 0; s <= steps; ++s) {
    const double t = lo + (hi - lo) * s / steps;
    Matrix plan(2, 2);
    plan << t, mu(0) - t, nu(0) - t, mu(1) - nu(0) + t;
    best = std::min(best, 0.5 * gwtest::naive_distortion(X.weights(), Y.weights(), plan.cwiseMax(0.0), p));
  }
  return best;
}

}  // namespace

TEST(EntropicGw, IdenticalFromDiagonal) {
  Rng rng(50);
  const auto X = rng.network(4, -1, 1);
  GwOptions opt;
  opt.diagonal_init = true;
  opt.sinkhorn.lambda = 100;
  const auto r = entropic_gw(X, X, opt);
  EXPECT_LE(r.value, 1e-6);
  EXPECT_TRUE(r.converged);
}

TEST(EntropicGw, WeaklyIsomorphicPair) {
  GwOptions opt;
  opt.sinkhorn.lambda = 20;
  const auto r = entropic_gw(gwtest::fig_x(), gwtest::fig_y(), opt);
  EXPECT_LE(r.value, 1e-3);
  const auto z = entropic_gw(gwtest::fig_x(), gwtest::fig_z(), opt);
  EXPECT_LE(z.value, 1e-3);
}

TEST(EntropicGw, OnePointExact) {
  const auto r = entropic_gw(MeasureNetwork::one_point(2.0), MeasureNetwork::one_point(-3.0), {});
  EXPECT_NEAR(r.value, 2.5, 1e-12);
}

TEST(EntropicGw, UpperBoundsTheLowerBounds) {
  Rng rng(51);
  for (int trial = 0; trial < 15; ++trial) {
    const auto X = rng.network(rng.integer(2, 8), -1, 1), Y = rng.network(rng.integer(2, 8), -1, 1);
    GwOptions opt;
    opt.sinkhorn.lambda = 20;
    GwResult r = [&] {
      try {
        return entropic_gw(X, Y, opt);
      } catch (const GwNotConverged& e) {
        return e.last();
      }
    }();
    EXPECT_GE(2 * r.value, rtlb_max(X, Y, 2.0).rtlb_max - 1e-6);
    EXPECT_NEAR(r.value, 0.5 * distortion(X, Y, r.coupling, 2.0), 1e-9);
  }
}

TEST(EntropicGw, OuterLimitReported) {
  Rng rng(52);
  const auto X = rng.network(5), Y = rng.network(4);
  GwOptions opt;
  opt.outer_iters = 1;
  opt.plan_tolerance = 1e-300;
  try {
    entropic_gw(X, Y, opt);
    FAIL();
  } catch (const GwNotConverged& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMaxItersExceeded);
    EXPECT_FALSE(e.last().converged);
    EXPECT_EQ(e.last().iterations, 1);
  }
}

TEST(LinearizedCost, MatchesDefinition) {
  Rng rng(53);
  const auto X = rng.network(4), Y = rng.network(3);
  const Matrix plan = rng.coupling(X.measure(), Y.measure()).plan();
  const Matrix M = gw_linearized_cost(X, Y, plan);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 3; ++l) s += std::pow(X.weight(i, k) - Y.weight(j, l), 2) * plan(k, l);
      EXPECT_NEAR(M(i, j), s, 1e-10);
    }
}

TEST(Bruteforce, Examples) {
  Rng rng(54);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = rng.uniform(-10, 10), b = rng.uniform(-10, 10);
    for (double p : {1.0, 2.0, kInfinity}) {
      EXPECT_NEAR(gw_bruteforce(MeasureNetwork::one_point(a), MeasureNetwork::one_point(b), p),
                  std::abs(a - b) / 2, 1e-12);
    }
  }
  for (int n = 1; n <= 3; ++n) {
    const auto X = rng.network(n);
    EXPECT_LE(gw_bruteforce(X, X, 2.0), 1e-9);
    EXPECT_LE(gw_bruteforce(X, X, 1.0), 1e-9);
  }
  try {
    gw_bruteforce(rng.network(4), rng.network(3), 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInstanceTooLarge);
  }
}

TEST(Bruteforce, TwoByTwoSandwich) {
  Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const auto X = rng.network(2), Y = rng.network(2);
    for (double p : {1.0, 2.0}) {
      const double brute = gw_bruteforce(X, Y, p);
      const double sweep = sweep_2x2(X, Y, p);
      EXPECT_LE(brute, sweep + 1e-9);
      EXPECT_GE(brute, sweep - 1e-3);
      EXPECT_LE(rtlb_max(X, Y, p).rtlb_max, 2 * brute + 1e-6);
    }
  }
}

TEST(CosineRescale, Examples) {
  const auto c = cosine_rescale(MeasureNetwork::with_uniform_measure(Matrix::Constant(3, 3, 4.0)));
  EXPECT_NEAR(c.scale, 2.0, 1e-15);
  EXPECT_TRUE(c.network.weights().isApprox(Matrix::Ones(3, 3), 1e-15));
  const auto one = cosine_rescale(MeasureNetwork::one_point(-6.0));
  EXPECT_NEAR(one.scale, 3.0, 1e-15);
  EXPECT_NEAR(one.network.weight(0, 0), -1.0, 1e-15);
  Rng rng(56);
  for (int trial = 0; trial < 20; ++trial) {
    EXPECT_NEAR(size_p(cosine_rescale(rng.network(rng.integer(1, 8))).network, 2.0), 1.0, 1e-12);
  }
  try {
    cosine_rescale(MeasureNetwork::with_uniform_measure(Matrix::Zero(2, 2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroSize);
  }
}

TEST(LambdaRescale, Examples) {
  Rng rng(57);
  const Matrix M = rng.matrix(4, 0, 10);
  EXPECT_EQ(lambda_rescale(M, 3.0, 3.0), M);
  const Matrix one = lambda_rescale(Matrix::Constant(1, 1, 1000.0), 0.1, 200.0);
  EXPECT_NEAR(one(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(std::exp(-200 * one(0, 0)), std::exp(-0.1 * 1000.0), 1e-15 * std::exp(-100.0));
  EXPECT_THROW(lambda_rescale(M, 0.0, 1.0), Error);
}

TEST(LambdaRescale, KernelsAgree) {
  Rng rng(58);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix M = rng.matrix(5, 0, 10);
    const double lxy = rng.uniform(0.1, 5);
    // Power-of-two ratios make the scaling exact, so the kernels agree bitwise.
    const double exact_star = lxy * std::ldexp(1.0, rng.integer(-4, 4));
    const Matrix Me = lambda_rescale(M, lxy, exact_star);
    EXPECT_EQ(Matrix((-exact_star * Me).array().exp()), Matrix((-lxy * M).array().exp()));
    const double star = rng.uniform(0.1, 50);
    const Matrix Ms = lambda_rescale(M, lxy, star);
    const Matrix a = (-star * Ms).array().exp(), b = (-lxy * M).array().exp();
    EXPECT_LE(((a - b).array() / b.array()).abs().maxCoeff(), 1e-13);
  }
}

TEST(CosineRescale, CommutesWithLambdaRescale) {
  Rng rng(59);
  const auto X = rng.network(4), Y = rng.network(5);
  const auto xs = cosine_rescale(X);
  const double c = 1.0 / (2 * xs.scale);
  const auto Yc = Y.with_weights(Y.weights() * c);
  const Matrix plan = product_coupling(X.measure(), Y.measure()).plan();
  // Scaling both networks by c scales the GW cost by c², so the rescaled
  // problem needs λ / c² to keep its kernel.
  const Matrix M = gw_linearized_cost(X, Y, plan);
  const Matrix Mc = gw_linearized_cost(xs.network, Yc, plan);
  const double lambda = 0.05, lambda_star = 1.0;
  const Matrix Mstar = lambda_rescale(Mc, lambda / (c * c), lambda_star);
  const Matrix a = (-lambda * M).array().exp();
  const Matrix b = (-lambda_star * Mstar).array().exp();
  EXPECT_LE(((a - b).array() / a.array()).abs().maxCoeff(), 1e-12);
}

TEST(CosineRule, Identity) {
  Rng rng(60);
  for (int trial = 0; trial < 50; ++trial) {
    const auto X = rng.network(rng.integer(1, 6)), Y = rng.network(rng.integer(1, 6));
    const auto mu = rng.coupling(X.measure(), Y.measure());
    const double d = distortion(X, Y, mu, 2.0);
    EXPECT_NEAR(cosine_rule_inner(X, Y, mu), 0.25 * d * d, 1e-10 * (1 + d * d));
  }
  const auto X = gwtest::fig_x();
  EXPECT_NEAR(cosine_rule_inner(X, X, diagonal_coupling(X.measure())), 0.0, 1e-12);
  const auto A = MeasureNetwork::one_point(1.0), B = MeasureNetwork::one_point(4.0);
  EXPECT_NEAR(cosine_rule_inner(A, B, product_coupling(A.measure(), B.measure())), 2.25, 1e-12);
}
