#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"

using namespace gwnet;
using gwtest::Rng;
using std::numbers::pi;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

void expect_distribution(const DiscreteDistribution& d, std::vector<double> atoms,
                         std::vector<double> masses) {
  ASSERT_EQ(d.size(), atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    EXPECT_NEAR(d.atoms()[i], atoms[i], 1e-12);
    EXPECT_NEAR(d.masses()[i], masses[i], 1e-12);
  }
}

SizeCurve sampled(const std::function<double(double)>& f, int samples = 512) {
  auto grid = uniform_grid(0.0, pi, samples);
  std::vector<double> values;
  for (double t : grid) values.push_back(f(t));
  return SizeCurve(grid, values, 1.0, LevelKind::kSublevel);
}

}  // namespace

TEST(Size, Examples) {
  for (double p : {1.0, 2.0, kInfinity}) {
    EXPECT_NEAR(size_p(MeasureNetwork::one_point(-3.0), p), 3.0, 1e-15);
    EXPECT_NEAR(size_p(MeasureNetwork(Matrix::Constant(3, 3, -2.5), vec({0.2, 0.3, 0.5})), p), 2.5,
                1e-14);
  }
  EXPECT_NEAR(size_p(sphere_discretize(1, 2000), 1.0), pi / 2, 2e-3);
}

TEST(Eccentricity, Examples) {
  Matrix w(2, 2);
  w << 0, 1, 2, 0;
  const MeasureNetwork X(w, vec({0.5, 0.5}));
  const auto e = eccentricity(X, 1.0, Direction::kOut);
  EXPECT_NEAR(e.values(0), 0.5, 1e-15);
  EXPECT_NEAR(e.values(1), 1.0, 1e-15);
}

TEST(Eccentricity, SymmetricAndNormIdentity) {
  Rng rng(20);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.integer(1, 8);
    Matrix w = rng.matrix(n, -4, 4);
    const MeasureNetwork S(w + w.transpose(), rng.measure(n));
    const MeasureNetwork X(w, rng.measure(n));
    for (double p : {1.0, 2.0, 3.0}) {
      EXPECT_TRUE(eccentricity(S, p, Direction::kOut).values.isApprox(
          eccentricity(S, p, Direction::kIn).values, 1e-14));
      const Vector e = eccentricity(X, p, Direction::kOut).values;
      const double norm = std::pow(X.measure().dot(e.array().pow(p).matrix()), 1.0 / p);
      EXPECT_NEAR(norm, size_p(X, p), 1e-12 * (1 + norm));
    }
    EXPECT_GE(eccentricity(X, 2.0, Direction::kIn).values.minCoeff(), 0.0);
  }
}

TEST(Pushforward, LocalDistribution) {
  const auto X = gwtest::fig_x();
  expect_distribution(local_distribution(X, 2, Direction::kOut), {1, 3}, {0.5, 0.5});
  expect_distribution(local_distribution(X, 0, Direction::kOut), {1, 2}, {0.5, 0.5});
  const auto C = MeasureNetwork::with_uniform_measure(Matrix::Constant(4, 4, 7.0));
  expect_distribution(local_distribution(C, 1, Direction::kIn), {7}, {1});
  try {
    local_distribution(X, 3, Direction::kOut);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIndexOutOfRange);
  }
}

TEST(Pushforward, Eccentricity) {
  const auto C = MeasureNetwork::with_uniform_measure(Matrix::Constant(3, 3, -4.0));
  expect_distribution(ecc_pushforward(C, 2.0, Direction::kOut), {4}, {1});
  // Rows of X: |.|-averages 1.5, 1.5, 2 under μ = (1/4, 1/4, 1/2).
  expect_distribution(ecc_pushforward(gwtest::fig_x(), 1.0, Direction::kOut), {1.5, 2}, {0.5, 0.5});
  Rng rng(21);
  const auto d = ecc_pushforward(rng.network(7), 2.0, Direction::kIn);
  double total = 0;
  for (double m : d.masses()) total += m;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Pushforward, Weights) {
  expect_distribution(weight_pushforward(MeasureNetwork::one_point(2.0)), {2}, {1});
  expect_distribution(weight_pushforward(gwtest::fig_x()), {1, 2, 3}, {0.5, 0.25, 0.25});
  expect_distribution(weight_pushforward(gwtest::fig_y()), {1, 2, 3}, {0.5, 0.25, 0.25});
  expect_distribution(weight_pushforward(gwtest::fig_z()), {1, 2, 3}, {0.5, 0.25, 0.25});
  expect_distribution(
      weight_pushforward(MeasureNetwork::with_uniform_measure(Matrix::Constant(2, 2, 1.5))), {1.5},
      {1});
}

TEST(SubSize, Endpoints) {
  Rng rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const auto X = rng.network(rng.integer(1, 8));
    for (double p : {1.0, 2.0}) {
      EXPECT_EQ(sub_size(X, p, X.weights().maxCoeff()), size_p(X, p));
      EXPECT_EQ(sub_size(X, p, X.weights().minCoeff() - 1.0), 0.0);
      EXPECT_NEAR(sup_size(X, p, X.weights().minCoeff()), size_p(X, p), 1e-12);
    }
  }
}

TEST(SubSize, CircleHalfPi) {
  EXPECT_NEAR(sub_size(sphere_discretize(1, 2000), 1.0, pi / 2), pi / 8, 5e-3);
}

TEST(SubSize, MonotoneAndPartition) {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const auto X = rng.coarse_network(rng.integer(2, 7), 5);
    std::vector<double> w(X.weights().data(), X.weights().data() + X.weights().size());
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    for (double p : {1.0, 2.0, 3.0}) {
      double prev_sub = -1, prev_sup = INFINITY;
      for (double t = -1; t <= 5; t += 0.25) {
        const double s = sub_size(X, p, t), u = sup_size(X, p, t);
        EXPECT_GE(s, prev_sub);
        EXPECT_LE(u, prev_sup);
        prev_sub = s;
        prev_sup = u;
      }
      for (std::size_t k = 0; k + 1 < w.size(); ++k) {
        const double lhs = std::pow(sub_size(X, p, w[k]), p) + std::pow(sup_size(X, p, w[k + 1]), p);
        EXPECT_NEAR(lhs, std::pow(size_p(X, p), p), 1e-12 * (1 + lhs));
      }
    }
  }
}

TEST(SizeCurve, ConstructionChecks) {
  EXPECT_THROW(SizeCurve({0, 0}, {0, 1}, 1, LevelKind::kSublevel), Error);
  EXPECT_THROW(SizeCurve({0, 1}, {1, 0}, 1, LevelKind::kSublevel), Error);
  EXPECT_NO_THROW(SizeCurve({0, 1}, {1, 0}, 1, LevelKind::kSuperlevel));
  const SizeCurve c({0, 1, 2}, {0, 2, 3}, 1, LevelKind::kSublevel);
  EXPECT_EQ(c.at(-1), 0.0);
  EXPECT_EQ(c.at(0.5), 1.0);
  EXPECT_EQ(c.at(5), 3.0);
}

TEST(SizeCurve, FromNetworkIsMonotone) {
  Rng rng(24);
  const auto X = rng.network(6);
  const auto sub = size_curve(X, 2.0);
  EXPECT_EQ(sub.grid().size(), 512u);
  EXPECT_EQ(sub.values().back(), size_p(X, 2.0));
  const auto sup = size_curve(X, 2.0, LevelKind::kSuperlevel, uniform_grid(-10, 10, 64));
  for (std::size_t i = 1; i < sup.values().size(); ++i) EXPECT_LE(sup.values()[i], sup.values()[i - 1]);
}

TEST(Sphere, Areas) {
  EXPECT_NEAR(sphere_area(0), 2.0, 1e-15);
  EXPECT_NEAR(sphere_area(1), 2 * pi, 1e-14);
  EXPECT_NEAR(sphere_area(2), 4 * pi, 1e-14);
  EXPECT_NEAR(sphere_area(3), 2 * pi * pi, 1e-13);
  EXPECT_NEAR(sphere_area(4), 8 * pi * pi / 3, 1e-13);
}

TEST(Sphere, ClosedForms) {
  for (double t : {0.0, 0.3, 1.0, 2.0, pi}) {
    EXPECT_NEAR(sphere_subsize_closed_form(1, 1, t), t * t / (2 * pi), 1e-12);
    EXPECT_NEAR(sphere_subsize_closed_form(2, 1, t), (std::sin(t) - t * std::cos(t)) / 2, 1e-9);
    EXPECT_NEAR(std::pow(sphere_subsize_closed_form(1, 3, t), 3), std::pow(t, 4) / (4 * pi), 1e-12);
  }
  for (int n = 1; n <= 4; ++n) EXPECT_NEAR(sphere_subsize_closed_form(n, 1, pi), pi / 2, 1e-9);
  EXPECT_THROW(sphere_subsize_closed_form(2, 1, 3.2), Error);
  EXPECT_THROW(sphere_subsize_closed_form(2, 1, -0.1), Error);
}

TEST(Sphere, DiscretizedCircleMatchesClosedForm) {
  const auto S1 = sphere_discretize(1, 2000);
  for (int k = 0; k < 50; ++k) {
    const double t = pi * k / 49;
    EXPECT_NEAR(sub_size(S1, 1.0, t), t * t / (2 * pi), 5e-3);
  }
}

TEST(Sphere, Discretization) {
  const auto square = sphere_discretize(1, 4);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) {
      const double w = square.weight(i, j);
      EXPECT_TRUE(std::abs(w) < 1e-15 || std::abs(w - pi / 2) < 1e-12 || std::abs(w - pi) < 1e-12);
    }
  for (const auto& S : {sphere_discretize(1, 9), sphere_discretize(2, 200)}) {
    EXPECT_TRUE(S.weights().isApprox(S.weights().transpose()));
    EXPECT_EQ(S.weights().diagonal().cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE(S.weights().maxCoeff(), pi + 1e-12);
  }
  EXPECT_NEAR(size_p(sphere_discretize(2, 5000), 1.0), pi / 2, 2e-2);
  EXPECT_THROW(sphere_discretize(3, 100), Error);
  EXPECT_THROW(sphere_discretize(2, 4), Error);
}

TEST(Interleaving, Examples) {
  const auto f = sampled([](double t) { return t * t / (2 * pi); });
  const auto g = sampled([](double t) { return (std::sin(t) - t * std::cos(t)) / 2; });
  EXPECT_EQ(interleaving_distance(f, f), 0.0);
  const double d = interleaving_distance(f, g);
  EXPECT_GE(d, 0.17);
  EXPECT_LE(d, 0.19);
  const auto c1 = sampled([](double) { return 0.3; }), c2 = sampled([](double) { return 1.1; });
  EXPECT_NEAR(interleaving_distance(c1, c2), 0.8, 1e-4);
  const SizeCurve sup({0, 1}, {1, 0}, 1, LevelKind::kSuperlevel);
  try {
    interleaving_distance(f, sup);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kKindMismatch);
  }
}

TEST(Interleaving, SymmetricAndTriangle) {
  Rng rng(25);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<SizeCurve> curves;
    for (int c = 0; c < 3; ++c) {
      const double a = rng.uniform(0, 2), b = rng.uniform(0.2, 3), s = rng.uniform(0, 1);
      curves.push_back(sampled([=](double t) { return s + a * std::pow(t / pi, b); }, 128));
    }
    const double ab = interleaving_distance(curves[0], curves[1]);
    const double ba = interleaving_distance(curves[1], curves[0]);
    const double bc = interleaving_distance(curves[1], curves[2]);
    const double ac = interleaving_distance(curves[0], curves[2]);
    EXPECT_NEAR(ab, ba, 2e-4);
    EXPECT_LE(ac, ab + bc + 2e-4);
  }
}

TEST(Size, SizeGapBoundedByDistortion) {
  Rng rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    const auto X = rng.network(rng.integer(1, 6)), Y = rng.network(rng.integer(1, 6));
    for (int k = 0; k < 100; ++k) {
      const auto mu = rng.coupling(X.measure(), Y.measure());
      for (double p : {1.0, 2.0}) {
        EXPECT_LE(std::abs(size_p(X, p) - size_p(Y, p)), 2 * distortion(X, Y, mu, p) + 1e-9);
      }
    }
  }
}
