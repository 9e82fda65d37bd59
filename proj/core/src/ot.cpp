#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "gwnet/ot.hpp"
#include "internal.hpp"

namespace gwnet {

namespace {

constexpr double kUnreached = std::numeric_limits<double>::infinity();

// Remaining supply/demand below this is treated as exhausted.
constexpr double kMassFloor = 1e-14;

void check_marginal(const Vector& m, const char* name) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m(i)) || m(i) < 0.0) {
      std::ostringstream os;
      os << name << "(" << i << ") = " << m(i) << " is not a valid mass";
      throw Error(ErrorCode::kInfeasible, os.str());
    }
  }
}

}  // namespace

ExactOtResult exact_ot(const Matrix& cost, const Vector& mu, const Vector& nu) {
  const Eigen::Index m = cost.rows();
  const Eigen::Index n = cost.cols();
  if (mu.size() != m || nu.size() != n) {
    throw Error(ErrorCode::kSizeMismatch, "cost shape does not match the marginals");
  }
  if (m == 0 || n == 0) {
    throw Error(ErrorCode::kInfeasible, "empty transport problem");
  }
  if (!cost.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "cost matrix has non-finite entries");
  }
  check_marginal(mu, "mu");
  check_marginal(nu, "nu");
  if (std::abs(mu.sum() - nu.sum()) > kMarginalTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "marginal masses differ: " << mu.sum() << " vs " << nu.sum();
    throw Error(ErrorCode::kInfeasible, os.str());
  }

  // Reduced cost of the forward arc i -> j is cost(i,j) + src_pot(i) - snk_pot(j) >= 0;
  // the backward arc j -> i (present when flow(i,j) > 0) has the negated value.
  // Every sink is joined to a super-sink with potential root_pot.
  Vector supply = mu;
  Vector demand = nu;
  Matrix flow = Matrix::Zero(m, n);
  Vector src_pot = Vector::Zero(m);
  Vector snk_pot = cost.colwise().minCoeff().transpose();
  double root_pot = snk_pot.minCoeff();

  std::vector<double> src_dist(m), snk_dist(n);
  std::vector<char> src_done(m), snk_done(n);
  std::vector<Eigen::Index> src_pred(m), snk_pred(n);

  int augmentations = 0;
  for (;;) {
    bool any_source = false, any_sink = false;
    for (Eigen::Index i = 0; i < m; ++i) any_source |= supply(i) > kMassFloor;
    for (Eigen::Index j = 0; j < n; ++j) any_sink |= demand(j) > kMassFloor;
    if (!any_source || !any_sink) break;

    for (Eigen::Index i = 0; i < m; ++i) {
      src_dist[i] = supply(i) > kMassFloor ? 0.0 : kUnreached;
      src_pred[i] = -1;
      src_done[i] = 0;
    }
    std::fill(snk_dist.begin(), snk_dist.end(), kUnreached);
    std::fill(snk_done.begin(), snk_done.end(), 0);
    double root_dist = kUnreached;
    Eigen::Index root_pred = -1;

    // Dense Dijkstra over sources, sinks and the super-sink.
    for (;;) {
      double best = kUnreached;
      Eigen::Index best_src = -1, best_snk = -1;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (!src_done[i] && src_dist[i] < best) {
          best = src_dist[i];
          best_src = i;
        }
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!snk_done[j] && snk_dist[j] < best) {
          best = snk_dist[j];
          best_src = -1;
          best_snk = j;
        }
      }
      if (root_dist <= best) break;
      if (best_src < 0 && best_snk < 0) break;

      if (best_src >= 0) {
        const Eigen::Index i = best_src;
        src_done[i] = 1;
        for (Eigen::Index j = 0; j < n; ++j) {
          if (snk_done[j]) continue;
          const double rc = std::max(0.0, cost(i, j) + src_pot(i) - snk_pot(j));
          if (src_dist[i] + rc < snk_dist[j]) {
            snk_dist[j] = src_dist[i] + rc;
            snk_pred[j] = i;
          }
        }
      } else {
        const Eigen::Index j = best_snk;
        snk_done[j] = 1;
        if (demand(j) > kMassFloor) {
          const double rc = std::max(0.0, snk_pot(j) - root_pot);
          if (snk_dist[j] + rc < root_dist) {
            root_dist = snk_dist[j] + rc;
            root_pred = j;
          }
        }
        for (Eigen::Index i = 0; i < m; ++i) {
          if (src_done[i] || flow(i, j) <= 0.0) continue;
          const double rc = std::max(0.0, snk_pot(j) - cost(i, j) - src_pot(i));
          if (snk_dist[j] + rc < src_dist[i]) {
            src_dist[i] = snk_dist[j] + rc;
            src_pred[i] = j;
          }
        }
      }
    }

    if (root_pred < 0) {
      throw Error(ErrorCode::kInfeasible, "no augmenting path with remaining demand");
    }

    const double reach = root_dist;
    for (Eigen::Index i = 0; i < m; ++i) src_pot(i) += std::min(src_dist[i], reach);
    for (Eigen::Index j = 0; j < n; ++j) snk_pot(j) += std::min(snk_dist[j], reach);
    root_pot += reach;

    // Bottleneck along the path: target demand, backward flows, root supply.
    const Eigen::Index target = root_pred;
    double amount = demand(target);
    Eigen::Index j = target;
    Eigen::Index i = snk_pred[j];
    for (;;) {
      const Eigen::Index back = src_pred[i];
      if (back < 0) {
        amount = std::min(amount, supply(i));
        break;
      }
      amount = std::min(amount, flow(i, back));
      j = back;
      i = snk_pred[j];
    }

    j = target;
    i = snk_pred[j];
    for (;;) {
      flow(i, j) += amount;
      const Eigen::Index back = src_pred[i];
      if (back < 0) {
        supply(i) -= amount;
        break;
      }
      flow(i, back) -= amount;
      if (flow(i, back) < kMassFloor) flow(i, back) = 0.0;
      j = back;
      i = snk_pred[j];
    }
    demand(target) -= amount;
    ++augmentations;
  }

  const double objective = cost.cwiseProduct(flow).sum();
  Vector row_potential = -src_pot;
  Vector col_potential = snk_pot;
  return ExactOtResult{Coupling(std::move(flow), mu, nu), objective, std::move(row_potential),
                       std::move(col_potential), augmentations};
}

double wasserstein_1d(const DiscreteDistribution& a, const DiscreteDistribution& b, double p) {
  check_order(p);
  if (std::isinf(p)) {
    throw Error(ErrorCode::kInvalidArgument, "wasserstein_1d requires a finite order");
  }
  const auto& xa = a.atoms();
  const auto& xb = b.atoms();

  // Cumulative levels; the last one is pinned to 1 so both sweeps end together.
  std::vector<double> ca(xa.size()), cb(xb.size());
  std::partial_sum(a.masses().begin(), a.masses().end(), ca.begin());
  std::partial_sum(b.masses().begin(), b.masses().end(), cb.begin());
  ca.back() = 1.0;
  cb.back() = 1.0;

  double total = 0.0;
  double level = 0.0;
  std::size_t i = 0, j = 0;
  while (i < xa.size() && j < xb.size()) {
    const double next = std::min(ca[i], cb[j]);
    if (next > level) {
      total += detail::abs_pow(xa[i] - xb[j], p) * (next - level);
      level = next;
    }
    const bool advance_a = ca[i] <= next;
    const bool advance_b = cb[j] <= next;
    if (advance_a) ++i;
    if (advance_b) ++j;
  }
  return detail::root(total, p);
}

double wasserstein_1d_p1(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  const auto& xa = a.atoms();
  const auto& xb = b.atoms();
  const auto& ma = a.masses();
  const auto& mb = b.masses();

  double fa = 0.0, fb = 0.0, total = 0.0;
  std::size_t i = 0, j = 0;
  double x = std::min(xa.front(), xb.front());
  while (i < xa.size() || j < xb.size()) {
    // Absorb every atom located at x, then integrate |F − G| up to the next atom.
    while (i < xa.size() && xa[i] == x) fa += ma[i++];
    while (j < xb.size() && xb[j] == x) fb += mb[j++];
    double next = std::numeric_limits<double>::infinity();
    if (i < xa.size()) next = std::min(next, xa[i]);
    if (j < xb.size()) next = std::min(next, xb[j]);
    if (std::isinf(next)) break;
    total += std::abs(fa - fb) * (next - x);
    x = next;
  }
  return total;
}

}  // namespace gwnet
