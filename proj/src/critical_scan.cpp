#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include <Eigen/Dense>

#include "fracmon/error.hpp"
#include "fracmon/systems.hpp"

namespace fracmon {

namespace {

// Lagrange residual on (x, lambda): tangential part of grad H - lambda grad J,
// stacked with the constraint values.
Eigen::VectorXd lagrange_residual(const SystemModel& s, const Eigen::VectorXd& y) {
  const int d = s.ambient_dim();
  const PhasePoint x = y.head(d);
  const double lambda = y(d);
  Eigen::VectorXd r(d + s.constraint_count());
  r.head(d) = s.tangent_projector(x) * (s.grad_H(x) - lambda * s.grad_J(x));
  if (s.constraint_count() > 0) r.tail(s.constraint_count()) = s.constraints(x);
  return r;
}

}  // namespace

std::optional<PhasePoint> refine_critical(const SystemModel& s, const PhasePoint& seed, int max_iterations) {
  const int d = s.ambient_dim();
  PhasePoint x0 = s.project(seed);
  Eigen::VectorXd y(d + 1);
  y.head(d) = x0;
  {
    const Eigen::MatrixXd p = s.tangent_projector(x0);
    const Eigen::VectorXd gj = p * s.grad_J(x0);
    const double nj = gj.squaredNorm();
    y(d) = nj > 0 ? gj.dot(p * s.grad_H(x0)) / nj : 0.0;
  }

  Eigen::VectorXd r = lagrange_residual(s, y);
  double rn = r.norm();
  for (int it = 0; it < max_iterations; ++it) {
    const double scale = 1.0 + s.grad_H(y.head(d)).norm() + std::abs(y(d)) * s.grad_J(y.head(d)).norm();
    if (rn < 1e-13 * scale) break;

    Eigen::MatrixXd jac(r.size(), d + 1);
    for (int j = 0; j <= d; ++j) {
      const double h = 1e-7 * (1.0 + std::abs(y(j)));
      Eigen::VectorXd yp = y, ym = y;
      yp(j) += h;
      ym(j) -= h;
      jac.col(j) = (lagrange_residual(s, yp) - lagrange_residual(s, ym)) / (2 * h);
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
    cod.setThreshold(1e-10);
    const Eigen::VectorXd step = cod.solve(r);

    double alpha = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
      const Eigen::VectorXd yn = y - alpha * step;
      const Eigen::VectorXd rn_vec = lagrange_residual(s, yn);
      if (rn_vec.norm() < rn) {
        y = yn;
        r = rn_vec;
        rn = rn_vec.norm();
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }

  PhasePoint x = s.project(y.head(d));
  y.head(d) = x;
  const double scale = 1.0 + s.grad_H(x).norm() + std::abs(y(d)) * s.grad_J(x).norm();
  if (!std::isfinite(rn) || lagrange_residual(s, y).norm() > 1e-9 * scale) return std::nullopt;
  return x;
}

ScanResult critical_scan(const SystemModel& s, const Window& window, const ScanOptions& opts) {
  if (opts.grid < 2) throw InvalidInput("critical_scan needs grid >= 2");
  const std::vector<PhasePoint> seeds = s.seed_points(window, opts.grid);

  std::vector<std::optional<CriticalPoint>> found(seeds.size());
  std::vector<char> failed(seeds.size(), 0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto x = refine_critical(s, seeds[i], opts.max_iterations);
      if (!x) {
        failed[i] = 1;
        continue;
      }
      const double g = gram_determinant(s, *x);
      if (g > opts.tol) {
        failed[i] = 1;
        continue;
      }
      found[i] = CriticalPoint{Eigen::Vector2d(s.J(*x), s.H(*x)), *x, g};
    }
  };

  const int threads = std::max(1, opts.threads);
  if (threads == 1) {
    work(0, seeds.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (seeds.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::size_t b = std::min(seeds.size(), t * chunk);
      const std::size_t e = std::min(seeds.size(), b + chunk);
      pool.emplace_back(work, b, e);
    }
  }

  ScanResult result;
  result.seeds = static_cast<int>(seeds.size());
  std::vector<CriticalPoint> candidates;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (failed[i]) ++result.dropped;
    if (!found[i]) continue;
    ++result.converged;
    if (window.contains(found[i]->value)) candidates.push_back(*found[i]);
  }

  // Sort, then greedily keep points at least dedupe_radius apart (bucketed).
  auto less = [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.value.x() != b.value.x()) return a.value.x() < b.value.x();
    if (a.value.y() != b.value.y()) return a.value.y() < b.value.y();
    return std::lexicographical_compare(a.witness.data(), a.witness.data() + a.witness.size(), b.witness.data(),
                                        b.witness.data() + b.witness.size());
  };
  std::sort(candidates.begin(), candidates.end(), less);
  const double r = opts.dedupe_radius;
  std::map<std::pair<long long, long long>, std::vector<Eigen::Vector2d>> buckets;
  for (const auto& c : candidates) {
    const long long bj = static_cast<long long>(std::floor(c.value.x() / r));
    const long long bh = static_cast<long long>(std::floor(c.value.y() / r));
    bool near = false;
    for (long long dj = -1; dj <= 1 && !near; ++dj) {
      for (long long dh = -1; dh <= 1 && !near; ++dh) {
        const auto it = buckets.find({bj + dj, bh + dh});
        if (it == buckets.end()) continue;
        for (const auto& v : it->second) {
          if ((v - c.value).norm() < r) {
            near = true;
            break;
          }
        }
      }
    }
    if (near) continue;
    buckets[{bj, bh}].push_back(c.value);
    result.points.push_back(c);
  }
  return result;
}

}  // namespace fracmon
