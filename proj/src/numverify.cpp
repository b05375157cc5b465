#include "fracmon/numverify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "fracmon/error.hpp"

namespace fracmon {

namespace {

using std::numbers::pi;

double wrap_angle(double a) { return a - 2 * pi * std::floor(a / (2 * pi)); }

template <class F>
Eigen::VectorXd central_gradient(F f, const PhasePoint& x, double h) {
  Eigen::VectorXd g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    PhasePoint xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2 * h);
  }
  return g;
}

Eigen::VectorXd fiber_residual(const SystemModel& s, const Eigen::Vector2d& target, const PhasePoint& x) {
  Eigen::VectorXd r(2 + s.constraint_count());
  r(0) = s.J(x) - target.x();
  r(1) = s.H(x) - target.y();
  if (s.constraint_count() > 0) r.tail(s.constraint_count()) = s.constraints(x);
  return r;
}

}  // namespace

double poisson_residual(const SystemModel& s, int n_samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0;
  for (int i = 0; i < n_samples; ++i) {
    const PhasePoint x = s.random_point(rng);
    const double r2 = x.squaredNorm();
    worst = std::max(worst, std::abs(poisson_bracket_JH(s, x)) / (1 + r2 * r2));
  }
  return worst;
}

double grad_check(const SystemModel& s, int n_samples, double h, std::uint64_t seed) {
  if (!(h > 0)) throw InvalidInput("grad_check needs h > 0");
  std::mt19937_64 rng(seed);
  double worst = 0;
  for (int i = 0; i < n_samples; ++i) {
    const PhasePoint x = s.random_point(rng);
    const Eigen::MatrixXd p = s.tangent_projector(x);
    const auto fj = [&](const PhasePoint& y) { return s.J(y); };
    const auto fh = [&](const PhasePoint& y) { return s.H(y); };
    for (int which = 0; which < 2; ++which) {
      const Eigen::VectorXd g = p * (which == 0 ? s.grad_J(x) : s.grad_H(x));
      const Eigen::VectorXd fd = p * (which == 0 ? central_gradient(fj, x, h) : central_gradient(fh, x, h));
      worst = std::max(worst, (g - fd).norm() / (1 + g.norm()));
    }
  }
  return worst;
}

double periodicity_residual(const SystemModel& s, int n_samples, std::uint64_t seed, const FlowOptions& opts) {
  std::mt19937_64 rng(seed);
  double worst = 0;
  for (int i = 0; i < n_samples; ++i) {
    const PhasePoint x = s.random_point(rng);
    const FlowResult r = flow(s, Integral::J, x, 2 * pi, opts);
    worst = std::max(worst, (r.x - x).norm() / (1 + x.norm()));
  }
  return worst;
}

int isotropy_order(const SystemModel& s, const PhasePoint& x, int max_order, double tol) {
  for (int n = max_order; n >= 2; --n) {
    const FlowResult r = flow(s, Integral::J, x, 2 * pi / n);
    if ((r.x - x).norm() <= tol * (1 + x.norm())) return n;
  }
  return 1;
}

PhasePoint solve_fiber_point(const SystemModel& s, const Eigen::Vector2d& target, const PhasePoint& x0, double tol,
                             int max_iterations) {
  PhasePoint x = s.project(x0);
  Eigen::VectorXd r = fiber_residual(s, target, x);
  const double scale = 1 + target.norm();
  for (int it = 0; it < max_iterations && r.norm() > tol * scale; ++it) {
    Eigen::MatrixXd jac(r.size(), x.size());
    jac.row(0) = s.grad_J(x).transpose();
    jac.row(1) = s.grad_H(x).transpose();
    if (s.constraint_count() > 0) jac.bottomRows(s.constraint_count()) = s.constraint_jacobian(x);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac);
    const Eigen::VectorXd step = cod.solve(r);
    double alpha = 1;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
      const PhasePoint xn = s.project(x - alpha * step);
      const Eigen::VectorXd rn = fiber_residual(s, target, xn);
      if (rn.norm() < r.norm()) {
        x = xn;
        r = rn;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (!(r.norm() <= tol * scale * 10)) {
    std::ostringstream os;
    os << "could not find a point on the fiber over (" << target.x() << ", " << target.y() << "), residual "
       << r.norm();
    throw NumericFailure(os.str());
  }
  return x;
}

PhasePoint find_fiber_point(const SystemModel& s, const Eigen::Vector2d& target) {
  const Window w{target.x() - 0.5, target.x() + 0.5, target.y() - 0.5, target.y() + 0.5};
  std::vector<PhasePoint> seeds = s.seed_points(w, 6);
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    seeds[i] = s.project(seeds[i]);
    order.emplace_back((Eigen::Vector2d(s.J(seeds[i]), s.H(seeds[i])) - target).norm(), i);
  }
  std::sort(order.begin(), order.end());
  const std::size_t tries = std::min<std::size_t>(order.size(), 40);
  for (std::size_t i = 0; i < tries; ++i) {
    try {
      const PhasePoint x = solve_fiber_point(s, target, seeds[order[i].second]);
      if (gram_determinant(s, x) > 1e-8) return x;
    } catch (const NumericFailure&) {
    }
  }
  std::ostringstream os;
  os << "no regular point found on the fiber over (" << target.x() << ", " << target.y() << ")";
  throw NumericFailure(os.str());
}

std::optional<FirstReturn> refine_return(const SystemModel& s, const PhasePoint& x, FirstReturn guess,
                                         const FlowOptions& opts) {
  double t = guess.T, th = guess.theta;
  double res = std::numeric_limits<double>::infinity();
  const double tol = 1e-10 * (1 + x.norm());
  for (int it = 0; it < 30; ++it) {
    if (!(t > 0)) return std::nullopt;
    const PhasePoint y = flow(s, Integral::H, x, t, opts).x;
    const PhasePoint z = flow(s, Integral::J, x, wrap_angle(th), opts).x;
    const Eigen::VectorXd r = y - z;
    res = r.norm();
    Eigen::MatrixXd jac(x.size(), 2);
    jac.col(0) = hamiltonian_vector_field(s, Integral::H, y);
    jac.col(1) = -hamiltonian_vector_field(s, Integral::J, z);
    const Eigen::Vector2d step = jac.colPivHouseholderQr().solve(r);
    if (!step.allFinite()) return std::nullopt;
    t -= step(0);
    th -= step(1);
    if (res < tol && step.norm() < 1e-9) break;
  }
  if (!(res < 1e-8 * (1 + x.norm())) || !(t > 0)) return std::nullopt;
  return FirstReturn{t, th, res};
}

FirstReturn first_return(const SystemModel& s, const PhasePoint& x, const FlowOptions& opts, double max_time) {
  constexpr int kOrbitSamples = 256;
  std::vector<PhasePoint> orbit(kOrbitSamples);
  orbit[0] = x;
  for (int j = 1; j < kOrbitSamples; ++j) orbit[j] = flow(s, Integral::J, orbit[j - 1], 2 * pi / kOrbitSamples, opts).x;
  double size = 0;
  for (const auto& o : orbit) size = std::max(size, (o - x).norm());
  const double speed = hamiltonian_vector_field(s, Integral::H, x).norm();
  if (size < 1e-8 || speed < 1e-12) throw NumericFailure("first return: degenerate orbit at the station point");

  auto nearest = [&](const PhasePoint& y) {
    std::pair<double, int> best{std::numeric_limits<double>::infinity(), 0};
    for (int j = 0; j < kOrbitSamples; ++j) best = std::min(best, {(y - orbit[j]).norm(), j});
    return best;
  };

  const double dt = std::min(0.01 * size / speed, 0.05);
  const double near = 0.1 * size;
  bool left = false;
  PhasePoint y = x;
  double t = 0;
  std::pair<double, int> d_prev2{0, 0}, d_prev{0, 0};
  int count = 0;
  while (t < max_time) {
    y = flow(s, Integral::H, y, dt, opts).x;
    t += dt;
    const auto d = nearest(y);
    if (!left) {
      if (d.first > near) left = true;
      d_prev = d;
      continue;
    }
    if (count >= 2 && d_prev.first < d_prev2.first && d_prev.first <= d.first && d_prev.first < near) {
      const auto r = refine_return(s, x, FirstReturn{t - dt, 2 * pi * d_prev.second / kOrbitSamples}, opts);
      if (r) return *r;
    }
    d_prev2 = d_prev;
    d_prev = d;
    ++count;
  }
  std::ostringstream os;
  os << "first return time exceeds " << max_time << " (near a critical value?)";
  throw NumericFailure(os.str());
}

HolonomyTrace rotation_holonomy(const SystemModel& s, const LoopSpec& loop, const HolonomyOptions& opts) {
  if (opts.n_stations < 4) throw InvalidInput("rotation_holonomy needs at least 4 stations");

  // The loop must stay in the regular region.
  for (const auto& fp : s.fixed_points()) {
    if (loop.distance_to(fp.f_value()) <= opts.critical_clearance) {
      throw RegularityViolation("regular loop", "loop passes through the image of a fixed point");
    }
  }
  const OrdersOnLoop ool = orders_on_loop(s, loop);
  if (!ool.crossings.empty()) {
    throw RegularityViolation("regular loop",
                              "loop crosses the image of an exceptional stratum; fractional loops are not "
                              "handled by rotation_holonomy");
  }
  if (opts.scan_critical) {
    Window w{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& p : loop.discretize(256)) {
      w.j_min = std::min(w.j_min, p.x());
      w.j_max = std::max(w.j_max, p.x());
      w.h_min = std::min(w.h_min, p.y());
      w.h_max = std::max(w.h_max, p.y());
    }
    const double pad = 0.05 * std::max(w.j_max - w.j_min, w.h_max - w.h_min);
    w.j_min -= pad;
    w.j_max += pad;
    w.h_min -= pad;
    w.h_max += pad;
    ScanOptions so;
    so.grid = opts.scan_grid;
    so.threads = opts.threads;
    for (const auto& c : critical_scan(s, w, so).points) {
      if (loop.distance_to(c.value) <= opts.critical_clearance) {
        std::ostringstream os;
        os << "loop passes through the critical value (" << c.value.x() << ", " << c.value.y() << ")";
        throw RegularityViolation("regular loop", os.str());
      }
    }
  }

  const PhasePoint base = find_fiber_point(s, loop.point(0));
  const FirstReturn base_return = first_return(s, base, opts.flow, opts.max_return_time);

  for (int n = opts.n_stations, refinements = 0; n <= opts.max_stations; n *= 2, ++refinements) {
    HolonomyTrace tr;
    tr.refinements = refinements;
    PhasePoint x = base;
    FirstReturn prev = base_return;
    tr.stations.push_back(loop.point(0));
    tr.T.push_back(prev.T);
    tr.theta.push_back(prev.theta);
    tr.max_residual = prev.residual;
    bool ok = true;
    for (int i = 1; i <= n && ok; ++i) {
      const Eigen::Vector2d xi = loop.point(static_cast<double>(i) / n);
      try {
        x = solve_fiber_point(s, xi, x);
      } catch (const NumericFailure&) {
        ok = false;
        break;
      }
      if (gram_determinant(s, x) < 1e-10) {
        std::ostringstream os;
        os << "fiber over (" << xi.x() << ", " << xi.y() << ") is critical";
        throw RegularityViolation("regular loop", os.str());
      }
      const auto r = refine_return(s, x, prev, opts.flow);
      if (!r || std::abs(r->theta - prev.theta) >= pi || std::abs(r->T - prev.T) > 0.25 * prev.T) {
        ok = false;
        break;
      }
      tr.max_jump = std::max(tr.max_jump, std::abs(r->theta - prev.theta));
      tr.max_residual = std::max(tr.max_residual, r->residual);
      prev = *r;
      tr.stations.push_back(xi);
      tr.T.push_back(r->T);
      tr.theta.push_back(r->theta);
    }
    if (!ok) continue;
    tr.k_estimate = (tr.theta.back() - tr.theta.front()) / (2 * pi);
    return tr;
  }
  throw NumericFailure("rotation_holonomy: continuation failed with " + std::to_string(opts.max_stations) +
                       " stations; refine the stations or move the loop away from critical values");
}

}  // namespace fracmon
