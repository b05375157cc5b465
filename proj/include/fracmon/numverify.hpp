#ifndef FRACMON_NUMVERIFY_HPP
#define FRACMON_NUMVERIFY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "fracmon/monodromy.hpp"
#include "fracmon/systems.hpp"

namespace fracmon {

/// max |{J,H}(x)| / (1 + |x|^4) over random valid points.
double poisson_residual(const SystemModel& s, int n_samples, std::uint64_t seed = 1);

/// Largest relative deviation between the gradients of J, H and central
/// differences with step h, over random valid points.  On constrained
/// systems both sides are projected to the tangent space first.
double grad_check(const SystemModel& s, int n_samples, double h = 1e-5, std::uint64_t seed = 1);

/// max |flow(J, x, 2 pi) - x| / (1 + |x|) over random valid points.
double periodicity_residual(const SystemModel& s, int n_samples, std::uint64_t seed = 1,
                            const FlowOptions& opts = {});

/// Largest n <= max_order with flow(J, x, 2 pi / n) = x within tol; 1 for
/// points with trivial isotropy.
int isotropy_order(const SystemModel& s, const PhasePoint& x, int max_order = 12, double tol = 1e-8);

/// Newton solve of F(x) = target (plus constraints) starting from x0,
/// minimum-norm steps.  Throws NumericFailure when it does not converge.
PhasePoint solve_fiber_point(const SystemModel& s, const Eigen::Vector2d& target, const PhasePoint& x0,
                             double tol = 1e-12, int max_iterations = 50);

/// A point on the fiber over `target`, seeded from the system's scan seeds.
PhasePoint find_fiber_point(const SystemModel& s, const Eigen::Vector2d& target);

/// First return (T, Theta): flow(H, x, T) = flow(J, x, Theta).
struct FirstReturn {
  double T = 0;
  double theta = 0;
  double residual = 0;
};

/// Refines a first-return guess by Gauss-Newton in (T, Theta).
std::optional<FirstReturn> refine_return(const SystemModel& s, const PhasePoint& x, FirstReturn guess,
                                         const FlowOptions& opts = {});

/// Searches the X_H trajectory of x for its first return to the X_J orbit.
FirstReturn first_return(const SystemModel& s, const PhasePoint& x, const FlowOptions& opts = {},
                         double max_time = 200.0);

struct HolonomyOptions {
  int n_stations = 64;
  int max_stations = 1024;
  FlowOptions flow;
  double max_return_time = 200.0;
  /// Reject loops passing within this distance of a scanned critical value.
  double critical_clearance = 1e-3;
  bool scan_critical = true;
  int scan_grid = 6;
  int threads = 1;
};

struct HolonomyTrace {
  std::vector<Eigen::Vector2d> stations;  // gamma(i / n), i = 0..n
  std::vector<double> T;
  std::vector<double> theta;  // continued
  double k_estimate = 0;
  double max_jump = 0;        // largest |Theta_{i+1} - Theta_i|
  double max_residual = 0;    // largest first-return residual
  int refinements = 0;        // station doublings
};

/// Holonomy of the period lattice along a loop in the regular region,
/// tracked through the rotation angle of the first return of X_H to the
/// X_J orbit.  k_estimate = (Theta_end - Theta_start) / 2 pi.  Throws
/// RegularityViolation for loops meeting critical values and
/// NumericFailure when continuation fails at max_stations.
HolonomyTrace rotation_holonomy(const SystemModel& s, const LoopSpec& loop, const HolonomyOptions& opts = {});

}  // namespace fracmon

#endif  // FRACMON_NUMVERIFY_HPP
