#ifndef FRACMON_CIRCLE_ACTION_HPP
#define FRACMON_CIRCLE_ACTION_HPP

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fracmon/rational.hpp"

namespace fracmon {

/// Isotropy weights (m, n): near the fixed point the action reads
/// (e^{imt} z, e^{-int} w) in positively oriented complex coordinates.
struct IsotropyWeights {
  int m = 1;
  int n = 1;
  friend bool operator==(const IsotropyWeights&, const IsotropyWeights&) = default;
};

/// Isolated fixed point of the circle action with its weights and image F(p).
class WeightedFixedPoint {
 public:
  WeightedFixedPoint(Eigen::VectorXd location, IsotropyWeights weights, Eigen::Vector2d f_value);

  const Eigen::VectorXd& location() const noexcept { return location_; }
  const IsotropyWeights& weights() const noexcept { return weights_; }
  /// (J, H) at the fixed point.
  const Eigen::Vector2d& f_value() const noexcept { return f_value_; }

 private:
  Eigen::VectorXd location_;
  IsotropyWeights weights_;
  Eigen::Vector2d f_value_;
};

/// 1 / (m n); negative when the weights have opposite signs.
Rational contribution(const WeightedFixedPoint& p);
Rational contribution(const IsotropyWeights& w);

/// Euler number of the boundary of an invariant filling: sum of 1/(m_k n_k).
Rational euler_from_fixed_points(std::span<const WeightedFixedPoint> pts);

struct LinearizationOptions {
  /// Bound on |Re(lambda)| and on |w_i - round(w_i)|.
  double tol = 1e-6;
  /// Rotation rates are divided by this before rounding; 1 when the
  /// generator already has period 2 pi.
  double period_scale = 1.0;
};

/// Reads isotropy weights off the 4x4 linearization L of the action's
/// generator at an isolated fixed point.
///
/// `orientation_sign` is +1 when the chart in which L is written is
/// positively oriented for the symplectic orientation, -1 otherwise.  The
/// first weight belongs to the invariant plane that loads most on the first
/// two chart coordinates, so a chart (z, w) reproduces (m, n) in that order.
/// Throws NumericFailure for eigenvalues off the imaginary axis, zero
/// rotation rates (non-isolated fixed point), non-integral rates, or
/// non-coprime weights.
IsotropyWeights weights_from_linearization(const Eigen::Matrix4d& L, int orientation_sign,
                                           const LinearizationOptions& opts = {});

}  // namespace fracmon

#endif  // FRACMON_CIRCLE_ACTION_HPP
