#include "fracmon/circle_action.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fracmon/error.hpp"

namespace fracmon {

WeightedFixedPoint::WeightedFixedPoint(Eigen::VectorXd location, IsotropyWeights weights,
                                       Eigen::Vector2d f_value)
    : location_(std::move(location)), weights_(weights), f_value_(f_value) {
  if (weights_.m == 0 || weights_.n == 0) throw InvalidInput("isotropy weights must be non-zero");
  if (std::gcd(weights_.m, weights_.n) != 1) {
    throw InvalidInput("isotropy weights (" + std::to_string(weights_.m) + "," +
                       std::to_string(weights_.n) + ") are not coprime");
  }
}

Rational contribution(const IsotropyWeights& w) { return Rational(1) / Rational(std::int64_t{w.m} * w.n); }

Rational contribution(const WeightedFixedPoint& p) { return contribution(p.weights()); }

Rational euler_from_fixed_points(std::span<const WeightedFixedPoint> pts) {
  Rational e(0);
  for (const auto& p : pts) e += contribution(p);
  return e;
}

IsotropyWeights weights_from_linearization(const Eigen::Matrix4d& L, int orientation_sign,
                                           const LinearizationOptions& opts) {
  if (orientation_sign != 1 && orientation_sign != -1) throw InvalidInput("orientation sign must be +1 or -1");
  Eigen::EigenSolver<Eigen::Matrix4d> es(L, true);
  if (es.info() != Eigen::Success) throw NumericFailure("eigen decomposition of the linearization failed");

  const Eigen::Vector4cd lambda = es.eigenvalues();
  const Eigen::Matrix4cd vecs = es.eigenvectors();
  const double scale = std::max(1.0, L.norm());

  std::vector<int> upper;
  for (int k = 0; k < 4; ++k) {
    if (std::abs(lambda(k).real()) > opts.tol * scale) {
      std::ostringstream os;
      os << "linearization has eigenvalue " << lambda(k) << " off the imaginary axis; not a circle action";
      throw NumericFailure(os.str());
    }
    if (std::abs(lambda(k).imag()) < opts.tol) {
      throw NumericFailure("zero rotation rate in linearization: fixed point is not isolated");
    }
    if (lambda(k).imag() > 0) upper.push_back(k);
  }
  if (upper.size() != 2) throw NumericFailure("linearization does not split into two rotation planes");

  // A 4x4 real matrix always pairs conjugate eigenvalues, so the frame
  // (Im v, Re v) of each upper eigenvector spans a plane that rotates
  // counter-clockwise at rate Im(lambda).
  auto load = [&](int k) { return vecs.col(k).head<2>().squaredNorm() / vecs.col(k).squaredNorm(); };
  if (load(upper[1]) > load(upper[0]) + 1e-9) std::swap(upper[0], upper[1]);

  Eigen::Matrix4d frame;
  for (int i = 0; i < 2; ++i) {
    frame.col(2 * i) = vecs.col(upper[i]).imag();
    frame.col(2 * i + 1) = vecs.col(upper[i]).real();
  }
  for (int j = 0; j < 4; ++j) frame.col(j).normalize();
  const double det = frame.determinant();
  if (std::abs(det) < 1e-8) throw NumericFailure("linearization is not diagonalizable over C");
  const int sigma = (det > 0 ? 1 : -1) * orientation_sign;

  int rates[2];
  for (int i = 0; i < 2; ++i) {
    const double w = lambda(upper[i]).imag() / opts.period_scale;
    const double r = std::round(w);
    if (std::abs(w - r) > opts.tol) {
      std::ostringstream os;
      os << "rotation rate " << w << " is not an integer: generator is not 2 pi periodic";
      throw NumericFailure(os.str());
    }
    rates[i] = static_cast<int>(r);
  }
  // In a positively oriented frame the rates are (w1, sigma*w2) = (m, -n).
  IsotropyWeights wts{rates[0], -sigma * rates[1]};
  if (std::gcd(wts.m, wts.n) != 1) {
    throw NumericFailure("degenerate weights (" + std::to_string(wts.m) + "," + std::to_string(wts.n) +
                         "): not coprime, action is not effective near the fixed point");
  }
  return wts;
}

}  // namespace fracmon
