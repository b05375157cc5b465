#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "fracmon/error.hpp"
#include "fracmon/systems.hpp"

namespace fracmon {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

FlowResult flow(const SystemModel& s, Integral which, const PhasePoint& x0, double t, const FlowOptions& opts) {
  auto rhs = [&](const PhasePoint& x) { return hamiltonian_vector_field(s, which, x); };
  const Eigen::Vector2d f0(s.J(x0), s.H(x0));

  FlowResult out;
  out.x = x0;
  if (t == 0.0) return out;

  const double dir = t > 0 ? 1.0 : -1.0;
  const double span = std::abs(t);
  double done = 0.0;
  double h = std::min(opts.initial_step, span);
  PhasePoint x = x0;
  Eigen::VectorXd k1 = rhs(x);

  while (done < span) {
    if (h < opts.min_step) {
      std::ostringstream os;
      os << "step size underflow at t = " << dir * done << " while flowing " << s.id();
      throw NumericFailure(os.str());
    }
    bool last = false;
    if (done + h >= span) {
      h = span - done;
      last = true;
    }
    const double hs = dir * h;
    const Eigen::VectorXd k2 = rhs(x + hs * a21 * k1);
    const Eigen::VectorXd k3 = rhs(x + hs * (a31 * k1 + a32 * k2));
    const Eigen::VectorXd k4 = rhs(x + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::VectorXd k5 = rhs(x + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::VectorXd k6 = rhs(x + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const PhasePoint xn = x + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Eigen::VectorXd k7 = rhs(xn);
    const Eigen::VectorXd err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double norm = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      const double sc = opts.atol + opts.rtol * std::max(std::abs(x(i)), std::abs(xn(i)));
      norm += (err(i) / sc) * (err(i) / sc);
    }
    norm = std::sqrt(norm / x.size());

    if (norm <= 1.0) {
      done = last ? span : done + h;
      x = s.project(xn);
      const double drift = s.constraint_residual(x);
      if (drift > opts.constraint_tol) {
        std::ostringstream os;
        os << "constraint drift " << drift << " exceeds tolerance while flowing " << s.id();
        throw NumericFailure(os.str());
      }
      k1 = rhs(x);
      ++out.steps;
    }
    const double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
    h = std::min(h * factor, opts.max_step);
    if (norm > 1.0) last = false;
  }

  out.x = x;
  out.drift_J = std::abs(s.J(x) - f0.x());
  out.drift_H = std::abs(s.H(x) - f0.y());
  return out;
}

}  // namespace fracmon
