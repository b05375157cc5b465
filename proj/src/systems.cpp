#include "fracmon/systems.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "fracmon/error.hpp"

namespace fracmon {

double SystemModel::constraint_residual(const PhasePoint& x) const {
  if (constraint_count() == 0) return 0.0;
  return constraints(x).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd SystemModel::tangent_basis(const PhasePoint& x) const {
  const int d = ambient_dim();
  if (constraint_count() == 0) return Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd g = constraint_jacobian(x);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(d - constraint_count());
}

Eigen::MatrixXd SystemModel::tangent_projector(const PhasePoint& x) const {
  const int d = ambient_dim();
  if (constraint_count() == 0) return Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd g = constraint_jacobian(x);
  return Eigen::MatrixXd::Identity(d, d) - g.transpose() * (g * g.transpose()).ldlt().solve(g);
}

Eigen::Vector2d eval_F(const SystemModel& s, const PhasePoint& x, double tol) {
  if (x.size() != s.ambient_dim()) {
    throw InvalidInput("phase point has dimension " + std::to_string(x.size()) + ", system " + s.id() +
                       " expects " + std::to_string(s.ambient_dim()));
  }
  const double res = s.constraint_residual(x);
  if (res > tol) {
    std::ostringstream os;
    os << "phase point violates the constraints of " << s.id() << " (residual " << res << ")";
    throw InvalidInput(os.str());
  }
  return {s.J(x), s.H(x)};
}

Eigen::VectorXd hamiltonian_vector_field(const SystemModel& s, Integral which, const PhasePoint& x) {
  const Eigen::VectorXd g = which == Integral::J ? s.grad_J(x) : s.grad_H(x);
  return s.poisson_tensor(x) * g;
}

double poisson_bracket_JH(const SystemModel& s, const PhasePoint& x) {
  return s.grad_J(x).dot(s.poisson_tensor(x) * s.grad_H(x));
}

double gram_determinant(const SystemModel& s, const PhasePoint& x) {
  const Eigen::MatrixXd p = s.tangent_projector(x);
  const Eigen::VectorXd a = p * s.grad_J(x);
  const Eigen::VectorXd b = p * s.grad_H(x);
  return std::max(0.0, a.squaredNorm() * b.squaredNorm() - a.dot(b) * a.dot(b));
}

namespace {

double pfaffian4(const Eigen::MatrixXd& a) {
  return a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2);
}

}  // namespace

int chart_orientation(const SystemModel& s, const PhasePoint& x) {
  const Eigen::MatrixXd t = s.tangent_basis(x);
  // Restricted Poisson bivector; its Pfaffian has the sign of the symplectic
  // volume omega ^ omega on the same chart.
  const Eigen::MatrixXd pi = t.transpose() * s.poisson_tensor(x) * t;
  const double pf = pfaffian4(pi);
  if (std::abs(pf) < 1e-12) throw NumericFailure("Poisson structure is degenerate on the tangent chart");
  return pf > 0 ? 1 : -1;
}

ChartLinearization linearize_action(const SystemModel& s, const PhasePoint& x, double h) {
  const int d = s.ambient_dim();
  Eigen::MatrixXd dx(d, d);
  for (int j = 0; j < d; ++j) {
    PhasePoint xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    dx.col(j) = (hamiltonian_vector_field(s, Integral::J, xp) - hamiltonian_vector_field(s, Integral::J, xm)) / (2 * h);
  }
  const Eigen::MatrixXd t = s.tangent_basis(x);
  if (t.cols() != 4) throw InvalidInput("linearization needs a 4-dimensional phase space");
  return {t.transpose() * dx * t, chart_orientation(s, x)};
}

std::vector<Polyline> stratum_image(const SystemModel& s, const StratumSpec& st, int samples) {
  if (samples < 2) throw InvalidInput("stratum_image needs at least 2 samples");
  const int k = static_cast<int>(st.param_lo.size());
  const int side = std::min(samples, 3);

  // Sample the transverse parameter densely and the orbit parameters
  // coarsely; F is invariant along orbits, so their images coincide.
  std::vector<Eigen::Vector2d> ordered;
  ordered.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    Eigen::VectorXd t = st.param_lo;
    t(0) = st.param_lo(0) + (st.param_hi(0) - st.param_lo(0)) * i / (samples - 1);
    Eigen::Vector2d first;
    for (int j = 0; j < (k > 1 ? side : 1); ++j) {
      for (int c = 1; c < k; ++c) t(c) = st.param_lo(c) + (st.param_hi(c) - st.param_lo(c)) * j / side;
      const PhasePoint x = st.parameterization(t);
      const Eigen::Vector2d f(s.J(x), s.H(x));
      if (j == 0) {
        first = f;
      } else if ((f - first).norm() > 1e-8 * (1 + first.norm())) {
        throw NumericFailure("F is not constant along the orbits of stratum '" + st.description + "'");
      }
    }
    if (ordered.empty() || (first - ordered.back()).norm() > 1e-12) ordered.push_back(first);
  }

  std::vector<Polyline> lines;
  if (ordered.size() < 2) return lines;
  std::vector<double> gaps;
  for (std::size_t i = 1; i < ordered.size(); ++i) gaps.push_back((ordered[i] - ordered[i - 1]).norm());
  std::vector<double> sorted = gaps;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double split = 50.0 * std::max(sorted[sorted.size() / 2], 1e-12);

  lines.emplace_back();
  lines.back().push_back(ordered[0]);
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (gaps[i - 1] > split) lines.emplace_back();
    lines.back().push_back(ordered[i]);
  }
  std::erase_if(lines, [](const Polyline& p) { return p.size() < 2; });
  return lines;
}

}  // namespace fracmon
