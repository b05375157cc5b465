#ifndef FRACMON_SRC_AUTODIFF_SYSTEM_HPP
#define FRACMON_SRC_AUTODIFF_SYSTEM_HPP

#include <Eigen/Core>
#include <unsupported/Eigen/AutoDiff>

#include "fracmon/systems.hpp"

namespace fracmon::detail {

/// Implements the evaluator half of SystemModel for systems whose integrals
/// and constraints are written once as templates on the scalar type.
/// Derived provides
///   template <class S> S j_value(const Eigen::Matrix<S, Dim, 1>&) const;
///   template <class S> S h_value(const Eigen::Matrix<S, Dim, 1>&) const;
///   template <class S> Eigen::Matrix<S, NC, 1> constraint_values(const Eigen::Matrix<S, Dim, 1>&) const;
/// and gradients come from forward-mode automatic differentiation.
template <class Derived, int Dim, int NC>
class AutodiffSystem : public SystemModel {
 public:
  template <class S>
  using Vec = Eigen::Matrix<S, Dim, 1>;
  using Deriv = Eigen::Matrix<double, Dim, 1>;
  using AD = Eigen::AutoDiffScalar<Deriv>;

  int ambient_dim() const override { return Dim; }
  int constraint_count() const override { return NC; }

  double J(const PhasePoint& x) const override { return derived().j_value(Vec<double>(x)); }
  double H(const PhasePoint& x) const override { return derived().h_value(Vec<double>(x)); }

  Eigen::VectorXd grad_J(const PhasePoint& x) const override {
    return derived().j_value(seed(x)).derivatives();
  }
  Eigen::VectorXd grad_H(const PhasePoint& x) const override {
    return derived().h_value(seed(x)).derivatives();
  }

  Eigen::VectorXd constraints(const PhasePoint& x) const override {
    if constexpr (NC == 0) {
      return Eigen::VectorXd(0);
    } else {
      return derived().constraint_values(Vec<double>(x));
    }
  }

  Eigen::MatrixXd constraint_jacobian(const PhasePoint& x) const override {
    Eigen::MatrixXd g(NC, Dim);
    if constexpr (NC > 0) {
      const Eigen::Matrix<AD, NC, 1> c = derived().constraint_values(seed(x));
      for (int i = 0; i < NC; ++i) g.row(i) = c(i).derivatives().transpose();
    }
    return g;
  }

 protected:
  static Vec<AD> seed(const PhasePoint& x) {
    Vec<AD> v;
    for (int i = 0; i < Dim; ++i) v(i) = AD(x(i), Dim, i);
    return v;
  }

 private:
  const Derived& derived() const { return static_cast<const Derived&>(*this); }
};

}  // namespace fracmon::detail

#endif  // FRACMON_SRC_AUTODIFF_SYSTEM_HPP
