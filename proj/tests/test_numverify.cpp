#include <doctest.h>

#include <cmath>
#include <random>

#include "fracmon/error.hpp"
#include "fracmon/numverify.hpp"

using namespace fracmon;

namespace {

// Forwards everything to an inner system, optionally breaking H or its gradient.
class Corrupted : public SystemModel {
 public:
  Corrupted(SystemPtr inner, bool bad_h, bool bad_grad)
      : inner_(std::move(inner)), bad_h_(bad_h), bad_grad_(bad_grad) {}

  std::string id() const override { return inner_->id() + "+corrupted"; }
  int ambient_dim() const override { return inner_->ambient_dim(); }
  double J(const PhasePoint& x) const override { return inner_->J(x); }
  double H(const PhasePoint& x) const override { return inner_->H(x) + (bad_h_ ? 0.1 * x(0) : 0.0); }
  Eigen::VectorXd grad_J(const PhasePoint& x) const override { return inner_->grad_J(x); }
  Eigen::VectorXd grad_H(const PhasePoint& x) const override {
    Eigen::VectorXd g = inner_->grad_H(x);
    if (bad_h_) g(0) += 0.1;
    if (bad_grad_) g(1) += 1e-3 * (1 + x.norm());
    return g;
  }
  Eigen::MatrixXd poisson_tensor(const PhasePoint& x) const override { return inner_->poisson_tensor(x); }
  int constraint_count() const override { return inner_->constraint_count(); }
  Eigen::VectorXd constraints(const PhasePoint& x) const override { return inner_->constraints(x); }
  Eigen::MatrixXd constraint_jacobian(const PhasePoint& x) const override { return inner_->constraint_jacobian(x); }
  PhasePoint project(const PhasePoint& x) const override { return inner_->project(x); }
  std::vector<WeightedFixedPoint> fixed_points() const override { return inner_->fixed_points(); }
  PhasePoint random_point(std::mt19937_64& rng) const override { return inner_->random_point(rng); }
  std::vector<PhasePoint> seed_points(const Window& w, int grid) const override { return inner_->seed_points(w, grid); }

 private:
  SystemPtr inner_;
  bool bad_h_, bad_grad_;
};

}  // namespace

TEST_SUITE("numverify") {

TEST_CASE("hygiene checks pass on the catalog") {
  for (const char* id : {"res:1:-2", "res:1:-1", "res:2:-3", "res:3:-5", "s2xs2", "qsp"}) {
    CAPTURE(id);
    const auto s = make_system(id);
    CHECK(poisson_residual(*s, 100) < 1e-9);
    CHECK(grad_check(*s, 100) < 1e-6);
    CHECK(periodicity_residual(*s, 20) < 1e-8);
  }
}

TEST_CASE("corrupted Hamiltonian breaks involution") {
  const auto good = make_system("res:1:-2");
  const Corrupted bad(good, true, false);
  CHECK(poisson_residual(bad, 100) > 1e-3);
  CHECK(grad_check(bad, 100) < 1e-6);
}

TEST_CASE("corrupted gradient is detected") {
  for (const char* id : {"res:1:-2", "qsp"}) {
    CAPTURE(id);
    const Corrupted bad(make_system(id), false, true);
    CHECK(grad_check(bad, 100) > 1e-5);
  }
}

TEST_CASE("isotropy orders") {
  const auto s = make_system("res:1:-2");
  PhasePoint x(4);
  x << 0.3, 0.2, -0.1, 0.4;
  CHECK(isotropy_order(*s, x) == 1);
  PhasePoint y(4);
  y << 0, 0, 0.3, 0.5;  // z = 0: the Z_2 stratum
  CHECK(isotropy_order(*s, y) == 2);
}

TEST_CASE("fiber points") {
  const auto s = make_system("qsp");
  const Eigen::Vector2d target(0.1, -0.3);
  const PhasePoint x = find_fiber_point(*s, target);
  CHECK((eval_F(*s, x) - target).norm() < 1e-10);
  CHECK(s->constraint_residual(x) < 1e-10);
}

TEST_CASE("first return closes the orbit") {
  const auto s = make_system("res:1:-1");
  const PhasePoint x = find_fiber_point(*s, {0, 0.2});
  const FirstReturn r = first_return(*s, x);
  CHECK(r.T > 0);
  CHECK(r.residual < 1e-9);
  const PhasePoint y = flow(*s, Integral::H, x, r.T).x;
  const PhasePoint z = flow(*s, Integral::J, x, r.theta).x;
  CHECK((y - z).norm() < 1e-8);
}

TEST_CASE("focus-focus holonomy") {
  const auto s = make_system("res:1:-1");
  const LoopSpec loop = LoopSpec::circle({0, 0.1}, 0.3);
  const HolonomyTrace t = rotation_holonomy(*s, loop);
  CHECK(std::abs(t.k_estimate - 1) < 1e-3);
  CHECK(t.max_jump < M_PI);
  const HolonomyTrace r = rotation_holonomy(*s, loop.reversed());
  CHECK(std::abs(r.k_estimate + 1) < 1e-3);
}

TEST_CASE("holonomy is trivial away from singular values") {
  const auto s = make_system("res:1:-2");
  const HolonomyTrace t = rotation_holonomy(*s, LoopSpec::circle({1, 2}, 0.3));
  CHECK(std::abs(t.k_estimate) < 1e-3);
}

TEST_CASE("holonomy refuses loops through singular values") {
  const auto s = make_system("res:1:-2");
  CHECK_THROWS_AS(rotation_holonomy(*s, LoopSpec::circle({0, 0.25}, 0.5)), RegularityViolation);
  const auto f = make_system("res:1:-1");
  CHECK_THROWS_AS(rotation_holonomy(*f, LoopSpec::circle({0, 0.3}, 0.3)), RegularityViolation);
}

}
