#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include <Eigen/LU>

#include "fracmon/circle_action.hpp"
#include "fracmon/error.hpp"

using namespace fracmon;

namespace {

// Generator of (e^{imt} z, e^{-int} w) with z = p1 + i q1, w = p2 + i q2,
// in the chart (q1, p1, q2, p2).
Eigen::Matrix4d oscillator(int m, int n) {
  Eigen::Matrix4d l = Eigen::Matrix4d::Zero();
  l(0, 1) = m;
  l(1, 0) = -m;
  l(2, 3) = -n;
  l(3, 2) = n;
  return l;
}

WeightedFixedPoint point(int m, int n) { return {Eigen::VectorXd::Zero(4), {m, n}, Eigen::Vector2d::Zero()}; }

}  // namespace

TEST_SUITE("circle_action") {

TEST_CASE("contribution") {
  CHECK(contribution(point(1, 2)) == Rational(1, 2));
  CHECK(contribution(point(1, 1)) == Rational(1));
  CHECK(contribution(point(1, -1)) == Rational(-1));
  CHECK_THROWS_AS(point(0, 1), InvalidInput);
  CHECK_THROWS_AS(point(2, 4), InvalidInput);
}

TEST_CASE("euler_from_fixed_points") {
  const std::vector<WeightedFixedPoint> none;
  CHECK(euler_from_fixed_points(none) == Rational(0));
  const std::vector<WeightedFixedPoint> one{point(1, 2)};
  CHECK(euler_from_fixed_points(one) == Rational(1, 2));
  const std::vector<WeightedFixedPoint> two{point(1, 2), point(1, 2)};
  CHECK(euler_from_fixed_points(two) == Rational(1));
  for (int m = 1; m <= 5; ++m) {
    for (int n = 1; n <= 5; ++n) {
      if (std::gcd(m, n) != 1) continue;
      const std::vector<WeightedFixedPoint> p{point(m, n)};
      CHECK(euler_from_fixed_points(p) == Rational(1, m * n));
    }
  }
}

TEST_CASE("euler sum is permutation invariant and additive") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> w(-7, 7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<WeightedFixedPoint> pts;
    while (pts.size() < 6) {
      const int m = w(rng), n = w(rng);
      if (m != 0 && n != 0 && std::gcd(m, n) == 1) pts.push_back(point(m, n));
    }
    const Rational e = euler_from_fixed_points(pts);
    std::shuffle(pts.begin(), pts.end(), rng);
    CHECK(euler_from_fixed_points(pts) == e);
    const std::vector<WeightedFixedPoint> a(pts.begin(), pts.begin() + 2), b(pts.begin() + 2, pts.end());
    CHECK(euler_from_fixed_points(a) + euler_from_fixed_points(b) == e);
  }
}

TEST_CASE("weights of oscillators") {
  for (int m = 1; m <= 5; ++m) {
    for (int n = 1; n <= 5; ++n) {
      if (std::gcd(m, n) != 1) continue;
      const auto w = weights_from_linearization(oscillator(m, n), 1);
      CHECK(w == IsotropyWeights{m, n});
    }
  }
  // Elliptic-elliptic 1:1 rotation in both planes with the same sense.
  CHECK(weights_from_linearization(oscillator(1, -1), 1) == IsotropyWeights{1, -1});
}

TEST_CASE("orientation sign flips the second weight") {
  CHECK(weights_from_linearization(oscillator(1, 2), -1) == IsotropyWeights{1, -2});
}

TEST_CASE("swapping the planes keeps the contribution") {
  Eigen::Matrix4d p = Eigen::Matrix4d::Zero();
  p(0, 2) = p(1, 3) = p(2, 0) = p(3, 1) = 1;  // orientation preserving
  for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}, {1, 1}, {3, 5}}) {
    const Eigen::Matrix4d l = p * oscillator(m, n) * p.transpose();
    CHECK(contribution(weights_from_linearization(l, 1)) == Rational(1, m * n));
  }
}

TEST_CASE("weights survive a change of oriented frame") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int i = 0; i < 50; ++i) {
    Eigen::Matrix4d a;
    for (int k = 0; k < 16; ++k) a(k) = g(rng);
    if (a.determinant() < 0) a.col(0) *= -1;
    // The plane order is decided by the load on the first two coordinates,
    // so only the contribution is frame independent.
    const Eigen::Matrix4d l = a * oscillator(2, 3) * a.inverse();
    CHECK(contribution(weights_from_linearization(l, 1)) == Rational(1, 6));
  }
}

TEST_CASE("degenerate linearizations") {
  Eigen::Matrix4d hyperbolic = oscillator(1, 2);
  hyperbolic(0, 1) = hyperbolic(1, 0) = 0;
  hyperbolic(0, 0) = 1;
  hyperbolic(1, 1) = -1;
  CHECK_THROWS_AS(weights_from_linearization(hyperbolic, 1), NumericFailure);
  CHECK_THROWS_AS(weights_from_linearization(oscillator(1, 0), 1), NumericFailure);
  CHECK_THROWS_AS(weights_from_linearization(oscillator(2, 4), 1), NumericFailure);
  Eigen::Matrix4d irrational = oscillator(1, 2);
  irrational(2, 3) *= 1.3;
  irrational(3, 2) *= 1.3;
  CHECK_THROWS_AS(weights_from_linearization(irrational, 1), NumericFailure);
  CHECK_THROWS_AS(weights_from_linearization(oscillator(1, 2), 0), InvalidInput);
}

}
