#include <doctest.h>

#include <cmath>

#include "fracmon/error.hpp"
#include "fracmon/systems.hpp"

using namespace fracmon;

namespace {

bool has_value(const ScanResult& r, const Eigen::Vector2d& v, double tol) {
  for (const auto& p : r.points) {
    if ((p.value - v).norm() < tol) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("scan") {

TEST_CASE("1:(-2) recovers the origin and the hyperbolic branch") {
  const auto s = make_system("res:1:-2");
  const Window w{-2, 2, -1, 4};
  const ScanResult r = critical_scan(*s, w, {});
  CHECK(has_value(r, {0, 0}, 1e-8));
  int on_branch = 0;
  for (const auto& p : r.points) {
    CHECK(w.contains(p.value));
    CHECK(p.gram_det < 1e-10);
    if (p.value.x() <= 0 && std::abs(p.value.y() - p.value.x() * p.value.x()) < 1e-6) ++on_branch;
  }
  CHECK(on_branch >= 50);
}

TEST_CASE("1:(-1) has an isolated critical value at the origin") {
  const auto s = make_system("res:1:-1");
  const ScanResult r = critical_scan(*s, {-1, 1, -0.2, 1}, {});
  CHECK(has_value(r, {0, 0}, 1e-8));
  for (const auto& p : r.points) CHECK(p.value.norm() < 1e-8);
}

TEST_CASE("1:(-1) lower edge of the image is H = -1/4") {
  const auto s = make_system("res:1:-1");
  const ScanResult r = critical_scan(*s, {-1, 1, -1, -0.1}, {});
  CHECK(r.points.size() > 10);
  for (const auto& p : r.points) CHECK(p.value.y() == doctest::Approx(-0.25).epsilon(1e-9));
}

TEST_CASE("pendulum poles are critical values") {
  const auto s = make_system("qsp");
  const ScanResult r = critical_scan(*s, {-1.5, 1.5, -2, 1}, {});
  CHECK(has_value(r, {0, -0.5}, 1e-8));  // V(1)
  CHECK(has_value(r, {0, -1.5}, 1e-8));  // V(-1)
  for (const auto& p : r.points) CHECK(s->constraint_residual(p.witness) < 1e-9);
}

TEST_CASE("pendulum island for b = -1, c = 1/2") {
  // Oracle: relative equilibria z = x3 in (1/4, 1) solve
  // J^2 = -V'(z) (1 - z^2)^2 / z with H = J^2 / (2 (1 - z^2)) + V(z).
  const auto s = make_system("qsp");
  ScanOptions o;
  o.grid = 12;
  const ScanResult r = critical_scan(*s, {-1.5, 1.5, -2, 1}, o);
  int upper = 0;
  for (const auto& p : r.points) {
    const double z = p.witness(2);
    if (z <= 0.25 || z >= 1 - 1e-9) continue;
    const double j2 = (2 * z - 0.5) * (1 - z * z) * (1 - z * z) / z;
    CHECK(p.value.x() * p.value.x() == doctest::Approx(j2).epsilon(1e-8));
    CHECK(p.value.y() == doctest::Approx(j2 / (2 * (1 - z * z)) - z * z + 0.5 * z).epsilon(1e-8));
    ++upper;
  }
  CHECK(upper > 20);
  CHECK(has_value(r, {0, 0.0625}, 1e-3));
}

TEST_CASE("spheres: images of the four fixed points") {
  const auto s = make_system("s2xs2");
  const ScanResult r = critical_scan(*s, {-3.5, 3.5, -2, 2}, {});
  for (double j : {-3.0, -1.0, 1.0, 3.0}) CHECK(has_value(r, {j, 0}, ScanOptions{}.dedupe_radius));
}

TEST_CASE("threads do not change the result") {
  const auto s = make_system("res:1:-2");
  ScanOptions one, many;
  many.threads = 3;
  const ScanResult a = critical_scan(*s, {-1, 1, -0.5, 1}, one);
  const ScanResult b = critical_scan(*s, {-1, 1, -0.5, 1}, many);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].value == b.points[i].value);
}

TEST_CASE("bad grid") { CHECK_THROWS_AS(critical_scan(*make_system("res:1:-2"), {}, ScanOptions{1}), InvalidInput); }

}
