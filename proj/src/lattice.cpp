#include "fracmon/lattice.hpp"

#include <numeric>
#include <string>

namespace fracmon {

MonodromyMatrixQ::MonodromyMatrixQ(const RationalMatrix<2, 2>& m) : m_(m) {
  if (m_.determinant() != Rational(1)) {
    throw InvalidInput("monodromy matrix must have determinant 1, got " + m_.determinant().str());
  }
}

MonodromyMatrixQ MonodromyMatrixQ::unipotent(const Rational& upper_right) {
  RationalMatrix<2, 2> m;
  m << Rational(1), upper_right, Rational(0), Rational(1);
  return MonodromyMatrixQ(m);
}

namespace {

// Extended Euclid: returns g = gcd(a, b) >= 0 with a*x + b*y = g.
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

Lattice2::Lattice2(const Basis& g) {
  const __int128 det = static_cast<__int128>(g(0, 0)) * g(1, 1) - static_cast<__int128>(g(0, 1)) * g(1, 0);
  if (det == 0) throw InvalidInput("lattice generators are linearly dependent");

  // Column operations clear the lower-left entry: the bottom row (c, d)
  // becomes (0, gcd(c, d)).
  const std::int64_t c = g(1, 0), d = g(1, 1);
  Basis h;
  if (c == 0) {
    h = g;
  } else {
    std::int64_t x = 0, y = 0;
    const std::int64_t gg = ext_gcd(c, d, x, y);
    Eigen::Matrix<std::int64_t, 2, 2> u;
    // [x, -d/gg; y, c/gg] is unimodular and maps (c, d) to (gg, 0).
    u << x, -d / gg, y, c / gg;
    const Basis t = g * u;
    h.col(0) = t.col(1);
    h.col(1) = t.col(0);
  }
  if (h(0, 0) < 0) h.col(0) = -h.col(0);
  if (h(1, 1) < 0) h.col(1) = -h.col(1);
  const std::int64_t q = (h(0, 1) - floor_mod(h(0, 1), h(0, 0))) / h(0, 0);
  h.col(1) -= q * h.col(0);
  h_ = h;
}

Lattice2 Lattice2::transport_form(std::int64_t n) {
  if (n < 1) throw InvalidInput("transport lattice index must be >= 1");
  Basis b;
  b << n, 0, 0, 1;
  return Lattice2(b);
}

bool Lattice2::contains(const Cycle& c) const {
  // Upper-triangular solve in integers.
  if (c(1) % h_(1, 1) != 0) return false;
  const std::int64_t beta = c(1) / h_(1, 1);
  return (c(0) - beta * h_(0, 1)) % h_(0, 0) == 0;
}

std::int64_t lcm_orders(std::span<const std::int64_t> orders) {
  std::int64_t acc = 1;
  for (std::int64_t n : orders) {
    if (n < 2) throw InvalidInput("exceptional orbit order must be >= 2, got " + std::to_string(n));
    const std::int64_t g = std::gcd(acc, n);
    if (__builtin_mul_overflow(acc / g, n, &acc)) throw OverflowError("lcm of orders overflows");
  }
  return acc;
}

bool in_transport_lattice(const Cycle& c, std::int64_t n) {
  if (n < 1) throw InvalidInput("transport index N must be >= 1");
  return c(0) % n == 0;
}

Cycle apply_matrix(const MonodromyMatrixQ& m, const Cycle& c) {
  const RationalMatrix<2, 1> v(Rational(c(0)), Rational(c(1)));
  const RationalMatrix<2, 1> r = m.matrix().transpose() * v;
  if (!r(0).is_integer() || !r(1).is_integer()) {
    throw InvalidInput("cycle (" + std::to_string(c(0)) + "," + std::to_string(c(1)) +
                       ") is not in the domain of the monodromy matrix");
  }
  return make_cycle(r(0).to_int(), r(1).to_int());
}

}  // namespace fracmon
