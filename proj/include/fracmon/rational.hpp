#ifndef FRACMON_RATIONAL_HPP
#define FRACMON_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "fracmon/error.hpp"

namespace fracmon {

/// Exact reduced fraction num/den with den >= 1.
///
/// Storage is a signed 128-bit integer; every operation checks for overflow
/// and throws OverflowError instead of wrapping.  Zero is always 0/1.
class Rational {
 public:
  using Int = __int128;

  constexpr Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(Int num, Int den);

  /// Parses "p", "p/q" or "-p/q" (whitespace not allowed).
  static Rational parse(std::string_view text);

  Int num() const noexcept { return num_; }
  Int den() const noexcept { return den_; }

  bool is_integer() const noexcept { return den_ == 1; }
  /// Integer value; throws InvalidInput if the fraction is not integral and
  /// OverflowError if it does not fit into 64 bits.
  std::int64_t to_int() const;
  double to_double() const noexcept;

  /// "p/q", or "p" when q == 1.
  std::string str() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  Int num_ = 0;
  Int den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational abs(const Rational& r);

namespace detail {
Rational::Int checked_add(Rational::Int a, Rational::Int b);
Rational::Int checked_mul(Rational::Int a, Rational::Int b);
Rational::Int gcd(Rational::Int a, Rational::Int b);
std::string int128_str(Rational::Int v);
}  // namespace detail

}  // namespace fracmon

namespace Eigen {

template <>
struct NumTraits<fracmon::Rational> : GenericNumTraits<fracmon::Rational> {
  using Real = fracmon::Rational;
  using NonInteger = fracmon::Rational;
  using Literal = fracmon::Rational;
  using Nested = fracmon::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 8,
    MulCost = 8
  };
  static inline Real epsilon() { return fracmon::Rational(0); }
  static inline Real dummy_precision() { return fracmon::Rational(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace fracmon {

template <int Rows, int Cols>
using RationalMatrix = Eigen::Matrix<Rational, Rows, Cols>;

}  // namespace fracmon

#endif  // FRACMON_RATIONAL_HPP
