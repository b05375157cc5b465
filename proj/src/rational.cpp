#include "fracmon/rational.hpp"

#include <algorithm>
#include <ostream>

namespace fracmon {

namespace detail {

Rational::Int checked_add(Rational::Int a, Rational::Int b) {
  Rational::Int r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("rational addition overflow");
  return r;
}

Rational::Int checked_mul(Rational::Int a, Rational::Int b) {
  Rational::Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("rational multiplication overflow");
  return r;
}

Rational::Int gcd(Rational::Int a, Rational::Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Rational::Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::string int128_str(Rational::Int v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  // Work on the negative side so INT128_MIN has a representation.
  std::string out;
  while (v != 0) {
    int digit = static_cast<int>(v % 10);
    if (digit < 0) digit = -digit;
    out.push_back(static_cast<char>('0' + digit));
    v /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace detail

namespace {

constexpr Rational::Int kInt128Min = static_cast<Rational::Int>(
    static_cast<unsigned __int128>(1) << 127);

Rational::Int negate(Rational::Int v) {
  if (v == kInt128Min) throw OverflowError("rational negation overflow");
  return -v;
}

Rational::Int parse_int(std::string_view s) {
  if (s.empty()) throw InvalidInput("empty integer in rational literal");
  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw InvalidInput("malformed rational literal");
  Rational::Int v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') {
      throw InvalidInput("malformed rational literal: '" + std::string(s) + "'");
    }
    v = detail::checked_add(detail::checked_mul(v, 10), s[i] - '0');
  }
  return neg ? -v : v;
}

}  // namespace

Rational::Rational(Int num, Int den) {
  if (den == 0) throw InvalidInput("rational with zero denominator");
  if (den < 0) {
    num = negate(num);
    den = negate(den);
  }
  const Int g = detail::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text), 1);
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::int64_t Rational::to_int() const {
  if (den_ != 1) throw InvalidInput("rational " + str() + " is not an integer");
  if (num_ > INT64_MAX || num_ < INT64_MIN) throw OverflowError("integer does not fit 64 bits");
  return static_cast<std::int64_t>(num_);
}

double Rational::to_double() const noexcept {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return detail::int128_str(num_);
  return detail::int128_str(num_) + "/" + detail::int128_str(den_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = negate(num_);
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  // a/b + c/d with g = gcd(b, d) keeps intermediates small.
  const Int g = detail::gcd(den_, o.den_);
  const Int lhs = detail::checked_mul(num_, o.den_ / g);
  const Int rhs = detail::checked_mul(o.num_, den_ / g);
  *this = Rational(detail::checked_add(lhs, rhs), detail::checked_mul(den_ / g, o.den_));
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  const Int g1 = detail::gcd(num_, o.den_);
  const Int g2 = detail::gcd(o.num_, den_);
  const Int n = detail::checked_mul(num_ / (g1 == 0 ? 1 : g1), o.num_ / (g2 == 0 ? 1 : g2));
  const Int d = detail::checked_mul(den_ / (g2 == 0 ? 1 : g2), o.den_ / (g1 == 0 ? 1 : g1));
  *this = Rational(n, d);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw InvalidInput("rational division by zero");
  Rational inv;
  inv.num_ = o.num_ < 0 ? negate(o.den_) : o.den_;
  inv.den_ = o.num_ < 0 ? negate(o.num_) : o.num_;
  return *this *= inv;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const Rational::Int lhs = detail::checked_mul(a.num_, b.den_);
  const Rational::Int rhs = detail::checked_mul(b.num_, a.den_);
  return lhs <=> rhs;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }

}  // namespace fracmon
