#include "fracmon/seifert.hpp"

#include <utility>

namespace fracmon {

SeifertData::SeifertData(Rational euler, std::vector<std::int64_t> orders, std::string label,
                         std::optional<int> base_genus, bool orientable_base)
    : euler_(euler), orders_(std::move(orders)), label_(std::move(label)), base_genus_(base_genus) {
  if (!orientable_base) {
    throw InvalidInput("Seifert fibrations over non-orientable bases have no unique parallel transport");
  }
  if (base_genus_ && *base_genus_ < 0) throw InvalidInput("base genus must be non-negative");
  n_ = lcm_orders(orders_);
  if (!(Rational(n_) * euler_).is_integer()) {
    throw InvalidInput("inconsistent Seifert data: N*e = " + (Rational(n_) * euler_).str() +
                       " is not an integer (e = " + euler_.str() + ", N = " + std::to_string(n_) + ")");
  }
}

Lattice2 transport_group(const SeifertData& s) { return Lattice2::transport_form(s.lcm()); }

std::optional<Cycle> transport(const SeifertData& s, const Cycle& c) {
  if (!in_transport_lattice(c, s.lcm())) return std::nullopt;
  const Rational shift = Rational(c(0)) * s.euler();
  // Integral because N | a and N e is an integer.
  std::int64_t b;
  if (__builtin_add_overflow(c(1), shift.to_int(), &b)) throw OverflowError("transported cycle overflows");
  return make_cycle(c(0), b);
}

MonodromyMatrixQ monodromy_matrix(const SeifertData& s) { return MonodromyMatrixQ::unipotent(s.euler()); }

std::int64_t euler_to_k(const SeifertData& s) { return (Rational(s.lcm()) * s.euler()).to_int(); }

Rational k_to_euler(std::int64_t k, const std::vector<std::int64_t>& orders) {
  return Rational(k) / Rational(lcm_orders(orders));
}

Rational quotient_euler(const SeifertData& s) { return Rational(s.lcm()) * s.euler(); }

}  // namespace fracmon
