#ifndef FRACMON_SEIFERT_HPP
#define FRACMON_SEIFERT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracmon/lattice.hpp"
#include "fracmon/rational.hpp"

namespace fracmon {

/// Euler number and exceptional-orbit orders of a Seifert fibration over an
/// orientable base.  The pair is consistent iff N*e is an integer, N being
/// the lcm of the orders; inconsistent pairs are rejected on construction.
class SeifertData {
 public:
  SeifertData(Rational euler, std::vector<std::int64_t> orders, std::string label = {},
              std::optional<int> base_genus = std::nullopt, bool orientable_base = true);

  const Rational& euler() const noexcept { return euler_; }
  const std::vector<std::int64_t>& orders() const noexcept { return orders_; }
  const std::string& label() const noexcept { return label_; }
  const std::optional<int>& base_genus() const noexcept { return base_genus_; }

  /// lcm of the exceptional orders (1 for a free action).
  std::int64_t lcm() const noexcept { return n_; }

 private:
  Rational euler_;
  std::vector<std::int64_t> orders_;
  std::string label_;
  std::optional<int> base_genus_;
  std::int64_t n_ = 1;
};

/// span{(N,0),(0,1)}: the cycles that admit parallel transport.
Lattice2 transport_group(const SeifertData& s);

/// Parallel transport of c, or nullopt when N does not divide c's a-coefficient.
///   N a  ->  N a + k b,   b -> b,   k = N e.
std::optional<Cycle> transport(const SeifertData& s, const Cycle& c);

/// [[1, e], [0, 1]].  As a map on cycles it is only defined on transport_group(s).
MonodromyMatrixQ monodromy_matrix(const SeifertData& s);

/// k = N e.
std::int64_t euler_to_k(const SeifertData& s);
/// e = k / N.
Rational k_to_euler(std::int64_t k, const std::vector<std::int64_t>& orders);

/// Euler number N e of the principal circle bundle obtained as the Z_N quotient.
Rational quotient_euler(const SeifertData& s);

}  // namespace fracmon

#endif  // FRACMON_SEIFERT_HPP
