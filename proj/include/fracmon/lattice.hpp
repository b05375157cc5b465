#ifndef FRACMON_LATTICE_HPP
#define FRACMON_LATTICE_HPP

#include <cstdint>
#include <span>

#include <Eigen/Core>
#include <Eigen/LU>

#include "fracmon/rational.hpp"

namespace fracmon {

/// Homology class a_coeff*a + b_coeff*b of a regular torus fiber, where b is
/// the class of a circle-action orbit.  Column vector (a_coeff, b_coeff).
using Cycle = Eigen::Matrix<std::int64_t, 2, 1>;

inline Cycle make_cycle(std::int64_t a_coeff, std::int64_t b_coeff) { return Cycle(a_coeff, b_coeff); }

/// Rational 2x2 matrix with determinant exactly one.  Monodromy matrices in
/// this library are always upper unipotent, rows (1, e) and (0, 1).
class MonodromyMatrixQ {
 public:
  MonodromyMatrixQ() : m_(RationalMatrix<2, 2>::Identity()) {}
  explicit MonodromyMatrixQ(const RationalMatrix<2, 2>& m);

  static MonodromyMatrixQ unipotent(const Rational& upper_right);

  const RationalMatrix<2, 2>& matrix() const noexcept { return m_; }
  const Rational& operator()(int r, int c) const { return m_(r, c); }
  Rational determinant() const { return m_.determinant(); }
  bool is_identity() const { return m_ == RationalMatrix<2, 2>::Identity(); }

  friend bool operator==(const MonodromyMatrixQ& a, const MonodromyMatrixQ& b) { return a.m_ == b.m_; }

 private:
  RationalMatrix<2, 2> m_;
};

/// Rank-2 sublattice of Z^2 kept in column Hermite normal form
///   [[h11, h12], [0, h22]],  h11, h22 > 0,  0 <= h12 < h11,
/// so two lattices are equal iff their bases are equal.
class Lattice2 {
 public:
  using Basis = Eigen::Matrix<std::int64_t, 2, 2>;

  /// Columns of `generators` span the lattice; throws InvalidInput if they
  /// are linearly dependent.
  explicit Lattice2(const Basis& generators);

  /// span{(n, 0), (0, 1)}.
  static Lattice2 transport_form(std::int64_t n);

  const Basis& basis() const noexcept { return h_; }
  Cycle column(int j) const { return h_.col(j); }
  std::int64_t index() const { return h_(0, 0) * h_(1, 1); }
  bool contains(const Cycle& c) const;

  friend bool operator==(const Lattice2& a, const Lattice2& b) { return a.h_ == b.h_; }

 private:
  Basis h_;
};

/// Least common multiple of exceptional-orbit orders (each >= 2); 1 for none.
std::int64_t lcm_orders(std::span<const std::int64_t> orders);

/// True iff c lies in span{(N,0),(0,1)}, i.e. N divides the a-coefficient.
bool in_transport_lattice(const Cycle& c, std::int64_t n);

/// Image of c = (a, b) under the map whose rows are the images of a and b,
/// i.e. M^T c.  Throws InvalidInput if the result is not integral;
/// callers should check in_transport_lattice first.
Cycle apply_matrix(const MonodromyMatrixQ& m, const Cycle& c);

}  // namespace fracmon

#endif  // FRACMON_LATTICE_HPP
