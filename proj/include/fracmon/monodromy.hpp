#ifndef FRACMON_MONODROMY_HPP
#define FRACMON_MONODROMY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fracmon/circle_action.hpp"
#include "fracmon/lattice.hpp"
#include "fracmon/seifert.hpp"
#include "fracmon/systems.hpp"

namespace fracmon {

/// Simple closed curve in the (J, H) plane: a circle or a closed polygon.
class LoopSpec {
 public:
  enum class Kind { Circle, Polyline };

  /// Counter-clockwise circle unless `clockwise` is set.
  static LoopSpec circle(const Eigen::Vector2d& center, double radius, bool clockwise = false);
  /// Closed polygon through `vertices` (the closing edge is implicit).
  /// Throws InvalidInput for fewer than 3 vertices, zero length or
  /// self-intersections.
  static LoopSpec polyline(std::vector<Eigen::Vector2d> vertices);

  Kind kind() const noexcept { return kind_; }
  const Eigen::Vector2d& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  const std::vector<Eigen::Vector2d>& vertices() const noexcept { return vertices_; }

  /// gamma(t) for t in [0, 1]; gamma(0) = gamma(1).
  Eigen::Vector2d point(double t) const;
  /// Closed sample gamma(i/n), i = 0..n-1 (polygons keep their vertices).
  std::vector<Eigen::Vector2d> discretize(int n) const;
  double signed_area() const;
  bool counterclockwise() const { return signed_area() > 0; }
  LoopSpec reversed() const;
  /// Same curve, counter-clockwise.
  LoopSpec normalized() const { return counterclockwise() ? *this : reversed(); }
  double distance_to(const Eigen::Vector2d& p) const;

  /// "circle:cJ,cH,r" or "poly:J1,H1;J2,H2;..." (clockwise circles get a
  /// trailing ",cw").
  std::string str() const;
  static LoopSpec parse(const std::string& text);

 private:
  Kind kind_ = Kind::Circle;
  Eigen::Vector2d center_ = Eigen::Vector2d::Zero();
  double radius_ = 1.0;
  bool clockwise_ = false;
  std::vector<Eigen::Vector2d> vertices_;
};

/// Planar winding number of `loop` around p.  Throws RegularityViolation
/// when p lies within tol of the loop.
int winding_number(const LoopSpec& loop, const Eigen::Vector2d& p, double tol = 1e-9);

/// Catalog fixed points whose image is enclosed by the (normalized) loop.
std::vector<WeightedFixedPoint> enclosed_fixed_points(const SystemModel& s, const LoopSpec& loop, double tol = 1e-6);

/// One transversal intersection of the loop with a stratum image.
struct Crossing {
  int order = 2;
  std::size_t stratum = 0;
  Eigen::Vector2d point = Eigen::Vector2d::Zero();
  double loop_parameter = 0;  // t with gamma(t) = point
  double angle_deg = 90;      // between loop and stratum image, in [0, 90]
};

struct OrdersOnLoop {
  std::vector<std::int64_t> orders;  // sorted, unique
  std::vector<Crossing> crossings;   // sorted by loop parameter
  double min_endpoint_distance = 0;  // loop to stratum-image endpoints
};

struct LoopOptions {
  double point_tol = 1e-6;           // fixed-point image vs loop
  double min_crossing_angle_deg = 5;
  int stratum_samples = 4000;
  int loop_segments = 4096;
};

/// Orders of the exceptional orbits on F^-1(loop), detected as crossings of
/// the loop with stratum images.  Throws RegularityViolation for crossings
/// below the angle threshold.
OrdersOnLoop orders_on_loop(const SystemModel& s, const LoopSpec& loop, const LoopOptions& opts = {});

struct Regularity {
  bool simple = true;
  bool normalized_orientation = false;  // input loop was clockwise
  double min_fixed_point_distance = 0;
  double min_endpoint_distance = 0;
  std::vector<Crossing> crossings;
  std::vector<std::int64_t> detected_orders;
  std::vector<std::int64_t> forced_orders;
  bool detection_disagrees = false;
  std::vector<std::string> notes;
};

struct MonodromyCertificate {
  std::string system_id;
  LoopSpec loop;
  std::vector<WeightedFixedPoint> enclosed_fixed_points;
  Rational euler;
  std::vector<std::int64_t> orders_on_loop;
  std::int64_t n = 1;
  std::int64_t k = 0;
  Lattice2 transport_group = Lattice2::transport_form(1);
  MonodromyMatrixQ matrix;
  Regularity regularity;
  bool assumed_connected = true;
};

/// Fractional monodromy along `loop`: e from the enclosed fixed points, N
/// from the exceptional orders on the preimage, k = N e.  Clockwise loops
/// are normalized first.  Throws RegularityViolation when the loop breaks
/// the regularity conditions and NumericFailure when N e is not integral.
MonodromyCertificate analyze(const SystemModel& s, const LoopSpec& loop, const LoopOptions& opts = {});

struct ResonantCase {
  std::int64_t n = 1;
  MonodromyMatrixQ matrix;
};

/// Closed-form answer for m:(-n) resonant systems.  With the origin
/// enclosed N = mn and e = 1/(mn); otherwise N = lcm(crossed) and the
/// matrix is the identity.
ResonantCase resonant_case(int m, int n, bool encloses_origin, const std::vector<std::int64_t>& crossed_orders);

}  // namespace fracmon

#endif  // FRACMON_MONODROMY_HPP
