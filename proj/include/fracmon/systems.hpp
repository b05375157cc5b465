#ifndef FRACMON_SYSTEMS_HPP
#define FRACMON_SYSTEMS_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fracmon/circle_action.hpp"

namespace fracmon {

using PhasePoint = Eigen::VectorXd;

/// Which of the two integrals a vector field or flow refers to.
enum class Integral { J, H };

/// Axis-aligned rectangle in the (J, H) plane.
struct Window {
  double j_min = -1, j_max = 1, h_min = -1, h_max = 1;
  bool contains(const Eigen::Vector2d& f) const {
    return f.x() >= j_min && f.x() <= j_max && f.y() >= h_min && f.y() <= h_max;
  }
};

/// Set of points with isotropy Z_order, given by a parameterization of a box.
/// Parameter 0 is transverse to the circle orbits; the remaining parameters
/// move along orbits, so F depends on parameter 0 only.
struct StratumSpec {
  int order = 2;
  int dimension = 2;
  Eigen::VectorXd param_lo;
  Eigen::VectorXd param_hi;
  std::function<PhasePoint(const Eigen::VectorXd&)> parameterization;
  std::string description;
};

/// Integrable two-degree-of-freedom system F = (J, H) where J generates a
/// 2 pi periodic circle action.  Phase space is R^d, or a submanifold of it
/// cut out by `constraints`, with Poisson tensor P(x); X_f = P grad f.
class SystemModel {
 public:
  virtual ~SystemModel() = default;

  virtual std::string id() const = 0;
  virtual int ambient_dim() const = 0;
  virtual std::map<std::string, double> parameters() const { return {}; }

  virtual double J(const PhasePoint& x) const = 0;
  virtual double H(const PhasePoint& x) const = 0;
  virtual Eigen::VectorXd grad_J(const PhasePoint& x) const = 0;
  virtual Eigen::VectorXd grad_H(const PhasePoint& x) const = 0;

  /// P_ij = {x_i, x_j}.
  virtual Eigen::MatrixXd poisson_tensor(const PhasePoint& x) const = 0;

  virtual int constraint_count() const { return 0; }
  virtual Eigen::VectorXd constraints(const PhasePoint&) const { return Eigen::VectorXd(0); }
  /// Rows are gradients of the constraint functions.
  virtual Eigen::MatrixXd constraint_jacobian(const PhasePoint&) const {
    return Eigen::MatrixXd(0, ambient_dim());
  }
  /// Nearest-point retraction onto the constraint set (identity when unconstrained).
  virtual PhasePoint project(const PhasePoint& x) const { return x; }

  /// Closed-form fixed points of the circle action with weights.
  virtual std::vector<WeightedFixedPoint> fixed_points() const = 0;
  virtual std::vector<StratumSpec> strata() const { return {}; }
  /// (m, n) for m:(-n) resonant systems, whose origin is the only fixed point.
  virtual std::optional<std::pair<int, int>> resonance() const { return std::nullopt; }

  /// Uniform-ish sample of valid phase points, used by the hygiene checks.
  virtual PhasePoint random_point(std::mt19937_64& rng) const = 0;
  /// Grid of phase-space seeds covering the preimage of a (J, H) window.
  virtual std::vector<PhasePoint> seed_points(const Window& w, int grid) const = 0;

  double constraint_residual(const PhasePoint& x) const;
  /// Orthonormal basis (columns) of the tangent space of the constraint set at x.
  Eigen::MatrixXd tangent_basis(const PhasePoint& x) const;
  /// Orthogonal projector onto the tangent space at x.
  Eigen::MatrixXd tangent_projector(const PhasePoint& x) const;
};

using SystemPtr = std::shared_ptr<const SystemModel>;

// --- evaluators --------------------------------------------------------------

/// Constraint-violation tolerance for valid phase points.
inline constexpr double kConstraintTol = 1e-10;

/// (J, H) at x.  Throws InvalidInput if x is off the constraint set.
Eigen::Vector2d eval_F(const SystemModel& s, const PhasePoint& x, double tol = 1e-8);

Eigen::VectorXd hamiltonian_vector_field(const SystemModel& s, Integral which, const PhasePoint& x);

/// {J, H}(x) = grad J . P grad H.
double poisson_bracket_JH(const SystemModel& s, const PhasePoint& x);

/// det of the Gram matrix of the tangential parts of grad J, grad H;
/// zero exactly where rank dF < 2.
double gram_determinant(const SystemModel& s, const PhasePoint& x);

/// Linearization of X_J at x written in the orthonormal tangent chart,
/// together with the orientation sign of that chart.
struct ChartLinearization {
  Eigen::MatrixXd matrix;
  int orientation_sign = 1;
};
ChartLinearization linearize_action(const SystemModel& s, const PhasePoint& x, double h = 1e-5);

/// Sign of the symplectic volume on the tangent chart at x.
int chart_orientation(const SystemModel& s, const PhasePoint& x);

// --- strata ------------------------------------------------------------------

using Polyline = std::vector<Eigen::Vector2d>;

/// Image of a stratum under F as ordered polylines (split where the sample
/// spacing jumps).
std::vector<Polyline> stratum_image(const SystemModel& s, const StratumSpec& st, int samples);

// --- critical values ---------------------------------------------------------

struct CriticalPoint {
  Eigen::Vector2d value;  // (J, H)
  PhasePoint witness;
  double gram_det = 0;
};

struct ScanOptions {
  int grid = 8;
  double tol = 1e-10;          // Gram determinant acceptance
  double dedupe_radius = 1e-4;  // in the (J, H) plane
  int max_iterations = 60;
  int threads = 1;
};

struct ScanResult {
  std::vector<CriticalPoint> points;  // sorted by (J, H)
  int seeds = 0;
  int converged = 0;
  int dropped = 0;  // seeds that did not converge
};

/// Critical values of F inside `window`, found by Gauss-Newton refinement of
/// the Lagrange condition P_T(grad H - lambda grad J) = 0 from a grid of
/// seeds, deduplicated in the (J, H) plane.
ScanResult critical_scan(const SystemModel& s, const Window& window, const ScanOptions& opts = {});

/// Gauss-Newton projection of x onto the critical set; nullopt on failure.
std::optional<PhasePoint> refine_critical(const SystemModel& s, const PhasePoint& seed, int max_iterations = 60);

// --- flow --------------------------------------------------------------------

struct FlowOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
  double initial_step = 1e-3;
  double max_step = 0.1;
  double min_step = 1e-14;
  double constraint_tol = 1e-8;
};

struct FlowResult {
  PhasePoint x;
  double drift_J = 0;  // |J(end) - J(start)|
  double drift_H = 0;
  int steps = 0;
};

/// Integrates X_J or X_H for time t (negative allowed) with an adaptive
/// Dormand-Prince 5(4) scheme, retracting onto the constraint set after
/// every accepted step.  Throws NumericFailure on step underflow or
/// constraint drift.
FlowResult flow(const SystemModel& s, Integral which, const PhasePoint& x, double t, const FlowOptions& opts = {});

// --- catalog -----------------------------------------------------------------

/// Hamiltonians available for the m:(-n) family.
enum class ResonantHamiltonian {
  /// -Re(z^n w^m) + eps R^2 with R = m/2 |z|^2 + n/2 |w|^2.
  Generic,
  /// Im(z w) + eps |z|^2 |w|^2 (only for m = n = 1).
  OneToMinusOne,
};

SystemPtr make_resonant(int m, int n, double eps = 1.0,
                        std::optional<ResonantHamiltonian> kind = std::nullopt);
SystemPtr make_s2xs2();
/// Quadratic spherical pendulum with potential b x3^2 + c x3.
SystemPtr make_qsp(double b = -1.0, double c = 0.5);

/// Looks up "res:1:-2", "res:M:-N", "s2xs2", "qsp"; optional parameter
/// overrides ("eps", "b", "c").  Throws InvalidInput for unknown ids.
SystemPtr make_system(const std::string& id, const std::map<std::string, double>& overrides = {});

/// Ids and descriptions for listing.
std::vector<std::pair<std::string, std::string>> catalog_entries();

}  // namespace fracmon

#endif  // FRACMON_SYSTEMS_HPP
