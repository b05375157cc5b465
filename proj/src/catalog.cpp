#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "autodiff_system.hpp"
#include "fracmon/error.hpp"
#include "fracmon/systems.hpp"

namespace fracmon {

namespace {

using std::numbers::pi;

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1);
  return v;
}

// Cell midpoints of [lo, hi] split into n cells; never hits the endpoints.
std::vector<double> midpoints(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * (i + 0.5) / n;
  return v;
}

template <class S>
void complex_mul(S& re, S& im, const S& b_re, const S& b_im) {
  const S r = re * b_re - im * b_im;
  const S i = re * b_im + im * b_re;
  re = r;
  im = i;
}

template <class S>
S ipow(const S& base, int p) {
  S r = base;
  for (int i = 1; i < p; ++i) r = r * base;
  return r;
}

WeightedFixedPoint fixed_point_from_linearization(const SystemModel& s, const PhasePoint& x) {
  const auto lin = linearize_action(s, x);
  const IsotropyWeights w = weights_from_linearization(lin.matrix, lin.orientation_sign);
  return WeightedFixedPoint(x, w, eval_F(s, x));
}

// ---------------------------------------------------------------------------
// m:(-n) resonant systems on R^4, coordinates (q1, p1, q2, p2),
// z = p1 + i q1, w = p2 + i q2.

class ResonantSystem final : public detail::AutodiffSystem<ResonantSystem, 4, 0> {
 public:
  ResonantSystem(int m, int n, double eps, ResonantHamiltonian kind)
      : m_(m), n_(n), eps_(eps), kind_(kind), power_(std::max(2, (m + n + 2) / 2)) {}

  std::string id() const override { return "res:" + std::to_string(m_) + ":-" + std::to_string(n_); }

  std::map<std::string, double> parameters() const override {
    return {{"m", m_}, {"n", n_}, {"eps", eps_}, {"R_power", kind_ == ResonantHamiltonian::Generic ? power_ : 2}};
  }

  template <class S>
  S j_value(const Vec<S>& x) const {
    return 0.5 * m_ * (x(0) * x(0) + x(1) * x(1)) - 0.5 * n_ * (x(2) * x(2) + x(3) * x(3));
  }

  template <class S>
  S h_value(const Vec<S>& x) const {
    const S& q1 = x(0);
    const S& p1 = x(1);
    const S& q2 = x(2);
    const S& p2 = x(3);
    const S zz = q1 * q1 + p1 * p1;
    const S ww = q2 * q2 + p2 * p2;
    if (kind_ == ResonantHamiltonian::OneToMinusOne) return p1 * q2 + p2 * q1 + eps_ * zz * ww;
    // -Re(z^n w^m)
    S re = p1, im = q1;
    for (int i = 1; i < n_; ++i) complex_mul(re, im, p1, q1);
    for (int i = 0; i < m_; ++i) complex_mul(re, im, p2, q2);
    const S r = 0.5 * m_ * zz + 0.5 * n_ * ww;
    return -re + eps_ * ipow(r, power_);
  }

  Eigen::MatrixXd poisson_tensor(const PhasePoint&) const override {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(4, 4);
    p(0, 1) = 1;
    p(1, 0) = -1;
    p(2, 3) = 1;
    p(3, 2) = -1;
    return p;
  }

  std::vector<WeightedFixedPoint> fixed_points() const override {
    return {WeightedFixedPoint(Eigen::VectorXd::Zero(4), {m_, n_}, Eigen::Vector2d::Zero())};
  }

  std::vector<StratumSpec> strata() const override {
    std::vector<StratumSpec> out;
    // Parameter 0 is |J| along the stratum, parameter 1 the orbit angle.
    constexpr double kJMax = 25.0;
    if (n_ >= 2) {
      const int n = n_;
      StratumSpec st;
      st.order = n_;
      st.dimension = 2;
      st.param_lo = Eigen::Vector2d(1e-6, 0.0);
      st.param_hi = Eigen::Vector2d(kJMax, 2 * pi);
      st.parameterization = [n](const Eigen::VectorXd& t) {
        const double r = std::sqrt(2.0 * t(0) / n);
        PhasePoint x = PhasePoint::Zero(4);
        x(2) = r * std::sin(t(1));
        x(3) = r * std::cos(t(1));
        return x;
      };
      st.description = "z = 0, w != 0 (isotropy Z_" + std::to_string(n_) + ")";
      out.push_back(st);
    }
    if (m_ >= 2) {
      const int m = m_;
      StratumSpec st;
      st.order = m_;
      st.dimension = 2;
      st.param_lo = Eigen::Vector2d(1e-6, 0.0);
      st.param_hi = Eigen::Vector2d(kJMax, 2 * pi);
      st.parameterization = [m](const Eigen::VectorXd& t) {
        const double r = std::sqrt(2.0 * t(0) / m);
        PhasePoint x = PhasePoint::Zero(4);
        x(0) = r * std::sin(t(1));
        x(1) = r * std::cos(t(1));
        return x;
      };
      st.description = "w = 0, z != 0 (isotropy Z_" + std::to_string(m_) + ")";
      out.push_back(st);
    }
    return out;
  }

  std::optional<std::pair<int, int>> resonance() const override { return std::make_pair(m_, n_); }

  PhasePoint random_point(std::mt19937_64& rng) const override {
    const double r = std::min(1.5, std::sqrt(3.0 / (m_ + n_)));
    std::uniform_real_distribution<double> u(-r, r);
    PhasePoint x(4);
    for (int i = 0; i < 4; ++i) x(i) = u(rng);
    return x;
  }

  std::vector<PhasePoint> seed_points(const Window& w, int grid) const override {
    const double a = std::max({std::abs(w.j_min), std::abs(w.j_max), std::sqrt(std::abs(w.h_min)),
                               std::sqrt(std::abs(w.h_max)), 0.1});
    const double l = 1.1 * std::sqrt(2.0 * a);
    const auto g = linspace(-l, l, grid);
    std::vector<PhasePoint> seeds;
    seeds.reserve(static_cast<std::size_t>(std::pow(grid, 4)));
    for (double a0 : g)
      for (double a1 : g)
        for (double a2 : g)
          for (double a3 : g) seeds.push_back(Eigen::Vector4d(a0, a1, a2, a3));
    return seeds;
  }

 private:
  int m_, n_;
  double eps_;
  ResonantHamiltonian kind_;
  int power_;
};

// ---------------------------------------------------------------------------
// S^2 x S^2 with the Lie-Poisson structure on R^3 x R^3, coordinates
// (x1, x2, x3, y1, y2, y3); J = x1 + 2 y1, H = Re{(x2 + i x3)^2 (y2 - i y3)}.

class SphereProductSystem final : public detail::AutodiffSystem<SphereProductSystem, 6, 2> {
 public:
  std::string id() const override { return "s2xs2"; }

  template <class S>
  S j_value(const Vec<S>& x) const {
    return x(0) + 2.0 * x(3);
  }

  template <class S>
  S h_value(const Vec<S>& x) const {
    return (x(1) * x(1) - x(2) * x(2)) * x(4) + 2.0 * x(1) * x(2) * x(5);
  }

  template <class S>
  Eigen::Matrix<S, 2, 1> constraint_values(const Vec<S>& x) const {
    return {x.template head<3>().squaredNorm() - 1.0, x.template tail<3>().squaredNorm() - 1.0};
  }

  Eigen::MatrixXd poisson_tensor(const PhasePoint& x) const override {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(6, 6);
    for (int off : {0, 3}) {
      const double a = x(off), b = x(off + 1), c = x(off + 2);
      p(off + 0, off + 1) = c;
      p(off + 1, off + 0) = -c;
      p(off + 0, off + 2) = -b;
      p(off + 2, off + 0) = b;
      p(off + 1, off + 2) = a;
      p(off + 2, off + 1) = -a;
    }
    return p;
  }

  PhasePoint project(const PhasePoint& x) const override {
    PhasePoint y = x;
    y.head<3>().normalize();
    y.tail<3>().normalize();
    return y;
  }

  std::vector<WeightedFixedPoint> fixed_points() const override {
    std::vector<WeightedFixedPoint> out;
    for (double sx : {1.0, -1.0}) {
      for (double sy : {1.0, -1.0}) {
        PhasePoint p = PhasePoint::Zero(6);
        p(0) = sx;
        p(3) = sy;
        out.push_back(fixed_point_from_linearization(*this, p));
      }
    }
    return out;
  }

  std::vector<StratumSpec> strata() const override {
    // x at a pole, y free: only the weight-2 factor moves, isotropy Z_2.
    std::vector<StratumSpec> out;
    for (double sx : {1.0, -1.0}) {
      StratumSpec st;
      st.order = 2;
      st.dimension = 2;
      st.param_lo = Eigen::Vector2d(1e-4, 0.0);
      st.param_hi = Eigen::Vector2d(pi - 1e-4, 2 * pi);
      st.parameterization = [sx](const Eigen::VectorXd& t) {
        PhasePoint p = PhasePoint::Zero(6);
        p(0) = sx;
        p(3) = std::cos(t(0));
        p(4) = std::sin(t(0)) * std::cos(t(1));
        p(5) = std::sin(t(0)) * std::sin(t(1));
        return p;
      };
      st.description = std::string("x = ") + (sx > 0 ? "+" : "-") + "e1, y off the poles (isotropy Z_2)";
      out.push_back(st);
    }
    return out;
  }

  PhasePoint random_point(std::mt19937_64& rng) const override {
    std::normal_distribution<double> g;
    PhasePoint x(6);
    for (int i = 0; i < 6; ++i) x(i) = g(rng);
    return project(x);
  }

  std::vector<PhasePoint> seed_points(const Window&, int grid) const override {
    const auto th = midpoints(0, pi, grid);
    const auto ph = midpoints(0, 2 * pi, grid);
    std::vector<PhasePoint> seeds;
    for (double t1 : th)
      for (double f1 : ph)
        for (double t2 : th)
          for (double f2 : ph) {
            PhasePoint p(6);
            p << std::cos(t1), std::sin(t1) * std::cos(f1), std::sin(t1) * std::sin(f1), std::cos(t2),
                std::sin(t2) * std::cos(f2), std::sin(t2) * std::sin(f2);
            seeds.push_back(p);
          }
    return seeds;
  }
};

// ---------------------------------------------------------------------------
// Quadratic spherical pendulum on TS^2 in R^6, coordinates (x, v); the
// Poisson tensor is the Dirac bracket of the canonical one on T R^3 with
// respect to |x|^2 = 1 and <x, v> = 0.

class QuadraticPendulum final : public detail::AutodiffSystem<QuadraticPendulum, 6, 2> {
 public:
  QuadraticPendulum(double b, double c) : b_(b), c_(c) {}

  std::string id() const override { return "qsp"; }
  std::map<std::string, double> parameters() const override { return {{"b", b_}, {"c", c_}}; }

  template <class S>
  S j_value(const Vec<S>& x) const {
    return x(0) * x(4) - x(1) * x(3);
  }

  template <class S>
  S h_value(const Vec<S>& x) const {
    return 0.5 * x.template tail<3>().squaredNorm() + b_ * x(2) * x(2) + c_ * x(2);
  }

  template <class S>
  Eigen::Matrix<S, 2, 1> constraint_values(const Vec<S>& x) const {
    return {x.template head<3>().squaredNorm() - 1.0, x.template head<3>().dot(x.template tail<3>())};
  }

  Eigen::MatrixXd poisson_tensor(const PhasePoint& x) const override {
    Eigen::MatrixXd p0 = Eigen::MatrixXd::Zero(6, 6);
    p0.topRightCorner<3, 3>().setIdentity();
    p0.bottomLeftCorner<3, 3>() = -Eigen::Matrix3d::Identity();
    const Eigen::MatrixXd g = constraint_jacobian(x);
    const Eigen::Matrix2d c = g * p0 * g.transpose();
    return p0 - p0 * g.transpose() * c.inverse() * g * p0;
  }

  PhasePoint project(const PhasePoint& x) const override {
    PhasePoint y = x;
    y.head<3>().normalize();
    const Eigen::Vector3d q = y.head<3>();
    y.tail<3>() -= q.dot(y.tail<3>()) * q;
    return y;
  }

  std::vector<WeightedFixedPoint> fixed_points() const override {
    std::vector<WeightedFixedPoint> out;
    for (double s : {1.0, -1.0}) {
      PhasePoint p = PhasePoint::Zero(6);
      p(2) = s;
      out.push_back(fixed_point_from_linearization(*this, p));
    }
    return out;
  }

  PhasePoint random_point(std::mt19937_64& rng) const override {
    std::normal_distribution<double> g;
    PhasePoint x(6);
    for (int i = 0; i < 6; ++i) x(i) = g(rng);
    return project(x);
  }

  std::vector<PhasePoint> seed_points(const Window& w, int grid) const override {
    const double v_min = potential_min();
    const double vmax = std::sqrt(2.0 * std::max(0.1, w.h_max - v_min));
    const auto th = midpoints(0, pi, grid);
    const auto ph = midpoints(0, 2 * pi, grid);
    const auto vs = linspace(-vmax, vmax, grid);
    std::vector<PhasePoint> seeds;
    for (double t : th)
      for (double f : ph) {
        const Eigen::Vector3d x(std::sin(t) * std::cos(f), std::sin(t) * std::sin(f), std::cos(t));
        const Eigen::Vector3d et(std::cos(t) * std::cos(f), std::cos(t) * std::sin(f), -std::sin(t));
        const Eigen::Vector3d ef(-std::sin(f), std::cos(f), 0.0);
        for (double a : vs)
          for (double b : vs) {
            PhasePoint p(6);
            p << x, a * et + b * ef;
            seeds.push_back(p);
          }
      }
    // Poles are outside the angular grid but host the fixed points.
    for (double s : {1.0, -1.0}) {
      PhasePoint p = PhasePoint::Zero(6);
      p(2) = s;
      seeds.push_back(p);
    }
    return seeds;
  }

 private:
  double potential_min() const {
    double v = std::min(b_ + c_, b_ - c_);
    if (b_ > 0) {
      const double z = -c_ / (2 * b_);
      if (std::abs(z) <= 1) v = std::min(v, b_ * z * z + c_ * z);
    }
    return v;
  }

  double b_, c_;
};

}  // namespace

SystemPtr make_resonant(int m, int n, double eps, std::optional<ResonantHamiltonian> kind) {
  if (m <= 0) throw InvalidInput("resonant system needs m > 0");
  if (n <= 0) throw InvalidInput("resonant system needs n > 0 (the oscillator is m:(-n))");
  if (std::gcd(m, n) != 1) throw InvalidInput("resonance orders m, n must be coprime");
  if (!(eps > 0)) throw InvalidInput("eps must be positive");
  const auto k = kind.value_or(m == 1 && n == 1 ? ResonantHamiltonian::OneToMinusOne : ResonantHamiltonian::Generic);
  if (k == ResonantHamiltonian::OneToMinusOne && (m != 1 || n != 1)) {
    throw InvalidInput("the 1:(-1) Hamiltonian needs m = n = 1");
  }
  return std::make_shared<ResonantSystem>(m, n, eps, k);
}

SystemPtr make_s2xs2() { return std::make_shared<SphereProductSystem>(); }

SystemPtr make_qsp(double b, double c) { return std::make_shared<QuadraticPendulum>(b, c); }

SystemPtr make_system(const std::string& id, const std::map<std::string, double>& overrides) {
  auto param = [&](const char* key, double fallback) {
    const auto it = overrides.find(key);
    return it == overrides.end() ? fallback : it->second;
  };
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : overrides) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
        throw InvalidInput("system '" + id + "' has no parameter '" + k + "'");
      }
    }
  };
  if (id == "s2xs2") {
    allow({});
    return make_s2xs2();
  }
  if (id == "qsp") {
    allow({"b", "c"});
    return make_qsp(param("b", -1.0), param("c", 0.5));
  }
  if (id.rfind("res:", 0) == 0) {
    int m = 0, n = 0;
    char colon = 0, minus = 0;
    std::istringstream is(id.substr(4));
    if (!(is >> m >> colon >> minus >> n) || colon != ':' || minus != '-' || is.peek() != EOF) {
      throw InvalidInput("malformed resonant system id '" + id + "', expected res:M:-N");
    }
    allow({"eps"});
    return make_resonant(m, n, param("eps", 1.0));
  }
  throw InvalidInput("unknown system '" + id + "'");
}

std::vector<std::pair<std::string, std::string>> catalog_entries() {
  return {
      {"res:1:-2", "1:(-2) resonance on R^4, H = 2 q1 p1 q2 + (q1^2 - p1^2) p2 + eps R^2"},
      {"res:m:-n", "m:(-n) resonance on R^4, J = m/2 |z|^2 - n/2 |w|^2, H = -Re(z^n w^m) + eps R^p "
                   "(res:1:-1 uses H = p1 q2 + p2 q1 + eps |z|^2 |w|^2)"},
      {"s2xs2", "S^2 x S^2, J = x1 + 2 y1, H = Re{(x2 + i x3)^2 (y2 - i y3)}"},
      {"qsp", "quadratic spherical pendulum on TS^2, H = |v|^2/2 + b x3^2 + c x3, J = x1 v2 - x2 v1"},
  };
}

}  // namespace fracmon
