#include <chrono>
#include <complex>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "fracmon/error.hpp"
#include "fracmon/monodromy.hpp"
#include "fracmon/numverify.hpp"
#include "fracmon/seifert.hpp"

using namespace fracmon;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << what;
    ok = ok && cond;
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double time_limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit_s > 0) {
    std::ostringstream msg;
    msg << "runtime " << dt << " s exceeds " << time_limit_s << " s";
    o.require(dt < time_limit_s, msg.str());
  }
  std::printf("%s %d %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, name.c_str(), dt, o.ok ? "" : ": ",
              o.detail.str().c_str());
  std::fflush(stdout);
  if (!o.ok) ++failures;
}

bool exact_certificate(const MonodromyCertificate& c, const Rational& e, std::int64_t n) {
  return c.euler == e && c.n == n && c.k == (Rational(n) * e).to_int() &&
         c.matrix == MonodromyMatrixQ::unipotent(e) && c.transport_group == Lattice2::transport_form(n);
}

std::string describe(const MonodromyCertificate& c) {
  std::ostringstream os;
  os << c.system_id << " " << c.loop.str() << ": e=" << c.euler.str() << " N=" << c.n << " k=" << c.k;
  return os.str();
}

}  // namespace

int main() {
  criterion(1, "1:(-2) golden certificate", 5, [](Outcome& o) {
    const auto c = analyze(*make_system("res:1:-2"), LoopSpec::circle({0, 0.25}, 0.5));
    o.require(exact_certificate(c, Rational(1, 2), 2) && c.k == 1, describe(c));
    o.require(c.matrix(0, 1) == Rational(1, 2) && c.transport_group.basis()(0, 0) == 2, describe(c));
  });

  criterion(2, "resonant family sweep", 30, [](Outcome& o) {
    for (int m = 1; m <= 5; ++m) {
      for (int n = 1; n <= 5; ++n) {
        if (std::gcd(m, n) != 1) continue;
        const auto s = make_resonant(m, n);
        const auto in = analyze(*s, LoopSpec::circle({0, 0.1}, 0.3));
        o.require(exact_certificate(in, Rational(1, m * n), m * n), describe(in));
        const LoopSpec away = LoopSpec::circle({0, 3}, 0.5);
        const auto out = analyze(*s, away);
        o.require(orders_on_loop(*s, away).crossings.empty(), "reference loop crosses a stratum");
        o.require(out.matrix.is_identity() && out.n == 1 && out.transport_group == Lattice2::transport_form(1),
                  describe(out));
      }
    }
  });

  criterion(3, "S2xS2 loops", 0, [](Outcome& o) {
    const auto s = make_system("s2xs2");
    for (const char* l : {"circle:-1,0,0.5", "circle:1,0,0.5"}) {
      const auto c = analyze(*s, LoopSpec::parse(l));
      o.require(exact_certificate(c, Rational(1, 2), 2), describe(c));
    }
    const auto g1 = analyze(*s, LoopSpec::parse("poly:-2,-0.2;-2,0.2;-1,0.6;1,0.6;2,0.2;2,-0.2;1,-0.6;-1,-0.6"));
    o.require(exact_certificate(g1, Rational(1), 2), describe(g1));
    // Calibration: the loops separate the scanned fixed-point images as intended.
    ScanOptions so;
    so.grid = 6;
    const ScanResult r = critical_scan(*s, {-3.5, 3.5, -2, 2}, so);
    for (double j : {-3.0, -1.0, 1.0, 3.0}) {
      bool found = false;
      for (const auto& p : r.points) found = found || (p.value - Eigen::Vector2d(j, 0)).norm() < so.dedupe_radius;
      o.require(found, "scan misses fixed-point image");
    }
  });

  criterion(4, "spherical pendulum loops", 0, [](Outcome& o) {
    const auto s = make_system("qsp");
    const auto g1 = analyze(*s, LoopSpec::parse("circle:0,-0.5,0.3"));
    o.require(exact_certificate(g1, Rational(1), 1), describe(g1));
    const auto g2 = analyze(*s, LoopSpec::parse("poly:-0.3,-0.1;0.3,-0.1;0.3,0.25;-0.3,0.25"));
    o.require(g2.matrix.is_identity() && g2.n == 1, describe(g2));
  });

  criterion(5, "fixed-point Euler contributions", 0, [](Outcome& o) {
    for (int m = 1; m <= 5; ++m) {
      for (int n = 1; n <= 5; ++n) {
        if (std::gcd(m, n) != 1) continue;
        const WeightedFixedPoint p(Eigen::VectorXd::Zero(4), {m, n}, Eigen::Vector2d::Zero());
        o.require(euler_from_fixed_points(std::span(&p, 1)) == Rational(1, m * n), "wrong contribution");
        const auto fps = make_resonant(m, n)->fixed_points();
        o.require(euler_from_fixed_points(fps) == Rational(1, m * n), "catalog weights disagree");
      }
    }
  });

  criterion(6, "holonomy on 1:(-1), regular loop", 60, [](Outcome& o) {
    const auto t = rotation_holonomy(*make_system("res:1:-1"), LoopSpec::circle({0, 0.1}, 0.3));
    o.require(std::abs(t.k_estimate - 1) < 1e-3, "k_estimate = " + std::to_string(t.k_estimate));
  });

  criterion(6, "holonomy on a contractible loop", 60, [](Outcome& o) {
    const auto t = rotation_holonomy(*make_system("res:1:-1"), LoopSpec::circle({0.5, 0.5}, 0.2));
    o.require(std::abs(t.k_estimate) < 1e-3, "k_estimate = " + std::to_string(t.k_estimate));
  });

  criterion(7, "numerical hygiene", 0, [](Outcome& o) {
    std::vector<SystemPtr> systems;
    for (const auto& [id, desc] : catalog_entries()) {
      if (id != "res:m:-n") {
        systems.push_back(make_system(id));
        continue;
      }
      for (int m = 1; m <= 5; ++m) {
        for (int n = 1; n <= 5; ++n) {
          if (std::gcd(m, n) == 1) systems.push_back(make_resonant(m, n));
        }
      }
    }
    for (const auto& s : systems) {
      const double pr = poisson_residual(*s, 1000);
      const double gc = grad_check(*s, 1000);
      const double fr = periodicity_residual(*s, 1000);
      std::ostringstream msg;
      msg << s->id() << ": poisson " << pr << " grad " << gc << " period " << fr;
      o.require(pr < 1e-9 && gc < 1e-6 && fr < 1e-8, msg.str());
    }
  });

  criterion(8, "1:(-2) critical branch", 0, [](Outcome& o) {
    // Remaining critical values are stationary points of the reduced
    // Hamiltonian f(B) = sigma 2 (B + J) sqrt(B) + (2 B + J)^2 on the level
    // J = A - B, A = |z|^2 / 2, B = |w|^2, sigma = -cos(arg z^2 w).
    const auto s = make_system("res:1:-2");
    const ScanResult r = critical_scan(*s, {-2, 2, -1, 4}, {});
    int branch = 0, reduced = 0;
    bool origin = false;
    for (const auto& p : r.points) {
      const double j = p.value.x(), h = p.value.y();
      if (p.value.norm() < 1e-8) {
        origin = true;
        continue;
      }
      if (j <= 0 && std::abs(h - j * j) < 1e-6) {
        ++branch;
        continue;
      }
      const PhasePoint& x = p.witness;
      const std::complex<double> z(x(1), x(0)), w(x(3), x(2));
      const double b = std::norm(w);
      std::ostringstream msg;
      msg << "unexplained critical value (" << j << ", " << h << ")";
      if (b < 1e-12) {
        o.require(j >= 0 && std::abs(h - j * j) < 1e-6, msg.str());
        ++reduced;
        continue;
      }
      const std::complex<double> zw = z * z * w;
      const double sigma = std::abs(zw) > 0 ? -zw.real() / std::abs(zw) : 1.0;
      const double sb = std::sqrt(b);
      const double f = sigma * 2 * (b + j) * sb + (2 * b + j) * (2 * b + j);
      const double df = sigma * (2 * sb + (b + j) / sb) + 4 * (2 * b + j);
      o.require(std::abs(std::abs(sigma) - 1) < 1e-6 && std::abs(f - h) < 1e-6 && std::abs(df) < 1e-6, msg.str());
      ++reduced;
    }
    o.require(origin, "origin missing");
    o.require(branch >= 50, "only " + std::to_string(branch) + " branch points");
    std::printf("  branch points %d, reduced-level stationary points %d\n", branch, reduced);
  });

  criterion(9, "Seifert property suites", 0, [](Outcome& o) {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> ord(2, 7), count(0, 3), kk(-20, 20), coef(-50, 50);
    for (int it = 0; it < 5000; ++it) {
      std::vector<std::int64_t> orders(count(rng));
      for (auto& v : orders) v = ord(rng);
      const std::int64_t n = lcm_orders(orders);
      const std::int64_t k = kk(rng);
      const SeifertData sd(k_to_euler(k, orders), orders);
      o.require(sd.lcm() == n && euler_to_k(sd) == k, "k = N e");
      o.require(quotient_euler(sd) == Rational(k), "quotient Euler");
      o.require(monodromy_matrix(sd).determinant() == Rational(1), "det");
      o.require(transport_group(sd) == Lattice2::transport_form(n), "transport group");
      const Cycle c = make_cycle(coef(rng), coef(rng));
      const Cycle d = make_cycle(coef(rng), coef(rng));
      const auto tc = transport(sd, c);
      o.require(tc.has_value() == (c(0) % n == 0), "transportable iff N | a");
      if (!tc) continue;
      o.require(*tc == make_cycle(c(0), c(1) + k * (c(0) / n)), "transport formula");
      o.require(*tc == apply_matrix(monodromy_matrix(sd), c), "transport agrees with matrix");
      const Cycle d2 = make_cycle(d(0) * n, d(1));
      const auto td = transport(sd, d2);
      const auto tsum = transport(sd, Cycle(c + d2));
      o.require(td && tsum && *tsum == *tc + *td, "homomorphism");
      // Uniqueness: transport is injective on the transport group.
      const Cycle e = make_cycle(c(0), c(1) + 1);
      o.require(*transport(sd, e) != *tc && *transport(sd, e) == *tc + make_cycle(0, 1), "uniqueness");
    }
    const SeifertData golden(Rational(1, 2), {2});
    o.require(quotient_euler(golden) == Rational(1), "(1/2,[2]) -> 1");
  });

  std::printf("%s\n", failures == 0 ? "ALL PASS" : "SOME CRITERIA FAILED");
  return failures == 0 ? 0 : 1;
}
