#include "fracmon/monodromy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "fracmon/error.hpp"

namespace fracmon {

namespace {

using std::numbers::pi;

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

double segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (a + t * ab - p).norm();
}

// Proper intersection of segments [a,b] and [c,d]; returns parameters (t, u).
bool segment_intersection(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                          const Eigen::Vector2d& d, double& t, double& u) {
  const Eigen::Vector2d r = b - a, q = d - c;
  const double denom = cross2(r, q);
  if (std::abs(denom) < 1e-300) return false;
  t = cross2(c - a, q) / denom;
  u = cross2(c - a, r) / denom;
  return t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0;
}

std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<double> parse_numbers(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidInput("malformed number '" + item + "' in loop");
    }
    if (used != item.size()) throw InvalidInput("malformed number '" + item + "' in loop");
    out.push_back(v);
  }
  return out;
}

}  // namespace

// --- LoopSpec ----------------------------------------------------------------

LoopSpec LoopSpec::circle(const Eigen::Vector2d& center, double radius, bool clockwise) {
  if (!(radius > 0) || !std::isfinite(radius)) throw InvalidInput("loop circle needs a positive radius");
  LoopSpec l;
  l.kind_ = Kind::Circle;
  l.center_ = center;
  l.radius_ = radius;
  l.clockwise_ = clockwise;
  return l;
}

LoopSpec LoopSpec::polyline(std::vector<Eigen::Vector2d> vertices) {
  if (vertices.size() < 3) throw InvalidInput("loop polygon needs at least 3 vertices");
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    if ((vertices[(i + 1) % n] - vertices[i]).norm() == 0.0) throw InvalidInput("loop polygon has a zero-length edge");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      double t, u;
      if (segment_intersection(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n], t, u)) {
        throw InvalidInput("loop polygon is not simple: edges " + std::to_string(i) + " and " + std::to_string(j) +
                           " intersect");
      }
    }
  }
  LoopSpec l;
  l.kind_ = Kind::Polyline;
  l.vertices_ = std::move(vertices);
  if (std::abs(l.signed_area()) == 0.0) throw InvalidInput("loop polygon encloses no area");
  return l;
}

Eigen::Vector2d LoopSpec::point(double t) const {
  if (kind_ == Kind::Circle) {
    const double a = 2 * pi * t * (clockwise_ ? -1.0 : 1.0);
    return center_ + radius_ * Eigen::Vector2d(std::cos(a), std::sin(a));
  }
  const std::size_t n = vertices_.size();
  double perimeter = 0;
  for (std::size_t i = 0; i < n; ++i) perimeter += (vertices_[(i + 1) % n] - vertices_[i]).norm();
  double target = std::fmod(std::max(t, 0.0), 1.0) * perimeter;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d a = vertices_[i], b = vertices_[(i + 1) % n];
    const double len = (b - a).norm();
    if (target <= len) return a + (b - a) * (target / len);
    target -= len;
  }
  return vertices_.front();
}

std::vector<Eigen::Vector2d> LoopSpec::discretize(int n) const {
  if (kind_ == Kind::Polyline) return vertices_;
  std::vector<Eigen::Vector2d> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = point(static_cast<double>(i) / n);
  return pts;
}

double LoopSpec::signed_area() const {
  if (kind_ == Kind::Circle) return (clockwise_ ? -1.0 : 1.0) * pi * radius_ * radius_;
  double a = 0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) a += cross2(vertices_[i], vertices_[(i + 1) % n]);
  return 0.5 * a;
}

LoopSpec LoopSpec::reversed() const {
  LoopSpec l = *this;
  if (kind_ == Kind::Circle) {
    l.clockwise_ = !clockwise_;
  } else {
    // Keep gamma(0) fixed: v0, v_{n-1}, ..., v1.
    std::reverse(l.vertices_.begin() + 1, l.vertices_.end());
  }
  return l;
}

double LoopSpec::distance_to(const Eigen::Vector2d& p) const {
  if (kind_ == Kind::Circle) return std::abs((p - center_).norm() - radius_);
  double d = std::numeric_limits<double>::infinity();
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) d = std::min(d, segment_distance(p, vertices_[i], vertices_[(i + 1) % n]));
  return d;
}

std::string LoopSpec::str() const {
  if (kind_ == Kind::Circle) {
    return "circle:" + fmt(center_.x()) + "," + fmt(center_.y()) + "," + fmt(radius_) + (clockwise_ ? ",cw" : "");
  }
  std::string s = "poly:";
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i) s += ";";
    s += fmt(vertices_[i].x()) + "," + fmt(vertices_[i].y());
  }
  return s;
}

LoopSpec LoopSpec::parse(const std::string& text) {
  if (text.rfind("circle:", 0) == 0) {
    std::string body = text.substr(7);
    bool cw = false;
    if (body.size() > 3 && body.compare(body.size() - 3, 3, ",cw") == 0) {
      cw = true;
      body.resize(body.size() - 3);
    }
    const auto v = parse_numbers(body, ',');
    if (v.size() != 3) throw InvalidInput("circle loop needs circle:cJ,cH,r");
    return circle({v[0], v[1]}, v[2], cw);
  }
  if (text.rfind("poly:", 0) == 0) {
    std::vector<Eigen::Vector2d> verts;
    std::stringstream ss(text.substr(5));
    std::string pair;
    while (std::getline(ss, pair, ';')) {
      const auto v = parse_numbers(pair, ',');
      if (v.size() != 2) throw InvalidInput("polygon vertex '" + pair + "' needs J,H");
      verts.emplace_back(v[0], v[1]);
    }
    return polyline(std::move(verts));
  }
  throw InvalidInput("unknown loop syntax '" + text + "', expected circle:cJ,cH,r or poly:J1,H1;J2,H2;...");
}

// --- winding and enclosure ------------------------------------------------------

int winding_number(const LoopSpec& loop, const Eigen::Vector2d& p, double tol) {
  if (loop.distance_to(p) <= tol) {
    throw RegularityViolation("point-on-loop", "point lies on the loop (distance <= " + fmt(tol) + ")");
  }
  if (loop.kind() == LoopSpec::Kind::Circle) {
    const int sign = loop.counterclockwise() ? 1 : -1;
    return (p - loop.center()).norm() < loop.radius() ? sign : 0;
  }
  const auto& v = loop.vertices();
  double total = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Eigen::Vector2d a = v[i] - p, b = v[(i + 1) % v.size()] - p;
    total += std::atan2(cross2(a, b), a.dot(b));
  }
  return static_cast<int>(std::lround(total / (2 * pi)));
}

std::vector<WeightedFixedPoint> enclosed_fixed_points(const SystemModel& s, const LoopSpec& loop, double tol) {
  const LoopSpec ccw = loop.normalized();
  std::vector<WeightedFixedPoint> out;
  for (const auto& fp : s.fixed_points()) {
    if (ccw.distance_to(fp.f_value()) <= tol) {
      std::ostringstream os;
      os << "fixed point image (" << fp.f_value().x() << ", " << fp.f_value().y()
         << ") lies on the loop: the circle action would have a fixed point on F^-1(loop), violating condition (ii)";
      throw RegularityViolation("(ii) fixed-point-free action on E", os.str());
    }
    if (winding_number(ccw, fp.f_value(), tol) == 1) out.push_back(fp);
  }
  return out;
}

// --- strata crossings ------------------------------------------------------------

OrdersOnLoop orders_on_loop(const SystemModel& s, const LoopSpec& loop, const LoopOptions& opts) {
  OrdersOnLoop out;
  out.min_endpoint_distance = std::numeric_limits<double>::infinity();
  const auto pts = loop.discretize(opts.loop_segments);
  const std::size_t n = pts.size();

  // Cumulative length for the loop parameter of polygon crossings.
  std::vector<double> cum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + (pts[(i + 1) % n] - pts[i]).norm();

  const auto strata = s.strata();
  for (std::size_t si = 0; si < strata.size(); ++si) {
    const auto lines = stratum_image(s, strata[si], opts.stratum_samples);
    std::vector<Crossing> found;
    for (const auto& line : lines) {
      out.min_endpoint_distance = std::min({out.min_endpoint_distance, loop.distance_to(line.front()),
                                            loop.distance_to(line.back())});
      for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d a = pts[i], b = pts[(i + 1) % n];
        for (std::size_t j = 0; j + 1 < line.size(); ++j) {
          double t, u;
          if (!segment_intersection(a, b, line[j], line[j + 1], t, u)) continue;
          Crossing c;
          c.order = strata[si].order;
          c.stratum = si;
          c.point = a + t * (b - a);
          c.loop_parameter = (cum[i] + t * (b - a).norm()) / cum[n];
          const Eigen::Vector2d d1 = (b - a).normalized(), d2 = (line[j + 1] - line[j]).normalized();
          c.angle_deg = std::acos(std::min(1.0, std::abs(d1.dot(d2)))) * 180.0 / pi;
          found.push_back(c);
        }
      }
    }
    // A crossing through a shared vertex is reported by both neighbours.
    std::sort(found.begin(), found.end(),
              [](const Crossing& a, const Crossing& b) { return a.loop_parameter < b.loop_parameter; });
    for (const auto& c : found) {
      bool dup = false;
      for (const auto& kept : out.crossings) {
        if (kept.stratum == c.stratum && (kept.point - c.point).norm() < 1e-9) dup = true;
      }
      if (dup) continue;
      if (c.angle_deg < opts.min_crossing_angle_deg) {
        std::ostringstream os;
        os << "loop meets the image of stratum '" << strata[si].description << "' at (" << c.point.x() << ", "
           << c.point.y() << ") under " << c.angle_deg << " deg; condition (iii') H'(t)dJ - J'(t)dH != 0 fails";
        throw RegularityViolation("(iii') transversality", os.str());
      }
      out.crossings.push_back(c);
    }
  }
  std::sort(out.crossings.begin(), out.crossings.end(),
            [](const Crossing& a, const Crossing& b) { return a.loop_parameter < b.loop_parameter; });
  std::set<std::int64_t> orders;
  for (const auto& c : out.crossings) orders.insert(c.order);
  out.orders.assign(orders.begin(), orders.end());
  return out;
}

// --- analysis --------------------------------------------------------------------

MonodromyCertificate analyze(const SystemModel& s, const LoopSpec& loop, const LoopOptions& opts) {
  MonodromyCertificate cert;
  cert.system_id = s.id();
  cert.loop = loop.normalized();
  Regularity& reg = cert.regularity;
  reg.normalized_orientation = !loop.counterclockwise();
  if (reg.normalized_orientation) reg.notes.push_back("clockwise loop normalized to counter-clockwise");

  reg.min_fixed_point_distance = std::numeric_limits<double>::infinity();
  for (const auto& fp : s.fixed_points()) {
    reg.min_fixed_point_distance = std::min(reg.min_fixed_point_distance, cert.loop.distance_to(fp.f_value()));
  }
  cert.enclosed_fixed_points = enclosed_fixed_points(s, cert.loop, opts.point_tol);
  cert.euler = euler_from_fixed_points(cert.enclosed_fixed_points);

  const OrdersOnLoop detected = orders_on_loop(s, cert.loop, opts);
  reg.crossings = detected.crossings;
  reg.detected_orders = detected.orders;
  reg.min_endpoint_distance = detected.min_endpoint_distance;
  if (!cert.enclosed_fixed_points.empty() && detected.min_endpoint_distance < 1e3 * opts.point_tol) {
    reg.notes.push_back("loop passes close to an endpoint of a stratum image");
  }

  std::set<std::int64_t> orders(detected.orders.begin(), detected.orders.end());
  if (const auto res = s.resonance(); res && !cert.enclosed_fixed_points.empty()) {
    // Exceptional orbits emanating from the enclosed origin reach F^-1(loop).
    const auto [m, n] = *res;
    if (m >= 2) reg.forced_orders.push_back(m);
    if (n >= 2) reg.forced_orders.push_back(n);
    for (auto o : reg.forced_orders) orders.insert(o);
    std::set<std::int64_t> forced(reg.forced_orders.begin(), reg.forced_orders.end());
    std::set<std::int64_t> seen(detected.orders.begin(), detected.orders.end());
    reg.detection_disagrees = forced != seen;
    if (reg.detection_disagrees) reg.notes.push_back("detected stratum crossings differ from the forced resonant orders");
  }
  cert.orders_on_loop.assign(orders.begin(), orders.end());

  const std::int64_t n = lcm_orders(cert.orders_on_loop);
  if (!(Rational(n) * cert.euler).is_integer()) {
    throw NumericFailure("inconsistent analysis: N e = " + (Rational(n) * cert.euler).str() +
                         " is not an integer; a stratum crossing was probably missed");
  }
  const SeifertData sd(cert.euler, cert.orders_on_loop, s.id());
  cert.n = sd.lcm();
  cert.k = euler_to_k(sd);
  cert.transport_group = transport_group(sd);
  cert.matrix = monodromy_matrix(sd);
  return cert;
}

ResonantCase resonant_case(int m, int n, bool encloses_origin, const std::vector<std::int64_t>& crossed_orders) {
  if (m <= 0) throw InvalidInput("resonant_case needs m > 0");
  if (n == 0 || std::gcd(m, n) != 1) throw InvalidInput("resonant_case needs coprime non-zero m, n");
  const std::int64_t mn = std::int64_t{m} * std::abs(n);
  ResonantCase out;
  if (encloses_origin) {
    std::vector<std::int64_t> orders;
    if (m >= 2) orders.push_back(m);
    if (std::abs(n) >= 2) orders.push_back(std::abs(n));
    out.n = lcm_orders(orders);
    out.matrix = MonodromyMatrixQ::unipotent(Rational(1) / Rational(std::int64_t{m} * n));
    return out;
  }
  for (auto o : crossed_orders) {
    if (o < 2 || mn % o != 0) {
      throw InvalidInput("crossed order " + std::to_string(o) + " does not divide mn = " + std::to_string(mn));
    }
  }
  out.n = lcm_orders(crossed_orders);
  return out;
}

}  // namespace fracmon
