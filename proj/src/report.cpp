#include "fracmon/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace fracmon {

namespace {

Json real(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json vec(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(real(v(i)));
  return a;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const MonodromyMatrixQ& m) {
  return Json::array({Json::array({to_json(m(0, 0)), to_json(m(0, 1))}),
                      Json::array({to_json(m(1, 0)), to_json(m(1, 1))})});
}

Json to_json(const Lattice2& l) {
  Json a = Json::array();
  for (int j = 0; j < 2; ++j) a.push_back(Json::array({l.column(j)(0), l.column(j)(1)}));
  return a;
}

Json to_json(const WeightedFixedPoint& p) {
  Json j;
  j["location"] = vec(p.location());
  j["weights"] = Json::array({p.weights().m, p.weights().n});
  j["f_value"] = vec(p.f_value());
  j["contribution"] = to_json(contribution(p));
  return j;
}

Json to_json(const SeifertData& s) {
  Json j;
  j["euler"] = to_json(s.euler());
  j["orders"] = s.orders();
  j["label"] = s.label();
  j["N"] = s.lcm();
  j["k"] = euler_to_k(s);
  return j;
}

Json to_json(const Crossing& c) {
  Json j;
  j["order"] = c.order;
  j["stratum"] = c.stratum;
  j["point"] = vec(c.point);
  j["loop_parameter"] = real(c.loop_parameter);
  j["angle_deg"] = real(c.angle_deg);
  return j;
}

Json to_json(const Regularity& r) {
  Json j;
  j["simple"] = r.simple;
  j["normalized_orientation"] = r.normalized_orientation;
  j["min_fixed_point_distance"] = real(r.min_fixed_point_distance);
  j["min_stratum_endpoint_distance"] = real(r.min_endpoint_distance);
  j["crossings"] = Json::array();
  for (const auto& c : r.crossings) j["crossings"].push_back(to_json(c));
  j["detected_orders"] = r.detected_orders;
  j["forced_orders"] = r.forced_orders;
  j["detection_disagrees"] = r.detection_disagrees;
  j["notes"] = r.notes;
  return j;
}

Json to_json(const MonodromyCertificate& c) {
  Json j;
  j["system"] = c.system_id;
  j["loop"] = c.loop.str();
  j["euler"] = to_json(c.euler);
  j["orders_on_loop"] = c.orders_on_loop;
  j["N"] = c.n;
  j["k"] = c.k;
  j["transport_group"] = to_json(c.transport_group);
  j["matrix"] = to_json(c.matrix);
  j["enclosed_fixed_points"] = Json::array();
  for (const auto& p : c.enclosed_fixed_points) j["enclosed_fixed_points"].push_back(to_json(p));
  j["regularity"] = to_json(c.regularity);
  j["assumed_connected"] = c.assumed_connected;
  return j;
}

Json to_json(const HolonomyTrace& t) {
  Json j;
  j["stations"] = static_cast<int>(t.stations.size()) - 1;
  j["refinements"] = t.refinements;
  j["k_estimate"] = real(t.k_estimate);
  j["max_jump"] = real(t.max_jump);
  j["max_residual"] = real(t.max_residual);
  j["T_start"] = real(t.T.front());
  j["T_end"] = real(t.T.back());
  j["theta_start"] = real(t.theta.front());
  j["theta_end"] = real(t.theta.back());
  return j;
}

Json describe_system(const SystemModel& s) {
  Json j;
  j["id"] = s.id();
  j["ambient_dim"] = s.ambient_dim();
  j["constraints"] = s.constraint_count();
  j["parameters"] = Json::object();
  for (const auto& [k, v] : s.parameters()) j["parameters"][k] = real(v);
  j["fixed_points"] = Json::array();
  for (const auto& p : s.fixed_points()) j["fixed_points"].push_back(to_json(p));
  j["strata"] = Json::array();
  for (const auto& st : s.strata()) {
    j["strata"].push_back(Json{{"order", st.order}, {"dimension", st.dimension}, {"description", st.description}});
  }
  return j;
}

std::string dump(const Json& j) { return j.dump(2); }

void write_scan_csv(std::ostream& os, const ScanResult& r) {
  const int d = r.points.empty() ? 0 : static_cast<int>(r.points.front().witness.size());
  os << "J,H";
  for (int i = 0; i < d; ++i) os << ",x" << i + 1;
  os << ",gram_det\n";
  for (const auto& p : r.points) {
    os << num(p.value.x()) << ',' << num(p.value.y());
    for (int i = 0; i < p.witness.size(); ++i) os << ',' << num(p.witness(i));
    os << ',' << num(p.gram_det) << '\n';
  }
}

void write_holonomy_csv(std::ostream& os, const HolonomyTrace& t) {
  os << "station,J,H,T,theta\n";
  for (std::size_t i = 0; i < t.stations.size(); ++i) {
    os << i << ',' << num(t.stations[i].x()) << ',' << num(t.stations[i].y()) << ',' << num(t.T[i]) << ','
       << num(t.theta[i]) << '\n';
  }
}

void write_scan_svg(std::ostream& os, const SystemModel& s, const ScanResult& r, const Window& w,
                    const LoopSpec* loop) {
  constexpr double size = 600, margin = 40;
  const double sx = (size - 2 * margin) / (w.j_max - w.j_min);
  const double sy = (size - 2 * margin) / (w.h_max - w.h_min);
  auto px = [&](const Eigen::Vector2d& p) {
    return num(margin + (p.x() - w.j_min) * sx) + "," + num(size - margin - (p.y() - w.h_min) * sy);
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
  os << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << size - 2 * margin << "\" height=\""
     << size - 2 * margin << "\" fill=\"white\" stroke=\"black\"/>\n";
  os << "<text x=\"" << size / 2 << "\" y=\"" << size - 10 << "\" text-anchor=\"middle\">J</text>\n";
  os << "<text x=\"12\" y=\"" << size / 2 << "\">H</text>\n";
  os << "<text x=\"" << margin << "\" y=\"24\">" << s.id() << "</text>\n";
  os << "<g clip-path=\"inset(0)\">\n";

  for (const auto& st : s.strata()) {
    for (const auto& line : stratum_image(s, st, 2000)) {
      os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
      for (const auto& p : line) {
        if (w.contains(p)) os << px(p) << ' ';
      }
      os << "\"/>\n";
    }
  }
  for (const auto& c : r.points) {
    os << "<circle r=\"1.5\" fill=\"black\" transform=\"translate(" << px(c.value) << ")\"/>\n";
  }
  for (const auto& fp : s.fixed_points()) {
    if (!w.contains(fp.f_value())) continue;
    os << "<rect x=\"-4\" y=\"-4\" width=\"8\" height=\"8\" fill=\"crimson\" transform=\"translate("
       << px(fp.f_value()) << ")\"/>\n";
  }
  if (loop) {
    os << "<polygon fill=\"none\" stroke=\"darkorange\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : loop->discretize(256)) os << px(p) << ' ';
    os << "\"/>\n";
  }
  os << "</g>\n</svg>\n";
}

}  // namespace fracmon
