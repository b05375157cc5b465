#include <doctest.h>

#include <sstream>

#include "fracmon/report.hpp"

using namespace fracmon;

TEST_SUITE("report") {

TEST_CASE("scalar encodings") {
  CHECK(to_json(Rational(1, 2)) == "1/2");
  CHECK(to_json(Rational(-3)) == "-3");
  const Json m = to_json(MonodromyMatrixQ::unipotent(Rational(1, 2)));
  CHECK(m.dump() == R"([["1","1/2"],["0","1"]])");
  CHECK(to_json(Lattice2::transport_form(2)).dump() == "[[2,0],[0,1]]");
}

TEST_CASE("certificate shape") {
  const auto s = make_system("res:1:-2");
  const Json j = to_json(analyze(*s, LoopSpec::circle({0, 0.25}, 0.5)));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"system", "loop", "euler", "orders_on_loop", "N", "k", "transport_group",
                                         "matrix", "enclosed_fixed_points", "regularity", "assumed_connected"});
  CHECK(j["system"] == "res:1:-2");
  CHECK(j["euler"] == "1/2");
  CHECK(j["N"] == 2);
  CHECK(j["k"] == 1);
  CHECK(j["orders_on_loop"] == Json::array({2}));
  CHECK(j["enclosed_fixed_points"].size() == 1);
  CHECK(j["enclosed_fixed_points"][0]["weights"] == Json::array({1, 2}));
  CHECK(j["regularity"]["crossings"].size() == 1);
}

TEST_CASE("output is deterministic") {
  const auto s = make_system("s2xs2");
  const LoopSpec l = LoopSpec::circle({-1, 0}, 0.5);
  CHECK(dump(to_json(analyze(*s, l))) == dump(to_json(analyze(*s, l))));
  CHECK(dump(describe_system(*s)) == dump(describe_system(*make_system("s2xs2"))));
}

TEST_CASE("reals round trip") {
  Json j = 0.1;
  CHECK(Json::parse(dump(j)).get<double>() == 0.1);
  j = 1.0 / 3.0;
  CHECK(Json::parse(dump(j)).get<double>() == 1.0 / 3.0);
}

TEST_CASE("csv and svg") {
  const auto s = make_system("res:1:-2");
  const Window w{-1, 1, -0.2, 1};
  ScanOptions o;
  o.grid = 5;
  const ScanResult r = critical_scan(*s, w, o);
  std::ostringstream csv;
  write_scan_csv(csv, r);
  CHECK(csv.str().rfind("J,H,x1,x2,x3,x4,gram_det\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv.str()) lines += c == '\n';
  CHECK(lines == r.points.size() + 1);

  std::ostringstream svg;
  const LoopSpec l = LoopSpec::circle({0, 0.25}, 0.5);
  write_scan_svg(svg, *s, r, w, &l);
  CHECK(svg.str().rfind("<svg", 0) == 0);
  CHECK(svg.str().find("</svg>") != std::string::npos);
  CHECK(svg.str().find("polygon") != std::string::npos);
}

TEST_CASE("holonomy csv") {
  HolonomyTrace t;
  t.stations = {{0, 0}, {1, 0}};
  t.T = {1, 2};
  t.theta = {0.5, 0.25};
  std::ostringstream os;
  write_holonomy_csv(os, t);
  CHECK(os.str() == "station,J,H,T,theta\n0,0,0,1,0.5\n1,1,0,2,0.25\n");
}

}
