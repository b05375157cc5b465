// fracmon: command-line front end for the fractional monodromy pipeline.
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fracmon/error.hpp"
#include "fracmon/monodromy.hpp"
#include "fracmon/numverify.hpp"
#include "fracmon/report.hpp"
#include "fracmon/seifert.hpp"
#include "fracmon/systems.hpp"

using namespace fracmon;

namespace {

enum ExitCode { kOk = 0, kCheckFailed = 1, kInvalid = 2, kRegularity = 3, kNumeric = 4 };

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw InvalidInput("expected an integer, got '" + s + "'");
  }
  if (used != s.size()) throw InvalidInput("expected an integer, got '" + s + "'");
  return v;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidInput("expected a number, got '" + s + "'");
  }
  if (used != s.size()) throw InvalidInput("expected a number, got '" + s + "'");
  return v;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kv) {
  std::map<std::string, double> out;
  for (const auto& p : kv) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw InvalidInput("parameter '" + p + "' must look like name=value");
    out[p.substr(0, eq)] = parse_real(p.substr(eq + 1));
  }
  return out;
}

Window parse_window(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 4) throw InvalidInput("window must be jmin,jmax,hmin,hmax");
  Window w{parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2]), parse_real(parts[3])};
  if (!(w.j_min < w.j_max && w.h_min < w.h_max)) throw InvalidInput("window must have jmin < jmax and hmin < hmax");
  return w;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot write '" + path + "'");
  f << text;
}

struct Config {
  std::string system;
  std::vector<std::string> params;
  std::string loop;
  std::string out;
  std::string format = "json";
  double tol_point = 1e-6;
  double tol_angle = 5.0;
  double tol_gram = 1e-10;
  double tol_dedupe = 1e-4;
  double tol_flow = 1e-12;
  int grid = 8;
  std::string window = "-2,2,-1,4";
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::uint64_t seed = 1;
  int samples = 1000;
  std::string svg;
  std::string holonomy_loop;
  std::string holonomy_csv;
  int stations = 64;
  std::string weights;
  std::string euler = "0";
  std::string orders;
  std::string cycle;
  bool json = false;
};

SystemPtr system_from(const Config& c) {
  if (c.system.empty()) throw InvalidInput("--system is required");
  return make_system(c.system, parse_params(c.params));
}

LoopOptions loop_options(const Config& c) {
  if (!(c.tol_point > 0) || !(c.tol_angle > 0)) throw InvalidInput("tolerances must be positive");
  LoopOptions o;
  o.point_tol = c.tol_point;
  o.min_crossing_angle_deg = c.tol_angle;
  return o;
}

std::string text_system(const SystemModel& s) {
  std::ostringstream os;
  os << s.id() << "\n";
  for (const auto& [k, v] : s.parameters()) os << "  parameter " << k << " = " << v << "\n";
  for (const auto& fp : s.fixed_points()) {
    os << "  fixed point F = (" << fp.f_value().x() << ", " << fp.f_value().y() << ") weights (" << fp.weights().m
       << "," << fp.weights().n << ") contribution " << contribution(fp) << "\n";
  }
  for (const auto& st : s.strata()) os << "  stratum order " << st.order << ": " << st.description << "\n";
  if (s.strata().empty()) os << "  no exceptional strata\n";
  return os.str();
}

int cmd_list_systems(const Config& c) {
  const std::vector<std::string> concrete = {"res:1:-2", "res:1:-1", "res:2:-3", "s2xs2", "qsp"};
  if (c.json) {
    Json j;
    j["catalog"] = Json::array();
    for (const auto& [id, desc] : catalog_entries()) j["catalog"].push_back(Json{{"id", id}, {"description", desc}});
    j["systems"] = Json::array();
    for (const auto& id : concrete) j["systems"].push_back(describe_system(*make_system(id)));
    emit(dump(j) + "\n", c.out);
    return kOk;
  }
  std::ostringstream os;
  for (const auto& [id, desc] : catalog_entries()) os << id << "  " << desc << "\n";
  os << "\n";
  for (const auto& id : concrete) os << text_system(*make_system(id)) << "\n";
  emit(os.str(), c.out);
  return kOk;
}

int cmd_euler(const Config& c) {
  Rational e(0);
  for (const auto& pair : split(c.weights, ',')) {
    const auto mn = split(pair, ':');
    if (mn.size() != 2) throw InvalidInput("weight pair '" + pair + "' must look like m:n");
    const std::int64_t m = parse_int(mn[0]), n = parse_int(mn[1]);
    if (m == 0 || n == 0 || std::gcd(m, n) != 1) throw InvalidInput("weights " + pair + " must be coprime and non-zero");
    e += Rational(1) / Rational(m * n);
  }
  emit(e.str() + "\n", c.out);
  return kOk;
}

int cmd_transport(const Config& c) {
  std::vector<std::int64_t> orders;
  for (const auto& o : split(c.orders, ',')) orders.push_back(parse_int(o));
  const SeifertData sd(Rational::parse(c.euler), orders);
  const auto ab = split(c.cycle, ',');
  if (ab.size() != 2) throw InvalidInput("cycle must look like p,q");
  const auto image = transport(sd, make_cycle(parse_int(ab[0]), parse_int(ab[1])));
  emit(image ? std::to_string((*image)(0)) + "," + std::to_string((*image)(1)) + "\n" : "NOT_TRANSPORTABLE\n", c.out);
  return kOk;
}

int cmd_analyze(const Config& c) {
  const auto s = system_from(c);
  if (c.loop.empty()) throw InvalidInput("--loop is required");
  const auto cert = analyze(*s, LoopSpec::parse(c.loop), loop_options(c));
  emit(dump(to_json(cert)) + "\n", c.out);
  return kOk;
}

int cmd_scan(const Config& c) {
  const auto s = system_from(c);
  const Window w = parse_window(c.window);
  ScanOptions so;
  so.grid = c.grid;
  so.tol = c.tol_gram;
  so.dedupe_radius = c.tol_dedupe;
  so.threads = c.threads;
  if (!(so.tol > 0) || !(so.dedupe_radius > 0)) throw InvalidInput("tolerances must be positive");
  const ScanResult r = critical_scan(*s, w, so);
  std::ostringstream csv;
  write_scan_csv(csv, r);
  if (!c.svg.empty()) {
    std::ostringstream svg;
    const LoopSpec loop = c.loop.empty() ? LoopSpec() : LoopSpec::parse(c.loop);
    write_scan_svg(svg, *s, r, w, c.loop.empty() ? nullptr : &loop);
    emit(svg.str(), c.svg);
  }
  emit(csv.str(), c.out);
  std::cerr << r.points.size() << " critical values from " << r.seeds << " seeds (" << r.dropped
            << " did not converge)\n";
  return kOk;
}

int cmd_verify(const Config& c) {
  const auto s = system_from(c);
  if (c.samples < 1) throw InvalidInput("--samples must be positive");
  Json j;
  j["system"] = s->id();
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  Json checks = Json::array();
  bool pass = true;
  auto check = [&](const std::string& name, double value, double threshold) {
    const bool ok = value < threshold;
    pass = pass && ok;
    checks.push_back(Json{{"name", name}, {"value", value}, {"threshold", threshold}, {"pass", ok}});
  };
  check("poisson_residual", poisson_residual(*s, c.samples, c.seed), 1e-9);
  check("grad_check", grad_check(*s, c.samples, 1e-5, c.seed), 1e-6);
  FlowOptions fo;
  fo.rtol = fo.atol = c.tol_flow;
  check("periodicity", periodicity_residual(*s, c.samples, c.seed, fo), 1e-8);

  if (!c.holonomy_loop.empty()) {
    const LoopSpec loop = LoopSpec::parse(c.holonomy_loop);
    HolonomyOptions ho;
    ho.n_stations = c.stations;
    ho.flow = fo;
    ho.threads = c.threads;
    const HolonomyTrace tr = rotation_holonomy(*s, loop, ho);
    Json h = to_json(tr);
    h["loop"] = loop.normalized().str();
    const auto cert = analyze(*s, loop, loop_options(c));
    h["certificate_k"] = cert.k;
    h["certificate_N"] = cert.n;
    if (cert.n == 1) check("holonomy_vs_certificate", std::abs(tr.k_estimate - static_cast<double>(cert.k)), 1e-3);
    j["holonomy"] = h;
    if (!c.holonomy_csv.empty()) {
      std::ostringstream csv;
      write_holonomy_csv(csv, tr);
      emit(csv.str(), c.holonomy_csv);
    }
  }
  j["checks"] = checks;
  j["pass"] = pass;
  emit(dump(j) + "\n", c.out);
  return pass ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional monodromy of integrable systems with a circle action"};
  app.require_subcommand(1);
  Config c;

  auto add_system = [&](CLI::App* sub) {
    sub->add_option("--system", c.system, "res:1:-2, res:M:-N, s2xs2 or qsp")->envname("FRACMON_SYSTEM");
    sub->add_option("--param", c.params, "parameter override name=value (eps, b, c)");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--threads", c.threads, "worker threads")->envname("FRACMON_THREADS");
    sub->add_option("--seed", c.seed, "sampling seed")->envname("FRACMON_SEED");
  };
  auto add_loop_tols = [&](CLI::App* sub) {
    sub->add_option("--tol-point", c.tol_point, "fixed-point image vs loop distance")->envname("FRACMON_TOL_POINT");
    sub->add_option("--tol-angle", c.tol_angle, "minimal crossing angle in degrees")->envname("FRACMON_TOL_ANGLE");
  };

  auto* list = app.add_subcommand("list-systems", "catalog of built-in systems");
  list->add_flag("--json", c.json, "JSON output");
  add_common(list);

  auto* euler = app.add_subcommand("euler", "sum of 1/(mn) over isotropy weights");
  euler->add_option("weights", c.weights, "comma separated m:n pairs, e.g. 1:2,1:2");
  add_common(euler);

  auto* tr = app.add_subcommand("transport", "parallel transport of a cycle p a + q b");
  tr->add_option("--euler", c.euler, "Euler number p/q");
  tr->add_option("--orders", c.orders, "comma separated exceptional orders");
  tr->add_option("--cycle", c.cycle, "p,q")->required();
  add_common(tr);

  auto* an = app.add_subcommand("analyze", "fractional monodromy certificate for a loop");
  add_system(an);
  an->add_option("--loop", c.loop, "circle:cJ,cH,r or poly:J1,H1;J2,H2;...")->envname("FRACMON_LOOP");
  add_loop_tols(an);
  add_common(an);

  auto* sc = app.add_subcommand("scan", "critical values of F in a window (CSV)");
  add_system(sc);
  sc->add_option("--window", c.window, "jmin,jmax,hmin,hmax")->envname("FRACMON_WINDOW");
  sc->add_option("--grid", c.grid, "seeds per phase-space axis")->envname("FRACMON_GRID");
  sc->add_option("--tol-gram", c.tol_gram, "Gram determinant acceptance")->envname("FRACMON_TOL_GRAM");
  sc->add_option("--tol-dedupe", c.tol_dedupe, "dedupe radius in the (J,H) plane")->envname("FRACMON_TOL_DEDUPE");
  sc->add_option("--svg", c.svg, "also write an SVG diagram");
  sc->add_option("--loop", c.loop, "loop drawn on the SVG");
  add_common(sc);

  auto* ve = app.add_subcommand("verify", "numerical hygiene and holonomy checks (JSON report)");
  add_system(ve);
  ve->add_option("--samples", c.samples, "random phase points per check")->envname("FRACMON_SAMPLES");
  ve->add_option("--holonomy-loop", c.holonomy_loop, "regular loop for the rotation-number holonomy");
  ve->add_option("--holonomy-csv", c.holonomy_csv, "write station,J,H,T,theta");
  ve->add_option("--stations", c.stations, "initial holonomy stations")->envname("FRACMON_STATIONS");
  ve->add_option("--tol-flow", c.tol_flow, "integrator rtol and atol")->envname("FRACMON_TOL_FLOW");
  add_loop_tols(ve);
  add_common(ve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (*list) return cmd_list_systems(c);
    if (*euler) return cmd_euler(c);
    if (*tr) return cmd_transport(c);
    if (*an) return cmd_analyze(c);
    if (*sc) return cmd_scan(c);
    if (*ve) return cmd_verify(c);
  } catch (const RegularityViolation& e) {
    std::cerr << "regularity violation [" << e.condition() << "]: " << e.what() << "\n";
    return kRegularity;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const OverflowError& e) {
    std::cerr << "overflow: " << e.what() << "\n";
    return kNumeric;
  }
  return kInvalid;
}
