#ifndef FRACMON_REPORT_HPP
#define FRACMON_REPORT_HPP

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracmon/monodromy.hpp"
#include "fracmon/numverify.hpp"
#include "fracmon/seifert.hpp"
#include "fracmon/systems.hpp"

namespace fracmon {

using Json = nlohmann::ordered_json;

// Rationals serialize as strings ("1/2"); matrices as rows of strings.
Json to_json(const Rational& r);
Json to_json(const MonodromyMatrixQ& m);
Json to_json(const Lattice2& l);  // generators, one per row
Json to_json(const WeightedFixedPoint& p);
Json to_json(const SeifertData& s);
Json to_json(const Crossing& c);
Json to_json(const Regularity& r);
Json to_json(const MonodromyCertificate& c);
Json to_json(const HolonomyTrace& t);

/// Catalog entry for list-systems: id, parameters, fixed points, strata.
Json describe_system(const SystemModel& s);

/// Pretty JSON; reals print as the shortest decimal that reads back to the
/// same double (at most 17 significant digits).
std::string dump(const Json& j);

/// J,H,x1..xd,gram_det; one row per critical point.
void write_scan_csv(std::ostream& os, const ScanResult& r);
/// station,J,H,T,theta.
void write_holonomy_csv(std::ostream& os, const HolonomyTrace& t);

/// Static bifurcation-diagram SVG: critical values, stratum images,
/// fixed-point images and an optional loop, clipped to the window.
void write_scan_svg(std::ostream& os, const SystemModel& s, const ScanResult& r, const Window& w,
                    const LoopSpec* loop = nullptr);

}  // namespace fracmon

#endif  // FRACMON_REPORT_HPP
