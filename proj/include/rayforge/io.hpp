#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "rayforge/curve.hpp"
#include "rayforge/domains.hpp"
#include "rayforge/rays.hpp"

namespace rayforge {

using Json = nlohmann::json;

/// "re,im" with optional spaces; a bare real is accepted. Throws Parse.
Complex parse_complex(std::string_view text);
/// Shortest text that parses back to the same doubles ("%.17g,%.17g").
std::string format_complex(Complex z);

// CSV "t,re,im", one row per sample, 17 significant digits.

void write_ray_csv(std::ostream& out, std::span<const CurveSample> samples);
std::string ray_csv(std::span<const CurveSample> samples);
/// Throws Parse on a bad header, a malformed row or a non-finite value.
std::vector<CurveSample> read_ray_csv(std::istream& in);
std::vector<CurveSample> parse_ray_csv(std::string_view text);

// JSON. Complex numbers are [re, im] arrays.

Json to_json(Complex z);
Complex complex_from_json(const Json& j);

CycleClass parse_cycle_class(std::string_view text);

Json to_json(const PeriodicPointRecord& p);
PeriodicPointRecord periodic_point_from_json(const Json& j);

/// Keys: address, landing {point, errorBound}, matched (null or a periodic
/// point), gap, residual, converged.
Json to_json(const LandingReport& r);
LandingReport landing_report_from_json(const Json& j);

/// Keys: singularValues, orbits [{verdict, samples, cycle, limitClass}], verdict.
Json to_json(const SingularOrbitReport& r);

/// Keys: punctures, marked, auxiliary, postsingular, conditions [{holds, detail}], admissible.
Json to_json(const ExpansionDomainReport& r);

/// Keys: steps [{iteration, tailSymbol, headGap}], eventualPeriod (null or {start, period}).
Json pullback_json(const std::vector<PullbackStep>& steps, const std::optional<EventualPeriod>& period);

/// dump(2) followed by a newline.
std::string dump_json(const Json& j);

} // namespace rayforge
