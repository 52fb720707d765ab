#include "rayforge/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "rayforge/error.hpp"

namespace rayforge {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
        throw Error(ErrorCode::Parse, "not a finite number: '" + std::string(s) + "'");
    }
    return v;
}

void append_double(std::string& out, double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.append(buf, static_cast<std::size_t>(n));
}

Json optional_class(const std::optional<CycleClass>& c) {
    return c ? Json(to_string(*c)) : Json(nullptr);
}

} // namespace

Complex parse_complex(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) return {parse_double(text), 0.0};
    return {parse_double(text.substr(0, comma)), parse_double(text.substr(comma + 1))};
}

std::string format_complex(Complex z) {
    std::string out;
    append_double(out, z.real());
    out += ',';
    append_double(out, z.imag());
    return out;
}

void write_ray_csv(std::ostream& out, std::span<const CurveSample> samples) {
    out << ray_csv(samples);
}

std::string ray_csv(std::span<const CurveSample> samples) {
    std::string out = "t,re,im\n";
    for (const auto& s : samples) {
        append_double(out, s.t);
        out += ',';
        out += format_complex(s.z);
        out += '\n';
    }
    return out;
}

std::vector<CurveSample> read_ray_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "t,re,im") {
        throw Error(ErrorCode::Parse, "expected CSV header 't,re,im'");
    }
    std::vector<CurveSample> samples;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        const std::string_view s = trim(line);
        if (s.empty()) continue;
        const auto c1 = s.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : s.find(',', c1 + 1);
        if (c2 == std::string_view::npos || s.find(',', c2 + 1) != std::string_view::npos) {
            throw Error(ErrorCode::Parse, "row " + std::to_string(row) + ": expected three fields");
        }
        samples.push_back({parse_double(s.substr(0, c1)),
                           {parse_double(s.substr(c1 + 1, c2 - c1 - 1)), parse_double(s.substr(c2 + 1))}});
    }
    return samples;
}

std::vector<CurveSample> parse_ray_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    return read_ray_csv(in);
}

// ---------------------------------------------------------------------------

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw Error(ErrorCode::Parse, "expected [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

CycleClass parse_cycle_class(std::string_view text) {
    for (const CycleClass c : {CycleClass::Attracting, CycleClass::Superattracting, CycleClass::Repelling,
                               CycleClass::Parabolic, CycleClass::IrrationallyIndifferent}) {
        if (text == to_string(c)) return c;
    }
    throw Error(ErrorCode::Parse, "unknown cycle class '" + std::string(text) + "'");
}

Json to_json(const PeriodicPointRecord& p) {
    return Json{{"point", to_json(p.point)},
                {"period", p.period},
                {"multiplier", to_json(p.multiplier)},
                {"class", to_string(p.cls)},
                {"residual", p.residual}};
}

PeriodicPointRecord periodic_point_from_json(const Json& j) {
    try {
        PeriodicPointRecord p;
        p.point = complex_from_json(j.at("point"));
        p.period = j.at("period").get<int>();
        p.multiplier = complex_from_json(j.at("multiplier"));
        p.cls = parse_cycle_class(j.at("class").get<std::string>());
        p.residual = j.at("residual").get<double>();
        return p;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::Parse, e.what());
    }
}

Json to_json(const LandingReport& r) {
    return Json{{"address", format_address(r.rayAddress)},
                {"landing", {{"point", to_json(r.landingEstimate)}, {"errorBound", r.errorBound}}},
                {"matched", r.matchedPeriodicPoint ? to_json(*r.matchedPeriodicPoint) : Json(nullptr)},
                {"gap", r.gap},
                {"residual", r.functionalResidual},
                {"converged", r.converged}};
}

LandingReport landing_report_from_json(const Json& j) {
    try {
        LandingReport r;
        r.rayAddress = parse_address(j.at("address").get<std::string>());
        r.landingEstimate = complex_from_json(j.at("landing").at("point"));
        r.errorBound = j.at("landing").at("errorBound").get<double>();
        if (!j.at("matched").is_null()) r.matchedPeriodicPoint = periodic_point_from_json(j.at("matched"));
        r.gap = j.at("gap").get<double>();
        r.functionalResidual = j.at("residual").get<double>();
        r.converged = j.at("converged").get<bool>();
        return r;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::Parse, e.what());
    }
}

Json to_json(const SingularOrbitReport& r) {
    Json values = Json::array();
    for (const Complex v : r.singularValues) values.push_back(to_json(v));
    Json orbits = Json::array();
    for (std::size_t i = 0; i < r.perValue.size(); ++i) {
        const auto& rec = r.perValue[i];
        Json samples = Json::array();
        const std::size_t shown = std::min<std::size_t>(rec.samples.size(), 64);
        for (std::size_t k = 0; k < shown; ++k) samples.push_back(to_json(rec.samples[k]));
        Json cycle = Json::array();
        for (const Complex c : rec.cycle) cycle.push_back(to_json(c));
        orbits.push_back({{"verdict", to_string(rec.verdict)},
                          {"iterations", rec.samples.size()},
                          {"samples", std::move(samples)},
                          {"cycle", std::move(cycle)},
                          {"limitClass", i < r.limitClass.size() ? optional_class(r.limitClass[i]) : Json(nullptr)}});
    }
    return Json{{"singularValues", std::move(values)}, {"orbits", std::move(orbits)}, {"verdict", to_string(r.verdict)}};
}

Json to_json(const ExpansionDomainReport& r) {
    Json punctures = Json::array();
    for (const Complex p : r.domain.punctures) punctures.push_back(to_json(p));
    Json post = Json::array();
    for (const Complex p : r.postsingularSet) post.push_back(to_json(p));
    Json conditions = Json::array();
    for (const auto& c : r.conditions) conditions.push_back({{"holds", c.holds}, {"detail", c.detail}});
    return Json{{"punctures", std::move(punctures)},
                {"marked", r.domain.markedFixedPoint ? to_json(*r.domain.markedFixedPoint) : Json(nullptr)},
                {"auxiliary", r.auxiliaryFixedPoint ? to_json(*r.auxiliaryFixedPoint) : Json(nullptr)},
                {"postsingular", std::move(post)},
                {"conditions", std::move(conditions)},
                {"admissible", r.admissible()}};
}

Json pullback_json(const std::vector<PullbackStep>& steps, const std::optional<EventualPeriod>& period) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < steps.size(); ++i) {
        arr.push_back({{"iteration", i},
                       {"tailSymbol", steps[i].tailSymbol ? Json(*steps[i].tailSymbol) : Json(nullptr)},
                       {"headGap", steps[i].headGap}});
    }
    Json ep = period ? Json{{"start", period->start}, {"period", period->period}} : Json(nullptr);
    return Json{{"steps", std::move(arr)}, {"eventualPeriod", std::move(ep)}};
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

} // namespace rayforge
