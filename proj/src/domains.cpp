#include "rayforge/domains.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rayforge/error.hpp"
#include "rayforge/parallel.hpp"
#include "rayforge/rays.hpp"

namespace rayforge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool near_any(const std::vector<Complex>& set, Complex z, double tol) {
    return std::any_of(set.begin(), set.end(), [&](Complex p) { return std::abs(p - z) <= tol; });
}

void add_unique(std::vector<Complex>& set, Complex z, double tol) {
    if (!near_any(set, z, tol)) set.push_back(z);
}

std::optional<Complex> second_derivative(const MapSpec& map, Complex z) {
    const double h = 1e-5 * std::max(1.0, std::abs(z));
    const auto p = derivative(map, z + h);
    const auto m = derivative(map, z - h);
    if (!p || !m) return std::nullopt;
    return (*p - *m) / (2.0 * h);
}

std::optional<Complex> critical_point(const MapSpec& map, Complex z) {
    for (int it = 0; it < 60; ++it) {
        const auto d1 = derivative(map, z);
        const auto d2 = second_derivative(map, z);
        if (!d1 || !d2 || std::abs(*d2) == 0.0) return std::nullopt;
        const Complex step = *d1 / *d2;
        z -= step;
        if (!is_finite(z)) return std::nullopt;
        if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) {
            const auto check = derivative(map, z);
            if (check && std::abs(*check) < 1e-8) return z;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::vector<Complex> scaled_bf_critical_values(const MapSpec& map, const CriticalSearch& s) {
    const int nr = std::max(1, s.reSeeds);
    const int ni = std::max(1, s.imSeeds);
    std::vector<std::optional<Complex>> found(static_cast<std::size_t>(nr) * ni);
    parallel_for(found.size(), worker_count(), [&](std::size_t idx) {
        const int i = static_cast<int>(idx) / ni;
        const int j = static_cast<int>(idx) % ni;
        const Complex seed{s.box.reMin + (s.box.reMax - s.box.reMin) * (i + 0.5) / nr,
                           s.box.imMin + (s.box.imMax - s.box.imMin) * (j + 0.5) / ni};
        const auto c = critical_point(map, seed);
        if (!c || !s.box.contains(*c)) return;
        const auto v = evaluate(map, *c);
        if (v && std::abs(v->imag()) <= 1e-6) found[idx] = Complex{v->real(), 0.0};
    });
    std::vector<Complex> values;
    for (const auto& v : found) {
        if (v) add_unique(values, *v, 1e-8 * std::max(1.0, std::abs(*v)));
    }
    std::sort(values.begin(), values.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
    return values;
}

std::optional<CycleClass> limit_class(const MapSpec& map, const OrbitRecord& rec) {
    if (rec.cycle.empty()) return std::nullopt;
    Complex mu;
    try {
        mu = cycle_multiplier(map, rec.cycle, 1e-6);
    } catch (const Error&) {
        return std::nullopt;
    }
    CycleClass cls = classify(mu);
    if (rec.verdict == OrbitVerdict::ConvergedToCycle && cls == CycleClass::Attracting &&
        std::abs(std::abs(mu) - 1.0) <= kParabolicBand) {
        cls = CycleClass::Parabolic;
    }
    return cls;
}

std::string format_point(Complex z) {
    std::ostringstream os;
    os.precision(12);
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}

std::vector<Complex> newton_preimages(const MapSpec& map, Complex p) {
    std::vector<Complex> out;
    for (int i = 0; i < 80; ++i) {
        for (int j = 0; j < 10; ++j) {
            Complex z{400.0 * (i + 0.5) / 80.0, -5.0 + 10.0 * (j + 0.5) / 10.0};
            for (int it = 0; it < 50; ++it) {
                const auto fz = evaluate(map, z);
                const auto dz = derivative(map, z);
                if (!fz || !dz || std::abs(*dz) == 0.0) break;
                const Complex step = (*fz - p) / *dz;
                z -= step;
                if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) {
                    add_unique(out, z, 1e-8);
                    break;
                }
            }
        }
    }
    return out;
}

} // namespace

const char* to_string(GeometricVerdict v) noexcept {
    switch (v) {
    case GeometricVerdict::PostsingularlyFinite: return "PostsingularlyFinite";
    case GeometricVerdict::GeometricallyFinite: return "GeometricallyFinite";
    case GeometricVerdict::NotGeometricallyFinite: return "NotGeometricallyFinite";
    case GeometricVerdict::Undecided: return "Undecided";
    }
    return "?";
}

std::vector<Complex> singular_values(const MapSpec& map, const CriticalSearch& search) {
    switch (map.kind()) {
    case FamilyKind::Exp:
        return {Complex{0.0, 0.0}};
    case FamilyKind::Cosine: {
        const auto& c = map.cosine_params();
        const Complex r = 2.0 * std::sqrt(c.a * c.b);
        return {r, -r};
    }
    case FamilyKind::ScaledBF: {
        std::vector<Complex> values{Complex{0.0, 0.0}};
        for (const Complex v : scaled_bf_critical_values(map, search)) add_unique(values, v, 1e-8);
        return values;
    }
    }
    return {};
}

SingularOrbitReport postsingular_analysis(const MapSpec& map, int maxIter, double escapeRadius,
                                          const CriticalSearch& search) {
    if (maxIter < 1) throw Error(ErrorCode::InvalidArgument, "maxIter must be positive");
    SingularOrbitReport report;
    report.singularValues = singular_values(map, search);
    bool allLanded = true;
    bool allFinite = true;
    bool anyEscaping = false;
    for (const Complex v : report.singularValues) {
        OrbitRecord rec = orbit(map, v, maxIter, escapeRadius);
        if (rec.verdict == OrbitVerdict::Undecided && !rec.exceededRadius) {
            rec = orbit(map, v, maxIter * kParabolicPatience, escapeRadius);
        }
        const auto cls = limit_class(map, rec);
        switch (rec.verdict) {
        case OrbitVerdict::LandedOnCycle:
            break;
        case OrbitVerdict::ConvergedToCycle:
            allLanded = false;
            if (!cls || *cls == CycleClass::Repelling || *cls == CycleClass::IrrationallyIndifferent) {
                allFinite = false;
            }
            break;
        case OrbitVerdict::Escaping:
            anyEscaping = true;
            allLanded = false;
            allFinite = false;
            break;
        case OrbitVerdict::Undecided:
            allLanded = false;
            allFinite = false;
            break;
        }
        report.perValue.push_back(std::move(rec));
        report.limitClass.push_back(cls);
    }
    if (allLanded) {
        report.verdict = GeometricVerdict::PostsingularlyFinite;
    } else if (allFinite) {
        report.verdict = GeometricVerdict::GeometricallyFinite;
    } else if (anyEscaping) {
        report.verdict = GeometricVerdict::NotGeometricallyFinite;
    } else {
        report.verdict = GeometricVerdict::Undecided;
    }
    return report;
}

// ---------------------------------------------------------------------------

MapModel model_of(const MapSpec& map) {
    MapModel model;
    model.f = [map](Complex z) { return evaluate(map, z); };
    model.preimages = [map](Complex p) -> std::vector<Complex> {
        std::vector<Complex> out;
        auto branches = [&](Complex u) {
            if (u == Complex{0.0, 0.0} || !is_finite(u)) return;
            const Complex base = std::log(u);
            for (int j = -1; j <= 1; ++j) out.push_back(base + Complex{0.0, kTwoPi * j});
        };
        switch (map.kind()) {
        case FamilyKind::Exp:
            branches(p / map.exp().lambda);
            break;
        case FamilyKind::Cosine: {
            const auto& c = map.cosine_params();
            const Complex disc = std::sqrt(p * p - 4.0 * c.a * c.b);
            branches((p + disc) / (2.0 * c.a));
            branches((p - disc) / (2.0 * c.a));
            break;
        }
        case FamilyKind::ScaledBF:
            out = newton_preimages(map, p);
            break;
        }
        return out;
    };
    return model;
}

ExpansionDomainReport validate_expansion_domain(const MapModel& model, const DomainSpec& domain,
                                                const std::vector<Complex>& postsingularSet) {
    ExpansionDomainReport report;
    report.domain = domain;
    report.postsingularSet = postsingularSet;
    const auto& P = domain.punctures;

    auto& a = report.conditions[0];
    a.holds = domain.markedFixedPoint.has_value() && near_any(P, *domain.markedFixedPoint, kPunctureSeparation);
    a.detail = a.holds ? "infinity isolated, marked point excluded" : "marked point is not a puncture";

    auto& b = report.conditions[1];
    b.holds = true;
    for (const Complex p : P) {
        const auto fp = model.f(p);
        if (!fp || !near_any(P, *fp, kInvarianceTol * std::max(1.0, std::abs(*fp)))) {
            b.holds = false;
            b.detail = "image of puncture " + format_point(p) + " is not a puncture";
            break;
        }
    }
    if (b.holds) {
        std::optional<Complex> witness;
        for (const Complex p : P) {
            for (const Complex q : model.preimages(p)) {
                const auto fq = model.f(q);
                if (!fq || std::abs(*fq - p) > kInvarianceTol * std::max(1.0, std::abs(p))) continue;
                if (!near_any(P, q, kInvarianceTol * std::max(1.0, std::abs(q)))) {
                    witness = q;
                    break;
                }
            }
            if (witness) break;
        }
        b.holds = witness.has_value();
        b.detail = witness ? "strict, preimage " + format_point(*witness) + " outside the punctures"
                           : "no preimage of a puncture outside the punctures";
    }

    auto& c = report.conditions[2];
    bool equalsPostsingular = P.size() == postsingularSet.size();
    for (const Complex p : P) {
        equalsPostsingular = equalsPostsingular && near_any(postsingularSet, p, kPunctureSeparation);
    }
    c.holds = !equalsPostsingular;
    c.detail = c.holds ? "finitely connected, differs from the postsingular complement"
                       : "domain equals the complement of the postsingular set";

    auto& d = report.conditions[3];
    d.holds = P.size() >= 2;
    d.detail = "isolated punctures are accessible";
    return report;
}

ExpansionDomainReport build_expansion_domain(const MapSpec& map, Complex z0,
                                             const SingularOrbitReport& report,
                                             const AuxiliarySearch& search) {
    if (report.verdict != GeometricVerdict::PostsingularlyFinite) {
        throw Error(ErrorCode::NotPostsingularlyFinite,
                    std::string("singular orbits: ") + to_string(report.verdict));
    }
    const auto fz0 = evaluate(map, z0);
    if (!fz0 || std::abs(*fz0 - z0) >= 1e-10 * std::max(1.0, std::abs(z0))) {
        throw Error(ErrorCode::NotAFixedPoint, "z0 is not fixed");
    }
    const auto mu = derivative(map, z0);
    if (!mu || !(std::abs(*mu) > 1.0 + kClassifyEpsilon)) {
        throw Error(ErrorCode::NotRepelling, "z0 is not repelling");
    }

    std::vector<Complex> P;
    for (const auto& rec : report.perValue) {
        const std::size_t end = rec.verdict == OrbitVerdict::LandedOnCycle
                                    ? std::min(rec.samples.size(), rec.landingIndex + 1)
                                    : rec.samples.size();
        for (std::size_t i = 0; i < end; ++i) add_unique(P, rec.samples[i], 1e-9);
        for (const Complex q : rec.cycle) add_unique(P, q, 1e-9);
    }

    bool z0Postsingular = false;
    for (const Complex p : P) {
        const double gap = std::abs(p - z0);
        if (gap <= 1e-9) {
            z0Postsingular = true;
        } else if (gap < kDegenerateSeparation) {
            throw Error(ErrorCode::DegenerateInput, "postsingular point within 1e-6 of z0");
        }
    }

    std::vector<Complex> punctures = P;
    std::optional<Complex> aux;
    if (z0Postsingular) {
        SearchBox box = search.box;
        if (box.degenerate()) box = {z0.real() - 8.0, z0.real() + 8.0, z0.imag() - 8.0, z0.imag() + 8.0};
        auto fixed = find_periodic_points(map, 1, box, search.gridDensity);
        std::stable_sort(fixed.begin(), fixed.end(), [&](const auto& x, const auto& y) {
            return std::abs(x.point - z0) < std::abs(y.point - z0);
        });
        for (const auto& rec : fixed) {
            if (rec.cls != CycleClass::Repelling) continue;
            if (near_any(P, rec.point, kDegenerateSeparation)) continue;
            aux = rec.point;
            break;
        }
        if (!aux) throw Error(ErrorCode::NoAuxiliaryFixedPoint, "no repelling fixed point outside P(f)");
        punctures.push_back(*aux);
    } else {
        punctures.push_back(z0);
    }

    ExpansionDomainReport out = validate_expansion_domain(model_of(map), make_domain(punctures, z0), P);
    out.auxiliaryFixedPoint = aux;
    return out;
}

DomainSpec interval_domain(Complex z0, double yMax) {
    if (!(yMax > 0.0)) throw Error(ErrorCode::DegenerateInput, "interval must have positive length");
    std::vector<Complex> punctures;
    for (int k = 0; k < kIntervalPunctures; ++k) {
        const Complex p{yMax * k / (kIntervalPunctures - 1), 0.0};
        if (std::abs(p - z0) < kDegenerateSeparation) {
            throw Error(ErrorCode::DegenerateInput, "z0 lies on the interval");
        }
        punctures.push_back(p);
    }
    punctures.push_back(z0);
    return make_domain(std::move(punctures), z0);
}

Complex cosine_psf_parameter() {
    const Complex target{0.0, kTwoPi};
    Complex b{2.0, 2.0};
    for (int it = 0; it < 100; ++it) {
        const Complex g = b * (std::cosh(b) - 1.0) - target;
        const Complex dg = std::cosh(b) - 1.0 + b * std::sinh(b);
        const Complex step = g / dg;
        b -= step;
        if (std::abs(step) < 1e-15 * std::abs(b)) break;
    }
    return b / 2.0;
}

} // namespace rayforge
