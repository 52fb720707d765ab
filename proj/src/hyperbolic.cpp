#include "rayforge/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rayforge/error.hpp"

namespace rayforge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double puncture_distance(const DomainSpec& d, Complex z) {
    double best = kInf;
    for (const Complex p : d.punctures) best = std::min(best, std::abs(z - p));
    return best;
}

} // namespace

DomainSpec make_domain(std::vector<Complex> punctures, std::optional<Complex> marked) {
    if (punctures.size() < 2) throw Error(ErrorCode::DegenerateInput, "need at least two punctures");
    for (std::size_t i = 0; i < punctures.size(); ++i) {
        if (!is_finite(punctures[i])) throw Error(ErrorCode::DegenerateInput, "non-finite puncture");
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(punctures[i] - punctures[j]) <= kPunctureSeparation) {
                throw Error(ErrorCode::DegenerateInput, "punctures are not distinct");
            }
        }
    }
    if (marked) {
        const bool listed = std::any_of(punctures.begin(), punctures.end(), [&](Complex p) {
            return std::abs(p - *marked) <= kPunctureSeparation;
        });
        if (!listed) throw Error(ErrorCode::DegenerateInput, "marked point is not a puncture");
    }
    return {std::move(punctures), marked};
}

bool simply_connected(const Region& region) noexcept {
    return !std::holds_alternative<DomainSpec>(region);
}

double boundary_distance(const Region& region, Complex z) {
    struct Visitor {
        Complex z;
        double operator()(const DomainSpec& d) const { return puncture_distance(d, z); }
        double operator()(const DiskRegion& d) const { return d.radius - std::abs(z - d.center); }
        double operator()(const HalfPlaneRegion& h) const {
            const Complex n = h.normal / std::abs(h.normal);
            return (std::conj(n) * (z - h.point)).real();
        }
        double operator()(const StripRegion& s) const {
            double d = std::min(z.imag() - s.imLow, s.imHigh - z.imag());
            if (s.reMin) d = std::min(d, z.real() - *s.reMin);
            return d;
        }
    };
    return std::visit(Visitor{z}, region);
}

DensityInterval density_bounds(const Region& region, Complex z) {
    const double d = boundary_distance(region, z);
    if (!(d > kBoundaryTolerance)) throw Error(ErrorCode::OnBoundary, "point on or outside the boundary");
    DensityInterval out;
    out.upper = 2.0 / d;
    out.simplyConnectedLowerValid = simply_connected(region);
    if (out.simplyConnectedLowerValid) out.lower = 1.0 / (2.0 * d);
    return out;
}

LengthBounds curve_length_bounds(const Region& region, std::span<const CurveSample> polyline) {
    LengthBounds result;
    if (polyline.size() < 2) return result;
    const bool sc = simply_connected(region);
    auto distance = [&](Complex z) {
        const double d = boundary_distance(region, z);
        if (!(d > kBoundaryTolerance)) throw Error(ErrorCode::OnBoundary, "polyline touches the boundary");
        return d;
    };

    double prevLower = 0.0;
    double prevUpper = 0.0;
    for (int level = 0; level <= 12; ++level) {
        const int pieces = 1 << level;
        double lower = 0.0;
        double upper = 0.0;
        for (std::size_t k = 0; k + 1 < polyline.size(); ++k) {
            const Complex a0 = polyline[k].z;
            const Complex step = (polyline[k + 1].z - a0) / static_cast<double>(pieces);
            const double len = std::abs(step);
            if (len == 0.0) continue;
            double da = distance(a0);
            for (int i = 0; i < pieces; ++i) {
                const Complex b = a0 + static_cast<double>(i + 1) * step;
                const double dm = distance(a0 + (static_cast<double>(i) + 0.5) * step);
                const double db = distance(b);
                const double dmin = std::min({da, dm, db}) - len / 4.0;
                const double dmax = std::max({da, dm, db}) + len / 4.0;
                upper += dmin > 0.0 ? 2.0 * len / dmin : kInf;
                if (sc) lower += len / (2.0 * dmax);
                da = db;
            }
        }
        result = {lower, upper, level};
        if (level > 0 && std::isfinite(upper) && std::abs(upper - prevUpper) <= 0.01 * upper &&
            std::abs(lower - prevLower) <= 0.01 * std::max(lower, std::numeric_limits<double>::min())) {
            break;
        }
        prevLower = lower;
        prevUpper = upper;
    }
    return result;
}

// ---------------------------------------------------------------------------

double eta_bound(const DomainSpec& U, const Region& V, Complex z) {
    return (2.0 / puncture_distance(U, z)) * (2.0 * boundary_distance(V, z));
}

namespace {

std::vector<Complex> puncture_preimages(const MapSpec& map, Complex p) {
    std::vector<Complex> out;
    auto add_branches = [&](Complex u) {
        if (u == Complex{0.0, 0.0} || !is_finite(u)) return;
        const Complex base = std::log(u);
        for (int j = -kPreimageIndexBound; j <= kPreimageIndexBound; ++j) {
            out.push_back(base + Complex{0.0, kTwoPi * j});
        }
    };
    if (map.kind() == FamilyKind::Exp) {
        add_branches(p / map.exp().lambda);
    } else {
        const auto& c = map.cosine_params();
        const Complex disc = std::sqrt(p * p - 4.0 * c.a * c.b);
        add_branches((p + disc) / (2.0 * c.a));
        add_branches((p - disc) / (2.0 * c.a));
    }
    return out;
}

} // namespace

ContractionCertificate contraction_certificate(const PartitionSpec& partition, const DomainSpec& U,
                                               Complex z) {
    const MapSpec& map = partition.map();
    const auto w = evaluate(map, z);
    if (w && puncture_distance(U, *w) <= kPunctureSeparation) {
        throw Error(ErrorCode::NotInPreimage, "f(z) is a puncture of U");
    }
    ContractionCertificate cert;
    cert.distU = puncture_distance(U, z);

    std::optional<Region> V;
    if (const auto s = partition.symbol_of(z)) {
        const double c = partition.tract_cutoff();
        if (map.kind() == FamilyKind::Exp) {
            const double lo = kPi - std::arg(map.exp().lambda) + kTwoPi * static_cast<double>(*s - 1);
            V = StripRegion{lo, lo + kTwoPi, c};
        } else if (z.real() > 0.0) {
            V = HalfPlaneRegion{{c, 0.0}, {1.0, 0.0}};
        } else {
            V = HalfPlaneRegion{{-c, 0.0}, {-1.0, 0.0}};
        }
    }

    cert.distV = V ? boundary_distance(*V, z) : kInf;
    cert.simplyConnected = V.has_value();
    for (const Complex p : U.punctures) {
        for (const Complex q : puncture_preimages(map, p)) {
            cert.distV = std::min(cert.distV, std::abs(z - q));
            if (V && boundary_distance(*V, q) > 0.0) cert.simplyConnected = false;
        }
    }
    cert.etaBound = (2.0 / cert.distU) * (2.0 * cert.distV);
    cert.certified = cert.simplyConnected && cert.etaBound < 1.0;
    return cert;
}

// ---------------------------------------------------------------------------

HorosphereResult horosphere_check(const PlaneMap& f, Complex multiplier, Complex z0, double delta,
                                  int nSamples) {
    if (!(delta > 0.0) || nSamples < 1) throw Error(ErrorCode::InvalidArgument, "bad horosphere input");
    const auto fz0 = f(z0);
    if (!fz0 || std::abs(*fz0 - z0) >= 1e-10) throw Error(ErrorCode::NotAFixedPoint, "z0 is not fixed");
    if (!(std::abs(multiplier) > 1.0)) throw Error(ErrorCode::NotRepelling, "z0 is not repelling");

    HorosphereResult result;
    result.modeled = delta <= kHorosphereModelRadius;
    result.holds = true;
    double d = delta;
    for (double& ratio : result.minRatio) {
        ratio = kInf;
        for (int k = 0; k < nSamples; ++k) {
            const Complex z = z0 + std::polar(d, kTwoPi * k / nSamples);
            const auto fz = f(z);
            if (fz) ratio = std::min(ratio, std::abs(*fz - z0) / d);
        }
        result.holds = result.holds && ratio > 1.0 + kHorosphereMargin;
        d /= 2.0;
    }
    return result;
}

HorosphereResult horosphere_check(const MapSpec& map, Complex z0, double delta, int nSamples) {
    const auto mu = derivative(map, z0);
    if (!mu) throw Error(ErrorCode::NotAFixedPoint, "derivative overflowed at z0");
    return horosphere_check([&](Complex z) { return evaluate(map, z); }, *mu, z0, delta, nSamples);
}

// ---------------------------------------------------------------------------

PreimageSequence preimage_sequence(const MapSpec& map, Complex w, int count, int firstIndex) {
    if (count < 2) throw Error(ErrorCode::InvalidArgument, "count must be >= 2");
    Complex base;
    switch (map.kind()) {
    case FamilyKind::Exp:
        if (w == Complex{0.0, 0.0}) throw Error(ErrorCode::OmittedValue, "0 is omitted by exp");
        base = std::log(w / map.exp().lambda);
        break;
    case FamilyKind::Cosine: {
        const auto& c = map.cosine_params();
        const Complex disc = std::sqrt(w * w - 4.0 * c.a * c.b);
        const Complex q = std::norm(w + disc) >= std::norm(w - disc) ? w + disc : w - disc;
        base = std::log(q / (2.0 * c.a));
        break;
    }
    case FamilyKind::ScaledBF:
        throw Error(ErrorCode::UnsupportedFamily, "no closed-form preimages for " + map.describe());
    }

    // Arg in (-pi, pi] regardless of the sign of a zero imaginary part.
    if (base.imag() <= -kPi) base.imag(kPi);

    PreimageSequence seq;
    for (int j = firstIndex; j < firstIndex + count; ++j) {
        seq.points.push_back(base + Complex{0.0, kTwoPi * j});
    }
    std::stable_sort(seq.points.begin(), seq.points.end(),
                     [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
    for (const Complex p : seq.points) {
        const auto fp = evaluate(map, p);
        const double r = fp ? std::abs(*fp - w) : kInf;
        seq.maxResidual = std::max(seq.maxResidual, r);
    }
    if (!(seq.maxResidual < 1e-9 * std::max(1.0, std::abs(w)))) {
        throw Error(ErrorCode::NotConverged, "preimage residual above 1e-9");
    }
    for (std::size_t j = 0; j + 1 < seq.points.size(); ++j) {
        const double r = std::abs(seq.points[j + 1]) / std::abs(seq.points[j]);
        seq.ratios.push_back(r);
        seq.K = std::max(seq.K, r);
    }
    return seq;
}

} // namespace rayforge
