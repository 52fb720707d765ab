#include "rayforge/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rayforge {

const char* to_string(CurveKind kind) noexcept {
    switch (kind) {
    case CurveKind::Leg: return "Leg";
    case CurveKind::RayTail: return "RayTail";
    case CurveKind::Ray: return "Ray";
    }
    return "?";
}

double segment_distance(Complex z, Complex a, Complex b) noexcept {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(z - a);
    const double u = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(z - (a + u * ab));
}

double polyline_distance(Complex z, std::span<const CurveSample> samples) noexcept {
    if (samples.empty()) return std::numeric_limits<double>::infinity();
    if (samples.size() == 1) return std::abs(z - samples.front().z);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        best = std::min(best, segment_distance(z, samples[k].z, samples[k + 1].z));
    }
    return best;
}

std::size_t nearest_segment(Complex z, std::span<const CurveSample> samples) noexcept {
    std::size_t best = 0;
    double bestDist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        const double d = segment_distance(z, samples[k].z, samples[k + 1].z);
        if (d < bestDist) {
            bestDist = d;
            best = k;
        }
    }
    return best;
}

namespace {

double directed_in_disk(const Curve& from, const Curve& to, Complex center, double radius) {
    double worst = 0.0;
    for (const auto& s : from.samples) {
        if (std::abs(s.z - center) <= radius) {
            worst = std::max(worst, polyline_distance(s.z, to.samples));
        }
    }
    return worst;
}

} // namespace

double hausdorff_in_disk(const Curve& a, const Curve& b, Complex center, double radius) {
    return std::max(directed_in_disk(a, b, center, radius), directed_in_disk(b, a, center, radius));
}

void drop_coincident(std::vector<CurveSample>& samples) {
    if (samples.empty()) return;
    std::size_t kept = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (std::abs(samples[i].z - samples[kept].z) > kMinSeparation) samples[++kept] = samples[i];
    }
    samples.resize(kept + 1);
}

} // namespace rayforge
