#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rayforge/core.hpp"
#include "rayforge/symbolic.hpp"

namespace rayforge {

enum class CurveKind { Leg, RayTail, Ray };

const char* to_string(CurveKind kind) noexcept;

struct CurveSample {
    double t = 0.0;
    Complex z;
};

/// Sampled parametrized curve. Samples have strictly increasing t and
/// consecutive points at least kMinSeparation apart.
struct Curve {
    CurveKind kind = CurveKind::Ray;
    std::vector<CurveSample> samples;
    std::optional<Complex> anchor;
    std::optional<Symbol> tailSymbol;
    /// False when the construction stopped before meeting its tolerance.
    bool converged = true;

    [[nodiscard]] bool empty() const noexcept { return samples.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
    [[nodiscard]] const CurveSample& front() const { return samples.front(); }
    [[nodiscard]] const CurveSample& back() const { return samples.back(); }
};

inline constexpr double kMinSeparation = 1e-14;

/// Euclidean distance from z to the segment [a, b].
double segment_distance(Complex z, Complex a, Complex b) noexcept;

/// Distance from z to the polyline through the samples ("tube distance").
/// A single sample is treated as a point.
double polyline_distance(Complex z, std::span<const CurveSample> samples) noexcept;

/// Index k of the segment [k, k+1] nearest to z (0 for single samples).
std::size_t nearest_segment(Complex z, std::span<const CurveSample> samples) noexcept;

/// Symmetric Hausdorff distance between the polylines of a and b restricted
/// to the disk |z - center| <= radius: samples of either curve inside the
/// disk are measured against the full polyline of the other.
double hausdorff_in_disk(const Curve& a, const Curve& b, Complex center, double radius);

/// Drops samples closer than kMinSeparation to the previously kept one.
void drop_coincident(std::vector<CurveSample>& samples);

} // namespace rayforge
