#pragma once

#include <optional>
#include <vector>

#include "rayforge/core.hpp"
#include "rayforge/curve.hpp"
#include "rayforge/symbolic.hpp"

namespace rayforge {

inline constexpr double kFarReach = 40.0;

struct TraceOptions {
    /// Spacing in Re z between the initial guesses of consecutive levels.
    double anchorSpacing = 1.0;
    int maxSweeps = 200;
    double tolerance = 1e-12;
};

/// A periodic dynamic ray computed by pulling back the far end of the ray with
/// the composite inverse branch G = L_{s_0} o ... o L_{s_{n-1}}.
///
/// Level j (0 <= j < depth) carries `samplesPerLevel` samples with
/// t = 2^(j + i/samplesPerLevel). The top level joins G(P) to P, where P lies
/// in F_{s_0} at |Re z| ~ e^kFarReach, along straight segments far enough out
/// that the ray is horizontal there to double precision; every lower level is
/// G applied to the level above. Hence f^n maps the sample at t onto the
/// sample at 2t.
class PeriodicRay {
public:
    PeriodicRay(const PartitionSpec& partition, ExternalAddress address, int depth,
                int samplesPerLevel, const TraceOptions& options = {});

    [[nodiscard]] const Curve& curve() const noexcept { return curve_; }
    [[nodiscard]] const ExternalAddress& address() const noexcept { return address_; }
    [[nodiscard]] int period() const noexcept { return static_cast<int>(address_.period.size()); }

    /// Point of the ray at log2(t) = s, for s in [0, depth].
    [[nodiscard]] Complex at(double s) const;

    /// Distance from z to the ray, refined between samples by evaluating the
    /// ray itself rather than its polyline.
    [[nodiscard]] double distance(Complex z) const;

    /// One application of G.
    [[nodiscard]] Complex pull_back(Complex w) const;

private:
    [[nodiscard]] Complex top_segment(double u) const;
    [[nodiscard]] Complex far_point(std::size_t k) const;

    PartitionSpec partition_;
    ExternalAddress address_;
    int depth_;
    int samplesPerLevel_;
    Complex top_;    // P
    Complex bottom_; // G(P)
    Curve curve_;
};

/// Throws UnsupportedFamily (via the partition), InvalidArgument for
/// preperiodic addresses or depth < 10. A curve with converged == false is
/// returned when the pullback sweeps do not settle.
Curve trace_ray(const PartitionSpec& partition, const ExternalAddress& address, int depth,
                int samplesPerLevel = 16, const TraceOptions& options = {});

/// Preperiodic rays: the ray of the periodic part is traced and then pulled
/// back along the preperiod by continuation from its tail.
Curve trace_preperiodic_ray(const PartitionSpec& partition, const ExternalAddress& address,
                            int depth, int samplesPerLevel = 16);

/// Max over interior samples (index 1..size-2 with 2t <= t_last) of the
/// distance from w = f^n(sample) to the ray polyline, divided by max(1, |w|)
/// since the far samples sit where f has absolute rounding error ~ |w| eps.
double functional_residual(const MapSpec& map, const Curve& ray, int period);

struct LandingEstimate {
    Complex estimate;
    double errorBound = 0.0;
    Complex multiplier; // (f^n)' at the estimate
    bool parabolic = false;
};

inline constexpr double kParabolicBand = 1e-3;

/// Extrapolates lim_{t->0} of the ray by pulling back its head with the local
/// inverse of f^n. Throws DivergentHead when the heads are not Cauchy.
LandingEstimate landing_point(const Curve& ray, const MapSpec& map, int period);

struct LandingReport {
    ExternalAddress rayAddress;
    Complex landingEstimate;
    double errorBound = 0.0;
    std::optional<PeriodicPointRecord> matchedPeriodicPoint;
    double gap = 0.0;
    double functionalResidual = 0.0;
    bool converged = false;
};

inline constexpr double kRepellingLandingTol = 1e-6;
inline constexpr double kParabolicLandingTol = 1e-3;
inline constexpr double kFunctionalResidualTol = 1e-6;

struct LandingOptions {
    int depth = 40;
    int samplesPerLevel = 16;
};

LandingReport verify_landing(const PartitionSpec& partition, const ExternalAddress& address,
                             const std::vector<PeriodicPointRecord>& periodicPoints,
                             const LandingOptions& options = {});

// ---------------------------------------------------------------------------
// Legs and the leg map
// ---------------------------------------------------------------------------

struct LegOptions {
    /// Maximum distance between consecutive output samples within
    /// `refineRadius` of the fixed point.
    double maxSpacing = 1e-3;
    double refineRadius = 2.0;
    /// Spacing between refineRadius and midRadius.
    double midRadius = 6.0;
    double midSpacing = 0.01;
    /// Maximum spacing elsewhere.
    double farSpacing = 0.05;
    /// Before pulling back, the leg is continued horizontally outwards far
    /// enough that its preimage reaches |Re z| = tailReach (0 disables).
    double tailReach = 40.0;
    double tailStep = 0.5;
    int maxAmbiguityBisections = 20;
    int maxSpacingBisections = 30;
    double ambiguityFactor = 3.0;
};

/// The leg map: the preimage of `leg` anchored at the fixed point z0.
/// Throws NotAFixedPoint, InvalidArgument (leg not anchored at z0, z0
/// critical) or ContinuationAmbiguous.
Curve leg_pullback(const MapSpec& map, const Curve& leg, Complex z0, const LegOptions& options = {});

/// Straight leg z0 + s * direction, s in [0, length], with `count` samples.
Curve straight_leg(Complex z0, Complex direction, double length, int count);

/// Leg through the given vertices (first vertex = z0), each edge sampled with
/// spacing at most `step`.
Curve polyline_leg(const std::vector<Complex>& vertices, double step);

std::optional<Symbol> tail_symbol(const PartitionSpec& partition, const Curve& curve);

struct PullbackStep {
    Curve curve;
    std::optional<Symbol> tailSymbol;
    double headGap = 0.0;
};

/// Iterates the leg map `iterations` times. headGap is the distance of the
/// leg's first interior sample (tracked through the local inverse branch at
/// z0, in coordinates centred at z0) from z0.
std::vector<PullbackStep> pullback_sequence(const PartitionSpec& partition, Complex z0,
                                            const Curve& leg, int iterations,
                                            const LegOptions& options = {});

/// Hausdorff distance between the part of `leg` inside the disk
/// |z - center| <= radius and the ray: leg samples are measured against the
/// ray itself (PeriodicRay::distance), ray samples inside the disk against
/// the leg polyline.
double head_hausdorff(const Curve& leg, const PeriodicRay& ray, Complex center, double radius);

/// Smallest p such that the symbol sequence is periodic with period p from
/// some index on, with at least three full repetitions observed and no
/// missing symbols in that stretch; nullopt when no such structure is visible.
struct EventualPeriod {
    std::size_t start = 0;
    std::size_t period = 1;
};
std::optional<EventualPeriod> eventual_period(const std::vector<std::optional<Symbol>>& symbols);

} // namespace rayforge
