#pragma once

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rayforge/core.hpp"
#include "rayforge/curve.hpp"
#include "rayforge/symbolic.hpp"

namespace rayforge {

/// The plane minus finitely many punctures (and infinity).
struct DomainSpec {
    std::vector<Complex> punctures;
    std::optional<Complex> markedFixedPoint;
};

inline constexpr double kPunctureSeparation = 1e-10;

/// Validates >= 2 pairwise distinct punctures and, when present, that the
/// marked point is one of them. Throws DegenerateInput.
DomainSpec make_domain(std::vector<Complex> punctures, std::optional<Complex> marked = std::nullopt);

struct DiskRegion {
    Complex center;
    double radius = 1.0;
};

/// {z : Re(conj(normal) * (z - point)) > 0}, normal pointing inwards.
struct HalfPlaneRegion {
    Complex point;
    Complex normal{1.0, 0.0};
};

/// {imLow < Im z < imHigh}, optionally cut to Re z > reMin (a half-strip).
struct StripRegion {
    double imLow = 0.0;
    double imHigh = 1.0;
    std::optional<double> reMin;
};

using Region = std::variant<DomainSpec, DiskRegion, HalfPlaneRegion, StripRegion>;

[[nodiscard]] bool simply_connected(const Region& region) noexcept;

/// Euclidean distance from z to the boundary of the region (negative or zero
/// outside a simply connected region).
double boundary_distance(const Region& region, Complex z);

struct DensityInterval {
    double lower = 0.0;
    double upper = 0.0;
    bool simplyConnectedLowerValid = false;
};

inline constexpr double kBoundaryTolerance = 1e-12;

/// 1/(2d) <= rho(z) <= 2/d with d the boundary distance; the lower bound only
/// for simply connected regions. Throws OnBoundary when d <= 1e-12.
DensityInterval density_bounds(const Region& region, Complex z);

struct LengthBounds {
    double lower = 0.0;
    double upper = 0.0;
    int levels = 0;
};

/// Bracket for the hyperbolic length of the polyline. Each segment of length
/// L uses the boundary distance at its endpoints and midpoint, widened by L/4
/// (distance is 1-Lipschitz); segments are bisected level by level until both
/// bounds change by < 1% or after 12 levels.
LengthBounds curve_length_bounds(const Region& region, std::span<const CurveSample> polyline);

// ---------------------------------------------------------------------------

/// (2 / dist(z, punctures of U)) * (2 * dist(z, boundary of V)).
double eta_bound(const DomainSpec& U, const Region& V, Complex z);

struct ContractionCertificate {
    double etaBound = 0.0;
    bool certified = false;
    bool simplyConnected = false;
    double distU = 0.0;
    double distV = 0.0;
};

inline constexpr int kPreimageIndexBound = 64;

/// V is the fundamental domain containing z (Exp: the half-strip between two
/// preimages of alpha; Cosine: the tract half-plane), compared against
/// preimages of U's punctures with |branch index| <= 64. The component counts
/// as simply connected when no such preimage lies in it. Throws NotInPreimage
/// when f(z) is within 1e-10 of a puncture.
ContractionCertificate contraction_certificate(const PartitionSpec& partition, const DomainSpec& U,
                                               Complex z);

struct HorosphereResult {
    bool holds = false;
    /// min |f(z) - z0| / delta over the circle, for delta, delta/2, delta/4.
    double minRatio[3] = {0.0, 0.0, 0.0};
    /// False for delta above kHorosphereModelRadius, where a round disk is
    /// not a faithful model of the horosphere.
    bool modeled = true;
};

inline constexpr double kHorosphereMargin = 1e-3;
inline constexpr double kHorosphereModelRadius = 0.1;

using PlaneMap = std::function<std::optional<Complex>(Complex)>;

/// holds iff min over nSamples points of |z - z0| = d of |f(z) - z0| exceeds
/// d (1 + 1e-3) for d = delta, delta/2 and delta/4. Throws NotAFixedPoint,
/// NotRepelling (|multiplier| <= 1), InvalidArgument.
HorosphereResult horosphere_check(const PlaneMap& f, Complex multiplier, Complex z0, double delta,
                                  int nSamples);
HorosphereResult horosphere_check(const MapSpec& map, Complex z0, double delta, int nSamples = 360);

struct PreimageSequence {
    std::vector<Complex> points;
    std::vector<double> ratios; // |w_{j+1}| / |w_j|
    double K = 0.0;
    double maxResidual = 0.0;
};

/// Exp: w_j = log(w/lambda) + 2 pi i j for j = firstIndex .. firstIndex+count-1,
/// sorted by modulus. Cosine: the same branches of the right-tract root of the
/// quadratic in e^z. Throws OmittedValue (Exp, w = 0), UnsupportedFamily,
/// InvalidArgument (count < 2), NotConverged when a residual exceeds 1e-9.
PreimageSequence preimage_sequence(const MapSpec& map, Complex w, int count, int firstIndex = 1);

} // namespace rayforge
