#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rayforge/core.hpp"
#include "rayforge/hyperbolic.hpp"

namespace rayforge {

enum class GeometricVerdict { PostsingularlyFinite, GeometricallyFinite, NotGeometricallyFinite, Undecided };

const char* to_string(GeometricVerdict v) noexcept;

/// PostsingularlyFinite and GeometricallyFinite both count as geometrically
/// finite.
[[nodiscard]] constexpr bool geometrically_finite(GeometricVerdict v) noexcept {
    return v == GeometricVerdict::PostsingularlyFinite || v == GeometricVerdict::GeometricallyFinite;
}

struct CriticalSearch {
    SearchBox box{0.0, 400.0, -5.0, 5.0};
    int reSeeds = 200;
    int imSeeds = 50;
};

/// Exp: {0}. Cosine: {2 sqrt(ab), -2 sqrt(ab)}. ScaledBF: 0 followed by the
/// real critical values found by Newton on f' from the seed grid (values with
/// |Im| > 1e-6 are discarded), ascending.
std::vector<Complex> singular_values(const MapSpec& map, const CriticalSearch& search = {});

inline constexpr int kParabolicPatience = 50;

struct SingularOrbitReport {
    std::vector<Complex> singularValues;
    std::vector<OrbitRecord> perValue;
    /// Class of the limit cycle of each orbit, when there is one.
    std::vector<std::optional<CycleClass>> limitClass;
    GeometricVerdict verdict = GeometricVerdict::Undecided;
};

/// Orbits still Undecided after maxIter are re-run with kParabolicPatience
/// times the budget. A convergent orbit whose limit multiplier is within
/// kParabolicBand of the unit circle is classed Parabolic.
SingularOrbitReport postsingular_analysis(const MapSpec& map, int maxIter, double escapeRadius,
                                          const CriticalSearch& search = {});

// ---------------------------------------------------------------------------

struct ConditionCheck {
    bool holds = false;
    std::string detail;
};

struct ExpansionDomainReport {
    DomainSpec domain;
    std::vector<Complex> postsingularSet;
    std::optional<Complex> auxiliaryFixedPoint;
    ConditionCheck conditions[4]; // (a) .. (d)

    [[nodiscard]] bool admissible() const noexcept {
        return conditions[0].holds && conditions[1].holds && conditions[2].holds && conditions[3].holds;
    }
};

/// A map given by its values and by a finite list of preimages of a point.
struct MapModel {
    PlaneMap f;
    std::function<std::vector<Complex>(Complex)> preimages;
};

MapModel model_of(const MapSpec& map);

inline constexpr double kInvarianceTol = 1e-9;
inline constexpr double kDegenerateSeparation = 1e-6;

/// Checks (a)-(d) for U = plane minus domain.punctures with marked point z0:
/// (a) z0 is a puncture (infinity is always isolated); (b) f maps every
/// puncture onto a puncture within 1e-9 and some puncture has a preimage
/// outside the set; (c) U is not the plane minus the postsingular set;
/// (d) punctures are isolated, hence accessible.
ExpansionDomainReport validate_expansion_domain(const MapModel& model, const DomainSpec& domain,
                                                const std::vector<Complex>& postsingularSet);

struct AuxiliarySearch {
    /// Empty box: a box of half-width 8 around z0.
    SearchBox box{};
    int gridDensity = 40;
};

/// Throws NotPostsingularlyFinite, NotAFixedPoint, NotRepelling,
/// DegenerateInput (a postsingular point within 1e-6 of z0 but not equal to
/// it) and NoAuxiliaryFixedPoint.
ExpansionDomainReport build_expansion_domain(const MapSpec& map, Complex z0,
                                             const SingularOrbitReport& report,
                                             const AuxiliarySearch& search = {});

inline constexpr int kIntervalPunctures = 64;

/// z0 together with 64 equally spaced punctures on [0, yMax], standing in for
/// the plane minus z0 and the real interval [0, yMax]. Throws DegenerateInput.
DomainSpec interval_domain(Complex z0, double yMax);

/// a = b/2 where b (cosh b - 1) = 2 pi i (Newton from 2 + 2i). Both critical
/// values +-b of a(e^z + e^-z) then land on the fixed point b + 2 pi i.
Complex cosine_psf_parameter();

} // namespace rayforge
