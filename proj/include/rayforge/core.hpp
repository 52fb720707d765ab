#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rayforge {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) noexcept {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// ---------------------------------------------------------------------------
// Map families
// ---------------------------------------------------------------------------

/// lambda * exp(z)
struct ExpFamily {
    Complex lambda;
};

/// a * exp(z) + b * exp(-z)
struct CosineFamily {
    Complex a;
    Complex b;
};

/// alpha times the entire map with a completely invariant Fatou component
/// containing an indirect singularity in its boundary (see docs/families.md).
struct ScaledBFFamily {
    double alpha;
};

enum class FamilyKind { Exp, Cosine, ScaledBF };

class MapSpec {
public:
    using Family = std::variant<ExpFamily, CosineFamily, ScaledBFFamily>;

    static MapSpec exponential(Complex lambda);
    static MapSpec cosine(Complex a, Complex b);
    static MapSpec scaled_bf(double alpha);

    [[nodiscard]] FamilyKind kind() const noexcept;
    [[nodiscard]] const Family& family() const noexcept { return family_; }
    [[nodiscard]] std::string describe() const;

    // Convenience accessors; throw InvalidArgument on the wrong family.
    [[nodiscard]] const ExpFamily& exp() const;
    [[nodiscard]] const CosineFamily& cosine_params() const;
    [[nodiscard]] const ScaledBFFamily& scaled_bf_params() const;

private:
    explicit MapSpec(Family f) : family_(f) {}
    Family family_;
};

// ---------------------------------------------------------------------------
// Evaluation. An empty optional means the value overflowed double range;
// callers treat that as escape to infinity.
// ---------------------------------------------------------------------------

std::optional<Complex> evaluate(const MapSpec& map, Complex z);
std::optional<Complex> derivative(const MapSpec& map, Complex z);

struct IterateResult {
    Complex value;
    Complex derivative; // (f^n)'(z)
};

/// f^n(z) together with its derivative via the chain rule.
std::optional<IterateResult> iterate_with_derivative(const MapSpec& map,
                                                     Complex z, int n);
std::optional<Complex> iterate(const MapSpec& map, Complex z, int n);

/// The constant 12 pi^2 / (5 pi^2 - 48) of the ScaledBF family.
double scaled_bf_prefactor() noexcept;

/// The raw closed formula of the ScaledBF family (alpha = 1) without any
/// treatment of the removable singularities at 0 and pi^2/4.
Complex scaled_bf_formula(Complex z);

// ---------------------------------------------------------------------------
// Multipliers and classification
// ---------------------------------------------------------------------------

enum class CycleClass {
    Attracting,
    Superattracting,
    Repelling,
    Parabolic,
    IrrationallyIndifferent,
};

const char* to_string(CycleClass c) noexcept;

inline constexpr double kClassifyEpsilon = 1e-6;
inline constexpr int kParabolicMaxOrder = 64;

CycleClass classify(Complex multiplier, double eps = kClassifyEpsilon);

/// Product of f' over the cycle. Throws NotACycle when |f(last) - first|
/// exceeds `closureTol` (relative to max(1, |first|)).
Complex cycle_multiplier(const MapSpec& map, std::span<const Complex> cycle,
                         double closureTol = 1e-8);

// ---------------------------------------------------------------------------
// Orbits
// ---------------------------------------------------------------------------

enum class OrbitVerdict { Escaping, ConvergedToCycle, LandedOnCycle, Undecided };

const char* to_string(OrbitVerdict v) noexcept;

struct OrbitRecord {
    std::vector<Complex> samples;
    OrbitVerdict verdict = OrbitVerdict::Undecided;
    std::size_t firstEscapeIndex = 0; // Escaping only
    std::vector<Complex> cycle;       // ConvergedToCycle / LandedOnCycle
    std::size_t landingIndex = 0;     // LandedOnCycle only
    int maxIterations = 0;
    double escapeRadius = 0.0;
    /// Set when the orbit left the escape radius but no growth certificate
    /// exists for the family (ScaledBF), or on overflow without one.
    bool exceededRadius = false;

    [[nodiscard]] int period() const noexcept { return static_cast<int>(cycle.size()); }
};

struct OrbitOptions {
    int maxPeriod = 8;
    int cauchyWindow = 20;
    double cauchyTol = 1e-9;
    /// A landing is reported when the periodicity residual drops from above
    /// this threshold to below `cauchyTol` in one step.
    double landingJump = 1e-6;
};

OrbitRecord orbit(const MapSpec& map, Complex z, int maxIter, double escapeRadius,
                  const OrbitOptions& options = {});

// ---------------------------------------------------------------------------
// Periodic points
// ---------------------------------------------------------------------------

struct SearchBox {
    double reMin = 0.0;
    double reMax = 0.0;
    double imMin = 0.0;
    double imMax = 0.0;

    [[nodiscard]] bool degenerate() const noexcept {
        return !(reMax > reMin) || !(imMax > imMin);
    }
    [[nodiscard]] bool contains(Complex z) const noexcept {
        return z.real() >= reMin && z.real() <= reMax && z.imag() >= imMin &&
               z.imag() <= imMax;
    }
};

struct PeriodicPointRecord {
    Complex point;
    int period = 1;
    Complex multiplier;
    CycleClass cls = CycleClass::Repelling;
    double residual = 0.0;
};

inline constexpr double kPeriodicResidualTol = 1e-10;
inline constexpr double kPeriodicDedupTol = 1e-8;

/// Damped Newton on f^period(z) - z from a single seed. Returns a record only
/// when the residual is below kPeriodicResidualTol and the period is minimal.
std::optional<PeriodicPointRecord> newton_periodic_point(const MapSpec& map,
                                                         Complex seed, int period);

/// Grid-seeded Newton search restricted to `box`; output sorted by (re, im).
std::vector<PeriodicPointRecord> find_periodic_points(const MapSpec& map, int period,
                                                      const SearchBox& box,
                                                      int gridDensity);

} // namespace rayforge
