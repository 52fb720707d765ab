#include "rayforge/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "rayforge/error.hpp"
#include "rayforge/parallel.hpp"

namespace rayforge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
// exp overflows just above 709.78
constexpr double kExpLimit = 709.0;
constexpr double kMinimalPeriodSlack = 1e4;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::optional<Complex> checked(Complex z) {
    if (!is_finite(z)) return std::nullopt;
    return z;
}

// ScaledBF removable singularities ------------------------------------------

constexpr double kTaylorSwitchRadius = 1e-3;
constexpr int kTaylorDegree = 8;
constexpr double kCauchyRadius = 0.5;
constexpr int kCauchyNodes = 64;

struct TaylorPatch {
    Complex center;
    std::array<Complex, kTaylorDegree + 1> coeff{};
};

// Coefficients by the trapezoid rule on a circle (exponentially accurate for
// entire functions); the formula is harmless on the circle itself.
TaylorPatch make_patch(Complex center) {
    TaylorPatch patch{center, {}};
    for (int k = 0; k <= kTaylorDegree; ++k) {
        Complex sum{0.0, 0.0};
        for (int j = 0; j < kCauchyNodes; ++j) {
            const double theta = 2.0 * kPi * j / kCauchyNodes;
            const Complex e = std::polar(1.0, theta);
            sum += scaled_bf_formula(center + kCauchyRadius * e) * std::polar(1.0, -k * theta);
        }
        patch.coeff[k] = sum / static_cast<double>(kCauchyNodes) / std::pow(kCauchyRadius, k);
    }
    return patch;
}

const std::array<TaylorPatch, 2>& patches() {
    static const std::array<TaylorPatch, 2> p{make_patch({0.0, 0.0}),
                                              make_patch({kPi2 / 4.0, 0.0})};
    return p;
}

const TaylorPatch* nearby_patch(Complex z) {
    for (const auto& p : patches()) {
        if (std::abs(z - p.center) < kTaylorSwitchRadius) return &p;
    }
    return nullptr;
}

Complex patch_value(const TaylorPatch& p, Complex z) {
    const Complex d = z - p.center;
    Complex acc{0.0, 0.0};
    for (int k = kTaylorDegree; k >= 0; --k) acc = acc * d + p.coeff[k];
    return acc;
}

Complex patch_derivative(const TaylorPatch& p, Complex z) {
    const Complex d = z - p.center;
    Complex acc{0.0, 0.0};
    for (int k = kTaylorDegree; k >= 1; --k) acc = acc * d + static_cast<double>(k) * p.coeff[k];
    return acc;
}

// d/dz cos(sqrt z) = -sin(sqrt z) / (2 sqrt z), entire.
Complex dcos_sqrt(Complex z) {
    if (std::abs(z) < 1e-4) {
        return -0.5 * (1.0 - z / 6.0 + z * z / 120.0 - z * z * z / 5040.0);
    }
    const Complex s = std::sqrt(z);
    return -std::sin(s) / (2.0 * s);
}

std::optional<Complex> scaled_bf_value(double alpha, Complex z) {
    if (const auto* p = nearby_patch(z)) return checked(alpha * patch_value(*p, z));
    return checked(alpha * scaled_bf_formula(z));
}

std::optional<Complex> scaled_bf_slope(double alpha, Complex z) {
    if (const auto* p = nearby_patch(z)) return checked(alpha * patch_derivative(*p, z));
    const double A = kPi2 - 8.0;
    const double B = 2.0 * kPi2;
    const Complex den = z * (4.0 * z - kPi2);
    const Complex g = (A * z + B) / den;
    const Complex dg = (A * den - (A * z + B) * (8.0 * z - kPi2)) / (den * den);
    const Complex c = std::cos(std::sqrt(z));
    const Complex value = dg * c + g * dcos_sqrt(z) - 2.0 / (z * z);
    return checked(alpha * scaled_bf_prefactor() * value);
}

std::optional<Complex> exp_scaled(Complex coeff, Complex z) {
    if (z.real() + std::log(std::abs(coeff)) > kExpLimit) return std::nullopt;
    return checked(coeff * std::exp(z));
}

} // namespace

// ---------------------------------------------------------------------------

MapSpec MapSpec::exponential(Complex lambda) {
    if (!is_finite(lambda) || lambda == Complex{0.0, 0.0}) {
        throw Error(ErrorCode::InvalidArgument, "exp family requires finite lambda != 0");
    }
    return MapSpec(ExpFamily{lambda});
}

MapSpec MapSpec::cosine(Complex a, Complex b) {
    if (!is_finite(a) || !is_finite(b) || a == Complex{} || b == Complex{}) {
        throw Error(ErrorCode::InvalidArgument, "cosine family requires finite a, b != 0");
    }
    return MapSpec(CosineFamily{a, b});
}

MapSpec MapSpec::scaled_bf(double alpha) {
    if (!std::isfinite(alpha) || alpha < 1.0) {
        throw Error(ErrorCode::InvalidArgument, "scaled-bf family requires alpha >= 1");
    }
    return MapSpec(ScaledBFFamily{alpha});
}

FamilyKind MapSpec::kind() const noexcept {
    return std::visit(overloaded{[](const ExpFamily&) { return FamilyKind::Exp; },
                                 [](const CosineFamily&) { return FamilyKind::Cosine; },
                                 [](const ScaledBFFamily&) { return FamilyKind::ScaledBF; }},
                      family_);
}

std::string MapSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{[&](const ExpFamily& e) { os << "exp(lambda=" << e.lambda << ")"; },
                          [&](const CosineFamily& c) {
                              os << "cosine(a=" << c.a << ", b=" << c.b << ")";
                          },
                          [&](const ScaledBFFamily& s) { os << "scaled-bf(alpha=" << s.alpha << ")"; }},
               family_);
    return os.str();
}

const ExpFamily& MapSpec::exp() const {
    if (const auto* e = std::get_if<ExpFamily>(&family_)) return *e;
    throw Error(ErrorCode::InvalidArgument, "not an exp map: " + describe());
}

const CosineFamily& MapSpec::cosine_params() const {
    if (const auto* c = std::get_if<CosineFamily>(&family_)) return *c;
    throw Error(ErrorCode::InvalidArgument, "not a cosine map: " + describe());
}

const ScaledBFFamily& MapSpec::scaled_bf_params() const {
    if (const auto* s = std::get_if<ScaledBFFamily>(&family_)) return *s;
    throw Error(ErrorCode::InvalidArgument, "not a scaled-bf map: " + describe());
}

double scaled_bf_prefactor() noexcept { return 12.0 * kPi2 / (5.0 * kPi2 - 48.0); }

Complex scaled_bf_formula(Complex z) {
    const double A = kPi2 - 8.0;
    const double B = 2.0 * kPi2;
    const Complex rational = (A * z + B) / (z * (4.0 * z - kPi2));
    return scaled_bf_prefactor() * (rational * std::cos(std::sqrt(z)) + 2.0 / z);
}

std::optional<Complex> evaluate(const MapSpec& map, Complex z) {
    return std::visit(
        overloaded{[&](const ExpFamily& e) { return exp_scaled(e.lambda, z); },
                   [&](const CosineFamily& c) -> std::optional<Complex> {
                       auto plus = exp_scaled(c.a, z);
                       auto minus = exp_scaled(c.b, -z);
                       if (!plus || !minus) return std::nullopt;
                       return checked(*plus + *minus);
                   },
                   [&](const ScaledBFFamily& s) { return scaled_bf_value(s.alpha, z); }},
        map.family());
}

std::optional<Complex> derivative(const MapSpec& map, Complex z) {
    return std::visit(
        overloaded{[&](const ExpFamily& e) { return exp_scaled(e.lambda, z); },
                   [&](const CosineFamily& c) -> std::optional<Complex> {
                       auto plus = exp_scaled(c.a, z);
                       auto minus = exp_scaled(c.b, -z);
                       if (!plus || !minus) return std::nullopt;
                       return checked(*plus - *minus);
                   },
                   [&](const ScaledBFFamily& s) { return scaled_bf_slope(s.alpha, z); }},
        map.family());
}

std::optional<IterateResult> iterate_with_derivative(const MapSpec& map, Complex z, int n) {
    IterateResult r{z, {1.0, 0.0}};
    for (int i = 0; i < n; ++i) {
        auto d = derivative(map, r.value);
        auto v = evaluate(map, r.value);
        if (!d || !v) return std::nullopt;
        r.derivative *= *d;
        r.value = *v;
        if (!is_finite(r.derivative)) return std::nullopt;
    }
    return r;
}

std::optional<Complex> iterate(const MapSpec& map, Complex z, int n) {
    for (int i = 0; i < n; ++i) {
        auto v = evaluate(map, z);
        if (!v) return std::nullopt;
        z = *v;
    }
    return z;
}

// ---------------------------------------------------------------------------

const char* to_string(CycleClass c) noexcept {
    switch (c) {
    case CycleClass::Attracting: return "Attracting";
    case CycleClass::Superattracting: return "Superattracting";
    case CycleClass::Repelling: return "Repelling";
    case CycleClass::Parabolic: return "Parabolic";
    case CycleClass::IrrationallyIndifferent: return "IrrationallyIndifferent";
    }
    return "?";
}

CycleClass classify(Complex multiplier, double eps) {
    const double m = std::abs(multiplier);
    if (m < 1e-12) return CycleClass::Superattracting;
    if (m < 1.0 - eps) return CycleClass::Attracting;
    if (m > 1.0 + eps) return CycleClass::Repelling;
    const double turns = std::arg(multiplier) / (2.0 * kPi);
    for (int q = 1; q <= kParabolicMaxOrder; ++q) {
        const double p = std::round(turns * q);
        if (std::abs(multiplier - std::polar(1.0, 2.0 * kPi * p / q)) < eps) {
            return CycleClass::Parabolic;
        }
    }
    return CycleClass::IrrationallyIndifferent;
}

Complex cycle_multiplier(const MapSpec& map, std::span<const Complex> cycle, double closureTol) {
    if (cycle.empty()) throw Error(ErrorCode::NotACycle, "empty cycle");
    auto closing = evaluate(map, cycle.back());
    if (!closing || std::abs(*closing - cycle.front()) >
                        closureTol * std::max(1.0, std::abs(cycle.front()))) {
        throw Error(ErrorCode::NotACycle, "cycle does not close under the map");
    }
    Complex mu{1.0, 0.0};
    for (const Complex z : cycle) {
        auto d = derivative(map, z);
        if (!d) throw Error(ErrorCode::Overflow, "derivative overflow on cycle");
        mu *= *d;
    }
    return mu;
}

// ---------------------------------------------------------------------------

const char* to_string(OrbitVerdict v) noexcept {
    switch (v) {
    case OrbitVerdict::Escaping: return "Escaping";
    case OrbitVerdict::ConvergedToCycle: return "ConvergedToCycle";
    case OrbitVerdict::LandedOnCycle: return "LandedOnCycle";
    case OrbitVerdict::Undecided: return "Undecided";
    }
    return "?";
}

namespace {

// Past this point the family's growth guarantees every further iterate
// stays outside the escape radius. Never certifies ScaledBF.
bool escape_certified(const MapSpec& map, Complex z, double escapeRadius) {
    if (std::abs(z) <= escapeRadius) return false;
    const double radius = std::max(escapeRadius, 10.0);
    switch (map.kind()) {
    case FamilyKind::Exp: {
        const double threshold = std::log(radius / std::abs(map.exp().lambda)) + 1.0;
        return z.real() > threshold;
    }
    case FamilyKind::Cosine: {
        const auto& c = map.cosine_params();
        const double smaller = std::min(std::abs(c.a), std::abs(c.b));
        const double threshold = std::log(2.0 * radius / smaller) + 1.0;
        return std::abs(z.real()) > threshold;
    }
    case FamilyKind::ScaledBF: return false;
    }
    return false;
}

std::size_t trailing_escape_start(const std::vector<Complex>& samples, double radius) {
    std::size_t start = samples.size();
    while (start > 0 && std::abs(samples[start - 1]) > radius) --start;
    return start;
}

} // namespace

OrbitRecord orbit(const MapSpec& map, Complex z, int maxIter, double escapeRadius,
                  const OrbitOptions& options) {
    if (maxIter < 1 || !(escapeRadius > 0.0) || !is_finite(z)) {
        throw Error(ErrorCode::InvalidArgument, "orbit requires maxIter >= 1, radius > 0, finite z");
    }
    OrbitRecord rec;
    rec.maxIterations = maxIter;
    rec.escapeRadius = escapeRadius;
    rec.samples.reserve(static_cast<std::size_t>(std::min(maxIter, 1 << 16)) + 1);
    rec.samples.push_back(z);

    const int maxPeriod = std::max(1, options.maxPeriod);
    std::vector<int> streak(static_cast<std::size_t>(maxPeriod) + 1, 0);
    auto scale = [](Complex w) { return std::max(1.0, std::abs(w)); };

    if (escape_certified(map, z, escapeRadius)) {
        rec.verdict = OrbitVerdict::Escaping;
        rec.firstEscapeIndex = 0;
        return rec;
    }

    for (int it = 0; it < maxIter; ++it) {
        auto next = evaluate(map, rec.samples.back());
        if (!next) {
            if (map.kind() == FamilyKind::ScaledBF) {
                rec.exceededRadius = true;
                rec.verdict = OrbitVerdict::Undecided;
            } else {
                rec.verdict = OrbitVerdict::Escaping;
                rec.firstEscapeIndex = trailing_escape_start(rec.samples, escapeRadius);
            }
            return rec;
        }
        rec.samples.push_back(*next);
        const std::size_t k = rec.samples.size() - 1;
        const Complex zk = rec.samples[k];
        if (std::abs(zk) > escapeRadius) rec.exceededRadius = true;

        if (escape_certified(map, zk, escapeRadius)) {
            rec.verdict = OrbitVerdict::Escaping;
            rec.firstEscapeIndex = k;
            rec.exceededRadius = false;
            return rec;
        }

        for (int p = 1; p <= maxPeriod && static_cast<std::size_t>(p) <= k; ++p) {
            const std::size_t i = k - static_cast<std::size_t>(p);
            const double tol = options.cauchyTol * scale(zk);
            const double res = std::abs(zk - rec.samples[i]);
            if (res >= tol) {
                streak[p] = 0;
                continue;
            }
            // Exact landing: the residual jumped below tolerance in one step.
            const bool jumped =
                i == 0 || std::abs(rec.samples[k - 1] - rec.samples[i - 1]) >
                              options.landingJump * scale(rec.samples[k - 1]);
            if (jumped && streak[p] == 0) {
                rec.verdict = OrbitVerdict::LandedOnCycle;
                rec.landingIndex = i;
                rec.cycle.assign(rec.samples.begin() + static_cast<std::ptrdiff_t>(i),
                                 rec.samples.begin() + static_cast<std::ptrdiff_t>(k));
                return rec;
            }
            if (++streak[p] >= options.cauchyWindow) {
                // A rotating multiplier can close f^p before f^d for d | p.
                int period = p;
                for (int d = 1; d < p; ++d) {
                    if (p % d == 0 && std::abs(zk - rec.samples[k - static_cast<std::size_t>(d)]) <
                                          kMinimalPeriodSlack * tol) {
                        period = d;
                        break;
                    }
                }
                rec.verdict = OrbitVerdict::ConvergedToCycle;
                rec.cycle.assign(rec.samples.end() - period, rec.samples.end());
                return rec;
            }
        }
    }
    rec.verdict = OrbitVerdict::Undecided;
    return rec;
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kNewtonMaxIter = 80;
constexpr int kMaxHalvings = 40;
constexpr double kNearMultipleRoot = 1e-3;
constexpr double kMultipleRootDedupTol = 1e-6;

bool period_is_minimal(const MapSpec& map, Complex z, int period) {
    for (int k = 1; k < period; ++k) {
        if (period % k != 0) continue;
        auto w = iterate(map, z, k);
        if (w && std::abs(*w - z) < 1e-8 * std::max(1.0, std::abs(z))) return false;
    }
    return true;
}

} // namespace

std::optional<PeriodicPointRecord> newton_periodic_point(const MapSpec& map, Complex seed,
                                                         int period) {
    if (period < 1) throw Error(ErrorCode::InvalidArgument, "period must be >= 1");
    Complex z = seed;
    auto cur = iterate_with_derivative(map, z, period);
    if (!cur) return std::nullopt;
    double res = std::abs(cur->value - z);

    // Multiplicity 1 Newton, then multiplicity 2 for near-parabolic roots where
    // plain Newton only converges linearly.
    for (int multiplicity = 1; multiplicity <= 2; ++multiplicity) {
        for (int it = 0; it < kNewtonMaxIter; ++it) {
            const Complex g = cur->value - z;
            const Complex dg = cur->derivative - 1.0;
            if (res == 0.0 || std::abs(dg) == 0.0) break;
            Complex step = static_cast<double>(multiplicity) * g / dg;
            bool improved = false;
            for (int h = 0; h < kMaxHalvings; ++h) {
                const Complex trial = z - step;
                auto next = iterate_with_derivative(map, trial, period);
                if (next) {
                    const double trialRes = std::abs(next->value - trial);
                    if (trialRes < res) {
                        z = trial;
                        cur = next;
                        res = trialRes;
                        improved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if (!improved) break;
            if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(z))) break;
        }
        if (res > kPeriodicResidualTol) return std::nullopt;
        if (std::abs(cur->derivative - 1.0) > kNearMultipleRoot) break;
    }
    if (!is_finite(z) || res > kPeriodicResidualTol) return std::nullopt;
    if (!period_is_minimal(map, z, period)) return std::nullopt;
    PeriodicPointRecord rec;
    rec.point = z;
    rec.period = period;
    rec.multiplier = cur->derivative;
    rec.cls = classify(rec.multiplier);
    rec.residual = res;
    return rec;
}

std::vector<PeriodicPointRecord> find_periodic_points(const MapSpec& map, int period,
                                                      const SearchBox& box, int gridDensity) {
    if (period < 1) throw Error(ErrorCode::InvalidArgument, "period must be >= 1");
    if (box.degenerate()) throw Error(ErrorCode::InvalidArgument, "degenerate search box");
    if (gridDensity < 1) throw Error(ErrorCode::InvalidArgument, "grid density must be >= 1");

    const auto n = static_cast<std::size_t>(gridDensity);
    std::vector<std::optional<PeriodicPointRecord>> found(n * n);
    parallel_for(n * n, worker_count(), [&](std::size_t idx) {
        const double u = (static_cast<double>(idx % n) + 0.5) / static_cast<double>(n);
        const double v = (static_cast<double>(idx / n) + 0.5) / static_cast<double>(n);
        const Complex seed{box.reMin + u * (box.reMax - box.reMin),
                           box.imMin + v * (box.imMax - box.imMin)};
        auto rec = newton_periodic_point(map, seed, period);
        if (rec && box.contains(rec->point)) found[idx] = rec;
    });

    std::vector<PeriodicPointRecord> out;
    for (const auto& rec : found) {
        if (!rec) continue;
        const double tol = std::abs(rec->multiplier - 1.0) < kNearMultipleRoot
                               ? kMultipleRootDedupTol
                               : kPeriodicDedupTol;
        const bool dup = std::any_of(out.begin(), out.end(), [&](const PeriodicPointRecord& q) {
            return std::abs(q.point - rec->point) < tol;
        });
        if (!dup) out.push_back(*rec);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.point.real() != b.point.real()) return a.point.real() < b.point.real();
        return a.point.imag() < b.point.imag();
    });
    return out;
}

// ---------------------------------------------------------------------------

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NotACycle: return "NotACycle";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::DivergentHead: return "DivergentHead";
    case ErrorCode::ContinuationAmbiguous: return "ContinuationAmbiguous";
    case ErrorCode::NotAFixedPoint: return "NotAFixedPoint";
    case ErrorCode::NotRepelling: return "NotRepelling";
    case ErrorCode::OnBoundary: return "OnBoundary";
    case ErrorCode::NotInPreimage: return "NotInPreimage";
    case ErrorCode::OmittedValue: return "OmittedValue";
    case ErrorCode::NotPostsingularlyFinite: return "NotPostsingularlyFinite";
    case ErrorCode::NoAuxiliaryFixedPoint: return "NoAuxiliaryFixedPoint";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::Parse: return "Parse";
    }
    return "?";
}

unsigned worker_count() {
    if (const char* env = std::getenv("RAYFORGE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace rayforge
