#include "rayforge/rays.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rayforge/error.hpp"

namespace rayforge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxDepth = 1000;

std::vector<Complex> preimage_candidates(const MapSpec& map, Complex w, Complex near) {
    std::vector<Complex> out;
    auto add_logs = [&](Complex u) {
        if (u == Complex{0.0, 0.0} || !is_finite(u)) return;
        const Complex base = std::log(u);
        const double m0 = std::round((near.imag() - base.imag()) / kTwoPi);
        for (double m = m0 - 1; m <= m0 + 1; m += 1.0) out.push_back(base + Complex{0.0, kTwoPi * m});
    };
    switch (map.kind()) {
    case FamilyKind::Exp: add_logs(w / map.exp().lambda); break;
    case FamilyKind::Cosine: {
        // a u^2 - w u + b = 0 with u = e^z
        const auto& c = map.cosine_params();
        const Complex disc = std::sqrt(w * w - 4.0 * c.a * c.b);
        const Complex q = std::norm(w + disc) >= std::norm(w - disc) ? w + disc : w - disc;
        if (q == Complex{0.0, 0.0}) break;
        add_logs(q / (2.0 * c.a));
        add_logs(2.0 * c.b / q);
        break;
    }
    case FamilyKind::ScaledBF:
        throw Error(ErrorCode::UnsupportedFamily, "no inverse branches for " + map.describe());
    }
    std::sort(out.begin(), out.end(),
              [&](Complex x, Complex y) { return std::abs(x - near) < std::abs(y - near); });
    return out;
}

// Solves f^n(w) = target by Newton from `guess`.
std::optional<Complex> local_inverse(const MapSpec& map, int n, Complex target, Complex guess) {
    Complex w = guess;
    for (int it = 0; it < 60; ++it) {
        const auto r = iterate_with_derivative(map, w, n);
        if (!r || r->derivative == Complex{0.0, 0.0}) return std::nullopt;
        const Complex step = (r->value - target) / r->derivative;
        if (!is_finite(step)) return std::nullopt;
        w -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(w))) break;
    }
    const auto check = iterate(map, w, n);
    if (!check || std::abs(*check - target) > 1e-9 * std::max(1.0, std::abs(target))) {
        return std::nullopt;
    }
    return w;
}

} // namespace

// ---------------------------------------------------------------------------
// Periodic rays
// ---------------------------------------------------------------------------

PeriodicRay::PeriodicRay(const PartitionSpec& partition, ExternalAddress address, int depth,
                         int samplesPerLevel, const TraceOptions& options)
    : partition_(partition), address_(std::move(address)), depth_(depth),
      samplesPerLevel_(samplesPerLevel) {
    if (partition_.map().kind() == FamilyKind::ScaledBF) {
        throw Error(ErrorCode::UnsupportedFamily, "rays need a closed-form partition");
    }
    if (!address_.is_periodic()) {
        throw Error(ErrorCode::InvalidArgument, "trace_ray needs a periodic address");
    }
    if (depth_ < 10 || depth_ > kMaxDepth) {
        throw Error(ErrorCode::InvalidArgument, "depth must be in [10, 1000]");
    }
    if (samplesPerLevel_ < 1) throw Error(ErrorCode::InvalidArgument, "samplesPerLevel must be >= 1");

    const double c = partition_.tract_cutoff();
    const double h = options.anchorSpacing > 0.0 ? options.anchorSpacing : 1.0;
    const Symbol s0 = address_.period.front();
    top_ = far_point(0);
    bottom_ = pull_back(top_);

    const auto S = static_cast<std::size_t>(samplesPerLevel_);
    const auto N = static_cast<std::size_t>(depth_);
    std::vector<std::vector<Complex>> level(N, std::vector<Complex>(S));
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t i = 0; i < S; ++i) {
            level[j][i] = partition_.anchor(s0, c + static_cast<double>(j + 1) * h);
        }
    }
    for (std::size_t i = 0; i < S; ++i) {
        level[N - 1][i] = top_segment(static_cast<double>(i) / static_cast<double>(S));
    }

    bool settled = false;
    bool finite = true;
    for (int sweep = 0; sweep < options.maxSweeps && !settled && finite; ++sweep) {
        double change = 0.0;
        for (std::size_t j = N - 1; j-- > 0;) {
            for (std::size_t i = 0; i < S; ++i) {
                const Complex next = pull_back(level[j + 1][i]);
                if (!is_finite(next)) finite = false;
                change = std::max(change, std::abs(next - level[j][i]));
                level[j][i] = next;
            }
        }
        settled = finite && change < options.tolerance;
    }

    curve_.kind = CurveKind::Ray;
    curve_.converged = settled;
    curve_.tailSymbol = s0;
    std::vector<CurveSample> down;
    down.push_back({std::exp2(static_cast<double>(depth_)), top_});
    for (std::size_t j = N; j-- > 0;) {
        for (std::size_t i = S; i-- > 0;) {
            const double s = static_cast<double>(j) + static_cast<double>(i) / static_cast<double>(S);
            if (!is_finite(level[j][i])) continue;
            down.push_back({std::exp2(s), level[j][i]});
        }
    }
    drop_coincident(down);
    curve_.samples.assign(down.rbegin(), down.rend());
}

Complex PeriodicRay::pull_back(Complex w) const {
    for (auto it = address_.period.rbegin(); it != address_.period.rend(); ++it) {
        w = partition_.inverse_branch(*it, w);
    }
    return w;
}

Complex PeriodicRay::far_point(std::size_t k) const {
    const MapSpec& map = partition_.map();
    double scale = 1.0;
    if (map.kind() == FamilyKind::Exp) {
        scale = std::abs(map.exp().lambda);
    } else {
        const auto& c = map.cosine_params();
        scale = std::max(std::abs(c.a), std::abs(c.b));
    }
    return partition_.anchor(address_.period[k % address_.period.size()],
                             std::max(1.0, scale) * std::exp(kFarReach));
}

// The top level runs from G(P_0) to P_0 through n pieces. Piece k is the
// straight segment [L_{s_k}(P_{k+1}), P_k] pulled back by L_{s_0} ... L_{s_{k-1}};
// every segment lies where the ray is horizontal to within e^-kFarReach.
Complex PeriodicRay::top_segment(double u) const {
    if (u >= 1.0) return top_;
    const std::size_t n = address_.period.size();
    const double v = std::max(0.0, u) * static_cast<double>(n);
    const auto piece = std::min(static_cast<std::size_t>(v), n - 1);
    const double w = v - static_cast<double>(piece);
    const std::size_t k = n - 1 - piece;
    const Complex a = partition_.inverse_branch(address_.period[k], far_point(k + 1));
    const Complex b = far_point(k);
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    double tau = w;
    if (ma > 0.0 && mb > ma) tau = (ma * std::pow(mb / ma, w) - ma) / (mb - ma);
    Complex z = a + tau * (b - a);
    for (std::size_t m = k; m-- > 0;) z = partition_.inverse_branch(address_.period[m], z);
    return z;
}

Complex PeriodicRay::at(double s) const {
    s = std::clamp(s, 0.0, static_cast<double>(depth_));
    if (s >= depth_ - 1) return top_segment(s - (depth_ - 1));
    const double j = std::floor(s);
    Complex z = top_segment(s - j);
    for (int k = static_cast<int>(j); k < depth_ - 1; ++k) z = pull_back(z);
    return z;
}

double PeriodicRay::distance(Complex z) const {
    const auto& samples = curve_.samples;
    if (samples.size() < 2) return polyline_distance(z, samples);
    const std::size_t k = nearest_segment(z, samples);
    const std::size_t lo = k > 0 ? k - 1 : 0;
    const std::size_t hi = std::min(k + 2, samples.size() - 1);
    double a = std::log2(samples[lo].t);
    double b = std::log2(samples[hi].t);
    auto f = [&](double s) { return std::abs(at(s) - z); };
    double best = std::min({std::abs(samples[lo].z - z), std::abs(samples[hi].z - z),
                            std::abs(samples[k].z - z), std::abs(samples[k + 1].z - z)});
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - g * (b - a);
    double x2 = a + g * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 60 && b - a > 1e-15; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
        best = std::min({best, f1, f2});
    }
    return best;
}

Curve trace_ray(const PartitionSpec& partition, const ExternalAddress& address, int depth,
                int samplesPerLevel, const TraceOptions& options) {
    return PeriodicRay(partition, address, depth, samplesPerLevel, options).curve();
}

Curve trace_preperiodic_ray(const PartitionSpec& partition, const ExternalAddress& address,
                            int depth, int samplesPerLevel) {
    if (address.is_periodic()) return trace_ray(partition, address, depth, samplesPerLevel);
    Curve curve = trace_ray(partition, {{}, address.period}, depth, samplesPerLevel);
    const MapSpec& map = partition.map();
    for (auto it = address.preperiod.rbegin(); it != address.preperiod.rend(); ++it) {
        auto& samples = curve.samples;
        std::vector<CurveSample> down;
        down.reserve(samples.size());
        Complex prev = partition.inverse_branch(*it, samples.back().z);
        down.push_back({samples.back().t, prev});
        for (std::size_t k = samples.size() - 1; k-- > 0;) {
            const auto candidates = preimage_candidates(map, samples[k].z, prev);
            if (candidates.empty()) break;
            prev = candidates.front();
            down.push_back({samples[k].t, prev});
        }
        drop_coincident(down);
        samples.assign(down.rbegin(), down.rend());
        curve.tailSymbol = *it;
    }
    curve.kind = CurveKind::Ray;
    return curve;
}

double functional_residual(const MapSpec& map, const Curve& ray, int period) {
    if (ray.size() < 3) throw Error(ErrorCode::InvalidArgument, "need at least 3 samples");
    if (period < 1) throw Error(ErrorCode::InvalidArgument, "period must be >= 1");
    const double tLast = ray.back().t;
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < ray.size(); ++k) {
        if (2.0 * ray.samples[k].t > tLast) continue;
        const auto image = iterate(map, ray.samples[k].z, period);
        if (!image) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, polyline_distance(*image, ray.samples) / std::max(1.0, std::abs(*image)));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Landing
// ---------------------------------------------------------------------------

LandingEstimate landing_point(const Curve& ray, const MapSpec& map, int period) {
    if (ray.empty()) throw Error(ErrorCode::InvalidArgument, "empty ray");
    if (period < 1) throw Error(ErrorCode::InvalidArgument, "period must be >= 1");
    const Complex q0 = ray.front().z;
    auto multiplier_at = [&](Complex z) {
        const auto r = iterate_with_derivative(map, z, period);
        if (!r) throw Error(ErrorCode::DivergentHead, "head overflowed");
        return r->derivative;
    };
    if (ray.size() >= 2 && ray.samples[1].z == q0) {
        const Complex mu = multiplier_at(q0);
        return {q0, 0.0, mu, std::abs(std::abs(mu) - 1.0) <= kParabolicBand};
    }

    std::optional<Complex> q1;
    for (const auto& s : ray.samples) {
        if (std::abs(s.t / (2.0 * ray.front().t) - 1.0) < 1e-9) q1 = s.z;
    }
    if (!q1) q1 = iterate(map, q0, period);
    if (!q1) throw Error(ErrorCode::DivergentHead, "head overflowed");

    constexpr long kMaxSteps = 2'000'000;
    Complex prev = *q1;
    Complex cur = q0;
    std::vector<Complex> heads{q0};
    const double scale = std::abs(*q1 - q0) + 1.0;
    for (long step = 0;; ++step) {
        if (step == kMaxSteps) throw Error(ErrorCode::DivergentHead, "head did not settle");
        const Complex mu = multiplier_at(cur);
        const auto next = local_inverse(map, period, cur, cur + (cur - prev) / mu);
        if (!next || std::abs(*next - q0) > 1e3 * scale) {
            throw Error(ErrorCode::DivergentHead, "head pullback left the local branch");
        }
        prev = cur;
        cur = *next;
        heads.push_back(cur);
        if (std::abs(cur - prev) < 1e-11) break;
    }

    const Complex mu = multiplier_at(cur);
    const double mod = std::abs(mu);
    if (std::abs(mod - 1.0) <= kParabolicBand) {
        // Heads of a simple parabolic point approach it like c/k, so Aitken
        // is applied to the heads at k/4, k/2 and k, which converge
        // geometrically; the previous doubling gives the error estimate.
        auto aitken = [&](std::size_t k) {
            const Complex y0 = heads[k / 4];
            const Complex y1 = heads[k / 2];
            const Complex y2 = heads[k];
            const Complex a = y2 - y1;
            const Complex b = y1 - y0;
            if (a - b == Complex{0.0, 0.0}) return y2;
            const Complex e = y2 - a * a / (a - b);
            return is_finite(e) ? e : y2;
        };
        const std::size_t last = heads.size() - 1;
        if (last < 8) return {cur, std::abs(cur - prev), mu, true};
        const Complex est = aitken(last);
        const Complex before = aitken(last / 2);
        return {est, std::abs(est - before) + std::abs(cur - prev), mu, true};
    }
    const Complex est = (mu * cur - prev) / (mu - 1.0);
    const double bound = mod > 1.0 ? std::abs(cur - prev) / (mod - 1.0) : std::abs(est - cur);
    return {est, bound + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(est), mu, false};
}

LandingReport verify_landing(const PartitionSpec& partition, const ExternalAddress& address,
                             const std::vector<PeriodicPointRecord>& periodicPoints,
                             const LandingOptions& options) {
    const PeriodicRay ray(partition, address, options.depth, options.samplesPerLevel);
    LandingReport report;
    report.rayAddress = address;
    const int n = ray.period();
    report.functionalResidual = functional_residual(partition.map(), ray.curve(), n);
    const auto est = landing_point(ray.curve(), partition.map(), n);
    report.landingEstimate = est.estimate;
    report.errorBound = est.errorBound;
    report.gap = std::numeric_limits<double>::infinity();
    for (const auto& p : periodicPoints) {
        const double d = std::abs(p.point - est.estimate);
        if (d < report.gap) {
            report.gap = d;
            report.matchedPeriodicPoint = p;
        }
    }
    if (!report.matchedPeriodicPoint) return report;
    const auto cls = report.matchedPeriodicPoint->cls;
    const double tol = cls == CycleClass::Parabolic ? kParabolicLandingTol : kRepellingLandingTol;
    report.converged = ray.curve().converged &&
                       (cls == CycleClass::Repelling || cls == CycleClass::Parabolic) &&
                       report.gap < tol && report.functionalResidual < kFunctionalResidualTol;
    return report;
}


// ---------------------------------------------------------------------------
// Legs
// ---------------------------------------------------------------------------

namespace {

Complex log1p_complex(Complex x) {
    const Complex u = 1.0 + x;
    if (u == Complex{1.0, 0.0}) return x;
    return std::log(u) * (x / (u - 1.0));
}

// Local inverses of f near the fixed point z0, in offset coordinates
// delta = z - z0. `target` is the offset of the image point from z0.
class OffsetInverse {
public:
    OffsetInverse(const MapSpec& map, Complex z0) : map_(map), z0_(z0) {
        if (map.kind() == FamilyKind::ScaledBF) {
            throw Error(ErrorCode::UnsupportedFamily, "no leg map for " + map.describe());
        }
        const auto fz0 = evaluate(map, z0);
        if (!fz0 || std::abs(*fz0 - z0) >= 1e-10) {
            throw Error(ErrorCode::NotAFixedPoint, "z0 is not a fixed point");
        }
        const auto d = derivative(map, z0);
        if (!d || std::abs(*d) <= 1e-8) throw Error(ErrorCode::InvalidArgument, "z0 is critical");
        mu_ = *d;
        shift_ = z0 - *fz0;
        if (map.kind() == FamilyKind::Exp) {
            value_ = *fz0;
        } else {
            const auto& c = map.cosine_params();
            A_ = c.a * std::exp(z0);
            B_ = c.b * std::exp(-z0);
        }
    }

    [[nodiscard]] Complex multiplier() const noexcept { return mu_; }

    [[nodiscard]] std::vector<Complex> candidates(Complex target, Complex ref) const {
        const Complex d = target + shift_;
        std::vector<Complex> out;
        auto add = [&](Complex v) {
            const Complex base = log1p_complex(v);
            if (!is_finite(base)) return;
            const double m0 = std::round((ref.imag() - base.imag()) / kTwoPi);
            for (double m = m0 - 1; m <= m0 + 1; m += 1.0) out.push_back(base + Complex{0.0, kTwoPi * m});
        };
        if (map_.kind() == FamilyKind::Exp) {
            add(d / value_);
        } else {
            // A v^2 + (A - B - d) v - d = 0 with v = e^delta - 1
            const Complex b = A_ - B_ - d;
            const Complex sq = std::sqrt(b * b + 4.0 * A_ * d);
            const Complex q = -0.5 * (std::norm(b + sq) >= std::norm(b - sq) ? b + sq : b - sq);
            if (q == Complex{0.0, 0.0}) {
                add(Complex{0.0, 0.0});
            } else {
                add(q / A_);
                add(-d / q);
            }
        }
        std::sort(out.begin(), out.end(),
                  [&](Complex x, Complex y) { return std::abs(x - ref) < std::abs(y - ref); });
        return out;
    }

    [[nodiscard]] Complex z0() const noexcept { return z0_; }

private:
    const MapSpec& map_;
    Complex z0_;
    Complex mu_;
    Complex shift_;
    Complex value_;
    Complex A_;
    Complex B_;
};

// Cubic Lagrange interpolation in t through up to four input samples around
// the segment [k-1, k].
Complex interpolate(const std::vector<CurveSample>& in, std::size_t k, double t) {
    const std::size_t lo = k >= 2 ? k - 2 : 0;
    const std::size_t hi = std::min(k + 1, in.size() - 1);
    // Corners and abrupt changes of spacing (polyline vertices, the start of
    // the tail extension) use the chord.
    const Complex chord = in[k].z - in[k - 1].z;
    for (std::size_t i = lo + 1; i <= hi; ++i) {
        const Complex e = in[i].z - in[i - 1].z;
        const double ratio = std::abs(e) / std::abs(chord);
        if (!(ratio > 0.25 && ratio < 4.0) || std::abs(std::arg(e / chord)) > 0.5) {
            const double s = (t - in[k - 1].t) / (in[k].t - in[k - 1].t);
            return in[k - 1].z + s * chord;
        }
    }
    Complex sum{0.0, 0.0};
    for (std::size_t i = lo; i <= hi; ++i) {
        double w = 1.0;
        for (std::size_t j = lo; j <= hi; ++j) {
            if (j != i) w *= (t - in[j].t) / (in[i].t - in[j].t);
        }
        sum += w * in[i].z;
    }
    return sum;
}

class LegPuller {
public:
    LegPuller(const OffsetInverse& inv, const LegOptions& options, const std::vector<CurveSample>& in,
              std::vector<CurveSample>& out)
        : inv_(inv), options_(options), in_(in), out_(out) {}

    void run() {
        for (std::size_t k = 1; k < in_.size(); ++k) {
            segment(k, in_[k - 1].t, in_[k].t, in_[k].z - inv_.z0(), 0, 0);
        }
    }

private:
    void segment(std::size_t k, double tA, double tB, Complex dB, int ambiguity, int spacing) {
        const Complex ref = started_ ? prev_ : dB / inv_.multiplier();
        const auto cands = inv_.candidates(dB, ref);
        if (cands.empty()) throw Error(ErrorCode::ContinuationAmbiguous, "no preimage candidates");
        const double d0 = std::abs(cands[0] - ref);
        const bool ambiguous =
            cands.size() > 1 && std::abs(cands[1] - ref) < options_.ambiguityFactor * d0;
        if (ambiguous) {
            if (ambiguity >= options_.maxAmbiguityBisections) {
                throw Error(ErrorCode::ContinuationAmbiguous,
                            "leg passes too close to a critical value");
            }
            split(k, tA, tB, dB, ambiguity + 1, spacing);
            return;
        }
        const double r = std::abs(cands[0]);
        const double limit = r <= options_.refineRadius ? options_.maxSpacing
                             : r <= options_.midRadius  ? options_.midSpacing
                                                        : options_.farSpacing;
        if (std::abs(cands[0] - prev_) > limit && spacing < options_.maxSpacingBisections) {
            split(k, tA, tB, dB, ambiguity, spacing + 1);
            return;
        }
        prev_ = cands[0];
        started_ = true;
        const Complex z = inv_.z0() + prev_;
        if (tB > out_.back().t && std::abs(z - out_.back().z) > kMinSeparation) out_.push_back({tB, z});
    }

    void split(std::size_t k, double tA, double tB, Complex dB, int ambiguity, int spacing) {
        const double tm = 0.5 * (tA + tB);
        const Complex dm = interpolate(in_, k, tm) - inv_.z0();
        segment(k, tA, tm, dm, ambiguity, spacing);
        segment(k, tm, tB, dB, ambiguity, spacing);
    }

    const OffsetInverse& inv_;
    const LegOptions& options_;
    const std::vector<CurveSample>& in_;
    std::vector<CurveSample>& out_;
    Complex prev_{0.0, 0.0};
    bool started_ = false;
};

// Continues the input leg horizontally far enough that its preimage reaches
// |Re z| = tailReach.
std::vector<CurveSample> tail_extension(const MapSpec& map, const CurveSample& last,
                                        const LegOptions& options) {
    std::vector<CurveSample> out;
    if (options.tailReach <= 0.0 || options.tailStep <= 0.0) return out;
    double scale = 1.0;
    if (map.kind() == FamilyKind::Exp) {
        scale = std::abs(map.exp().lambda);
    } else {
        const auto& c = map.cosine_params();
        scale = std::max(std::abs(c.a), std::abs(c.b));
    }
    const double target = scale * std::exp(options.tailReach);
    const double dir = last.z.real() < 0.0 ? -1.0 : 1.0;
    const double x0 = std::max(1.0, std::abs(last.z.real()));
    for (int k = 1; k < 100000; ++k) {
        const double x = x0 * std::exp(options.tailStep * k);
        const Complex z{dir * x, last.z.imag()};
        if (dir * z.real() > dir * last.z.real()) out.push_back({last.t + options.tailStep * k, z});
        if (std::abs(z) >= target) break;
    }
    return out;
}

} // namespace

Curve leg_pullback(const MapSpec& map, const Curve& leg, Complex z0, const LegOptions& options) {
    const OffsetInverse inv(map, z0);
    if (leg.empty() || std::abs(leg.front().z - z0) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "leg is not anchored at z0");
    }
    Curve out;
    out.kind = CurveKind::Leg;
    out.anchor = z0;
    out.samples.push_back({leg.front().t, z0});
    std::vector<CurveSample> input = leg.samples;
    if (leg.size() > 1) {
        const auto tail = tail_extension(map, leg.back(), options);
        input.insert(input.end(), tail.begin(), tail.end());
    }
    LegPuller(inv, options, input, out.samples).run();
    return out;
}

Curve straight_leg(Complex z0, Complex direction, double length, int count) {
    if (std::abs(direction) == 0.0 || !(length > 0.0) || count < 2) {
        throw Error(ErrorCode::InvalidArgument, "bad straight leg");
    }
    const Complex unit = direction / std::abs(direction);
    Curve leg;
    leg.kind = CurveKind::Leg;
    leg.anchor = z0;
    for (int k = 0; k < count; ++k) {
        const double s = length * k / (count - 1);
        leg.samples.push_back({s, z0 + s * unit});
    }
    return leg;
}

Curve polyline_leg(const std::vector<Complex>& vertices, double step) {
    if (vertices.size() < 2 || !(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "bad polyline leg");
    Curve leg;
    leg.kind = CurveKind::Leg;
    leg.anchor = vertices.front();
    leg.samples.push_back({0.0, vertices.front()});
    double t = 0.0;
    for (std::size_t k = 1; k < vertices.size(); ++k) {
        const Complex a = vertices[k - 1];
        const Complex b = vertices[k];
        const double len = std::abs(b - a);
        if (len == 0.0) continue;
        const int pieces = std::max(1, static_cast<int>(std::ceil(len / step)));
        for (int i = 1; i <= pieces; ++i) {
            const double u = static_cast<double>(i) / pieces;
            leg.samples.push_back({t + u * len, a + u * (b - a)});
        }
        t += len;
    }
    drop_coincident(leg.samples);
    return leg;
}

std::optional<Symbol> tail_symbol(const PartitionSpec& partition, const Curve& curve) {
    if (curve.empty()) return std::nullopt;
    return partition.symbol_of(curve.back().z);
}

std::vector<PullbackStep> pullback_sequence(const PartitionSpec& partition, Complex z0,
                                            const Curve& leg, int iterations,
                                            const LegOptions& options) {
    if (iterations < 0) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 0");
    const MapSpec& map = partition.map();
    std::vector<PullbackStep> steps;
    Curve cur = leg;
    cur.tailSymbol = tail_symbol(partition, cur);
    Complex mark = cur.size() > 1 ? cur.samples[1].z - z0 : Complex{0.0, 0.0};
    steps.push_back({cur, cur.tailSymbol, std::abs(mark)});
    if (iterations == 0) return steps;
    const OffsetInverse inv(map, z0);
    for (int m = 1; m <= iterations; ++m) {
        cur = leg_pullback(map, cur, z0, options);
        cur.tailSymbol = tail_symbol(partition, cur);
        const auto cands = inv.candidates(mark, mark / inv.multiplier());
        if (!cands.empty()) mark = cands.front();
        steps.push_back({cur, cur.tailSymbol, std::abs(mark)});
    }
    return steps;
}

double head_hausdorff(const Curve& leg, const PeriodicRay& ray, Complex center, double radius) {
    std::vector<Complex> head;
    for (const auto& s : leg.samples) {
        if (std::abs(s.z - center) <= radius) head.push_back(s.z);
    }
    double worst = 0.0;
    constexpr std::size_t kMaxProbes = 400;
    const std::size_t stride = std::max<std::size_t>(1, head.size() / kMaxProbes);
    for (std::size_t k = 0; k < head.size(); k += stride) worst = std::max(worst, ray.distance(head[k]));
    if (!head.empty()) worst = std::max(worst, ray.distance(head.back()));

    const double margin = radius + 1.0;
    for (const auto& s : ray.curve().samples) {
        if (std::abs(s.z - center) > radius) continue;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k + 1 < leg.size(); ++k) {
            const Complex a = leg.samples[k].z;
            const Complex b = leg.samples[k + 1].z;
            if (std::abs(a - center) > margin && std::abs(b - center) > margin) continue;
            best = std::min(best, segment_distance(s.z, a, b));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

std::optional<EventualPeriod> eventual_period(const std::vector<std::optional<Symbol>>& symbols) {
    const std::size_t n = symbols.size();
    for (std::size_t p = 1; 3 * p <= n; ++p) {
        for (std::size_t start = 0; start + 3 * p <= n; ++start) {
            bool ok = true;
            for (std::size_t i = start; i < n && ok; ++i) {
                ok = symbols[i].has_value() && (i < start + p || symbols[i] == symbols[i - p]);
            }
            if (ok) return EventualPeriod{start, p};
        }
    }
    return std::nullopt;
}

} // namespace rayforge
