#include "doctest.h"

#include "rayforge/error.hpp"
#include "rayforge/rays.hpp"
#include "support.hpp"

using namespace rayforge;

namespace {

const Complex kMinusOne{-1.0, 0.0};

// Newton on f^2(z) = z for lambda e^z written out by hand.
Complex period_two_point(Complex lambda, Complex z) {
    for (int i = 0; i < 100; ++i) {
        const Complex f1 = lambda * std::exp(z);
        const Complex f2 = lambda * std::exp(f1);
        const Complex step = (f2 - z) / (f2 * f1 - 1.0);
        z -= step;
        if (std::abs(step) < 1e-15 * std::abs(z)) break;
    }
    return z;
}

std::vector<PeriodicPointRecord> record(Complex p, int period, const MapSpec& map) {
    const auto r = iterate_with_derivative(map, p, period);
    return {{p, period, r->derivative, classify(r->derivative), std::abs(r->value - p)}};
}

} // namespace

TEST_CASE("traced exp rays are parametrized and invariant") {
    const auto part = build_partition(MapSpec::exponential(kMinusOne), 10);
    for (const char* text : {"[| 0]", "[| 1]", "[| -1]", "[| 0 1]"}) {
        const auto address = parse_address(text);
        const Curve ray = trace_ray(part, address, 40);
        CHECK(ray.converged);
        REQUIRE(ray.size() > 40);
        for (std::size_t i = 1; i < ray.size(); ++i) {
            CHECK(ray.samples[i].t > ray.samples[i - 1].t);
            CHECK(std::abs(ray.samples[i].z - ray.samples[i - 1].z) >= kMinSeparation);
        }
        CHECK(functional_residual(part.map(), ray, static_cast<int>(address.period.size())) < kFunctionalResidualTol);
    }
}

TEST_CASE("points on the ray carry its address") {
    const auto part = build_partition(MapSpec::exponential(kMinusOne), 10);
    const Curve ray = trace_ray(part, parse_address("[| 0 1]"), 40);
    int checked = 0;
    // Only the far part of the ray lies in its fundamental domains; beyond
    // Re z = 30 the image carries an absolute rounding error above 1e-3.
    for (const auto& s : ray.samples) {
        const auto w = evaluate(part.map(), s.z);
        if (s.z.real() < 5.0 || s.z.real() > 30.0 || !w || w->real() < 5.0) continue;
        const auto a = address_of(part, s.z, 2);
        if (!a.ok()) continue;
        ++checked;
        const bool even = a.symbols == std::vector<Symbol>{0, 1};
        const bool odd = a.symbols == std::vector<Symbol>{1, 0};
        CHECK((even || odd));
    }
    CHECK(checked > 0);
}

TEST_CASE("rays of conjugate addresses are conjugate for real lambda") {
    const auto part = build_partition(MapSpec::exponential(kMinusOne), 10);
    const Curve a = trace_ray(part, parse_address("[| 0]"), 30);
    const Curve b = trace_ray(part, parse_address("[| 1]"), 30);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(a.samples[i].z - std::conj(b.samples[i].z)) <= 1e-9 * std::max(1.0, std::abs(a.samples[i].z)));
    }
}

TEST_CASE("landing at repelling points matches independent oracles") {
    const auto map = MapSpec::exponential(kMinusOne);
    const auto part = build_partition(map, 10);
    struct Case {
        const char* address;
        Complex expected;
        int period;
    };
    const Complex p2 = period_two_point(kMinusOne, {0.72, -1.93});
    const Case cases[] = {{"[| 0]", testing::exp_fixed_point(kMinusOne, 1), 1},
                          {"[| 1]", testing::exp_fixed_point(kMinusOne, -1), 1},
                          {"[| -1]", testing::exp_fixed_point(kMinusOne, 2), 1},
                          {"[| 0 1]", p2, 2}};
    for (const auto& c : cases) {
        CAPTURE(c.address);
        const auto report = verify_landing(part, parse_address(c.address), record(c.expected, c.period, map));
        CHECK(report.converged);
        REQUIRE(report.matchedPeriodicPoint);
        CHECK(report.gap < kRepellingLandingTol);
        CHECK(std::abs(report.landingEstimate - c.expected) <= report.errorBound + 1e-12);
        CHECK(report.matchedPeriodicPoint->cls == CycleClass::Repelling);
    }
}

TEST_CASE("a landing report without a matching point does not converge") {
    const auto part = build_partition(MapSpec::exponential(kMinusOne), 10);
    const auto report = verify_landing(part, parse_address("[| 0]"), {});
    CHECK_FALSE(report.converged);
    CHECK_FALSE(report.matchedPeriodicPoint);
    const auto wrong = record(testing::exp_fixed_point(kMinusOne, 2), 1, part.map());
    CHECK_FALSE(verify_landing(part, parse_address("[| 0]"), wrong).converged);
}

TEST_CASE("the parabolic ray of exp(1/e) lands at 1") {
    const auto map = MapSpec::exponential(std::exp(-1.0));
    const auto part = build_partition(map, 10);
    const Curve ray = trace_ray(part, parse_address("[| 0]"), 60);
    const LandingEstimate est = landing_point(ray, map, 1);
    CHECK(est.parabolic);
    CHECK(std::abs(est.estimate - 1.0) < kParabolicLandingTol);
    CHECK(std::abs(est.estimate - 1.0) <= est.errorBound);
    CHECK(est.errorBound < 1e-6);
}

TEST_CASE("preperiodic rays map onto their periodic image") {
    const auto map = MapSpec::exponential(kMinusOne);
    const auto part = build_partition(map, 10);
    const Curve pre = trace_preperiodic_ray(part, parse_address("[2 | 0]"), 30);
    const Curve per = trace_ray(part, parse_address("[| 0]"), 30);
    int checked = 0;
    for (const auto& s : pre.samples) {
        const auto w = evaluate(map, s.z);
        if (!w || std::abs(*w) > 1e6) continue;
        ++checked;
        CHECK(polyline_distance(*w, per.samples) < 1e-6 * std::max(1.0, std::abs(*w)));
        CHECK(part.symbol_of(s.z).value_or(2) == 2);
    }
    CHECK(checked > 10);
}

TEST_CASE("ray preconditions") {
    const auto part = build_partition(MapSpec::exponential(kMinusOne), 10);
    CHECK_THROWS_AS(trace_ray(part, parse_address("[| 0]"), 5), Error);
    CHECK_THROWS_AS(trace_ray(part, parse_address("[1 | 0]"), 20), Error);
    CHECK_THROWS_AS(build_partition(MapSpec::scaled_bf(1.0), 10), Error);
}

TEST_CASE("legs") {
    const Curve s = straight_leg({1.0, 2.0}, {0.0, 2.0}, 10.0, 11);
    REQUIRE(s.size() == 11);
    CHECK(s.front().z == Complex{1.0, 2.0});
    CHECK(std::abs(s.back().z - Complex{1.0, 12.0}) < 1e-12);
    CHECK(s.kind == CurveKind::Leg);
    const Curve p = polyline_leg({0.0, {1.0, 0.0}, {1.0, 1.0}}, 0.1);
    for (std::size_t i = 1; i < p.size(); ++i) CHECK(std::abs(p.samples[i].z - p.samples[i - 1].z) <= 0.1 + 1e-12);
    CHECK(std::abs(p.back().z - Complex{1.0, 1.0}) < 1e-12);
}

TEST_CASE("leg pullback inverts f along the leg") {
    const auto map = MapSpec::exponential(kMinusOne);
    const Complex z0 = testing::exp_fixed_point(kMinusOne, -1);
    const Curve leg = straight_leg(z0, {1.0, 0.3}, 40.0, 400);
    const Curve out = leg_pullback(map, leg, z0);
    CHECK(out.front().z == z0);
    CHECK(out.anchor == z0);
    // f maps the pulled-back leg into the (horizontally extended) input leg.
    std::vector<CurveSample> extended = leg.samples;
    const Complex end = leg.back().z;
    for (double x = end.real() + 1.0; x < 1e18; x *= 1.5) extended.push_back({extended.back().t + 1.0, {x, end.imag()}});
    for (std::size_t i = 0; i < out.size(); i += 7) {
        const auto w = evaluate(map, out.samples[i].z);
        if (!w) continue;
        CHECK(polyline_distance(*w, extended) <= 1e-8 * std::max(1.0, std::abs(*w)));
    }
    CHECK_THROWS_AS(leg_pullback(map, leg, z0 + 0.1), Error);
    CHECK_THROWS_AS(leg_pullback(map, straight_leg(z0 + 0.1, {1.0, 0.0}, 5.0, 10), z0 + 0.1), Error);
}

TEST_CASE("legs through a critical value are ambiguous") {
    const auto map = MapSpec::cosine(1.0, 1.0);
    const Complex z0{0.633221088473, 1.30544065507};
    const auto fixed = newton_periodic_point(map, z0, 1);
    REQUIRE(fixed);
    const Curve leg = polyline_leg({fixed->point, 2.0, 40.0}, 0.05);
    try {
        leg_pullback(map, leg, fixed->point);
        FAIL("expected ContinuationAmbiguous");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ContinuationAmbiguous);
    }
}

TEST_CASE("pullback sequence shrinks the head gap") {
    const auto map = MapSpec::exponential(kMinusOne);
    const auto part = build_partition(map, 10);
    const Complex z0 = testing::exp_fixed_point(kMinusOne, -1);
    const auto steps = pullback_sequence(part, z0, straight_leg(z0, {1.0, 0.0}, 40.0, 400), 6);
    REQUIRE(steps.size() == 7);
    for (std::size_t i = 1; i < steps.size(); ++i) {
        CHECK(steps[i].headGap < steps[i - 1].headGap);
        CHECK(steps[i].tailSymbol == std::optional<Symbol>{1});
    }
    CHECK(pullback_sequence(part, z0, straight_leg(z0, {1.0, 0.0}, 40.0, 400), 0).size() == 1);
}

TEST_CASE("eventual period") {
    using S = std::vector<std::optional<Symbol>>;
    auto ep = eventual_period(S{1, 1, 1});
    REQUIRE(ep);
    CHECK(ep->start == 0);
    CHECK(ep->period == 1);
    ep = eventual_period(S{2, 0, 1, 0, 1, 0, 1});
    REQUIRE(ep);
    CHECK(ep->start == 1);
    CHECK(ep->period == 2);
    ep = eventual_period(S{std::nullopt, 4, 4, 4});
    REQUIRE(ep);
    CHECK(ep->start == 1);
    CHECK_FALSE(eventual_period(S{1, 1}));
    CHECK_FALSE(eventual_period(S{0, 1, 0, 1, 0}));
    CHECK_FALSE(eventual_period(S{1, 1, std::nullopt, 1}));
    CHECK_FALSE(eventual_period(S{}));
}
