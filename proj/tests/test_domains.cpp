#include "doctest.h"

#include "rayforge/domains.hpp"
#include "rayforge/error.hpp"
#include "support.hpp"

using namespace rayforge;
using testing::Gen;

namespace {

const Complex kTwoPiI{0.0, 2.0 * M_PI};

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}

// Independent Newton for b (cosh b - 1) = 2 pi i.
Complex psf_oracle() {
    Complex b{2.0, 1.0};
    for (int i = 0; i < 60; ++i) {
        const Complex g = b * (std::cosh(b) - 1.0) - kTwoPiI;
        const Complex dg = std::cosh(b) - 1.0 + b * std::sinh(b);
        b -= g / dg;
    }
    return b;
}

MapModel squaring() {
    return {[](Complex z) { return std::optional<Complex>(z * z); },
            [](Complex w) {
                const Complex r = std::sqrt(w);
                return std::vector<Complex>{r, -r};
            }};
}

} // namespace

TEST_CASE("singular values") {
    const auto e = singular_values(MapSpec::exponential({0.3, 0.7}));
    REQUIRE(e.size() == 1);
    CHECK(e[0] == Complex{0.0, 0.0});
    const auto c = singular_values(MapSpec::cosine(1.0, 1.0));
    REQUIRE(c.size() == 2);
    CHECK(std::abs(c[0] + c[1]) < 1e-15);
    CHECK(std::abs(std::abs(c[0].real()) - 2.0) < 1e-15);
    Gen gen(51);
    for (int i = 0; i < 50; ++i) {
        const Complex a = gen.in_disk(2.0) + 0.1;
        const Complex b = gen.in_disk(2.0) + 0.1;
        const auto v = singular_values(MapSpec::cosine(a, b));
        REQUIRE(v.size() == 2);
        CHECK(std::abs(v[0] + v[1]) < 1e-12 * (1.0 + std::abs(v[0])));
        // Critical points are z with a e^z = b e^-z, so the values square to 4ab.
        CHECK(std::abs(v[0] * v[0] - 4.0 * a * b) < 1e-12 * (1.0 + std::abs(a * b)));
    }
}

TEST_CASE("scaled family critical values are real, sorted and critical") {
    const auto map = MapSpec::scaled_bf(1.0);
    const auto v = singular_values(map);
    REQUIRE(v.size() >= 2);
    CHECK(v[0] == Complex{0.0, 0.0});
    for (std::size_t i = 1; i < v.size(); ++i) {
        CHECK(v[i].imag() == 0.0);
        CHECK(v[i].real() >= 0.0);
        CHECK(v[i].real() >= v[i - 1].real());
    }
}

TEST_CASE("verdicts for the exponential family") {
    const auto attracting = postsingular_analysis(MapSpec::exponential(-1.0), 500, 1e3);
    CHECK(attracting.verdict == GeometricVerdict::GeometricallyFinite);
    CHECK(attracting.limitClass[0] == std::optional<CycleClass>{CycleClass::Attracting});
    CHECK(std::abs(attracting.perValue[0].cycle.at(0) - testing::exp_fixed_point(-1.0, 0)) < 1e-9);

    const auto parabolic = postsingular_analysis(MapSpec::exponential(std::exp(-1.0)), 1000, 1e3);
    CHECK(parabolic.verdict == GeometricVerdict::GeometricallyFinite);
    CHECK(parabolic.limitClass[0] == std::optional<CycleClass>{CycleClass::Parabolic});

    const auto escaping = postsingular_analysis(MapSpec::exponential(1.0), 500, 1e3);
    CHECK(escaping.verdict == GeometricVerdict::NotGeometricallyFinite);
    CHECK_FALSE(geometrically_finite(escaping.verdict));

    const auto psf = postsingular_analysis(MapSpec::exponential(kTwoPiI), 500, 1e3);
    CHECK(psf.verdict == GeometricVerdict::PostsingularlyFinite);
    CHECK(geometrically_finite(psf.verdict));
}

TEST_CASE("attracting parameters are geometrically finite") {
    // lambda = mu e^-mu has the fixed point mu with multiplier mu.
    Gen gen(52);
    for (int i = 0; i < 40; ++i) {
        const Complex mu = gen.in_disk(0.85);
        const auto r = postsingular_analysis(MapSpec::exponential(mu * std::exp(-mu)), 2000, 1e3);
        CHECK(geometrically_finite(r.verdict));
        REQUIRE(r.limitClass[0]);
        CHECK(*r.limitClass[0] == (std::abs(mu) < 1e-9 ? CycleClass::Superattracting : CycleClass::Attracting));
        CAPTURE(mu);
        REQUIRE(r.perValue[0].cycle.size() == 1);
        CHECK(std::abs(r.perValue[0].cycle[0] - mu) < 1e-8);
    }
}

TEST_CASE("cosine parameter with both critical values on a fixed point") {
    const Complex b = 2.0 * cosine_psf_parameter();
    CHECK(std::abs(b - psf_oracle()) < 1e-12);
    const auto map = MapSpec::cosine(b / 2.0, b / 2.0);
    const Complex p = b + kTwoPiI;
    CHECK(std::abs(*evaluate(map, b) - p) < 1e-12);
    CHECK(std::abs(*evaluate(map, -b) - p) < 1e-12);
    CHECK(std::abs(*evaluate(map, p) - p) < 1e-12);

    const auto report = postsingular_analysis(map, 500, 1e3);
    CHECK(report.verdict == GeometricVerdict::PostsingularlyFinite);

    const auto built = build_expansion_domain(map, p, report);
    CHECK(built.admissible());
    REQUIRE(built.auxiliaryFixedPoint);
    CHECK(std::abs(*evaluate(map, *built.auxiliaryFixedPoint) - *built.auxiliaryFixedPoint) < 1e-9);
    CHECK(built.domain.markedFixedPoint == std::optional<Complex>{p});
    for (const auto& c : built.conditions) CHECK_MESSAGE(c.holds, c.detail);
}

TEST_CASE("exp(2 pi i) expansion domain") {
    const auto map = MapSpec::exponential(kTwoPiI);
    const auto report = postsingular_analysis(map, 500, 1e3);
    const auto built = build_expansion_domain(map, kTwoPiI, report);
    CHECK(built.admissible());
    CHECK(built.postsingularSet.size() == 2);
    CHECK(code_of([&] { build_expansion_domain(map, 1.0, report); }) == ErrorCode::NotAFixedPoint);

    SingularOrbitReport near = report;
    OrbitRecord stray;
    stray.samples.push_back(kTwoPiI + 1e-8);
    near.perValue.push_back(stray);
    CHECK(code_of([&] { build_expansion_domain(map, kTwoPiI, near); }) == ErrorCode::DegenerateInput);

    const auto gf = postsingular_analysis(MapSpec::exponential(-1.0), 500, 1e3);
    CHECK(code_of([&] { build_expansion_domain(MapSpec::exponential(-1.0), testing::exp_fixed_point(-1.0, 1), gf); }) ==
          ErrorCode::NotPostsingularlyFinite);
}

TEST_CASE("expansion domain conditions on model maps") {
    const MapModel sq = squaring();
    const auto good = validate_expansion_domain(sq, make_domain({0.0, 1.0}, Complex{1.0, 0.0}), {0.0});
    CHECK(good.admissible());

    // 2 maps to 4, which is not a puncture.
    const auto leaky = validate_expansion_domain(sq, make_domain({0.0, 1.0, 2.0}, Complex{1.0, 0.0}), {0.0});
    CHECK_FALSE(leaky.conditions[1].holds);
    CHECK_FALSE(leaky.admissible());

    // z -> -z on {1, -1}: invariant but every preimage is already a puncture.
    const MapModel flip{[](Complex z) { return std::optional<Complex>(-z); },
                        [](Complex w) { return std::vector<Complex>{-w}; }};
    const auto closed = validate_expansion_domain(flip, make_domain({1.0, -1.0}, Complex{1.0, 0.0}), {});
    CHECK_FALSE(closed.conditions[1].holds);

    // U equal to the plane minus the postsingular set.
    const auto same = validate_expansion_domain(sq, make_domain({0.0, 1.0}, Complex{1.0, 0.0}), {0.0, 1.0});
    CHECK_FALSE(same.conditions[2].holds);

    // Marked point missing from the punctures.
    const auto unmarked = validate_expansion_domain(sq, make_domain({0.0, 1.0}), {0.0});
    CHECK_FALSE(unmarked.conditions[0].holds);
}

TEST_CASE("model_of agrees with the map") {
    Gen gen(53);
    for (const auto& map : {MapSpec::exponential({0.4, -1.1}), MapSpec::cosine({1.0, 0.5}, {0.3, 0.2})}) {
        const MapModel m = model_of(map);
        for (int i = 0; i < 50; ++i) {
            const Complex w = gen.in_box(-5, 5, -5, 5);
            const auto pre = m.preimages(w);
            CHECK(pre.size() >= 3);
            for (const Complex z : pre) CHECK(std::abs(*m.f(z) - w) < 1e-9 * (1.0 + std::abs(w)));
        }
    }
}

TEST_CASE("interval domains") {
    const auto d = interval_domain({0.0, 1.0}, 3.0);
    REQUIRE(d.punctures.size() == static_cast<std::size_t>(kIntervalPunctures + 1));
    CHECK(d.markedFixedPoint == std::optional<Complex>{Complex{0.0, 1.0}});
    CHECK(d.punctures.front() == Complex{0.0, 0.0});
    CHECK(d.punctures[kIntervalPunctures - 1] == Complex{3.0, 0.0});
    CHECK(code_of([] { interval_domain(1.0, 3.0); }) == ErrorCode::DegenerateInput);
    CHECK(code_of([] { interval_domain({0.0, 1.0}, 0.0); }) == ErrorCode::DegenerateInput);
}
