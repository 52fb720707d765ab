#include "doctest.h"

#include "rayforge/error.hpp"
#include "rayforge/hyperbolic.hpp"
#include "support.hpp"

using namespace rayforge;
using testing::Gen;

namespace {

// Exact densities of curvature -1.
double disk_density(Complex z) { return 2.0 / (1.0 - std::norm(z)); }
double half_plane_density(Complex z) { return 1.0 / z.imag(); }
double strip_density(Complex z) { return 1.0 / std::sin(z.imag()); } // 0 < Im z < pi

bool brackets(const DensityInterval& b, double rho) { return b.lower <= rho && rho <= b.upper; }

std::vector<CurveSample> segment(Complex a, Complex b, int n) {
    std::vector<CurveSample> out;
    for (int i = 0; i <= n; ++i) out.push_back({static_cast<double>(i), a + (b - a) * (static_cast<double>(i) / n)});
    return out;
}

} // namespace

TEST_CASE("density bounds bracket the exact metric of simply connected models") {
    Gen gen(41);
    const Region disk = DiskRegion{0.0, 1.0};
    const Region half = HalfPlaneRegion{0.0, {0.0, 1.0}};
    const Region strip = StripRegion{0.0, M_PI, std::nullopt};
    for (int i = 0; i < 1000; ++i) {
        const Complex d = gen.in_disk(0.999);
        CHECK(brackets(density_bounds(disk, d), disk_density(d)));
        const Complex h{gen.uniform(-50, 50), std::exp(gen.uniform(-8, 4))};
        CHECK(brackets(density_bounds(half, h), half_plane_density(h)));
        const Complex s{gen.uniform(-5, 5), gen.uniform(1e-3, M_PI - 1e-3)};
        CHECK(brackets(density_bounds(strip, s), strip_density(s)));
    }
    CHECK(density_bounds(disk, 0.0).lower == doctest::Approx(0.5));
    CHECK(density_bounds(disk, 0.0).upper == doctest::Approx(2.0));
}

TEST_CASE("punctured planes report only the upper bound") {
    const Region u = make_domain({0.0, 1.0});
    CHECK_FALSE(simply_connected(u));
    const auto b = density_bounds(u, {0.5, 0.5});
    CHECK_FALSE(b.simplyConnectedLowerValid);
    CHECK(b.lower == 0.0);
    CHECK(b.upper == doctest::Approx(2.0 / std::abs(Complex{0.5, 0.5})));
    CHECK_THROWS_AS(density_bounds(u, 1.0), Error);
    CHECK_THROWS_AS(density_bounds(DiskRegion{0.0, 1.0}, 1.0), Error);
    CHECK_THROWS_AS(density_bounds(DiskRegion{0.0, 1.0}, 2.0), Error);
}

TEST_CASE("make_domain validation") {
    CHECK_THROWS_AS(make_domain({0.0}), Error);
    CHECK_THROWS_AS(make_domain({0.0, 1e-12}), Error);
    CHECK_THROWS_AS(make_domain({0.0, 1.0}, Complex{2.0, 0.0}), Error);
    CHECK(make_domain({0.0, 1.0}, Complex{1.0, 0.0}).markedFixedPoint == Complex{1.0, 0.0});
}

TEST_CASE("curve length bounds bracket exact geodesic lengths") {
    // Vertical segment i -> e i in the upper half-plane has length 1.
    const auto v = segment({0.0, 1.0}, {0.0, std::exp(1.0)}, 4);
    const auto hb = curve_length_bounds(HalfPlaneRegion{0.0, {0.0, 1.0}}, v);
    CHECK(hb.lower <= 1.0);
    CHECK(hb.upper >= 1.0);
    CHECK(hb.lower > 0.4);
    CHECK(hb.upper < 2.5);
    // Radius 0 -> r of the unit disk has length log((1 + r) / (1 - r)).
    const double r = 0.9;
    const auto d = segment(0.0, r, 3);
    const auto db = curve_length_bounds(DiskRegion{0.0, 1.0}, d);
    const double exact = std::log((1.0 + r) / (1.0 - r));
    CHECK(db.lower <= exact);
    CHECK(db.upper >= exact);
    // Multiply connected: only an upper bound.
    const auto pb = curve_length_bounds(make_domain({0.0, 1.0}), segment({0.5, 0.5}, {0.5, 2.0}, 2));
    CHECK(pb.lower == 0.0);
    CHECK(pb.upper > 0.0);
    CHECK_THROWS_AS(curve_length_bounds(HalfPlaneRegion{0.0, {0.0, 1.0}}, segment({0.0, 1.0}, {0.0, -1.0}, 2)),
                    Error);
}

TEST_CASE("contraction certificates for exp(-1)") {
    const auto map = MapSpec::exponential(-1.0);
    const auto part = build_partition(map, 10);
    std::vector<Complex> punctures;
    Complex z = 0.0;
    for (int i = 0; i < 12; ++i) {
        punctures.push_back(z);
        z = *evaluate(map, z);
    }
    punctures.push_back(testing::exp_fixed_point(-1.0, 0));
    const DomainSpec U = make_domain(punctures);
    double previous = 2.0;
    for (const double r : {30.0, 50.0, 70.0, 100.0}) {
        const Complex q{std::sqrt(r * r - M_PI * M_PI), -M_PI};
        const auto c = contraction_certificate(part, U, q);
        CHECK(c.certified);
        CHECK(c.simplyConnected);
        CHECK(c.etaBound < previous);
        CHECK(c.etaBound == doctest::Approx(eta_bound(U, StripRegion{-2.0 * M_PI, 0.0, part.tract_cutoff()}, q)));
        previous = c.etaBound;
    }
    // Close to a puncture of U the bound is vacuous.
    const auto vacuous = contraction_certificate(part, make_domain({0.0, {40.1, -M_PI}}), {40.0, -M_PI});
    CHECK(vacuous.etaBound > 1.0);
    CHECK_FALSE(vacuous.certified);
    // f(0) = -1 is a puncture.
    const DomainSpec W = make_domain({-1.0, 5.0});
    CHECK_THROWS_AS(contraction_certificate(part, W, 0.0), Error);
}

TEST_CASE("a puncture preimage inside the fundamental domain breaks simple connectivity") {
    const auto map = MapSpec::exponential(-1.0);
    const auto part = build_partition(map, 10);
    // -e^(5 - i pi / 2) has a preimage at 5 - i pi / 2, inside strip 0.
    const Complex p = -std::exp(Complex{5.0, -M_PI / 2.0});
    const auto c = contraction_certificate(part, make_domain({0.0, p}), {40.0, -M_PI});
    CHECK_FALSE(c.simplyConnected);
    CHECK_FALSE(c.certified);
}

TEST_CASE("horosphere expansion") {
    const PlaneMap doubling = [](Complex z) { return std::optional<Complex>(2.0 * z); };
    const auto h = horosphere_check(doubling, 2.0, 0.0, 0.05, 64);
    CHECK(h.holds);
    CHECK(h.minRatio[0] == doctest::Approx(2.0));
    CHECK_FALSE(horosphere_check(doubling, 2.0, 0.0, 0.5, 64).modeled);
    CHECK_THROWS_AS(horosphere_check(doubling, 0.5, 0.0, 0.05, 64), Error);
    CHECK_THROWS_AS(horosphere_check(doubling, 2.0, 1.0, 0.05, 64), Error);
    CHECK_THROWS_AS(horosphere_check(doubling, 2.0, 0.0, 0.0, 64), Error);

    const auto map = MapSpec::exponential(-1.0);
    for (int k = -2; k <= 2; ++k) {
        if (k == 0) continue;
        const Complex p = testing::exp_fixed_point(-1.0, k);
        bool previous = true;
        for (double delta = 0.1; delta > 1e-6; delta /= 2.0) {
            const bool holds = horosphere_check(map, p, delta).holds;
            if (previous) CHECK(holds);
            previous = holds;
        }
    }
    CHECK_THROWS_AS(horosphere_check(map, testing::exp_fixed_point(-1.0, 0), 1e-3), Error);
}

TEST_CASE("preimage sequences") {
    SUBCASE("exp(1), w = e, including the principal branch") {
        const auto s = preimage_sequence(MapSpec::exponential(1.0), std::exp(1.0), 10, 0);
        CHECK(std::abs(s.points[0] - 1.0) < 1e-15);
        for (std::size_t j = 0; j < s.points.size(); ++j) {
            CHECK(std::abs(s.points[j] - Complex{1.0, 2.0 * M_PI * static_cast<double>(j)}) < 1e-12);
        }
    }
    SUBCASE("exp(-1), w = 5") {
        const auto s = preimage_sequence(MapSpec::exponential(-1.0), 5.0, 50);
        REQUIRE(s.points.size() == 50);
        CHECK(s.maxResidual < 1e-9);
        CHECK(s.K <= 2.0);
        for (std::size_t j = 0; j + 1 < s.ratios.size(); ++j) CHECK(s.ratios[j + 1] <= s.ratios[j] + 1e-12);
        CHECK(s.points[0].imag() == doctest::Approx(3.0 * M_PI));
    }
    SUBCASE("cosine preimages solve the equation") {
        const auto map = MapSpec::cosine({1.0, 0.2}, {0.5, -0.1});
        const auto s = preimage_sequence(map, {3.0, 1.0}, 20);
        CHECK(s.maxResidual < 1e-9);
        for (const Complex p : s.points) CHECK(std::abs(*evaluate(map, p) - Complex{3.0, 1.0}) < 1e-9);
    }
    CHECK_THROWS_AS(preimage_sequence(MapSpec::exponential(1.0), 0.0, 10), Error);
    CHECK_THROWS_AS(preimage_sequence(MapSpec::exponential(1.0), 1.0, 1), Error);
    CHECK_THROWS_AS(preimage_sequence(MapSpec::scaled_bf(1.0), 1.0, 10), Error);
}
