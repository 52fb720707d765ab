#include "doctest.h"

#include <array>

#include "rayforge/error.hpp"
#include "rayforge/render.hpp"
#include "support.hpp"

using namespace rayforge;
using testing::Gen;

namespace {

// Direct iteration of -e^z on one pixel.
std::uint8_t reference_level(Complex z, int maxIter, double radius) {
    int n = 0;
    while (n < maxIter && std::abs(z) <= radius) {
        z = -std::exp(z);
        ++n;
    }
    if (std::isfinite(std::abs(z)) && std::abs(z) <= radius) return 0;
    return static_cast<std::uint8_t>(1 + 254 * (maxIter - n) / maxIter);
}

RenderConfig small() {
    RenderConfig c;
    c.viewport = {-2.0, 6.0, -4.0, 4.0};
    c.width = 96;
    c.height = 64;
    c.maxIter = 40;
    return c;
}

} // namespace

TEST_CASE("escape raster matches direct iteration and ignores the worker count") {
    const auto map = MapSpec::exponential(-1.0);
    const RenderConfig c = small();
    const auto one = escape_raster(map, c, 1);
    REQUIRE(one.size() == 96u * 64u);
    CHECK(escape_raster(map, c, 3) == one);
    CHECK(escape_raster(map, c, 8) == one);
    int escaping = 0;
    for (int y = 0; y < c.height; ++y) {
        for (int x = 0; x < c.width; ++x) {
            const auto level = one[static_cast<std::size_t>(y) * c.width + x];
            CHECK(level == reference_level(pixel_center(c, x, y), c.maxIter, c.escapeRadius));
            escaping += level > 0;
        }
    }
    CHECK(escaping > 0);
    CHECK(escaping < c.width * c.height);
}

TEST_CASE("pixel coordinates") {
    const RenderConfig c = small();
    Gen gen(71);
    for (int i = 0; i < 500; ++i) {
        const int x = gen.integer(0, c.width - 1);
        const int y = gen.integer(0, c.height - 1);
        int px = -1, py = -1;
        REQUIRE(pixel_of(c, pixel_center(c, x, y), px, py));
        CHECK(px == x);
        CHECK(py == y);
    }
    int px, py;
    CHECK_FALSE(pixel_of(c, {6.0, 0.0}, px, py));
    CHECK_FALSE(pixel_of(c, {0.0, -4.5}, px, py));
    CHECK(pixel_of(c, {-2.0, 4.0}, px, py));
    CHECK(px == 0);
    CHECK(py == 0);
}

TEST_CASE("netpbm encodings") {
    RenderConfig c = small();
    const auto gray = escape_raster(MapSpec::exponential(-1.0), c, 2);
    const std::string pgm = encode_pgm(c, gray);
    CHECK(pgm.rfind("P5 96 64 255\n", 0) == 0);
    CHECK(pgm.size() == 13 + gray.size());

    c.rays = {{{0.5, 0.5}, {3.5, 0.5}}};
    c.points = {{-1.0, -3.0}};
    const std::string ppm = encode_ppm(c, gray);
    const std::size_t offset = std::string("P6 96 64 255\n").size();
    CHECK(ppm.rfind("P6 96 64 255\n", 0) == 0);
    REQUIRE(ppm.size() == offset + 3 * gray.size());
    auto rgb = [&](int x, int y) {
        const std::size_t i = offset + 3 * (static_cast<std::size_t>(y) * c.width + x);
        return std::array<unsigned char, 3>{static_cast<unsigned char>(ppm[i]), static_cast<unsigned char>(ppm[i + 1]),
                                            static_cast<unsigned char>(ppm[i + 2])};
    };
    for (const double re : {0.5, 1.0, 2.0, 3.0, 3.4}) {
        int x, y;
        REQUIRE(pixel_of(c, {re, 0.5}, x, y));
        CHECK(rgb(x, y) == std::array<unsigned char, 3>{255, 0, 0});
    }
    int x, y;
    REQUIRE(pixel_of(c, {-1.0, -3.0}, x, y));
    CHECK(rgb(x + 1, y - 1) == std::array<unsigned char, 3>{0, 255, 0});
    // Untouched pixels stay grey.
    REQUIRE(pixel_of(c, {5.0, 3.0}, x, y));
    const auto g = gray[static_cast<std::size_t>(y) * c.width + x];
    CHECK(rgb(x, y) == std::array<unsigned char, 3>{g, g, g});
}

TEST_CASE("render configuration validation") {
    RenderConfig c = small();
    c.width = 0;
    CHECK_THROWS_AS(validate(c), Error);
    c = small();
    c.height = kMaxRasterSide + 1;
    CHECK_THROWS_AS(validate(c), Error);
    c = small();
    c.viewport.reMax = c.viewport.reMin;
    CHECK_THROWS_AS(validate(c), Error);
    c = small();
    c.maxIter = 0;
    CHECK_THROWS_AS(validate(c), Error);
    c = small();
    c.escapeRadius = -1.0;
    CHECK_THROWS_AS(validate(c), Error);
    CHECK_NOTHROW(validate(small()));
}
