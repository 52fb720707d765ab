#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rayforge/core.hpp"

namespace rayforge {

struct Viewport {
    double reMin = -4.0;
    double reMax = 4.0;
    double imMin = -4.0;
    double imMax = 4.0;
};

inline constexpr int kMaxRasterSide = 16384;

struct RenderConfig {
    Viewport viewport;
    int width = 256;
    int height = 256;
    int maxIter = 50;
    double escapeRadius = 50.0;
    /// Polylines drawn in red (P6 only).
    std::vector<std::vector<Complex>> rays;
    /// Points drawn as 3x3 squares (P6 only).
    std::vector<Complex> points;
};

/// Throws InvalidArgument for sizes outside [1, 16384], a degenerate viewport,
/// maxIter < 1 or a non-positive escape radius.
void validate(const RenderConfig& config);

/// Pixel centre of column x, row y (row 0 at imMax).
Complex pixel_center(const RenderConfig& config, int x, int y);
/// Pixel containing z, or false when z is outside the viewport.
bool pixel_of(const RenderConfig& config, Complex z, int& x, int& y);

/// Escape iteration count scaled to 1..255 for escaping pixels, 0 otherwise.
/// Rows are computed in parallel; the result does not depend on the worker
/// count.
std::vector<std::uint8_t> escape_raster(const MapSpec& map, const RenderConfig& config,
                                        unsigned workers);

/// "P5 W H 255\n" followed by the raster.
std::string encode_pgm(const RenderConfig& config, const std::vector<std::uint8_t>& gray);

/// "P6 W H 255\n": grey background, rays red (255,0,0), points green (0,255,0).
std::string encode_ppm(const RenderConfig& config, const std::vector<std::uint8_t>& gray);

} // namespace rayforge
