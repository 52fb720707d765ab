#include "rayforge/render.hpp"

#include <algorithm>
#include <cmath>

#include "rayforge/error.hpp"
#include "rayforge/parallel.hpp"

namespace rayforge {

namespace {

std::string header(const char* magic, const RenderConfig& c) {
    return std::string(magic) + " " + std::to_string(c.width) + " " + std::to_string(c.height) + " 255\n";
}

void put_red(std::string& rgb, std::size_t offset, const RenderConfig& c, int x, int y) {
    if (x < 0 || y < 0 || x >= c.width || y >= c.height) return;
    const std::size_t i = offset + 3 * (static_cast<std::size_t>(y) * c.width + x);
    rgb[i] = static_cast<char>(255);
    rgb[i + 1] = 0;
    rgb[i + 2] = 0;
}

// Continuous pixel coordinates (x to the right, y downwards).
void to_pixel_space(const RenderConfig& c, Complex z, double& px, double& py) {
    const Viewport& v = c.viewport;
    px = (z.real() - v.reMin) / (v.reMax - v.reMin) * c.width;
    py = (v.imMax - z.imag()) / (v.imMax - v.imMin) * c.height;
}

void draw_segment(std::string& rgb, std::size_t offset, const RenderConfig& c, Complex a, Complex b) {
    double ax, ay, bx, by;
    to_pixel_space(c, a, ax, ay);
    to_pixel_space(c, b, bx, by);
    const double limit = 4.0 * (c.width + c.height);
    // Segments far outside the raster are clipped to a box around it.
    auto outside = [&](double x, double y) { return std::abs(x) > limit || std::abs(y) > limit; };
    if (outside(ax, ay) && outside(bx, by)) return;
    const int steps = static_cast<int>(std::ceil(std::max(std::abs(bx - ax), std::abs(by - ay)) * 2.0));
    const int n = std::clamp(steps, 1, 1 << 20);
    for (int i = 0; i <= n; ++i) {
        const double s = static_cast<double>(i) / n;
        const double x = ax + s * (bx - ax);
        const double y = ay + s * (by - ay);
        if (outside(x, y)) continue;
        put_red(rgb, offset, c, static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y)));
    }
}

} // namespace

void validate(const RenderConfig& c) {
    if (c.width < 1 || c.width > kMaxRasterSide || c.height < 1 || c.height > kMaxRasterSide) {
        throw Error(ErrorCode::InvalidArgument, "width and height must lie in [1, 16384]");
    }
    const Viewport& v = c.viewport;
    if (!(v.reMax > v.reMin) || !(v.imMax > v.imMin) || !std::isfinite(v.reMax - v.reMin) ||
        !std::isfinite(v.imMax - v.imMin)) {
        throw Error(ErrorCode::InvalidArgument, "degenerate viewport");
    }
    if (c.maxIter < 1) throw Error(ErrorCode::InvalidArgument, "maxIter must be positive");
    if (!(c.escapeRadius > 0.0)) throw Error(ErrorCode::InvalidArgument, "escape radius must be positive");
}

Complex pixel_center(const RenderConfig& c, int x, int y) {
    const Viewport& v = c.viewport;
    return {v.reMin + (x + 0.5) * (v.reMax - v.reMin) / c.width,
            v.imMax - (y + 0.5) * (v.imMax - v.imMin) / c.height};
}

bool pixel_of(const RenderConfig& c, Complex z, int& x, int& y) {
    double px, py;
    to_pixel_space(c, z, px, py);
    if (!(px >= 0.0 && px < c.width && py >= 0.0 && py < c.height)) return false;
    x = static_cast<int>(px);
    y = static_cast<int>(py);
    return true;
}

std::vector<std::uint8_t> escape_raster(const MapSpec& map, const RenderConfig& c, unsigned workers) {
    validate(c);
    std::vector<std::uint8_t> gray(static_cast<std::size_t>(c.width) * c.height, 0);
    parallel_for(static_cast<std::size_t>(c.height), workers, [&](std::size_t row) {
        const int y = static_cast<int>(row);
        for (int x = 0; x < c.width; ++x) {
            std::optional<Complex> z = pixel_center(c, x, y);
            int n = 0;
            while (n < c.maxIter && z && std::abs(*z) <= c.escapeRadius) {
                z = evaluate(map, *z);
                ++n;
            }
            if (z && std::abs(*z) <= c.escapeRadius) continue;
            const int level = 1 + (254 * std::max(0, c.maxIter - n)) / c.maxIter;
            gray[row * c.width + x] = static_cast<std::uint8_t>(level);
        }
    });
    return gray;
}

std::string encode_pgm(const RenderConfig& c, const std::vector<std::uint8_t>& gray) {
    std::string out = header("P5", c);
    out.append(gray.begin(), gray.end());
    return out;
}

std::string encode_ppm(const RenderConfig& c, const std::vector<std::uint8_t>& gray) {
    std::string out = header("P6", c);
    const std::size_t offset = out.size();
    out.reserve(offset + 3 * gray.size());
    for (const std::uint8_t g : gray) out.append(3, static_cast<char>(g));
    for (const auto& ray : c.rays) {
        if (ray.size() == 1) draw_segment(out, offset, c, ray[0], ray[0]);
        for (std::size_t k = 0; k + 1 < ray.size(); ++k) draw_segment(out, offset, c, ray[k], ray[k + 1]);
    }
    for (const Complex p : c.points) {
        int x, y;
        if (!pixel_of(c, p, x, y)) continue;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int xx = x + dx;
                const int yy = y + dy;
                if (xx < 0 || yy < 0 || xx >= c.width || yy >= c.height) continue;
                const std::size_t i = offset + 3 * (static_cast<std::size_t>(yy) * c.width + xx);
                out[i] = 0;
                out[i + 1] = static_cast<char>(255);
                out[i + 2] = 0;
            }
        }
    }
    return out;
}

} // namespace rayforge
