#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mandeldecor/decoration.hpp"
#include "mandeldecor/dynamics.hpp"

namespace mandeldecor {

inline constexpr double kMinPixelSize = 1e-13;

struct Viewport {
    Complex center{};
    double width = 4.0;
    int pixels_x = 512;
    int pixels_y = 512;

    double pixel_size() const { return width / pixels_x; }
    // Row 0 is the top of the image (largest imaginary part).
    Complex pixel_center(int i, int j) const;
    // Throws std::invalid_argument on a bad size or when the pixel size drops below 1e-13.
    void validate() const;
};

struct Raster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;   // RGB, row-major

    Raster() = default;
    Raster(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {}
    std::uint8_t* at(int i, int j) { return &pixels[(static_cast<std::size_t>(j) * width + i) * 3]; }
    const std::uint8_t* at(int i, int j) const {
        return &pixels[(static_cast<std::size_t>(j) * width + i) * 3];
    }
};

enum class PixelClass : std::uint8_t {
    interior,     // bounded for max_iter steps
    near_set,     // escaped but below the potential floor (counted as M by decorated renders)
    boundary,     // distance estimate under the boundary width
    exterior,
    decoration,   // level stored separately
};

struct RenderSettings {
    int max_iter = 2000;
    int workers = 0;
    int tile_size = 64;
    double boundary_width = 0.5;       // in pixels
    double decoration_width = 0.5;     // Gamma_0 thickness in pixels
    double band_scale = 0.35;          // exterior colour cycles per unit of log2 potential
};

struct RenderStats {
    std::uint64_t interior = 0;
    std::uint64_t near_set = 0;
    std::uint64_t boundary = 0;
    std::uint64_t exterior = 0;
    std::array<std::uint64_t, kDefaultLevelCap + 1> levels{};

    std::uint64_t in_m() const { return interior + near_set; }
};

// Optional per-pixel classification, row-major; level is -1 except for decorations.
struct ClassMap {
    std::vector<PixelClass> cls;
    std::vector<std::int8_t> level;
};

using Rgb = std::array<std::uint8_t, 3>;
Rgb decoration_color(int level);
inline constexpr Rgb kInteriorColor{0, 0, 0};
inline constexpr Rgb kBoundaryColor{30, 30, 46};

Raster render_mandelbrot(const Viewport& vp, const RenderSettings& settings,
                         RenderStats* stats = nullptr, ClassMap* classes = nullptr);
Raster render_decorated(const DecorationModel& model, const Viewport& vp,
                        const RenderSettings& settings, RenderStats* stats = nullptr,
                        ClassMap* classes = nullptr);
Raster render_julia(Complex c, const Viewport& vp, const RenderSettings& settings,
                    RenderStats* stats = nullptr, ClassMap* classes = nullptr);

}  // namespace mandeldecor
