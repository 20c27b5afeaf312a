#include "mandeldecor/render.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mandeldecor/boettcher.hpp"
#include "mandeldecor/parallel.hpp"

namespace mandeldecor {

namespace {

struct PixelResult {
    PixelClass cls = PixelClass::exterior;
    int level = -1;
    Rgb rgb{};
};

std::uint8_t channel(double x) {
    const double v = std::floor(255.0 * x + 0.5);
    return static_cast<std::uint8_t>(v < 0 ? 0 : v > 255 ? 255 : v);
}

// cosine palette on the smooth potential band
Rgb exterior_color(double green, double band_scale) {
    const double s = -std::log2(green) * band_scale;
    const double t = 2.0 * M_PI * s;
    return {channel(0.55 + 0.40 * std::cos(t)), channel(0.60 + 0.35 * std::cos(t + 0.9)),
            channel(0.70 + 0.30 * std::cos(t + 1.9))};
}

template <typename PixelFn>
Raster render_tiles(const Viewport& vp, const RenderSettings& settings, RenderStats* stats,
                    ClassMap* classes, PixelFn&& pixel) {
    vp.validate();
    if (settings.max_iter < 1) throw std::invalid_argument("render: max_iter must be >= 1");
    if (settings.tile_size < 1) throw std::invalid_argument("render: tile_size must be >= 1");
    Raster raster(vp.pixels_x, vp.pixels_y);
    const std::size_t npix = static_cast<std::size_t>(vp.pixels_x) * vp.pixels_y;
    std::vector<PixelClass> cls(npix);
    std::vector<std::int8_t> lev(npix, -1);
    const int ts = settings.tile_size;
    const int tx = (vp.pixels_x + ts - 1) / ts;
    const int ty = (vp.pixels_y + ts - 1) / ts;
    parallel_for(static_cast<std::size_t>(tx) * ty, resolve_workers(settings.workers),
                 [&](std::size_t t) {
                     const int x0 = static_cast<int>(t % tx) * ts;
                     const int y0 = static_cast<int>(t / tx) * ts;
                     const int x1 = std::min(x0 + ts, vp.pixels_x);
                     const int y1 = std::min(y0 + ts, vp.pixels_y);
                     for (int j = y0; j < y1; ++j)
                         for (int i = x0; i < x1; ++i) {
                             const PixelResult r = pixel(vp.pixel_center(i, j));
                             std::uint8_t* px = raster.at(i, j);
                             px[0] = r.rgb[0];
                             px[1] = r.rgb[1];
                             px[2] = r.rgb[2];
                             const std::size_t k = static_cast<std::size_t>(j) * vp.pixels_x + i;
                             cls[k] = r.cls;
                             lev[k] = static_cast<std::int8_t>(r.level);
                         }
                 });
    if (stats) {
        *stats = RenderStats{};
        for (std::size_t k = 0; k < npix; ++k) {
            switch (cls[k]) {
                case PixelClass::interior: ++stats->interior; break;
                case PixelClass::near_set: ++stats->near_set; break;
                case PixelClass::boundary: ++stats->boundary; break;
                case PixelClass::exterior: ++stats->exterior; break;
                case PixelClass::decoration:
                    if (lev[k] >= 0 && lev[k] <= kDefaultLevelCap) ++stats->levels[lev[k]];
                    break;
            }
        }
    }
    if (classes) {
        classes->cls = std::move(cls);
        classes->level = std::move(lev);
    }
    return raster;
}

}  // namespace

Complex Viewport::pixel_center(int i, int j) const {
    const double h = pixel_size();
    return center + Complex{((i + 0.5) - pixels_x / 2.0) * h, (pixels_y / 2.0 - (j + 0.5)) * h};
}

void Viewport::validate() const {
    if (pixels_x < 1 || pixels_y < 1)
        throw std::invalid_argument("viewport: pixel counts must be positive");
    if (!(width > 0.0) || !std::isfinite(width))
        throw std::invalid_argument("viewport: width must be positive");
    if (!std::isfinite(center.real()) || !std::isfinite(center.imag()))
        throw std::invalid_argument("viewport: center must be finite");
    if (!(pixel_size() > kMinPixelSize))
        throw std::invalid_argument("viewport: pixel size " + std::to_string(pixel_size()) +
                                    " is below the double-precision cap 1e-13");
}

Rgb decoration_color(int level) {
    static constexpr std::array<Rgb, kDefaultLevelCap + 1> table{{
        {230, 40, 40},   {250, 170, 20},  {240, 230, 50},  {80, 210, 60},   {30, 200, 200},
        {40, 120, 250},  {150, 70, 240},  {240, 80, 200},  {250, 250, 250}, {170, 120, 80},
        {120, 160, 120}, {120, 120, 170}, {200, 200, 120},
    }};
    if (level < 0) return kBoundaryColor;
    return table[static_cast<std::size_t>(std::min(level, kDefaultLevelCap))];
}

Raster render_mandelbrot(const Viewport& vp, const RenderSettings& settings, RenderStats* stats,
                         ClassMap* classes) {
    const double h = vp.pixel_size();
    return render_tiles(vp, settings, stats, classes, [&](Complex c) {
        PixelResult r;
        const BailoutOrbit o = mandel_bailout(c, settings.max_iter);
        if (!o.escaped) {
            r.cls = PixelClass::interior;
            r.rgb = kInteriorColor;
            return r;
        }
        const double a = std::abs(o.z);
        const double de = a * std::log(a) / std::abs(o.derivative);
        if (de < settings.boundary_width * h) {
            r.cls = PixelClass::boundary;
            r.rgb = kBoundaryColor;
            return r;
        }
        r.rgb = exterior_color(std::ldexp(std::log(a), 1 - o.steps), settings.band_scale);
        return r;
    });
}

Raster render_decorated(const DecorationModel& model, const Viewport& vp,
                        const RenderSettings& settings, RenderStats* stats, ClassMap* classes) {
    const double h = vp.pixel_size();
    return render_tiles(vp, settings, stats, classes, [&](Complex c) {
        PixelResult r;
        const MembershipVerdict v =
            decorated_membership_scaled(model, c, settings.max_iter, h, settings.decoration_width);
        if (v.kind == MembershipKind::InM) {
            const bool bounded = !escape_time(c, Complex{}, settings.max_iter, 2.0).escaped;
            r.cls = bounded ? PixelClass::interior : PixelClass::near_set;
            r.rgb = bounded ? kInteriorColor : kBoundaryColor;
            return r;
        }
        if (v.kind == MembershipKind::OnDecoration) {
            r.cls = PixelClass::decoration;
            r.level = v.level;
            r.rgb = decoration_color(v.level);
            return r;
        }
        if (mandel_distance_estimate(c, settings.max_iter) < settings.boundary_width * h) {
            r.cls = PixelClass::boundary;
            r.rgb = kBoundaryColor;
            return r;
        }
        r.rgb = exterior_color(v.witness_potential, settings.band_scale);
        return r;
    });
}

Raster render_julia(Complex c, const Viewport& vp, const RenderSettings& settings,
                    RenderStats* stats, ClassMap* classes) {
    const double h = vp.pixel_size();
    return render_tiles(vp, settings, stats, classes, [&](Complex z) {
        PixelResult r;
        const BailoutOrbit o = julia_bailout(c, z, settings.max_iter);
        if (!o.escaped) {
            r.cls = PixelClass::interior;
            r.rgb = kInteriorColor;
            return r;
        }
        const double a = std::abs(o.z);
        const double de = a * std::log(a) / std::abs(o.derivative);
        if (de < settings.boundary_width * h) {
            r.cls = PixelClass::boundary;
            r.rgb = kBoundaryColor;
            return r;
        }
        r.rgb = exterior_color(std::ldexp(std::log(a), -o.steps), settings.band_scale);
        return r;
    });
}

}  // namespace mandeldecor
