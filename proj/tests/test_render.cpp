#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <set>

#include "mandeldecor/decoration.hpp"
#include "mandeldecor/parallel.hpp"
#include "mandeldecor/render.hpp"

using namespace mandeldecor;

namespace {

bool naive_bounded(Complex c, int max_iter) {
    Complex z = 0.0;
    for (int i = 0; i < max_iter; ++i) {
        z = z * z + c;
        if (std::abs(z) > 2.0) return false;
    }
    return true;
}

std::uint64_t total(const RenderStats& s) {
    std::uint64_t t = s.interior + s.near_set + s.boundary + s.exterior;
    for (auto l : s.levels) t += l;
    return t;
}

}  // namespace

TEST(Viewport, PixelGeometry) {
    Viewport vp;
    vp.center = Complex{-0.5, 0.25};
    vp.width = 4.0;
    vp.pixels_x = 8;
    vp.pixels_y = 4;
    EXPECT_DOUBLE_EQ(vp.pixel_size(), 0.5);
    EXPECT_EQ(vp.pixel_center(0, 0), Complex(-0.5 - 1.75, 0.25 + 0.75));
    EXPECT_EQ(vp.pixel_center(7, 3), Complex(-0.5 + 1.75, 0.25 - 0.75));
    // row 0 is the top
    EXPECT_GT(vp.pixel_center(2, 0).imag(), vp.pixel_center(2, 1).imag());
    EXPECT_NO_THROW(vp.validate());
}

TEST(Viewport, ValidateRejectsBadInput) {
    Viewport vp;
    vp.width = 1e-12;
    vp.pixels_x = vp.pixels_y = 100;
    EXPECT_THROW(vp.validate(), std::invalid_argument);
    vp.width = 1.0;
    vp.pixels_y = 0;
    EXPECT_THROW(vp.validate(), std::invalid_argument);
    vp.pixels_y = 10;
    vp.width = -1.0;
    EXPECT_THROW(vp.validate(), std::invalid_argument);
    vp.width = 1.0;
    EXPECT_THROW(render_mandelbrot(Viewport{Complex{}, 1e-13, 100, 100}, RenderSettings{}),
                 std::invalid_argument);
}

// Property: a pixel is painted interior exactly when its orbit stays bounded.
TEST(RenderMandelbrot, InteriorMatchesNaiveEscape) {
    Viewport vp{Complex{-0.6, 0.0}, 3.0, 96, 80};
    RenderSettings st;
    st.max_iter = 300;
    ClassMap cm;
    RenderStats stats;
    const Raster img = render_mandelbrot(vp, st, &stats, &cm);
    ASSERT_EQ(img.width, 96);
    ASSERT_EQ(img.height, 80);
    ASSERT_EQ(cm.cls.size(), 96u * 80u);
    std::uint64_t interior = 0;
    for (int j = 0; j < vp.pixels_y; ++j)
        for (int i = 0; i < vp.pixels_x; ++i) {
            const bool in = cm.cls[static_cast<std::size_t>(j) * 96 + i] == PixelClass::interior;
            EXPECT_EQ(in, naive_bounded(vp.pixel_center(i, j), st.max_iter)) << i << "," << j;
            if (in) {
                ++interior;
                const auto* px = img.at(i, j);
                EXPECT_EQ(px[0], 0);
                EXPECT_EQ(px[1], 0);
                EXPECT_EQ(px[2], 0);
            }
        }
    EXPECT_EQ(interior, stats.interior);
    EXPECT_EQ(total(stats), 96u * 80u);
    EXPECT_GT(stats.boundary, 0u);
    EXPECT_GT(stats.exterior, 0u);
}

TEST(RenderMandelbrot, DeterministicAcrossWorkersAndTiles) {
    Viewport vp{Complex{-0.75, 0.1}, 0.5, 150, 110};
    RenderSettings st;
    st.max_iter = 500;
    st.workers = 1;
    const Raster a = render_mandelbrot(vp, st);
    st.workers = 5;
    const Raster b = render_mandelbrot(vp, st);
    st.tile_size = 17;
    const Raster c = render_mandelbrot(vp, st);
    EXPECT_EQ(a.pixels, b.pixels);
    EXPECT_EQ(a.pixels, c.pixels);
}

TEST(RenderDecorated, AgreesWithPointQueries) {
    const auto model = make_decoration_model(Complex{-0.77, 0.18});
    Viewport vp{Complex{}, 2.1 * model.R * model.R, 120, 120};
    RenderSettings st;
    st.max_iter = 400;
    RenderStats stats;
    ClassMap cm;
    render_decorated(model, vp, st, &stats, &cm);
    EXPECT_EQ(total(stats), 120u * 120u);
    EXPECT_GT(stats.levels[0], 0u);
    for (int j = 0; j < vp.pixels_y; j += 3)
        for (int i = 0; i < vp.pixels_x; i += 3) {
            const std::size_t k = static_cast<std::size_t>(j) * 120 + i;
            const auto v = decorated_membership_scaled(model, vp.pixel_center(i, j), st.max_iter,
                                                       vp.pixel_size(), st.decoration_width);
            if (v.kind == MembershipKind::OnDecoration) {
                EXPECT_EQ(cm.cls[k], PixelClass::decoration);
                EXPECT_EQ(cm.level[k], v.level);
            } else if (v.kind == MembershipKind::InM) {
                EXPECT_TRUE(cm.cls[k] == PixelClass::interior || cm.cls[k] == PixelClass::near_set);
            } else {
                EXPECT_TRUE(cm.cls[k] == PixelClass::boundary || cm.cls[k] == PixelClass::exterior);
            }
        }
}

TEST(RenderJulia, UnitDiskForZero) {
    Viewport vp{Complex{}, 3.0, 60, 60};
    RenderSettings st;
    st.max_iter = 200;
    ClassMap cm;
    render_julia(Complex{}, vp, st, nullptr, &cm);
    for (int j = 0; j < 60; ++j)
        for (int i = 0; i < 60; ++i) {
            const double r = std::abs(vp.pixel_center(i, j));
            const PixelClass c = cm.cls[static_cast<std::size_t>(j) * 60 + i];
            if (r < 0.95) EXPECT_EQ(c, PixelClass::interior);
            if (r > 1.1) EXPECT_EQ(c, PixelClass::exterior);
        }
}

TEST(Palette, DecorationLevelsDistinct) {
    std::set<Rgb> seen;
    for (int m = 0; m <= kDefaultLevelCap; ++m) seen.insert(decoration_color(m));
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(kDefaultLevelCap + 1));
    EXPECT_EQ(seen.count(kInteriorColor), 0u);
}

TEST(Parallel, CoversEveryIndexOnce) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
    parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(Parallel, RethrowsFirstError) {
    EXPECT_THROW(parallel_for(100, 3,
                              [](std::size_t i) {
                                  if (i == 42) throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
}

TEST(Parallel, EnvironmentCapsWorkers) {
    ::setenv("MANDELDECOR_THREADS", "2", 1);
    EXPECT_EQ(resolve_workers(8), 2);
    EXPECT_EQ(resolve_workers(1), 1);
    ::unsetenv("MANDELDECOR_THREADS");
    EXPECT_EQ(resolve_workers(3), 3);
    EXPECT_GE(resolve_workers(0), 1);
}
