#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <sstream>

#include "mandeldecor/copy_atlas.hpp"

using namespace mandeldecor;

namespace {

const SectorConstants& root54() {
    static const SectorConstants s = fit_constants(Complex{-1.25, 0.0}, 2);
    return s;
}

// |P^n(0)| in extended precision, independent of the library's solver.
long double critical_value(Complex c, int n) {
    std::complex<long double> z = 0.0L, cc(c.real(), c.imag());
    for (int i = 0; i < n; ++i) z = z * z + cc;
    return std::abs(z);
}

}  // namespace

TEST(CenterTransform, InverseRoundtrip) {
    const auto& s = root54();
    const Complex v{-1.2, 0.03};
    EXPECT_LT(std::abs(center_transform_inverse(s, center_transform(s, v)) - v), 1e-14);
    const auto cusp = fit_constants(Complex{0.25, 0.0}, 1);
    const Complex w{0.3, 0.02};
    EXPECT_LT(std::abs(center_transform_inverse(cusp, center_transform(cusp, w)) - w), 1e-14);
    // the chosen square root branch has Im(A0 u) >= 0
    EXPECT_GE((*cusp.A0 / center_transform(cusp, w)).imag(), 0.0);
}

TEST(CenterTransform, TheoreticalSlope) {
    EXPECT_LT(std::abs(theoretical_slope(root54()) - Complex{0.0, 8.0 / M_PI}), 1e-8);
    const auto cusp = fit_constants(Complex{0.25, 0.0}, 1);
    EXPECT_LT(std::abs(theoretical_slope(cusp) - Complex{1.0 / M_PI, 0.0}), 1e-8);
}

TEST(CenterSequence, RecordsAreGenuineCenters) {
    const auto recs = find_center_sequence(root54(), {5, 20}, {10, 120}, 1e-10);
    ASSERT_GE(recs.size(), 12u);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        EXPECT_LT(critical_value(r.value, r.period), 1e-9L) << r.n;
        for (int d = 1; d < r.period; ++d)
            if (r.period % d == 0) EXPECT_GT(critical_value(r.value, d), 1e-6L) << r.n << " d=" << d;
        EXPECT_LE(r.residual, 1e-10);
        if (i > 0) {
            EXPECT_EQ(r.n, recs[i - 1].n + 1);
            EXPECT_EQ(r.period - recs[i - 1].period, 4);
            EXPECT_LT(std::abs(r.value - root54().c1), std::abs(recs[i - 1].value - root54().c1));
        }
    }
}

TEST(CenterSequence, IndependentOfWorkerCount) {
    CenterSearchOptions one, many;
    one.workers = 1;
    many.workers = 4;
    const auto a = find_center_sequence(root54(), {5, 14}, {10, 80}, 1e-10, one);
    const auto b = find_center_sequence(root54(), {5, 14}, {10, 80}, 1e-10, many);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].value, b[i].value);
        EXPECT_EQ(a[i].period, b[i].period);
    }
}

TEST(CenterSequence, PeriodThreeCuspLaw) {
    const auto s = fit_constants(Complex{-1.75, 0.0}, 3);
    const auto recs = find_center_sequence(s, {5, 20}, {10, 120}, 1e-10);
    ASSERT_GE(recs.size(), 12u);
    const auto fit = fit_center_law(s, recs);
    const Complex want = theoretical_slope(s);
    EXPECT_LT(std::abs(fit.slope - want) / std::abs(want), 0.05);
    double prev = INFINITY;
    for (const auto& r : recs) {
        const double ratio = r.seed_distance / std::abs(r.value - s.c1);
        EXPECT_LT(ratio, prev);
        prev = ratio;
    }
}

TEST(CenterSequence, RejectsBadRanges) {
    EXPECT_THROW(find_center_sequence(root54(), {0, 3}, {10, 20}), std::invalid_argument);
    SectorConstants blank;
    EXPECT_THROW(find_center_sequence(blank, {5, 6}, {10, 20}), std::invalid_argument);
    EXPECT_TRUE(find_center_sequence(root54(), {6, 5}, {10, 20}).empty());
}

TEST(CenterLaw, RecoversExactAffineData) {
    const auto& s = root54();
    const Complex slope{0.1, 2.5}, icpt{-0.3, 1.0};
    std::vector<CenterRecord> recs;
    for (int n = 12; n >= 5; --n) {
        CenterRecord r;
        r.n = n;
        r.value = center_transform_inverse(s, slope * static_cast<double>(n) + icpt);
        recs.push_back(r);
    }
    const auto fit = fit_center_law(s, recs);
    EXPECT_LT(std::abs(fit.slope - slope), 1e-10);
    EXPECT_LT(std::abs(fit.intercept - icpt), 1e-9);
    EXPECT_LT(fit.max_relative_residual, 1e-12);
    EXPECT_EQ(fit.count, 8);
    recs.resize(4);
    EXPECT_THROW(fit_center_law(s, recs), std::invalid_argument);
}

TEST(SmallJulia, CriticalPointInsideAtCenter) {
    const auto recs = find_center_sequence(root54(), {6, 8}, {10, 60}, 1e-10);
    ASSERT_FALSE(recs.empty());
    for (const auto& r : recs) {
        const double trap = default_trap_radius(r.value, r.period, r.period);
        EXPECT_GT(trap, 0.0);
        EXPECT_TRUE(small_filled_julia_contains(r.value, r.period, Complex{}, trap, 500));
        EXPECT_FALSE(small_filled_julia_contains(r.value, r.period, Complex{trap * 1.5, 0.0}, trap, 500));
    }
    EXPECT_THROW(default_trap_radius(Complex{-1.0, 0.0}, 3, 2), std::invalid_argument);
}

TEST(CenterCsv, Roundtrip) {
    std::vector<CenterRecord> recs{{5, 18, Complex{-1.2345678901234567, 0.0123}, 1e-15, 0.01},
                                   {6, 22, Complex{-1.23, -4e-5}, 0.0, 2e-3}};
    std::ostringstream os;
    os << "# c1 = -1.25\n";
    write_center_csv(os, recs);
    std::istringstream is(os.str());
    const auto back = read_center_csv(is);
    ASSERT_EQ(back.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(back[i].n, recs[i].n);
        EXPECT_EQ(back[i].period, recs[i].period);
        EXPECT_EQ(back[i].value, recs[i].value);
        EXPECT_EQ(back[i].residual, recs[i].residual);
        EXPECT_EQ(back[i].seed_distance, recs[i].seed_distance);
    }
    std::istringstream bad("n,period,re_s,im_s,residual,seed_distance\n1,2,3\n");
    EXPECT_THROW(read_center_csv(bad), std::invalid_argument);
}
