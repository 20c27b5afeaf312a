#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mandeldecor/parabolic.hpp"
#include "oracles.hpp"

using namespace mandeldecor;

TEST(ParabolicData, RootOfPeriodTwoComponent) {
    const auto s = fit_constants(Complex{-1.25, 0.0}, 2);
    EXPECT_EQ(s.nu, 2);
    EXPECT_EQ(s.p, 2);
    EXPECT_EQ(s.q_period, 2);
    EXPECT_FALSE(s.satellite_root);
    EXPECT_LT(std::abs(s.mu_c1 - Complex{-1.0, 0.0}), 1e-9);
    // the 2-cycle of z^2 - 5/4 is (-1 +- sqrt 2) / 2
    const double q1 = (std::sqrt(2.0) - 1.0) / 2.0, q2 = (-1.0 - std::sqrt(2.0)) / 2.0;
    EXPECT_LT(std::min(std::abs(s.q - q1), std::abs(s.q - q2)), 1e-6);
    ASSERT_TRUE(s.B0.has_value());
    EXPECT_NEAR(s.B0->real(), -4.0, 1e-8);
    EXPECT_NEAR(s.B0->imag(), 0.0, 1e-8);
    EXPECT_TRUE(s.complete());
}

TEST(ParabolicData, CuspOfMainCardioid) {
    const auto s = fit_constants(Complex{0.25, 0.0}, 1);
    EXPECT_EQ(s.nu, 1);
    EXPECT_LT(std::abs(s.q - 0.5), 1e-6);
    ASSERT_TRUE(s.A0.has_value());
    EXPECT_LT(std::abs(*s.A0 - Complex{0.0, 2.0}), 1e-8);
    EXPECT_GE(s.A0->imag(), 0.0);
}

TEST(ParabolicData, SatelliteRootFlagged) {
    const auto s = fit_constants(Complex{-0.75, 0.0}, 2);
    EXPECT_EQ(s.nu, 2);
    EXPECT_TRUE(s.satellite_root);
    EXPECT_EQ(s.q_period, 1);
    EXPECT_LT(std::abs(s.mu_c1 - Complex{1.0, 0.0}), 1e-9);
    ASSERT_TRUE(s.B0.has_value());
    EXPECT_LT(std::abs(*s.B0 - Complex{-2.0, 0.0}), 1e-6);
    EXPECT_THROW(fit_A0(s, default_fit_steps()), std::invalid_argument);
}

TEST(ParabolicData, PeriodThreeCusp) {
    const auto s = fit_constants(Complex{-1.75, 0.0}, 3);
    EXPECT_EQ(s.nu, 1);
    // parabolic 3-cycle point nearest 0, frozen from a 40-digit computation
    EXPECT_NEAR(std::abs(s.q), 0.054958132087371191422, 1e-6);
    ASSERT_TRUE(s.A0.has_value());
    EXPECT_LT(std::abs(*s.A0 - Complex{0.0, 14.0}), 1e-6);
}

TEST(ParabolicParameter, PeriodThreeDoubling) {
    const auto pp = solve_parabolic_parameter(3, Complex{-1.0, 0.0}, Complex{-1.768, 0.0},
                                              Complex{-1.768, 0.0});
    ASSERT_TRUE(pp.converged);
    EXPECT_NEAR(pp.c.real(), -1.768529152467685015, 1e-13);
    EXPECT_NEAR(pp.c.imag(), 0.0, 1e-13);
    EXPECT_NEAR(pp.z.real(), -1.765777199031651675, 1e-12);

    const auto s = fit_constants(pp.c, 3, pp.z);
    EXPECT_EQ(s.nu, 2);
    ASSERT_TRUE(s.B0.has_value());
    // finite-difference oracle in 40-digit arithmetic
    EXPECT_NEAR(s.B0->real(), -57.0579838369, 1e-6);
    EXPECT_LT(s.fit_residual, 1e-6);
}

TEST(Sector, MultiplierSectorShape) {
    EXPECT_TRUE(in_multiplier_sector(Complex{1.0, 0.01}, 0.1));
    EXPECT_TRUE(in_multiplier_sector(Complex{1.003, 0.01}, 0.1));
    EXPECT_FALSE(in_multiplier_sector(Complex{1.01, 0.0}, 0.1));
    EXPECT_FALSE(in_multiplier_sector(Complex{1.0, -0.01}, 0.1));
    EXPECT_FALSE(in_multiplier_sector(Complex{1.0, 0.2}, 0.1));
    EXPECT_FALSE(in_multiplier_sector(Complex{1.0, 0.0}, 0.1));
}

TEST(Sector, CuspSplitMultipliers) {
    const auto s = fit_constants(Complex{0.25, 0.0}, 1);
    EXPECT_TRUE(sector_contains(s, Complex{0.25 + 1e-4, 0.0}));
    EXPECT_FALSE(sector_contains(s, Complex{0.25 - 1e-4, 0.0}));
    EXPECT_FALSE(sector_contains(s, Complex{0.25, 0.0}));
    EXPECT_FALSE(sector_contains(s, Complex{0.6, 0.0}));
}

// Property: parameters built by prescribing the multiplier land on the matching side of the
// sector test.
TEST(Sector, PrescribedMultiplier) {
    const auto s = fit_constants(Complex{-1.25, 0.0}, 2);
    for (double t : {0.002, 0.01, 0.05}) {
        const auto in = solve_parabolic_parameter(2, s.mu_c1 * Complex{1.0, t}, s.c1, s.q);
        ASSERT_TRUE(in.converged);
        EXPECT_TRUE(sector_contains(s, in.c)) << t;
        const auto out = solve_parabolic_parameter(2, s.mu_c1 * Complex{1.0 + t, 0.0}, s.c1, s.q);
        ASSERT_TRUE(out.converged);
        EXPECT_FALSE(sector_contains(s, out.c)) << t;
        const auto mu = continued_multiplier(s, in.c);
        ASSERT_TRUE(mu.has_value());
        EXPECT_LT(std::abs(*mu - s.mu_c1 * Complex{1.0, t}), 1e-9);
    }
}

TEST(Tau, ReciprocalGrowth) {
    const auto s = fit_constants(Complex{-1.25, 0.0}, 2);
    const Complex a = tau_leading(s, s.c1 + Complex{1e-3, 1e-3});
    const Complex b = tau_leading(s, s.c1 + Complex{1e-4, 1e-4});
    EXPECT_NEAR(std::abs(b) / std::abs(a), 10.0, 1e-9);
    const auto cusp = fit_constants(Complex{0.25, 0.0}, 1);
    const double r = std::abs(tau_leading(cusp, Complex{0.25 + 1e-6, 0.0})) /
                     std::abs(tau_leading(cusp, Complex{0.25 + 1e-4, 0.0}));
    EXPECT_NEAR(r, 10.0, 1e-9);
}

TEST(OrbitPredicate, ParseAndFormat) {
    for (const char* text : {"re<=0", "abs>2", "im<0.5", "re>=-1"}) {
        const auto p = OrbitPredicate::parse(text);
        EXPECT_EQ(OrbitPredicate::parse(p.to_string()).to_string(), p.to_string());
    }
    const auto p = OrbitPredicate::parse("abs>2");
    EXPECT_TRUE(p(Complex{0.0, 2.5}));
    EXPECT_FALSE(p(Complex{2.0, 0.0}));
    const auto q = OrbitPredicate::parse("re<=0");
    EXPECT_TRUE(q(Complex{0.0, 5.0}));
    EXPECT_FALSE(q(Complex{1e-9, 0.0}));
    EXPECT_THROW(OrbitPredicate::parse("mod<3"), std::invalid_argument);
    EXPECT_THROW(OrbitPredicate::parse("re<"), std::invalid_argument);
}

TEST(Transit, MatchesBruteForce) {
    for (double eps : {3e-3, 1e-2, 4e-2, 1e-3, 2.5e-5}) {
        const auto got = gate_transit_count(Complex{0.25 + eps, 0.0}, 1, default_transit_entry(),
                                            default_transit_exit(), 10000000L);
        const auto want = oracle::brute_transit(0.25 + eps, 0.0, 2.0, 10000000L);
        ASSERT_TRUE(got && want);
        EXPECT_EQ(*got, *want) << eps;
    }
}

TEST(Transit, FrozenCountsAndMissingExit) {
    const long want[] = {30, 312, 3140};
    int i = 0;
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        const auto n = gate_transit_count(Complex{0.25 + eps, 0.0}, 1, default_transit_entry(),
                                          default_transit_exit(), 100000000L);
        ASSERT_TRUE(n.has_value());
        EXPECT_EQ(*n, want[i++]);
    }
    EXPECT_FALSE(gate_transit_count(Complex{0.2, 0.0}, 1, default_transit_entry(),
                                    default_transit_exit(), 10000L)
                     .has_value());
}

TEST(Windows, PredictionGeometry) {
    const auto s = fit_constants(Complex{-1.25, 0.0}, 2);
    for (int n : {5, 10, 20}) {
        const auto w = predict_window_center(s, n);
        EXPECT_EQ(w.n, n);
        EXPECT_NEAR(w.radius, std::abs(w.center - s.c1), 1e-15);
        EXPECT_NEAR(rouche_radius(w), std::pow(w.radius, 1.25), 1e-15);
        EXPECT_NEAR(rouche_radius(w, 0.5), std::pow(w.radius, 1.5), 1e-15);
    }
    // spacing shrinks like 1/n
    const double r10 = predict_window_center(s, 10).radius, r20 = predict_window_center(s, 20).radius;
    EXPECT_NEAR(r10 / r20, 2.0, 0.05);
    EXPECT_THROW(predict_window_center(s, 0), std::invalid_argument);
}

TEST(ConstantsText, Roundtrip) {
    const auto s = fit_constants(Complex{-1.25, 0.0}, 2);
    const auto back = sector_constants_from_text(to_text(s));
    EXPECT_EQ(back.c1, s.c1);
    EXPECT_EQ(back.nu, s.nu);
    EXPECT_EQ(back.nu_prime, s.nu_prime);
    EXPECT_EQ(back.B0, s.B0);
    EXPECT_EQ(back.q, s.q);
    EXPECT_EQ(to_text(back), to_text(s));
}

TEST(Csv, TransitAndPrediction) {
    std::ostringstream os;
    write_transit_csv(os, {{1e-2, 30}, {1e-4, std::nullopt}});
    EXPECT_EQ(os.str(), "eps,transit,transit_sqrt_eps\n0.01,30,3\n1e-04,NA,NA\n");
    std::ostringstream ps;
    write_prediction_csv(ps, {{3, Complex{-1.2, 0.5}, 0.25}});
    EXPECT_EQ(ps.str(), "n,re_center,im_center,radius\n3,-1.2,0.5,0.25\n");
}

TEST(Neville, ExactForPolynomials) {
    const std::vector<double> xs{0.1, 0.05, 0.025, 0.0125};
    std::vector<Complex> ys;
    for (double x : xs) ys.push_back(Complex{1.0 + 2.0 * x - 3.0 * x * x, 0.5 * x * x});
    double res = 1.0;
    const Complex y0 = neville_at_zero(xs, ys, &res);
    EXPECT_LT(std::abs(y0 - Complex{1.0, 0.0}), 1e-13);
    EXPECT_LT(res, 1e-12);
}
