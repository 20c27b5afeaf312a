#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mandeldecor/dynamics.hpp"

namespace mandeldecor {

struct SectorConstants {
    Complex c1{};
    int p = 1;
    int k = 1;
    int nu = 1;
    int nu_prime = 0;
    Complex mu_c1{1.0, 0.0};
    std::optional<Complex> A0;
    std::optional<Complex> B0;
    double r0 = 0.1;

    // Parabolic point and its minimal period under P (not under f = P^p).
    Complex q{};
    int q_period = 1;
    // Multiplier of f^k is 1 although nu >= 2 (petals come from a rotation of P itself).
    bool satellite_root = false;
    double fit_residual = 0.0;

    bool complete() const { return nu == 1 ? A0.has_value() : B0.has_value(); }
};

struct WindowPrediction {
    int n = 0;
    Complex center{};
    double radius = 0.0;
};

struct SectorTest {
    bool inside = false;
    Complex mu_ratio{};   // mu_c / mu_c1 (nu >= 2) or the split multiplier that was tested
    std::string diagnostic;
};

// Orbit-based seed: last point of a long critical orbit under P^p.
Complex find_parabolic_point(Complex c1, int p, int iterations = 20000);

// 2D Newton on P_c^d(z) = z, (P_c^d)'(z) = multiplier.
struct ParabolicParameter {
    Complex c{};
    Complex z{};
    bool converged = false;
};
ParabolicParameter solve_parabolic_parameter(int period, Complex multiplier, Complex c_seed,
                                             Complex z_seed, double tol = 1e-14,
                                             int max_steps = 100);

SectorConstants detect_parabolic_data(Complex c1, int p, Complex q_seed);

std::vector<double> default_fit_steps();

// Returns A0 with Im A0 >= 0; residual stored in *residual when non-null.
Complex fit_A0(const SectorConstants& constants, const std::vector<double>& steps,
               double* residual = nullptr);
Complex fit_B0(const SectorConstants& constants, const std::vector<double>& steps,
               double* residual = nullptr);

// detect_parabolic_data followed by the matching fit.
SectorConstants fit_constants(Complex c1, int p, std::optional<Complex> q_seed = std::nullopt,
                              const std::vector<double>& steps = default_fit_steps());

// Multiplier of f^k = P^(pk) at the continued parabolic point for parameter c (nu >= 2).
std::optional<Complex> continued_multiplier(const SectorConstants& constants, Complex c);

bool in_multiplier_sector(Complex mu, double r);
SectorTest sector_test(const SectorConstants& constants, Complex c);
bool sector_contains(const SectorConstants& constants, Complex c);

Complex tau_leading(const SectorConstants& constants, Complex c);

// Half-plane / disk predicate such as "re<=0" or "abs>2".
struct OrbitPredicate {
    enum class Quantity { re, im, abs };
    Quantity quantity = Quantity::re;
    bool less = true;
    bool inclusive = true;
    double threshold = 0.0;

    bool operator()(Complex z) const;
    std::string to_string() const;
    static OrbitPredicate parse(const std::string& text);
};

OrbitPredicate default_transit_entry();
OrbitPredicate default_transit_exit();

// Steps of P^(p * k_nu) taken by the critical orbit from the first point satisfying
// entry to the first later point satisfying exit. Empty if exit is not reached.
std::optional<long> gate_transit_count(Complex c, int p, const OrbitPredicate& entry,
                                       const OrbitPredicate& exit, long max_iter,
                                       int k_nu = 1);

WindowPrediction predict_window_center(const SectorConstants& constants, int n,
                                       Complex v = Complex{});
double rouche_radius(const WindowPrediction& prediction, double beta = 0.25);

std::string to_text(const SectorConstants& constants);
SectorConstants sector_constants_from_text(const std::string& text);

struct TransitRow {
    double eps = 0.0;
    std::optional<long> count;
};
void write_transit_csv(std::ostream& out, const std::vector<TransitRow>& rows);
void write_prediction_csv(std::ostream& out, const std::vector<WindowPrediction>& rows);

// Polynomial extrapolation of ys(xs) to x = 0. residual = change when the last point is dropped.
Complex neville_at_zero(const std::vector<double>& xs, const std::vector<Complex>& ys,
                        double* residual = nullptr);

}  // namespace mandeldecor
