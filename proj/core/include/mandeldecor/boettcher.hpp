#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mandeldecor/dynamics.hpp"

namespace mandeldecor {

inline constexpr double kPotentialFloor = 1e-5;
inline constexpr int kDefaultPotentialIter = 10000;

struct PotentialResult {
    double green = 0.0;
    std::optional<Complex> boettcher;
    std::optional<Complex> gradient;   // (dG/dx, dG/dy) packed as a complex number
};

// Escaping orbit pushed to a large bailout, with its accumulated derivative.
struct BailoutOrbit {
    bool escaped = false;
    int steps = 0;          // number of squarings applied to the start point
    Complex z{};
    Complex derivative{};   // d/dz0 (Julia) or d/dc (parameter plane)
};

BailoutOrbit julia_bailout(Complex c, Complex z, int max_iter);
// Critical orbit starting at z_0 = 0, derivative in c.
BailoutOrbit mandel_bailout(Complex c, int max_iter);

double green_julia(Complex c, Complex z, int max_iter = kDefaultPotentialIter);
PotentialResult julia_potential(Complex c, Complex z, int max_iter = kDefaultPotentialIter);

// Boettcher coordinate of P_c at z. Requires z to escape faster than the critical point
// when c lies outside M.
Complex julia_boettcher(Complex c, Complex z, int max_iter = kDefaultPotentialIter);

double green_M(Complex c, int max_iter = kDefaultPotentialIter);
PotentialResult mandelbrot_potential(Complex c, int max_iter = kDefaultPotentialIter);

// Throws PotentialTooSmall when c is in M or G_M(c) < floor.
Complex phi_M(Complex c, double floor = kPotentialFloor);

struct InverseDiagnostic {
    std::vector<Complex> seeds_tried;
    int newton_steps = 0;
    double final_error = 0.0;
};

// Throws NumericalError (message lists seeds tried) when no seed converges.
Complex phi_M_inverse(Complex w, double tol = 1e-12, InverseDiagnostic* diag = nullptr);

// |z_n| log|z_n| / |dz_n|; throws NumericalError for non-escaping z.
double julia_distance_estimate(Complex c, Complex z, int max_iter = kDefaultPotentialIter);

// Same estimate in the parameter plane. Returns 0 for non-escaping c.
double mandel_distance_estimate(Complex c, int max_iter = kDefaultPotentialIter);

}  // namespace mandeldecor
