#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace mandeldecor {

using Complex = std::complex<double>;

inline constexpr double kDefaultEscapeRadius = 4.0;

struct OrbitRecord {
    std::vector<Complex> points;           // points[0] = z0
    bool escaped = false;
    std::optional<int> escape_index;
    Complex z_derivative{1.0, 0.0};        // d/dz0 of the last computed point
    Complex c_derivative{0.0, 0.0};        // d/dc of the last computed point
};

struct EscapeResult {
    bool escaped = false;
    int iterations = 0;
    Complex final{};
};

enum class SolveStatus {
    converged,
    lower_period,   // converged, but the minimal period is a proper divisor
    no_convergence,
    diverged,       // left the guard disk or took a step larger than 1
};

const char* to_string(SolveStatus s);

struct CenterSolve {
    SolveStatus status = SolveStatus::no_convergence;
    Complex value{};
    int minimal_period = 0;
    double residual = 0.0;
    int steps = 0;

    bool ok() const { return status == SolveStatus::converged; }
};

struct PeriodicPointResult {
    SolveStatus status = SolveStatus::no_convergence;
    Complex location{};
    int period = 0;            // minimal period found by the divisor check
    Complex multiplier{};      // derivative of P^period at location
    double residual = 0.0;

    bool ok() const { return status == SolveStatus::converged; }
};

// Iterates z -> z^2 + c n times. Stops early once |z| > escape_radius.
OrbitRecord iterate(Complex c, Complex z0, int n, double escape_radius = kDefaultEscapeRadius);

EscapeResult escape_time(Complex c, Complex z0, int max_iter, double escape_radius = 2.0);

// Newton in c on P_c^period(0) = 0.
CenterSolve solve_superattracting_center(int period, Complex seed, double tol = 1e-13,
                                         int max_steps = 100);

// Newton in z on P_c^period(z) - z = 0; reports the minimal period actually found.
PeriodicPointResult solve_periodic_point(Complex c, int period, Complex seed, double tol = 1e-13,
                                         int max_steps = 100);

// P_c^n(0) with its c-derivative.
struct CriticalOrbit {
    Complex z;
    Complex dz_dc;
};
CriticalOrbit critical_iterate(Complex c, int n);

// Taylor coefficients a_0..a_order of P_c^n(q + t) in t.
std::vector<Complex> iterate_jet(Complex c, Complex q, int n, int order);

// Smallest d dividing n with |P_c^d(0)| < tol, or n when none does.
int minimal_center_period(Complex c, int n, double tol);

std::vector<int> divisors(int n);

}  // namespace mandeldecor
