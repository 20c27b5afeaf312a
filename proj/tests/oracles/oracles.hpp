#pragma once

#include <complex>
#include <optional>
#include <vector>

// Test-only reference computations. None of these call into the library.
namespace oracle {

using C = std::complex<double>;

// Integer coefficients of P_c^p(0) as a polynomial in c, lowest degree first.
std::vector<double> center_polynomial(int p);
C horner(const std::vector<double>& coeffs, C c, C* derivative);

// All distinct roots of P_c^p(0) found by Newton from a grid x grid seed lattice over D(2).
std::vector<C> grid_newton_roots(int p, int grid = 200);

// Roots of exact period p: grid roots minus the roots of P^d(0) for proper divisors d.
std::vector<C> exact_period_centers(int p, int grid = 200);

// Bisection on a real interval where f changes sign.
template <typename F>
double bisect(F f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm <= 0) == (flo <= 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Central difference of the critical orbit P_c^n(0) in c.
C fd_critical_derivative(C c, int n, double h);

// Traces the external ray of angle theta (turns) inward to potential G. Returns c with
// Phi_M(c) = exp(G + 2 pi i theta).
C ray_point(double theta, double G, int sharpness = 16);

// Plain escape-radius potential, log|z_n| / 2^(n-1) for the critical value orbit.
double naive_green_M(C c, int max_iter = 100000);

// Critical-orbit transit count by direct iteration of z^2 + c.
std::optional<long> brute_transit(double c, double entry_max_re, double exit_abs, long max_iter);

}  // namespace oracle
