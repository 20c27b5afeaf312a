#include "mandeldecor/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mandeldecor {

namespace {

constexpr double kOverflow = 1e150;
constexpr double kGuardRadius = 4.0;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

struct PeriodicEval {
    Complex value;   // P^n(z)
    Complex dz;      // (P^n)'(z)
    bool overflow = false;
};

PeriodicEval eval_periodic(Complex c, Complex z, int n) {
    Complex dz{1.0, 0.0};
    for (int i = 0; i < n; ++i) {
        dz = 2.0 * z * dz;
        z = z * z + c;
        if (std::abs(z) > kOverflow || !finite(dz)) return {z, dz, true};
    }
    return {z, dz, false};
}

}  // namespace

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::lower_period: return "lower_period";
        case SolveStatus::no_convergence: return "no_convergence";
        case SolveStatus::diverged: return "diverged";
    }
    return "unknown";
}

std::vector<int> divisors(int n) {
    std::vector<int> out;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) out.push_back(d);
    return out;
}

OrbitRecord iterate(Complex c, Complex z0, int n, double escape_radius) {
    if (n < 0) throw std::invalid_argument("iterate: n must be >= 0");
    if (!(escape_radius >= 2.0)) throw std::invalid_argument("iterate: escape_radius must be >= 2");
    OrbitRecord rec;
    rec.points.reserve(static_cast<std::size_t>(n) + 1);
    rec.points.push_back(z0);
    Complex z = z0;
    if (std::abs(z) > escape_radius) {
        rec.escaped = true;
        rec.escape_index = 0;
    }
    for (int i = 0; i < n; ++i) {
        // once far past the escape radius the next square would overflow
        if (rec.escaped && std::abs(z) > kOverflow) break;
        rec.z_derivative = 2.0 * z * rec.z_derivative;
        rec.c_derivative = 2.0 * z * rec.c_derivative + 1.0;
        z = z * z + c;
        rec.points.push_back(z);
        if (!rec.escaped && std::abs(z) > escape_radius) {
            rec.escaped = true;
            rec.escape_index = i + 1;
        }
    }
    return rec;
}

EscapeResult escape_time(Complex c, Complex z0, int max_iter, double escape_radius) {
    if (max_iter < 1) throw std::invalid_argument("escape_time: max_iter must be >= 1");
    const double r2 = escape_radius * escape_radius;
    double x = z0.real(), y = z0.imag();
    const double cx = c.real(), cy = c.imag();
    if (x * x + y * y > r2) return {true, 0, z0};
    for (int i = 1; i <= max_iter; ++i) {
        const double nx = x * x - y * y + cx;
        y = 2.0 * x * y + cy;
        x = nx;
        if (x * x + y * y > r2) return {true, i, {x, y}};
    }
    return {false, max_iter, {x, y}};
}

CriticalOrbit critical_iterate(Complex c, int n) {
    Complex z{0.0, 0.0}, dc{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        dc = 2.0 * z * dc + 1.0;
        z = z * z + c;
        if (std::abs(z) > kOverflow) break;
    }
    return {z, dc};
}

int minimal_center_period(Complex c, int n, double tol) {
    Complex z{0.0, 0.0};
    for (int i = 1; i < n; ++i) {
        z = z * z + c;
        if (n % i == 0 && std::abs(z) < tol) return i;
    }
    return n;
}

CenterSolve solve_superattracting_center(int period, Complex seed, double tol, int max_steps) {
    if (period < 1) throw std::invalid_argument("solve_superattracting_center: period must be >= 1");
    CenterSolve out;
    Complex c = seed;
    for (int step = 0; step < max_steps; ++step) {
        const CriticalOrbit f = critical_iterate(c, period);
        out.steps = step + 1;
        if (!finite(f.z) || std::abs(f.z) > kOverflow || f.dz_dc == Complex{}) {
            out.status = SolveStatus::diverged;
            out.value = c;
            return out;
        }
        const Complex delta = f.z / f.dz_dc;
        if (std::abs(delta) > 1.0) {
            out.status = SolveStatus::diverged;
            out.value = c;
            return out;
        }
        c -= delta;
        if (std::abs(c) > kGuardRadius) {
            out.status = SolveStatus::diverged;
            out.value = c;
            return out;
        }
        if (std::abs(delta) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(c))) {
            break;
        }
    }
    out.value = c;
    out.residual = std::abs(critical_iterate(c, period).z);
    if (!(out.residual < tol)) {
        out.status = SolveStatus::no_convergence;
        return out;
    }
    out.minimal_period = minimal_center_period(c, period, 1e-8);
    out.status = out.minimal_period == period ? SolveStatus::converged : SolveStatus::lower_period;
    return out;
}

PeriodicPointResult solve_periodic_point(Complex c, int period, Complex seed, double tol,
                                         int max_steps) {
    if (period < 1) throw std::invalid_argument("solve_periodic_point: period must be >= 1");
    PeriodicPointResult out;
    out.period = period;
    Complex z = seed;
    const double guard = 2.0 + 2.0 * std::sqrt(std::abs(c));
    for (int step = 0; step < max_steps; ++step) {
        const PeriodicEval e = eval_periodic(c, z, period);
        if (e.overflow) {
            out.status = SolveStatus::diverged;
            out.location = z;
            return out;
        }
        const Complex g = e.value - z;
        if (std::abs(g) < tol) break;
        const Complex dg = e.dz - 1.0;
        if (dg == Complex{}) break;
        const Complex delta = g / dg;
        z -= delta;
        if (!finite(z) || std::abs(z) > guard) {
            out.status = SolveStatus::diverged;
            out.location = z;
            return out;
        }
        if (std::abs(delta) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(z)))
            break;
    }
    out.location = z;
    const PeriodicEval e = eval_periodic(c, z, period);
    out.residual = std::abs(e.value - z);
    out.multiplier = e.dz;
    if (!(out.residual < tol)) {
        out.status = SolveStatus::no_convergence;
        return out;
    }
    out.status = SolveStatus::converged;
    for (int d : divisors(period)) {
        if (d == period) break;
        const PeriodicEval ed = eval_periodic(c, z, d);
        if (std::abs(ed.value - z) < 1e-8 * (1.0 + std::abs(z))) {
            out.status = SolveStatus::lower_period;
            out.period = d;
            out.multiplier = ed.dz;
            out.residual = std::abs(ed.value - z);
            break;
        }
    }
    return out;
}

std::vector<Complex> iterate_jet(Complex c, Complex q, int n, int order) {
    if (order < 1) throw std::invalid_argument("iterate_jet: order must be >= 1");
    std::vector<Complex> a(static_cast<std::size_t>(order) + 1, Complex{});
    a[0] = q;
    a[1] = 1.0;
    std::vector<Complex> sq(a.size());
    for (int it = 0; it < n; ++it) {
        for (std::size_t k = 0; k < a.size(); ++k) {
            Complex s{};
            for (std::size_t i = 0; i <= k; ++i) s += a[i] * a[k - i];
            sq[k] = s;
        }
        sq[0] += c;
        a.swap(sq);
    }
    return a;
}

}  // namespace mandeldecor
