#include "mandeldecor/boettcher.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mandeldecor/error.hpp"

namespace mandeldecor {

namespace {

constexpr double kBailout = 1e50;
constexpr double kTrackRadius = 8.0;
constexpr int kTailTerms = 64;

// Principal-branch product tail, valid once |c / z^2| is small.
Complex boettcher_tail(Complex c, Complex z) {
    Complex s = std::log(z);
    double scale = 0.5;
    for (int n = 0; n < kTailTerms; ++n) {
        s += scale * std::log(1.0 + c / (z * z));
        z = z * z + c;
        scale *= 0.5;
        if (std::abs(z) > kBailout) break;
    }
    return std::exp(s);
}

// Walk back from the first orbit point outside kTrackRadius, taking at each step the
// square root nearest the orbit point.
Complex tracked_boettcher(Complex c, Complex z, int max_iter) {
    std::vector<Complex> orbit{z};
    while (std::abs(orbit.back()) <= kTrackRadius || std::abs(c) > std::norm(orbit.back()) / 8.0) {
        if (static_cast<int>(orbit.size()) > max_iter)
            throw PotentialTooSmall("boettcher: orbit did not reach the tracking radius");
        const Complex& b = orbit.back();
        orbit.push_back(b * b + c);
    }
    Complex w = boettcher_tail(c, orbit.back());
    for (auto it = orbit.rbegin() + 1; it != orbit.rend(); ++it) {
        Complex r = std::sqrt(w);
        if ((r * std::conj(*it)).real() < 0.0) r = -r;
        w = r;
    }
    return w;
}

double escape_radius_for(Complex c) { return std::max(2.0, std::abs(c)); }

}  // namespace

BailoutOrbit julia_bailout(Complex c, Complex z, int max_iter) {
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    const double er = escape_radius_for(c);
    BailoutOrbit out;
    Complex dz{1.0, 0.0};
    int n = 0;
    while (std::norm(z) <= er * er) {
        if (n >= max_iter) {
            out.steps = n;
            out.z = z;
            out.derivative = dz;
            return out;
        }
        dz = 2.0 * z * dz;
        z = z * z + c;
        ++n;
    }
    while (std::abs(z) <= kBailout) {
        dz = 2.0 * z * dz;
        z = z * z + c;
        ++n;
    }
    out.escaped = true;
    out.steps = n;
    out.z = z;
    out.derivative = dz;
    return out;
}

BailoutOrbit mandel_bailout(Complex c, int max_iter) {
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
    BailoutOrbit out;
    Complex z{}, dc{};
    int n = 0;
    while (std::norm(z) <= 4.0) {
        if (n >= max_iter) {
            out.steps = n;
            out.z = z;
            out.derivative = dc;
            return out;
        }
        dc = 2.0 * z * dc + 1.0;
        z = z * z + c;
        ++n;
    }
    while (std::abs(z) <= kBailout) {
        dc = 2.0 * z * dc + 1.0;
        z = z * z + c;
        ++n;
    }
    out.escaped = true;
    out.steps = n;
    out.z = z;
    out.derivative = dc;
    return out;
}

double green_julia(Complex c, Complex z, int max_iter) {
    const BailoutOrbit o = julia_bailout(c, z, max_iter);
    if (!o.escaped) return 0.0;
    return std::ldexp(std::log(std::abs(o.z)), -o.steps);
}

PotentialResult julia_potential(Complex c, Complex z, int max_iter) {
    const BailoutOrbit o = julia_bailout(c, z, max_iter);
    PotentialResult r;
    if (!o.escaped) return r;
    r.green = std::ldexp(std::log(std::abs(o.z)), -o.steps);
    r.gradient = std::conj(std::ldexp(1.0, -o.steps) * o.derivative / o.z);
    const double g0 = green_julia(c, Complex{}, max_iter);
    if (g0 == 0.0 || r.green > g0) r.boettcher = tracked_boettcher(c, z, max_iter + 64);
    return r;
}

Complex julia_boettcher(Complex c, Complex z, int max_iter) {
    const double gz = green_julia(c, z, max_iter);
    if (gz == 0.0) throw NumericalError("julia_boettcher: z does not escape");
    const double g0 = green_julia(c, Complex{}, max_iter);
    if (g0 > 0.0 && gz <= g0)
        throw NumericalError("julia_boettcher: z is not above the critical level");
    return tracked_boettcher(c, z, max_iter + 64);
}

double green_M(Complex c, int max_iter) {
    const BailoutOrbit o = mandel_bailout(c, max_iter);
    if (!o.escaped) return 0.0;
    return std::ldexp(std::log(std::abs(o.z)), 1 - o.steps);
}

PotentialResult mandelbrot_potential(Complex c, int max_iter) {
    const BailoutOrbit o = mandel_bailout(c, max_iter);
    PotentialResult r;
    if (!o.escaped) return r;
    r.green = std::ldexp(std::log(std::abs(o.z)), 1 - o.steps);
    r.gradient = std::conj(std::ldexp(1.0, 1 - o.steps) * o.derivative / o.z);
    if (r.green >= kPotentialFloor) r.boettcher = phi_M(c);
    return r;
}

Complex phi_M(Complex c, double floor) {
    const double g = green_M(c, kDefaultPotentialIter);
    if (!(g >= floor)) {
        std::ostringstream os;
        os << "phi_M: potential too small at c=" << c << " (G_M=" << g << ", floor=" << floor
           << ")";
        throw PotentialTooSmall(os.str());
    }
    return tracked_boettcher(c, c, kDefaultPotentialIter);
}

namespace {

bool newton_invert(Complex w, Complex c, double tol, int max_steps, Complex& out, int& steps) {
    Complex f;
    try {
        f = phi_M(c) - w;
    } catch (const PotentialTooSmall&) {
        return false;
    }
    for (int it = 0; it < max_steps; ++it) {
        ++steps;
        if (std::abs(f) < tol) {
            out = c;
            return true;
        }
        const double d = mandel_distance_estimate(c);
        const double h = std::max(1e-5 * d, 1e-9 * std::abs(c));
        Complex df;
        try {
            df = (phi_M(c + h) - phi_M(c - h)) / (2.0 * h);
        } catch (const PotentialTooSmall&) {
            return false;
        }
        if (df == Complex{}) return false;
        Complex delta = f / df;
        bool moved = false;
        for (int half = 0; half < 30; ++half) {
            try {
                const Complex cn = c - delta;
                const Complex fn = phi_M(cn) - w;
                if (std::abs(fn) < std::abs(f) || std::abs(fn) < tol) {
                    c = cn;
                    f = fn;
                    moved = true;
                    break;
                }
            } catch (const PotentialTooSmall&) {
            }
            delta *= 0.5;
        }
        if (!moved) {
            if (std::abs(f) < tol) break;
            return false;
        }
    }
    if (std::abs(f) < tol) {
        out = c;
        return true;
    }
    return false;
}

}  // namespace

Complex phi_M_inverse(Complex w, double tol, InverseDiagnostic* diag) {
    if (!(std::abs(w) > 1.0 + 1e-4))
        throw std::invalid_argument("phi_M_inverse: |w| must exceed 1 + 1e-4");
    InverseDiagnostic local;
    InverseDiagnostic& dg = diag ? *diag : local;
    dg = InverseDiagnostic{};
    const double target = std::log(std::abs(w));
    const double angle = std::arg(w);
    Complex result;

    dg.seeds_tried.push_back(w);
    if (target >= 2.0) {
        if (newton_invert(w, w, tol, 60, result, dg.newton_steps)) return result;
    } else {
        // follow the external ray inward from potential 2 in steps of 2^{-1/4}
        Complex c = std::polar(std::exp(2.0), angle);
        bool ok = true;
        double g = 2.0;
        while (ok) {
            g = std::max(target, g * std::pow(2.0, -0.25));
            const Complex wg = g == target ? w : std::polar(std::exp(g), angle);
            const double stage_tol = g == target ? tol : 1e-9 * std::abs(wg);
            ok = newton_invert(wg, c, stage_tol, 60, c, dg.newton_steps);
            if (ok && g == target) return c;
        }
    }

    const double radius = std::abs(w) + 0.1;
    for (int j = 0; j < 16; ++j) {
        const Complex seed = std::polar(radius, angle + 2.0 * M_PI * j / 16.0);
        dg.seeds_tried.push_back(seed);
        if (newton_invert(w, seed, tol, 100, result, dg.newton_steps)) return result;
    }
    std::ostringstream os;
    os << "phi_M_inverse: no convergence for w=" << w << "; seeds tried:";
    for (const Complex& s : dg.seeds_tried) os << ' ' << s;
    throw NumericalError(os.str());
}

double julia_distance_estimate(Complex c, Complex z, int max_iter) {
    const BailoutOrbit o = julia_bailout(c, z, max_iter);
    if (!o.escaped) throw NumericalError("julia_distance_estimate: z does not escape");
    const double a = std::abs(o.z);
    return a * std::log(a) / std::abs(o.derivative);
}

double mandel_distance_estimate(Complex c, int max_iter) {
    const BailoutOrbit o = mandel_bailout(c, max_iter);
    if (!o.escaped) return 0.0;
    const double a = std::abs(o.z);
    return a * std::log(a) / std::abs(o.derivative);
}

}  // namespace mandeldecor
