#include "mandeldecor/parabolic.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mandeldecor/complex_text.hpp"
#include "mandeldecor/error.hpp"
#include "mandeldecor/keyvalue.hpp"

namespace mandeldecor {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
const Complex kI{0.0, 1.0};

Complex root_of_unity(int num, int den) { return std::polar(1.0, kTwoPi * num / den); }

Complex ipow(Complex z, int e) {
    Complex r{1.0, 0.0};
    for (int i = 0; i < e; ++i) r *= z;
    return r;
}

// d/dc of P_c^d at z.
Complex c_derivative_at(Complex c, Complex z, int d) {
    Complex b{};
    for (int i = 0; i < d; ++i) {
        b = 2.0 * z * b + 1.0;
        z = z * z + c;
    }
    return b;
}

int multiplier_exponent(const SectorConstants& s) { return s.p * s.k / s.q_period; }

void require_steps(const std::vector<double>& steps, const char* who) {
    if (steps.size() < 3)
        throw std::invalid_argument(std::string(who) + ": need at least 3 steps");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!(steps[i] > 0.0))
            throw std::invalid_argument(std::string(who) + ": steps must be positive");
        if (i > 0 && !(steps[i] < steps[i - 1]))
            throw std::invalid_argument(std::string(who) + ": steps must be strictly decreasing");
    }
}

struct SplitPair {
    Complex mu_plus, mu_minus;
};

// The two fixed points of P^d that bifurcate from q at c = c1 + u^2 (nu = 1).
SplitPair split_multipliers(const SectorConstants& s, Complex u) {
    const int d = s.q_period;
    const std::vector<Complex> jet = iterate_jet(s.c1, s.q, d, 2);
    const Complex gc = c_derivative_at(s.c1, s.q, d);
    if (std::abs(jet[2]) < 1e-12) throw NumericalError("split_multipliers: degenerate jet");
    const Complex r = std::sqrt(-gc / jet[2]);
    const Complex c = s.c1 + u * u;
    const int e = multiplier_exponent(s);
    PeriodicPointResult a = solve_periodic_point(c, d, s.q + u * r, 1e-13, 200);
    PeriodicPointResult b = solve_periodic_point(c, d, s.q - u * r, 1e-13, 200);
    if (!a.ok() || !b.ok() || std::abs(a.location - b.location) < 0.5 * std::abs(u * r))
        throw NumericalError("fixed-point continuation lost the branch at u=" +
                             format_complex(u));
    return {ipow(a.multiplier, e), ipow(b.multiplier, e)};
}

}  // namespace

Complex neville_at_zero(const std::vector<double>& xs, const std::vector<Complex>& ys,
                        double* residual) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("neville_at_zero: size mismatch");
    auto run = [&](std::size_t n) {
        std::vector<Complex> P(ys.begin(), ys.begin() + static_cast<std::ptrdiff_t>(n));
        for (std::size_t m = 1; m < n; ++m)
            for (std::size_t i = 0; i + m < n; ++i)
                P[i] = (-xs[i + m] * P[i] + xs[i] * P[i + 1]) / (xs[i] - xs[i + m]);
        return P[0];
    };
    const Complex full = run(xs.size());
    if (residual) *residual = xs.size() > 1 ? std::abs(full - run(xs.size() - 1)) : 0.0;
    return full;
}

Complex find_parabolic_point(Complex c1, int p, int iterations) {
    if (p < 1) throw std::invalid_argument("find_parabolic_point: p must be >= 1");
    Complex z{};
    const long total = static_cast<long>(p) * iterations;
    for (long i = 0; i < total; ++i) {
        z = z * z + c1;
        if (std::abs(z) > 4.0)
            throw NumericalError("find_parabolic_point: critical orbit escapes (c1 not in M)");
    }
    return z;
}

ParabolicParameter solve_parabolic_parameter(int period, Complex multiplier, Complex c_seed,
                                             Complex z_seed, double tol, int max_steps) {
    if (period < 1) throw std::invalid_argument("solve_parabolic_parameter: period must be >= 1");
    ParabolicParameter out;
    Complex c = c_seed, z0 = z_seed;
    for (int it = 0; it < max_steps; ++it) {
        Complex z = z0, a{1.0, 0.0}, b{}, A{}, B{};
        for (int i = 0; i < period; ++i) {
            A = 2.0 * (a * a + z * A);
            B = 2.0 * (b * a + z * B);
            a = 2.0 * z * a;
            b = 2.0 * z * b + 1.0;
            z = z * z + c;
        }
        const Complex F1 = z - z0, F2 = a - multiplier;
        const Complex J11 = a - 1.0, J12 = b, J21 = A, J22 = B;
        const Complex det = J11 * J22 - J12 * J21;
        if (det == Complex{} || !std::isfinite(std::abs(det))) break;
        const Complex dz = (F1 * J22 - J12 * F2) / det;
        const Complex dc = (J11 * F2 - F1 * J21) / det;
        z0 -= dz;
        c -= dc;
        if (std::abs(dz) + std::abs(dc) < tol) {
            out.converged = true;
            break;
        }
        if (std::abs(z0) > 4.0 || std::abs(c) > 4.0) break;
    }
    out.c = c;
    out.z = z0;
    return out;
}

SectorConstants detect_parabolic_data(Complex c1, int p, Complex q_seed) {
    if (p < 1) throw std::invalid_argument("detect_parabolic_data: p must be >= 1");
    PeriodicPointResult hit;
    int t = 0;
    for (int k = 1; k <= 64; ++k) {
        PeriodicPointResult r = solve_periodic_point(c1, p * k, q_seed, 1e-12, 500);
        if ((r.status == SolveStatus::converged || r.status == SolveStatus::lower_period) &&
            std::abs(std::abs(r.multiplier) - 1.0) < 1e-3) {
            hit = r;
            t = p * k;
            break;
        }
    }
    if (t == 0)
        throw NumericalError("detect_parabolic_data: no neutral cycle found from seed " +
                             format_complex(q_seed));

    int d = t;
    Complex q = hit.location;
    for (int cand : divisors(t)) {
        PeriodicPointResult r = solve_periodic_point(c1, cand, hit.location, 1e-12, 500);
        if ((r.status == SolveStatus::converged || r.status == SolveStatus::lower_period) &&
            std::abs(r.location - hit.location) < 1e-3) {
            d = cand;
            q = r.location;
            break;
        }
    }

    std::vector<Complex> jet = iterate_jet(c1, q, d, 2);
    if (std::abs(jet[1] - 1.0) < 1e-4 && std::abs(jet[2]) > 1e-12) {
        // double root of P^d(z) - z: the simple root of (P^d)'(z) - 1 is better conditioned
        for (int it = 0; it < 60; ++it) {
            const Complex step = (jet[1] - 1.0) / (2.0 * jet[2]);
            q -= step;
            jet = iterate_jet(c1, q, d, 2);
            if (std::abs(step) < 1e-16 * (1.0 + std::abs(q))) break;
        }
    }
    const Complex lambda = jet[1];

    SectorConstants s;
    s.c1 = c1;
    s.p = p;
    s.q = q;
    s.q_period = d;
    s.k = d / std::gcd(d, p);
    const int e = p / std::gcd(d, p);
    const Complex mu = ipow(lambda, e);

    int nu0 = 0, nu0_prime = 0;
    for (int nu = 1; nu <= 64 && nu0 == 0; ++nu)
        for (int np = 0; np < nu; ++np)
            if (std::gcd(nu, np) == 1 && std::abs(mu - root_of_unity(np, nu)) < 1e-6) {
                nu0 = nu;
                nu0_prime = np;
                break;
            }
    if (nu0 == 0) {
        std::ostringstream os;
        os << "detect_parabolic_data: multiplier " << format_complex(mu)
           << " is not within 1e-6 of a root of unity of order <= 64";
        throw NumericalError(os.str());
    }

    const int order = 2 * nu0 + 3;
    const std::vector<Complex> fj = iterate_jet(c1, q, d * e * nu0, order);
    int petals = 0;
    for (int j = 2; j <= order; ++j)
        if (std::abs(fj[static_cast<std::size_t>(j)]) > 1e-6) {
            petals = j - 1;
            break;
        }
    if (petals == 0) throw NumericalError("detect_parabolic_data: could not count petals");

    if (petals == nu0) {
        s.nu = nu0;
        s.nu_prime = nu0_prime;
        s.mu_c1 = root_of_unity(nu0_prime, nu0);
    } else {
        s.satellite_root = true;
        s.nu = petals;
        s.nu_prime = -1;
        for (int np = 1; np < petals; ++np)
            if (std::gcd(petals, np) == 1 && std::abs(lambda - root_of_unity(np, petals)) < 1e-6)
                s.nu_prime = np;
        if (s.nu_prime < 0)
            throw NumericalError("detect_parabolic_data: petal count does not match the "
                                 "rotation of the underlying cycle");
        s.mu_c1 = mu;
    }
    return s;
}

std::vector<double> default_fit_steps() { return {1e-2, 5e-3, 2.5e-3, 1.25e-3}; }

Complex fit_A0(const SectorConstants& s, const std::vector<double>& steps, double* residual) {
    if (s.nu != 1) throw std::invalid_argument("fit_A0: requires nu = 1");
    require_steps(steps, "fit_A0");
    std::vector<Complex> vals;
    for (double u : steps) {
        const SplitPair sp = split_multipliers(s, Complex{u, 0.0});
        const Complex a = (sp.mu_plus - 1.0) / u;
        const Complex b = (sp.mu_minus - 1.0) / u;
        const bool a_first = a.imag() > b.imag() || (a.imag() == b.imag() && a.real() >= b.real());
        vals.push_back(a_first ? a : b);
    }
    return neville_at_zero(steps, vals, residual);
}

Complex fit_B0(const SectorConstants& s, const std::vector<double>& steps, double* residual) {
    if (s.nu < 2) throw std::invalid_argument("fit_B0: requires nu >= 2");
    require_steps(steps, "fit_B0");
    const int e = multiplier_exponent(s);
    std::vector<Complex> vals;
    for (double h : steps) {
        const PeriodicPointResult r = solve_periodic_point(s.c1 + h, s.q_period, s.q, 1e-13, 200);
        if (!r.ok() || std::abs(r.location - s.q) > 0.1)
            throw NumericalError("fit_B0: continuation of the parabolic point failed at h=" +
                                 format_double(h));
        vals.push_back((ipow(r.multiplier, e) / s.mu_c1 - 1.0) / h);
    }
    return neville_at_zero(steps, vals, residual);
}

SectorConstants fit_constants(Complex c1, int p, std::optional<Complex> q_seed,
                              const std::vector<double>& steps) {
    const Complex seed = q_seed ? *q_seed : find_parabolic_point(c1, p);
    SectorConstants s = detect_parabolic_data(c1, p, seed);
    // retry on finer step ladders when the extrapolation has not settled
    double best = std::numeric_limits<double>::infinity();
    Complex best_value;
    std::string last_error;
    double scale = 1.0;
    for (int attempt = 0; attempt < 4 && best > 1e-9; ++attempt, scale *= 0.1) {
        std::vector<double> scaled(steps);
        for (double& h : scaled) h *= scale;
        try {
            double res = 0.0;
            const Complex v = s.nu == 1 ? fit_A0(s, scaled, &res) : fit_B0(s, scaled, &res);
            if (res < best) {
                best = res;
                best_value = v;
            }
        } catch (const NumericalError& e) {
            last_error = e.what();
        }
    }
    if (!std::isfinite(best)) throw NumericalError("fit_constants: " + last_error);
    if (s.nu == 1)
        s.A0 = best_value;
    else
        s.B0 = best_value;
    s.fit_residual = best;
    return s;
}

std::optional<Complex> continued_multiplier(const SectorConstants& s, Complex c) {
    const PeriodicPointResult r = solve_periodic_point(c, s.q_period, s.q, 1e-13, 200);
    if (!r.ok()) return std::nullopt;
    return ipow(r.multiplier, multiplier_exponent(s));
}

bool in_multiplier_sector(Complex mu, double r) {
    const Complex d = mu - 1.0;
    const double a = std::abs(d);
    if (!(a > 0.0 && a < r)) return false;
    return std::abs(std::arg(d) - M_PI / 2.0) < M_PI / 8.0;
}

SectorTest sector_test(const SectorConstants& s, Complex c) {
    if (!s.complete()) throw std::invalid_argument("sector_contains: constants not fitted");
    SectorTest t;
    if (c == s.c1) {
        t.diagnostic = "c equals c1";
        return t;
    }
    if (std::abs(c - s.c1) >= s.r0) {
        t.diagnostic = "outside the r0 disk around c1";
        return t;
    }
    if (s.nu >= 2) {
        const auto mu = continued_multiplier(s, c);
        if (!mu) {
            t.diagnostic = "continuation of the parabolic point failed";
            return t;
        }
        t.mu_ratio = *mu / s.mu_c1;
        t.inside = in_multiplier_sector(t.mu_ratio, s.r0);
        return t;
    }
    try {
        const SplitPair sp = split_multipliers(s, std::sqrt(c - s.c1));
        t.mu_ratio = sp.mu_plus;
        if (in_multiplier_sector(sp.mu_plus, s.r0)) {
            t.inside = true;
        } else if (in_multiplier_sector(sp.mu_minus, s.r0)) {
            t.inside = true;
            t.mu_ratio = sp.mu_minus;
        }
    } catch (const NumericalError& e) {
        t.diagnostic = e.what();
    }
    return t;
}

bool sector_contains(const SectorConstants& s, Complex c) { return sector_test(s, c).inside; }

Complex tau_leading(const SectorConstants& s, Complex c) {
    if (!s.complete()) throw std::invalid_argument("tau_leading: constants not fitted");
    if (c == s.c1) throw NumericalError("tau_leading: pole at c = c1");
    if (s.nu == 1) {
        Complex u = std::sqrt(c - s.c1);
        if ((*s.A0 * u).imag() < 0.0) u = -u;
        return -2.0 * M_PI * kI / (*s.A0 * u);
    }
    const double nu2 = static_cast<double>(s.nu) * s.nu;
    return -2.0 * M_PI * kI / (nu2 * *s.B0 * (c - s.c1));
}

bool OrbitPredicate::operator()(Complex z) const {
    double x = 0.0;
    switch (quantity) {
        case Quantity::re: x = z.real(); break;
        case Quantity::im: x = z.imag(); break;
        case Quantity::abs: x = std::abs(z); break;
    }
    if (less) return inclusive ? x <= threshold : x < threshold;
    return inclusive ? x >= threshold : x > threshold;
}

std::string OrbitPredicate::to_string() const {
    std::string s = quantity == Quantity::re ? "re" : quantity == Quantity::im ? "im" : "abs";
    s += less ? "<" : ">";
    if (inclusive) s += "=";
    return s + format_double(threshold);
}

OrbitPredicate OrbitPredicate::parse(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
    OrbitPredicate p;
    std::size_t pos = 0;
    if (t.rfind("re", 0) == 0) {
        p.quantity = Quantity::re;
        pos = 2;
    } else if (t.rfind("im", 0) == 0) {
        p.quantity = Quantity::im;
        pos = 2;
    } else if (t.rfind("abs", 0) == 0) {
        p.quantity = Quantity::abs;
        pos = 3;
    } else {
        throw std::invalid_argument("predicate '" + text + "': expected re, im or abs");
    }
    if (pos >= t.size() || (t[pos] != '<' && t[pos] != '>'))
        throw std::invalid_argument("predicate '" + text + "': expected < or >");
    p.less = t[pos] == '<';
    ++pos;
    p.inclusive = pos < t.size() && t[pos] == '=';
    if (p.inclusive) ++pos;
    p.threshold = parse_double(t.substr(pos));
    return p;
}

OrbitPredicate default_transit_entry() { return OrbitPredicate::parse("re<=0"); }
OrbitPredicate default_transit_exit() { return OrbitPredicate::parse("abs>2"); }

std::optional<long> gate_transit_count(Complex c, int p, const OrbitPredicate& entry,
                                       const OrbitPredicate& exit, long max_iter, int k_nu) {
    if (p < 1 || k_nu < 1) throw std::invalid_argument("gate_transit_count: p, k_nu must be >= 1");
    if (max_iter < 1) throw std::invalid_argument("gate_transit_count: max_iter must be >= 1");
    const int steps = p * k_nu;
    Complex z{};
    auto advance = [&]() {
        for (int i = 0; i < steps; ++i) z = z * z + c;
        return std::isfinite(std::abs(z)) && std::abs(z) < 1e100;
    };
    long i = 0;
    while (!entry(z)) {
        if (i >= max_iter || !advance()) return std::nullopt;
        ++i;
    }
    long n = 0;
    while (!exit(z)) {
        if (n >= max_iter || !advance()) return std::nullopt;
        ++n;
    }
    return n;
}

WindowPrediction predict_window_center(const SectorConstants& s, int n, Complex v) {
    if (n < 1) throw std::invalid_argument("predict_window_center: n must be >= 1");
    if (!s.complete()) throw std::invalid_argument("predict_window_center: constants not fitted");
    const Complex nv = static_cast<double>(n) - v;
    if (nv == Complex{}) throw NumericalError("predict_window_center: n equals v");
    WindowPrediction w;
    w.n = n;
    if (s.nu == 1) {
        w.center = s.c1 - 4.0 * M_PI * M_PI / (*s.A0 * *s.A0 * nv * nv);
    } else {
        const double nu2 = static_cast<double>(s.nu) * s.nu;
        w.center = s.c1 + 2.0 * M_PI * kI / (nu2 * *s.B0 * nv);
    }
    w.radius = std::abs(w.center - s.c1);
    return w;
}

double rouche_radius(const WindowPrediction& prediction, double beta) {
    return std::pow(prediction.radius, 1.0 + beta);
}

std::string to_text(const SectorConstants& s) {
    KeyValueFile kv;
    kv.add_comment("mandeldecor sector constants");
    kv.set("c1", format_complex(s.c1));
    kv.set("p", std::to_string(s.p));
    kv.set("k", std::to_string(s.k));
    kv.set("nu", std::to_string(s.nu));
    kv.set("nu_prime", std::to_string(s.nu_prime));
    kv.set("mu_c1", format_complex(s.mu_c1));
    if (s.A0) kv.set("A0", format_complex(*s.A0));
    if (s.B0) kv.set("B0", format_complex(*s.B0));
    kv.set("r0", format_double(s.r0));
    kv.set("q", format_complex(s.q));
    kv.set("q_period", std::to_string(s.q_period));
    kv.set("satellite_root", s.satellite_root ? "true" : "false");
    kv.set("fit_residual", format_double(s.fit_residual));
    return kv.to_string();
}

SectorConstants sector_constants_from_text(const std::string& text) {
    const KeyValueFile kv = KeyValueFile::parse(text);
    SectorConstants s;
    s.c1 = parse_complex(kv.require("c1"));
    s.p = std::stoi(kv.require("p"));
    s.k = std::stoi(kv.require("k"));
    s.nu = std::stoi(kv.require("nu"));
    s.nu_prime = std::stoi(kv.require("nu_prime"));
    s.mu_c1 = parse_complex(kv.require("mu_c1"));
    if (auto v = kv.get("A0")) s.A0 = parse_complex(*v);
    if (auto v = kv.get("B0")) s.B0 = parse_complex(*v);
    if (auto v = kv.get("r0")) s.r0 = parse_double(*v);
    s.q = parse_complex(kv.require("q"));
    s.q_period = std::stoi(kv.require("q_period"));
    if (auto v = kv.get("satellite_root")) s.satellite_root = *v == "true";
    if (auto v = kv.get("fit_residual")) s.fit_residual = parse_double(*v);
    if (s.p < 1 || s.k < 1 || s.nu < 1 || s.q_period < 1)
        throw std::invalid_argument("sector constants: counts must be >= 1");
    if (s.A0 && s.B0) throw std::invalid_argument("sector constants: both A0 and B0 present");
    return s;
}

void write_transit_csv(std::ostream& out, const std::vector<TransitRow>& rows) {
    out << "eps,transit,transit_sqrt_eps\n";
    for (const TransitRow& r : rows) {
        out << format_double(r.eps) << ',';
        if (r.count)
            out << *r.count << ',' << format_double(static_cast<double>(*r.count) * std::sqrt(r.eps));
        else
            out << "NA,NA";
        out << '\n';
    }
}

void write_prediction_csv(std::ostream& out, const std::vector<WindowPrediction>& rows) {
    out << "n,re_center,im_center,radius\n";
    for (const WindowPrediction& w : rows)
        out << w.n << ',' << format_double(w.center.real()) << ','
            << format_double(w.center.imag()) << ',' << format_double(w.radius) << '\n';
}

}  // namespace mandeldecor
