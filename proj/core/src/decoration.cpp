#include "mandeldecor/decoration.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include "mandeldecor/boettcher.hpp"
#include "mandeldecor/complex_text.hpp"
#include "mandeldecor/error.hpp"
#include "mandeldecor/keyvalue.hpp"

namespace mandeldecor {

namespace {

constexpr int kWarmup = 256;
constexpr int kMembershipIter = 10000;

void require_outside_M(Complex sigma, const char* who) {
    if (!escape_time(sigma, Complex{}, kMembershipIter, 2.0).escaped)
        throw std::invalid_argument(std::string(who) + ": sigma must lie outside M");
}

double distance_or_zero(Complex sigma, Complex z) {
    const BailoutOrbit o = julia_bailout(sigma, z, kDefaultPotentialIter);
    if (!o.escaped) return 0.0;
    const double a = std::abs(o.z);
    return a * std::log(a) / std::abs(o.derivative);
}

}  // namespace

std::vector<Complex> julia_sample(Complex sigma, int count, std::uint64_t seed) {
    require_outside_M(sigma, "julia_sample");
    if (count < 0) throw std::invalid_argument("julia_sample: count must be >= 0");
    std::mt19937_64 rng(seed);
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(count));
    Complex z{1.0, 0.0};
    for (int i = 0; i < kWarmup + count; ++i) {
        z = std::sqrt(z - sigma);
        if (rng() >> 63) z = -z;
        if (i >= kWarmup) out.push_back(z);
    }
    return out;
}

double choose_R_from_sample(const std::vector<Complex>& points, double margin) {
    if (!(margin > 1.0)) throw std::invalid_argument("choose_R: margin must be > 1");
    if (points.empty()) throw std::invalid_argument("choose_R: empty sample");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const Complex& z : points) {
        const double a = std::abs(z);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    if (!(lo > 0.0)) throw NumericalError("choose_R: sample contains 0");
    return margin * std::max(hi * hi, 1.0 / (lo * lo));
}

double choose_R(Complex sigma, double margin, int sample_count, std::uint64_t seed) {
    if (!(margin > 1.0)) throw std::invalid_argument("choose_R: margin must be > 1");
    return choose_R_from_sample(julia_sample(sigma, sample_count, seed), margin);
}

DecorationModel make_decoration_model(Complex sigma, double margin, int sample_count,
                                      std::uint64_t seed, double proximity_tol) {
    DecorationModel m;
    m.sigma = sigma;
    m.margin = margin;
    m.sample_count = sample_count;
    m.sample_seed = seed;
    m.proximity_tol = proximity_tol;
    m.julia_points = julia_sample(sigma, sample_count, seed);
    m.R = choose_R_from_sample(m.julia_points, margin);
    validate(m);
    return m;
}

void validate(const DecorationModel& model) {
    require_outside_M(model.sigma, "DecorationModel");
    if (!(model.R > 1.0)) throw std::invalid_argument("DecorationModel: R must exceed 1");
    if (!(model.proximity_tol > 0.0))
        throw std::invalid_argument("DecorationModel: proximity_tol must be positive");
    if (model.m_max < 0) throw std::invalid_argument("DecorationModel: m_max must be >= 0");
    const double lo = std::pow(model.R, -0.5), hi = std::sqrt(model.R);
    for (const Complex& z : model.julia_points) {
        const double a = std::abs(z);
        if (!(lo < a && a < hi))
            throw std::invalid_argument("DecorationModel: Julia point " + format_complex(z) +
                                        " outside A(R^-1/2, R^1/2)");
    }
}

bool gamma0_contains(const DecorationModel& model, Complex Z, double tol) {
    const double a = std::abs(Z);
    if (!(model.R < a && a < model.R * model.R)) return false;
    const Complex z = Z * std::pow(model.R, -1.5);
    return distance_or_zero(model.sigma, z) < tol;
}

bool gamma0_contains(const DecorationModel& model, Complex Z) {
    return gamma0_contains(model, Z, model.proximity_tol);
}

std::optional<int> gamma_level(const DecorationModel& model, Complex w) {
    const double a = std::abs(w);
    if (!(a > 1.0)) return std::nullopt;
    const double L = std::log(a);
    const double lr = std::log(model.R);
    if (L > 2.0 * lr) return std::nullopt;
    int m = static_cast<int>(std::floor(std::log2(lr / L)));
    m = std::max(m, 0);
    // log2 may round across a boundary; settle with exact power-of-two scaling
    while (m > 0 && !(std::ldexp(lr, -m) < L)) --m;
    while (!(std::ldexp(lr, -m) < L && L <= std::ldexp(lr, 1 - m))) {
        ++m;
        if (m > model.m_max) return std::nullopt;
    }
    if (m > model.m_max) return std::nullopt;
    return m;
}

Complex power_two(Complex w, int m) {
    for (int i = 0; i < m; ++i) w *= w;
    return w;
}

bool gamma_m_contains(const DecorationModel& model, Complex w, double tol) {
    const auto m = gamma_level(model, w);
    if (!m) return false;
    return gamma0_contains(model, power_two(w, *m), tol);
}

bool gamma_m_contains(const DecorationModel& model, Complex w) {
    return gamma_m_contains(model, w, model.proximity_tol);
}

namespace {

MembershipVerdict classify(const DecorationModel& model, Complex c, int max_iter,
                           const double* pixel_size, double pixel_fraction) {
    MembershipVerdict v;
    if (!escape_time(c, Complex{}, max_iter, 2.0).escaped) {
        v.kind = MembershipKind::InM;
        return v;
    }
    const BailoutOrbit o = mandel_bailout(c, max_iter);
    const double g = std::ldexp(std::log(std::abs(o.z)), 1 - o.steps);
    if (g < kPotentialFloor) {
        v.kind = MembershipKind::InM;
        return v;
    }
    v.witness_potential = g;
    v.kind = MembershipKind::Outside;
    if (g > 2.0 * std::log(model.R)) return v;
    const Complex w = phi_M(c);
    const auto m = gamma_level(model, w);
    if (!m) return v;
    const Complex W = power_two(w, *m);
    double tol = model.proximity_tol;
    if (pixel_size) {
        // |dW/dc| = |W| 2^m |Phi'/Phi| with Phi'/Phi = z_n' / (2^(n-1) z_n)
        const double dlog = std::ldexp(std::abs(o.derivative) / std::abs(o.z), 1 - o.steps);
        const double dW = std::ldexp(std::abs(W) * dlog, *m);
        tol = pixel_fraction * (*pixel_size) * dW * std::pow(model.R, -1.5);
    }
    if (gamma0_contains(model, W, tol)) {
        v.kind = MembershipKind::OnDecoration;
        v.level = *m;
    }
    return v;
}

}  // namespace

MembershipVerdict decorated_membership(const DecorationModel& model, Complex c, int max_iter) {
    return classify(model, c, max_iter, nullptr, 0.0);
}

MembershipVerdict decorated_membership_scaled(const DecorationModel& model, Complex c,
                                              int max_iter, double pixel_size,
                                              double pixel_fraction) {
    return classify(model, c, max_iter, &pixel_size, pixel_fraction);
}

std::string to_text(const DecorationModel& model) {
    KeyValueFile kv;
    kv.add_comment("mandeldecor decoration model");
    kv.set("sigma", format_complex(model.sigma));
    kv.set("R", format_double(model.R));
    kv.set("proximity_tol", format_double(model.proximity_tol));
    kv.set("sample_seed", std::to_string(model.sample_seed));
    kv.set("sample_count", std::to_string(model.sample_count));
    kv.set("margin", format_double(model.margin));
    kv.set("m_max", std::to_string(model.m_max));
    return kv.to_string();
}

DecorationModel decoration_from_text(const std::string& text) {
    const KeyValueFile kv = KeyValueFile::parse(text);
    DecorationModel m;
    m.sigma = parse_complex(kv.require("sigma"));
    m.R = parse_double(kv.require("R"));
    m.proximity_tol = parse_double(kv.require("proximity_tol"));
    m.sample_seed = std::stoull(kv.require("sample_seed"));
    if (auto v = kv.get("sample_count")) m.sample_count = std::stoi(*v);
    if (auto v = kv.get("margin")) m.margin = parse_double(*v);
    if (auto v = kv.get("m_max")) m.m_max = std::stoi(*v);
    m.julia_points = julia_sample(m.sigma, m.sample_count, m.sample_seed);
    validate(m);
    return m;
}

void save_model(const DecorationModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << to_text(model);
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

DecorationModel load_model(const std::string& path) {
    return decoration_from_text(KeyValueFile::load(path).to_string());
}

}  // namespace mandeldecor
