#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mandeldecor/dynamics.hpp"

namespace mandeldecor {

inline constexpr int kDefaultLevelCap = 12;

struct DecorationModel {
    Complex sigma{};
    double R = 0.0;
    std::vector<Complex> julia_points;
    double proximity_tol = 1e-3;   // Julia-plane distance
    std::uint64_t sample_seed = 1;
    int sample_count = 10000;
    double margin = 1.1;
    int m_max = kDefaultLevelCap;
};

enum class MembershipKind { InM, OnDecoration, Outside };

struct MembershipVerdict {
    MembershipKind kind = MembershipKind::Outside;
    int level = -1;                 // set for OnDecoration
    double witness_potential = 0.0; // G_M(c); 0 exactly for InM
};

// Inverse iteration z <- +-sqrt(z - sigma). Throws std::invalid_argument if sigma is in M.
std::vector<Complex> julia_sample(Complex sigma, int count, std::uint64_t seed);

double choose_R_from_sample(const std::vector<Complex>& points, double margin);
double choose_R(Complex sigma, double margin, int sample_count = 10000, std::uint64_t seed = 1);

DecorationModel make_decoration_model(Complex sigma, double margin = 1.1,
                                      int sample_count = 10000, std::uint64_t seed = 1,
                                      double proximity_tol = 1e-3);

// Throws std::invalid_argument describing the first violated invariant.
void validate(const DecorationModel& model);

bool gamma0_contains(const DecorationModel& model, Complex Z);
bool gamma0_contains(const DecorationModel& model, Complex Z, double tol);

std::optional<int> gamma_level(const DecorationModel& model, Complex w);

// w squared m times.
Complex power_two(Complex w, int m);

bool gamma_m_contains(const DecorationModel& model, Complex w);
bool gamma_m_contains(const DecorationModel& model, Complex w, double tol);

MembershipVerdict decorated_membership(const DecorationModel& model, Complex c, int max_iter);

// Same test with the Gamma_0 thickness set from a parameter-plane length: tol is the
// image of pixel_size under c -> Phi_M(c)^(2^m) * R^(-3/2), times pixel_fraction.
MembershipVerdict decorated_membership_scaled(const DecorationModel& model, Complex c,
                                              int max_iter, double pixel_size,
                                              double pixel_fraction = 0.5);

std::string to_text(const DecorationModel& model);
// Rebuilds the Julia sample from the recorded seed.
DecorationModel decoration_from_text(const std::string& text);
void save_model(const DecorationModel& model, const std::string& path);
DecorationModel load_model(const std::string& path);

}  // namespace mandeldecor
