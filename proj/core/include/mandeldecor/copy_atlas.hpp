#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mandeldecor/dynamics.hpp"
#include "mandeldecor/parabolic.hpp"

namespace mandeldecor {

struct CenterRecord {
    int n = 0;
    int period = 0;
    Complex value{};
    double residual = 0.0;
    double seed_distance = 0.0;   // |s_n - c_n| with the v = 0 prediction
};

struct SequenceFit {
    Complex slope{};
    Complex intercept{};
    double max_relative_residual = 0.0;
    int count = 0;
};

// Inclusive integer interval; empty when last < first.
struct IndexRange {
    int first = 0;
    int last = -1;
    bool empty() const { return last < first; }
};

struct CenterSearchOptions {
    int workers = 0;               // resolved through resolve_workers
    double beta = 0.25;            // guard disk radius r_n^(1+beta)
    double accept_fraction = 0.1;  // |s - seed| < fraction * |seed - c1| while chaining
    int max_anchor_candidates = 12;
    std::vector<std::string>* diagnostics = nullptr;
};

// Reciprocal coordinate in which centers are affine in n: 1/(s - c1) for nu >= 2,
// 1/sqrt(s - c1) (branch with Im(A0 sqrt) >= 0) for nu = 1.
Complex center_transform(const SectorConstants& constants, Complex s);
Complex center_transform_inverse(const SectorConstants& constants, Complex t);
// nu^2 B0 / (2 pi i) or A0 / (2 pi i).
Complex theoretical_slope(const SectorConstants& constants);

std::vector<CenterRecord> find_center_sequence(const SectorConstants& constants,
                                               IndexRange n_range, IndexRange periods,
                                               double tol = 1e-10,
                                               const CenterSearchOptions& options = {});

// Throws std::invalid_argument for fewer than 5 records.
SequenceFit fit_center_law(const SectorConstants& constants, std::vector<CenterRecord> records);

bool small_filled_julia_contains(Complex c, int p, Complex z, double trap_radius, int max_iter);

// Trap radius from the superattracting orbit of a center of the given period.
double default_trap_radius(Complex center, int center_period, int p);

void write_center_csv(std::ostream& out, const std::vector<CenterRecord>& records);
std::vector<CenterRecord> read_center_csv(std::istream& in);

}  // namespace mandeldecor
