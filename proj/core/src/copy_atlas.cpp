#include "mandeldecor/copy_atlas.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mandeldecor/complex_text.hpp"
#include "mandeldecor/error.hpp"
#include "mandeldecor/parallel.hpp"

namespace mandeldecor {

namespace {

const Complex kTwoPiI{0.0, 2.0 * M_PI};

void note(const CenterSearchOptions& o, const std::string& msg) {
    if (o.diagnostics) o.diagnostics->push_back(msg);
}

struct Candidate {
    int period;
    Complex value;
    double residual;
    double distance;
};

std::optional<Candidate> try_center(int period, Complex seed, double tol) {
    const CenterSolve r = solve_superattracting_center(period, seed, tol, 100);
    if (!r.ok()) return std::nullopt;
    return Candidate{period, r.value, r.residual, std::abs(r.value - seed)};
}

}  // namespace

Complex center_transform(const SectorConstants& s, Complex value) {
    if (s.nu >= 2) return 1.0 / (value - s.c1);
    if (!s.A0) throw std::invalid_argument("center_transform: A0 not fitted");
    Complex u = std::sqrt(value - s.c1);
    if ((*s.A0 * u).imag() < 0.0) u = -u;
    return 1.0 / u;
}

Complex center_transform_inverse(const SectorConstants& s, Complex t) {
    if (s.nu >= 2) return s.c1 + 1.0 / t;
    const Complex u = 1.0 / t;
    return s.c1 + u * u;
}

Complex theoretical_slope(const SectorConstants& s) {
    if (!s.complete()) throw std::invalid_argument("theoretical_slope: constants not fitted");
    if (s.nu == 1) return *s.A0 / kTwoPiI;
    return static_cast<double>(s.nu) * s.nu * *s.B0 / kTwoPiI;
}

std::vector<CenterRecord> find_center_sequence(const SectorConstants& s, IndexRange n_range,
                                               IndexRange periods, double tol,
                                               const CenterSearchOptions& opt) {
    if (!s.complete()) throw std::invalid_argument("find_center_sequence: constants not fitted");
    if (n_range.empty() || periods.empty()) return {};
    if (n_range.first < 1) throw std::invalid_argument("find_center_sequence: n must be >= 1");
    if (periods.first < 1) throw std::invalid_argument("find_center_sequence: periods must be >= 1");

    const int stride = s.k * s.nu * s.p;
    const int workers = resolve_workers(opt.workers);
    const Complex K = theoretical_slope(s);
    const int n0 = n_range.first;
    const WindowPrediction p0 = predict_window_center(s, n0);
    const double guard0 = rouche_radius(p0, opt.beta);

    // anchor: every candidate period, Newton from the n0 prediction
    const std::size_t span = static_cast<std::size_t>(periods.last - periods.first + 1);
    std::vector<std::optional<Candidate>> scan(span);
    parallel_for(span, workers, [&](std::size_t i) {
        auto cand = try_center(periods.first + static_cast<int>(i), p0.center, tol);
        if (cand && cand->distance < guard0) scan[i] = cand;
    });
    std::vector<Candidate> anchors;
    for (const auto& c : scan)
        if (c) anchors.push_back(*c);
    std::stable_sort(anchors.begin(), anchors.end(), [](const Candidate& a, const Candidate& b) {
        return a.period != b.period ? a.period < b.period : a.distance < b.distance;
    });
    if (anchors.size() > static_cast<std::size_t>(opt.max_anchor_candidates))
        anchors.resize(static_cast<std::size_t>(opt.max_anchor_candidates));
    if (anchors.empty()) {
        note(opt, "n=" + std::to_string(n0) + ": no candidate period converged inside the guard disk");
        return {};
    }

    auto make_record = [&](int n, const Candidate& c) {
        const WindowPrediction pr = predict_window_center(s, n);
        return CenterRecord{n, c.period, c.value, c.residual, std::abs(c.value - pr.center)};
    };

    // extend each anchor along n with period stride; chains are independent
    std::vector<std::vector<CenterRecord>> chains(anchors.size());
    std::vector<std::vector<std::string>> chain_notes(anchors.size());
    parallel_for(anchors.size(), workers, [&](std::size_t a) {
        std::vector<CenterRecord>& chain = chains[a];
        chain.push_back(make_record(n0, anchors[a]));
        for (int n = n0 + 1; n <= n_range.last; ++n) {
            const int m = anchors[a].period + stride * (n - n0);
            if (m > periods.last) {
                chain_notes[a].push_back("n=" + std::to_string(n) + ": period " +
                                         std::to_string(m) + " beyond candidate range");
                break;
            }
            Complex t;
            if (chain.size() >= 2) {
                const CenterRecord& r1 = chain[chain.size() - 2];
                const CenterRecord& r2 = chain.back();
                const Complex t1 = center_transform(s, r1.value), t2 = center_transform(s, r2.value);
                t = t2 + (t2 - t1) * (static_cast<double>(n - r2.n) / (r2.n - r1.n));
            } else {
                t = center_transform(s, chain.back().value) + K * static_cast<double>(n - chain.back().n);
            }
            const Complex seed = center_transform_inverse(s, t);
            const WindowPrediction pr = predict_window_center(s, n);
            auto cand = try_center(m, seed, tol);
            if (!cand || cand->distance >= opt.accept_fraction * std::abs(seed - s.c1) ||
                std::abs(cand->value - pr.center) >= rouche_radius(pr, opt.beta)) {
                chain_notes[a].push_back("n=" + std::to_string(n) + ": period " +
                                         std::to_string(m) + " did not converge near the seed");
                continue;
            }
            chain.push_back(make_record(n, *cand));
        }
    });

    // first chain (lowest anchor period) that covers the whole range, else the longest
    std::size_t best = 0;
    for (std::size_t a = 0; a < chains.size(); ++a) {
        if (chains[a].size() > chains[best].size()) best = a;
        if (static_cast<int>(chains[a].size()) == n_range.last - n_range.first + 1) {
            best = a;
            break;
        }
    }
    for (const auto& msg : chain_notes[best]) note(opt, msg);
    note(opt, "anchor period " + std::to_string(anchors[best].period) + " at n=" +
                  std::to_string(n0) + ", stride " + std::to_string(stride));
    return chains[best];
}

SequenceFit fit_center_law(const SectorConstants& s, std::vector<CenterRecord> records) {
    if (records.size() < 5) throw std::invalid_argument("fit_center_law: need at least 5 records");
    std::sort(records.begin(), records.end(), [](const CenterRecord& a, const CenterRecord& b) {
        if (a.n != b.n) return a.n < b.n;
        if (a.period != b.period) return a.period < b.period;
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    const double N = static_cast<double>(records.size());
    double nbar = 0.0;
    Complex tbar{};
    std::vector<Complex> ts;
    for (const auto& r : records) {
        ts.push_back(center_transform(s, r.value));
        nbar += r.n;
        tbar += ts.back();
    }
    nbar /= N;
    tbar /= N;
    double sxx = 0.0;
    Complex sxy{};
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double dx = records[i].n - nbar;
        sxx += dx * dx;
        sxy += dx * (ts[i] - tbar);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_center_law: all records share one n");
    SequenceFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = tbar - fit.slope * nbar;
    fit.count = static_cast<int>(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const Complex model = fit.slope * static_cast<double>(records[i].n) + fit.intercept;
        fit.max_relative_residual =
            std::max(fit.max_relative_residual, std::abs(ts[i] - model) / std::abs(ts[i]));
    }
    return fit;
}

bool small_filled_julia_contains(Complex c, int p, Complex z, double trap_radius, int max_iter) {
    if (p < 1) throw std::invalid_argument("small_filled_julia_contains: p must be >= 1");
    if (std::abs(z) > trap_radius) return false;
    for (int i = 0; i < max_iter; ++i) {
        for (int j = 0; j < p; ++j) z = z * z + c;
        if (std::abs(z) > trap_radius) return false;
    }
    return true;
}

double default_trap_radius(Complex center, int center_period, int p) {
    if (p < 1 || center_period < p || center_period % p != 0)
        throw std::invalid_argument("default_trap_radius: period must be a multiple of p");
    double cycle = 0.0;
    double gap = std::numeric_limits<double>::infinity();
    Complex z{};
    for (int i = 1; i < center_period; ++i) {
        z = z * z + center;
        if (i % p == 0)
            cycle = std::max(cycle, std::abs(z));
        else
            gap = std::min(gap, std::abs(z));
    }
    if (!std::isfinite(gap)) return 2.0;
    return std::min(std::max(2.0 * cycle, 0.5 * gap), 0.9 * gap);
}

void write_center_csv(std::ostream& out, const std::vector<CenterRecord>& records) {
    out << "n,period,re_s,im_s,residual,seed_distance\n";
    for (const auto& r : records)
        out << r.n << ',' << r.period << ',' << format_double(r.value.real()) << ','
            << format_double(r.value.imag()) << ',' << format_double(r.residual) << ','
            << format_double(r.seed_distance) << '\n';
}

std::vector<CenterRecord> read_center_csv(std::istream& in) {
    std::vector<CenterRecord> out;
    std::string line;
    bool header = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            if (line.rfind("n,", 0) == 0) continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 6)
            throw std::invalid_argument("center csv line " + std::to_string(lineno) +
                                        ": expected 6 columns");
        CenterRecord r;
        r.n = std::stoi(f[0]);
        r.period = std::stoi(f[1]);
        r.value = {parse_double(f[2]), parse_double(f[3])};
        r.residual = parse_double(f[4]);
        r.seed_distance = parse_double(f[5]);
        out.push_back(r);
    }
    return out;
}

}  // namespace mandeldecor
