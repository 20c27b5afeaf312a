#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mandeldecor/boettcher.hpp"
#include "mandeldecor/complex_text.hpp"
#include "mandeldecor/copy_atlas.hpp"
#include "mandeldecor/decoration.hpp"
#include "mandeldecor/error.hpp"
#include "mandeldecor/image_io.hpp"
#include "mandeldecor/keyvalue.hpp"
#include "mandeldecor/parabolic.hpp"
#include "mandeldecor/parallel.hpp"
#include "mandeldecor/render.hpp"

namespace mandeldecor::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OptionSpec {
    std::string name;
    std::string fallback;
    std::string help;
};

// Effective option values after merging flags, config file and defaults.
class Params {
public:
    void set(const std::string& k, const std::string& v) {
        values_[k] = v;
        order_.push_back(k);
    }
    const std::string& str(const std::string& k) const {
        auto it = values_.find(k);
        if (it == values_.end()) throw std::logic_error("unknown option " + k);
        return it->second;
    }
    bool given(const std::string& k) const { return !str(k).empty(); }
    double num(const std::string& k) const { return wrap(k, [&] { return parse_double(str(k)); }); }
    Complex cplx(const std::string& k) const {
        return wrap(k, [&] { return parse_complex(str(k)); });
    }
    int integer(const std::string& k) const {
        return wrap(k, [&] {
            std::size_t used = 0;
            const int v = std::stoi(str(k), &used);
            if (used != str(k).size()) throw std::invalid_argument("trailing characters");
            return v;
        });
    }
    std::vector<double> list(const std::string& k) const {
        std::vector<double> out;
        for (const auto& f : split(str(k), ',')) out.push_back(wrap(k, [&] { return parse_double(f); }));
        return out;
    }
    std::vector<int> int_list(const std::string& k) const {
        std::vector<int> out;
        for (const auto& f : split(str(k), ',')) out.push_back(wrap(k, [&] { return std::stoi(f); }));
        return out;
    }
    // "key = value" lines; skip_runtime drops options that do not affect outputs
    std::string dump(const std::string& prefix, bool skip_runtime) const {
        std::string s;
        for (const auto& k : order_) {
            if (skip_runtime && (k == "config" || k == "threads")) continue;
            s += prefix + k + " = " + values_.at(k) + "\n";
        }
        return s;
    }

private:
    template <typename F>
    auto wrap(const std::string& k, F&& f) const -> decltype(f()) {
        try {
            return f();
        } catch (const std::exception& e) {
            throw UsageError("option --" + k + ": invalid value '" + str(k) + "' (" + e.what() + ")");
        }
    }
    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
};

struct Context {
    std::ostream& out;
    std::ostream& err;
    std::string command;
    int workers = 1;
};

struct Command {
    std::string name;
    std::string help;
    std::vector<OptionSpec> options;
    std::function<void(const Params&, Context&)> body;
};

// --- helpers ---------------------------------------------------------------

void write_text(Context& ctx, const std::string& path, const std::string& content) {
    if (path == "-") {
        ctx.out << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
    ctx.out << "wrote " << path << "\n";
}

std::string header_comment(const Params& p, const std::string& command) {
    return "# mandeldecor " + command + "\n" + p.dump("# ", true);
}

ImageFormat image_format(const Params& p, const std::string& path) {
    if (p.given("format")) return parse_image_format(p.str("format"));
    return format_from_path(path);
}

void save_raster(Context& ctx, const Params& p, const Raster& r, const std::string& path) {
    write_image(r, path, image_format(p, path));
    std::ofstream side(path + ".cfg", std::ios::binary);
    if (!side) throw std::runtime_error("cannot open '" + path + ".cfg' for writing");
    side << header_comment(p, ctx.command);
    ctx.out << "wrote " << path << "\n";
}

Viewport viewport_from(const Params& p, Complex center, double width) {
    Viewport vp;
    vp.center = center;
    vp.width = width;
    vp.pixels_x = p.integer("px");
    vp.pixels_y = p.integer("py") > 0 ? p.integer("py") : vp.pixels_x;
    vp.validate();
    return vp;
}

RenderSettings settings_from(const Params& p, const Context& ctx) {
    RenderSettings s;
    s.max_iter = p.integer("max-iter");
    s.workers = ctx.workers;
    return s;
}

void print_stats(Context& ctx, const RenderStats& s) {
    ctx.out << "pixels: interior=" << s.interior << " near_set=" << s.near_set
            << " boundary=" << s.boundary << " exterior=" << s.exterior;
    for (int m = 0; m <= kDefaultLevelCap; ++m)
        if (s.levels[static_cast<std::size_t>(m)]) ctx.out << " level" << m << "=" << s.levels[static_cast<std::size_t>(m)];
    ctx.out << "\n";
}

SectorConstants constants_from(const Params& p, Context& ctx) {
    if (p.given("constants")) {
        std::ifstream f(p.str("constants"), std::ios::binary);
        if (!f) throw std::runtime_error("cannot open '" + p.str("constants") + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        return sector_constants_from_text(ss.str());
    }
    std::optional<Complex> seed;
    if (p.given("q-seed")) seed = p.cplx("q-seed");
    SectorConstants s = fit_constants(p.cplx("c1"), p.integer("p"), seed);
    ctx.out << "fitted constants: nu=" << s.nu << " k=" << s.k << " "
            << (s.A0 ? "A0=" + format_complex(*s.A0) : "B0=" + format_complex(*s.B0)) << "\n";
    return s;
}

DecorationModel model_from(const Params& p) {
    if (p.given("model")) return load_model(p.str("model"));
    return make_decoration_model(p.cplx("sigma"), p.num("margin"), p.integer("samples"),
                                 static_cast<std::uint64_t>(p.integer("seed")),
                                 p.num("proximity-tol"));
}

double auto_decorated_width(const DecorationModel& m) {
    double hi = 0.0;
    for (const Complex& z : m.julia_points) hi = std::max(hi, std::abs(z));
    return 2.4 * std::pow(m.R, 1.5) * hi;
}

std::vector<CenterRecord> load_centers(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    return read_center_csv(f);
}

std::string fit_report(const SectorConstants& s, const SequenceFit& fit) {
    const Complex expected = theoretical_slope(s);
    KeyValueFile kv;
    kv.set("slope", format_complex(fit.slope));
    kv.set("intercept", format_complex(fit.intercept));
    kv.set("max_relative_residual", format_double(fit.max_relative_residual));
    kv.set("count", std::to_string(fit.count));
    kv.set("theoretical_slope", format_complex(expected));
    kv.set("slope_relative_error", format_double(std::abs(fit.slope - expected) / std::abs(expected)));
    return kv.to_string();
}

std::vector<CenterRecord> run_find_centers(const Params& p, Context& ctx, const SectorConstants& s) {
    std::vector<std::string> diag;
    CenterSearchOptions opt;
    opt.workers = ctx.workers;
    opt.diagnostics = &diag;
    auto recs = find_center_sequence(s, {p.integer("n-first"), p.integer("n-last")},
                                     {p.integer("period-min"), p.integer("period-max")},
                                     p.num("tol"), opt);
    for (const auto& d : diag) ctx.err << "find-centers: " << d << "\n";
    return recs;
}

// --- subcommands -------------------------------------------------------------

const std::vector<OptionSpec> kImageOptions = {
    {"px", "800", "image width in pixels"},
    {"py", "0", "image height in pixels (0: same as px)"},
    {"max-iter", "2000", "iteration limit per pixel"},
    {"format", "", "ppm or png (default: from the output extension)"},
};

std::vector<OptionSpec> with_image(std::vector<OptionSpec> v) {
    v.insert(v.end(), kImageOptions.begin(), kImageOptions.end());
    return v;
}

void cmd_render_mandel(const Params& p, Context& ctx) {
    const Viewport vp = viewport_from(p, p.cplx("center"), p.num("width"));
    RenderStats stats;
    const Raster r = render_mandelbrot(vp, settings_from(p, ctx), &stats);
    print_stats(ctx, stats);
    save_raster(ctx, p, r, p.str("out"));
}

void cmd_render_julia(const Params& p, Context& ctx) {
    const Viewport vp = viewport_from(p, p.cplx("center"), p.num("width"));
    RenderStats stats;
    const Raster r = render_julia(p.cplx("c"), vp, settings_from(p, ctx), &stats);
    print_stats(ctx, stats);
    save_raster(ctx, p, r, p.str("out"));
}

void cmd_render_decorated(const Params& p, Context& ctx) {
    const DecorationModel model = model_from(p);
    ctx.out << "R = " << format_double(model.R) << "\n";
    if (p.given("model-out")) write_text(ctx, p.str("model-out"), to_text(model));
    const double width = p.num("width") > 0.0 ? p.num("width") : auto_decorated_width(model);
    const Viewport vp = viewport_from(p, p.cplx("center"), width);
    RenderSettings st = settings_from(p, ctx);
    st.decoration_width = p.num("decoration-width");
    RenderStats stats;
    const Raster r = render_decorated(model, vp, st, &stats);
    print_stats(ctx, stats);
    save_raster(ctx, p, r, p.str("out"));
}

void cmd_zoom_copy(const Params& p, Context& ctx) {
    Complex center;
    double width = p.num("width");
    if (p.given("center")) {
        center = p.cplx("center");
        if (!(width > 0.0)) throw UsageError("zoom-copy: --center needs a positive --width");
    } else {
        if (!p.given("centers")) throw UsageError("zoom-copy: give --center or --centers with --n");
        const auto recs = load_centers(p.str("centers"));
        const int n = p.integer("n");
        auto it = std::find_if(recs.begin(), recs.end(), [&](const CenterRecord& r) { return r.n == n; });
        if (it == recs.end()) throw UsageError("zoom-copy: no record with n=" + std::to_string(n));
        center = it->value;
        if (!(width > 0.0)) {
            const SectorConstants s = constants_from(p, ctx);
            width = 2.0 * p.num("zoom") * rouche_radius(predict_window_center(s, n));
        }
    }
    const Viewport vp = viewport_from(p, center, width);
    RenderStats stats;
    const Raster r = render_mandelbrot(vp, settings_from(p, ctx), &stats);
    print_stats(ctx, stats);
    save_raster(ctx, p, r, p.str("out"));
}

void cmd_find_centers(const Params& p, Context& ctx) {
    const SectorConstants s = constants_from(p, ctx);
    const auto recs = run_find_centers(p, ctx, s);
    std::ostringstream csv;
    csv << header_comment(p, ctx.command);
    write_center_csv(csv, recs);
    write_text(ctx, p.str("out"), csv.str());
    ctx.out << recs.size() << " records\n";
}

void cmd_fit_constants(const Params& p, Context& ctx) {
    std::optional<Complex> seed;
    if (p.given("q-seed")) seed = p.cplx("q-seed");
    const std::vector<double> steps = p.given("steps") ? p.list("steps") : default_fit_steps();
    SectorConstants s = fit_constants(p.cplx("c1"), p.integer("p"), seed, steps);
    s.r0 = p.num("r0");
    const std::string text = to_text(s);
    ctx.out << text;
    write_text(ctx, p.str("out"), text);
}

void cmd_phase_law(const Params& p, Context& ctx) {
    const OrbitPredicate entry = OrbitPredicate::parse(p.str("entry"));
    const OrbitPredicate exit = OrbitPredicate::parse(p.str("exit"));
    const Complex c1 = p.cplx("c1"), dir = p.cplx("direction");
    std::vector<TransitRow> rows;
    for (double eps : p.list("eps")) {
        const auto n = gate_transit_count(c1 + eps * dir, p.integer("p"), entry, exit,
                                          std::stol(p.str("max-iter")), p.integer("k-nu"));
        if (!n) ctx.err << "phase-law: no transit for eps=" << format_double(eps) << "\n";
        rows.push_back({eps, n});
    }
    std::ostringstream csv;
    csv << header_comment(p, ctx.command);
    write_transit_csv(csv, rows);
    write_text(ctx, p.str("out"), csv.str());
    if (std::any_of(rows.begin(), rows.end(), [](const TransitRow& r) { return !r.count; }))
        throw NumericalError("phase-law: some transits did not complete");
}

void cmd_center_law(const Params& p, Context& ctx) {
    const SectorConstants s = constants_from(p, ctx);
    const auto recs = load_centers(p.str("centers"));
    const SequenceFit fit = fit_center_law(s, recs);
    const std::string text = fit_report(s, fit);
    ctx.out << text;
    write_text(ctx, p.str("out"), header_comment(p, ctx.command) + text);
}

void cmd_figure1(const Params& p, Context& ctx) {
    namespace fs = std::filesystem;
    const fs::path dir = p.str("out-dir");
    fs::create_directories(dir);
    const std::string ext = p.str("format") == "png" ? ".png" : ".ppm";
    auto path = [&](const std::string& name) { return (dir / name).string(); };

    write_text(ctx, path("config.txt"), header_comment(p, ctx.command));

    const DecorationModel model = model_from(p);
    write_text(ctx, path("model.txt"), to_text(model));
    ctx.out << "R = " << format_double(model.R) << "\n";
    {
        const Viewport vp = viewport_from(p, Complex{}, auto_decorated_width(model));
        RenderStats stats;
        const Raster r = render_decorated(model, vp, settings_from(p, ctx), &stats);
        print_stats(ctx, stats);
        save_raster(ctx, p, r, path("fig1i" + ext));
    }

    const SectorConstants s = constants_from(p, ctx);
    write_text(ctx, path("constants.txt"), to_text(s));
    const auto recs = run_find_centers(p, ctx, s);
    {
        std::ostringstream csv;
        write_center_csv(csv, recs);
        write_text(ctx, path("centers.csv"), csv.str());
    }
    if (recs.size() >= 5) write_text(ctx, path("center_law.txt"), fit_report(s, fit_center_law(s, recs)));

    for (int n : p.int_list("zoom-n")) {
        auto it = std::find_if(recs.begin(), recs.end(), [&](const CenterRecord& r) { return r.n == n; });
        if (it == recs.end()) {
            ctx.err << "figure1: no center for n=" << n << ", zoom panel skipped\n";
            continue;
        }
        const double width = 2.0 * p.num("zoom") * rouche_radius(predict_window_center(s, n));
        Viewport vp = viewport_from(p, it->value, width);
        vp.pixels_x = vp.pixels_y = p.integer("zoom-px");
        RenderSettings st = settings_from(p, ctx);
        st.max_iter = p.integer("zoom-max-iter");
        RenderStats stats;
        const Raster r = render_mandelbrot(vp, st, &stats);
        print_stats(ctx, stats);
        save_raster(ctx, p, r, path("fig1_zoom_n" + std::to_string(n) + ext));
    }
}

std::vector<Command> commands() {
    const std::vector<OptionSpec> constant_opts = {
        {"c1", "-1.25", "parabolic parameter"},
        {"p", "2", "renormalization period"},
        {"q-seed", "", "seed near the parabolic point (default: critical orbit)"},
        {"constants", "", "load sector constants from this file instead of fitting"},
    };
    const std::vector<OptionSpec> center_opts = {
        {"n-first", "5", "first window index"},
        {"n-last", "20", "last window index"},
        {"period-min", "10", "smallest candidate period"},
        {"period-max", "120", "largest candidate period"},
        {"tol", "1e-10", "residual tolerance for |P^m(0)|"},
    };
    const std::vector<OptionSpec> model_opts = {
        {"sigma", "-0.77+0.18i", "parameter outside M whose Julia set decorates M"},
        {"margin", "1.1", "R safety factor (> 1)"},
        {"samples", "10000", "Julia sample size"},
        {"seed", "1", "sampling seed"},
        {"proximity-tol", "1e-3", "Gamma_0 thickness for point queries (Julia plane)"},
        {"model", "", "load a saved decoration model instead of building one"},
    };
    auto cat = [](std::vector<OptionSpec> a, const std::vector<OptionSpec>& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };

    std::vector<Command> cmds;
    cmds.push_back({"render-mandel", "render the Mandelbrot set",
                    with_image({{"center", "-0.5", "viewport center"},
                                {"width", "3", "viewport width"},
                                {"out", "mandel.ppm", "output image"}}),
                    cmd_render_mandel});
    cmds.push_back({"render-julia", "render the Julia set of z^2+c",
                    with_image({{"c", "-0.77+0.18i", "parameter"},
                                {"center", "0", "viewport center"},
                                {"width", "4", "viewport width"},
                                {"out", "julia.ppm", "output image"}}),
                    cmd_render_julia});
    cmds.push_back({"render-decorated", "render the decorated Mandelbrot set",
                    with_image(cat(model_opts,
                                   {{"model-out", "", "also save the decoration model here"},
                                    {"center", "0", "viewport center"},
                                    {"width", "0", "viewport width (0: fit the level-0 ring)"},
                                    {"decoration-width", "0.5", "decoration thickness in pixels"},
                                    {"out", "fig1i.ppm", "output image"}})),
                    cmd_render_decorated});
    cmds.push_back({"zoom-copy", "render a zoom on a superattracting center",
                    with_image(cat(constant_opts,
                                   {{"center", "", "explicit zoom center"},
                                    {"width", "0", "viewport width (0: from the window radius)"},
                                    {"centers", "", "CenterRecord CSV from find-centers"},
                                    {"n", "10", "record to zoom on"},
                                    {"zoom", "2.5", "half-width in units of the window radius"},
                                    {"out", "zoom.ppm", "output image"}})),
                    cmd_zoom_copy});
    cmds.push_back({"find-centers", "locate the centers s_n near a parabolic root",
                    cat(cat(constant_opts, center_opts), {{"out", "centers.csv", "CSV output ('-' for stdout)"}}),
                    cmd_find_centers});
    cmds.push_back({"fit-constants", "detect parabolic data and fit A0 or B0",
                    {{"c1", "-1.25", "parabolic parameter"},
                     {"p", "2", "renormalization period"},
                     {"q-seed", "", "seed near the parabolic point"},
                     {"steps", "", "comma-separated fit steps (decreasing)"},
                     {"r0", "0.1", "sector radius"},
                     {"out", "constants.txt", "output file ('-' for stdout)"}},
                    cmd_fit_constants});
    cmds.push_back({"phase-law", "transit counts through the parabolic gate",
                    {{"c1", "0.25", "parabolic parameter"},
                     {"p", "1", "period"},
                     {"k-nu", "1", "k * nu (steps of P^p per transit step)"},
                     {"direction", "1", "c = c1 + eps * direction"},
                     {"eps", "1e-2,1e-4,1e-6", "comma-separated perturbations"},
                     {"entry", "re<=0", "entry predicate"},
                     {"exit", "abs>2", "exit predicate"},
                     {"max-iter", "100000000", "transit step limit"},
                     {"out", "phase_law.csv", "CSV output ('-' for stdout)"}},
                    cmd_phase_law});
    cmds.push_back({"center-law", "fit the center-sequence law",
                    cat(constant_opts, {{"centers", "centers.csv", "CenterRecord CSV"},
                                        {"out", "center_law.txt", "report ('-' for stdout)"}}),
                    cmd_center_law});
    cmds.push_back({"figure1", "decorated set, centers and zoom panels in one run",
                    cat(cat(cat(model_opts, constant_opts), center_opts),
                        {{"px", "1000", "decorated panel size"},
                         {"py", "0", "decorated panel height (0: same as px)"},
                         {"max-iter", "2000", "iteration limit for the decorated panel"},
                         {"zoom-n", "6,12", "window indices for zoom panels"},
                         {"zoom", "2.5", "zoom half-width in window radii"},
                         {"zoom-px", "600", "zoom panel size"},
                         {"zoom-max-iter", "20000", "iteration limit for zoom panels"},
                         {"format", "ppm", "ppm or png"},
                         {"out-dir", "figure1", "output directory"}}),
                    cmd_figure1});
    return cmds;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const std::vector<Command> cmds = commands();
    CLI::App app{"mandeldecor: decorated Mandelbrot sets and parabolic window centers"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "help for all subcommands");

    std::vector<std::map<std::string, std::string>> raw(cmds.size());
    std::vector<std::map<std::string, CLI::Option*>> opts(cmds.size());
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        CLI::App* sub = app.add_subcommand(cmds[i].name, cmds[i].help);
        for (const OptionSpec& o : cmds[i].options) {
            std::string help = o.help;
            if (!o.fallback.empty()) help += " [" + o.fallback + "]";
            opts[i][o.name] = sub->add_option("--" + o.name, raw[i][o.name], help);
        }
        opts[i]["config"] = sub->add_option("--config", raw[i]["config"], "key = value config file");
        opts[i]["threads"] = sub->add_option("--threads", raw[i]["threads"],
                                             "worker threads (0: all cores; capped by MANDELDECOR_THREADS)");
        subs.push_back(sub);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    std::size_t which = 0;
    while (which < subs.size() && !subs[which]->parsed()) ++which;
    if (which == subs.size()) {
        err << "error: no subcommand\n";
        return 2;
    }
    const Command& cmd = cmds[which];

    Params params;
    try {
        KeyValueFile file;
        const std::string cfg = raw[which]["config"];
        if (!cfg.empty()) {
            file = KeyValueFile::load(cfg);
            for (const auto& [k, v] : file.entries()) {
                const bool known = std::any_of(cmd.options.begin(), cmd.options.end(),
                                               [&](const OptionSpec& o) { return o.name == k; }) ||
                                   k == "threads";
                if (!known) throw UsageError(cfg + ": unknown key '" + k + "' for " + cmd.name);
            }
        }
        auto resolve = [&](const std::string& name, const std::string& fallback) {
            if (opts[which][name]->count() > 0) return raw[which][name];
            if (auto v = file.get(name)) return *v;
            return fallback;
        };
        for (const OptionSpec& o : cmd.options) params.set(o.name, resolve(o.name, o.fallback));
        params.set("config", cfg);
        params.set("threads", resolve("threads", "0"));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    Context ctx{out, err, cmd.name};
    try {
        ctx.workers = resolve_workers(params.integer("threads"));
        out << "# mandeldecor " << cmd.name << " effective config\n" << params.dump("# ", false);
        cmd.body(params, ctx);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace mandeldecor::cli
