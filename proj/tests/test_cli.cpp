#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "mandeldecor/copy_atlas.hpp"
#include "mandeldecor/image_io.hpp"
#include "mandeldecor/parabolic.hpp"

using namespace mandeldecor;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = mandeldecor::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) { return std::string(MANDELDECOR_TEST_TMP) + "/cli_" + name; }

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
}

}  // namespace

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"no-such-command"}).code, 2);
    EXPECT_EQ(invoke({"render-mandel", "--px", "abc", "--out", tmp("x.ppm")}).code, 2);
    EXPECT_EQ(invoke({"render-mandel", "--bogus", "1"}).code, 2);
    EXPECT_EQ(invoke({"render-mandel", "--px", "10", "--width", "1e-14", "--out", tmp("x.ppm")}).code, 2);
    const auto help = invoke({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("render-decorated"), std::string::npos);
}

TEST(Cli, FitConstantsWritesLoadableFile) {
    const auto r = invoke({"fit-constants", "--c1", "-1.25", "--p", "2", "--out", tmp("constants.txt")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("# c1 = -1.25"), std::string::npos);
    const auto s = sector_constants_from_text(slurp(tmp("constants.txt")));
    ASSERT_TRUE(s.B0.has_value());
    EXPECT_NEAR(s.B0->real(), -4.0, 1e-8);
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
    write(tmp("cusp.cfg"), "# cusp\nc1 = 0.25\np = 1\n");
    const auto a = invoke({"fit-constants", "--config", tmp("cusp.cfg"), "--out", tmp("a.txt")});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_TRUE(sector_constants_from_text(slurp(tmp("a.txt"))).A0.has_value());

    const auto b = invoke({"fit-constants", "--config", tmp("cusp.cfg"), "--c1", "-1.25", "--p", "2",
                        "--out", tmp("b.txt")});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_TRUE(sector_constants_from_text(slurp(tmp("b.txt"))).B0.has_value());

    write(tmp("bad.cfg"), "c1 = 0.25\nwidth = 3\n");
    const auto c = invoke({"fit-constants", "--config", tmp("bad.cfg")});
    EXPECT_EQ(c.code, 2);
    EXPECT_NE(c.err.find("width"), std::string::npos);
    EXPECT_EQ(invoke({"fit-constants", "--config", tmp("missing.cfg")}).code, 2);
}

TEST(Cli, PhaseLawToStdout) {
    const auto r = invoke({"phase-law", "--eps", "1e-2,1e-4", "--out", "-"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("eps,transit,transit_sqrt_eps\n0.01,30,3\n"), std::string::npos);
    // every non-CSV line on stdout is a comment
    std::istringstream in(r.out);
    std::string line;
    bool in_csv = false;
    while (std::getline(in, line)) {
        if (line.rfind("eps,", 0) == 0) in_csv = true;
        if (!in_csv) EXPECT_EQ(line[0], '#') << line;
    }
    EXPECT_EQ(invoke({"phase-law", "--eps", "0.01", "--c1", "0.1", "--max-iter", "1000", "--out", "-"}).code, 1);
}

TEST(Cli, RenderMandelWithSidecarAndThreads) {
    const auto a = invoke({"render-mandel", "--px", "48", "--py", "32", "--threads", "1", "--out", tmp("m1.ppm")});
    ASSERT_EQ(a.code, 0) << a.err;
    const auto b = invoke({"render-mandel", "--px", "48", "--py", "32", "--threads", "3", "--out", tmp("m3.ppm")});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(slurp(tmp("m1.ppm")), slurp(tmp("m3.ppm")));
    const Raster r = read_image(tmp("m1.ppm"));
    EXPECT_EQ(r.width, 48);
    EXPECT_EQ(r.height, 32);
    const std::string side = slurp(tmp("m1.ppm.cfg"));
    EXPECT_NE(side.find("# px = 48"), std::string::npos);
    EXPECT_EQ(side.find("threads"), std::string::npos);
}

TEST(Cli, RenderJulia) {
    const auto r = invoke({"render-julia", "--c", "-0.12+0.75i", "--px", "40", "--out", tmp("j.ppm")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(read_image(tmp("j.ppm")).width, 40);
}

TEST(Cli, DecoratedModelReuse) {
    const auto a = invoke({"render-decorated", "--px", "64", "--model-out", tmp("model.txt"), "--out",
                        tmp("d1.ppm")});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_NE(a.out.find("level0="), std::string::npos);
    const auto b = invoke({"render-decorated", "--px", "64", "--model", tmp("model.txt"), "--out", tmp("d2.ppm")});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(slurp(tmp("d1.ppm")), slurp(tmp("d2.ppm")));
    EXPECT_EQ(invoke({"render-decorated", "--sigma", "0", "--px", "8", "--out", tmp("d3.ppm")}).code, 2);
}

TEST(Cli, CentersLawAndZoom) {
    const auto f = invoke({"find-centers", "--n-last", "12", "--out", tmp("centers.csv")});
    ASSERT_EQ(f.code, 0) << f.err;
    std::ifstream in(tmp("centers.csv"));
    const auto recs = read_center_csv(in);
    ASSERT_GE(recs.size(), 6u);
    EXPECT_EQ(recs.front().n, 5);

    const auto law = invoke({"center-law", "--centers", tmp("centers.csv"), "--out", tmp("law.txt")});
    ASSERT_EQ(law.code, 0) << law.err;
    EXPECT_NE(law.out.find("slope = "), std::string::npos);
    EXPECT_NE(slurp(tmp("law.txt")).find("theoretical_slope = "), std::string::npos);

    const auto z = invoke({"zoom-copy", "--centers", tmp("centers.csv"), "--n", "8", "--px", "40",
                        "--out", tmp("zoom.ppm")});
    ASSERT_EQ(z.code, 0) << z.err;
    EXPECT_EQ(invoke({"zoom-copy", "--centers", tmp("centers.csv"), "--n", "99", "--out", tmp("z.ppm")}).code, 2);
    EXPECT_EQ(invoke({"zoom-copy", "--out", tmp("z.ppm")}).code, 2);
}

TEST(Cli, Figure1Bundle) {
    const std::string dir = tmp("fig");
    const auto r = invoke({"figure1", "--out-dir", dir, "--px", "60", "--zoom-px", "40", "--zoom-max-iter",
                        "2000", "--n-last", "12", "--zoom-n", "6"});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* f : {"config.txt", "model.txt", "fig1i.ppm", "constants.txt", "centers.csv",
                          "center_law.txt", "fig1_zoom_n6.ppm"})
        EXPECT_TRUE(std::filesystem::exists(dir + "/" + f)) << f;
}
