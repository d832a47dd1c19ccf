#include "cli.hpp"
#include "fsacf/io.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace fsacf;
using namespace fsacf::io;
using nlohmann::json;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run_cli(const std::vector<std::string>& args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("fsacf_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    [[nodiscard]] std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

std::string read_text(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::string sine_pair_csv() {
    auto grid = Grid::uniform(201);
    std::vector<double> v(grid->size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::sin(2.0 * M_PI * grid->point(j));
    std::vector<Curve> curves{Curve(grid, v), Curve(grid, v)};
    std::ostringstream s;
    write_curves(s, FunctionalSeries(grid, std::move(curves)));
    return s.str();
}

std::string zero_curve_csv() {
    auto grid = Grid::uniform(201);
    std::vector<Curve> curves{Curve(grid, std::vector<double>(grid->size(), 0.0))};
    std::ostringstream s;
    write_curves(s, FunctionalSeries(grid, std::move(curves)));
    return s.str();
}

}  // namespace

TEST(Cli, MissingInputIsUsageError) {
    const auto r = run_cli({"sacf"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("input"), std::string::npos);
}

TEST(Cli, BadFlagValueNamesTheFlag) {
    const auto sim = run_cli({"simulate", "--process", "bb", "--n", "10", "--M", "21"});
    ASSERT_EQ(sim.code, 0);
    const auto r = run_cli({"sacf", "--input", "-", "--alpha", "1.5"}, sim.out);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("alpha"), std::string::npos);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    EXPECT_EQ(run_cli({"simulate", "--process", "nope", "--n", "5"}).code, 2);
    EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, MalformedCsvIsDataError) {
    const auto r = run_cli({"sacf", "--input", "-"}, "t,0,1\n1,0.5,oops\n");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("oops"), std::string::npos);
}

TEST(Cli, LagBeyondSampleNamesTheFlag) {
    const auto sim = run_cli({"simulate", "--process", "bb", "--n", "5", "--M", "21"});
    const auto r = run_cli({"sacf", "--input", "-", "-H", "10"}, sim.out);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--lags"), std::string::npos);
}

TEST(Cli, SimulateThenSacfGivesThirtyPlausibleRows) {
    const auto sim = run_cli({"simulate", "--process", "bb", "--n", "50", "--M", "101", "--seed", "7"});
    ASSERT_EQ(sim.code, 0) << sim.err;
    const auto r = run_cli({"sacf", "--input", "-", "-H", "30", "--alpha", "0.05"}, sim.out);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 31u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"lag", "rho", "lower", "upper"}));
    std::size_t outside = 0;
    for (std::size_t h = 1; h <= 30; ++h) {
        ASSERT_EQ(rows[h].size(), 4u);
        EXPECT_EQ(std::stoul(rows[h][0]), h);
        const double rho = std::stod(rows[h][1]);
        const double lo = std::stod(rows[h][2]);
        const double hi = std::stod(rows[h][3]);
        EXPECT_DOUBLE_EQ(lo, -hi);
        if (rho < lo || rho > hi) ++outside;
    }
    // P(Binomial(30, 0.05) > 6) < 0.002
    EXPECT_LE(outside, 6u);
}

TEST(Cli, KnownCenterReproducesHandExample) {
    TempDir dir;
    write_text(dir.file("zero.csv"), zero_curve_csv());
    const auto r = run_cli({"sacf", "--input", "-", "-H", "1", "--center", dir.file("zero.csv"), "--format", "json"},
                           sine_pair_csv());
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_NEAR(j["rho"][0].get<double>(), 0.5, 1e-12);
    EXPECT_EQ(j["n"].get<std::size_t>(), 2u);
}

TEST(Cli, SimulateIsReproducibleAndRoundTrips) {
    const std::vector<std::string> args{"simulate", "--process", "far1", "--S", "-0.5", "--n", "40", "--M", "31",
                                        "--seed", "42"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    std::istringstream in(a.out);
    const auto series = read_curves(in);
    EXPECT_EQ(series.size(), 40u);
    EXPECT_EQ(series.grid().size(), 31u);
    std::ostringstream again;
    write_curves(again, series);
    EXPECT_EQ(again.str(), a.out);

    auto other = args;
    other.back() = "43";
    EXPECT_NE(run_cli(other).out, a.out);
}

TEST(Cli, CsvAndJsonAgree) {
    const auto sim = run_cli({"simulate", "--process", "bm", "--n", "60", "--M", "41", "--seed", "3"});
    const auto csv = run_cli({"sacf", "--input", "-", "-H", "5"}, sim.out);
    const auto js = run_cli({"sacf", "--input", "-", "-H", "5", "--format", "json"}, sim.out);
    ASSERT_EQ(csv.code, 0);
    ASSERT_EQ(js.code, 0);
    const auto rows = csv_rows(csv.out);
    const auto j = json::parse(js.out);
    ASSERT_EQ(j["rho"].size(), 5u);
    for (std::size_t h = 1; h <= 5; ++h) {
        EXPECT_DOUBLE_EQ(std::stod(rows[h][1]), j["rho"][h - 1].get<double>());
        EXPECT_DOUBLE_EQ(std::stod(rows[h][3]), j["bound"].get<double>());
    }
}

TEST(Cli, FacfHasEmptyBounds) {
    const auto sim = run_cli({"simulate", "--process", "bb", "--n", "30", "--M", "21"});
    const auto r = run_cli({"facf", "--input", "-", "-H", "3"}, sim.out);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[1].size(), 4u);
    EXPECT_TRUE(rows[1][2].empty());
    EXPECT_TRUE(rows[1][3].empty());
}

TEST(Cli, PortmanteauReportsEachH) {
    const auto sim = run_cli({"simulate", "--process", "far1", "--S", "0.6", "--n", "200", "--M", "41"});
    const auto r = run_cli({"test", "--input", "-", "-H", "1,5", "--format", "json"}, sim.out);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    ASSERT_EQ(j["tests"].size(), 2u);
    EXPECT_EQ(j["tests"][1]["H"].get<std::size_t>(), 5u);
    EXPECT_LT(j["tests"][0]["p"].get<double>(), 0.01);
}

TEST(Cli, FitResidualsPipeline) {
    const auto sim = run_cli({"simulate", "--process", "far1", "--S", "0.6", "--n", "300", "--M", "41", "--seed", "9"});
    const auto fit = run_cli({"fit-fsar", "--input", "-", "--lags", "1", "--cpv", "0.9"}, sim.out);
    ASSERT_EQ(fit.code, 0) << fit.err;
    json model;
    EXPECT_NO_THROW(model = json::parse(fit.out));
    const auto res = run_cli({"residuals", "--input", "-", "--lags", "1"}, sim.out);
    ASSERT_EQ(res.code, 0) << res.err;
    std::istringstream in(res.out);
    EXPECT_EQ(read_curves(in).size(), 299u);
    const auto t = run_cli({"test", "--input", "-", "-H", "5"}, res.out);
    EXPECT_EQ(t.code, 0) << t.err;
}

TEST(Cli, MedianAndFpcaWriteFiles) {
    TempDir dir;
    const auto sim = run_cli({"simulate", "--process", "bm", "--n", "40", "--M", "21"});
    const auto med = run_cli({"median", "--input", "-"}, sim.out);
    ASSERT_EQ(med.code, 0) << med.err;
    std::istringstream in(med.out);
    EXPECT_EQ(read_curves(in).size(), 1u);

    const std::string prefix = dir.file("pc");
    const auto f = run_cli({"fpca", "--input", "-", "-o", prefix, "--components", "3"}, sim.out);
    ASSERT_EQ(f.code, 0) << f.err;
    for (const char* suffix : {"_eigenvalues.csv", "_eigenfunctions.csv", "_scores.csv"})
        EXPECT_TRUE(std::filesystem::exists(prefix + suffix)) << suffix;
    std::istringstream ef(read_text(prefix + "_eigenfunctions.csv"));
    EXPECT_EQ(read_curves(ef).size(), 3u);
}

TEST(Cli, TransformLogReturn) {
    const auto r = run_cli({"transform", "--input", "-", "--kind", "log-return"}, "t,0,0.5,1\n1,1,2,4\n");
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    const auto s = read_curves(in);
    ASSERT_EQ(s.size(), 1u);
    ASSERT_EQ(s.grid().size(), 2u);
    EXPECT_NEAR(s[0][0], std::log(2.0), 1e-12);
    EXPECT_NEAR(s[0][1], std::log(2.0), 1e-12);
}

TEST(Cli, McCoverageSmallConfig) {
    TempDir dir;
    write_text(dir.file("cov.cfg"),
               "process = bb\nn = [40]\nalpha = [0.05]\nlags = [1]\nreplications = 10\nM = 21\nseed = 5\n");
    const auto r = run_cli({"mc-coverage", "-c", dir.file("cov.cfg"), "--threads", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv_rows(r.out);
    ASSERT_GE(rows.size(), 2u);
    EXPECT_EQ(rows[0][0], "process");
    EXPECT_EQ(rows[1].size(), rows[0].size());
    const auto again = run_cli({"mc-coverage", "-c", dir.file("cov.cfg"), "--threads", "1"});
    EXPECT_EQ(again.out, r.out);
}

TEST(Cli, McConfigErrors) {
    TempDir dir;
    write_text(dir.file("bad.cfg"), "replications = 10\nbogus = 1\n");
    const auto r = run_cli({"mc-power", "-c", dir.file("bad.cfg")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("bogus"), std::string::npos);
    EXPECT_EQ(run_cli({"mc-power", "-c", dir.file("missing.cfg")}).code, 2);
    EXPECT_EQ(run_cli({"mc-misfit"}).code, 2);
    write_text(dir.file("pairs.cfg"), "lambda_pairs = \"1:x\"\n");
    const auto p = run_cli({"mc-variance", "-c", dir.file("pairs.cfg")});
    EXPECT_EQ(p.code, 2);
    EXPECT_NE(p.err.find("lambda_pairs"), std::string::npos);
}

TEST(Cli, McOtherStudiesRun) {
    TempDir dir;
    write_text(dir.file("p.cfg"), "S = [0.3]\nn = [60]\nH = [1]\nreplications = 5\nM = 21\n");
    write_text(dir.file("v.cfg"), "lambda_pairs = \"1:2, 1:1\"\nn = [60]\nalpha = [0.05]\nlags = [1]\nreplications = 5\nM = 21\n");
    write_text(dir.file("m.cfg"), "n = 120\nH = 3\nreplications = 3\nM = 21\n");
    for (const auto& [cmd, cfg] : std::vector<std::pair<std::string, std::string>>{
             {"mc-power", "p.cfg"}, {"mc-variance", "v.cfg"}, {"mc-misfit", "m.cfg"}}) {
        const std::string summary = dir.file(cfg + ".json");
        const auto r = run_cli({cmd, "-c", dir.file(cfg), "--summary", summary});
        EXPECT_EQ(r.code, 0) << cmd << ": " << r.err;
        EXPECT_GE(csv_rows(r.out).size(), 2u) << cmd;
        json parsed;
        EXPECT_NO_THROW(parsed = json::parse(read_text(summary))) << cmd;
    }
}

TEST(Cli, ProcessPipe) {
    const char* exe = std::getenv("FSACF_CLI");
    if (exe == nullptr) GTEST_SKIP() << "FSACF_CLI not set";
    const std::string cmd = std::string(exe) + " simulate --process bb --n 50 --M 101 --seed 7 | " + exe +
                            " sacf --input - -H 30 --alpha 0.05";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    ASSERT_NE(pipe, nullptr);
    std::string text;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) text.append(buf, got);
    EXPECT_EQ(::pclose(pipe), 0);
    const auto direct = run_cli({"simulate", "--process", "bb", "--n", "50", "--M", "101", "--seed", "7"});
    EXPECT_EQ(text, run_cli({"sacf", "--input", "-", "-H", "30", "--alpha", "0.05"}, direct.out).out);
}
