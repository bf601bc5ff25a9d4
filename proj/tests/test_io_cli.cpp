#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fraclap/cli.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/io.hpp"

using namespace fraclap;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "fraclap");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class ScratchDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("fraclap_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST(FormatDouble, RoundTrips) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    for (int k = 0; k < 1000; ++k) {
        const double v = dist(rng) * std::pow(10.0, static_cast<double>(k % 40 - 20));
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
}

TEST_F(ScratchDir, CsvRoundTrip) {
    NdArray U({3, 4, 2});
    std::mt19937 rng(4);
    std::normal_distribution<double> dist;
    for (std::size_t k = 0; k < U.size(); ++k) U[k] = dist(rng);
    const fs::path csv = dir_ / "u.csv";
    write_ndarray_csv(csv, U);
    EXPECT_TRUE(fs::exists(sidecar_path(csv)));
    EXPECT_EQ(json::parse(slurp(sidecar_path(csv)))["shape"], json({3, 4, 2}));
    const std::string text = slurp(csv);
    EXPECT_EQ(text.substr(0, text.find('\n')), "i1,i2,i3,value");
    // The first data row is the last tuple in walker order.
    EXPECT_EQ(text.substr(text.find('\n') + 1, 6), "3,4,2,");
    const NdArray back = read_ndarray_csv(csv);
    EXPECT_EQ(back.shape(), U.shape());
    for (std::size_t k = 0; k < U.size(); ++k) EXPECT_EQ(back[k], U[k]);
}

TEST_F(ScratchDir, CsvReaderRejectsMalformedFiles) {
    const fs::path csv = dir_ / "bad.csv";
    write_ndarray_csv(csv, NdArray({2}, std::vector<double>{1.0, 2.0}));
    {
        std::ofstream f(csv, std::ios::app);
        f << "1,5\n";
    }
    EXPECT_THROW(read_ndarray_csv(csv), ParameterError);
    EXPECT_THROW(read_ndarray_csv(dir_ / "missing.csv"), ParameterError);
}

TEST(KeyValues, ParsesCommentsAndBlanks) {
    const KeyValues kv = parse_key_values("# header\n\nn = 1\n s=0.8  # inline\nsnapshots = 1.8, 1.85,1.9\n");
    EXPECT_EQ(kv.at("n"), "1");
    EXPECT_EQ(kv.at("s"), "0.8");
    EXPECT_EQ(kv.at("snapshots"), "1.8, 1.85,1.9");
    EXPECT_THROW(parse_key_values("no equals sign\n"), ParameterError);
}

TEST(KeyValues, BuildsEvolutionConfig) {
    const EvolutionConfig c = evolution_config_from(parse_key_values(
        "n = 1\ns = 0.8\np = 1.8\nN = 501\nL = 10\ndt = 1e-3\nt_end = 1.9\nsnapshots = 1.8, 1.85, 1.9\n"));
    EXPECT_EQ(c.n, 1);
    EXPECT_EQ(c.N, 501u);
    EXPECT_EQ(c.dt, 1e-3);
    EXPECT_EQ(c.snapshot_times, (std::vector<double>{1.8, 1.85, 1.9}));
    EXPECT_EQ(c.byte_budget, kDefaultByteBudget);
    EXPECT_THROW(evolution_config_from(parse_key_values("n = 1\nbogus = 2\n")), ParameterError);
    EXPECT_THROW(evolution_config_from(parse_key_values("n = 1\ns = abc\n")), ParameterError);
}

TEST(ShippedConfigs, AllParse) {
    std::size_t count = 0;
    for (const auto& entry : fs::recursive_directory_iterator(fs::path(FRACLAP_SOURCE_DIR) / "configs")) {
        if (entry.path().extension() != ".cfg") continue;
        EXPECT_NO_THROW(evolution_config_from(read_key_values(entry.path())).validate()) << entry.path();
        ++count;
    }
    EXPECT_GE(count, 13u);
}

TEST(Cli, NodesPrintsGrid) {
    const CliResult r = run_cli({"nodes", "--n", "5", "--scale", "1"});
    EXPECT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "j,xi,x");
    std::getline(in, line);
    EXPECT_EQ(line.substr(0, 2), "1,");
    const double x1 = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_NEAR(x1, std::sqrt(5.0 + 2.0 * std::sqrt(5.0)), 1e-14);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli({"nodes", "--n", "1", "--scale", "1"}).code, 1);
    EXPECT_EQ(run_cli({"nodes", "--n", "4"}).code, 1);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
    EXPECT_EQ(run_cli({"--help"}).code, 0);
    const CliResult pole = run_cli({"fracplap", "--dims", "8", "--scales", "1", "--s", "0.8", "--p", "2.5",
                                    "--out-dir", (fs::temp_directory_path() / "fraclap_pole").string()});
    EXPECT_EQ(pole.code, 2);
    EXPECT_NE(pole.err.find("PoleError: sp/2 is a positive integer"), std::string::npos);
    const CliResult bad_s = run_cli({"fraclap", "--dims", "8", "--scales", "1", "--s", "1.0", "--out-dir",
                                     (fs::temp_directory_path() / "fraclap_bad_s").string()});
    EXPECT_EQ(bad_s.code, 1);
    EXPECT_EQ(run_cli({"fracplap", "--dims", "8", "--scales", "1", "--s", "0.5", "--p", "1.5", "--compare-exact",
                       "--out-dir", (fs::temp_directory_path() / "fraclap_cmp").string()})
                  .code,
              1);
    fs::remove_all(fs::temp_directory_path() / "fraclap_pole");
    fs::remove_all(fs::temp_directory_path() / "fraclap_bad_s");
    fs::remove_all(fs::temp_directory_path() / "fraclap_cmp");
}

TEST(Cli, FactorReportsSpectrum) {
    const CliResult r = run_cli({"factor", "--n", "64"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["N"], 64);
    EXPECT_EQ(j["min_lambda"].get<double>() < 0.0, true);
    EXPECT_LE(j["reconstruction_residual"].get<double>(), 1e-10);
    EXPECT_GE(j["condition_number"].get<double>(), 1.0);
}

TEST_F(ScratchDir, FracLapWritesManifestAndMatchesReference) {
    const CliResult r = run_cli({"fraclap", "--dims", "39,40,41,42", "--scales", "4.7,4.8,4.9,5", "--s", "0.13",
                                 "--field", "gaussian", "--compare-exact", "--out-dir", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_NEAR(j["max_error"].get<double>(), 2.8839e-10, 1e-4 * 2.8839e-10);
    const json m = json::parse(slurp(dir_ / "manifest.json"));
    EXPECT_EQ(m["subcommand"], "fraclap");
    EXPECT_EQ(m["version"], kToolVersion);
    EXPECT_EQ(m["parameters"]["s"], 0.13);
    EXPECT_TRUE(fs::exists(dir_ / "fraclap.csv"));
    EXPECT_EQ(read_ndarray_csv(dir_ / "fraclap.csv").shape(), (Shape{39, 40, 41, 42}));
}

TEST_F(ScratchDir, SingleThreadRunsAreBitwiseRepeatable) {
    const std::vector<std::string> args = {"--threads", "1",      "fracplap", "--dims", "12,11", "--scales",
                                           "2,2",       "--s",    "0.4",      "--p",    "1.7",   "--mode",
                                           "batch",     "--out-dir"};
    auto a = args;
    a.push_back((dir_ / "a").string());
    auto b = args;
    b.push_back((dir_ / "b").string());
    ASSERT_EQ(run_cli(a).code, 0);
    ASSERT_EQ(run_cli(b).code, 0);
    EXPECT_EQ(slurp(dir_ / "a" / "fracplap.csv"), slurp(dir_ / "b" / "fracplap.csv"));
}

TEST_F(ScratchDir, FracPLapComparesModes) {
    const CliResult r = run_cli({"fracplap", "--dims", "10,9", "--scales", "2,2", "--s", "0.6", "--p", "2",
                                 "--mode", "loop", "--compare-modes", "--compare-exact", "--out-dir", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_LE(j["discrepancy_vs_other_mode"].get<double>(), 1e-13);
    EXPECT_TRUE(j.contains("max_error"));
    const CliResult guarded =
        run_cli({"fracplap", "--dims", "10,9", "--scales", "2,2", "--s", "0.6", "--p", "1.5", "--mode", "loop",
                 "--compare-modes", "--byte-budget", "100", "--out-dir", dir_.string()});
    ASSERT_EQ(guarded.code, 0) << guarded.err;
    EXPECT_EQ(json::parse(guarded.out)["discrepancy_vs_other_mode"], "skipped: memory guard");
}

TEST_F(ScratchDir, BenchSkipsBatchUnderGuard) {
    const CliResult r = run_cli({"bench", "--dims", "16", "--scales", "2", "--s", "0.5", "--p", "1.5",
                                 "--byte-budget", "10", "--out-dir", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["batch"], "skipped: memory guard");
    EXPECT_TRUE(j.contains("loop_wall_time"));
    const CliResult both = run_cli({"bench", "--dims", "16", "--scales", "2", "--s", "0.5", "--p", "2",
                                    "--out-dir", dir_.string()});
    ASSERT_EQ(both.code, 0) << both.err;
    const json k = json::parse(both.out);
    EXPECT_LE(k["discrepancy"].get<double>(), 1e-13);
    EXPECT_TRUE(k.contains("max_error"));
}

TEST_F(ScratchDir, EvolveWritesSnapshots) {
    const fs::path cfg = dir_ / "tiny.cfg";
    {
        std::ofstream f(cfg);
        f << "n = 1\ns = 0.5\np = 1.8\nN = 40\nL = 2\ndt = 1e-3\nt_end = 0.02\nsnapshots = 0.01, 0.02\n";
    }
    const CliResult r = run_cli({"evolve", "--config", cfg.string(), "--out-dir", (dir_ / "out").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["steps"], 20);
    EXPECT_LE(j["drift"].get<double>(), 1e-10);
    EXPECT_TRUE(j.contains("profile_sup_distance"));
    EXPECT_TRUE(fs::exists(dir_ / "out" / "snap_t0.01.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "out" / "snap_t0.02.csv"));
    EXPECT_EQ(slurp(dir_ / "out" / "snap_t0.02.csv").substr(0, 8), "x,u,r,v\n");
    EXPECT_TRUE(fs::exists(dir_ / "out" / "manifest.json"));
}

TEST(Cli, ValidateSuitesPass) {
    for (const char* suite : {"gamma", "hyp", "lemmas"}) {
        const CliResult r = run_cli({"validate", "--suite", suite});
        EXPECT_EQ(r.code, 0) << suite << ": " << r.out << r.err;
        EXPECT_TRUE(json::parse(r.out)["pass"].get<bool>());
    }
    EXPECT_EQ(run_cli({"validate", "--suite", "nope"}).code, 1);
}
