#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "slrgdp_cli/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kFixtures = fs::path(SLRGDP_FIXTURE_DIR) / "v1";

struct Result {
  int code = -1;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "slrgdp");
  std::ostringstream out, err;
  Result r;
  r.code = slrgdp::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& s) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << s;
}

// Data lines of a CSV with a provenance block.
std::vector<std::string> body(const std::string& csv) {
  std::vector<std::string> lines;
  std::istringstream in(csv);
  for (std::string l; std::getline(in, l);)
    if (!l.empty() && l[0] != '#') lines.push_back(l);
  return lines;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("slrgdp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result ingest(const fs::path& out, const fs::path& map = kFixtures / "station_map.csv") {
    return run({"ingest", "--rlr-dir", (kFixtures / "rlr").string(), "--station-list",
                (kFixtures / "filelist.txt").string(), "--station-map", map.string(), "--econ",
                (kFixtures / "econ.csv").string(), "--extension", (kFixtures / "extension.csv").string(), "-o",
                out.string()});
  }

  // ingest -> estimate -> effects -> roll -> project
  void pipeline(const fs::path& out) {
    ASSERT_EQ(ingest(out).code, 0);
    const auto panel = (out / "panel.csv").string();
    ASSERT_EQ(run({"estimate", "--panel", panel, "--spec", "adaptation", "--spec", "dynamic", "-o", out.string()}).code,
              0);
    ASSERT_EQ(run({"effects", "--fit", (out / "fit_adaptation.json").string(), "--dynamic-fit",
                   (out / "fit_dynamic.json").string(), "-o", out.string()})
                  .code,
              0);
    ASSERT_EQ(run({"roll", "--panel", panel, "--spec", "linear", "--window", "8", "-o", out.string()}).code, 0);
    ASSERT_EQ(run({"project", "--inject", (kFixtures / "paper_coefficients.cfg").string(), "--scenarios",
                   (kFixtures / "scenarios.csv").string(), "--sea-levels", (out / "region_sea_level.csv").string(),
                   "--top-k", "2", "-o", out.string()})
                  .code,
              0);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, IngestFixturePanel) {
  const auto r = ingest(dir_);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = json::parse(slurp(dir_ / "ingest_report.json"));
  EXPECT_EQ(report["panel_rows"], 36);
  EXPECT_EQ(report["panel_regions"], 3);
  EXPECT_EQ(report["regions_excluded"], json::array({"FR10"}));
  EXPECT_EQ(body(slurp(dir_ / "panel.csv")).size(), 37u);
  EXPECT_NE(slurp(dir_ / "panel.csv").find("# input: rlr_dir sha256="), std::string::npos);
}

TEST_F(Cli, IngestEmptyDirectory) {
  fs::create_directories(dir_ / "empty");
  const auto r = run({"ingest", "--rlr-dir", (dir_ / "empty").string(), "--station-map",
                      (kFixtures / "station_map.csv").string(), "--econ", (kFixtures / "econ.csv").string(), "-o",
                      (dir_ / "out").string()});
  EXPECT_EQ(r.code, slrgdp::cli::kExitData);
  const auto e = json::parse(r.err);
  EXPECT_EQ(e["message"], "no stations");
  EXPECT_EQ(e["exit_code"], 3);
}

TEST_F(Cli, IngestNothingMapped) {
  spit(dir_ / "map.csv", "station_id,region_code,country_code\n999,ZZ11,ZZ\n");
  const auto r = ingest(dir_ / "out", dir_ / "map.csv");
  EXPECT_EQ(r.code, slrgdp::cli::kExitData);
  EXPECT_NE(r.err.find("no coastal regions"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, slrgdp::cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, slrgdp::cli::kExitUsage);
  ASSERT_EQ(ingest(dir_).code, 0);
  const auto r = run({"estimate", "--panel", (dir_ / "panel.csv").string(), "--spec", "bogus", "-o", dir_.string()});
  EXPECT_EQ(r.code, slrgdp::cli::kExitUsage);
  EXPECT_EQ(json::parse(r.err)["error"], "usage");
  EXPECT_EQ(run({"effects", "-o", dir_.string()}).code, slrgdp::cli::kExitUsage);
  EXPECT_EQ(run({"--version"}).code, 0);
}

TEST_F(Cli, ListSpecs) {
  const auto r = run({"estimate", "--list-specs"});
  ASSERT_EQ(r.code, 0);
  for (const char* n : {"adaptation", "dynamic", "linear", "subsample_1980_2020", "fes_1", "fes_2"})
    EXPECT_NE(r.out.find(n), std::string::npos) << n;
}

TEST_F(Cli, SubsampleTooSmall) {
  ASSERT_EQ(ingest(dir_).code, 0);
  const auto r = run({"estimate", "--panel", (dir_ / "panel.csv").string(), "--spec", "subsample_1980_2020", "-o",
                      dir_.string()});
  EXPECT_EQ(r.code, slrgdp::cli::kExitData);
}

TEST_F(Cli, EffectsFromInjection) {
  const auto r = run({"effects", "--inject", (kFixtures / "paper_coefficients.cfg").string(), "-o", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = body(slurp(dir_ / "effect_curve.csv"));
  const auto ref = std::find_if(rows.begin(), rows.end(), [](const std::string& l) { return l.rfind("7000,", 0) == 0; });
  ASSERT_NE(ref, rows.end());
  EXPECT_EQ(*ref, "7000,0,0,0,0,0,0,0,0.0,0.0,0.0,0.0,0");
  EXPECT_EQ(rows.back().back(), '1');  // 9000 mm lies beyond the observed range
  const auto points = body(slurp(dir_ / "point_estimates.csv"));
  ASSERT_EQ(points.size(), 7u);
  EXPECT_EQ(points[2], "7000,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0");
  const auto curve = json::parse(slurp(dir_ / "effect_curve.json"));
  EXPECT_EQ(curve["curve"].size(), 51u);
}

TEST_F(Cli, ThresholdNoneFoundOnShortGrid) {
  const auto r = run({"effects", "--inject", (kFixtures / "paper_coefficients.cfg").string(), "--grid-start", "6500",
                      "--grid-end", "7300", "--grid-step", "50", "-o", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(slurp(dir_ / "effect_curve.json"))["threshold_mm"], "none-found");
  EXPECT_EQ(json::parse(slurp(dir_ / "threshold.json"))["threshold_mm"], "none-found");
}

TEST_F(Cli, ProjectionZeroRise) {
  ASSERT_EQ(ingest(dir_).code, 0);
  spit(dir_ / "zero.csv",
       "scenario,ssp,rcp,ice,region_code,year,slr_mm_vs_base,population\n"
       "s,2,4.5,medium,ITH3,2050,0,1e6\ns,2,4.5,medium,ITH3,2100,0,1e6\n"
       "s,2,4.5,medium,BE23,2100,0,1e6\n");
  const auto r = run({"project", "--inject", (kFixtures / "paper_coefficients.cfg").string(), "--scenarios",
                      (dir_ / "zero.csv").string(), "--sea-levels", (dir_ / "region_sea_level.csv").string(),
                      "--top-k", "1", "-o", dir_.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(slurp(dir_ / "projections.json"));
  for (const auto& p : j["projections"]) {
    EXPECT_EQ(p["terminal_2100"].get<double>(), 0.0);
    for (const auto& pt : p["path"]) EXPECT_EQ(pt["cumulative_change"].get<double>(), 0.0);
  }
}

TEST_F(Cli, RankingMatchesProjections) {
  pipeline(dir_);
  const auto j = json::parse(slurp(dir_ / "projections.json"));
  std::vector<std::pair<double, std::string>> high;
  for (const auto& p : j["projections"])
    if (p["scenario"] == "SSP5-RCP8.5-high_end") high.emplace_back(p["terminal_2100"].get<double>(), p["region_code"]);
  std::sort(high.begin(), high.end());
  ASSERT_GE(high.size(), 2u);
  const auto rows = body(slurp(dir_ / "ranking_SSP5-RCP8.5-high_end.csv"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].rfind("1," + high[0].second + ",", 0), 0u);
  EXPECT_NE(rows[1].find("," + high.back().second + ","), std::string::npos);
  const auto agg = json::parse(slurp(dir_ / "aggregates.json"));
  EXPECT_EQ(agg["aggregates"].size(), 3u);
}

TEST_F(Cli, PipelineIsDeterministic) {
  pipeline(dir_ / "a");
  pipeline(dir_ / "b");
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir_ / "a")) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  EXPECT_GE(names.size(), 15u);
  for (const auto& n : names) {
    ASSERT_TRUE(fs::exists(dir_ / "b" / n)) << n;
    EXPECT_EQ(slurp(dir_ / "a" / n), slurp(dir_ / "b" / n)) << n;
  }
}

TEST_F(Cli, ConfigFileAndPrecedence) {
  ASSERT_EQ(ingest(dir_).code, 0);
  spit(dir_ / "run.ini", "output-dir = " + (dir_ / "from_config").string() + "\n[estimate]\npanel = " +
                             (dir_ / "panel.csv").string() + "\nspec = fes_1\n");
  ASSERT_EQ(run({"--config", (dir_ / "run.ini").string(), "estimate"}).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "from_config" / "fit_fes_1.json"));
  ASSERT_EQ(run({"--config", (dir_ / "run.ini").string(), "estimate", "--spec", "fes_2", "-o",
                 (dir_ / "from_cli").string()})
                .code,
            0);
  EXPECT_TRUE(fs::exists(dir_ / "from_cli" / "fit_fes_2.json"));
  EXPECT_FALSE(fs::exists(dir_ / "from_cli" / "fit_fes_1.json"));
}

TEST(Digest, KnownVectors) {
  EXPECT_EQ(slrgdp::cli::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(slrgdp::cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
