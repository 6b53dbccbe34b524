#include <gtest/gtest.h>

#include <cmath>

#include "slrgdp/error.hpp"
#include "slrgdp/model_specs.hpp"
#include "slrgdp/serialize.hpp"
#include "slrgdp/validation.hpp"

using namespace slrgdp;

namespace {

FitResult sample_fit() {
  SyntheticDGP d;
  d.n_regions = 20;
  d.n_countries = 4;
  d.n_decades = 6;
  d.seed = 77;
  return fit_panel(build_spec("adaptation"), generate_panel(d));
}

Provenance prov() {
  Provenance p;
  p.command = "estimate";
  p.spec = "adaptation";
  p.inputs = {{"panel.csv", std::string(64, 'a')}};
  p.settings = {{"cluster", "two_way"}};
  return p;
}

std::size_t count_lines(const std::string& s, std::string_view prefix) {
  std::size_t n = 0, pos = 0;
  while (pos < s.size()) {
    const auto end = s.find('\n', pos);
    if (s.compare(pos, prefix.size(), prefix) == 0) ++n;
    pos = end == std::string::npos ? s.size() : end + 1;
  }
  return n;
}

}  // namespace

TEST(Provenance, Header) {
  const auto h = prov().csv_header();
  EXPECT_EQ(h.rfind("# command: estimate\n# spec: adaptation\n# version: ", 0), 0u);
  EXPECT_NE(h.find("# input: panel.csv sha256=aaaa"), std::string::npos);
  EXPECT_NE(h.find("# setting: cluster=two_way\n"), std::string::npos);
}

TEST(FitJson, RoundTripIsExact) {
  const auto fit = sample_fit();
  const auto back = fit_from_json(fit_to_json(fit, prov()));
  EXPECT_EQ(back.names, fit.names);
  EXPECT_EQ(back.coefficients, fit.coefficients);
  EXPECT_EQ(back.vcov, fit.vcov);
  EXPECT_EQ(back.constant, fit.constant);
  EXPECT_EQ(back.n_obs, fit.n_obs);
  EXPECT_EQ(back.r_squared, fit.r_squared);
  EXPECT_EQ(back.fe_absorbed, fit.fe_absorbed);
  EXPECT_EQ(back.cluster_counts, fit.cluster_counts);
  EXPECT_EQ(back.cluster_mode, fit.cluster_mode);
  EXPECT_EQ(fit_to_json(back, prov()), fit_to_json(fit, prov()));
}

TEST(FitJson, Malformed) {
  EXPECT_THROW(fit_from_json("{"), ParseError);
  EXPECT_THROW(fit_from_json("{\"spec\": \"x\"}"), ParseError);
}

TEST(FitTable, Layout) {
  const auto fit = sample_fit();
  const auto csv = fit_table_csv({fit}, prov());
  EXPECT_NE(csv.find("term,adaptation\n"), std::string::npos);
  EXPECT_NE(csv.find("\nln_slr,"), std::string::npos);
  EXPECT_EQ(count_lines(csv, ",("), fit.names.size());
  EXPECT_NE(csv.find("\n,("), std::string::npos);
  EXPECT_NE(csv.find("country_year_fe,Yes\nregion_fe,Yes\nobservations," + std::to_string(fit.n_obs)),
            std::string::npos);
}

TEST(EffectCsv, PercentColumnsAndFlag) {
  AdaptationCoefficients c;
  c.b << 675, -38, -33;
  const auto curve = effect_curve(c, {7000, 7500, 9000});
  const auto csv = effect_curve_csv(curve, prov());
  EXPECT_NE(csv.find("\n7000,0,0,0,0,0,0,0,0.0,0.0,0.0,0.0,0\n"), std::string::npos);
  EXPECT_NE(csv.find("# extrapolation_beyond_mm: 7397\n"), std::string::npos);
  EXPECT_EQ(csv.back(), '\n');
  EXPECT_NE(csv.find(",1\n"), std::string::npos);
}

TEST(EffectJson, ThresholdSentinel) {
  AdaptationCoefficients c;
  c.b << 1, 1, 0;
  const auto curve = effect_curve(c, {7000, 8000});
  EXPECT_NE(effect_curve_json(curve, std::nullopt, prov()).find("\"threshold_mm\": \"none-found\""),
            std::string::npos);
  EXPECT_NE(effect_curve_json(curve, 7512.5, prov()).find("\"threshold_mm\": 7512.5"), std::string::npos);
}

TEST(PointTable, ReferenceRow) {
  AdaptationCoefficients c;
  c.b << 675, -38, -33;
  const auto csv = point_table_csv(point_estimate_table(c, {1232, -69, -758, 43}), prov());
  EXPECT_NE(csv.find("\n7000,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0\n"), std::string::npos);
}

TEST(RankingCsv, SideBySide) {
  RegionRanking r;
  r.worst = {{"A", -0.2}, {"B", -0.1}};
  r.best = {{"C", 0.05}, {"D", 0.01}};
  const auto csv = ranking_csv(ScenarioId{5, 8.5, IceScenario::high_end}, r, prov());
  EXPECT_NE(csv.find("# scenario: SSP5-RCP8.5-high_end\n"), std::string::npos);
  EXPECT_NE(csv.find("\n1,A,-20.0,-0.20000000000000001,C,5.0,0.050000000000000003\n"), std::string::npos);
}

TEST(Injection, ParsesEstimatesSeAndCov) {
  const auto fits = parse_injected_coefficients(
      "# comment\n"
      "adaptation.penalty = -33\n"
      "adaptation.ln_slr = 675\n"
      "adaptation.ln_slr_sq = -38\n"
      "adaptation.se.ln_slr = 279\n"
      "adaptation.cov.ln_slr.ln_slr_sq = -4400\n"
      "dynamic.ln_slr = 1232\n");
  ASSERT_EQ(fits.size(), 2u);
  const auto& a = fits.at("adaptation");
  EXPECT_EQ(a.names, (std::vector<std::string>{"ln_slr", "ln_slr_sq", "penalty"}));
  EXPECT_EQ(a.coef("penalty"), -33);
  EXPECT_EQ(a.se("ln_slr"), 279);
  EXPECT_EQ(a.cov("ln_slr", "ln_slr_sq"), -4400);
  EXPECT_EQ(a.cov("ln_slr_sq", "ln_slr"), -4400);
  EXPECT_EQ(a.se("penalty"), 0);
}

TEST(Injection, Errors) {
  EXPECT_THROW(parse_injected_coefficients("adaptation.bogus = 1\n"), UsageError);
  EXPECT_THROW(parse_injected_coefficients("nospec.ln_slr = 1\n"), UsageError);
  EXPECT_THROW(parse_injected_coefficients("adaptation.ln_slr 1\n"), ParseError);
  EXPECT_THROW(parse_injected_coefficients("adaptation.ln_slr = x\n"), ParseError);
  EXPECT_THROW(parse_injected_coefficients("adaptation.ln_slr = 1\nadaptation.ln_slr = 2\n"), ParseError);
}
