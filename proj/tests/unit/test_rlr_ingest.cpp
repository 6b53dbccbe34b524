#include <gtest/gtest.h>

#include <filesystem>

#include "slrgdp/csv.hpp"
#include "slrgdp/error.hpp"
#include "slrgdp/rlr_ingest.hpp"

using namespace slrgdp;

namespace {
const std::string kFixtures = std::string(SLRGDP_FIXTURE_DIR) + "/v1";

StationSeries station(int id, std::vector<std::pair<int, double>> values) {
  StationSeries s;
  s.station_id = id;
  for (auto [y, v] : values) s.records.push_back({y, v, "N", "000"});
  return s;
}
}  // namespace

TEST(ParseRlr, TwoRecords) {
  const auto s = parse_rlr_annual("1900; 6978; 0; 000\n1901; 6982; 0; 000", 7);
  ASSERT_EQ(s.records.size(), 2u);
  EXPECT_EQ(s.station_id, 7);
  EXPECT_EQ(s.records[0].year, 1900);
  EXPECT_EQ(*s.records[0].rlr_mm, 6978.0);
  EXPECT_EQ(*s.records[1].rlr_mm, 6982.0);
}

TEST(ParseRlr, SentinelIsAbsent) {
  const auto s = parse_rlr_annual("1900; -99999; 0; 000", 1);
  ASSERT_EQ(s.records.size(), 1u);
  EXPECT_FALSE(s.records[0].rlr_mm.has_value());
  EXPECT_EQ(s.present_count(), 0u);
}

TEST(ParseRlr, ConfigurableSentinel) {
  RlrParseOptions opt;
  opt.missing_sentinel = -1;
  const auto s = parse_rlr_annual("1900; -1; 0; 000\n1901; 7000; 0; 000", 1, opt);
  EXPECT_FALSE(s.records[0].rlr_mm.has_value());
  EXPECT_EQ(s.present_count(), 1u);
}

TEST(ParseRlr, FixtureRoundTrip) {
  const auto text = csv::read_file(kFixtures + "/rlr/101.rlrdata");
  const auto s = parse_rlr_annual(text, 101);
  EXPECT_EQ(s.records.size(), 121u);
  EXPECT_EQ(s.records.front().year, 1900);
  EXPECT_EQ(s.records.back().year, 2020);
  EXPECT_EQ(s.present_count(), 118u);
  const auto again = parse_rlr_annual(serialize_rlr_annual(s), 101);
  EXPECT_EQ(again.records, s.records);
}

TEST(ParseRlr, RoundTripNonIntegerValues) {
  auto s = station(3, {{1950, 7001.25}, {1951, 6999.1234567890123}});
  s.records.push_back({1952, std::nullopt, "Y", "001"});
  const auto again = parse_rlr_annual(serialize_rlr_annual(s), 3);
  EXPECT_EQ(again.records, s.records);
}

TEST(ParseRlr, MalformedLineNamesLine) {
  try {
    parse_rlr_annual("1900; 6978; 0; 000\n19x1; 6982; 0; 000", 1);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_rlr_annual("1900; abc; 0; 000", 1), ParseError);
  EXPECT_THROW(parse_rlr_annual("1900", 1), ParseError);
  EXPECT_THROW(parse_rlr_annual("1900; -5; 0; 000", 1), ParseError);
}

TEST(ParseRlr, DuplicateYearIsStructuralError) {
  EXPECT_THROW(parse_rlr_annual("1900; 6978; 0; 000\n1900; 6982; 0; 000", 1), DataError);
}

TEST(ParseRlr, WhitespaceAndBlankLines) {
  const auto s = parse_rlr_annual("\n  1900 ;  6978 ; 0 ; 000  \n\n", 1);
  ASSERT_EQ(s.records.size(), 1u);
  EXPECT_EQ(*s.records[0].rlr_mm, 6978.0);
}

TEST(StationList, ParsesPsmslLayout) {
  const auto list = parse_station_list(csv::read_file(kFixtures + "/filelist.txt"));
  ASSERT_EQ(list.size(), 5u);
  EXPECT_EQ(list[0].station_id, 101);
  EXPECT_EQ(list[0].name, "LAGOON NORTH");
}

TEST(LoadDirectory, OrderedByStationId) {
  const auto all = load_rlr_directory(kFixtures + "/rlr");
  ASSERT_EQ(all.size(), 5u);
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LT(all[i - 1].station_id, all[i].station_id);
}

TEST(Nuts2, Syntax) {
  EXPECT_TRUE(is_nuts2_code("ITH3"));
  EXPECT_TRUE(is_nuts2_code("UKF"));
  EXPECT_TRUE(is_nuts2_code("FI1D"));
  EXPECT_FALSE(is_nuts2_code("it3"));
  EXPECT_FALSE(is_nuts2_code("I3"));
  EXPECT_FALSE(is_nuts2_code("ITH34"));
}

TEST(StationMap, RejectsDuplicatesAndBadCodes) {
  EXPECT_THROW(parse_station_map_csv("station_id,region_code,country_code\n1,ITH3,IT\n1,ITH4,IT\n"), DataError);
  EXPECT_THROW(parse_station_map_csv("station_id,region_code,country_code\n1,bad,IT\n"), ParseError);
}

TEST(MapStations, TwoStationsOneRegion) {
  const auto g = map_stations_to_regions({station(1, {{1950, 7000}}), station(2, {{1950, 7010}})},
                                         parse_station_map_csv("station_id,region_code,country_code\n"
                                                               "1,ITH3,IT\n2,ITH3,IT\n"));
  ASSERT_EQ(g.groups.size(), 1u);
  EXPECT_EQ(g.groups.at("ITH3").size(), 2u);
  EXPECT_TRUE(g.unmapped.empty());
}

TEST(MapStations, UnmappedReported) {
  const auto g = map_stations_to_regions({station(1, {{1950, 7000}})},
                                         parse_station_map_csv("station_id,region_code,country_code\n"));
  EXPECT_TRUE(g.groups.empty());
  ASSERT_EQ(g.unmapped.size(), 1u);
  EXPECT_EQ(g.unmapped[0], 1);
}

TEST(MapStations, FiveStationsThreeRegionsOneUnknownEntry) {
  std::vector<StationSeries> st;
  for (int id = 1; id <= 5; ++id) st.push_back(station(id, {{1950, 7000.0 + id}}));
  const auto g = map_stations_to_regions(st, parse_station_map_csv("station_id,region_code,country_code\n"
                                                                   "1,ITH3,IT\n2,ITH3,IT\n3,ITH4,IT\n"
                                                                   "4,BE23,BE\n5,BE23,BE\n99,BE21,BE\n"));
  EXPECT_EQ(g.groups.size(), 3u);
  EXPECT_EQ(g.warnings.size(), 1u);
  EXPECT_EQ(g.unmapped.size() + g.station_count(), st.size());
}

TEST(MapStations, PartitionProperty) {
  std::vector<StationSeries> st;
  for (int id = 1; id <= 20; ++id) st.push_back(station(id, {{1950, 7000.0}}));
  std::string map = "station_id,region_code,country_code\n";
  for (int id = 1; id <= 20; id += 3) map += std::to_string(id) + ",ITH" + std::to_string(id % 4) + ",IT\n";
  const auto g = map_stations_to_regions(st, parse_station_map_csv(map));
  EXPECT_EQ(g.unmapped.size() + g.station_count(), st.size());
}

namespace {
RegionEconSeries base_series() {
  RegionEconSeries b;
  b.region_code = "ITH3";
  b.country_code = "IT";
  b.observations = {{2010, 95.0, 1000.0}, {2015, 100.0, 1000.0}};
  return b;
}
std::vector<GrowthStep> steps(int from, int to, double g) {
  std::vector<GrowthStep> out;
  for (int y = from; y <= to; ++y) out.push_back({y, g, 0.0});
  return out;
}
}  // namespace

TEST(Splice, ZeroGrowth) {
  const auto s = splice_growth_extension(base_series(), steps(2016, 2020, 0.0));
  EXPECT_EQ(s.find(2020)->gdp, 100.0);
}

TEST(Splice, Compounding) {
  const auto s = splice_growth_extension(base_series(), steps(2016, 2020, 0.02));
  EXPECT_NEAR(s.find(2020)->gdp, 110.40808032, 1e-9);
}

TEST(Splice, GapIsError) {
  EXPECT_THROW(splice_growth_extension(base_series(), steps(2018, 2020, 0.02)), DataError);
}

TEST(Splice, RateAtMinusOneIsError) {
  EXPECT_THROW(splice_growth_extension(base_series(), steps(2016, 2017, -1.0)), DataError);
}

TEST(Splice, BaseObservationsBitIdentical) {
  const auto b = base_series();
  const auto s = splice_growth_extension(b, steps(2016, 2020, 0.037));
  for (std::size_t i = 0; i < b.observations.size(); ++i) {
    EXPECT_EQ(s.observations[i].year, b.observations[i].year);
    EXPECT_EQ(s.observations[i].gdp, b.observations[i].gdp);
    EXPECT_EQ(s.observations[i].population, b.observations[i].population);
  }
}

TEST(Econ, ParsesFixture) {
  const auto econ = parse_econ_csv(csv::read_file(kFixtures + "/econ.csv"));
  ASSERT_EQ(econ.size(), 4u);
  EXPECT_EQ(econ[0].region_code, "BE23");
  EXPECT_EQ(econ[0].observations.size(), 13u);
  EXPECT_THROW(parse_econ_csv("region_code,country_code,year,gdp,population\nITH3,IT,19x0,1,5\n"), ParseError);
}
