#pragma once

// Tide-gauge and regional-economy ingestion: PSMSL RLR annual files, station
// metadata, station -> NUTS2 mapping, and the regional GDP/population tables.

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slrgdp {

struct RlrRecord {
  int year = 0;
  std::optional<double> rlr_mm;  // empty for the missing-value sentinel
  std::string flag;
  std::string quality;

  bool operator==(const RlrRecord&) const = default;
};

// One tide gauge's annual mean sea level on the Revised Local Reference datum.
// The datum sits roughly 7000 mm below mean sea level, so readings are positive.
struct StationSeries {
  int station_id = 0;
  std::string name;
  double latitude = std::numeric_limits<double>::quiet_NaN();
  double longitude = std::numeric_limits<double>::quiet_NaN();
  std::vector<RlrRecord> records;  // strictly increasing years

  std::size_t present_count() const;
  std::optional<double> value_at(int year) const;
};

struct RlrParseOptions {
  double missing_sentinel = -99999.0;
};

// Parses "year; value; flag; quality" lines. Blank lines are ignored.
// Throws ParseError (with line number) for malformed fields or non-positive
// readings, DataError for duplicate or decreasing years.
StationSeries parse_rlr_annual(std::string_view content, int station_id,
                               const RlrParseOptions& options = {});

// Inverse of parse_rlr_annual; absent readings are written as the sentinel.
std::string serialize_rlr_annual(const StationSeries& series,
                                 const RlrParseOptions& options = {});

struct StationInfo {
  int station_id = 0;
  double latitude = 0.0;
  double longitude = 0.0;
  std::string name;
};

// PSMSL station list: "id; lat; lon; name; coastline; station code; flag".
// Only the first four fields are used.
std::vector<StationInfo> parse_station_list(std::string_view content);

// Loads every "<id>.rlrdata" file in `directory`, ordered by station id.
// If `station_list` is non-empty, names and coordinates are attached.
std::vector<StationSeries> load_rlr_directory(const std::string& directory,
                                              const std::vector<StationInfo>& station_list = {},
                                              const RlrParseOptions& options = {});

struct StationRegionEntry {
  int station_id = 0;
  std::string region_code;
  std::string country_code;
};

struct StationRegionMap {
  std::vector<StationRegionEntry> entries;
};

// NUTS2 syntax: two-letter country prefix plus one or two alphanumerics.
bool is_nuts2_code(std::string_view code);

// CSV with header station_id,region_code,country_code.
StationRegionMap parse_station_map_csv(std::string_view content);

struct RegionGrouping {
  std::map<std::string, std::vector<StationSeries>> groups;  // region -> stations
  std::map<std::string, std::string> region_country;
  std::vector<int> unmapped;           // station ids with no mapping entry
  std::vector<std::string> warnings;   // e.g. entries naming unknown stations

  std::size_t station_count() const;
};

RegionGrouping map_stations_to_regions(const std::vector<StationSeries>& stations,
                                       const StationRegionMap& mapping);

struct EconObservation {
  int year = 0;
  double gdp = 0.0;         // millions of 2011 international dollars
  double population = 0.0;  // persons
};

struct RegionEconSeries {
  std::string region_code;
  std::string country_code;
  std::vector<EconObservation> observations;  // increasing years

  const EconObservation* find(int year) const;
};

// CSV with header region_code,country_code,year,gdp,population. Returns one
// series per region ordered by region code.
std::vector<RegionEconSeries> parse_econ_csv(std::string_view content);

struct GrowthStep {
  int year = 0;
  double gdp_growth = 0.0;  // fraction, e.g. 0.02
  double pop_growth = 0.0;
};

// CSV with header region_code,year,gdp_growth,pop_growth.
std::map<std::string, std::vector<GrowthStep>> parse_extension_csv(std::string_view content);

// Extends `base` forward by compounding growth rates from the year after its
// last observation. Base observations are copied unchanged.
RegionEconSeries splice_growth_extension(const RegionEconSeries& base,
                                         const std::vector<GrowthStep>& extension);

}  // namespace slrgdp
