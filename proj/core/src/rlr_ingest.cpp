#include "slrgdp/rlr_ingest.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <regex>
#include <set>
#include <sstream>

#include "slrgdp/csv.hpp"
#include "slrgdp/error.hpp"

namespace slrgdp {

namespace fs = std::filesystem;

std::size_t StationSeries::present_count() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const RlrRecord& r) { return r.rlr_mm.has_value(); }));
}

std::optional<double> StationSeries::value_at(int year) const {
  auto it = std::lower_bound(records.begin(), records.end(), year,
                             [](const RlrRecord& r, int y) { return r.year < y; });
  if (it == records.end() || it->year != year) return std::nullopt;
  return it->rlr_mm;
}

StationSeries parse_rlr_annual(std::string_view content, int station_id,
                               const RlrParseOptions& options) {
  StationSeries series;
  series.station_id = station_id;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    const auto nl = content.find('\n', pos);
    const auto raw = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? content.size() : nl + 1;
    ++line_no;
    if (csv::trim(raw).empty()) continue;

    const auto fields = csv::split(raw, ';');
    if (fields.size() < 2) throw ParseError("expected at least 2 ';'-separated fields", line_no);

    RlrRecord rec;
    rec.year = static_cast<int>(csv::to_integer(fields[0], line_no, "year"));
    const double value = csv::to_double(fields[1], line_no, "RLR value");
    if (value == options.missing_sentinel) {
      rec.rlr_mm.reset();
    } else if (value <= 0.0) {
      throw ParseError("non-positive RLR value " + std::string(fields[1]), line_no);
    } else {
      rec.rlr_mm = value;
    }
    if (fields.size() > 2) rec.flag = fields[2];
    if (fields.size() > 3) rec.quality = fields[3];

    if (!series.records.empty() && rec.year <= series.records.back().year) {
      throw DataError("station " + std::to_string(station_id) + ": " +
                      (rec.year == series.records.back().year ? "duplicate" : "out-of-order") +
                      " year " + std::to_string(rec.year) + " at line " + std::to_string(line_no));
    }
    series.records.push_back(std::move(rec));
  }
  return series;
}

namespace {

std::string format_mm(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string serialize_rlr_annual(const StationSeries& series, const RlrParseOptions& options) {
  std::string out;
  for (const auto& r : series.records) {
    out += std::to_string(r.year);
    out += ";";
    out += r.rlr_mm ? format_mm(*r.rlr_mm) : format_mm(options.missing_sentinel);
    out += ";";
    out += r.flag;
    out += ";";
    out += r.quality;
    out += "\n";
  }
  return out;
}

std::vector<StationInfo> parse_station_list(std::string_view content) {
  std::vector<StationInfo> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    const auto nl = content.find('\n', pos);
    const auto raw = content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? content.size() : nl + 1;
    ++line_no;
    if (csv::trim(raw).empty()) continue;
    const auto f = csv::split(raw, ';');
    if (f.size() < 4) throw ParseError("station list needs id; lat; lon; name", line_no);
    StationInfo info;
    info.station_id = static_cast<int>(csv::to_integer(f[0], line_no, "station id"));
    info.latitude = csv::to_double(f[1], line_no, "latitude");
    info.longitude = csv::to_double(f[2], line_no, "longitude");
    info.name = f[3];
    out.push_back(std::move(info));
  }
  return out;
}

std::vector<StationSeries> load_rlr_directory(const std::string& directory,
                                              const std::vector<StationInfo>& station_list,
                                              const RlrParseOptions& options) {
  if (!fs::is_directory(directory)) throw DataError("not a directory: '" + directory + "'");
  std::vector<std::pair<int, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".rlrdata") continue;
    const auto stem = entry.path().stem().string();
    int id = 0;
    try {
      id = static_cast<int>(csv::to_integer(stem, 0, "station id"));
    } catch (const ParseError&) {
      throw DataError("RLR file name is not a station id: '" + entry.path().string() + "'");
    }
    files.emplace_back(id, entry.path());
  }
  std::sort(files.begin(), files.end());

  std::map<int, const StationInfo*> info;
  for (const auto& s : station_list) info[s.station_id] = &s;

  std::vector<StationSeries> out;
  out.reserve(files.size());
  for (const auto& [id, path] : files) {
    StationSeries s;
    try {
      s = parse_rlr_annual(csv::read_file(path.string()), id, options);
    } catch (const ParseError& e) {
      throw ParseError(path.filename().string() + ": " + e.what());
    }
    if (auto it = info.find(id); it != info.end()) {
      s.name = it->second->name;
      s.latitude = it->second->latitude;
      s.longitude = it->second->longitude;
    }
    out.push_back(std::move(s));
  }
  return out;
}

bool is_nuts2_code(std::string_view code) {
  static const std::regex pattern("^[A-Z]{2}[A-Z0-9]{1,2}$");
  return std::regex_match(code.begin(), code.end(), pattern);
}

StationRegionMap parse_station_map_csv(std::string_view content) {
  const auto table = csv::Table::parse(content);
  table.require({"station_id", "region_code", "country_code"});
  StationRegionMap map;
  std::set<int> seen;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto line = table.line_of(i);
    StationRegionEntry e;
    e.station_id = static_cast<int>(csv::to_integer(table.at(i, "station_id"), line, "station_id"));
    e.region_code = table.at(i, "region_code");
    e.country_code = table.at(i, "country_code");
    if (!is_nuts2_code(e.region_code)) {
      throw ParseError("not a NUTS2 code: '" + e.region_code + "'", line);
    }
    if (e.country_code.empty()) throw ParseError("empty country_code", line);
    if (!seen.insert(e.station_id).second) {
      throw DataError("station " + std::to_string(e.station_id) + " mapped more than once");
    }
    map.entries.push_back(std::move(e));
  }
  return map;
}

std::size_t RegionGrouping::station_count() const {
  std::size_t n = 0;
  for (const auto& [region, stations] : groups) n += stations.size();
  return n;
}

RegionGrouping map_stations_to_regions(const std::vector<StationSeries>& stations,
                                       const StationRegionMap& mapping) {
  RegionGrouping result;
  std::map<int, const StationRegionEntry*> by_station;
  for (const auto& e : mapping.entries) by_station[e.station_id] = &e;

  std::set<int> known;
  for (const auto& s : stations) {
    known.insert(s.station_id);
    const auto it = by_station.find(s.station_id);
    if (it == by_station.end()) {
      result.unmapped.push_back(s.station_id);
      continue;
    }
    const auto& entry = *it->second;
    result.groups[entry.region_code].push_back(s);
    auto [country, inserted] = result.region_country.emplace(entry.region_code, entry.country_code);
    if (!inserted && country->second != entry.country_code) {
      result.warnings.push_back("region " + entry.region_code + " assigned to countries " +
                                country->second + " and " + entry.country_code);
    }
  }
  for (const auto& e : mapping.entries) {
    if (!known.count(e.station_id)) {
      result.warnings.push_back("mapping entry for unknown station " + std::to_string(e.station_id));
    }
  }
  for (auto& [region, group] : result.groups) {
    std::sort(group.begin(), group.end(),
              [](const StationSeries& a, const StationSeries& b) { return a.station_id < b.station_id; });
  }
  return result;
}

const EconObservation* RegionEconSeries::find(int year) const {
  auto it = std::lower_bound(observations.begin(), observations.end(), year,
                             [](const EconObservation& o, int y) { return o.year < y; });
  return it != observations.end() && it->year == year ? &*it : nullptr;
}

std::vector<RegionEconSeries> parse_econ_csv(std::string_view content) {
  const auto table = csv::Table::parse(content);
  table.require({"region_code", "country_code", "year", "gdp", "population"});
  std::map<std::string, RegionEconSeries> by_region;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto line = table.line_of(i);
    const auto& region = table.at(i, "region_code");
    auto& series = by_region[region];
    if (series.region_code.empty()) {
      series.region_code = region;
      series.country_code = table.at(i, "country_code");
    } else if (series.country_code != table.at(i, "country_code")) {
      throw ParseError("region " + region + " changes country", line);
    }
    EconObservation obs;
    obs.year = static_cast<int>(csv::to_integer(table.at(i, "year"), line, "year"));
    obs.gdp = csv::to_double(table.at(i, "gdp"), line, "gdp");
    obs.population = csv::to_double(table.at(i, "population"), line, "population");
    if (!series.observations.empty() && obs.year <= series.observations.back().year) {
      throw ParseError("years for region " + region + " must increase", line);
    }
    series.observations.push_back(obs);
  }
  std::vector<RegionEconSeries> out;
  out.reserve(by_region.size());
  for (auto& [region, series] : by_region) out.push_back(std::move(series));
  return out;
}

std::map<std::string, std::vector<GrowthStep>> parse_extension_csv(std::string_view content) {
  const auto table = csv::Table::parse(content);
  table.require({"region_code", "year", "gdp_growth", "pop_growth"});
  std::map<std::string, std::vector<GrowthStep>> out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto line = table.line_of(i);
    GrowthStep step;
    step.year = static_cast<int>(csv::to_integer(table.at(i, "year"), line, "year"));
    step.gdp_growth = csv::to_double(table.at(i, "gdp_growth"), line, "gdp_growth");
    step.pop_growth = csv::to_double(table.at(i, "pop_growth"), line, "pop_growth");
    out[table.at(i, "region_code")].push_back(step);
  }
  return out;
}

RegionEconSeries splice_growth_extension(const RegionEconSeries& base,
                                         const std::vector<GrowthStep>& extension) {
  if (base.observations.empty()) throw DataError("region " + base.region_code + ": empty base series");
  RegionEconSeries out = base;
  int expected = base.observations.back().year + 1;
  for (const auto& step : extension) {
    if (step.year != expected) {
      throw DataError("region " + base.region_code + ": extension year " + std::to_string(step.year) +
                      " does not follow " + std::to_string(expected - 1));
    }
    if (step.gdp_growth <= -1.0 || step.pop_growth <= -1.0) {
      throw DataError("region " + base.region_code + ": growth rate <= -1 in " +
                      std::to_string(step.year));
    }
    const auto& prev = out.observations.back();
    out.observations.push_back(
        {step.year, prev.gdp * (1.0 + step.gdp_growth), prev.population * (1.0 + step.pop_growth)});
    ++expected;
  }
  return out;
}

}  // namespace slrgdp
