#pragma once

// Decadal estimation panel: region sea level, log GDP per capita growth, lags,
// the adaptation penalty regressor, and fixed-effect / cluster labels.

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "slrgdp/rlr_ingest.hpp"

namespace slrgdp {

using AnnualSeries = std::map<int, double>;  // year -> sea level in mm (RLR)

// Per-region annual mean over all stations reporting that year.
std::map<std::string, AnnualSeries> build_region_sea_level(const RegionGrouping& grouping);

struct PanelRow {
  static constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

  std::string region_code;
  std::string country_code;
  int year = 0;
  double d_ln_gdppc = 0.0;  // ln GDPpc(t) - ln GDPpc(t-10)
  double ln_gdppc_lag = 0.0;
  double ln_slr = 0.0;
  double ln_slr_sq = 0.0;
  double ln_slr_lag = kMissing;  // NaN when sea(t-10) is unavailable
  double ln_slr_lag_sq = kMissing;
  double penalty = 0.0;  // (ln_slr - region mean ln_slr)^2
  std::string country_year;

  bool has_lag() const { return !std::isnan(ln_slr_lag); }
  // Numeric column by PanelRow field name; throws DataError for unknown names.
  double column(std::string_view name) const;
};

std::string make_country_year(std::string_view country, int year);

struct PanelDataset {
  std::vector<PanelRow> rows;  // sorted by (region_code, year)
  std::vector<std::string> region_index;        // sorted unique region codes
  std::vector<std::string> country_year_index;  // sorted unique country_year labels
  std::vector<int> decade_grid;
  std::vector<std::string> diagnostics;

  // Rebuilds the label dictionaries from rows.
  void reindex();
};

enum class SeaLevelMode {
  point_with_fallback,  // calendar-year value, else mean over +-radius years
  decade_mean,          // mean over [t-5, t+4]
};

struct PanelOptions {
  int grid_start = 1900;
  int grid_end = 2020;
  int grid_step = 10;
  SeaLevelMode sea_mode = SeaLevelMode::point_with_fallback;
  int fallback_radius = 2;
};

double sea_level_at(const AnnualSeries& series, int year, const PanelOptions& options, bool* found);

// GDP per capita in dollars: gdp is in millions.
inline double gdp_per_capita(const EconObservation& o) { return o.gdp * 1e6 / o.population; }

PanelDataset to_decadal_panel(const std::map<std::string, AnnualSeries>& sea,
                              const std::vector<RegionEconSeries>& econ,
                              const PanelOptions& options = {});

// Mean ln_slr over each region's rows.
std::map<std::string, double> compute_region_means(const PanelDataset& panel);

// Sets every row's penalty from compute_region_means.
void recompute_penalty(PanelDataset& panel);

std::string write_panel_csv(const PanelDataset& panel);
PanelDataset read_panel_csv(std::string_view content);

}  // namespace slrgdp
