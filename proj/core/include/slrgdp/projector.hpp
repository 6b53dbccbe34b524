#pragma once

// Regional GDP-per-capita projections under SSP-RCP-Ice sea-level paths.
// The cumulative change at year Y is the long-term effect of moving from the
// region's base sea level to base + rise(Y); population only weights
// aggregates.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slrgdp/fe_estimator.hpp"
#include "slrgdp/panel.hpp"

namespace slrgdp {

enum class IceScenario { low, medium, high, high_end };

std::string_view to_string(IceScenario ice);
IceScenario parse_ice(std::string_view text);

struct ScenarioId {
  int ssp = 2;
  double rcp = 4.5;
  IceScenario ice = IceScenario::medium;

  auto operator<=>(const ScenarioId&) const = default;
  std::string label() const;  // e.g. "SSP5-RCP8.5-high_end"
};

struct ScenarioStep {
  int year = 0;
  double slr_mm_vs_base = 0.0;
  double population = 0.0;
};

struct ScenarioPath {
  ScenarioId scenario;
  std::string region_code;
  std::vector<ScenarioStep> steps;  // increasing years in [2025, 2100]
};

// CSV with header scenario,ssp,rcp,ice,region_code,year,slr_mm_vs_base,population.
// Paths are returned ordered by (scenario, region_code).
std::vector<ScenarioPath> parse_scenario_csv(std::string_view content);

inline constexpr int kBaseYear = 2020;
inline constexpr int kTerminalYear = 2100;

struct ProjectionPoint {
  int year = 0;
  double cumulative_change = 0.0;  // log points vs the base year
};

struct ScenarioProjection {
  ScenarioId scenario;
  std::string region_code;
  double base_rlr_mm = 0.0;
  std::vector<ProjectionPoint> path;  // starts with (kBaseYear, 0)
  std::optional<double> terminal_2100;
  double population_2100 = 0.0;
  std::vector<std::string> diagnostics;
};

ScenarioProjection project_region(double b1, double b2, const ScenarioPath& path, double base_rlr_mm);
// Uses the fit's ln_slr and ln_slr_sq coefficients.
ScenarioProjection project_region(const FitResult& fit, const ScenarioPath& path, double base_rlr_mm);

// Last observed regional sea level at or before `base_year`; regions without a
// gauge get the 7000 mm reference and a diagnostic.
std::map<std::string, double> base_sea_levels(const std::map<std::string, AnnualSeries>& sea,
                                              const std::vector<std::string>& regions,
                                              std::vector<std::string>* diagnostics,
                                              int base_year = kBaseYear);

struct ScenarioAggregate {
  ScenarioId scenario;
  std::size_t n_regions = 0;
  double mean_population_weighted = 0.0;  // weights: 2100 population
  double mean_uniform = 0.0;
  std::map<int, double> percentiles;  // 5, 25, 50, 75, 95 of terminal change
};

// Projections without a 2100 value are ignored. Throws DataError if none
// remain or if projections mix scenarios.
ScenarioAggregate aggregate_scenario(const std::vector<ScenarioProjection>& projections);

struct RankedRegion {
  std::string region_code;
  double terminal_2100 = 0.0;
};

struct RegionRanking {
  std::vector<RankedRegion> worst;  // most negative first
  std::vector<RankedRegion> best;   // most positive first
};

// Ties break on region code, ascending, in both lists.
RegionRanking rank_regions(const std::vector<ScenarioProjection>& projections, std::size_t k);

}  // namespace slrgdp
