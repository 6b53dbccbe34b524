#include "slrgdp/projector.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "slrgdp/csv.hpp"
#include "slrgdp/effects.hpp"
#include "slrgdp/error.hpp"

namespace slrgdp {

std::string_view to_string(IceScenario ice) {
  switch (ice) {
    case IceScenario::low: return "low";
    case IceScenario::medium: return "medium";
    case IceScenario::high: return "high";
    case IceScenario::high_end: return "high_end";
  }
  return "?";
}

IceScenario parse_ice(std::string_view text) {
  if (text == "low") return IceScenario::low;
  if (text == "medium") return IceScenario::medium;
  if (text == "high") return IceScenario::high;
  if (text == "high_end" || text == "high-end") return IceScenario::high_end;
  throw ParseError("unknown ice scenario '" + std::string(text) + "'");
}

std::string ScenarioId::label() const {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << "SSP" << ssp << "-RCP" << rcp << "-" << to_string(ice);
  return os.str();
}

std::vector<ScenarioPath> parse_scenario_csv(std::string_view content) {
  const auto table = csv::Table::parse(content);
  table.require({"scenario", "ssp", "rcp", "ice", "region_code", "year", "slr_mm_vs_base", "population"});
  std::map<std::pair<ScenarioId, std::string>, ScenarioPath> paths;
  std::map<ScenarioId, std::string> labels;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto line = table.line_of(i);
    ScenarioId id;
    id.ssp = static_cast<int>(csv::to_integer(table.at(i, "ssp"), line, "ssp"));
    id.rcp = csv::to_double(table.at(i, "rcp"), line, "rcp");
    id.ice = parse_ice(table.at(i, "ice"));
    if (id.ssp != 1 && id.ssp != 2 && id.ssp != 5) throw ParseError("ssp must be 1, 2 or 5", line);
    if (id.rcp != 2.6 && id.rcp != 4.5 && id.rcp != 8.5) throw ParseError("rcp must be 2.6, 4.5 or 8.5", line);
    const auto& label = table.at(i, "scenario");
    if (auto [it, inserted] = labels.emplace(id, label); !inserted && it->second != label) {
      throw ParseError("scenario label '" + label + "' conflicts with '" + it->second + "'", line);
    }

    ScenarioStep step;
    step.year = static_cast<int>(csv::to_integer(table.at(i, "year"), line, "year"));
    step.slr_mm_vs_base = csv::to_double(table.at(i, "slr_mm_vs_base"), line, "slr_mm_vs_base");
    step.population = csv::to_double(table.at(i, "population"), line, "population");
    if (step.year < 2025 || step.year > kTerminalYear) throw ParseError("year outside 2025-2100", line);
    if (!(step.population > 0)) throw ParseError("population must be positive", line);

    auto& path = paths[{id, table.at(i, "region_code")}];
    path.scenario = id;
    path.region_code = table.at(i, "region_code");
    if (!path.steps.empty() && step.year <= path.steps.back().year) {
      throw ParseError("years must increase within a scenario/region path", line);
    }
    path.steps.push_back(step);
  }
  std::vector<ScenarioPath> out;
  out.reserve(paths.size());
  for (auto& [key, path] : paths) out.push_back(std::move(path));
  return out;
}

ScenarioProjection project_region(double b1, double b2, const ScenarioPath& path, double base_rlr_mm) {
  if (!(base_rlr_mm > 0)) throw DataError("region " + path.region_code + ": base sea level must be positive");
  ScenarioProjection p;
  p.scenario = path.scenario;
  p.region_code = path.region_code;
  p.base_rlr_mm = base_rlr_mm;
  p.path.push_back({kBaseYear, 0.0});
  for (const auto& step : path.steps) {
    const double level = base_rlr_mm + step.slr_mm_vs_base;
    if (!(level > 0)) {
      throw DataError("region " + path.region_code + ": projected sea level is non-positive in " +
                      std::to_string(step.year));
    }
    const double change = long_term_effect(b1, b2, level, base_rlr_mm);
    p.path.push_back({step.year, change});
    if (step.year == kTerminalYear) {
      p.terminal_2100 = change;
      p.population_2100 = step.population;
    }
  }
  if (!p.terminal_2100) {
    p.diagnostics.push_back("region " + path.region_code + " (" + path.scenario.label() +
                            "): path has no 2100 step, terminal value omitted");
  }
  return p;
}

ScenarioProjection project_region(const FitResult& fit, const ScenarioPath& path, double base_rlr_mm) {
  return project_region(fit.coef("ln_slr"), fit.coef("ln_slr_sq"), path, base_rlr_mm);
}

std::map<std::string, double> base_sea_levels(const std::map<std::string, AnnualSeries>& sea,
                                              const std::vector<std::string>& regions,
                                              std::vector<std::string>* diagnostics, int base_year) {
  std::map<std::string, double> out;
  for (const auto& region : regions) {
    const auto it = sea.find(region);
    const AnnualSeries* series = it == sea.end() ? nullptr : &it->second;
    if (series) {
      auto up = series->upper_bound(base_year);
      if (up != series->begin()) {
        out[region] = std::prev(up)->second;
        continue;
      }
    }
    out[region] = kReferenceMm;
    if (diagnostics) {
      diagnostics->push_back("region " + region + ": no gauge reading up to " + std::to_string(base_year) +
                             ", base sea level set to 7000 mm");
    }
  }
  return out;
}

namespace {

double percentile(std::vector<double> sorted_values, double p) {
  // Linear interpolation between order statistics (R type 7).
  const double h = (static_cast<double>(sorted_values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted_values.size() - 1);
  return sorted_values[lo] + (h - static_cast<double>(lo)) * (sorted_values[hi] - sorted_values[lo]);
}

}  // namespace

ScenarioAggregate aggregate_scenario(const std::vector<ScenarioProjection>& projections) {
  ScenarioAggregate agg;
  std::vector<double> values;
  double weighted = 0.0, weight = 0.0, plain = 0.0;
  bool first = true;
  for (const auto& p : projections) {
    if (first) {
      agg.scenario = p.scenario;
      first = false;
    } else if (p.scenario != agg.scenario) {
      throw DataError("aggregate_scenario: projections mix scenarios");
    }
    if (!p.terminal_2100) continue;
    values.push_back(*p.terminal_2100);
    plain += *p.terminal_2100;
    weighted += p.population_2100 * *p.terminal_2100;
    weight += p.population_2100;
  }
  if (values.empty()) throw DataError("aggregate_scenario: no projection reaches 2100");
  agg.n_regions = values.size();
  agg.mean_uniform = plain / static_cast<double>(values.size());
  agg.mean_population_weighted = weighted / weight;
  std::sort(values.begin(), values.end());
  for (int q : {5, 25, 50, 75, 95}) agg.percentiles[q] = percentile(values, q / 100.0);
  return agg;
}

RegionRanking rank_regions(const std::vector<ScenarioProjection>& projections, std::size_t k) {
  std::vector<RankedRegion> all;
  for (const auto& p : projections) {
    if (p.terminal_2100) all.push_back({p.region_code, *p.terminal_2100});
  }
  if (k > all.size()) throw DataError("rank_regions: k exceeds the number of regions");
  RegionRanking r;
  auto worst = all;
  std::sort(worst.begin(), worst.end(), [](const RankedRegion& a, const RankedRegion& b) {
    return a.terminal_2100 != b.terminal_2100 ? a.terminal_2100 < b.terminal_2100 : a.region_code < b.region_code;
  });
  auto best = all;
  std::sort(best.begin(), best.end(), [](const RankedRegion& a, const RankedRegion& b) {
    return a.terminal_2100 != b.terminal_2100 ? a.terminal_2100 > b.terminal_2100 : a.region_code < b.region_code;
  });
  r.worst.assign(worst.begin(), worst.begin() + static_cast<std::ptrdiff_t>(k));
  r.best.assign(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(k));
  return r;
}

}  // namespace slrgdp
