#include "slrgdp/panel.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "slrgdp/csv.hpp"
#include "slrgdp/error.hpp"

namespace slrgdp {

std::map<std::string, AnnualSeries> build_region_sea_level(const RegionGrouping& grouping) {
  std::map<std::string, AnnualSeries> out;
  for (const auto& [region, stations] : grouping.groups) {
    std::map<int, std::pair<double, int>> acc;
    for (const auto& s : stations) {
      for (const auto& r : s.records) {
        if (!r.rlr_mm) continue;
        auto& [sum, n] = acc[r.year];
        sum += *r.rlr_mm;
        ++n;
      }
    }
    auto& series = out[region];
    for (const auto& [year, sn] : acc) series[year] = sn.first / sn.second;
  }
  return out;
}

double PanelRow::column(std::string_view name) const {
  if (name == "d_ln_gdppc") return d_ln_gdppc;
  if (name == "ln_gdppc_lag") return ln_gdppc_lag;
  if (name == "ln_slr") return ln_slr;
  if (name == "ln_slr_sq") return ln_slr_sq;
  if (name == "ln_slr_lag") return ln_slr_lag;
  if (name == "ln_slr_lag_sq") return ln_slr_lag_sq;
  if (name == "penalty") return penalty;
  throw DataError("unknown panel column '" + std::string(name) + "'");
}

std::string make_country_year(std::string_view country, int year) {
  return std::string(country) + ":" + std::to_string(year);
}

void PanelDataset::reindex() {
  std::set<std::string> regions, cys;
  for (const auto& r : rows) {
    regions.insert(r.region_code);
    cys.insert(r.country_year);
  }
  region_index.assign(regions.begin(), regions.end());
  country_year_index.assign(cys.begin(), cys.end());
}

double sea_level_at(const AnnualSeries& series, int year, const PanelOptions& options, bool* found) {
  auto window_mean = [&](int lo, int hi) {
    double sum = 0.0;
    int n = 0;
    for (auto it = series.lower_bound(lo); it != series.end() && it->first <= hi; ++it) {
      sum += it->second;
      ++n;
    }
    *found = n > 0;
    return n > 0 ? sum / n : 0.0;
  };
  if (options.sea_mode == SeaLevelMode::decade_mean) {
    return window_mean(year - options.grid_step / 2, year + (options.grid_step - 1) / 2);
  }
  if (auto it = series.find(year); it != series.end()) {
    *found = true;
    return it->second;
  }
  return window_mean(year - options.fallback_radius, year + options.fallback_radius);
}

PanelDataset to_decadal_panel(const std::map<std::string, AnnualSeries>& sea,
                              const std::vector<RegionEconSeries>& econ,
                              const PanelOptions& options) {
  if (options.grid_step <= 0 || options.grid_end < options.grid_start) {
    throw DataError("invalid decade grid");
  }
  PanelDataset panel;
  for (int y = options.grid_start; y <= options.grid_end; y += options.grid_step) {
    panel.decade_grid.push_back(y);
  }

  for (const auto& region : econ) {
    const auto sea_it = sea.find(region.region_code);
    if (sea_it == sea.end()) {
      panel.diagnostics.push_back("region " + region.region_code + ": no tide gauge, excluded");
      continue;
    }
    const auto& sea_series = sea_it->second;
    for (std::size_t g = 1; g < panel.decade_grid.size(); ++g) {
      const int t = panel.decade_grid[g];
      const int lag = panel.decade_grid[g - 1];
      const auto* now = region.find(t);
      const auto* before = region.find(lag);
      if (!now || !before) continue;
      bool have_sea = false;
      const double s = sea_level_at(sea_series, t, options, &have_sea);
      if (!have_sea) continue;
      if (now->gdp <= 0 || now->population <= 0 || before->gdp <= 0 || before->population <= 0) {
        panel.diagnostics.push_back("region " + region.region_code + " year " + std::to_string(t) +
                                    ": non-positive GDP or population, row rejected");
        continue;
      }
      PanelRow row;
      row.region_code = region.region_code;
      row.country_code = region.country_code;
      row.year = t;
      row.ln_gdppc_lag = std::log(gdp_per_capita(*before));
      row.d_ln_gdppc = std::log(gdp_per_capita(*now)) - row.ln_gdppc_lag;
      row.ln_slr = std::log(s);
      row.ln_slr_sq = row.ln_slr * row.ln_slr;
      bool have_lag = false;
      const double s_lag = sea_level_at(sea_series, lag, options, &have_lag);
      if (have_lag) {
        row.ln_slr_lag = std::log(s_lag);
        row.ln_slr_lag_sq = row.ln_slr_lag * row.ln_slr_lag;
      }
      row.country_year = make_country_year(row.country_code, t);
      panel.rows.push_back(std::move(row));
    }
  }
  std::sort(panel.rows.begin(), panel.rows.end(), [](const PanelRow& a, const PanelRow& b) {
    return std::tie(a.region_code, a.year) < std::tie(b.region_code, b.year);
  });
  recompute_penalty(panel);
  panel.reindex();
  return panel;
}

std::map<std::string, double> compute_region_means(const PanelDataset& panel) {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& r : panel.rows) {
    auto& [sum, n] = acc[r.region_code];
    sum += r.ln_slr;
    ++n;
  }
  std::map<std::string, double> out;
  for (const auto& [region, sn] : acc) out[region] = sn.first / sn.second;
  return out;
}

void recompute_penalty(PanelDataset& panel) {
  const auto means = compute_region_means(panel);
  for (auto& r : panel.rows) {
    const double dev = r.ln_slr - means.at(r.region_code);
    r.penalty = dev * dev;
  }
}

namespace {

const char* kPanelHeader =
    "region_code,country_code,year,d_ln_gdppc,ln_gdppc_lag,ln_slr,ln_slr_sq,ln_slr_lag,"
    "ln_slr_lag_sq,penalty,country_year";

std::string fmt17(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string write_panel_csv(const PanelDataset& panel) {
  std::string out = kPanelHeader;
  out += "\n";
  for (const auto& r : panel.rows) {
    out += r.region_code + "," + r.country_code + "," + std::to_string(r.year) + "," +
           fmt17(r.d_ln_gdppc) + "," + fmt17(r.ln_gdppc_lag) + "," + fmt17(r.ln_slr) + "," +
           fmt17(r.ln_slr_sq) + "," + fmt17(r.ln_slr_lag) + "," + fmt17(r.ln_slr_lag_sq) + "," +
           fmt17(r.penalty) + "," + r.country_year + "\n";
  }
  return out;
}

PanelDataset read_panel_csv(std::string_view content) {
  const auto table = csv::Table::parse(content);
  table.require(csv::split(kPanelHeader));
  PanelDataset panel;
  std::set<int> years;
  std::set<std::pair<std::string, int>> keys;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto line = table.line_of(i);
    auto num = [&](const char* col) { return csv::to_double(table.at(i, col), line, col); };
    auto opt = [&](const char* col) {
      const auto& f = table.at(i, col);
      return f.empty() ? PanelRow::kMissing : csv::to_double(f, line, col);
    };
    PanelRow r;
    r.region_code = table.at(i, "region_code");
    r.country_code = table.at(i, "country_code");
    r.year = static_cast<int>(csv::to_integer(table.at(i, "year"), line, "year"));
    r.d_ln_gdppc = num("d_ln_gdppc");
    r.ln_gdppc_lag = num("ln_gdppc_lag");
    r.ln_slr = num("ln_slr");
    r.ln_slr_sq = num("ln_slr_sq");
    r.ln_slr_lag = opt("ln_slr_lag");
    r.ln_slr_lag_sq = opt("ln_slr_lag_sq");
    r.penalty = num("penalty");
    r.country_year = table.at(i, "country_year");
    if (r.penalty < 0) throw ParseError("negative penalty", line);
    if (!keys.emplace(r.region_code, r.year).second) {
      throw DataError("duplicate panel row " + r.region_code + " " + std::to_string(r.year));
    }
    years.insert(r.year);
    panel.rows.push_back(std::move(r));
  }
  std::sort(panel.rows.begin(), panel.rows.end(), [](const PanelRow& a, const PanelRow& b) {
    return std::tie(a.region_code, a.year) < std::tie(b.region_code, b.year);
  });
  panel.decade_grid.assign(years.begin(), years.end());
  panel.reindex();
  return panel;
}

}  // namespace slrgdp
