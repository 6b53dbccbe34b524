#include "slrgdp/rolling.hpp"

#include <cmath>
#include <set>

#include "slrgdp/error.hpp"

namespace slrgdp {

RollingResult rolling_fit(const ModelSpec& spec, const PanelDataset& panel, int window_points, int step,
                          const AbsorptionOptions& absorption) {
  if (step < 1) throw UsageError("rolling step must be >= 1");
  if (window_points < static_cast<int>(spec.regressors.size()) + 2) {
    throw UsageError("rolling window of " + std::to_string(window_points) + " points is below K+2 = " +
                     std::to_string(spec.regressors.size() + 2));
  }
  std::set<int> year_set;
  for (const auto& r : panel.rows) year_set.insert(r.year);
  const std::vector<int> years(year_set.begin(), year_set.end());

  RollingResult result;
  if (window_points > static_cast<int>(years.size())) {
    result.diagnostics.push_back("window of " + std::to_string(window_points) + " points exceeds the " +
                                 std::to_string(years.size()) + " grid years in the panel");
    return result;
  }
  for (std::size_t s = 0; s + static_cast<std::size_t>(window_points) <= years.size(); s += step) {
    ModelSpec windowed = spec;
    int lo = years[s];
    int hi = years[s + window_points - 1];
    if (spec.year_range) {
      lo = std::max(lo, spec.year_range->first);
      hi = std::min(hi, spec.year_range->second);
    }
    windowed.year_range = std::make_pair(lo, hi);
    try {
      result.windows.push_back({years[s], years[s + window_points - 1], fit_panel(windowed, panel, absorption)});
      result.windows.back().fit.spec_name = spec.name;
    } catch (const Error& e) {
      result.diagnostics.push_back("window " + std::to_string(years[s]) + "-" +
                                   std::to_string(years[s + window_points - 1]) + " skipped: " + e.what());
    }
  }
  return result;
}

std::optional<int> first_significant_end_year(const RollingResult& result, std::string_view coefficient,
                                              std::optional<double> z) {
  for (const auto& w : result.windows) {
    if (!w.fit.has(coefficient)) continue;
    const double se = w.fit.se(coefficient);
    const double crit = z ? *z : w.fit.critical_value();
    if (se > 0 && std::abs(w.fit.coef(coefficient)) > crit * se) return w.end_year;
  }
  return std::nullopt;
}

}  // namespace slrgdp
