#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slrgdp/model_specs.hpp"

namespace slrgdp {

struct RollingWindow {
  int start_year = 0;
  int end_year = 0;
  FitResult fit;
};

struct RollingResult {
  std::vector<RollingWindow> windows;  // ordered by end year
  std::vector<std::string> diagnostics;
};

// Fits `spec` on consecutive windows of `window_points` grid years, advancing
// `step` grid years at a time. Windows that cannot be estimated are skipped
// with a diagnostic. Throws UsageError if window_points < K + 2 or step < 1.
RollingResult rolling_fit(const ModelSpec& spec, const PanelDataset& panel, int window_points, int step,
                          const AbsorptionOptions& absorption = {});

// End year of the first window whose `coefficient` has |t| above `z`, or
// above that window's FitResult::critical_value() when `z` is not given.
std::optional<int> first_significant_end_year(const RollingResult& result, std::string_view coefficient,
                                              std::optional<double> z = std::nullopt);

}  // namespace slrgdp
