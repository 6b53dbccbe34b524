#pragma once

// The six frozen regression specifications and the panel -> design mapping.
//
//   adaptation           ln_slr ln_slr_sq ln_gdppc_lag penalty     region + country_year FE
//   dynamic              ln_slr ln_slr_sq ln_slr_lag ln_slr_lag_sq ln_gdppc_lag
//                                                                  country_year FE
//   linear               ln_slr ln_gdppc_lag penalty               region + country_year FE
//   subsample_1980_2020  adaptation regressors, years 1980-2020    region + country_year FE
//   fes_1                adaptation regressors                     region FE
//   fes_2                adaptation regressors                     country_year FE
//
// Standard errors cluster on region and country_year.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slrgdp/fe_estimator.hpp"
#include "slrgdp/panel.hpp"

namespace slrgdp {

struct ModelSpec {
  std::string name;
  std::vector<std::string> regressors;
  std::vector<std::string> fe_groups;  // "region" and/or "country_year"
  std::optional<std::pair<int, int>> year_range;  // inclusive
  ClusterMode cluster_mode = ClusterMode::two_way;
};

const std::vector<std::string>& spec_names();

// Throws UsageError for an unknown name.
ModelSpec build_spec(std::string_view name);

// One line per spec: regressors, FE groups, sample, clustering.
std::string describe_spec(const ModelSpec& spec);

// Row indices of `panel` used by `spec`: within the year range and with every
// regressor present.
std::vector<std::size_t> select_rows(const ModelSpec& spec, const PanelDataset& panel);

DesignMatrix make_design(const ModelSpec& spec, const PanelDataset& panel,
                         const std::vector<std::size_t>& rows);

// Throws DataError when the selected sample is empty or smaller than
// K + G + 2 (G = non-redundant FE levels); estimator errors propagate.
FitResult fit_panel(const ModelSpec& spec, const PanelDataset& panel,
                    const AbsorptionOptions& absorption = {});

// Level/growth split of the dynamic model: the lag enters with -beta and the
// contemporaneous terms with beta + gamma.
struct DynamicDecomposition {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

DynamicDecomposition decompose_dynamic(const FitResult& fit);

}  // namespace slrgdp
