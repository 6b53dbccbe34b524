#include "slrgdp/model_specs.hpp"

#include <cmath>
#include <set>

#include "slrgdp/error.hpp"

namespace slrgdp {

namespace {

const std::vector<std::string> kAdaptation = {"ln_slr", "ln_slr_sq", "ln_gdppc_lag", "penalty"};

}  // namespace

const std::vector<std::string>& spec_names() {
  static const std::vector<std::string> names = {"adaptation", "dynamic", "linear",
                                                 "subsample_1980_2020", "fes_1", "fes_2"};
  return names;
}

ModelSpec build_spec(std::string_view name) {
  ModelSpec s;
  s.name = std::string(name);
  if (name == "adaptation") {
    s.regressors = kAdaptation;
    s.fe_groups = {"region", "country_year"};
  } else if (name == "dynamic") {
    s.regressors = {"ln_slr", "ln_slr_sq", "ln_slr_lag", "ln_slr_lag_sq", "ln_gdppc_lag"};
    s.fe_groups = {"country_year"};
  } else if (name == "linear") {
    s.regressors = {"ln_slr", "ln_gdppc_lag", "penalty"};
    s.fe_groups = {"region", "country_year"};
  } else if (name == "subsample_1980_2020") {
    s.regressors = kAdaptation;
    s.fe_groups = {"region", "country_year"};
    s.year_range = std::make_pair(1980, 2020);
  } else if (name == "fes_1") {
    s.regressors = kAdaptation;
    s.fe_groups = {"region"};
  } else if (name == "fes_2") {
    s.regressors = kAdaptation;
    s.fe_groups = {"country_year"};
  } else {
    throw UsageError("unknown model specification '" + std::string(name) + "'");
  }
  return s;
}

std::string describe_spec(const ModelSpec& spec) {
  std::string out = spec.name + ": regressors=";
  for (std::size_t i = 0; i < spec.regressors.size(); ++i) out += (i ? "," : "") + spec.regressors[i];
  out += " fe=";
  for (std::size_t i = 0; i < spec.fe_groups.size(); ++i) out += (i ? "," : "") + spec.fe_groups[i];
  out += " sample=";
  out += spec.year_range ? std::to_string(spec.year_range->first) + "-" + std::to_string(spec.year_range->second)
                         : std::string("all");
  out += " cluster=";
  out += to_string(spec.cluster_mode);
  return out;
}

std::vector<std::size_t> select_rows(const ModelSpec& spec, const PanelDataset& panel) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < panel.rows.size(); ++i) {
    const auto& r = panel.rows[i];
    if (spec.year_range && (r.year < spec.year_range->first || r.year > spec.year_range->second)) continue;
    bool complete = true;
    for (const auto& c : spec.regressors) complete = complete && std::isfinite(r.column(c));
    if (complete) rows.push_back(i);
  }
  return rows;
}

namespace {

Factor factor_for(const std::string& group, const PanelDataset& panel, const std::vector<std::size_t>& rows) {
  std::vector<std::string> labels;
  labels.reserve(rows.size());
  for (auto i : rows) {
    if (group == "region") {
      labels.push_back(panel.rows[i].region_code);
    } else if (group == "country_year") {
      labels.push_back(panel.rows[i].country_year);
    } else {
      throw DataError("unknown FE group '" + group + "'");
    }
  }
  return Factor::from_labels(group, labels);
}

}  // namespace

DesignMatrix make_design(const ModelSpec& spec, const PanelDataset& panel,
                         const std::vector<std::size_t>& rows) {
  DesignMatrix dm;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto k = static_cast<Eigen::Index>(spec.regressors.size());
  dm.names = spec.regressors;
  dm.x.resize(n, k);
  dm.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = panel.rows[rows[i]];
    dm.y(i) = r.d_ln_gdppc;
    for (Eigen::Index j = 0; j < k; ++j) dm.x(i, j) = r.column(spec.regressors[j]);
  }
  for (const auto& g : spec.fe_groups) dm.fe_groups.push_back(factor_for(g, panel, rows));
  dm.clusters = {factor_for("region", panel, rows), factor_for("country_year", panel, rows)};
  return dm;
}

FitResult fit_panel(const ModelSpec& spec, const PanelDataset& panel, const AbsorptionOptions& absorption) {
  const auto rows = select_rows(spec, panel);
  if (rows.empty()) throw DataError("specification '" + spec.name + "': empty estimation sample");
  const auto dm = make_design(spec, panel, rows);

  std::size_t fe_levels = 0;
  for (const auto& g : dm.fe_groups) fe_levels += static_cast<std::size_t>(g.levels);
  fe_levels -= dm.fe_groups.size() - 1;
  const std::size_t needed = spec.regressors.size() + fe_levels + 2;
  if (rows.size() < needed) {
    throw DataError("specification '" + spec.name + "': " + std::to_string(rows.size()) +
                    " rows, need at least " + std::to_string(needed));
  }

  FitOptions options;
  options.absorption = absorption;
  options.cluster_mode = spec.cluster_mode;
  try {
    return fit_design(dm, options, spec.name);
  } catch (const NumericalError& e) {
    throw NumericalError("specification '" + spec.name + "': " + e.what(), e.last_residual());
  }
}

DynamicDecomposition decompose_dynamic(const FitResult& fit) {
  DynamicDecomposition d;
  d.beta1 = -fit.coef("ln_slr_lag");
  d.beta2 = -fit.coef("ln_slr_lag_sq");
  d.gamma1 = fit.coef("ln_slr") + fit.coef("ln_slr_lag");
  d.gamma2 = fit.coef("ln_slr_sq") + fit.coef("ln_slr_lag_sq");
  return d;
}

}  // namespace slrgdp
