#pragma once

// Text outputs: JSON carries full-precision numbers, display CSVs carry
// percentages rounded to 0.1. Every document starts with a provenance block.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slrgdp/effects.hpp"
#include "slrgdp/fe_estimator.hpp"
#include "slrgdp/projector.hpp"
#include "slrgdp/rolling.hpp"

namespace slrgdp {

struct Provenance {
  std::string command;
  std::string spec;  // model spec or "" when not applicable
  std::string version = SLRGDP_VERSION;
  std::vector<std::pair<std::string, std::string>> inputs;  // (name, sha256 hex), caller order
  std::vector<std::pair<std::string, std::string>> settings;

  // "# key: value" lines, one per field.
  std::string csv_header() const;
};

std::string fit_to_json(const FitResult& fit, const Provenance& prov);
// Reads the document written by fit_to_json. Throws ParseError on malformed input.
FitResult fit_from_json(std::string_view text);

// Regression table: one column per fit, estimate and (se) rows per regressor,
// then constant, FE flags, observations and R-squared.
std::string fit_table_csv(const std::vector<FitResult>& fits, const Provenance& prov);

std::string effect_curve_csv(const EffectCurve& curve, const Provenance& prov);
std::string effect_curve_json(const EffectCurve& curve, std::optional<double> threshold_mm, const Provenance& prov);
std::string point_table_csv(const std::vector<PointEstimateRow>& rows, const Provenance& prov);

std::string rolling_csv(const RollingResult& result, std::string_view coefficient, const Provenance& prov);

std::string projections_csv(const std::vector<ScenarioProjection>& projections, const Provenance& prov);
std::string projections_json(const std::vector<ScenarioProjection>& projections, const Provenance& prov);
// Side-by-side worst and best lists as in the paper's ranking table.
std::string ranking_csv(const ScenarioId& scenario, const RegionRanking& ranking, const Provenance& prov);
std::string aggregates_json(const std::vector<ScenarioAggregate>& aggregates, const Provenance& prov);

// Injected coefficients: "spec.name = value", "spec.se.name = value" and
// "spec.cov.a.b = value" lines ('#' comments allowed). Unspecified variances
// and covariances are zero. Regressor order follows build_spec. Throws ParseError/UsageError.
std::map<std::string, FitResult> parse_injected_coefficients(std::string_view text);

}  // namespace slrgdp
