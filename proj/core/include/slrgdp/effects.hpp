#pragma once

// Economic quantities derived from fitted coefficients. Every effect is a
// log-point change in GDP per capita relative to a reference sea level
// (7000 mm on the RLR datum by default), so it is exactly zero there.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "slrgdp/fe_estimator.hpp"

namespace slrgdp {

inline constexpr double kReferenceMm = 7000.0;
// Largest rise observed in the estimation data; beyond reference + this the
// curves are extrapolations.
inline constexpr double kMaxInSampleRiseMm = 397.0;

// b1 (ln s - ln ref) + b2 ((ln s)^2 - (ln ref)^2). Throws DataError for
// non-positive sea levels.
double long_term_effect(double b1, double b2, double s_mm, double ref_mm);

// Long-term effect plus the penalty b3 (ln s - m)^2 measured against the same
// reference, m being the region mean of ln sea level.
double short_term_effect(double b1, double b2, double b3, double s_mm, double ref_mm, double region_mean_ln_slr);

// short_term - long_term = b3 [(ln s - m)^2 - (ln ref - m)^2].
double adaptation_gap(double b3, double s_mm, double ref_mm, double region_mean_ln_slr);

// Cumulative log-point effect spread evenly over `years`.
double annualized_growth_impact(double cumulative_effect, double years);

// ln_slr, ln_slr_sq, penalty coefficients and their covariance block.
struct AdaptationCoefficients {
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  Eigen::Matrix3d vcov = Eigen::Matrix3d::Zero();

  // Throws DataError if the fit lacks ln_slr, ln_slr_sq or penalty.
  static AdaptationCoefficients from_fit(const FitResult& fit);
};

struct Band {
  double effect = 0.0;
  double sd = 0.0;
  double low = 0.0;
  double high = 0.0;
};

Band long_term_band(const AdaptationCoefficients& c, double s_mm, double ref_mm, double z = 1.959963984540054);
Band short_term_band(const AdaptationCoefficients& c, double s_mm, double ref_mm, double region_mean_ln_slr,
                     double z = 1.959963984540054);

struct CurveOptions {
  double reference_mm = kReferenceMm;
  std::optional<double> region_mean_ln_slr;  // defaults to ln(reference_mm)
  double max_in_sample_rise_mm = kMaxInSampleRiseMm;
  double z = 1.959963984540054;
};

struct EffectCurve {
  std::vector<double> grid;  // strictly increasing, mm
  std::vector<double> lt_effect, st_effect, gap;
  std::vector<double> lt_ci_low, lt_ci_high, st_ci_low, st_ci_high;
  std::vector<bool> extrapolated;
  double reference_mm = kReferenceMm;
  double region_mean_ln_slr = 0.0;
  double extrapolation_boundary_mm = 0.0;
  double z = 1.959963984540054;
  AdaptationCoefficients model;
};

// Throws DataError for an empty or non-increasing grid.
EffectCurve effect_curve(const AdaptationCoefficients& coefficients, const std::vector<double>& grid,
                         const CurveOptions& options = {});
EffectCurve effect_curve(const FitResult& fit, const std::vector<double>& grid, const CurveOptions& options = {});

// Smallest sea level above the reference at which the upper long-term band is
// below zero, refined by bisection to 1 mm. Empty if no grid point qualifies.
std::optional<double> significance_threshold(const EffectCurve& curve);

struct DynamicCoefficients {
  double ln_slr = 0.0, ln_slr_sq = 0.0, ln_slr_lag = 0.0, ln_slr_lag_sq = 0.0;

  // Throws DataError unless the fit carries all four dynamic terms.
  static DynamicCoefficients from_fit(const FitResult& fit);
};

struct DynamicEffect {
  double immediate = 0.0;  // contemporaneous coefficients (beta + gamma)
  double lagged = 0.0;     // current + lag coefficients (gamma)
};

DynamicEffect dynamic_effects(const DynamicCoefficients& c, double s_mm, double ref_mm);

struct PointEstimateRow {
  double sea_level_mm = 0.0;
  double immediate = 0.0, lagged = 0.0, short_term = 0.0, long_term = 0.0;  // log points
};

inline const std::vector<double>& default_point_levels() {
  static const std::vector<double> levels = {6500, 7000, 7500, 8000, 8500, 9000};
  return levels;
}

std::vector<PointEstimateRow> point_estimate_table(const AdaptationCoefficients& adaptation,
                                                   const DynamicCoefficients& dynamic,
                                                   const std::vector<double>& levels = default_point_levels(),
                                                   double ref_mm = kReferenceMm,
                                                   std::optional<double> region_mean_ln_slr = std::nullopt);

// 100 * value rounded to one decimal, with -0.0 folded to 0.0.
double percent_1dp(double fraction);

}  // namespace slrgdp
