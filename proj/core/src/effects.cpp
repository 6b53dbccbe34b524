#include "slrgdp/effects.hpp"

#include <cmath>

#include "slrgdp/error.hpp"

namespace slrgdp {

namespace {

void check_positive(double s_mm, double ref_mm) {
  if (!(s_mm > 0.0) || !(ref_mm > 0.0)) throw DataError("sea levels must be positive (mm on the RLR datum)");
}

// Gradient of the effect with respect to (ln_slr, ln_slr_sq, penalty).
Eigen::Vector3d long_term_gradient(double s_mm, double ref_mm) {
  const double u = std::log(s_mm), u0 = std::log(ref_mm);
  const double d = u - u0;
  return {d, d * (u + u0), 0.0};
}

Eigen::Vector3d short_term_gradient(double s_mm, double ref_mm, double m) {
  const double u = std::log(s_mm), u0 = std::log(ref_mm);
  const double d = u - u0;
  return {d, d * (u + u0), d * (u + u0 - 2.0 * m)};
}

Band band_from(const Eigen::Vector3d& g, const AdaptationCoefficients& c, double z) {
  Band b;
  b.effect = g.dot(c.b) + 0.0;
  b.sd = std::sqrt(std::max(0.0, g.dot(c.vcov * g)));
  b.low = b.effect - z * b.sd;
  b.high = b.effect + z * b.sd;
  return b;
}

}  // namespace

double long_term_effect(double b1, double b2, double s_mm, double ref_mm) {
  check_positive(s_mm, ref_mm);
  const double u = std::log(s_mm), u0 = std::log(ref_mm);
  // Factored so the result is exactly 0 at s == ref.
  return (u - u0) * (b1 + b2 * (u + u0)) + 0.0;
}

double adaptation_gap(double b3, double s_mm, double ref_mm, double m) {
  check_positive(s_mm, ref_mm);
  const double u = std::log(s_mm), u0 = std::log(ref_mm);
  return b3 * (u - u0) * (u + u0 - 2.0 * m) + 0.0;
}

double short_term_effect(double b1, double b2, double b3, double s_mm, double ref_mm, double m) {
  return long_term_effect(b1, b2, s_mm, ref_mm) + adaptation_gap(b3, s_mm, ref_mm, m);
}

double annualized_growth_impact(double cumulative_effect, double years) {
  if (!(years > 0.0)) throw DataError("annualisation horizon must be positive");
  return cumulative_effect / years;
}

AdaptationCoefficients AdaptationCoefficients::from_fit(const FitResult& fit) {
  static const char* names[] = {"ln_slr", "ln_slr_sq", "penalty"};
  AdaptationCoefficients c;
  Eigen::Index idx[3];
  for (int i = 0; i < 3; ++i) {
    idx[i] = fit.index_of(names[i]);
    c.b(i) = fit.coefficients(idx[i]);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.vcov(i, j) = fit.vcov(idx[i], idx[j]);
  return c;
}

Band long_term_band(const AdaptationCoefficients& c, double s_mm, double ref_mm, double z) {
  check_positive(s_mm, ref_mm);
  return band_from(long_term_gradient(s_mm, ref_mm), c, z);
}

Band short_term_band(const AdaptationCoefficients& c, double s_mm, double ref_mm, double m, double z) {
  check_positive(s_mm, ref_mm);
  return band_from(short_term_gradient(s_mm, ref_mm, m), c, z);
}

EffectCurve effect_curve(const AdaptationCoefficients& coefficients, const std::vector<double>& grid,
                         const CurveOptions& options) {
  if (grid.empty()) throw DataError("effect grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DataError("effect grid must be strictly increasing");
  }
  EffectCurve curve;
  curve.grid = grid;
  curve.reference_mm = options.reference_mm;
  curve.region_mean_ln_slr = options.region_mean_ln_slr.value_or(std::log(options.reference_mm));
  curve.extrapolation_boundary_mm = options.reference_mm + options.max_in_sample_rise_mm;
  curve.z = options.z;
  curve.model = coefficients;
  for (double s : grid) {
    const auto lt = long_term_band(coefficients, s, curve.reference_mm, curve.z);
    const auto st = short_term_band(coefficients, s, curve.reference_mm, curve.region_mean_ln_slr, curve.z);
    curve.lt_effect.push_back(lt.effect);
    curve.lt_ci_low.push_back(lt.low);
    curve.lt_ci_high.push_back(lt.high);
    curve.st_effect.push_back(st.effect);
    curve.st_ci_low.push_back(st.low);
    curve.st_ci_high.push_back(st.high);
    curve.gap.push_back(adaptation_gap(coefficients.b(2), s, curve.reference_mm, curve.region_mean_ln_slr));
    curve.extrapolated.push_back(s > curve.extrapolation_boundary_mm);
  }
  return curve;
}

EffectCurve effect_curve(const FitResult& fit, const std::vector<double>& grid, const CurveOptions& options) {
  return effect_curve(AdaptationCoefficients::from_fit(fit), grid, options);
}

std::optional<double> significance_threshold(const EffectCurve& curve) {
  auto upper = [&](double s) { return long_term_band(curve.model, s, curve.reference_mm, curve.z).high; };
  double below = curve.reference_mm;
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    const double s = curve.grid[i];
    if (s <= curve.reference_mm) continue;
    if (curve.lt_ci_high[i] >= 0.0) {
      below = s;
      continue;
    }
    double lo = below, hi = s;
    while (hi - lo > 1.0) {
      const double mid = 0.5 * (lo + hi);
      (upper(mid) < 0.0 ? hi : lo) = mid;
    }
    return hi;
  }
  return std::nullopt;
}

DynamicCoefficients DynamicCoefficients::from_fit(const FitResult& fit) {
  if (!fit.has("ln_slr_lag") || !fit.has("ln_slr_lag_sq")) {
    throw DataError("dynamic effects need the dynamic specification (fit '" + fit.spec_name + "')");
  }
  return {fit.coef("ln_slr"), fit.coef("ln_slr_sq"), fit.coef("ln_slr_lag"), fit.coef("ln_slr_lag_sq")};
}

DynamicEffect dynamic_effects(const DynamicCoefficients& c, double s_mm, double ref_mm) {
  return {long_term_effect(c.ln_slr, c.ln_slr_sq, s_mm, ref_mm),
          long_term_effect(c.ln_slr + c.ln_slr_lag, c.ln_slr_sq + c.ln_slr_lag_sq, s_mm, ref_mm)};
}

std::vector<PointEstimateRow> point_estimate_table(const AdaptationCoefficients& adaptation,
                                                   const DynamicCoefficients& dynamic,
                                                   const std::vector<double>& levels, double ref_mm,
                                                   std::optional<double> region_mean_ln_slr) {
  const double m = region_mean_ln_slr.value_or(std::log(ref_mm));
  std::vector<PointEstimateRow> rows;
  for (double s : levels) {
    const auto dyn = dynamic_effects(dynamic, s, ref_mm);
    PointEstimateRow row;
    row.sea_level_mm = s;
    row.immediate = dyn.immediate;
    row.lagged = dyn.lagged;
    row.long_term = long_term_effect(adaptation.b(0), adaptation.b(1), s, ref_mm);
    row.short_term = short_term_effect(adaptation.b(0), adaptation.b(1), adaptation.b(2), s, ref_mm, m);
    rows.push_back(row);
  }
  return rows;
}

double percent_1dp(double fraction) { return std::round(fraction * 1000.0) / 10.0 + 0.0; }

}  // namespace slrgdp
