#pragma once

// Independent reference computations and synthetic data used by the test and
// acceptance suites: dense-dummy least squares, direct-summation sandwich
// variance, synthetic panels with known coefficients, Monte Carlo drivers and
// the fixture emitter.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "slrgdp/fe_estimator.hpp"
#include "slrgdp/model_specs.hpp"
#include "slrgdp/panel.hpp"

namespace slrgdp {

// Deterministic normal draws keyed by (seed, stream, region, decade), so panel
// content does not depend on generation order.
class KeyedNormal {
 public:
  KeyedNormal(std::uint64_t seed, std::uint64_t stream, std::uint64_t region, std::uint64_t decade);
  double operator()() { return dist_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> dist_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

struct SeaLevelProcess {
  double base_mm = 7000.0;         // cross-region mean at the first grid year
  double base_sd_mm = 150.0;       // cross-region spread of that level
  double trend_mm_per_decade = 25.0;
  double trend_sd_mm_per_decade = 20.0;
  double station_noise_mm = 180.0; // independent per region-decade
};

struct SyntheticDGP {
  int n_regions = 79;
  int n_decades = 9;  // panel rows per region
  int n_countries = 12;
  int first_year = 1930;  // year of the first row; lags reach back one decade
  double beta1 = 675.0, beta2 = -38.0, beta3 = -33.0, theta = -0.475;
  std::optional<double> gamma1, gamma2;  // dynamic model when both are set
  // SLR terms enter only for rows with year >= onset (structural break DGP).
  std::optional<int> effect_onset_year;
  double region_fe_sd = 0.15;
  double country_year_fe_sd = 0.10;
  double noise_sd = 0.05;
  double noise_log_scale_sd = 0.3;  // per-region noise scale exp(s * z)
  double noise_ar = 0.3;                // within-region AR(1) of the disturbances
  SeaLevelProcess sea;
  std::uint64_t seed = 1;
};

// Throws DataError if n_regions * n_decades < 30 or sizes are degenerate.
PanelDataset generate_panel(const SyntheticDGP& dgp);

// True coefficient for each regressor of `spec` under `dgp`.
Eigen::VectorXd true_coefficients(const SyntheticDGP& dgp, const ModelSpec& spec);

// Noise sd at which the adaptation model fitted to this DGP's panel has the
// target total R^2 (exact for dgp.seed).
double calibrate_noise_sd(const SyntheticDGP& dgp, double target_r_squared);

struct OracleFit {
  std::vector<std::string> names;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd vcov;
  std::vector<std::string> absorbed_columns;
  Eigen::Index fe_dof = 0;  // absorbed parameters added to K in the CR1 factor
};

inline constexpr Eigen::Index kOracleMaxRows = 2000;

// Explicit indicator columns for every FE level (intercept when there are no
// FE groups), solved with a complete orthogonal decomposition. The covariance
// comes from direct_sandwich_vcov over the pseudoinverse rows, with FE
// parameters not nested in a cluster dimension counted in K.
OracleFit dense_dummy_ols(const DesignMatrix& dm, ClusterMode mode);
OracleFit dense_dummy_ols(const PanelDataset& panel, const ModelSpec& spec);

// Sandwich variance by explicit double summation over observation pairs that
// share a cluster. `projector` is the K x N matrix mapping y to the
// coefficients; k_regressors sets the (N-1)/(N-K) factor.
Eigen::MatrixXd direct_sandwich_vcov(const Eigen::MatrixXd& projector, const Eigen::VectorXd& residuals,
                                     const std::vector<Factor>& clusters, ClusterMode mode,
                                     Eigen::Index k_regressors);

struct CoefficientSummary {
  std::string name;
  double truth = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  double mean_se = 0.0;
  double coverage = 0.0;         // share of 95% t(G-1) intervals containing the truth
  double coverage_normal = 0.0;  // same with the normal quantile
};

struct MonteCarloSummary {
  int replications = 0;
  int failures = 0;
  std::vector<CoefficientSummary> coefficients;
};

// Replication r uses seed mix_seed(dgp.seed, r).
MonteCarloSummary monte_carlo(const SyntheticDGP& dgp, const ModelSpec& spec, int replications);

// Writes the versioned fixture corpus (RLR files, station map, econ and
// extension tables, scenario paths, synthetic panel, paper coefficients)
// under `directory`/v1. Returns the written file paths, sorted.
std::vector<std::string> emit_fixtures(const std::string& directory);

}  // namespace slrgdp
