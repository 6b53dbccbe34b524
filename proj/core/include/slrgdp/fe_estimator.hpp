#pragma once

// Fixed-effects least squares: alternating-projection absorption of
// categorical effects, QR solve, and one-/two-way cluster-robust covariance.

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace slrgdp {

// A categorical variable coded 0..levels-1.
struct Factor {
  std::string name;
  std::vector<int> codes;
  int levels = 0;

  // Codes are assigned in sorted label order, so relabelling-invariant
  // quantities do not depend on row order.
  static Factor from_labels(std::string name, const std::vector<std::string>& labels);
  // Cross-classification of two factors (e.g. the intersection clustering).
  static Factor intersect(const Factor& a, const Factor& b);
};

struct DesignMatrix {
  std::vector<std::string> names;  // one per column of x
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<Factor> fe_groups;
  std::vector<Factor> clusters;  // first is used for one-way clustering

  Eigen::Index rows() const { return x.rows(); }
  // Throws DataError on length mismatches or non-finite entries.
  void validate() const;
};

struct AbsorptionOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
};

struct AbsorptionReport {
  int iterations = 0;         // full sweeps over all groups
  double final_change = 0.0;  // max |change| in the last sweep
};

struct AbsorbedDesign {
  DesignMatrix design;  // x and y with every FE group projected out
  AbsorptionReport report;
};

// Alternating within-group demeaning until the largest change in a sweep
// falls below the tolerance. A single group is demeaned exactly in one pass.
// Throws NumericalError (carrying the last change) on non-convergence.
AbsorbedDesign absorb_fixed_effects(const DesignMatrix& dm, const AbsorptionOptions& options = {});

struct OlsSolution {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd xtx_inverse;
  Eigen::MatrixXd projector;  // X (X'X)^-1, N x K, from the QR factors
};

// Least squares through a Householder QR factorisation. Throws NumericalError
// naming the first column that is linearly dependent on its predecessors.
OlsSolution ols_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    const std::vector<std::string>& names);

enum class ClusterMode { one_way, two_way };

std::string_view to_string(ClusterMode mode);
ClusterMode parse_cluster_mode(std::string_view text);

struct VcovResult {
  Eigen::MatrixXd vcov;
  bool psd_repaired = false;
  double min_eigenvalue = 0.0;  // before repair
  std::vector<int> cluster_counts;
};

// CR1 sandwich, bread * meat * bread * G/(G-1) * (N-1)/(N-K). Two-way mode
// combines the two clusterings by inclusion-exclusion, V_A + V_B - V_AB, each
// term with its own small-sample factor, and floors negative eigenvalues.
// Passing the projector X (X'X)^-1 as `x` with an identity bread gives the
// same matrix with better conditioning.
// `absorbed_dof` absorbed parameters are added to K in (N-1)/(N-K).
VcovResult cluster_robust_vcov(const Eigen::MatrixXd& x, const Eigen::VectorXd& residuals,
                               const Eigen::MatrixXd& xtx_inverse,
                               const std::vector<Factor>& clusters, ClusterMode mode,
                               Eigen::Index absorbed_dof = 0);

// Rank of the FE indicator space minus the part spanned by groups nested
// within a cluster dimension in use (nested effects leave cluster scores
// unchanged, so they do not enter the small-sample factor).
Eigen::Index absorbed_dof(const std::vector<Factor>& fe_groups, const std::vector<Factor>& clusters,
                          ClusterMode mode);

struct FitOptions {
  AbsorptionOptions absorption;
  ClusterMode cluster_mode = ClusterMode::two_way;
};

struct FitResult {
  std::string spec_name;
  std::vector<std::string> names;
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd vcov;
  std::size_t n_obs = 0;
  double r_squared = 0.0;         // against the raw response, FEs included
  double within_r_squared = 0.0;  // against the absorbed response
  double rss = 0.0;
  std::vector<std::string> fe_absorbed;       // FE group names
  std::vector<std::string> absorbed_columns;  // regressors constant within FE groups
  AbsorptionReport absorption;
  ClusterMode cluster_mode = ClusterMode::two_way;
  std::vector<int> cluster_counts;
  bool vcov_repaired = false;
  Eigen::Index fe_dof = 0;  // absorbed parameters counted in the CR1 factor
  // Mean of the absorbed effects, ybar - xbar'b. Reported without a standard error.
  double constant = 0.0;

  bool has(std::string_view name) const;
  Eigen::Index index_of(std::string_view name) const;  // throws DataError if absent
  double coef(std::string_view name) const;
  double se(std::string_view name) const;
  double tstat(std::string_view name) const;
  double cov(std::string_view a, std::string_view b) const;
  // Two-sided critical value for clustered inference: t with G - 1 degrees of
  // freedom, G the smallest cluster count in use. Normal if no clusters.
  double critical_value(double level = 0.95) const;
};

// Absorb, drop absorbed columns, solve, and attach the clustered covariance.
FitResult fit_design(const DesignMatrix& dm, const FitOptions& options, std::string spec_name = {});

}  // namespace slrgdp
