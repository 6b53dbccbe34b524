#include "slrgdp/fe_estimator.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "slrgdp/error.hpp"

namespace slrgdp {

Factor Factor::from_labels(std::string name, const std::vector<std::string>& labels) {
  std::map<std::string, int> dict;
  for (const auto& l : labels) dict.emplace(l, 0);
  int next = 0;
  for (auto& [label, code] : dict) code = next++;
  Factor f{std::move(name), {}, next};
  f.codes.reserve(labels.size());
  for (const auto& l : labels) f.codes.push_back(dict.at(l));
  return f;
}

Factor Factor::intersect(const Factor& a, const Factor& b) {
  if (a.codes.size() != b.codes.size()) throw DataError("factor lengths differ");
  std::map<std::pair<int, int>, int> dict;
  for (std::size_t i = 0; i < a.codes.size(); ++i) dict.emplace(std::make_pair(a.codes[i], b.codes[i]), 0);
  int next = 0;
  for (auto& [key, code] : dict) code = next++;
  Factor f{a.name + "#" + b.name, {}, next};
  f.codes.reserve(a.codes.size());
  for (std::size_t i = 0; i < a.codes.size(); ++i) f.codes.push_back(dict.at({a.codes[i], b.codes[i]}));
  return f;
}

void DesignMatrix::validate() const {
  const auto n = static_cast<std::size_t>(x.rows());
  if (static_cast<std::size_t>(y.size()) != n) throw DataError("response length differs from design rows");
  if (names.size() != static_cast<std::size_t>(x.cols())) throw DataError("column names do not match design");
  if (!x.allFinite() || !y.allFinite()) throw DataError("design contains non-finite values");
  for (const auto& g : fe_groups) {
    if (g.codes.size() != n) throw DataError("FE group '" + g.name + "' has wrong length");
    if (g.levels < 1) throw DataError("FE group '" + g.name + "' has no levels");
  }
  for (const auto& c : clusters) {
    if (c.codes.size() != n) throw DataError("cluster '" + c.name + "' has wrong length");
  }
}

namespace {

// Subtracts group means from every column of m in place; returns the largest
// absolute adjustment.
double demean_by(Eigen::MatrixXd& m, const Factor& group) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(group.levels, m.cols());
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(group.levels);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    sums.row(group.codes[i]) += m.row(i);
    counts(group.codes[i]) += 1.0;
  }
  for (int g = 0; g < group.levels; ++g) {
    if (counts(g) > 0) sums.row(g) /= counts(g);
  }
  double change = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    m.row(i) -= sums.row(group.codes[i]);
  }
  for (int g = 0; g < group.levels; ++g) {
    if (counts(g) > 0) change = std::max(change, sums.row(g).cwiseAbs().maxCoeff());
  }
  return change;
}

}  // namespace

AbsorbedDesign absorb_fixed_effects(const DesignMatrix& dm, const AbsorptionOptions& options) {
  dm.validate();
  if (dm.fe_groups.empty()) throw DataError("absorption needs at least one FE group");

  Eigen::MatrixXd m(dm.rows(), dm.x.cols() + 1);
  m.col(0) = dm.y;
  m.rightCols(dm.x.cols()) = dm.x;

  AbsorptionReport report;
  if (dm.fe_groups.size() == 1) {
    demean_by(m, dm.fe_groups.front());
    report.iterations = 1;
    report.final_change = 0.0;
  } else {
    while (true) {
      double change = 0.0;
      for (const auto& g : dm.fe_groups) change = std::max(change, demean_by(m, g));
      ++report.iterations;
      report.final_change = change;
      if (change < options.tolerance) break;
      if (report.iterations >= options.max_iterations) {
        throw NumericalError("fixed-effect absorption did not converge after " +
                                 std::to_string(report.iterations) + " sweeps",
                             change);
      }
    }
  }

  AbsorbedDesign out{dm, report};
  out.design.y = m.col(0);
  out.design.x = m.rightCols(dm.x.cols());
  return out;
}

OlsSolution ols_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    const std::vector<std::string>& names) {
  const auto k = x.cols();
  if (k == 0) throw NumericalError("no regressors to estimate");
  if (x.rows() <= k) {
    throw NumericalError("need more rows than regressors (" + std::to_string(x.rows()) + " <= " +
                         std::to_string(k) + ")");
  }

  // Rank is judged on unit-norm columns so the threshold is scale free.
  Eigen::VectorXd norms = x.colwise().norm();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (norms(j) == 0.0) throw NumericalError("column '" + names.at(j) + "' is identically zero");
  }
  const Eigen::MatrixXd scaled = x * norms.cwiseInverse().asDiagonal();
  for (Eigen::Index j = 1; j <= k; ++j) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled.leftCols(j));
    qr.setThreshold(1e-10);
    if (qr.rank() < j) {
      throw NumericalError("rank deficient design: column '" + names.at(j - 1) +
                           "' is a linear combination of earlier columns");
    }
  }

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(scaled);
  OlsSolution sol;
  const Eigen::VectorXd scaled_coef = qr.solve(y);
  sol.coefficients = scaled_coef.cwiseQuotient(norms);
  sol.residuals = y - x * sol.coefficients;

  const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd scaled_inv = r_inv * r_inv.transpose();
  sol.xtx_inverse = norms.cwiseInverse().asDiagonal() * scaled_inv * norms.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(x.rows(), k);
  sol.projector = q * r_inv.transpose() * norms.cwiseInverse().asDiagonal();
  return sol;
}

std::string_view to_string(ClusterMode mode) {
  return mode == ClusterMode::one_way ? "one_way" : "two_way";
}

ClusterMode parse_cluster_mode(std::string_view text) {
  if (text == "one_way") return ClusterMode::one_way;
  if (text == "two_way") return ClusterMode::two_way;
  throw UsageError("unknown cluster mode '" + std::string(text) + "' (expected one_way or two_way)");
}

namespace {

Eigen::MatrixXd cr1_component(const Eigen::MatrixXd& x, const Eigen::VectorXd& e,
                              const Eigen::MatrixXd& bread, const Factor& cluster, Eigen::Index extra_dof) {
  const double n = static_cast<double>(x.rows());
  const double k = static_cast<double>(x.cols() + extra_dof);
  const double g = static_cast<double>(cluster.levels);
  if (cluster.levels < 2) {
    throw DataError("cluster dimension '" + cluster.name + "' has a single cluster; variance undefined");
  }
  Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(cluster.levels, x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) scores.row(cluster.codes[i]) += e(i) * x.row(i);
  const Eigen::MatrixXd meat = scores.transpose() * scores;
  if (!(n > k)) throw NumericalError("no residual degrees of freedom for the covariance");
  const double factor = g / (g - 1.0) * (n - 1.0) / (n - k);
  return factor * bread * meat * bread;
}

}  // namespace

VcovResult cluster_robust_vcov(const Eigen::MatrixXd& x, const Eigen::VectorXd& residuals,
                               const Eigen::MatrixXd& xtx_inverse,
                               const std::vector<Factor>& clusters, ClusterMode mode,
                               Eigen::Index absorbed_dof) {
  VcovResult out;
  if (clusters.empty()) throw DataError("cluster labels required");
  if (mode == ClusterMode::one_way) {
    out.vcov = cr1_component(x, residuals, xtx_inverse, clusters[0], absorbed_dof);
    out.cluster_counts = {clusters[0].levels};
  } else {
    if (clusters.size() < 2) throw DataError("two-way clustering needs two cluster dimensions");
    const auto both = Factor::intersect(clusters[0], clusters[1]);
    out.vcov = cr1_component(x, residuals, xtx_inverse, clusters[0], absorbed_dof) +
               cr1_component(x, residuals, xtx_inverse, clusters[1], absorbed_dof);
    out.vcov -= cr1_component(x, residuals, xtx_inverse, both, absorbed_dof);
    out.cluster_counts = {clusters[0].levels, clusters[1].levels, both.levels};
  }
  out.vcov = 0.5 * (out.vcov + out.vcov.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.vcov);
  out.min_eigenvalue = eig.eigenvalues().minCoeff();
  if (mode == ClusterMode::two_way && out.min_eigenvalue < 0.0) {
    const Eigen::VectorXd floored = eig.eigenvalues().cwiseMax(0.0);
    out.vcov = eig.eigenvectors() * floored.asDiagonal() * eig.eigenvectors().transpose();
    out.vcov = 0.5 * (out.vcov + out.vcov.transpose());
    out.psd_repaired = true;
  }
  return out;
}

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

// Rank of the stacked indicator matrices: total levels minus one per extra
// group within each connected component of the level graph.
Eigen::Index indicator_rank(const std::vector<const Factor*>& groups) {
  if (groups.empty()) return 0;
  std::vector<int> offset{0};
  for (const auto* g : groups) offset.push_back(offset.back() + g->levels);
  std::vector<int> parent(static_cast<std::size_t>(offset.back()));
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::vector<bool> seen(parent.size(), false);
  const auto n = groups.front()->codes.size();
  for (std::size_t row = 0; row < n; ++row) {
    const int first = groups[0]->codes[row];
    seen[static_cast<std::size_t>(first)] = true;
    for (std::size_t g = 1; g < groups.size(); ++g) {
      const int node = offset[g] + groups[g]->codes[row];
      seen[static_cast<std::size_t>(node)] = true;
      parent[static_cast<std::size_t>(find_root(parent, node))] = find_root(parent, first);
    }
  }
  Eigen::Index used = 0, components = 0;
  for (std::size_t i = 0; i < parent.size(); ++i) {
    if (!seen[i]) continue;
    ++used;
    components += find_root(parent, static_cast<int>(i)) == static_cast<int>(i);
  }
  // Exact for one or two groups; with more, cycles can remove further ranks.
  return used - components * static_cast<Eigen::Index>(groups.size() - 1);
}

bool nested_in(const Factor& group, const Factor& cluster) {
  std::vector<int> owner(static_cast<std::size_t>(group.levels), -1);
  for (std::size_t i = 0; i < group.codes.size(); ++i) {
    auto& o = owner[static_cast<std::size_t>(group.codes[i])];
    if (o < 0) o = cluster.codes[i];
    else if (o != cluster.codes[i]) return false;
  }
  return true;
}

}  // namespace

Eigen::Index absorbed_dof(const std::vector<Factor>& fe_groups, const std::vector<Factor>& clusters,
                          ClusterMode mode) {
  const std::size_t used = mode == ClusterMode::one_way ? 1 : 2;
  std::vector<const Factor*> all, nested;
  for (const auto& g : fe_groups) {
    all.push_back(&g);
    for (std::size_t c = 0; c < std::min(used, clusters.size()); ++c) {
      if (nested_in(g, clusters[c])) {
        nested.push_back(&g);
        break;
      }
    }
  }
  return indicator_rank(all) - indicator_rank(nested);
}

bool FitResult::has(std::string_view name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

Eigen::Index FitResult::index_of(std::string_view name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DataError("fit '" + spec_name + "' has no coefficient '" + std::string(name) + "'");
  return static_cast<Eigen::Index>(it - names.begin());
}

double FitResult::coef(std::string_view name) const { return coefficients(index_of(name)); }
double FitResult::se(std::string_view name) const {
  const auto i = index_of(name);
  return std::sqrt(std::max(0.0, vcov(i, i)));
}
double FitResult::tstat(std::string_view name) const { return coef(name) / se(name); }
double FitResult::cov(std::string_view a, std::string_view b) const { return vcov(index_of(a), index_of(b)); }

FitResult fit_design(const DesignMatrix& dm, const FitOptions& options, std::string spec_name) {
  const auto absorbed = absorb_fixed_effects(dm, options.absorption);
  const auto& adm = absorbed.design;
  const auto n = adm.rows();

  FitResult fit;
  fit.spec_name = std::move(spec_name);
  fit.n_obs = static_cast<std::size_t>(n);
  fit.absorption = absorbed.report;
  fit.cluster_mode = options.cluster_mode;
  for (const auto& g : dm.fe_groups) fit.fe_absorbed.push_back(g.name);

  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < adm.x.cols(); ++j) {
    if (adm.x.col(j).norm() < 1e-8 * static_cast<double>(n)) {
      fit.absorbed_columns.push_back(adm.names[j]);
    } else {
      keep.push_back(j);
      fit.names.push_back(adm.names[j]);
    }
  }
  if (keep.empty()) throw NumericalError("every regressor is absorbed by the fixed effects");

  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(keep.size()));
  Eigen::MatrixXd x_raw(n, x.cols());
  for (std::size_t c = 0; c < keep.size(); ++c) {
    x.col(c) = adm.x.col(keep[c]);
    x_raw.col(c) = dm.x.col(keep[c]);
  }

  const auto sol = ols_fit(x, adm.y, fit.names);
  fit.coefficients = sol.coefficients;
  fit.fe_dof = absorbed_dof(dm.fe_groups, dm.clusters, options.cluster_mode);
  const auto v = cluster_robust_vcov(sol.projector, sol.residuals, Eigen::MatrixXd::Identity(x.cols(), x.cols()),
                                     dm.clusters, options.cluster_mode, fit.fe_dof);
  fit.vcov = v.vcov;
  fit.vcov_repaired = v.psd_repaired;
  fit.cluster_counts = v.cluster_counts;

  fit.rss = sol.residuals.squaredNorm();
  const double tss = (dm.y.array() - dm.y.mean()).square().sum();
  const double tss_within = adm.y.squaredNorm();
  fit.r_squared = tss > 0 ? std::clamp(1.0 - fit.rss / tss, 0.0, 1.0) : 0.0;
  fit.within_r_squared = tss_within > 0 ? std::clamp(1.0 - fit.rss / tss_within, 0.0, 1.0) : 0.0;
  fit.constant = dm.y.mean() - x_raw.colwise().mean().dot(fit.coefficients);
  return fit;
}

double FitResult::critical_value(double level) const {
  const double p = 0.5 + level / 2;
  const std::size_t dims = cluster_mode == ClusterMode::one_way ? 1 : 2;
  if (cluster_counts.size() < dims) return boost::math::quantile(boost::math::normal(), p);
  const int g = *std::min_element(cluster_counts.begin(), cluster_counts.begin() + static_cast<std::ptrdiff_t>(dims));
  if (g < 2) return boost::math::quantile(boost::math::normal(), p);
  return boost::math::quantile(boost::math::students_t(g - 1), p);
}

}  // namespace slrgdp
