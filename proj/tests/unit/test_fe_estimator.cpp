#include <gtest/gtest.h>

#include <random>

#include "slrgdp/error.hpp"
#include "slrgdp/fe_estimator.hpp"
#include "slrgdp/validation.hpp"

using namespace slrgdp;

namespace {

Factor factor(std::string name, std::vector<int> codes) {
  std::vector<std::string> labels;
  for (int c : codes) labels.push_back("L" + std::to_string(1000 + c));
  return Factor::from_labels(std::move(name), labels);
}

// Unbalanced random panel: `regions` x `years`, region/country_year FEs and
// clusters, with `drop` rows removed at random.
DesignMatrix random_panel(int regions, int years, int countries, int drop, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<int> region, cy;
  for (int r = 0; r < regions; ++r)
    for (int t = 0; t < years; ++t) {
      region.push_back(r);
      cy.push_back((r % countries) * years + t);
    }
  for (int d = 0; d < drop; ++d) {
    const auto i = std::uniform_int_distribution<std::size_t>(0, region.size() - 1)(rng);
    region.erase(region.begin() + static_cast<long>(i));
    cy.erase(cy.begin() + static_cast<long>(i));
  }
  const auto n = static_cast<Eigen::Index>(region.size());
  DesignMatrix dm;
  dm.names = {"x1", "x2", "x3"};
  dm.x.resize(n, 3);
  dm.y.resize(n);
  std::vector<double> a(regions), b(countries * years);
  for (auto& v : a) v = z(rng);
  for (auto& v : b) v = z(rng);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double fe = a[region[i]] + b[cy[i]];
    dm.x(i, 0) = z(rng) + 0.5 * fe;
    dm.x(i, 1) = z(rng) * z(rng) + a[region[i]];
    dm.x(i, 2) = z(rng);
    dm.y(i) = 1.5 * dm.x(i, 0) - 0.7 * dm.x(i, 1) + 0.2 * dm.x(i, 2) + fe + z(rng) * (1.0 + 0.5 * std::abs(a[region[i]]));
  }
  dm.fe_groups = {factor("region", region), factor("country_year", cy)};
  dm.clusters = dm.fe_groups;
  return dm;
}

Eigen::MatrixXd dummies(const std::vector<Factor>& groups, Eigen::Index n) {
  Eigen::Index total = 0;
  for (const auto& g : groups) total += g.levels;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, total);
  Eigen::Index off = 0;
  for (const auto& g : groups) {
    for (Eigen::Index i = 0; i < n; ++i) d(i, off + g.codes[i]) = 1.0;
    off += g.levels;
  }
  return d;
}

}  // namespace

TEST(Absorb, SingleGroupExactOnePass) {
  auto dm = random_panel(8, 6, 2, 5, 1);
  dm.fe_groups.resize(1);
  const auto a = absorb_fixed_effects(dm);
  EXPECT_EQ(a.report.iterations, 1);
  const auto& g = dm.fe_groups[0];
  std::vector<double> sum(g.levels, 0.0);
  for (Eigen::Index c = 0; c < 3; ++c) {
    std::fill(sum.begin(), sum.end(), 0.0);
    std::vector<int> count(g.levels, 0);
    for (Eigen::Index i = 0; i < dm.rows(); ++i) {
      sum[g.codes[i]] += a.design.x(i, c);
      ++count[g.codes[i]];
    }
    for (int l = 0; l < g.levels; ++l) EXPECT_NEAR(sum[l] / count[l], 0.0, 1e-14);
  }
}

TEST(Absorb, NestedGroupsConvergeInTwoSweeps) {
  // country_year nested in year: after the first sweep the year means are zero.
  std::vector<int> year, cy;
  for (int c = 0; c < 4; ++c)
    for (int t = 0; t < 7; ++t)
      for (int k = 0; k < 3; ++k) {
        year.push_back(t);
        cy.push_back(c * 7 + t);
      }
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  DesignMatrix dm;
  dm.names = {"x"};
  dm.x.resize(static_cast<Eigen::Index>(year.size()), 1);
  dm.y.resize(dm.x.rows());
  for (Eigen::Index i = 0; i < dm.x.rows(); ++i) {
    dm.x(i, 0) = z(rng);
    dm.y(i) = z(rng);
  }
  dm.fe_groups = {factor("year", year), factor("country_year", cy)};
  EXPECT_LE(absorb_fixed_effects(dm).report.iterations, 2);
}

TEST(Absorb, MatchesDummyResiduals) {
  const auto dm = random_panel(25, 8, 4, 0, 42);  // 200 rows
  ASSERT_EQ(dm.rows(), 200);
  const auto a = absorb_fixed_effects(dm);
  const Eigen::MatrixXd d = dummies(dm.fe_groups, dm.rows());
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(d);
  const Eigen::MatrixXd rx = dm.x - d * cod.solve(dm.x);
  const Eigen::VectorXd ry = dm.y - d * cod.solve(dm.y);
  EXPECT_LT((a.design.x - rx).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((a.design.y - ry).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Absorb, NonConvergenceCarriesResidual) {
  auto dm = random_panel(10, 6, 3, 7, 9);
  AbsorptionOptions opt;
  opt.max_iterations = 1;
  try {
    absorb_fixed_effects(dm, opt);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_GT(e.last_residual(), 0.0);
  }
}

TEST(Ols, ExactLine) {
  Eigen::MatrixXd x(5, 1);
  x << 1, 2, 3, 4, 5;
  const auto s = ols_fit(x, 2.0 * x.col(0), {"x"});
  EXPECT_NEAR(s.coefficients(0), 2.0, 1e-15);
  EXPECT_LT(s.residuals.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Ols, CollinearNamesColumn) {
  Eigen::MatrixXd x(4, 2);
  x << 1, 3, 2, 6, -1, -3, 0.5, 1.5;
  try {
    ols_fit(x, x.col(0) + x.col(1), {"x1", "x2"});
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("x2"), std::string::npos);
  }
}

TEST(Ols, MatchesPseudoinverse) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> z;
  Eigen::MatrixXd x(100, 3);
  Eigen::VectorXd y(100);
  for (Eigen::Index i = 0; i < 100; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) x(i, j) = z(rng) * (1.0 + 100.0 * j);
    y(i) = z(rng);
  }
  const auto s = ols_fit(x, y, {"a", "b", "c"});
  const Eigen::VectorXd ref = x.completeOrthogonalDecomposition().pseudoInverse() * y;
  for (Eigen::Index j = 0; j < 3; ++j) EXPECT_NEAR(s.coefficients(j), ref(j), 1e-9 * std::max(1.0, std::abs(ref(j))));
  EXPECT_LT((x.transpose() * s.residuals).cwiseAbs().maxCoeff(), 1e-10 * x.norm() * y.norm());
}

TEST(Vcov, SingletonClustersEqualHc1) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z;
  const Eigen::Index n = 40, k = 2;
  Eigen::MatrixXd x(n, k);
  Eigen::VectorXd e(n);
  std::vector<int> ids;
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = z(rng);
    x(i, 1) = z(rng);
    e(i) = z(rng);
    ids.push_back(static_cast<int>(i));
  }
  const Eigen::MatrixXd bread = (x.transpose() * x).inverse();
  const auto v = cluster_robust_vcov(x, e, bread, {factor("id", ids)}, ClusterMode::one_way);
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < n; ++i) meat += e(i) * e(i) * x.row(i).transpose() * x.row(i);
  const Eigen::MatrixXd hc1 = static_cast<double>(n) / static_cast<double>(n - k) * bread * meat * bread;
  EXPECT_LT((v.vcov - hc1).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Vcov, PositiveIntraClusterCorrelationInflatesVariance) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z;
  const Eigen::Index half = 30;
  Eigen::MatrixXd x(2 * half, 1);
  Eigen::VectorXd e(2 * half);
  std::vector<int> pair_id, single_id;
  for (Eigen::Index i = 0; i < half; ++i) {
    const double xi = std::abs(z(rng)) + 0.1;
    const double ei = std::abs(z(rng)) + 0.1;
    for (int d = 0; d < 2; ++d) {
      x(2 * i + d, 0) = xi;
      e(2 * i + d) = ei;
      pair_id.push_back(static_cast<int>(i));
      single_id.push_back(static_cast<int>(2 * i + d));
    }
  }
  const Eigen::MatrixXd bread = (x.transpose() * x).inverse();
  const auto clustered = cluster_robust_vcov(x, e, bread, {factor("pair", pair_id)}, ClusterMode::one_way);
  const auto unclustered = cluster_robust_vcov(x, e, bread, {factor("obs", single_id)}, ClusterMode::one_way);
  EXPECT_GT(clustered.vcov(0, 0), unclustered.vcov(0, 0));
}

TEST(Vcov, SingleClusterIsError) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(10, 1);
  Eigen::VectorXd e = Eigen::VectorXd::Random(10);
  const Eigen::MatrixXd bread = (x.transpose() * x).inverse();
  EXPECT_THROW(cluster_robust_vcov(x, e, bread, {factor("one", std::vector<int>(10, 0))}, ClusterMode::one_way),
               DataError);
}

TEST(Vcov, TwoWayMatchesDirectSummation) {
  // 6 regions x 10 years, 2 countries.
  auto dm = random_panel(6, 10, 2, 0, 77);
  ASSERT_EQ(dm.rows(), 60);
  for (auto mode : {ClusterMode::one_way, ClusterMode::two_way}) {
    FitOptions opt;
    opt.cluster_mode = mode;
    const auto fit = fit_design(dm, opt);
    const auto a = absorb_fixed_effects(dm);
    const auto sol = ols_fit(a.design.x, a.design.y, dm.names);
    const Eigen::MatrixXd projector = sol.xtx_inverse * a.design.x.transpose();
    const Eigen::MatrixXd ref = direct_sandwich_vcov(projector, sol.residuals, dm.clusters, mode, 3 + fit.fe_dof);
    EXPECT_LT((fit.vcov - ref).cwiseAbs().maxCoeff(), 1e-10 * ref.cwiseAbs().maxCoeff()) << to_string(mode);
  }
}

TEST(Fit, ResidualsSumToZeroWithinGroups) {
  const auto dm = random_panel(12, 7, 3, 9, 4);
  const auto a = absorb_fixed_effects(dm);
  const auto sol = ols_fit(a.design.x, a.design.y, dm.names);
  for (const auto& g : dm.fe_groups) {
    std::vector<double> sum(g.levels, 0.0);
    for (Eigen::Index i = 0; i < dm.rows(); ++i) sum[g.codes[i]] += sol.residuals(i);
    for (double s : sum) EXPECT_NEAR(s, 0.0, 1e-10);
  }
}

TEST(Fit, VcovInvariantToClusterRelabelling) {
  auto dm = random_panel(10, 6, 3, 4, 21);
  const auto base = fit_design(dm, {});
  for (auto& c : dm.clusters) {
    const int levels = c.levels;
    for (auto& code : c.codes) code = levels - 1 - code;
  }
  const auto relabelled = fit_design(dm, {});
  EXPECT_LT((base.vcov - relabelled.vcov).cwiseAbs().maxCoeff(), 1e-12 * base.vcov.cwiseAbs().maxCoeff());
}

TEST(Fit, ResponseScaling) {
  auto dm = random_panel(10, 6, 3, 0, 31);
  const auto base = fit_design(dm, {});
  const double c = 4.0;  // power of two keeps the scaling exact
  dm.y *= c;
  const auto scaled = fit_design(dm, {});
  EXPECT_LT((scaled.coefficients - c * base.coefficients).cwiseAbs().maxCoeff(),
            1e-12 * base.coefficients.cwiseAbs().maxCoeff() * c);
  EXPECT_LT((scaled.vcov - c * c * base.vcov).cwiseAbs().maxCoeff(), 1e-12 * base.vcov.cwiseAbs().maxCoeff() * c * c);
}

TEST(Fit, RSquaredMatchesDummyRegression) {
  const auto dm = random_panel(15, 7, 3, 6, 12);
  const auto fit = fit_design(dm, {});
  const auto oracle = dense_dummy_ols(dm, ClusterMode::two_way);
  const double rss = oracle.residuals.squaredNorm();
  const double tss = (dm.y.array() - dm.y.mean()).square().sum();
  EXPECT_NEAR(fit.r_squared, 1.0 - rss / tss, 1e-10);
  EXPECT_NEAR(fit.rss, rss, 1e-10 * rss);
  EXPECT_GE(fit.within_r_squared, 0.0);
  EXPECT_LE(fit.within_r_squared, fit.r_squared);
}

TEST(Fit, AbsorbedColumnReported) {
  auto dm = random_panel(10, 6, 3, 0, 5);
  dm.names.push_back("region_const");
  dm.x.conservativeResize(Eigen::NoChange, 4);
  for (Eigen::Index i = 0; i < dm.rows(); ++i) dm.x(i, 3) = 0.1 * dm.fe_groups[0].codes[i];
  const auto fit = fit_design(dm, {});
  ASSERT_EQ(fit.absorbed_columns.size(), 1u);
  EXPECT_EQ(fit.absorbed_columns[0], "region_const");
  EXPECT_EQ(fit.names.size(), 3u);
}

TEST(Fit, SymmetricVcovAndBounds) {
  const auto fit = fit_design(random_panel(9, 8, 3, 3, 55), {});
  EXPECT_LT((fit.vcov - fit.vcov.transpose()).cwiseAbs().maxCoeff(), 1e-18);
  for (Eigen::Index j = 0; j < fit.vcov.rows(); ++j) EXPECT_GE(fit.vcov(j, j), 0.0);
  EXPECT_GE(fit.r_squared, 0.0);
  EXPECT_LE(fit.r_squared, 1.0);
}

TEST(ClusterMode, ParseRoundTrip) {
  EXPECT_EQ(parse_cluster_mode("one_way"), ClusterMode::one_way);
  EXPECT_EQ(parse_cluster_mode(to_string(ClusterMode::two_way)), ClusterMode::two_way);
  EXPECT_THROW(parse_cluster_mode("three_way"), UsageError);
}

TEST(Vcov, AbsorbedDofCountsNonNestedEffects) {
  // 6 regions x 10 years in 2 countries: one connected component of region
  // and country_year levels per country, rank 6 + 20 - 2.
  const auto dm = random_panel(6, 10, 2, 0, 5);
  EXPECT_EQ(absorbed_dof(dm.fe_groups, dm.clusters, ClusterMode::one_way), 24 - 6);
  EXPECT_EQ(absorbed_dof(dm.fe_groups, dm.clusters, ClusterMode::two_way), 0);
  std::vector<Factor> only_region = {dm.fe_groups[0]};
  EXPECT_EQ(absorbed_dof(only_region, dm.clusters, ClusterMode::one_way), 0);
  std::vector<Factor> only_cy = {dm.fe_groups[1]};
  EXPECT_EQ(absorbed_dof(only_cy, dm.clusters, ClusterMode::one_way), 20);
}

TEST(Vcov, AbsorbedDofDisconnectedComponents) {
  // Two countries whose regions never share a country_year: two components.
  std::vector<int> region = {0, 0, 1, 1, 2, 2, 3, 3};
  std::vector<int> cy = {0, 1, 0, 1, 2, 3, 2, 3};
  std::vector<int> other(8);
  for (int i = 0; i < 8; ++i) other[i] = i;
  const std::vector<Factor> fe = {factor("region", region), factor("cy", cy)};
  EXPECT_EQ(absorbed_dof(fe, {factor("obs", other)}, ClusterMode::one_way), 4 + 4 - 2);
}
