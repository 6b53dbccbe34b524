#include "slrgdp/validation.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "slrgdp/csv.hpp"
#include "slrgdp/error.hpp"
#include "slrgdp/rlr_ingest.hpp"

namespace slrgdp {

namespace fs = std::filesystem;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  // splitmix64 finaliser applied to each key in turn
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  h = mix(h ^ a);
  h = mix(h ^ b);
  h = mix(h ^ c);
  return h;
}

KeyedNormal::KeyedNormal(std::uint64_t seed, std::uint64_t stream, std::uint64_t region, std::uint64_t decade)
    : engine_(mix_seed(seed, stream, region, decade)) {}

namespace {

enum Stream : std::uint64_t {
  kSeaBase = 1,
  kSeaTrend,
  kSeaNoise,
  kIncomeLevel,
  kIncomeNoise,
  kRegionFe,
  kCountryYearFe,
  kNoiseScale,
  kNoise,
};

double draw(const SyntheticDGP& dgp, Stream s, int a, int b) {
  KeyedNormal z(dgp.seed, s, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
  return z();
}

std::string region_label(int r) {
  std::ostringstream os;
  os << "R" << (r < 10 ? "0" : "") << r;  // R00..R99, unique within the panel
  return os.str();
}

std::string country_label(int c) {
  std::string s = "C";
  s += static_cast<char>('A' + c % 26);
  if (c >= 26) s += static_cast<char>('A' + c / 26);
  return s;
}

}  // namespace

PanelDataset generate_panel(const SyntheticDGP& dgp) {
  if (dgp.n_regions < 1 || dgp.n_decades < 1 || dgp.n_countries < 1 ||
      dgp.n_regions * dgp.n_decades < 30) {
    throw DataError("synthetic DGP needs n_regions * n_decades >= 30");
  }
  if (dgp.noise_sd < 0) throw DataError("noise_sd must be non-negative");
  const bool dynamic = dgp.gamma1.has_value() && dgp.gamma2.has_value();
  const double u0 = std::log(7000.0);

  PanelDataset panel;
  for (int d = 0; d <= dgp.n_decades; ++d) panel.decade_grid.push_back(dgp.first_year + 10 * (d - 1));

  for (int r = 0; r < dgp.n_regions; ++r) {
    const int c = r % dgp.n_countries;
    const double base = dgp.sea.base_mm + dgp.sea.base_sd_mm * draw(dgp, kSeaBase, r, 0);
    const double trend = dgp.sea.trend_mm_per_decade + dgp.sea.trend_sd_mm_per_decade * draw(dgp, kSeaTrend, r, 0);
    std::vector<double> ln_sea(dgp.n_decades + 1);
    for (int d = 0; d <= dgp.n_decades; ++d) {
      const double level = base + trend * d + dgp.sea.station_noise_mm * draw(dgp, kSeaNoise, r, d);
      if (!(level > 0)) throw DataError("synthetic sea level is non-positive");
      ln_sea[d] = std::log(level);
    }
    double mean_ln = 0.0;
    for (int d = 1; d <= dgp.n_decades; ++d) mean_ln += ln_sea[d];
    mean_ln /= dgp.n_decades;

    const double income_level = 9.0 + 0.4 * draw(dgp, kIncomeLevel, r, 0);
    const double region_fe = dgp.region_fe_sd * draw(dgp, kRegionFe, r, 0);
    const double noise_scale = dgp.noise_sd * std::exp(dgp.noise_log_scale_sd * draw(dgp, kNoiseScale, r, 0));
    double e_prev = 0.0;
    for (int d = 1; d <= dgp.n_decades; ++d) {
      PanelRow row;
      row.region_code = region_label(r);
      row.country_code = country_label(c);
      row.year = dgp.first_year + 10 * (d - 1);
      row.country_year = make_country_year(row.country_code, row.year);
      row.ln_slr = ln_sea[d];
      row.ln_slr_sq = ln_sea[d] * ln_sea[d];
      row.ln_slr_lag = ln_sea[d - 1];
      row.ln_slr_lag_sq = ln_sea[d - 1] * ln_sea[d - 1];
      row.penalty = (ln_sea[d] - mean_ln) * (ln_sea[d] - mean_ln);
      row.ln_gdppc_lag = income_level + 0.15 * d + 0.1 * draw(dgp, kIncomeNoise, r, d);

      // SLR terms are measured from ln 7000 so the response stays O(1); the
      // shift is a constant absorbed by the fixed effects.
      double slr = 0.0;
      const double du = row.ln_slr - u0, su = row.ln_slr + u0;
      if (dynamic) {
        const double dl = row.ln_slr_lag - u0, sl = row.ln_slr_lag + u0;
        slr = (dgp.beta1 + *dgp.gamma1) * du + (dgp.beta2 + *dgp.gamma2) * du * su - dgp.beta1 * dl -
              dgp.beta2 * dl * sl;
      } else {
        slr = dgp.beta1 * du + dgp.beta2 * du * su + dgp.beta3 * row.penalty;
      }
      if (dgp.effect_onset_year && row.year < *dgp.effect_onset_year) slr = 0.0;

      const double shock = noise_scale * draw(dgp, kNoise, r, d);
      const double e = d == 1 ? shock : dgp.noise_ar * e_prev + std::sqrt(1.0 - dgp.noise_ar * dgp.noise_ar) * shock;
      e_prev = e;
      const double cy_fe = dgp.country_year_fe_sd * draw(dgp, kCountryYearFe, 1000 + c, d);
      row.d_ln_gdppc = region_fe + cy_fe + dgp.theta * row.ln_gdppc_lag + slr + e;
      panel.rows.push_back(std::move(row));
    }
  }
  std::sort(panel.rows.begin(), panel.rows.end(), [](const PanelRow& a, const PanelRow& b) {
    return std::tie(a.region_code, a.year) < std::tie(b.region_code, b.year);
  });
  panel.reindex();
  return panel;
}

Eigen::VectorXd true_coefficients(const SyntheticDGP& dgp, const ModelSpec& spec) {
  const bool dynamic = dgp.gamma1.has_value() && dgp.gamma2.has_value();
  Eigen::VectorXd t(static_cast<Eigen::Index>(spec.regressors.size()));
  for (std::size_t j = 0; j < spec.regressors.size(); ++j) {
    const auto& n = spec.regressors[j];
    double v = 0.0;
    if (n == "ln_slr") v = dynamic ? dgp.beta1 + *dgp.gamma1 : dgp.beta1;
    else if (n == "ln_slr_sq") v = dynamic ? dgp.beta2 + *dgp.gamma2 : dgp.beta2;
    else if (n == "ln_slr_lag") v = dynamic ? -dgp.beta1 : 0.0;
    else if (n == "ln_slr_lag_sq") v = dynamic ? -dgp.beta2 : 0.0;
    else if (n == "penalty") v = dynamic ? 0.0 : dgp.beta3;
    else if (n == "ln_gdppc_lag") v = dgp.theta;
    t(static_cast<Eigen::Index>(j)) = v;
  }
  return t;
}

double calibrate_noise_sd(const SyntheticDGP& dgp, double target_r_squared) {
  if (!(target_r_squared > 0.0 && target_r_squared < 1.0)) throw DataError("target R^2 must lie in (0, 1)");
  auto quiet = dgp;
  quiet.noise_sd = 0.0;
  auto unit = dgp;
  unit.noise_sd = 1.0;
  const auto p0 = generate_panel(quiet);
  const auto p1 = generate_panel(unit);

  // Residuals and the centred response are linear in the noise scale s, so
  // RSS(s) and TSS(s) are quadratics recovered from fits at y0, e and y0 + e.
  auto noise = p1;
  for (std::size_t i = 0; i < noise.rows.size(); ++i) noise.rows[i].d_ln_gdppc -= p0.rows[i].d_ln_gdppc;
  const auto spec = build_spec("adaptation");
  const double rss_y = fit_panel(spec, p0).rss, rss_e = fit_panel(spec, noise).rss, rss_sum = fit_panel(spec, p1).rss;
  auto tss = [&](const PanelDataset& p) {
    double mean = 0.0, ss = 0.0;
    for (const auto& r : p.rows) mean += r.d_ln_gdppc;
    mean /= static_cast<double>(p.rows.size());
    for (const auto& r : p.rows) ss += (r.d_ln_gdppc - mean) * (r.d_ln_gdppc - mean);
    return ss;
  };
  const double tss_y = tss(p0), tss_e = tss(noise), tss_cross = (tss(p1) - tss_y - tss_e) / 2;
  const double rss_cross = (rss_sum - rss_y - rss_e) / 2;

  // RSS(s) = (1 - R^2) TSS(s)
  const double u = 1.0 - target_r_squared;
  const double qa = rss_e - u * tss_e, qb = rss_cross - u * tss_cross, qc = rss_y - u * tss_y;
  if (qc > 0) throw DataError("target R^2 exceeds the noiseless fit");
  if (!(qa > 0)) throw DataError("target R^2 unreachable by scaling the noise");
  return (-qb + std::sqrt(qb * qb - qa * qc)) / qa;
}

Eigen::MatrixXd direct_sandwich_vcov(const Eigen::MatrixXd& projector, const Eigen::VectorXd& residuals,
                                     const std::vector<Factor>& clusters, ClusterMode mode,
                                     Eigen::Index k_regressors) {
  const auto n = residuals.size();
  const auto k = projector.rows();
  const double dn = static_cast<double>(n);
  auto component = [&](auto same_cluster, int levels) {
    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!same_cluster(i, j)) continue;
        meat.noalias() += residuals(i) * residuals(j) * projector.col(i) * projector.col(j).transpose();
      }
    }
    const double g = levels;
    return Eigen::MatrixXd(g / (g - 1.0) * (dn - 1.0) / (dn - static_cast<double>(k_regressors)) * meat);
  };
  const auto& a = clusters.at(0);
  Eigen::MatrixXd v = component([&](Eigen::Index i, Eigen::Index j) { return a.codes[i] == a.codes[j]; }, a.levels);
  if (mode == ClusterMode::two_way) {
    const auto& b = clusters.at(1);
    const auto ab = Factor::intersect(a, b);
    v += component([&](Eigen::Index i, Eigen::Index j) { return b.codes[i] == b.codes[j]; }, b.levels);
    v -= component([&](Eigen::Index i, Eigen::Index j) { return ab.codes[i] == ab.codes[j]; }, ab.levels);
    v = 0.5 * (v + v.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(v);
    if (eig.eigenvalues().minCoeff() < 0.0) {
      v = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).asDiagonal() * eig.eigenvectors().transpose();
    }
  }
  return 0.5 * (v + v.transpose());
}

OracleFit dense_dummy_ols(const DesignMatrix& dm, ClusterMode mode) {
  dm.validate();
  const auto n = dm.rows();
  if (n > kOracleMaxRows) throw DataError("dense dummy oracle limited to " + std::to_string(kOracleMaxRows) + " rows");

  Eigen::Index levels = 0;
  for (const auto& g : dm.fe_groups) levels += g.levels;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, std::max<Eigen::Index>(levels, 1));
  if (dm.fe_groups.empty()) {
    d.col(0).setOnes();
  } else {
    Eigen::Index offset = 0;
    for (const auto& g : dm.fe_groups) {
      for (Eigen::Index i = 0; i < n; ++i) d(i, offset + g.codes[i]) = 1.0;
      offset += g.levels;
    }
  }

  OracleFit out;
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> dcod(d);
  const Eigen::MatrixXd x_resid = dm.x - d * dcod.solve(dm.x);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < dm.x.cols(); ++j) {
    if (x_resid.col(j).norm() < 1e-8 * static_cast<double>(n)) {
      out.absorbed_columns.push_back(dm.names[j]);
    } else {
      keep.push_back(j);
      out.names.push_back(dm.names[j]);
    }
  }
  const auto k = static_cast<Eigen::Index>(keep.size());
  // Regressors are centred (the dummies span the constant) and scaled to unit
  // norm before the solve; ln_slr and its square are otherwise nearly collinear.
  Eigen::MatrixXd z(n, k + d.cols());
  Eigen::VectorXd scale(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    z.col(c) = dm.x.col(keep[c]).array() - dm.x.col(keep[c]).mean();
    scale(c) = z.col(c).norm();
    z.col(c) /= scale(c);
  }
  z.rightCols(d.cols()) = d;

  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(z);
  const Eigen::MatrixXd pinv = cod.pseudoInverse();
  Eigen::VectorXd full = pinv * dm.y;
  full += pinv * (dm.y - z * full);  // one refinement step
  out.coefficients = full.head(k).cwiseQuotient(scale);
  out.residuals = dm.y - z * full;
  const Eigen::MatrixXd projector = scale.cwiseInverse().asDiagonal() * pinv.topRows(k);

  // Absorbed parameters outside the span of cluster-nested FE blocks.
  Eigen::Index fe_dof = 0;
  if (!dm.fe_groups.empty()) {
    const std::size_t used = mode == ClusterMode::one_way ? 1 : 2;
    std::vector<Eigen::Index> nested_cols;
    Eigen::Index offset = 0;
    for (const auto& g : dm.fe_groups) {
      bool nested = false;
      for (std::size_t c = 0; c < std::min(used, dm.clusters.size()) && !nested; ++c) {
        std::map<int, std::set<int>> owners;
        for (Eigen::Index i = 0; i < n; ++i) owners[g.codes[i]].insert(dm.clusters[c].codes[i]);
        nested = std::all_of(owners.begin(), owners.end(), [](const auto& o) { return o.second.size() == 1; });
      }
      if (nested)
        for (int l = 0; l < g.levels; ++l) nested_cols.push_back(offset + l);
      offset += g.levels;
    }
    fe_dof = dcod.rank();
    if (!nested_cols.empty()) {
      Eigen::MatrixXd dn(n, static_cast<Eigen::Index>(nested_cols.size()));
      for (std::size_t c = 0; c < nested_cols.size(); ++c) dn.col(static_cast<Eigen::Index>(c)) = d.col(nested_cols[c]);
      fe_dof -= Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(dn).rank();
    }
  }
  out.fe_dof = fe_dof;
  out.vcov = direct_sandwich_vcov(projector, out.residuals, dm.clusters, mode, k + fe_dof);
  return out;
}

OracleFit dense_dummy_ols(const PanelDataset& panel, const ModelSpec& spec) {
  const auto rows = select_rows(spec, panel);
  if (rows.empty()) throw DataError("oracle: empty estimation sample");
  return dense_dummy_ols(make_design(spec, panel, rows), spec.cluster_mode);
}

MonteCarloSummary monte_carlo(const SyntheticDGP& dgp, const ModelSpec& spec, int replications) {
  const auto truth = true_coefficients(dgp, spec);
  const auto k = truth.size();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(k), sum_sq = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd se_sum = Eigen::VectorXd::Zero(k), covered = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd covered_normal = Eigen::VectorXd::Zero(k);
  MonteCarloSummary out;
  out.replications = replications;
  int ok = 0;
  for (int r = 0; r < replications; ++r) {
    auto rep = dgp;
    rep.seed = mix_seed(dgp.seed, static_cast<std::uint64_t>(r));
    try {
      const auto fit = fit_panel(spec, generate_panel(rep));
      if (fit.names.size() != static_cast<std::size_t>(k)) throw NumericalError("column absorbed");
      const double crit = fit.critical_value();
      for (Eigen::Index j = 0; j < k; ++j) {
        const double b = fit.coefficients(j);
        const double se = std::sqrt(fit.vcov(j, j));
        sum(j) += b;
        sum_sq(j) += b * b;
        se_sum(j) += se;
        covered(j) += std::abs(b - truth(j)) <= crit * se ? 1.0 : 0.0;
        covered_normal(j) += std::abs(b - truth(j)) <= 1.959963984540054 * se ? 1.0 : 0.0;
      }
      ++ok;
    } catch (const Error&) {
      ++out.failures;
    }
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    CoefficientSummary s;
    s.name = spec.regressors[static_cast<std::size_t>(j)];
    s.truth = truth(j);
    if (ok > 0) {
      s.mean = sum(j) / ok;
      s.sd = ok > 1 ? std::sqrt(std::max(0.0, (sum_sq(j) - ok * s.mean * s.mean) / (ok - 1))) : 0.0;
      s.mean_se = se_sum(j) / ok;
      s.coverage = covered(j) / ok;
      s.coverage_normal = covered_normal(j) / ok;
    }
    out.coefficients.push_back(s);
  }
  return out;
}

namespace {

struct FixtureStation {
  int id;
  const char* name;
  const char* region;
  const char* country;
  double base_mm;
  double trend_mm_per_year;
};

constexpr FixtureStation kStations[] = {
    {101, "LAGOON NORTH", "ITH3", "IT", 6905.0, 2.6},
    {102, "LAGOON SOUTH", "ITH3", "IT", 6940.0, 2.2},
    {103, "GULF EAST", "ITH4", "IT", 6985.0, 1.3},
    {104, "COAST WEST", "BE23", "BE", 6960.0, 1.8},
    {105, "COAST PORT", "BE23", "BE", 6990.0, 1.6},
};

struct FixtureRegion {
  const char* region;
  const char* country;
  double gdp_1900;  // millions
  double pop_1900;
  double gdp_growth_per_decade;
  double pop_growth_per_decade;
};

constexpr FixtureRegion kRegions[] = {
    {"BE23", "BE", 1500.0, 800000.0, 0.24, 0.03},
    {"FR10", "FR", 9000.0, 4500000.0, 0.26, 0.06},  // inland: no gauge, excluded
    {"ITH3", "IT", 2100.0, 1900000.0, 0.28, 0.05},
    {"ITH4", "IT", 1100.0, 1000000.0, 0.25, 0.02},
};

std::string fmt(double v, int precision = 17) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

void put(std::vector<std::string>& written, const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  csv::write_file(path.string(), content);
  written.push_back(path.string());
}

}  // namespace

std::vector<std::string> emit_fixtures(const std::string& directory) {
  const fs::path root = fs::path(directory) / "v1";
  std::vector<std::string> written;
  constexpr std::uint64_t kSeed = 20240611;

  // RLR annual files, 1900-2020, with a few missing years per station.
  std::string station_list, station_map = "station_id,region_code,country_code\n";
  for (const auto& st : kStations) {
    StationSeries s;
    s.station_id = st.id;
    for (int year = 1900; year <= 2020; ++year) {
      RlrRecord rec;
      rec.year = year;
      rec.flag = "N";
      rec.quality = "000";
      const bool missing = (year * 7 + st.id) % 41 == 0;
      if (!missing) {
        KeyedNormal z(kSeed, 1, static_cast<std::uint64_t>(st.id), static_cast<std::uint64_t>(year));
        rec.rlr_mm = std::round(st.base_mm + st.trend_mm_per_year * (year - 1900) + 25.0 * z());
      }
      s.records.push_back(rec);
    }
    put(written, root / "rlr" / (std::to_string(st.id) + ".rlrdata"), serialize_rlr_annual(s));
    station_list += std::to_string(st.id) + ";  45.0000;  12.0000; " + st.name + "; 000; 0000; N\n";
    station_map += std::to_string(st.id) + "," + st.region + "," + st.country + "\n";
  }
  put(written, root / "filelist.txt", station_list);
  put(written, root / "station_map.csv", station_map);

  // Decadal GDP/population 1900-2010 plus 2015, and annual growth to 2020.
  std::string econ = "region_code,country_code,year,gdp,population\n";
  std::string ext = "region_code,year,gdp_growth,pop_growth\n";
  int idx = 0;
  for (const auto& rg : kRegions) {
    std::vector<int> years;
    for (int y = 1900; y <= 2010; y += 10) years.push_back(y);
    years.push_back(2015);
    for (int y : years) {
      const double decades = (y - 1900) / 10.0;
      KeyedNormal z(kSeed, 2, static_cast<std::uint64_t>(idx), static_cast<std::uint64_t>(y));
      const double gdp = rg.gdp_1900 * std::pow(1.0 + rg.gdp_growth_per_decade, decades) * std::exp(0.03 * z());
      const double pop = rg.pop_1900 * std::pow(1.0 + rg.pop_growth_per_decade, decades);
      econ += std::string(rg.region) + "," + rg.country + "," + std::to_string(y) + "," + fmt(std::round(gdp * 10) / 10) +
              "," + fmt(std::round(pop)) + "\n";
    }
    for (int y = 2016; y <= 2020; ++y) {
      const double g = y == 2020 ? -0.06 : 0.015 + 0.002 * idx;
      ext += std::string(rg.region) + "," + std::to_string(y) + "," + fmt(g) + "," + fmt(0.002) + "\n";
    }
    ++idx;
  }
  put(written, root / "econ.csv", econ);
  put(written, root / "extension.csv", ext);

  // Scenario paths anchored on the 2050 and 2100 mean rises of each
  // combination; FI1D is an uplifting region without a gauge.
  struct Scn {
    const char* label;
    int ssp;
    const char* rcp;
    const char* ice;
    double rise_2050;
    double rise_2100;
  };
  constexpr Scn scenarios[] = {{"SSP1-RCP2.6-low", 1, "2.6", "low", 140.0, 260.0},
                               {"SSP2-RCP4.5-medium", 2, "4.5", "medium", 170.0, 450.0},
                               {"SSP5-RCP8.5-high_end", 5, "8.5", "high_end", 500.0, 1770.0}};
  struct RegionScale {
    const char* region;
    double factor;
    double uplift_mm_2100;
    double pop_2020;
  };
  constexpr RegionScale scales[] = {{"BE23", 0.9, 0.0, 1200000.0},
                                    {"FI1D", 0.6, 1200.0, 1280000.0},
                                    {"ITH3", 1.2, 0.0, 4900000.0},
                                    {"ITH4", 1.0, 0.0, 1210000.0}};
  std::string scen = "scenario,ssp,rcp,ice,region_code,year,slr_mm_vs_base,population\n";
  for (const auto& sc : scenarios) {
    // rise(tau) = a tau + b tau^2 with tau = (year - 2020) / 80
    const double t1 = 30.0 / 80.0;
    const double b = (sc.rise_2050 - sc.rise_2100 * t1) / (t1 * t1 - t1);
    const double a = sc.rise_2100 - b;
    for (const auto& rs : scales) {
      for (int y = 2025; y <= 2100; y += 5) {
        const double tau = (y - 2020) / 80.0;
        const double rise = rs.factor * (a * tau + b * tau * tau) - rs.uplift_mm_2100 * tau;
        const double pop = rs.pop_2020 * (1.0 + (sc.ssp == 5 ? 0.25 : sc.ssp == 2 ? 0.05 : -0.1) * tau);
        scen += std::string(sc.label) + "," + std::to_string(sc.ssp) + "," + sc.rcp + "," + sc.ice + "," +
                rs.region + "," + std::to_string(y) + "," + fmt(std::round(rise * 10) / 10) + "," +
                fmt(std::round(pop)) + "\n";
      }
    }
  }
  put(written, root / "scenarios.csv", scen);

  SyntheticDGP dgp;
  dgp.n_regions = 24;
  dgp.n_countries = 4;
  dgp.n_decades = 9;
  dgp.first_year = 1940;
  dgp.seed = kSeed;
  put(written, root / "synthetic_panel.csv", write_panel_csv(generate_panel(dgp)));

  put(written, root / "paper_coefficients.cfg",
      "# Published point estimates and standard errors (rounded as printed).\n"
      "adaptation.ln_slr = 675\n"
      "adaptation.ln_slr_sq = -38\n"
      "adaptation.ln_gdppc_lag = -0.475\n"
      "adaptation.penalty = -33\n"
      "adaptation.se.ln_slr = 279\n"
      "adaptation.se.ln_slr_sq = 16\n"
      "adaptation.se.ln_gdppc_lag = 0.062\n"
      "adaptation.se.penalty = 15\n"
      "dynamic.ln_slr = 1232\n"
      "dynamic.ln_slr_lag = -758\n"
      "dynamic.ln_slr_sq = -69\n"
      "dynamic.ln_slr_lag_sq = 43\n"
      "dynamic.ln_gdppc_lag = -0.198\n"
      "dynamic.se.ln_slr = 279\n"
      "dynamic.se.ln_slr_lag = 281\n"
      "dynamic.se.ln_slr_sq = 16\n"
      "dynamic.se.ln_slr_lag_sq = 16\n"
      "dynamic.se.ln_gdppc_lag = 0.024\n");

  std::sort(written.begin(), written.end());
  return written;
}

}  // namespace slrgdp
