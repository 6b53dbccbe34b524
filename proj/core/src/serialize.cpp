#include "slrgdp/serialize.hpp"

#include <fmt/format.h>

#include <cmath>
#include <json.hpp>

#include "slrgdp/csv.hpp"
#include "slrgdp/error.hpp"
#include "slrgdp/model_specs.hpp"

namespace slrgdp {

using nlohmann::ordered_json;

namespace {

ordered_json provenance_json(const Provenance& p) {
  ordered_json j;
  j["command"] = p.command;
  j["spec"] = p.spec;
  j["version"] = p.version;
  ordered_json inputs = ordered_json::array();
  for (const auto& [name, digest] : p.inputs) inputs.push_back({{"name", name}, {"sha256", digest}});
  j["inputs"] = inputs;
  ordered_json settings = ordered_json::object();
  for (const auto& [k, v] : p.settings) settings[k] = v;
  j["settings"] = settings;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string g17(double v) {
  if (std::isnan(v)) return "";
  return fmt::format("{:.17g}", v);
}

std::string pct(double log_points) { return fmt::format("{:.1f}", percent_1dp(log_points)); }
std::string pct_exp(double log_points) { return fmt::format("{:.1f}", percent_1dp(std::expm1(log_points))); }

std::string stars(const FitResult& f, double t) {
  // two-sided p-value thresholds 0.01, 0.05, 0.1
  const double a = std::abs(t);
  if (a > f.critical_value(0.99)) return "***";
  if (a > f.critical_value(0.95)) return "**";
  if (a > f.critical_value(0.90)) return "*";
  return "";
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string Provenance::csv_header() const {
  std::string out = "# command: " + command + "\n";
  out += "# spec: " + (spec.empty() ? std::string("-") : spec) + "\n";
  out += "# version: " + version + "\n";
  for (const auto& [name, digest] : inputs) out += "# input: " + name + " sha256=" + digest + "\n";
  for (const auto& [k, v] : settings) out += "# setting: " + k + "=" + v + "\n";
  return out;
}

std::string fit_to_json(const FitResult& fit, const Provenance& prov) {
  ordered_json j;
  j["provenance"] = provenance_json(prov);
  j["spec"] = fit.spec_name;
  ordered_json table = ordered_json::array();
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double se = std::sqrt(fit.vcov(k, k));
    table.push_back({{"name", fit.names[i]},
                     {"estimate", fit.coefficients(k)},
                     {"std_error", se},
                     {"t_stat", fit.coefficients(k) / se}});
  }
  j["coefficients"] = table;
  ordered_json vcov = ordered_json::array();
  for (Eigen::Index r = 0; r < fit.vcov.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < fit.vcov.cols(); ++c) row.push_back(fit.vcov(r, c));
    vcov.push_back(row);
  }
  j["vcov"] = vcov;
  j["constant"] = fit.constant;
  j["n_obs"] = fit.n_obs;
  j["r_squared"] = fit.r_squared;
  j["within_r_squared"] = fit.within_r_squared;
  j["rss"] = fit.rss;
  j["fixed_effects"] = fit.fe_absorbed;
  j["diagnostics"] = {{"absorbed_columns", fit.absorbed_columns},
                      {"absorption_iterations", fit.absorption.iterations},
                      {"absorption_final_change", fit.absorption.final_change},
                      {"cluster_mode", std::string(to_string(fit.cluster_mode))},
                      {"cluster_counts", fit.cluster_counts},
                      {"vcov_psd_repaired", fit.vcov_repaired},
                      {"fe_dof", fit.fe_dof}};
  return dump(j);
}

FitResult fit_from_json(std::string_view text) {
  FitResult fit;
  try {
    const auto j = ordered_json::parse(text);
    fit.spec_name = j.at("spec").get<std::string>();
    const auto& table = j.at("coefficients");
    const auto k = static_cast<Eigen::Index>(table.size());
    fit.coefficients.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      fit.names.push_back(table[i].at("name").get<std::string>());
      fit.coefficients(i) = table[i].at("estimate").get<double>();
    }
    const auto& vcov = j.at("vcov");
    if (static_cast<Eigen::Index>(vcov.size()) != k) throw ParseError("vcov dimension mismatch", 0);
    fit.vcov.resize(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      if (static_cast<Eigen::Index>(vcov[r].size()) != k) throw ParseError("vcov dimension mismatch", 0);
      for (Eigen::Index c = 0; c < k; ++c) fit.vcov(r, c) = vcov[r][c].get<double>();
    }
    fit.constant = j.at("constant").get<double>();
    fit.n_obs = j.at("n_obs").get<std::size_t>();
    fit.r_squared = j.at("r_squared").get<double>();
    fit.within_r_squared = j.at("within_r_squared").get<double>();
    fit.rss = j.at("rss").get<double>();
    fit.fe_absorbed = j.at("fixed_effects").get<std::vector<std::string>>();
    const auto& d = j.at("diagnostics");
    fit.absorbed_columns = d.at("absorbed_columns").get<std::vector<std::string>>();
    fit.absorption.iterations = d.at("absorption_iterations").get<int>();
    fit.absorption.final_change = d.at("absorption_final_change").get<double>();
    fit.cluster_mode = parse_cluster_mode(d.at("cluster_mode").get<std::string>());
    fit.cluster_counts = d.at("cluster_counts").get<std::vector<int>>();
    fit.vcov_repaired = d.at("vcov_psd_repaired").get<bool>();
    fit.fe_dof = d.value("fe_dof", Eigen::Index{0});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("fit JSON: ") + e.what(), 0);
  }
  return fit;
}

std::string fit_table_csv(const std::vector<FitResult>& fits, const Provenance& prov) {
  std::vector<std::string> rows;
  for (const auto& f : fits)
    for (const auto& n : f.names)
      if (std::find(rows.begin(), rows.end(), n) == rows.end()) rows.push_back(n);

  std::string out = prov.csv_header();
  out += "term";
  for (const auto& f : fits) out += "," + f.spec_name;
  out += "\n";
  for (const auto& name : rows) {
    std::string est = name, se = "";
    for (const auto& f : fits) {
      if (f.has(name)) {
        est += "," + fmt::format("{:.6g}{}", f.coef(name), stars(f, f.tstat(name)));
        se += "," + fmt::format("({:.6g})", f.se(name));
      } else {
        est += ",";
        se += ",";
      }
    }
    out += est + "\n" + se + "\n";
  }
  out += "constant";
  for (const auto& f : fits) out += "," + fmt::format("{:.6g}", f.constant);
  auto flag = [](const FitResult& f, std::string_view g) {
    return std::find(f.fe_absorbed.begin(), f.fe_absorbed.end(), g) != f.fe_absorbed.end() ? "Yes" : "No";
  };
  out += "\ncountry_year_fe";
  for (const auto& f : fits) out += std::string(",") + flag(f, "country_year");
  out += "\nregion_fe";
  for (const auto& f : fits) out += std::string(",") + flag(f, "region");
  out += "\nobservations";
  for (const auto& f : fits) out += "," + std::to_string(f.n_obs);
  out += "\nr_squared";
  for (const auto& f : fits) out += "," + fmt::format("{:.3f}", f.r_squared);
  out += "\n";
  return out;
}

std::string effect_curve_csv(const EffectCurve& c, const Provenance& prov) {
  std::string out = prov.csv_header();
  out += fmt::format("# reference_mm: {}\n# extrapolation_beyond_mm: {}\n", g17(c.reference_mm),
                     g17(c.extrapolation_boundary_mm));
  out +=
      "sea_level_mm,lt_effect,lt_ci_low,lt_ci_high,st_effect,st_ci_low,st_ci_high,gap,"
      "lt_pct_logpoints,st_pct_logpoints,lt_pct_exp,st_pct_exp,extrapolated\n";
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    out += g17(c.grid[i]) + "," + g17(c.lt_effect[i]) + "," + g17(c.lt_ci_low[i]) + "," + g17(c.lt_ci_high[i]) +
           "," + g17(c.st_effect[i]) + "," + g17(c.st_ci_low[i]) + "," + g17(c.st_ci_high[i]) + "," + g17(c.gap[i]) +
           "," + pct(c.lt_effect[i]) + "," + pct(c.st_effect[i]) + "," + pct_exp(c.lt_effect[i]) + "," +
           pct_exp(c.st_effect[i]) + "," + (c.extrapolated[i] ? "1" : "0") + "\n";
  }
  return out;
}

std::string effect_curve_json(const EffectCurve& c, std::optional<double> threshold_mm, const Provenance& prov) {
  ordered_json j;
  j["provenance"] = provenance_json(prov);
  j["reference_mm"] = c.reference_mm;
  j["region_mean_ln_slr"] = c.region_mean_ln_slr;
  j["extrapolation_boundary_mm"] = c.extrapolation_boundary_mm;
  j["z"] = c.z;
  j["coefficients"] = {{"ln_slr", c.model.b(0)}, {"ln_slr_sq", c.model.b(1)}, {"penalty", c.model.b(2)}};
  j["threshold_mm"] = threshold_mm ? ordered_json(*threshold_mm) : ordered_json("none-found");
  ordered_json pts = ordered_json::array();
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    pts.push_back({{"sea_level_mm", c.grid[i]},
                   {"lt_effect", c.lt_effect[i]},
                   {"lt_ci_low", c.lt_ci_low[i]},
                   {"lt_ci_high", c.lt_ci_high[i]},
                   {"st_effect", c.st_effect[i]},
                   {"st_ci_low", c.st_ci_low[i]},
                   {"st_ci_high", c.st_ci_high[i]},
                   {"gap", c.gap[i]},
                   {"lt_exp_minus_1", std::expm1(c.lt_effect[i])},
                   {"st_exp_minus_1", std::expm1(c.st_effect[i])},
                   {"extrapolated", static_cast<bool>(c.extrapolated[i])}});
  }
  j["curve"] = pts;
  return dump(j);
}

std::string point_table_csv(const std::vector<PointEstimateRow>& rows, const Provenance& prov) {
  std::string out = prov.csv_header();
  out += "# percentages are 100 * log-point change vs 7000 mm; *_exp columns use exp(x) - 1\n";
  out +=
      "sea_level_mm,immediate_pct,lagged_pct,short_term_pct,long_term_pct,"
      "immediate_pct_exp,lagged_pct_exp,short_term_pct_exp,long_term_pct_exp\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", g17(r.sea_level_mm), pct(r.immediate), pct(r.lagged),
                       pct(r.short_term), pct(r.long_term), pct_exp(r.immediate), pct_exp(r.lagged),
                       pct_exp(r.short_term), pct_exp(r.long_term));
  }
  return out;
}

std::string rolling_csv(const RollingResult& result, std::string_view coefficient, const Provenance& prov) {
  const auto first = first_significant_end_year(result, coefficient);
  std::string out = prov.csv_header();
  for (const auto& d : result.diagnostics) out += "# diagnostic: " + d + "\n";
  out += "start_year,end_year,n_obs,coefficient,estimate,std_error,ci_low,ci_high,significant,first_significant_end_year\n";
  const std::string first_text = first ? std::to_string(*first) : "none";
  for (const auto& w : result.windows) {
    const std::string name(coefficient);
    if (!w.fit.has(name)) continue;
    const double b = w.fit.coef(name), se = w.fit.se(name), crit = w.fit.critical_value();
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", w.start_year, w.end_year, w.fit.n_obs, name, g17(b), g17(se),
                       g17(b - crit * se), g17(b + crit * se), std::abs(b / se) > crit ? 1 : 0, first_text);
  }
  return out;
}

std::string projections_csv(const std::vector<ScenarioProjection>& projections, const Provenance& prov) {
  std::string out = prov.csv_header();
  out += "scenario,region_code,base_rlr_mm,year,cumulative_change,change_pct\n";
  for (const auto& p : projections) {
    for (const auto& pt : p.path) {
      out += fmt::format("{},{},{},{},{},{}\n", p.scenario.label(), p.region_code, g17(p.base_rlr_mm), pt.year,
                         g17(pt.cumulative_change), pct(pt.cumulative_change));
    }
  }
  return out;
}

std::string projections_json(const std::vector<ScenarioProjection>& projections, const Provenance& prov) {
  ordered_json j;
  j["provenance"] = provenance_json(prov);
  ordered_json arr = ordered_json::array();
  for (const auto& p : projections) {
    ordered_json path = ordered_json::array();
    for (const auto& pt : p.path) path.push_back({{"year", pt.year}, {"cumulative_change", pt.cumulative_change}});
    arr.push_back({{"scenario", p.scenario.label()},
                   {"region_code", p.region_code},
                   {"base_rlr_mm", p.base_rlr_mm},
                   {"terminal_2100", p.terminal_2100 ? ordered_json(*p.terminal_2100) : ordered_json(nullptr)},
                   {"population_2100", p.population_2100},
                   {"diagnostics", p.diagnostics},
                   {"path", path}});
  }
  j["projections"] = arr;
  return dump(j);
}

std::string ranking_csv(const ScenarioId& scenario, const RegionRanking& ranking, const Provenance& prov) {
  std::string out = prov.csv_header();
  out += "# scenario: " + scenario.label() + "\n";
  out += "rank,worst_region,worst_change_pct,worst_change,best_region,best_change_pct,best_change\n";
  const auto n = std::max(ranking.worst.size(), ranking.best.size());
  for (std::size_t i = 0; i < n; ++i) {
    out += std::to_string(i + 1);
    for (const auto* list : {&ranking.worst, &ranking.best}) {
      if (i < list->size()) {
        const auto& r = (*list)[i];
        out += "," + quote(r.region_code) + "," + pct(r.terminal_2100) + "," + g17(r.terminal_2100);
      } else {
        out += ",,,";
      }
    }
    out += "\n";
  }
  return out;
}

std::string aggregates_json(const std::vector<ScenarioAggregate>& aggregates, const Provenance& prov) {
  ordered_json j;
  j["provenance"] = provenance_json(prov);
  ordered_json arr = ordered_json::array();
  for (const auto& a : aggregates) {
    ordered_json pcts = ordered_json::object();
    for (const auto& [p, v] : a.percentiles) pcts["p" + std::to_string(p)] = v;
    arr.push_back({{"scenario", a.scenario.label()},
                   {"n_regions", a.n_regions},
                   {"mean_population_weighted", a.mean_population_weighted},
                   {"mean_uniform", a.mean_uniform},
                   {"percentiles", pcts}});
  }
  j["aggregates"] = arr;
  return dump(j);
}

std::map<std::string, FitResult> parse_injected_coefficients(std::string_view text) {
  std::map<std::string, std::map<std::string, double>> est, se, cov;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    auto line = csv::trim(text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
    ++line_no;
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
    const auto key = std::string(csv::trim(line.substr(0, eq)));
    const double value = csv::to_double(csv::trim(line.substr(eq + 1)), line_no, key);
    const auto dot = key.find('.');
    if (dot == std::string::npos) throw ParseError("key must be spec.name or spec.se.name: " + key, line_no);
    const auto spec = key.substr(0, dot);
    auto rest = key.substr(dot + 1);
    auto* target = &est;
    if (rest.rfind("se.", 0) == 0) {
      rest = rest.substr(3);
      target = &se;
    } else if (rest.rfind("cov.", 0) == 0) {
      rest = rest.substr(4);
      if (rest.find('.') == std::string::npos) throw ParseError("covariance key must be spec.cov.a.b: " + key, line_no);
      target = &cov;
    }
    if (!(*target)[spec].emplace(rest, value).second) throw ParseError("duplicate key " + key, line_no);
  }

  std::map<std::string, FitResult> out;
  for (const auto& [spec_name, values] : est) {
    const auto spec = build_spec(spec_name);
    FitResult fit;
    fit.spec_name = spec_name;
    fit.fe_absorbed = spec.fe_groups;
    fit.cluster_mode = spec.cluster_mode;
    for (const auto& name : spec.regressors)
      if (values.count(name)) fit.names.push_back(name);
    for (const auto& [name, v] : values) {
      if (std::find(spec.regressors.begin(), spec.regressors.end(), name) == spec.regressors.end())
        throw UsageError("spec " + spec_name + " has no regressor " + name);
    }
    const auto k = static_cast<Eigen::Index>(fit.names.size());
    fit.coefficients.resize(k);
    fit.vcov = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto& name = fit.names[static_cast<std::size_t>(i)];
      fit.coefficients(i) = values.at(name);
      if (auto s = se.find(spec_name); s != se.end() && s->second.count(name)) {
        fit.vcov(i, i) = s->second.at(name) * s->second.at(name);
      }
    }
    if (auto c = cov.find(spec_name); c != cov.end()) {
      for (const auto& [pair, v] : c->second) {
        const auto dot = pair.find('.');
        const auto a = pair.substr(0, dot), b = pair.substr(dot + 1);
        if (!fit.has(a) || !fit.has(b) || a == b) throw UsageError("bad covariance entry " + spec_name + ".cov." + pair);
        fit.vcov(fit.index_of(a), fit.index_of(b)) = v;
        fit.vcov(fit.index_of(b), fit.index_of(a)) = v;
      }
    }
    out.emplace(spec_name, std::move(fit));
  }
  for (const auto* extra : {&se, &cov}) {
    for (const auto& [spec_name, values] : *extra) {
      if (!est.count(spec_name)) throw UsageError("uncertainty given for " + spec_name + " without estimates");
    }
  }
  return out;
}

}  // namespace slrgdp
