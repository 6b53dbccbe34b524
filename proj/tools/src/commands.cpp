#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <map>
#include <optional>
#include <ostream>
#include <set>

#include "slrgdp/csv.hpp"
#include "slrgdp/effects.hpp"
#include "slrgdp/error.hpp"
#include "slrgdp/model_specs.hpp"
#include "slrgdp/panel.hpp"
#include "slrgdp/projector.hpp"
#include "slrgdp/rlr_ingest.hpp"
#include "slrgdp/rolling.hpp"
#include "slrgdp/serialize.hpp"
#include "slrgdp/validation.hpp"
#include "slrgdp_cli/cli.hpp"

namespace slrgdp::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string rlr_dir;
  std::string station_list;
  std::string station_map;
  std::string econ;
  std::string extension;
  std::string scenarios;
  std::string panel;
  std::string fit;
  std::string dynamic_fit;
  std::string inject;
  std::string sea_levels;
  std::string output_dir = "out";
  std::vector<std::string> specs;
  std::string cluster;
  double grid_start = 6500.0;
  double grid_end = 9000.0;
  double grid_step = 50.0;
  int window_points = 6;
  int window_step = 1;
  std::string coefficient = "ln_slr";
  std::size_t top_k = 5;
  std::string sea_mode = "point";
  int fallback_radius = 2;
  std::uint64_t seed = 1;
  int replications = 50;
  int oracle_fixtures = 10;
  std::string emit_fixtures;
  bool list_specs = false;
};

class Outputs {
 public:
  Outputs(const std::string& dir, std::ostream& log) : dir_(dir), log_(log) { fs::create_directories(dir_); }
  void write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    csv::write_file(path.string(), content);
    log_ << "wrote " << path.string() << "\n";
  }

 private:
  fs::path dir_;
  std::ostream& log_;
};

Provenance provenance(std::string command, std::string spec, const std::vector<std::string>& inputs) {
  Provenance p;
  p.command = std::move(command);
  p.spec = std::move(spec);
  for (const auto& in : inputs) {
    if (in.empty()) continue;
    p.inputs.emplace_back(fs::path(in).filename().string(), sha256_file(in));
  }
  return p;
}

std::string digest_directory(const std::string& dir) {
  // Combined digest over sorted "name sha" lines of the directory's files.
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  std::string listing;
  for (const auto& n : names) listing += n + " " + sha256_file((fs::path(dir) / n).string()) + "\n";
  return sha256_hex(listing);
}

PanelOptions panel_options(const RunConfig& c) {
  PanelOptions o;
  if (c.sea_mode == "point") o.sea_mode = SeaLevelMode::point_with_fallback;
  else if (c.sea_mode == "decade_mean") o.sea_mode = SeaLevelMode::decade_mean;
  else throw UsageError("sea-mode must be 'point' or 'decade_mean'");
  o.fallback_radius = c.fallback_radius;
  return o;
}

std::vector<ModelSpec> requested_specs(const RunConfig& c, std::vector<std::string> fallback) {
  const auto& names = c.specs.empty() ? fallback : c.specs;
  std::vector<ModelSpec> out;
  for (const auto& n : names) {
    auto spec = build_spec(n);
    if (!c.cluster.empty()) spec.cluster_mode = parse_cluster_mode(c.cluster);
    out.push_back(std::move(spec));
  }
  return out;
}

PanelDataset load_panel(const RunConfig& c) {
  if (c.panel.empty()) throw UsageError("--panel is required");
  return read_panel_csv(csv::read_file(c.panel));
}

std::vector<double> effect_grid(const RunConfig& c) {
  if (!(c.grid_start > 0.0 && c.grid_end < 20000.0 && c.grid_start <= c.grid_end && c.grid_step > 0.0)) {
    throw UsageError("effect grid must satisfy 0 < start <= end < 20000 with step > 0");
  }
  std::vector<double> grid;
  const auto n = static_cast<long>(std::floor((c.grid_end - c.grid_start) / c.grid_step + 1e-9));
  for (long i = 0; i <= n; ++i) grid.push_back(c.grid_start + static_cast<double>(i) * c.grid_step);
  return grid;
}

// Adaptation and (optionally) dynamic coefficients from fits or injection.
struct CoefficientSource {
  std::optional<FitResult> adaptation;
  std::optional<FitResult> dynamic;
  std::vector<std::string> inputs;
  std::string label;
};

CoefficientSource load_coefficients(const RunConfig& c) {
  CoefficientSource src;
  if (!c.inject.empty()) {
    if (!c.fit.empty()) throw UsageError("--inject and --fit are mutually exclusive");
    auto fits = parse_injected_coefficients(csv::read_file(c.inject));
    if (auto it = fits.find("adaptation"); it != fits.end()) src.adaptation = it->second;
    if (auto it = fits.find("dynamic"); it != fits.end()) src.dynamic = it->second;
    src.inputs.push_back(c.inject);
    src.label = "injected";
  } else if (!c.fit.empty()) {
    src.adaptation = fit_from_json(csv::read_file(c.fit));
    src.inputs.push_back(c.fit);
    if (!c.dynamic_fit.empty()) {
      src.dynamic = fit_from_json(csv::read_file(c.dynamic_fit));
      src.inputs.push_back(c.dynamic_fit);
    }
    src.label = src.adaptation->spec_name;
  } else {
    throw UsageError("either --fit or --inject is required");
  }
  if (!src.adaptation) throw UsageError("no adaptation coefficients supplied");
  return src;
}

int cmd_ingest(const RunConfig& c, std::ostream& log) {
  if (c.rlr_dir.empty() || c.station_map.empty() || c.econ.empty())
    throw UsageError("ingest needs --rlr-dir, --station-map and --econ");
  std::vector<StationInfo> info;
  if (!c.station_list.empty()) info = parse_station_list(csv::read_file(c.station_list));
  const auto stations = load_rlr_directory(c.rlr_dir, info);
  if (stations.empty()) throw DataError("no stations");
  const auto grouping = map_stations_to_regions(stations, parse_station_map_csv(csv::read_file(c.station_map)));
  if (grouping.groups.empty()) throw DataError("no coastal regions");
  const auto sea = build_region_sea_level(grouping);

  auto econ = parse_econ_csv(csv::read_file(c.econ));
  if (!c.extension.empty()) {
    const auto ext = parse_extension_csv(csv::read_file(c.extension));
    for (auto& series : econ) {
      if (auto it = ext.find(series.region_code); it != ext.end()) series = splice_growth_extension(series, it->second);
    }
  }
  const auto panel = to_decadal_panel(sea, econ, panel_options(c));

  auto prov = provenance("ingest", "", {c.station_map, c.econ, c.extension, c.station_list});
  prov.inputs.emplace(prov.inputs.begin(), "rlr_dir", digest_directory(c.rlr_dir));
  prov.settings = {{"sea_mode", c.sea_mode}, {"fallback_radius", std::to_string(c.fallback_radius)}};

  Outputs out(c.output_dir, log);
  out.write("panel.csv", prov.csv_header() + write_panel_csv(panel));

  std::string sea_csv = prov.csv_header() + "region_code,year,rlr_mm\n";
  for (const auto& [region, series] : sea)
    for (const auto& [year, mm] : series) sea_csv += fmt::format("{},{},{:.17g}\n", region, year, mm);
  out.write("region_sea_level.csv", sea_csv);

  std::set<std::string> used;
  for (const auto& r : panel.rows) used.insert(r.region_code);
  ordered_json report;
  report["provenance"] = {{"command", prov.command}, {"version", prov.version}};
  report["stations_loaded"] = stations.size();
  report["stations_mapped"] = grouping.station_count();
  report["stations_unmapped"] = grouping.unmapped;
  ordered_json regions = ordered_json::array();
  for (const auto& [region, group] : grouping.groups) {
    regions.push_back({{"region_code", region},
                       {"country_code", grouping.region_country.at(region)},
                       {"stations", group.size()},
                       {"used", used.count(region) > 0}});
  }
  report["regions"] = regions;
  std::vector<std::string> excluded;
  for (const auto& e : econ)
    if (!used.count(e.region_code)) excluded.push_back(e.region_code);
  report["regions_excluded"] = excluded;
  report["panel_rows"] = panel.rows.size();
  report["panel_regions"] = used.size();
  report["warnings"] = grouping.warnings;
  report["diagnostics"] = panel.diagnostics;
  out.write("ingest_report.json", report.dump(2) + "\n");
  log << fmt::format("panel: {} rows, {} regions\n", panel.rows.size(), used.size());
  return kExitOk;
}

int cmd_estimate(const RunConfig& c, std::ostream& log) {
  if (c.list_specs) {
    for (const auto& n : spec_names()) log << describe_spec(build_spec(n)) << "\n";
    return kExitOk;
  }
  const auto specs = requested_specs(c, {"adaptation"});
  const auto panel = load_panel(c);
  Outputs out(c.output_dir, log);
  std::vector<FitResult> fits;
  for (const auto& spec : specs) {
    auto fit = fit_panel(spec, panel);
    auto prov = provenance("estimate", spec.name, {c.panel});
    prov.settings = {{"cluster_mode", std::string(to_string(spec.cluster_mode))}};
    out.write("fit_" + spec.name + ".json", fit_to_json(fit, prov));
    out.write("fit_" + spec.name + ".csv", fit_table_csv({fit}, prov));
    fits.push_back(std::move(fit));
  }
  std::string joined;
  for (const auto& s : specs) joined += (joined.empty() ? "" : "+") + s.name;
  out.write("regression_table.csv", fit_table_csv(fits, provenance("estimate", joined, {c.panel})));
  return kExitOk;
}

int cmd_effects(const RunConfig& c, std::ostream& log) {
  const auto src = load_coefficients(c);
  const auto grid = effect_grid(c);
  auto prov = provenance("effects", src.label, src.inputs);
  prov.settings = {{"grid", fmt::format("{}:{}:{}", c.grid_start, c.grid_end, c.grid_step)}};

  const auto curve = effect_curve(*src.adaptation, grid);
  const auto threshold = significance_threshold(curve);
  Outputs out(c.output_dir, log);
  out.write("effect_curve.csv", effect_curve_csv(curve, prov));
  out.write("effect_curve.json", effect_curve_json(curve, threshold, prov));

  ordered_json t;
  t["threshold_mm"] = threshold ? ordered_json(*threshold) : ordered_json("none-found");
  t["grid_min_mm"] = grid.front();
  t["grid_max_mm"] = grid.back();
  t["extrapolation_boundary_mm"] = curve.extrapolation_boundary_mm;
  out.write("threshold.json", t.dump(2) + "\n");

  if (src.dynamic) {
    const auto rows = point_estimate_table(AdaptationCoefficients::from_fit(*src.adaptation),
                                           DynamicCoefficients::from_fit(*src.dynamic));
    out.write("point_estimates.csv", point_table_csv(rows, prov));
  } else {
    log << "no dynamic coefficients: point-estimate table skipped\n";
  }
  log << "threshold: " << (threshold ? fmt::format("{:.0f} mm", *threshold) : std::string("none-found")) << "\n";
  return kExitOk;
}

int cmd_roll(const RunConfig& c, std::ostream& log) {
  const auto specs = requested_specs(c, {"adaptation"});
  const auto panel = load_panel(c);
  Outputs out(c.output_dir, log);
  for (const auto& spec : specs) {
    const auto result = rolling_fit(spec, panel, c.window_points, c.window_step);
    auto prov = provenance("roll", spec.name, {c.panel});
    prov.settings = {{"window_points", std::to_string(c.window_points)},
                     {"step", std::to_string(c.window_step)},
                     {"coefficient", c.coefficient}};
    out.write("rolling_" + spec.name + ".csv", rolling_csv(result, c.coefficient, prov));
  }
  return kExitOk;
}

std::map<std::string, AnnualSeries> read_sea_levels(const std::string& path) {
  const auto table = csv::Table::parse(csv::read_file(path));
  table.require({"region_code", "year", "rlr_mm"});
  std::map<std::string, AnnualSeries> out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto year = static_cast<int>(csv::to_integer(table.at(i, "year"), table.line_of(i), "year"));
    out[table.at(i, "region_code")][year] = csv::to_double(table.at(i, "rlr_mm"), table.line_of(i), "rlr_mm");
  }
  return out;
}

int cmd_project(const RunConfig& c, std::ostream& log) {
  if (c.scenarios.empty()) throw UsageError("--scenarios is required");
  const auto src = load_coefficients(c);
  const auto paths = parse_scenario_csv(csv::read_file(c.scenarios));

  std::vector<std::string> regions;
  for (const auto& p : paths)
    if (std::find(regions.begin(), regions.end(), p.region_code) == regions.end()) regions.push_back(p.region_code);
  std::sort(regions.begin(), regions.end());
  std::vector<std::string> diagnostics;
  std::map<std::string, AnnualSeries> sea;
  if (!c.sea_levels.empty()) sea = read_sea_levels(c.sea_levels);
  const auto base = base_sea_levels(sea, regions, &diagnostics);

  std::vector<ScenarioProjection> projections;
  for (const auto& p : paths) projections.push_back(project_region(*src.adaptation, p, base.at(p.region_code)));

  auto inputs = src.inputs;
  inputs.push_back(c.scenarios);
  if (!c.sea_levels.empty()) inputs.push_back(c.sea_levels);
  auto prov = provenance("project", src.label, inputs);
  prov.settings = {{"top_k", std::to_string(c.top_k)}};
  Outputs out(c.output_dir, log);
  out.write("projections.csv", projections_csv(projections, prov));
  out.write("projections.json", projections_json(projections, prov));

  std::map<ScenarioId, std::vector<ScenarioProjection>> by_scenario;
  for (const auto& p : projections) by_scenario[p.scenario].push_back(p);
  std::vector<ScenarioAggregate> aggregates;
  for (const auto& [id, group] : by_scenario) {
    aggregates.push_back(aggregate_scenario(group));
    const auto k = std::min(c.top_k, group.size());
    out.write("ranking_" + id.label() + ".csv", ranking_csv(id, rank_regions(group, k), prov));
  }
  out.write("aggregates.json", aggregates_json(aggregates, prov));
  for (const auto& d : diagnostics) log << "diagnostic: " << d << "\n";
  return kExitOk;
}

double max_relative_difference(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a(i) - b(i)) / std::max(1.0, std::abs(b(i))));
  return worst;
}

int cmd_validate(const RunConfig& c, std::ostream& log) {
  if (!c.emit_fixtures.empty()) {
    for (const auto& f : emit_fixtures(c.emit_fixtures)) log << "wrote " << f << "\n";
    return kExitOk;
  }
  ordered_json report;
  report["provenance"] = {{"command", "validate"}, {"version", SLRGDP_VERSION}, {"seed", c.seed}};
  ordered_json oracle = ordered_json::array();
  for (const auto& name : spec_names()) {
    const auto spec = build_spec(name);
    double worst = 0.0;
    for (int f = 0; f < c.oracle_fixtures; ++f) {
      SyntheticDGP dgp;
      dgp.n_regions = 40;
      dgp.n_countries = 5;
      dgp.first_year = 1940;
      dgp.seed = mix_seed(c.seed, 7, static_cast<std::uint64_t>(f));
      const auto panel = generate_panel(dgp);
      const auto fit = fit_panel(spec, panel);
      const auto ref = dense_dummy_ols(panel, spec);
      worst = std::max(worst, max_relative_difference(fit.coefficients, ref.coefficients));
    }
    oracle.push_back({{"spec", name}, {"fixtures", c.oracle_fixtures}, {"max_relative_difference", worst}});
  }
  report["oracle"] = oracle;

  SyntheticDGP dgp;
  dgp.seed = c.seed;
  dgp.noise_sd = calibrate_noise_sd(dgp, 0.743);
  auto spec = build_spec("adaptation");
  if (!c.cluster.empty()) spec.cluster_mode = parse_cluster_mode(c.cluster);
  const auto mc = monte_carlo(dgp, spec, c.replications);
  ordered_json coefs = ordered_json::array();
  for (const auto& s : mc.coefficients) {
    coefs.push_back({{"name", s.name},
                     {"truth", s.truth},
                     {"mean", s.mean},
                     {"sd", s.sd},
                     {"mean_se", s.mean_se},
                     {"coverage", s.coverage},
                     {"coverage_normal", s.coverage_normal}});
  }
  report["monte_carlo"] = {{"replications", mc.replications},
                           {"failures", mc.failures},
                           {"noise_sd", dgp.noise_sd},
                           {"cluster_mode", std::string(to_string(spec.cluster_mode))},
                           {"coefficients", coefs}};
  Outputs out(c.output_dir, log);
  out.write("validation.json", report.dump(2) + "\n");
  return kExitOk;
}

void report_error(std::ostream& err, std::string_view kind, const std::string& message, int code,
                  std::optional<std::size_t> line = std::nullopt) {
  ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  if (line) j["line"] = *line;
  j["exit_code"] = code;
  err << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Sea-level rise and regional GDP per capita: ingestion, estimation, effects, projection", "slrgdp"};
  app.set_version_flag("--version", std::string(SLRGDP_VERSION));
  app.set_config("--config", "", "key = value configuration file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("-o,--output-dir", c.output_dir, "Directory for output tables")->capture_default_str();

  auto* ingest = app.add_subcommand("ingest", "Build the decadal panel from RLR files and economic tables");
  ingest->add_option("--rlr-dir", c.rlr_dir, "Directory of <station>.rlrdata files")->check(CLI::ExistingDirectory);
  ingest->add_option("--station-list", c.station_list, "Station list (id; lat; lon; name; ...)")
      ->check(CLI::ExistingFile);
  ingest->add_option("--station-map", c.station_map, "station_id,region_code,country_code CSV")
      ->check(CLI::ExistingFile);
  ingest->add_option("--econ", c.econ, "region_code,country_code,year,gdp,population CSV")->check(CLI::ExistingFile);
  ingest->add_option("--extension", c.extension, "region_code,year,gdp_growth,pop_growth CSV")
      ->check(CLI::ExistingFile);
  ingest->add_option("--sea-mode", c.sea_mode, "point or decade_mean")->capture_default_str();
  ingest->add_option("--fallback-radius", c.fallback_radius, "Years searched around a missing reading")
      ->capture_default_str();

  auto* estimate = app.add_subcommand("estimate", "Fit model specifications on a panel");
  estimate->add_option("--panel", c.panel, "Panel CSV written by ingest")->check(CLI::ExistingFile);
  estimate->add_option("--spec", c.specs, "Model specification (repeatable)");
  estimate->add_option("--cluster", c.cluster, "one_way or two_way (overrides the spec)");
  estimate->add_flag("--list-specs", c.list_specs, "Print the available specifications");

  auto* effects = app.add_subcommand("effects", "Effect curves, point-estimate table and threshold");
  auto* roll = app.add_subcommand("roll", "Rolling-window estimates");
  auto* project = app.add_subcommand("project", "Regional projections to 2100");
  auto* validate = app.add_subcommand("validate", "Oracle and Monte Carlo checks on synthetic panels");

  for (auto* sub : {effects, project}) {
    sub->add_option("--fit", c.fit, "Adaptation fit JSON written by estimate")->check(CLI::ExistingFile);
    sub->add_option("--inject", c.inject, "Coefficient file (spec.name = value)")->check(CLI::ExistingFile);
  }
  effects->add_option("--dynamic-fit", c.dynamic_fit, "Dynamic fit JSON for the point-estimate table")
      ->check(CLI::ExistingFile);
  effects->add_option("--grid-start", c.grid_start, "First sea level in mm")->capture_default_str();
  effects->add_option("--grid-end", c.grid_end, "Last sea level in mm")->capture_default_str();
  effects->add_option("--grid-step", c.grid_step, "Grid step in mm")->capture_default_str();

  roll->add_option("--panel", c.panel, "Panel CSV written by ingest")->check(CLI::ExistingFile);
  roll->add_option("--spec", c.specs, "Model specification (repeatable)");
  roll->add_option("--cluster", c.cluster, "one_way or two_way (overrides the spec)");
  roll->add_option("--window", c.window_points, "Grid years per window")->capture_default_str();
  roll->add_option("--step", c.window_step, "Grid years between windows")->capture_default_str();
  roll->add_option("--coefficient", c.coefficient, "Coefficient reported per window")->capture_default_str();

  project->add_option("--scenarios", c.scenarios, "Scenario path CSV")->check(CLI::ExistingFile);
  project->add_option("--sea-levels", c.sea_levels, "region_sea_level.csv written by ingest")
      ->check(CLI::ExistingFile);
  project->add_option("--top-k", c.top_k, "Regions per ranking list")->capture_default_str();

  validate->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  validate->add_option("--reps", c.replications, "Monte Carlo replications")->capture_default_str();
  validate->add_option("--oracle-fixtures", c.oracle_fixtures, "Synthetic panels per spec for the oracle check")
      ->capture_default_str();
  validate->add_option("--cluster", c.cluster, "one_way or two_way for the Monte Carlo fits");
  validate->add_option("--emit-fixtures", c.emit_fixtures, "Write the fixture corpus to this directory and exit");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what(), kExitUsage);
    return kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(c, out);
    if (*estimate) return cmd_estimate(c, out);
    if (*effects) return cmd_effects(c, out);
    if (*roll) return cmd_roll(c, out);
    if (*project) return cmd_project(c, out);
    if (*validate) return cmd_validate(c, out);
  } catch (const UsageError& e) {
    report_error(err, "usage", e.what(), kExitUsage);
    return kExitUsage;
  } catch (const ParseError& e) {
    report_error(err, "parse", e.what(), kExitData, e.line());
    return kExitData;
  } catch (const DataError& e) {
    report_error(err, "data", e.what(), kExitData);
    return kExitData;
  } catch (const NumericalError& e) {
    report_error(err, "numerical", e.what(), kExitNumerical);
    return kExitNumerical;
  } catch (const Error& e) {
    report_error(err, "error", e.what(), kExitData);
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    report_error(err, "data", e.what(), kExitData);
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace slrgdp::cli
