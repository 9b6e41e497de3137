#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "emato/error.hpp"
#include "emato/optimizer/problem.hpp"
#include "emato/powertrain/fuel_fit.hpp"
#include "emato/powertrain/io.hpp"
#include "emato/scenarios/runner.hpp"

namespace emato::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using scenarios::RunResult;
using scenarios::ScenarioConfig;

namespace {

constexpr const char* kToolVersion = "1.0.0";

// Writes through a temporary file so readers never see a partial artifact.
void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// FNV-1a over the file bytes.
std::string file_hash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "";
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  std::ostringstream s;
  s << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

fs::path resolve_config(const std::string& path) {
  if (path.empty() || fs::exists(path)) return path;
  if (const char* dir = std::getenv("EMATO_CONFIG_DIR")) {
    const fs::path p = fs::path(dir) / path;
    if (fs::exists(p)) return p;
  }
  throw InvalidSpec("config file not found: " + path);
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpec("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidSpec(path.string() + ": " + e.what());
  }
}

// Explicit --config, else <scenario>.json under EMATO_CONFIG_DIR, else defaults.
std::pair<ScenarioConfig, fs::path> load_config(const std::string& explicit_path,
                                                const std::string& scenario) {
  fs::path path;
  if (!explicit_path.empty()) {
    path = resolve_config(explicit_path);
  } else if (const char* dir = std::getenv("EMATO_CONFIG_DIR")) {
    const fs::path p = fs::path(dir) / (scenario + ".json");
    if (fs::exists(p)) path = p;
  }
  if (path.empty()) return {ScenarioConfig{}, path};
  return {scenarios::config_from_json(read_json(path)), path};
}

scenarios::DrivingCycle load_cycle(const std::string& name_or_path, json& hashes) {
  if (fs::exists(name_or_path)) {
    hashes[name_or_path] = file_hash(name_or_path);
    return scenarios::DrivingCycle::from_csv(name_or_path);
  }
  return scenarios::DrivingCycle::by_name(name_or_path);
}

void set_vehicle(ScenarioConfig& c, const std::string& v) {
  c.vehicle = v;
  c.params = dynamics::VehicleParams::by_name(v);
}

void set_slope(ScenarioConfig& c, const std::string& s) {
  c.slope_name = s;
  c.slope_file.clear();
  c.slope = dynamics::SlopeProfile::by_name(s);
}

std::string default_algo(const std::string& scenario) {
  if (scenario == "png") return "png";
  if (scenario == "acc") return "emato-b";
  return "emato-fm";
}

bool algo_matches(const std::string& scenario, const std::string& algo) {
  static const std::vector<std::string> png{"cc", "png", "energy-quintic"};
  static const std::vector<std::string> acc{"quintic", "emato-b", "emato-r", "emato-v"};
  static const std::vector<std::string> fr{"qf-v", "qf-m", "qf-e", "emato-fv", "emato-fm", "emato-fe"};
  const auto& set = scenario == "png" ? png : scenario == "acc" ? acc : fr;
  return std::find(set.begin(), set.end(), algo) != set.end();
}

std::string csv_of(const std::vector<std::pair<double, double>>& xy, const char* header) {
  std::ostringstream s;
  s << header << '\n' << std::setprecision(10);
  for (const auto& [x, y] : xy) s << x << ',' << y << '\n';
  return s.str();
}

std::string events_csv(const RunResult& r) {
  std::ostringstream s;
  s << "t,kind,detail\n";
  for (const auto& e : r.events) {
    std::string d = e.detail;
    for (auto& ch : d)
      if (ch == ',' || ch == '\n') ch = ';';
    s << e.t << ',' << e.kind << ',' << d << '\n';
  }
  return s.str();
}

const char* kPlotScript = R"(set datafile separator ','
set key autotitle columnhead
set terminal pngcairo size 1200,900
set output 'panels.png'
set multiplot layout 2,2
set title 'speed'; set xlabel 'l (m)'; set ylabel 'v (m/s)'
plot 'speed_vs_l.csv' using 1:2 with lines
set title 'elevation'; set xlabel 's (m)'; set ylabel 'h (m)'
plot 'elevation_vs_s.csv' using 1:2 with lines
set title 'fuel rate'; set xlabel 't (s)'; set ylabel 'f_r (mL/s)'
plot 'fuel_vs_t.csv' using 1:2 with lines
set title 'gap / clearance'; set xlabel 't (s)'; set ylabel 'm'
plot 'gap_vs_t.csv' using 1:2 with lines
unset multiplot
)";

// Metrics, trajectory, events and plot data of one run under dir.
std::vector<std::string> write_run(const fs::path& dir, const RunResult& r,
                                   const ScenarioConfig& cfg) {
  std::vector<std::string> files;
  auto put = [&](const std::string& name, const std::string& content) {
    write_atomic(dir / name, content);
    files.push_back((dir / name).string());
  };
  put("metrics.json", dump(scenarios::metrics_json(r)));
  put("run.json", dump(scenarios::run_json(r)));
  std::ostringstream steps;
  scenarios::write_steps_csv(steps, r);
  put("steps.csv", steps.str());
  put("events.csv", events_csv(r));

  std::vector<std::pair<double, double>> v_l, h_s, f_t, g_t;
  for (const auto& s : r.steps) {
    v_l.emplace_back(s.l, s.v);
    h_s.emplace_back(s.s, cfg.slope.elevation(s.s));
    f_t.emplace_back(s.t, s.f_r);
  }
  const auto& side = r.gap.empty() ? r.clearance : r.gap;
  for (std::size_t k = 0; k < side.size() && k < r.steps.size(); ++k)
    g_t.emplace_back(r.steps[k].t, side[k]);
  put("speed_vs_l.csv", csv_of(v_l, "l,v"));
  put("elevation_vs_s.csv", csv_of(h_s, "s,elevation"));
  put("fuel_vs_t.csv", csv_of(f_t, "t,f_r"));
  put("gap_vs_t.csv", csv_of(g_t, r.gap.empty() ? "t,clearance" : "t,gap"));
  put("plot.gp", kPlotScript);
  return files;
}

void print_metrics(const RunResult& r) {
  const auto& m = r.metrics;
  std::printf("%-15s distance %.1f m  time %.1f s  fuel %.3f mL  mpg %.3f  msj %.4f", r.algorithm.c_str(),
              m.distance, m.duration, m.total_fuel, m.mpg, m.mean_sq_jerk);
  if (!r.solves.empty()) std::printf("  solve %.2f ms", 1e3 * r.mean_solve_time());
  if (!r.events.empty()) std::printf("  events %zu", r.events.size());
  std::printf("\n");
}

std::vector<std::string> json_strings(const json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) throw InvalidSpec(std::string(key) + " must be a list");
  for (const auto& x : j.at(key)) out.push_back(x.get<std::string>());
  return out;
}

}  // namespace

int cmd_fit(const FitOptions& o) {
  namespace pt = powertrain;
  json report;
  json hashes = json::object();
  pt::FuelCoeffs coeffs;
  if (o.use_appendix) {
    coeffs = o.vehicle == "sedan" ? pt::FuelCoeffs::sedan_appendix()
                                  : pt::FuelCoeffs::truck_appendix_printed();
    if (o.vehicle != "sedan" && o.vehicle != "truck")
      throw InvalidSpec("unknown vehicle '" + o.vehicle + "'");
    report = {{"source", "appendix"}, {"vehicle", o.vehicle}};
    std::printf("appendix coefficients for %s\n", o.vehicle.c_str());
  } else {
    auto p = o.vehicle == "sedan" ? pt::FitPipeline::sedan() : pt::FitPipeline::light_truck();
    if (o.vehicle != "sedan" && o.vehicle != "truck")
      throw InvalidSpec("unknown vehicle '" + o.vehicle + "'");
    if (!o.spec.empty()) {
      const auto path = resolve_config(o.spec);
      hashes[path.string()] = file_hash(path);
      const auto j = read_json(path);
      try {
        if (j.contains("map")) p.map = pt::map_spec_from_json(j.at("map"));
        if (j.contains("transmission")) p.transmission = pt::transmission_from_json(j.at("transmission"));
        if (j.contains("grid")) {
          const auto& g = j.at("grid");
          p.grid = pt::PolicyGrid::uniform(g.at("v_lo"), g.at("v_hi"), g.at("n_v"), g.at("a_lo"),
                                           g.at("a_hi"), g.at("n_a"));
        }
        p.mass = j.value("mass", p.mass);
        p.fuel_density = j.value("fuel_density", p.fuel_density);
        p.holdout_fraction = j.value("holdout_fraction", p.holdout_fraction);
        p.seed = j.value("seed", p.seed);
      } catch (const json::exception& e) {
        throw InvalidSpec(std::string("fit spec: ") + e.what());
      }
    }
    p.map.validate();
    p.transmission.validate();
    const auto r = pt::run_fit_pipeline(p);
    coeffs = r.fit.coeffs;
    report = {{"source", "fit"},
              {"vehicle", o.vehicle},
              {"train_accuracy_pct", r.fit.accuracy_pct},
              {"holdout_accuracy_pct", r.holdout_accuracy_pct},
              {"rms_error_ml_s", r.fit.rms_error},
              {"n_train", r.n_train},
              {"n_holdout", r.n_holdout},
              {"feasible_cells", r.feasible_cells},
              {"map", pt::to_json(p.map)},
              {"transmission", pt::to_json(p.transmission)}};
    std::printf("fit on %zu samples, holdout %zu: accuracy %.2f%% (train %.2f%%)\n", r.n_train,
                r.n_holdout, r.holdout_accuracy_pct, r.fit.accuracy_pct);
  }
  std::printf("o = [%.6g, %.6g, %.6g, %.6g, %.6g]  c = [%.6g, %.6g, %.6g]\n", coeffs.o[0],
              coeffs.o[1], coeffs.o[2], coeffs.o[3], coeffs.o[4], coeffs.c[0], coeffs.c[1],
              coeffs.c[2]);
  const fs::path out = o.out;
  write_atomic(out / "coeffs.json", dump(pt::to_json(coeffs)));
  write_atomic(out / "fit_report.json", dump(report));
  json manifest = {{"tool_version", kToolVersion},
                   {"command", "fit"},
                   {"config_path", o.spec},
                   {"input_hashes", hashes},
                   {"outputs", {(out / "coeffs.json").string(), (out / "fit_report.json").string()}}};
  write_atomic(out / "manifest.json", dump(manifest));
  return kOk;
}

int cmd_run(const RunOptions& o) {
  if (o.scenario != "png" && o.scenario != "acc" && o.scenario != "frenet")
    throw InvalidSpec("scenario must be png, acc or frenet");
  auto [cfg, cfg_path] = load_config(o.config, o.scenario);
  json hashes = json::object();
  if (!cfg_path.empty()) hashes[cfg_path.string()] = file_hash(cfg_path);
  if (o.vehicle) set_vehicle(cfg, *o.vehicle);
  if (o.slope) set_slope(cfg, *o.slope);
  if (o.algo) cfg.algorithm = *o.algo;
  if (!algo_matches(o.scenario, cfg.algorithm)) {
    if (o.algo) throw InvalidSpec("algorithm '" + cfg.algorithm + "' does not belong to " + o.scenario);
    cfg.algorithm = default_algo(o.scenario);
  }
  if (o.cycle) cfg.cycle = *o.cycle;
  if (o.distance) (o.scenario == "png" ? cfg.png.distance : cfg.frenet.distance) = *o.distance;
  if (o.seed) cfg.seed = *o.seed;
  cfg.validate();

  const fs::path out = o.out;
  std::vector<std::string> files;
  json summary;
  int status = kOk;
  if (o.scenario == "png") {
    const auto all = scenarios::run_cc_png(cfg);
    for (const auto* r : {&all.cc, &all.emato, &all.energy_quintic}) {
      print_metrics(*r);
      const auto f = write_run(out / r->algorithm, *r, cfg);
      files.insert(files.end(), f.begin(), f.end());
      summary["runs"][r->algorithm] = scenarios::metrics_json(*r);
    }
    const double cc = all.cc.metrics.total_fuel, em = all.emato.metrics.total_fuel;
    summary["fuel_saving_vs_cc_pct"] = 100.0 * (1.0 - em / cc);
    summary["speed_extrema"] = [&] {
      std::vector<double> v;
      for (const auto& s : all.emato.steps) v.push_back(s.v);
      return scenarios::count_extrema(v);
    }();
    std::printf("EMATO saves %.2f%% fuel against CC\n", summary["fuel_saving_vs_cc_pct"].get<double>());
  } else {
    const auto cycle = load_cycle(cfg.cycle, hashes);
    const auto r = scenarios::run_scenario(cfg, cycle);
    print_metrics(r);
    files = write_run(out, r, cfg);
    summary = scenarios::metrics_json(r);
    if (o.scenario == "acc" && r.gap_violations > 0) {
      std::fprintf(stderr, "warning: %d gap violations\n", r.gap_violations);
      status = kRuntimeFailure;
    }
    if (o.scenario == "frenet" && r.collisions > 0) {
      std::fprintf(stderr, "warning: %d collision steps\n", r.collisions);
      status = kRuntimeFailure;
    }
    if (r.count_events("time-budget") > 0)
      std::fprintf(stderr, "warning: distance budget not reached\n");
  }
  write_atomic(out / "summary.json", dump(summary));
  files.push_back((out / "summary.json").string());
  json manifest = {{"tool_version", kToolVersion},
                   {"command", "run " + o.scenario},
                   {"config_path", cfg_path.string()},
                   {"config", scenarios::config_to_json(cfg)},
                   {"input_hashes", hashes},
                   {"outputs", files}};
  write_atomic(out / "manifest.json", dump(manifest));
  return status;
}

int cmd_matrix(const MatrixOptions& o) {
  std::string scenario = o.scenario;
  auto vehicles = o.vehicles, slopes = o.slopes, algos = o.algos;
  json hashes = json::object();
  std::string config = o.config;
  if (!o.spec.empty()) {
    const auto path = resolve_config(o.spec);
    hashes[path.string()] = file_hash(path);
    const auto j = read_json(path);
    try {
      scenario = j.value("scenario", scenario);
      if (vehicles.empty()) vehicles = json_strings(j, "vehicles");
      if (slopes.empty()) slopes = json_strings(j, "slopes");
      if (algos.empty()) algos = json_strings(j, "algorithms");
      if (config.empty()) {
        config = j.value("config", std::string());
        const auto beside = path.parent_path() / config;
        if (!config.empty() && !fs::exists(config) && fs::exists(beside)) config = beside.string();
      }
    } catch (const json::exception& e) {
      throw InvalidSpec(std::string("matrix spec: ") + e.what());
    }
  } else {
    const bool is_acc = scenario == "acc";
    const auto full = is_acc ? scenarios::acc_matrix() : scenarios::frenet_matrix();
    auto unique = [&](auto field) {
      std::vector<std::string> v;
      for (const auto& c : full)
        if (std::find(v.begin(), v.end(), c.*field) == v.end()) v.push_back(c.*field);
      return v;
    };
    if (vehicles.empty()) vehicles = unique(&scenarios::MatrixCell::vehicle);
    if (slopes.empty()) slopes = unique(&scenarios::MatrixCell::slope);
    if (algos.empty()) algos = unique(&scenarios::MatrixCell::algorithm);
  }
  if (scenario != "acc" && scenario != "frenet") throw InvalidSpec("matrix scenario must be acc or frenet");
  const auto cells = scenarios::make_matrix(scenario, vehicles, slopes, algos);
  if (cells.empty()) throw InvalidSpec("empty matrix");
  for (const auto& c : cells)
    if (!algo_matches(scenario, c.algorithm))
      throw InvalidSpec("algorithm '" + c.algorithm + "' does not belong to " + scenario);

  auto [base, cfg_path] = load_config(config, scenario);
  if (!cfg_path.empty()) hashes[cfg_path.string()] = file_hash(cfg_path);
  if (o.cycle) base.cycle = *o.cycle;
  base.validate();
  const auto cycle = load_cycle(base.cycle, hashes);

  std::printf("running %zu cells\n", cells.size());
  const auto results = scenarios::run_matrix(cells, base, cycle, o.jobs);

  const fs::path out = o.out;
  std::vector<std::string> files;
  std::ostringstream table;
  table << "key,ok,mpg,total_fuel_ml,distance_m,avg_speed,mean_sq_jerk,events,collisions,"
           "gap_violations,mean_solve_ms,error\n";
  int failed = 0;
  for (const auto& r : results) {
    std::string key = r.cell.key();
    std::string err = r.error;
    for (auto& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    const auto& m = r.run.metrics;
    table << key << ',' << (r.ok ? 1 : 0) << ',' << m.mpg << ',' << m.total_fuel << ','
          << m.distance << ',' << m.avg_speed << ',' << m.mean_sq_jerk << ','
          << r.run.events.size() << ',' << r.run.collisions << ',' << r.run.gap_violations << ','
          << 1e3 * r.run.mean_solve_time() << ',' << err << '\n';
    if (!r.ok) {
      ++failed;
      std::fprintf(stderr, "cell %s failed: %s\n", key.c_str(), r.error.c_str());
      continue;
    }
    for (auto& ch : key)
      if (ch == '/') ch = '_';
    const auto f = out / "cells" / (key + ".json");
    write_atomic(f, dump(scenarios::metrics_json(r.run)));
    files.push_back(f.string());
  }
  write_atomic(out / "cells.csv", table.str());
  std::ostringstream imp;
  scenarios::write_improvement_csv(imp, results);
  write_atomic(out / "improvements.csv", imp.str());
  files.push_back((out / "cells.csv").string());
  files.push_back((out / "improvements.csv").string());
  std::cout << imp.str();
  json manifest = {{"tool_version", kToolVersion},
                   {"command", "matrix " + scenario},
                   {"config_path", cfg_path.string()},
                   {"config", scenarios::config_to_json(base)},
                   {"input_hashes", hashes},
                   {"outputs", files}};
  write_atomic(out / "manifest.json", dump(manifest));
  if (failed > 0) {
    std::fprintf(stderr, "%d of %zu cells failed\n", failed, cells.size());
    return kRuntimeFailure;
  }
  return kOk;
}

int cmd_check(const std::string& kind) {
  bool ok = true;
  if (kind == "gradients") {
    for (const char* name : {"sedan", "truck"}) {
      const auto params = dynamics::VehicleParams::by_name(name);
      for (unsigned seed = 1; seed <= 5; ++seed) {
        const auto problem = optimizer::random_bvp(params, seed);
        const auto rep = optimizer::check_gradients(problem, optimizer::random_point(problem, seed));
        std::printf("%-6s seed %u  objective %.2e  jacobian %.2e  hessian %.2e  %s\n", name, seed,
                    rep.objective_rel_err, rep.jacobian_rel_err, rep.hessian_rel_err,
                    rep.passed ? "ok" : "FAIL");
        ok = ok && rep.passed;
      }
    }
  } else if (kind == "units") {
    const powertrain::FuelCoeffs k;
    const double c_u = k.unit_const();
    // 1 kW at 200 g/kWh is 1/18 g/s.
    const double ml_s = 1000.0 * 200.0 / c_u;
    const double expect = (200.0 / 3600.0) / k.fuel_density;
    const double mpg = scenarios::mpg_from_ml_per_m(1.0);
    const double mpg_expect = scenarios::kGallonMl / scenarios::kMileM;
    std::printf("c_u = %.1f  (density * 1000 * 3600 = %.1f)\n", c_u, k.fuel_density * 3.6e6);
    std::printf("1 kW at 200 g/kWh = %.9f mL/s (expected %.9f)\n", ml_s, expect);
    std::printf("1 mL/m = %.6f mpg (expected %.6f)\n", mpg, mpg_expect);
    ok = std::abs(c_u - k.fuel_density * 3.6e6) < 1e-9 && std::abs(ml_s - expect) < 1e-12 &&
         std::abs(mpg - mpg_expect) < 1e-12;
  } else if (kind == "quintic") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-10.0, 10.0), dur(0.5, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const polytraj::BoundaryState a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
      const double T = dur(rng);
      const auto q = polytraj::quintic_fit(a, b, T);
      const auto s0 = q.state(0.0), s1 = q.state(T);
      for (const double e : {s0.p - a.p, s0.dp - a.dp, s0.ddp - a.ddp, s1.p - b.p, s1.dp - b.dp,
                             s1.ddp - b.ddp})
        worst = std::max(worst, std::abs(e));
    }
    std::printf("1000 boundary reproductions, worst error %.3e\n", worst);
    ok = worst <= 1e-9;
  } else {
    throw InvalidSpec("check kind must be gradients, units or quintic");
  }
  std::printf("%s\n", ok ? "PASS" : "FAIL");
  return ok ? kOk : kRuntimeFailure;
}

int cmd_export_cycle(const std::string& name, const std::string& out) {
  const auto cycle = scenarios::DrivingCycle::by_name(name);
  std::ostringstream s;
  cycle.write_csv(s);
  if (out.empty() || out == "-") {
    std::cout << s.str();
  } else {
    write_atomic(out, s.str());
    std::printf("%s: %.0f s, %.1f m\n", name.c_str(), cycle.total_time(), cycle.total_distance());
  }
  return kOk;
}

}  // namespace emato::cli
