// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <string>

#include "emato/dynamics/vehicle_params.hpp"
#include "emato/optimizer/problem.hpp"
#include "emato/powertrain/fuel_fit.hpp"
#include "emato/powertrain/fuel_model.hpp"
#include "emato/scenarios/config.hpp"
#include "emato/scenarios/cycle.hpp"
#include "emato/scenarios/metrics.hpp"
#include "emato/scenarios/runner.hpp"

using namespace emato;
using namespace emato::scenarios;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Outcome fit_accuracy() {
  const auto t0 = Clock::now();
  const auto r = powertrain::run_fit_pipeline(powertrain::FitPipeline::light_truck());
  const double dt = seconds_since(t0);
  return {r.holdout_accuracy_pct >= 95.0 && dt < 5.0,
          fmt("holdout accuracy %.2f%% (>= 95), n_holdout %zu, %.2f s (< 5)",
              r.holdout_accuracy_pct, r.n_holdout, dt)};
}

Outcome exact_recovery() {
  const auto t0 = Clock::now();
  const auto truth = powertrain::FuelCoeffs::truck_appendix_printed();
  std::vector<powertrain::FitSample> s;
  for (double v = 1.0; v <= 27.0; v += 0.5)
    for (double a = 0.0; a <= 3.0; a += 0.25) s.push_back({v, a, powertrain::fuel_rate(truth, v, a)});
  const auto fit = powertrain::fit_fuel_model(s);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) worst = std::max(worst, rel(fit.coeffs.o[i], truth.o[i]));
  for (int i = 0; i < 3; ++i) worst = std::max(worst, rel(fit.coeffs.c[i], truth.c[i]));
  const double dt = seconds_since(t0);
  return {worst <= 1e-6 && dt < 1.0,
          fmt("max relative coefficient error %.3e (<= 1e-6), %.3f s (< 1)", worst, dt)};
}

Outcome gradient_oracle() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& p : {dynamics::VehicleParams::sedan(), dynamics::VehicleParams::truck()})
    for (unsigned seed = 1; seed <= 5; ++seed) {
      const auto prob = optimizer::random_bvp(p, seed);
      const auto r = optimizer::check_gradients(prob, optimizer::random_point(prob, seed), 1e-5);
      worst = std::max({worst, r.objective_rel_err, r.jacobian_rel_err, r.hessian_rel_err});
    }
  const double dt = seconds_since(t0);
  return {worst <= 1e-5 && dt < 30.0,
          fmt("10 problems, max relative derivative error %.3e (<= 1e-5), %.2f s (< 30)", worst,
              dt)};
}

std::string png_metrics_text(const PngResults& r) {
  nlohmann::json j{{"cc", metrics_json(r.cc)},
                   {"emato", metrics_json(r.emato)},
                   {"energy_quintic", metrics_json(r.energy_quintic)}};
  return j.dump();
}

ScenarioConfig png_config() {
  auto cfg = make_config("truck", "flat", "png");
  cfg.png.distance = 900.0;
  cfg.png.v_d = 20.0;
  cfg.png.replan_distance = 150.0;
  return cfg;
}

Outcome pnG_reproduction(std::string& metrics_out) {
  const auto t0 = Clock::now();
  const auto r = run_cc_png(png_config());
  const double dt = seconds_since(t0);
  metrics_out = png_metrics_text(r);
  const double fe = r.emato.metrics.total_fuel, fc = r.cc.metrics.total_fuel,
               fq = r.energy_quintic.metrics.total_fuel;
  std::vector<double> v;
  for (const auto& s : r.emato.steps) v.push_back(s.v);
  const int ext = count_extrema(v);
  const bool same_dist = std::abs(r.emato.metrics.distance - r.cc.metrics.distance) < 1e-6 &&
                         std::abs(r.energy_quintic.metrics.distance - r.cc.metrics.distance) < 1e-6;
  const bool order = fe < fc && fc <= fq * 1.01;
  return {order && same_dist && ext >= 3 && dt < 60.0,
          fmt("fuel EMATO %.3f < CC %.3f <~ energy-quintic %.3f mL, distance %.3f m, %d extrema "
              "(>= 3), %.2f s (< 60)",
              fe, fc, fq, r.cc.metrics.distance, ext, dt)};
}

struct AccRuns {
  std::map<std::string, CellResult> cells;  // keyed by slope/algorithm
  double seconds = 0.0;
};

AccRuns acc_runs() {
  const auto t0 = Clock::now();
  std::vector<MatrixCell> cells = make_matrix("acc", {"truck"}, {"flat"},
                                              {"quintic", "emato-b", "emato-r", "emato-v"});
  for (const char* s : {"rolling", "steep"}) cells.push_back({"acc", "truck", s, "emato-b"});
  const auto res = run_matrix(cells, make_config("truck", "flat", "quintic"),
                              DrivingCycle::highway_short());
  AccRuns out;
  for (const auto& r : res) out.cells[r.cell.slope + "/" + r.cell.algorithm] = r;
  out.seconds = seconds_since(t0);
  return out;
}

Outcome acc_improvement(const AccRuns& runs) {
  for (const auto& [k, c] : runs.cells)
    if (!c.ok) return {false, "run " + k + " failed: " + c.error};
  const auto mpg = [&](const char* a) { return runs.cells.at(std::string("flat/") + a).run.metrics.mpg; };
  const double q = mpg("quintic"), b = mpg("emato-b"), r = mpg("emato-r"), v = mpg("emato-v");
  double min_gap = 1e300;
  int violations = 0;
  for (const char* a : {"quintic", "emato-b", "emato-r", "emato-v"}) {
    const auto& run = runs.cells.at(std::string("flat/") + a).run;
    min_gap = std::min(min_gap, run.min_gap());
    violations += run.gap_violations;
  }
  const bool margin = b >= 1.02 * q;
  const bool order = v >= 0.99 * r && r >= 0.99 * b;
  const bool gap = violations == 0 && min_gap >= 50.0 - 1e-6;
  return {margin && order && gap && runs.seconds < 600.0,
          fmt("mpg quintic %.3f, B %.3f (%+.2f%%, need >= +2%%), R %.3f, V %.3f (V>=R>=B within "
              "1%%: %s), min gap %.2f m (>= 50), %.1f s (< 600)",
              q, b, 100.0 * (b / q - 1.0), r, v, order ? "yes" : "no", min_gap, runs.seconds)};
}

Outcome solver_performance(const AccRuns& runs) {
  double total = 0.0;
  std::size_t n = 0;
  for (const char* a : {"emato-b", "emato-r", "emato-v"})
    for (const auto& s : runs.cells.at(std::string("flat/") + a).run.solves) {
      total += s.wall_time;
      ++n;
    }
  const double mean = n ? total / static_cast<double>(n) : 0.0;
  return {n > 0 && mean <= 0.1, fmt("%zu solves, mean %.2f ms (<= 100)", n, 1e3 * mean)};
}

Outcome slope_monotonicity(const AccRuns& runs) {
  const auto mpg = [&](const char* s) {
    return runs.cells.at(std::string(s) + "/emato-b").run.metrics.mpg;
  };
  const double f = mpg("flat"), r = mpg("rolling"), s = mpg("steep");
  return {f >= r && r >= s, fmt("EMATO-B mpg flat %.3f >= rolling %.3f >= steep %.3f", f, r, s)};
}

Outcome frenet_improvement() {
  const auto t0 = Clock::now();
  const auto cells = make_matrix("frenet", {"truck"}, {"flat"},
                                 {"qf-v", "qf-m", "qf-e", "emato-fv", "emato-fm", "emato-fe"});
  auto base = make_config("truck", "flat", "qf-m");
  base.frenet.distance = 2200.0;
  const auto res = run_matrix(cells, base, DrivingCycle::highway_short());
  const double dt = seconds_since(t0);
  std::map<std::string, const CellResult*> by;
  int collisions = 0;
  for (const auto& r : res) {
    if (!r.ok) return {false, r.cell.algorithm + " failed: " + r.error};
    by[r.cell.algorithm] = &r;
    collisions += r.run.collisions;
  }
  const double qm = by["qf-m"]->run.metrics.mpg, fm = by["emato-fm"]->run.metrics.mpg;
  return {fm >= 1.10 * qm && collisions == 0 && dt < 600.0,
          fmt("mpg QF-M %.3f, EMATO-FM %.3f (%+.2f%%, need >= +10%%), collisions %d (== 0), "
              "%.1f s (< 600)",
              qm, fm, 100.0 * (fm / qm - 1.0), collisions, dt)};
}

Outcome ablation() {
  const auto t0 = Clock::now();
  const auto cycle = DrivingCycle::highway_short();
  std::map<std::string, Metrics> m;
  const std::pair<const char*, polytraj::Weights> sets[] = {
      {"holistic", polytraj::Weights::holistic()},
      {"general", polytraj::Weights::general()},
      {"jerk", polytraj::Weights::jerk_only()},
      {"efficiency", polytraj::Weights::efficiency()}};
  for (const auto& [name, w] : sets) {
    auto cfg = make_config("truck", "flat", "emato-r");
    cfg.weights = w;
    m[name] = run_acc(cfg, cycle).metrics;
  }
  const double dt = seconds_since(t0);
  const bool order = m["holistic"].mpg >= m["general"].mpg && m["general"].mpg >= m["jerk"].mpg;
  const bool smooth = m["holistic"].mean_sq_jerk * 10.0 <= m["efficiency"].mean_sq_jerk;
  return {order && smooth && dt < 600.0,
          fmt("mpg holistic %.3f >= general %.3f >= jerk %.3f; msj holistic %.4f vs efficiency "
              "%.4f (ratio %.1f, need >= 10), %.1f s (< 600)",
              m["holistic"].mpg, m["general"].mpg, m["jerk"].mpg, m["holistic"].mean_sq_jerk,
              m["efficiency"].mean_sq_jerk,
              m["efficiency"].mean_sq_jerk / std::max(m["holistic"].mean_sq_jerk, 1e-300), dt)};
}

Outcome determinism(const std::string& first) {
  std::string second = png_metrics_text(run_cc_png(png_config()));
  return {first == second, fmt("repeated PnG metrics JSON %s (%zu bytes)",
                               first == second ? "byte-identical" : "differs", first.size())};
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int n, const char* name, const Outcome& o) {
    std::printf("criterion %d: %s %s: %s\n", n, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };

  report(1, "fuel-model fit", guarded(fit_accuracy));
  report(2, "exact recovery", guarded(exact_recovery));
  report(3, "gradient oracle", guarded(gradient_oracle));
  std::string png_text;
  report(4, "pulse-and-glide", guarded([&] { return pnG_reproduction(png_text); }));

  AccRuns acc;
  Outcome acc_error{true, ""};
  try {
    acc = acc_runs();
  } catch (const std::exception& e) {
    acc_error = {false, std::string("exception: ") + e.what()};
  }
  const auto with_acc = [&](Outcome (*f)(const AccRuns&)) {
    return acc_error.pass ? guarded([&] { return f(acc); }) : acc_error;
  };
  report(5, "ACC improvement", with_acc(acc_improvement));
  report(6, "Frenet improvement", guarded(frenet_improvement));
  report(7, "ablation ordering", guarded(ablation));
  report(8, "solver performance", with_acc(solver_performance));
  report(9, "slope monotonicity", with_acc(slope_monotonicity));
  report(10, "determinism",
         png_text.empty() ? Outcome{false, "criterion 4 produced no metrics"}
                          : guarded([&] { return determinism(png_text); }));

  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
