#include <algorithm>
#include <array>
#include <ostream>

#include <omp.h>

#include "emato/error.hpp"
#include "emato/scenarios/runner.hpp"

namespace emato::scenarios {

namespace {

constexpr std::array kPngAlgos{"cc", "png", "energy-quintic"};
constexpr std::array kAccAlgos{"quintic", "emato-b", "emato-r", "emato-v"};
constexpr std::array kFrenetAlgos{"qf-v", "qf-m", "qf-e", "emato-fv", "emato-fm", "emato-fe"};

template <std::size_t N>
bool among(const std::array<const char*, N>& names, const std::string& a) {
  return std::find(names.begin(), names.end(), a) != names.end();
}

ScenarioConfig cell_config(const MatrixCell& cell, const ScenarioConfig& base) {
  ScenarioConfig c = base;
  if (cell.vehicle != c.vehicle) {
    c.vehicle = cell.vehicle;
    c.params = dynamics::VehicleParams::by_name(cell.vehicle);
  }
  if (cell.slope != c.slope_name) {
    c.slope_name = cell.slope;
    c.slope = dynamics::SlopeProfile::by_name(cell.slope);
  }
  c.algorithm = cell.algorithm;
  return c;
}

CellResult run_cell(const MatrixCell& cell, const ScenarioConfig& base, const DrivingCycle& cycle) {
  CellResult out;
  out.cell = cell;
  try {
    out.run = run_scenario(cell_config(cell, base), cycle);
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const DrivingCycle& cycle) {
  const auto& a = cfg.algorithm;
  if (among(kPngAlgos, a)) {
    auto all = run_cc_png(cfg);
    if (a == "cc") return std::move(all.cc);
    if (a == "png") return std::move(all.emato);
    return std::move(all.energy_quintic);
  }
  if (among(kAccAlgos, a)) return run_acc(cfg, cycle);
  if (among(kFrenetAlgos, a)) return run_frenet(cfg, FrenetTraffic::layout(cfg.frenet, cfg.seed));
  throw InvalidSpec("unknown algorithm '" + a + "'");
}

std::string MatrixCell::key() const {
  return scenario + "/" + vehicle + "/" + slope + "/" + algorithm;
}

std::vector<MatrixCell> make_matrix(const std::string& scenario,
                                    const std::vector<std::string>& vehicles,
                                    const std::vector<std::string>& slopes,
                                    const std::vector<std::string>& algorithms) {
  std::vector<MatrixCell> cells;
  for (const auto& v : vehicles)
    for (const auto& s : slopes)
      for (const auto& a : algorithms) cells.push_back({scenario, v, s, a});
  return cells;
}

std::vector<MatrixCell> acc_matrix() {
  return make_matrix("acc", {"sedan", "truck"}, {"flat", "rolling", "steep"},
                     {kAccAlgos.begin(), kAccAlgos.end()});
}

std::vector<MatrixCell> frenet_matrix() {
  return make_matrix("frenet", {"sedan", "truck"}, {"flat", "rolling", "steep"},
                     {kFrenetAlgos.begin(), kFrenetAlgos.end()});
}

std::vector<CellResult> run_matrix(std::span<const MatrixCell> cells, const ScenarioConfig& base,
                                   const DrivingCycle& cycle, int jobs) {
  std::vector<CellResult> out(cells.size());
  const auto count = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs > 0 ? jobs : omp_get_max_threads())
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = run_cell(cells[k], base, cycle);
  }
  return out;
}

std::vector<CellResult> run_matrix_serial(std::span<const MatrixCell> cells,
                                          const ScenarioConfig& base, const DrivingCycle& cycle) {
  std::vector<CellResult> out;
  for (const auto& c : cells) out.push_back(run_cell(c, base, cycle));
  return out;
}

std::string baseline_of(const std::string& algorithm) {
  if (algorithm == "png") return "cc";
  if (algorithm == "emato-b" || algorithm == "emato-r" || algorithm == "emato-v") return "quintic";
  if (algorithm.rfind("emato-f", 0) == 0 && algorithm.size() == 8)
    return std::string("qf-") + algorithm.back();
  return "";
}

void write_improvement_csv(std::ostream& out, std::span<const CellResult> results) {
  out << "scenario,vehicle,slope,algorithm,baseline,mpg,baseline_mpg,improvement_pct\n";
  for (const auto& r : results) {
    const auto base = baseline_of(r.cell.algorithm);
    if (base.empty() || !r.ok) continue;
    const auto it = std::find_if(results.begin(), results.end(), [&](const CellResult& b) {
      return b.ok && b.cell.scenario == r.cell.scenario && b.cell.vehicle == r.cell.vehicle &&
             b.cell.slope == r.cell.slope && b.cell.algorithm == base;
    });
    if (it == results.end()) continue;
    const double mpg = r.run.metrics.mpg, ref = it->run.metrics.mpg;
    out << r.cell.scenario << ',' << r.cell.vehicle << ',' << r.cell.slope << ','
        << r.cell.algorithm << ',' << base << ',' << mpg << ',' << ref << ','
        << 100.0 * (mpg / ref - 1.0) << '\n';
  }
}

}  // namespace emato::scenarios
