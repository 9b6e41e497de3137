// Serial reference kernels against their OpenMP twins.
#include <benchmark/benchmark.h>

#include "emato/polytraj/candidate.hpp"
#include "emato/polytraj/quintic.hpp"
#include "emato/powertrain/fuel_fit.hpp"
#include "emato/scenarios/config.hpp"
#include "emato/scenarios/cycle.hpp"
#include "emato/scenarios/runner.hpp"

using namespace emato;

namespace {

std::vector<polytraj::Candidate> fan(std::size_t count) {
  const auto p = dynamics::VehicleParams::truck();
  const auto slope = dynamics::SlopeProfile::rolling();
  std::vector<polytraj::Candidate> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double v = 5.0 + 20.0 * static_cast<double>(i) / static_cast<double>(count);
    const auto seg = polytraj::quintic_fit({0, 15, 0}, {0.5 * (15 + v) * 4.9, v, 0}, 4.9);
    out.push_back(polytraj::make_longitudinal_candidate(i, seg, 50, 0.1, slope, p));
  }
  return out;
}

TrafficPrediction traffic(int agents) {
  TrafficPrediction t;
  for (int a = 0; a < agents; ++a) {
    AgentPrediction p;
    for (int k = 0; k < 50; ++k) p.l.push_back(60.0 + 30.0 * a + 1.5 * k);
    t.agents.push_back(p);
  }
  return t;
}

template <bool Serial>
void BM_GearPolicy(benchmark::State& st) {
  const auto fp = powertrain::FitPipeline::light_truck();
  const auto map = powertrain::build_engine_map(fp.map);
  for (auto _ : st) {
    auto g = Serial ? powertrain::optimize_gear_policy_serial(map, fp.transmission, fp.grid, fp.mass, 0.85)
                    : powertrain::optimize_gear_policy(map, fp.transmission, fp.grid, fp.mass, 0.85);
    benchmark::DoNotOptimize(g);
  }
}

template <bool Serial>
void BM_CheckCandidates(benchmark::State& st) {
  auto c = fan(static_cast<std::size_t>(st.range(0)));
  const auto t = traffic(8);
  const auto p = dynamics::VehicleParams::truck();
  for (auto _ : st) {
    if (Serial)
      polytraj::check_candidates_serial(c, p, t);
    else
      polytraj::check_candidates(c, p, t);
    benchmark::ClobberMemory();
  }
}

template <bool Serial>
void BM_CandidateCosts(benchmark::State& st) {
  const auto c = fan(static_cast<std::size_t>(st.range(0)));
  const auto w = polytraj::Weights::frenet_mixed();
  for (auto _ : st) {
    auto v = Serial ? polytraj::candidate_costs_serial(c, w) : polytraj::candidate_costs(c, w);
    benchmark::DoNotOptimize(v);
  }
}

template <bool Serial>
void BM_Matrix(benchmark::State& st) {
  using namespace scenarios;
  const auto cells = make_matrix("acc", {"sedan", "truck"}, {"flat", "rolling", "steep"},
                                 {"quintic", "emato-b"});
  const auto base = make_config("truck", "flat", "quintic");
  const auto cycle = DrivingCycle::constant(18.0, 15.0);
  for (auto _ : st) {
    auto r = Serial ? run_matrix_serial(cells, base, cycle) : run_matrix(cells, base, cycle);
    benchmark::DoNotOptimize(r);
  }
}

}  // namespace

BENCHMARK(BM_GearPolicy<true>)->Name("gear_policy/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GearPolicy<false>)->Name("gear_policy/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckCandidates<true>)->Name("check_candidates/serial")->Arg(21)->Arg(210);
BENCHMARK(BM_CheckCandidates<false>)->Name("check_candidates/omp")->Arg(21)->Arg(210);
BENCHMARK(BM_CandidateCosts<true>)->Name("candidate_costs/serial")->Arg(21)->Arg(210);
BENCHMARK(BM_CandidateCosts<false>)->Name("candidate_costs/omp")->Arg(21)->Arg(210);
BENCHMARK(BM_Matrix<true>)->Name("run_matrix/serial")->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_Matrix<false>)->Name("run_matrix/omp")->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
