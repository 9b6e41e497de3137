#pragma once

#include <cstddef>
#include <vector>

namespace emato {

/// Predicted motion of one traffic agent, sampled on the ego horizon.
/// `l` is the agent's coordinate on the ego path when one is defined
/// (the leader in car following); it may be empty in 2D scenarios.
struct AgentPrediction {
  int id = 0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> l;
  std::vector<double> v;
};

struct TrafficPrediction {
  double dt = 0.1;
  std::vector<AgentPrediction> agents;

  bool empty() const { return agents.empty(); }
};

}  // namespace emato
