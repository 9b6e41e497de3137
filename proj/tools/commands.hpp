#pragma once

#include <optional>
#include <string>
#include <vector>

namespace emato::cli {

/// Exit codes of the command-line tool.
enum ExitCode { kOk = 0, kRuntimeFailure = 1, kConfigError = 2 };

struct FitOptions {
  std::string spec;
  std::string vehicle = "truck";
  bool use_appendix = false;
  std::string out = "out/fit";
};

struct RunOptions {
  std::string scenario;  // png, acc or frenet
  std::string config;
  std::optional<std::string> vehicle;
  std::optional<std::string> slope;
  std::optional<std::string> algo;
  std::optional<std::string> cycle;
  std::optional<double> distance;
  std::optional<std::uint64_t> seed;
  std::string out = "out/run";
};

struct MatrixOptions {
  std::string scenario;  // acc or frenet
  std::string spec;
  std::string config;
  std::vector<std::string> vehicles;
  std::vector<std::string> slopes;
  std::vector<std::string> algos;
  std::optional<std::string> cycle;
  int jobs = 0;
  std::string out = "out/matrix";
};

int cmd_fit(const FitOptions& o);
int cmd_run(const RunOptions& o);
int cmd_matrix(const MatrixOptions& o);
int cmd_check(const std::string& kind);
int cmd_export_cycle(const std::string& name, const std::string& out);

}  // namespace emato::cli
