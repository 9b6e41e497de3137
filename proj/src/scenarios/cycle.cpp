#include "emato/scenarios/cycle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <utility>

#include "emato/error.hpp"

namespace emato::scenarios {

namespace {

constexpr double kMph = 0.44704;

// Smoothstep interpolation between (t, v) waypoints, sampled at 1 Hz.
DrivingCycle from_waypoints(std::string name, const std::vector<std::pair<double, double>>& wp) {
  std::vector<double> t, v;
  const double end = wp.back().first;
  std::size_t seg = 0;
  for (int k = 0; k <= static_cast<int>(std::lround(end)); ++k) {
    const double tk = k;
    while (seg + 2 < wp.size() && tk > wp[seg + 1].first) ++seg;
    const auto [t0, v0] = wp[seg];
    const auto [t1, v1] = wp[seg + 1];
    const double x = std::clamp((tk - t0) / (t1 - t0), 0.0, 1.0);
    const double s = x * x * (3.0 - 2.0 * x);
    t.push_back(tk);
    v.push_back(std::max(0.0, v0 + (v1 - v0) * s));
  }
  return DrivingCycle(std::move(name), std::move(t), std::move(v));
}

}  // namespace

DrivingCycle::DrivingCycle(std::string name, std::vector<double> t, std::vector<double> v)
    : name_(std::move(name)), t_(std::move(t)), v_(std::move(v)) {
  if (t_.size() < 2 || t_.size() != v_.size())
    throw InvalidSpec("driving cycle needs at least two (time, speed) samples");
  if (t_.front() != 0.0) throw InvalidSpec("driving cycle must start at t = 0");
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (i > 0 && !(t_[i] > t_[i - 1])) throw InvalidSpec("driving cycle times must increase");
    if (!(v_[i] >= 0.0)) throw InvalidSpec("driving cycle speeds must be non-negative");
  }
  dist_.assign(1, 0.0);
  for (std::size_t i = 1; i < t_.size(); ++i)
    dist_.push_back(dist_.back() + 0.5 * (v_[i] + v_[i - 1]) * (t_[i] - t_[i - 1]));
}

std::size_t DrivingCycle::segment(double t) const {
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  return std::min(i, t_.size() - 2);
}

double DrivingCycle::speed_at(double t) const {
  if (t <= 0.0) return v_.front();
  if (t >= t_.back()) return v_.back();
  const std::size_t i = segment(t);
  const double x = (t - t_[i]) / (t_[i + 1] - t_[i]);
  return v_[i] + (v_[i + 1] - v_[i]) * x;
}

double DrivingCycle::distance_at(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= t_.back()) return dist_.back() + v_.back() * (t - t_.back());
  const std::size_t i = segment(t);
  const double h = t_[i + 1] - t_[i];
  const double tau = t - t_[i];
  return dist_[i] + v_[i] * tau + (v_[i + 1] - v_[i]) * tau * tau / (2.0 * h);
}

DrivingCycle DrivingCycle::from_csv(const std::filesystem::path& path, std::string name) {
  std::ifstream in(path);
  if (!in) throw InvalidSpec("cannot open cycle file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InvalidSpec("empty cycle file " + path.string());
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) {
      c.erase(std::remove_if(c.begin(), c.end(), [](unsigned char ch) { return std::isspace(ch); }),
              c.end());
      cols.push_back(c);
    }
  }
  const auto find = [&](const std::string& key) {
    auto it = std::find(cols.begin(), cols.end(), key);
    return it == cols.end() ? -1 : static_cast<int>(it - cols.begin());
  };
  const int ti = find("time_s");
  int vi = find("speed_mps");
  double scale = 1.0;
  if (vi < 0) {
    vi = find("speed_mph");
    scale = kMph;
  }
  if (ti < 0 || vi < 0)
    throw InvalidSpec("cycle CSV needs columns time_s and speed_mps or speed_mph");
  std::vector<double> t, v;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) <= std::max(ti, vi))
      throw InvalidSpec("short row in cycle CSV: " + line);
    try {
      t.push_back(std::stod(cells[ti]));
      v.push_back(std::stod(cells[vi]) * scale);
    } catch (const std::exception&) {
      throw InvalidSpec("bad number in cycle CSV: " + line);
    }
  }
  if (name.empty()) name = path.stem().string();
  return DrivingCycle(std::move(name), std::move(t), std::move(v));
}

void DrivingCycle::write_csv(std::ostream& out) const {
  out << "time_s,speed_mps\n" << std::setprecision(10);
  for (std::size_t i = 0; i < t_.size(); ++i) out << t_[i] << ',' << v_[i] << '\n';
}

DrivingCycle DrivingCycle::composite(const std::vector<DrivingCycle>& parts, double splice,
                                     std::string name) {
  if (parts.empty()) throw InvalidSpec("composite cycle needs at least one part");
  std::vector<double> t, v;
  double offset = 0.0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& c = parts[p];
    if (p > 0) offset += std::max(0.0, splice);
    for (std::size_t i = 0; i < c.t_.size(); ++i) {
      const double tk = offset + c.t_[i];
      if (!t.empty() && tk <= t.back()) continue;
      t.push_back(tk);
      v.push_back(c.v_[i]);
    }
    offset += c.total_time();
  }
  return DrivingCycle(std::move(name), std::move(t), std::move(v));
}

DrivingCycle DrivingCycle::highway() {
  return from_waypoints("highway", {{0, 0},     {20, 14},    {45, 19.5},    {90, 22},
                                    {130, 21}, {170, 23.5},   {210, 25}, {250, 23},
                                    {290, 21}, {320, 17}, {345, 20}, {390, 23.5},
                                    {440, 24.5},   {490, 25}, {540, 22.5},   {585, 24},
                                    {630, 25.5},   {680, 24}, {715, 20.5},   {742, 11},
                                    {765, 0}});
}

DrivingCycle DrivingCycle::highway_short() {
  return from_waypoints("highway-short", {{0, 0},     {18, 13},    {42, 20},   {85, 22.5},
                                          {125, 21},  {165, 24},   {205, 25.5}, {245, 23},
                                          {285, 19},  {315, 21.5}, {350, 24},  {380, 22},
                                          {400, 12},  {418, 0}});
}

DrivingCycle DrivingCycle::urban() {
  return from_waypoints("urban", {{0, 0},     {12, 7},     {30, 11},    {45, 0},   {58, 0},
                                  {75, 10},   {100, 14.5}, {125, 12},   {145, 0},  {155, 0},
                                  {172, 9},   {200, 15},   {230, 16.5}, {255, 8},  {270, 0},
                                  {285, 0},   {300, 8},    {320, 12.5}, {350, 13}, {370, 0},
                                  {380, 0},   {395, 9},    {425, 15.5}, {460, 14}, {485, 0}});
}

DrivingCycle DrivingCycle::constant(double speed, double duration) {
  if (!(duration > 0.0)) throw InvalidSpec("cycle duration must be positive");
  return DrivingCycle("constant", {0.0, duration}, {speed, speed});
}

DrivingCycle DrivingCycle::emergency_stop(double speed, double brake_at, double decel,
                                          double duration) {
  if (!(decel > 0.0) || !(brake_at > 0.0) || !(duration > brake_at))
    throw InvalidSpec("bad emergency stop parameters");
  const double stop = brake_at + speed / decel;
  std::vector<double> t{0.0, brake_at}, v{speed, speed};
  if (stop < duration) {
    t.push_back(stop);
    v.push_back(0.0);
    t.push_back(duration);
    v.push_back(0.0);
  } else {
    t.push_back(duration);
    v.push_back(speed - decel * (duration - brake_at));
  }
  return DrivingCycle("emergency-stop", std::move(t), std::move(v));
}

DrivingCycle DrivingCycle::by_name(const std::string& name) {
  if (name == "highway") return highway();
  if (name == "highway-short") return highway_short();
  if (name == "urban") return urban();
  if (name == "composite") return composite({highway(), urban(), highway_short()});
  throw InvalidSpec("unknown cycle '" + name + "'");
}

TrafficPrediction lead_prediction(const DrivingCycle& cycle, double t0, std::size_t n, double dt,
                                  double l_offset) {
  if (t0 > cycle.total_time() || t0 < 0.0)
    throw CycleExhausted("prediction start " + std::to_string(t0) + " s outside the cycle");
  TrafficPrediction p;
  p.dt = dt;
  AgentPrediction a;
  a.id = 0;
  a.l.resize(n);
  a.v.resize(n);
  a.x.resize(n);
  a.y.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    a.l[k] = l_offset + cycle.distance_at(t);
    a.v[k] = cycle.speed_at(t);
    a.x[k] = a.l[k];
  }
  p.agents.push_back(std::move(a));
  return p;
}

}  // namespace emato::scenarios
