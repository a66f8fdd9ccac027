#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "twist/evolve.hpp"
#include "twist/observables.hpp"
#include "twist/scenario.hpp"

namespace twist {

inline constexpr const char* kVersion = "0.1.0";

struct RunContext {
  std::filesystem::path out = "out";
  int threads = 1;
  bool quiet = false;
};

// CSV with '.' decimals and a fixed number format; sidecar <file>.json
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(const std::vector<double>& values);
  void write(const std::filesystem::path& path, const Scenario& scn, const nlohmann::json& extra = {}) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

std::string format_number(double v);

// packet geometry shared by the pipelines
struct Timeline {
  double L = 0.0;
  double t_in = 0.0;
  double t_out = 0.0;
  double period = 0.0;
  std::vector<double> series;  // uniform from t_in to t_out
};
Timeline make_timeline(const Scenario& scn, const LaserPulse& pulse, const MomentumAmplitude& coarse);
WindowPolicy window_policy(const Scenario& scn);
// amplitude on a p grid fine enough for the given times
MomentumAmplitude resolved_amplitude(const Scenario& scn, const LaserPulse& pulse, const Timeline& tl,
                                     const std::vector<double>& times);

std::vector<std::filesystem::path> run_field(const Scenario& scn, const RunContext& ctx);
std::vector<std::filesystem::path> run_current(const Scenario& scn, const RunContext& ctx);
std::vector<std::filesystem::path> run_classical(const Scenario& scn, const RunContext& ctx);
std::vector<std::filesystem::path> run_snapshots(const Scenario& scn, const RunContext& ctx);
std::vector<std::filesystem::path> run_series(const Scenario& scn, const RunContext& ctx);
// snapshots and series
std::vector<std::filesystem::path> run_simulate(const Scenario& scn, const RunContext& ctx);
std::vector<std::filesystem::path> run_observables(const Scenario& scn, const RunContext& ctx);
std::vector<std::filesystem::path> run_sweep(const Scenario& scn, const RunContext& ctx);

// desk or full-resolution parameter sets for fig2 .. fig7
Scenario preset(const std::string& figure, bool full);
std::vector<std::filesystem::path> reproduce(const std::string& figure, bool full, const RunContext& ctx);

}  // namespace twist
