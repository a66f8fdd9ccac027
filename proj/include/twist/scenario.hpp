#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "twist/beams.hpp"
#include "twist/field.hpp"

namespace twist {

struct NumericsConfig {
  double L = 0.0;       // 0: default_L
  double margin = 0.0;  // exit margin past xi_max; 0: 3 L
  double span = 6.0;    // amplitude half-width in sigma
  double sigmas = 5.0;  // followed packet extremes
  int n_p = 0;          // 0: from the aliasing bound
  int n_phi_slices = 32;
  int n_phi_momentum = 64;
  int min_panels = 24;
  int samples_per_period = 16;
  int box_points = 64;
  int radial_points = 400;
  double radial_max = 0.0;  // 0: beam default
};

struct OutputConfig {
  // fractions of [t_in, t_out]
  std::vector<double> snapshot_fractions{0.0, 1.0 / 3, 2.0 / 3, 1.0};
  std::vector<double> cep_phases;
  std::vector<double> classical_phi{0.0};  // single-trajectory directions phi_p0
};

struct Scenario {
  std::string name = "scenario";
  BeamSpec beam;
  PulseParams pulse;
  NumericsConfig numerics;
  OutputConfig outputs;

  // canonical parameter tree (defaults filled) and its hash
  nlohmann::json echo() const;
  std::string hash() const;
};

// field-level validation; throws ConfigError listing every problem
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

// 64-bit FNV-1a of a string, hex
std::string fnv1a_hex(const std::string& s);

}  // namespace twist
