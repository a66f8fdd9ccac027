#pragma once
#include <string>
#include <vector>

#include "twist/evolve.hpp"

namespace twist {

struct Axis {
  std::string name;
  double min = 0.0, max = 0.0;
  int count = 0;
  double at(int i) const { return count > 1 ? min + (max - min) * i / (count - 1) : min; }
};

// values stored x-major: values[ix * y.count + iy]
struct ScalarGrid {
  Axis x, y;
  std::vector<double> values;
  double time = 0.0;
  std::string hash;
  double value(int ix, int iy) const { return values[ix * y.count + iy]; }
};

// transverse box: center and half-width, n x n samples
struct SnapshotBox {
  double x_center = 0.0, y_center = 0.0;
  double half_width = 0.0;
  int n = 64;
};

struct SnapshotSettings {
  int n_phi = 0;  // 0: chosen from the box size
  WindowPolicy window;
  int threads = 1;
};

// box reaching past the sixth zero of the outermost Bessel order
double default_half_width(const BeamSpec& spec);
// phi_p0-averaged classical position of the packet center at t
Vec3 classical_center(const MomentumAmplitude& amp, const LaserPulse& pulse, double t);
SnapshotBox default_box(const MomentumAmplitude& amp, const LaserPulse& pulse, double t, int n = 64);

// z-integrated density in the box, unit box integral
ScalarGrid density_snapshot(const MomentumAmplitude& amp, const LaserPulse& pulse, double t,
                            const SnapshotBox& box, const SnapshotSettings& settings = {});

// slice-level first moments
struct SliceMoments {
  double norm = 0.0;  // sum_j dphi int |G_j|^2 dz
  double vx = 0.0, vy = 0.0, vz = 0.0;  // <c alpha>
  double z = 0.0;
};
SliceMoments slice_moments(const SliceSet& slices);

struct PositionSeries {
  std::vector<double> t;
  std::vector<Vec3> x;
  std::vector<Vec3> v;
};

struct SeriesSettings {
  int n_phi = 32;
  WindowPolicy window;
  int threads = 1;
};

// <x>(t) from the Ehrenfest velocity <c alpha> integrated over uniformly spaced times;
// times[0] >= amp.t_in with the packet still in front of the pulse; <z> is the direct moment
PositionSeries position_mean(const MomentumAmplitude& amp, const LaserPulse& pulse,
                             const std::vector<double>& times, const SeriesSettings& settings = {});

struct AngularMomentumReport {
  double time = 0.0;
  double S_E = 0.0;
  double J_mean = 0.0, J2_mean = 0.0, DJ = 0.0;
  double L_mean = 0.0, S_mean = 0.0;
  // about the axis that minimizes the dispersion
  double DJ_intrinsic = 0.0;
  double axis_x = 0.0, axis_y = 0.0;
  double norm = 0.0;
  double spectral_tail = 0.0;
};

// J_z = -i d/dphi_p + Sigma_z / 2 on the out-state amplitude; t must lie outside the pulse
AngularMomentumReport angular_momentum_stats(const MomentumAmplitude& amp, const LaserPulse& pulse,
                                             double t, int n_phi = 64,
                                             const WindowPolicy& window = {});

// <J_z> from psi on a polar grid (rho < R) over the packet window
double angular_momentum_position_space(const MomentumAmplitude& amp, const LaserPulse& pulse,
                                       double t, double R, int rho_panels = 32, int n_ang = 64,
                                       int n_phi = 64, const WindowPolicy& window = {},
                                       int threads = 1);

struct SweepSettings {
  double L = 0.0;           // 0: default_L
  double margin = 0.0;      // past xi_max at t_out; 0: 3 L
  AmplitudeGrid grid;
  int n_phi = 64;
  WindowPolicy window;
};

struct SweepRow {
  double phi = 0.0;
  double S_E = 0.0;
  double t_out = 0.0;
  AngularMomentumReport report;
};

std::vector<SweepRow> cep_sweep(const BeamSpec& spec, const PulseParams& base,
                                const std::vector<double>& phis, const SweepSettings& settings = {});

}  // namespace twist
