#pragma once
#include <vector>

#include "twist/field.hpp"
#include "twist/spinors.hpp"

namespace twist {

struct ClassicalState {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
  Vec3 p = Vec3::Zero();  // kinetic
};

// eps/c + p_z, conserved in a pulse depending on ct + z
double light_front_invariant(const Vec3& p);

// momenta after the pulse has passed
Vec3 final_momentum(const Vec3& p0, double S_E);

// exact plane-wave motion through the pulse, sampled at the requested times
std::vector<ClassicalState> trajectory_exact(const ClassicalState& start, const LaserPulse& pulse,
                                             const std::vector<double>& times);

// fourth-order Runge-Kutta on the Lorentz force; steps must resolve the carrier
struct RK4Report {
  std::vector<ClassicalState> states;
  double invariant_drift = 0.0;  // max |Delta (eps/c + p_z)| / (eps0/c + p0z)
};
RK4Report trajectory_rk4(const ClassicalState& start, const LaserPulse& pulse, double t_end,
                         double dt, int sample_every = 1);

// carrier period seen by a particle of momentum p (time units)
double carrier_period(const LaserPulse& pulse, const Vec3& p);

struct MeanPath {
  std::vector<double> t;
  std::vector<Vec3> x;
};

// average over phi_p0 in [0, 2 pi) at fixed (p_perp, p_par), all paths starting at x0 at t0
MeanPath averaged_trajectory(double p_perp, double p_par, const LaserPulse& pulse, int n_phi,
                             double t0, const Vec3& x0, const std::vector<double>& times,
                             double phi_offset = 0.0);

}  // namespace twist
