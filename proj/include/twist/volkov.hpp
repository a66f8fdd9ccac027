#pragma once
#include "twist/field.hpp"
#include "twist/spinors.hpp"

namespace twist {

struct VolkovIndex {
  Vec3 p;        // (p_perp cos phi', p_perp sin phi', p_par')
  int s = 1;     // +1 / -1
  int zeta = 1;  // energy sign

  static VolkovIndex from_cylindrical(double p_perp, double phi, double p_par, int s, int zeta = 1);
  double eps() const;
  // eps' + c p_z'; must stay away from the light-front singularity
  double light_front() const;
  // u(p', s) for zeta = +, v(-p', s) for zeta = -
  Bispinor spinor() const;
};

// (gamma^0 + gamma^3) gamma^1
const Mat4& lightfront_matrix();

// exp{-i [p_x I_A + zeta I_A2 / 2c] / Lambda}
cplx volkov_phase(const PotentialSample& s, double p_x, double lambda, int zeta);
// [1 + zeta A M / (2 Lambda)] w
Bispinor volkov_spinor(const PotentialSample& s, const Bispinor& w, double lambda, int zeta);

// f(t, z): temporal and field factors, without the plane wave exp(i zeta p'.x)
Bispinor volkov_f(const LaserPulse& pulse, const VolkovIndex& idx, double t, double z);
Bispinor volkov_state(const LaserPulse& pulse, const VolkovIndex& idx, double t, const Vec3& x);

}  // namespace twist
