#include "twist/volkov.hpp"

#include <cmath>
#include <string>

#include "twist/errors.hpp"
#include "twist/units.hpp"

namespace twist {

using units::c;
using units::pi;

VolkovIndex VolkovIndex::from_cylindrical(double p_perp, double phi, double p_par, int s,
                                          int zeta) {
  if (zeta != 1 && zeta != -1) throw DomainError("volkov: zeta must be +1 or -1");
  if (s != 1 && s != -1) throw DomainError("volkov: s must be +1 or -1");
  return {Vec3(p_perp * std::cos(phi), p_perp * std::sin(phi), p_par), s, zeta};
}

double VolkovIndex::eps() const { return units::energy(p.squaredNorm()); }

double VolkovIndex::light_front() const {
  // eps/c + p_z = (c^2 + p_perp^2) / (eps/c - p_z) avoids cancellation for p_z < 0
  const double e = eps() / c;
  double lam = p.z() >= 0 ? c * (e + p.z())
                          : c * (c * c + p.x() * p.x() + p.y() * p.y()) / (e - p.z());
  if (!(lam > c * 1e-6))
    throw DomainError("volkov: eps' + c p_z' = " + std::to_string(lam) +
                      " too close to the light-front singularity");
  return lam;
}

Bispinor VolkovIndex::spinor() const { return zeta > 0 ? bispinor_u(p, s) : bispinor_v(-p, s); }

const Mat4& lightfront_matrix() {
  static const Mat4 M = (dirac::gamma(0) + dirac::gamma(3)) * dirac::gamma(1);
  return M;
}

cplx volkov_phase(const PotentialSample& s, double p_x, double lambda, int zeta) {
  return std::exp(cplx(0.0, -(p_x * s.IA + zeta * s.IA2 / (2 * c)) / lambda));
}

Bispinor volkov_spinor(const PotentialSample& s, const Bispinor& w, double lambda, int zeta) {
  return w + (zeta * s.A / (2 * lambda)) * (lightfront_matrix() * w);
}

Bispinor volkov_f(const LaserPulse& pulse, const VolkovIndex& idx, double t, double z) {
  const double lam = idx.light_front();
  const auto smp = pulse.sample(c * t + z);
  const cplx ph = std::exp(cplx(0.0, -idx.zeta * idx.eps() * t)) *
                  volkov_phase(smp, idx.p.x(), lam, idx.zeta);
  return ph * volkov_spinor(smp, idx.spinor(), lam, idx.zeta);
}

Bispinor volkov_state(const LaserPulse& pulse, const VolkovIndex& idx, double t, const Vec3& x) {
  const cplx pw = std::exp(cplx(0.0, idx.zeta * idx.p.dot(x))) * std::pow(2 * pi, -1.5);
  return pw * volkov_f(pulse, idx, t, x.z());
}

}  // namespace twist
