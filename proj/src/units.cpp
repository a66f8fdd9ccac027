#include "twist/units.hpp"

#include <cmath>

#include "twist/errors.hpp"

namespace twist::units {

double intensity_to_field(double I_Wcm2) {
  if (!(I_Wcm2 >= 0.0)) throw DomainError("intensity must be non-negative");
  double I_au = I_Wcm2 / kConst.intensity_au_to_Wcm2;
  return std::sqrt(8.0 * pi * alpha * I_au);
}

double field_to_intensity(double E_star) {
  return E_star * E_star / (8.0 * pi * alpha) * kConst.intensity_au_to_Wcm2;
}

double kinetic_energy_to_momentum(double E_kin_keV) {
  if (!(E_kin_keV >= 0.0)) throw DomainError("kinetic energy must be non-negative");
  double T = E_kin_keV / kConst.energy_au_to_keV;
  // eps = c^2 + T, p^2 = (eps/c)^2 - c^2 = T (2 c^2 + T) / c^2
  return std::sqrt(T * (2.0 * c * c + T)) / c;
}

double momentum_to_kinetic_energy(double p) {
  double eps = energy(p * p);
  // eps - c^2 without cancellation
  double T = c * c * p * p / (eps / c + c) / c;
  return T * kConst.energy_au_to_keV;
}

double energy(double p2) { return c * std::sqrt(c * c + p2); }

}  // namespace twist::units
