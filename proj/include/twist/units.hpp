#pragma once
// Atomic units (hbar = m_e = -e = 1) and lab-unit conversions, CODATA 2018.

namespace twist::units {

struct PhysicalConstants {
  double c;
  double alpha;
  double intensity_au_to_Wcm2;
  double energy_au_to_keV;
};

inline constexpr PhysicalConstants kConst{
    137.035999084,
    1.0 / 137.035999084,
    6.4364099007e15,  // a.u. of intensity; I = E*^2 / (8 pi alpha)
    27.211386245988e-3,
};

inline constexpr double c = kConst.c;
inline constexpr double alpha = kConst.alpha;
inline constexpr double pi = 3.14159265358979323846;

double intensity_to_field(double I_Wcm2);
double field_to_intensity(double E_star);

double kinetic_energy_to_momentum(double E_kin_keV);
double momentum_to_kinetic_energy(double p);

// c sqrt(c^2 + p^2)
double energy(double p2);

}  // namespace twist::units
