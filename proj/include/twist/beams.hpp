#pragma once
#include <array>
#include <complex>
#include <vector>

#include "twist/spinors.hpp"

namespace twist {

struct BeamSpec {
  enum class Kind { Bessel, Rotated };
  Kind kind = Kind::Bessel;
  int l = 0;       // orbital number (Bessel)
  int s = 1;       // spin +1 / -1 for s = +1/2 / -1/2 (Bessel)
  int m2 = 1;      // twice the total angular momentum projection (Rotated)
  int mu = 1;      // helicity +1 / -1 for mu = +1/2 / -1/2 (Rotated)
  double p_par = 1.0;
  double p_perp = 1.0;
  double sigma = 10.0;

  double p() const;
  double theta0() const;
  double eps() const;
  // total angular momentum projection m = l + s
  double m() const;
  void validate() const;
};

// build from |p| and opening angle
BeamSpec bessel_spec(int l, int s, double p, double theta0, double sigma = 10.0);
BeamSpec rotated_spec(int m2, int mu, double p, double theta0, double sigma = 10.0);

// Bessel beam at explicit kinematics
Bispinor bessel_beam(int l, int s, double p_par, double p_perp, const Vec3& x);
Bispinor bessel_beam(const BeamSpec& spec, const Vec3& x);
Bispinor rotated_beam(const BeamSpec& spec, const Vec3& x);
// mixing between the pair (l = m - 1/2, s = +1/2), (l = m + 1/2, s = -1/2) and mu = +-1/2
std::array<Bispinor, 2> rotated_from_bessel(const Bispinor& up, const Bispinor& dn, double theta0);
std::array<Bispinor, 2> bessel_from_rotated(const Bispinor& r_plus, const Bispinor& r_minus,
                                            double theta0);
// either family
Bispinor beam_value(const BeamSpec& spec, const Vec3& x);

// closed-form longitudinal currents
double current_density_bessel(const BeamSpec& spec, double rho);
double current_density_rotated(const BeamSpec& spec, double rho);

// Gaussian smearing f(q)
double smearing(double q, double sigma);

// packet built from beams with p_par + q, free phase exp(-i eps(q) tau); q-quadrature
// on Gauss-Legendre panels over +-q_span sigma
struct PacketQuadrature {
  double q_span = 8.0;
  int panels = 64;
  int order = 8;
};
Bispinor packet_value(const BeamSpec& spec, const Vec3& x, double tau = 0.0,
                      const PacketQuadrature& q = {});

struct RadialProfile {
  std::vector<double> rho;
  std::vector<double> value;
};

// int dphi int dz j_z of the packet at the initial instant
RadialProfile radial_current_profile(const BeamSpec& spec, const std::vector<double>& rho,
                                     const PacketQuadrature& q = {});

// z-integrated density of the packet (free evolution leaves it unchanged)
double packet_column_density(const BeamSpec& spec, double rho, const PacketQuadrature& q = {});

// <A|B> over rho < R, |z| < Zbox/2
std::complex<double> beam_overlap(const BeamSpec& a, const BeamSpec& b, double R, double Zbox);

// k-th positive zero of J_n (n >= 0)
double bessel_zero(int n, int k);

}  // namespace twist
