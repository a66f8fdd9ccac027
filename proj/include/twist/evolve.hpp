#pragma once
#include <array>
#include <vector>

#include "twist/beams.hpp"
#include "twist/field.hpp"
#include "twist/spinors.hpp"

namespace twist {

enum class Convention { DeltaLimit, FiniteL };

// uniform p_par' axis centered on the packet momentum
struct AmplitudeGrid {
  double span = 6.0;  // half-width in units of sigma
  int n_p = 257;
  double dp = 0.0;    // if > 0, overrides n_p
};

// Coefficients of the packet in the positive-energy Volkov basis on the fixed-p_perp
// cylinder.  Phi(p, phi) = sum_s' c(p, phi, s') u(p', s') has the azimuthal structure
// Phi_c(p, phi) = exp(i n_c phi) g_c(p), so only g(p) is stored.
struct MomentumAmplitude {
  BeamSpec spec;
  Convention convention = Convention::DeltaLimit;
  double t_in = 0.0;
  double L = 0.0;
  std::vector<double> p;
  std::vector<double> w;
  std::vector<Bispinor> g;
  std::array<int, 4> harmonic{};
  double raw_norm = 0.0;           // sum_s' int |c|^2 before normalization
  double negative_fraction = 0.0;  // max |v^+ Phi| / max |u^+ Phi| before projection

  Bispinor value(std::size_t i, double phi) const;
  // zeta = +: u(p', s)^+ Phi; zeta = -: v(p', s)^+ Phi
  cplx coefficient(std::size_t i, double phi, int s, int zeta = 1) const;
  double norm() const;
  double dp() const { return p.size() > 1 ? p[1] - p[0] : 0.0; }
};

// default packet half-extent
double default_L(const BeamSpec& spec);
// entry time at which the pulse's left edge sits at z = L
double entry_time(const LaserPulse& pulse, double L);

MomentumAmplitude packet_coefficients_delta(const BeamSpec& spec, const LaserPulse& pulse,
                                            double t_in, double L, const AmplitudeGrid& grid = {});
MomentumAmplitude packet_coefficients_finiteL(const BeamSpec& spec, const LaserPulse& pulse,
                                              double t_in, double L, const AmplitudeGrid& grid = {},
                                              const PacketQuadrature& q = {});

// positive-energy momentum spinor of the beam at phi = 0 (carries i^{-l})
Bispinor beam_momentum_spinor(const BeamSpec& spec, double p_par);

// z range holding the packet at time t and the quadrature over it
struct WindowPolicy {
  double sigmas = 5.0;       // extreme components followed classically
  double pad_widths = 10.0;  // padding in units of 1/sigma
  double pad_fraction = 0.05;
  int min_panels = 24;
  int order = 8;
  double alias_factor = 1.2;
};
struct ZWindow {
  double z_min = 0.0, z_max = 0.0;
  int panels = 0, order = 8;
  double width() const { return z_max - z_min; }
};
ZWindow plan_z_window(const MomentumAmplitude& amp, const LaserPulse& pulse, double t,
                      const WindowPolicy& policy = {});
// largest p spacing free of aliasing over the given times
double required_dp(const MomentumAmplitude& amp, const LaserPulse& pulse,
                   const std::vector<double>& times, const WindowPolicy& policy = {});

// G_j(z) = sum_p w_p e^{ipz} e^{-i eps' t} (Volkov phase) [Phi + A M Phi / 2 Lambda'](p, phi_j)
// on GL nodes of the window; psi = (2pi)^{-3/2} dphi sum_j e^{i p'_perp.(x, y)} G_j(z)
struct SliceSet {
  double t = 0.0;
  int n_phi = 0;
  std::vector<double> z, wz;
  std::vector<Bispinor> G;  // index j * z.size() + i
  double x0 = 0.0, y0 = 0.0;  // transverse origin folded into G
  int stride = 1;
  const Bispinor& at(int j, std::size_t i) const { return G[j * z.size() + i]; }
};
SliceSet compute_slices(const MomentumAmplitude& amp, const LaserPulse& pulse, double t,
                        const ZWindow& win, int n_phi, double x0 = 0.0, double y0 = 0.0,
                        int threads = 1, double alias_factor = 1.2);
// same, at explicit z values (no window quadrature weights)
SliceSet compute_slices_at(const MomentumAmplitude& amp, const LaserPulse& pulse, double t,
                           const std::vector<double>& z, int n_phi, int threads = 1);

// first time at which the trailing edge of the packet window is `margin` past the pulse
double exit_time(const MomentumAmplitude& amp, const LaserPulse& pulse, double margin,
                 const WindowPolicy& policy = {});

// psi(t, x) at arbitrary points
std::vector<Bispinor> wavefunction_at(const MomentumAmplitude& amp, const LaserPulse& pulse,
                                      double t, const std::vector<Vec3>& points, int n_phi = 64,
                                      int threads = 1);

}  // namespace twist
