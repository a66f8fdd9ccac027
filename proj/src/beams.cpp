#include "twist/beams.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "twist/errors.hpp"
#include "twist/numerics.hpp"
#include "twist/units.hpp"

namespace twist {

using units::c;
using units::pi;

double BeamSpec::p() const { return std::hypot(p_par, p_perp); }
double BeamSpec::theta0() const { return std::atan2(p_perp, p_par); }
double BeamSpec::eps() const { return units::energy(p_par * p_par + p_perp * p_perp); }
double BeamSpec::m() const { return kind == Kind::Bessel ? l + 0.5 * s : 0.5 * m2; }

void BeamSpec::validate() const {
  if (!(p_perp > 0.0)) throw ConfigError("beam: p_perp must be positive");
  if (!(sigma > 0.0)) throw ConfigError("beam: sigma must be positive");
  if (kind == Kind::Bessel) {
    if (s != 1 && s != -1) throw ConfigError("beam: s must be +1/2 or -1/2");
  } else {
    if ((m2 & 1) == 0) throw ConfigError("beam: m must be half-integer");
    if (mu != 1 && mu != -1) throw ConfigError("beam: mu must be +1/2 or -1/2");
  }
}

BeamSpec bessel_spec(int l, int s, double p, double theta0, double sigma) {
  BeamSpec b;
  b.kind = BeamSpec::Kind::Bessel;
  b.l = l;
  b.s = s;
  b.p_par = p * std::cos(theta0);
  b.p_perp = p * std::sin(theta0);
  b.sigma = sigma;
  b.validate();
  return b;
}

BeamSpec rotated_spec(int m2, int mu, double p, double theta0, double sigma) {
  BeamSpec b = bessel_spec(0, 1, p, theta0, sigma);
  b.kind = BeamSpec::Kind::Rotated;
  b.m2 = m2;
  b.mu = mu;
  b.validate();
  return b;
}

Bispinor bessel_beam(int l, int s, double p_par, double p_perp, const Vec3& x) {
  const double rho = std::hypot(x.x(), x.y());
  const double phi = std::atan2(x.y(), x.x());
  const auto a = a_coefficients(p_par, p_perp, s);
  const double pref = std::sqrt(p_perp) / (2.0 * std::sqrt(2.0) * pi);
  const cplx ez = std::exp(cplx(0.0, p_par * x.z()));
  Bispinor out = Bispinor::Zero();
  static const cplx ik[3] = {cplx(0, -1), cplx(1, 0), cplx(0, 1)};
  for (int k = -1; k <= 1; ++k) {
    int n = l + k;
    double J = num::bessel_j(n, p_perp * rho);
    out += ik[k + 1] * std::exp(cplx(0.0, n * phi)) * J * a[k];
  }
  return pref * ez * out;
}

Bispinor bessel_beam(const BeamSpec& spec, const Vec3& x) {
  return bessel_beam(spec.l, spec.s, spec.p_par, spec.p_perp, x);
}

std::array<Bispinor, 2> rotated_from_bessel(const Bispinor& up, const Bispinor& dn,
                                            double theta0) {
  const double co = std::cos(0.5 * theta0), si = std::sin(0.5 * theta0);
  const cplx I(0, 1);
  return {co * up + I * si * dn, I * si * up + co * dn};
}

std::array<Bispinor, 2> bessel_from_rotated(const Bispinor& r_plus, const Bispinor& r_minus,
                                            double theta0) {
  const double co = std::cos(0.5 * theta0), si = std::sin(0.5 * theta0);
  const cplx I(0, 1);
  return {co * r_plus - I * si * r_minus, -I * si * r_plus + co * r_minus};
}

Bispinor rotated_beam(const BeamSpec& spec, const Vec3& x) {
  // l = m - 1/2 with s = +1/2, l = m + 1/2 with s = -1/2
  const int l_up = (spec.m2 - 1) / 2, l_dn = (spec.m2 + 1) / 2;
  auto r = rotated_from_bessel(bessel_beam(l_up, 1, spec.p_par, spec.p_perp, x),
                               bessel_beam(l_dn, -1, spec.p_par, spec.p_perp, x), spec.theta0());
  return spec.mu > 0 ? r[0] : r[1];
}

Bispinor beam_value(const BeamSpec& spec, const Vec3& x) {
  return spec.kind == BeamSpec::Kind::Bessel ? bessel_beam(spec, x) : rotated_beam(spec, x);
}

double current_density_bessel(const BeamSpec& spec, double rho) {
  double J = num::bessel_j(spec.l, spec.p_perp * rho);
  double p = spec.p();
  return spec.p_perp / (4 * pi * pi) * (p * c / spec.eps()) * (spec.p_par / p) * J * J;
}

double current_density_rotated(const BeamSpec& spec, double rho) {
  const double h = 0.5 * spec.theta0();
  // m - mu and m + mu, both integers
  const int lo = (spec.m2 - spec.mu) / 2, hi = (spec.m2 + spec.mu) / 2;
  double Jm = num::bessel_j(lo, spec.p_perp * rho), Jp = num::bessel_j(hi, spec.p_perp * rho);
  double p = spec.p();
  return spec.p_perp / (4 * pi * pi) * (p * c / spec.eps()) *
         (std::pow(std::cos(h) * Jm, 2) - std::pow(std::sin(h) * Jp, 2));
}

double smearing(double q, double sigma) {
  return std::pow(pi * sigma * sigma, -0.25) * std::exp(-q * q / (2 * sigma * sigma));
}

namespace {

BeamSpec shifted(const BeamSpec& spec, double q) {
  BeamSpec b = spec;
  b.p_par = spec.p_par + q;
  return b;
}

num::NodesWeights q_nodes(const BeamSpec& spec, const PacketQuadrature& q) {
  return num::gauss_legendre_panels(q.panels, q.order, -q.q_span * spec.sigma,
                                    q.q_span * spec.sigma);
}

}  // namespace

Bispinor packet_value(const BeamSpec& spec, const Vec3& x, double tau,
                      const PacketQuadrature& q) {
  auto g = q_nodes(spec, q);
  Bispinor acc = Bispinor::Zero();
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    BeamSpec b = shifted(spec, g.x[i]);
    cplx ph = tau == 0.0 ? cplx(1.0) : std::exp(cplx(0.0, -b.eps() * tau));
    acc += g.w[i] * smearing(g.x[i], spec.sigma) * ph * beam_value(b, x);
  }
  return acc;
}

RadialProfile radial_current_profile(const BeamSpec& spec, const std::vector<double>& rho,
                                     const PacketQuadrature& q) {
  spec.validate();
  // at least 8 points per Bessel half-period pi / p_perp
  const double need = pi / spec.p_perp / 8.0;
  for (std::size_t i = 1; i < rho.size(); ++i)
    if (rho[i] - rho[i - 1] > need * (1 + 1e-12) || rho[i] <= rho[i - 1])
      throw ConfigError("radial grid too coarse: need spacing <= " + std::to_string(need));
  auto g = q_nodes(spec, q);
  RadialProfile out{rho, std::vector<double>(rho.size(), 0.0)};
  const Mat4& az = dirac::alpha(2);
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    BeamSpec b = shifted(spec, g.x[i]);
    double f = smearing(g.x[i], spec.sigma);
    for (std::size_t r = 0; r < rho.size(); ++r) {
      Bispinor v = beam_value(b, Vec3(rho[r], 0, 0));
      out.value[r] += g.w[i] * f * f * v.dot(az * v).real();
    }
  }
  for (auto& v : out.value) v *= 4 * pi * pi;
  return out;
}

double packet_column_density(const BeamSpec& spec, double rho, const PacketQuadrature& q) {
  auto g = q_nodes(spec, q);
  double acc = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    double f = smearing(g.x[i], spec.sigma);
    acc += g.w[i] * f * f * beam_value(shifted(spec, g.x[i]), Vec3(rho, 0, 0)).squaredNorm();
  }
  return 2 * pi * acc;
}

std::complex<double> beam_overlap(const BeamSpec& a, const BeamSpec& b, double R, double Zbox) {
  const double dp = b.p_par - a.p_par;
  const double zfac = std::abs(dp) < 1e-14 ? Zbox : 2.0 * std::sin(0.5 * dp * Zbox) / dp;
  const double kmax = std::max(a.p_perp, b.p_perp);
  const int panels = std::max(8, static_cast<int>(R * kmax / pi) + 1);
  auto g = num::gauss_legendre_panels(panels, 10, 0.0, R);
  const int nphi = 64;
  cplx acc = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i)
    for (int j = 0; j < nphi; ++j) {
      double ph = 2 * pi * j / nphi;
      Vec3 x(g.x[i] * std::cos(ph), g.x[i] * std::sin(ph), 0.0);
      acc += g.w[i] * g.x[i] * (2 * pi / nphi) * beam_value(a, x).dot(beam_value(b, x));
    }
  return acc * zfac;
}

double bessel_zero(int n, int k) { return boost::math::cyl_bessel_j_zero(double(n), k); }

}  // namespace twist
