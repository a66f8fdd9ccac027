#include "twist/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twist/classical.hpp"
#include "twist/errors.hpp"
#include "twist/numerics.hpp"
#include "twist/parallel.hpp"
#include "twist/units.hpp"
#include "twist/volkov.hpp"

namespace twist {

using units::c;
using units::pi;

namespace {

cplx ipow(int n) {
  static const cplx v[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  return v[((n % 4) + 4) % 4];
}

int twice_m(const BeamSpec& s) {
  return s.kind == BeamSpec::Kind::Bessel ? 2 * s.l + s.s : s.m2;
}

Bispinor bessel_sum(int l, int s, double p_par, double p_perp) {
  auto a = a_coefficients(p_par, p_perp, s);
  return ipow(-l) * (a.a_minus1 + a.a_0 + a.a_plus1);
}

double lambda_of(double p_perp, double p) {
  const double e = std::sqrt(c * c + p_perp * p_perp + p * p);
  return p >= 0 ? c * (e + p) : c * (c * c + p_perp * p_perp) / (e - p);
}

// projector onto the positive-energy subspace of H(p)
Mat4 positive_projector(const Vec3& p) {
  return 0.5 * (Mat4::Identity() + dirac::hamiltonian(p) / units::energy(p.squaredNorm()));
}

std::vector<double> uniform_axis(const BeamSpec& spec, const AmplitudeGrid& grid) {
  const double half = grid.span * spec.sigma;
  int n = grid.n_p;
  if (grid.dp > 0) n = 2 * static_cast<int>(std::ceil(half / grid.dp)) + 1;
  if (n < 9) throw ConfigError("amplitude grid: need at least 9 p nodes");
  const double dp = 2 * half / (n - 1);
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) p[i] = spec.p_par - half + i * dp;
  return p;
}

void check_geometry(const LaserPulse& pulse, double t_in, double L) {
  if (!(L > 0)) throw ConfigError("geometry: L must be positive");
  if (c * t_in + L + pulse.xi_max() > 1e-9 * pulse.xi_max())
    throw ConfigError("geometry: packet and pulse overlap at t_in; need c t_in + L + xi_max <= 0 (got " +
                      std::to_string(c * t_in + L + pulse.xi_max()) + ")");
}

void finish(MomentumAmplitude& amp, std::vector<Bispinor>&& raw) {
  double nrm = 0, pos = 0, neg = 0;
  amp.g.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    Vec3 pv(amp.spec.p_perp, 0.0, amp.p[i]);
    Bispinor proj = positive_projector(pv) * raw[i];
    neg = std::max(neg, (raw[i] - proj).norm());
    pos = std::max(pos, proj.norm());
    amp.g[i] = proj;
    nrm += amp.w[i] * proj.squaredNorm();
  }
  nrm *= 2 * pi;
  if (!(nrm > 0)) throw NumericalError("amplitude has zero norm", 0.0);
  amp.raw_norm = nrm;
  amp.negative_fraction = pos > 0 ? neg / pos : 0.0;
  const double s = 1.0 / std::sqrt(nrm);
  for (auto& v : amp.g) v *= s;
  const int m2 = twice_m(amp.spec);
  for (int cidx = 0; cidx < 4; ++cidx) amp.harmonic[cidx] = (m2 - (cidx % 2 == 0 ? 1 : -1)) / 2;
}

}  // namespace

Bispinor MomentumAmplitude::value(std::size_t i, double phi) const {
  Bispinor out;
  for (int k = 0; k < 4; ++k) out(k) = std::exp(cplx(0.0, harmonic[k] * phi)) * g[i](k);
  return out;
}

cplx MomentumAmplitude::coefficient(std::size_t i, double phi, int s, int zeta) const {
  Vec3 pv(spec.p_perp * std::cos(phi), spec.p_perp * std::sin(phi), p[i]);
  Bispinor w = zeta > 0 ? bispinor_u(pv, s) : bispinor_v(pv, s);
  return w.dot(value(i, phi));
}

double MomentumAmplitude::norm() const {
  double n = 0;
  for (std::size_t i = 0; i < g.size(); ++i) n += w[i] * g[i].squaredNorm();
  return 2 * pi * n;
}

double default_L(const BeamSpec& spec) { return 40.0 / spec.sigma; }

double entry_time(const LaserPulse& pulse, double L) { return -(L + pulse.xi_max()) / c; }

Bispinor beam_momentum_spinor(const BeamSpec& spec, double p_par) {
  if (spec.kind == BeamSpec::Kind::Bessel) return bessel_sum(spec.l, spec.s, p_par, spec.p_perp);
  const int l_up = (spec.m2 - 1) / 2, l_dn = (spec.m2 + 1) / 2;
  const double th = std::atan2(spec.p_perp, p_par);
  const double co = std::cos(th / 2), si = std::sin(th / 2);
  const Bispinor up = bessel_sum(l_up, 1, p_par, spec.p_perp);
  const Bispinor dn = bessel_sum(l_dn, -1, p_par, spec.p_perp);
  const cplx I(0, 1);
  return spec.mu > 0 ? Bispinor(co * up + I * si * dn) : Bispinor(I * si * up + co * dn);
}

MomentumAmplitude packet_coefficients_delta(const BeamSpec& spec, const LaserPulse& pulse,
                                            double t_in, double L, const AmplitudeGrid& grid) {
  spec.validate();
  check_geometry(pulse, t_in, L);
  MomentumAmplitude amp;
  amp.spec = spec;
  amp.convention = Convention::DeltaLimit;
  amp.t_in = t_in;
  amp.L = L;
  amp.p = uniform_axis(spec, grid);
  amp.w.assign(amp.p.size(), amp.p[1] - amp.p[0]);
  const double K = std::sqrt(spec.p_perp) / (2 * std::sqrt(pi));
  std::vector<Bispinor> raw(amp.p.size());
  for (std::size_t i = 0; i < amp.p.size(); ++i) {
    double eps = units::energy(spec.p_perp * spec.p_perp + amp.p[i] * amp.p[i]);
    raw[i] = K * smearing(amp.p[i] - spec.p_par, spec.sigma) * std::exp(cplx(0.0, eps * t_in)) *
             beam_momentum_spinor(spec, amp.p[i]);
  }
  finish(amp, std::move(raw));
  return amp;
}

MomentumAmplitude packet_coefficients_finiteL(const BeamSpec& spec, const LaserPulse& pulse,
                                              double t_in, double L, const AmplitudeGrid& grid,
                                              const PacketQuadrature& q) {
  spec.validate();
  check_geometry(pulse, t_in, L);
  MomentumAmplitude amp;
  amp.spec = spec;
  amp.convention = Convention::FiniteL;
  amp.t_in = t_in;
  amp.L = L;
  amp.p = uniform_axis(spec, grid);
  amp.w.assign(amp.p.size(), amp.p[1] - amp.p[0]);
  // sinc oscillates with period 2 pi / L in q: keep several nodes per period
  const double qh = q.q_span * spec.sigma;
  const int panels = std::max(q.panels, static_cast<int>(std::ceil(2 * qh * L / pi)));
  auto nodes = num::gauss_legendre_panels(panels, q.order, -qh, qh);
  std::vector<Bispinor> S(nodes.x.size());
  for (std::size_t k = 0; k < nodes.x.size(); ++k)
    S[k] = nodes.w[k] * smearing(nodes.x[k], spec.sigma) *
           beam_momentum_spinor(spec, spec.p_par + nodes.x[k]);
  const double K = std::sqrt(spec.p_perp) / (2 * std::sqrt(pi));
  std::vector<Bispinor> raw(amp.p.size());
  for (std::size_t i = 0; i < amp.p.size(); ++i) {
    Bispinor acc = Bispinor::Zero();
    for (std::size_t k = 0; k < nodes.x.size(); ++k) {
      double d = spec.p_par + nodes.x[k] - amp.p[i];
      double ker = std::abs(d * L) < 1e-8 ? L / pi : std::sin(d * L) / (pi * d);
      acc += ker * S[k];
    }
    double eps = units::energy(spec.p_perp * spec.p_perp + amp.p[i] * amp.p[i]);
    raw[i] = K * std::exp(cplx(0.0, eps * t_in)) * acc;
  }
  finish(amp, std::move(raw));
  return amp;
}

ZWindow plan_z_window(const MomentumAmplitude& amp, const LaserPulse& pulse, double t,
                      const WindowPolicy& policy) {
  const auto& sp = amp.spec;
  double lo = 0, hi = 0;
  bool first = true;
  for (double dq : {-policy.sigmas, 0.0, policy.sigmas}) {
    for (int k = 0; k < 4; ++k) {
      double ph = 0.5 * pi * k;
      ClassicalState st{amp.t_in, Vec3::Zero(),
                        Vec3(sp.p_perp * std::cos(ph), sp.p_perp * std::sin(ph),
                             sp.p_par + dq * sp.sigma)};
      double z = t == amp.t_in ? 0.0 : trajectory_exact(st, pulse, {t})[0].x.z();
      lo = first ? z : std::min(lo, z);
      hi = first ? z : std::max(hi, z);
      first = false;
    }
  }
  const double pad = policy.pad_widths / sp.sigma + policy.pad_fraction * (hi - lo);
  ZWindow w;
  w.z_min = lo - pad;
  w.z_max = hi + pad;
  w.order = policy.order;
  const double carrier = 2 * pi * c / pulse.params().omega;
  w.panels = std::max(policy.min_panels, static_cast<int>(std::ceil(8.0 * w.width() / carrier)));
  return w;
}

double exit_time(const MomentumAmplitude& amp, const LaserPulse& pulse, double margin,
                 const WindowPolicy& policy) {
  const double target = pulse.xi_max() + margin;
  auto trailing = [&](double t) { return c * t + plan_z_window(amp, pulse, t, policy).z_min; };
  double lo = amp.t_in, hi = amp.t_in + 2 * (pulse.xi_max() + margin + amp.L) / c;
  while (trailing(hi) < target) hi = lo + 2 * (hi - lo);
  for (int it = 0; it < 100 && hi - lo > 1e-10 * std::max(1.0, std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    (trailing(mid) < target ? lo : hi) = mid;
  }
  return hi;
}

double required_dp(const MomentumAmplitude& amp, const LaserPulse& pulse,
                   const std::vector<double>& times, const WindowPolicy& policy) {
  double W = 0;
  for (double t : times) W = std::max(W, plan_z_window(amp, pulse, t, policy).width());
  return 2 * pi / (policy.alias_factor * W);
}

namespace {

void accumulate(const MomentumAmplitude& amp, const LaserPulse& pulse, double t,
                const std::vector<double>& z, int n_phi, int stride, int threads,
                std::vector<Bispinor>& G) {
  if (n_phi < 8 || n_phi % 4 != 0) throw ConfigError("n_phi must be a multiple of 4, at least 8");
  const std::size_t nz = z.size(), np = amp.p.size();
  const double pp = amp.spec.p_perp, p0 = amp.spec.p_par;
  const double e0 = units::energy(pp * pp + p0 * p0), lam0 = lambda_of(pp, p0);
  std::vector<PotentialSample> smp(nz);
  for (std::size_t i = 0; i < nz; ++i) smp[i] = pulse.sample(c * t + z[i]);
  std::vector<cplx> harm(n_phi * 4);
  std::vector<double> cosj(n_phi);
  for (int j = 0; j < n_phi; ++j) {
    double ph = 2 * pi * j / n_phi;
    cosj[j] = std::cos(ph);
    for (int k = 0; k < 4; ++k) harm[4 * j + k] = std::exp(cplx(0.0, amp.harmonic[k] * ph));
  }
  G.assign(n_phi * nz, Bispinor::Zero());
  const std::size_t mid = (np - 1) / 2;
  const std::size_t i0 = mid % stride;

  parallel_chunks(nz, threads, [&](std::size_t zb, std::size_t ze, int) {
    std::vector<cplx> phi_buf(n_phi * 4), e2(n_phi);
    const int q = n_phi / 4, h = n_phi / 2;
    for (std::size_t ip = i0; ip < np; ip += stride) {
      const double p = amp.p[ip];
      const double wgt = amp.w[ip] * stride;
      const Bispinor& g = amp.g[ip];
      if (g.squaredNorm() == 0.0) continue;
      for (int j = 0; j < n_phi; ++j)
        for (int k = 0; k < 4; ++k) phi_buf[4 * j + k] = harm[4 * j + k] * g(k);
      const double eps = units::energy(pp * pp + p * p);
      const double lam = lambda_of(pp, p);
      const double dinv = 1.0 / lam - 1.0 / lam0;
      for (std::size_t i = zb; i < ze; ++i) {
        const auto& s = smp[i];
        const double th = (p - p0) * z[i] - (eps - e0) * t - s.IA2 * dinv / (2 * c);
        const cplx E1 = wgt * std::polar(1.0, th);
        const double beta = pp * s.IA / lam;
        const double a = s.A / (2 * lam);
        for (int j = 0; j <= q; ++j) e2[j] = std::polar(1.0, -beta * cosj[j]);
        for (int j = q + 1; j <= h; ++j) e2[j] = std::conj(e2[h - j]);
        for (int j = h + 1; j < n_phi; ++j) e2[j] = e2[n_phi - j];
        Bispinor* out = &G[i];
        for (int j = 0; j < n_phi; ++j) {
          const cplx X = E1 * e2[j];
          const cplx* f = &phi_buf[4 * j];
          const cplx u = f[0] + f[2], v = f[3] - f[1];
          Bispinor& o = out[j * nz];
          o(0) += X * (f[0] + a * v);
          o(1) += X * (f[1] + a * u);
          o(2) += X * (f[2] - a * v);
          o(3) += X * (f[3] + a * u);
        }
      }
    }
  });
  // restore the common phase removed above
  for (std::size_t i = 0; i < nz; ++i) {
    const cplx ph = std::polar(1.0, p0 * z[i] - e0 * t - smp[i].IA2 / (2 * c * lam0));
    for (int j = 0; j < n_phi; ++j) G[j * nz + i] *= ph;
  }
}

}  // namespace

SliceSet compute_slices(const MomentumAmplitude& amp, const LaserPulse& pulse, double t,
                        const ZWindow& win, int n_phi, double x0, double y0, int threads,
                        double alias_factor) {
  const double period = 2 * pi / amp.dp();
  const int stride = static_cast<int>(std::floor(period / (alias_factor * win.width())));
  if (stride < 1)
    throw NumericalError("slices: p grid too coarse for the packet extent at t = " +
                             std::to_string(t) + " (need dp <= " +
                             std::to_string(2 * pi / (alias_factor * win.width())) + ")",
                         amp.dp());
  auto nodes = num::gauss_legendre_panels(win.panels, win.order, win.z_min, win.z_max);
  SliceSet out;
  out.t = t;
  out.n_phi = n_phi;
  out.z = nodes.x;
  out.wz = nodes.w;
  out.x0 = x0;
  out.y0 = y0;
  out.stride = stride;
  accumulate(amp, pulse, t, out.z, n_phi, stride, threads, out.G);
  const std::size_t nz = out.z.size();
  if (x0 != 0.0 || y0 != 0.0)
    for (int j = 0; j < n_phi; ++j) {
      double ph = 2 * pi * j / n_phi;
      cplx f = std::polar(1.0, amp.spec.p_perp * (std::cos(ph) * x0 + std::sin(ph) * y0));
      for (std::size_t i = 0; i < nz; ++i) out.G[j * nz + i] *= f;
    }
  return out;
}

SliceSet compute_slices_at(const MomentumAmplitude& amp, const LaserPulse& pulse, double t,
                           const std::vector<double>& z, int n_phi, int threads) {
  SliceSet out;
  out.t = t;
  out.n_phi = n_phi;
  out.z = z;
  out.wz.assign(z.size(), 0.0);
  accumulate(amp, pulse, t, z, n_phi, 1, threads, out.G);
  return out;
}

std::vector<Bispinor> wavefunction_at(const MomentumAmplitude& amp, const LaserPulse& pulse,
                                      double t, const std::vector<Vec3>& points, int n_phi,
                                      int threads) {
  std::vector<double> zs;
  for (auto& x : points) zs.push_back(x.z());
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
  auto sl = compute_slices_at(amp, pulse, t, zs, n_phi, threads);
  const double pref = std::pow(2 * pi, -1.5) * 2 * pi / n_phi;
  std::vector<Bispinor> out(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    std::size_t iz = std::lower_bound(zs.begin(), zs.end(), points[k].z()) - zs.begin();
    Bispinor acc = Bispinor::Zero();
    for (int j = 0; j < n_phi; ++j) {
      double ph = 2 * pi * j / n_phi;
      acc += std::polar(1.0, amp.spec.p_perp * (std::cos(ph) * points[k].x() +
                                                std::sin(ph) * points[k].y())) *
             sl.at(j, iz);
    }
    out[k] = pref * acc;
  }
  return out;
}

}  // namespace twist
