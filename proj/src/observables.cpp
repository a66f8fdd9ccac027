#include "twist/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twist/classical.hpp"
#include "twist/errors.hpp"
#include "twist/numerics.hpp"
#include "twist/parallel.hpp"
#include "twist/units.hpp"

namespace twist {

using units::c;
using units::pi;

namespace {

int pow2_at_least(double x, int floor_value) {
  int n = floor_value;
  while (n < x) n *= 2;
  return n;
}

double lambda_of(double p_perp, double p) {
  const double e = std::sqrt(c * c + p_perp * p_perp + p * p);
  return p >= 0 ? c * (e + p) : c * (c * c + p_perp * p_perp) / (e - p);
}

int max_order(const BeamSpec& s) {
  if (s.kind == BeamSpec::Kind::Bessel) return std::abs(s.l) + 1;
  return (std::abs(s.m2) + 1) / 2 + 1;
}

// largest |x - x_center| among the extreme classical components at t
double classical_spread(const MomentumAmplitude& amp, const LaserPulse& pulse, double t,
                        const Vec3& center, double sigmas) {
  if (t == amp.t_in) return 0.0;
  const auto& sp = amp.spec;
  double spread = 0.0;
  for (double dq : {-sigmas, 0.0, sigmas})
    for (int k = 0; k < 8; ++k) {
      const double ph = 0.25 * pi * k;
      ClassicalState st{amp.t_in, Vec3::Zero(),
                        Vec3(sp.p_perp * std::cos(ph), sp.p_perp * std::sin(ph),
                             sp.p_par + dq * sp.sigma)};
      Vec3 x = trajectory_exact(st, pulse, {t})[0].x;
      spread = std::max({spread, std::abs(x.x() - center.x()), std::abs(x.y() - center.y())});
    }
  return spread;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

double default_half_width(const BeamSpec& spec) {
  return bessel_zero(max_order(spec), 6) / spec.p_perp;
}

Vec3 classical_center(const MomentumAmplitude& amp, const LaserPulse& pulse, double t) {
  if (t == amp.t_in) return Vec3::Zero();
  auto path = averaged_trajectory(amp.spec.p_perp, amp.spec.p_par, pulse, 16, amp.t_in,
                                  Vec3::Zero(), {t});
  return path.x[0];
}

SnapshotBox default_box(const MomentumAmplitude& amp, const LaserPulse& pulse, double t, int n) {
  Vec3 ctr = classical_center(amp, pulse, t);
  SnapshotBox b;
  b.x_center = ctr.x();
  b.y_center = ctr.y();
  b.half_width = default_half_width(amp.spec) + classical_spread(amp, pulse, t, ctr, 1.0);
  b.n = n;
  return b;
}

ScalarGrid density_snapshot(const MomentumAmplitude& amp, const LaserPulse& pulse, double t,
                            const SnapshotBox& box, const SnapshotSettings& settings) {
  if (!(box.half_width > 0) || box.n < 2) throw ConfigError("snapshot: box needs half_width > 0 and n >= 2");
  const Vec3 ctr = classical_center(amp, pulse, t);
  if (std::abs(ctr.x() - box.x_center) > box.half_width ||
      std::abs(ctr.y() - box.y_center) > box.half_width)
    throw ConfigError("snapshot: classical packet center (" + fmt(ctr.x()) + ", " + fmt(ctr.y()) +
                      ") at t = " + fmt(t) + " lies outside the box; shift the box center to it");
  const double pp = amp.spec.p_perp;
  int n_phi = settings.n_phi;
  if (n_phi <= 0) {
    const double spread = classical_spread(amp, pulse, t, ctr, settings.window.sigmas);
    const double offset = std::hypot(ctr.x() - box.x_center, ctr.y() - box.y_center);
    n_phi = pow2_at_least(pp * (std::sqrt(2.0) * box.half_width + spread + offset) +
                              max_order(amp.spec) + 16,
                          32);
  }
  auto win = plan_z_window(amp, pulse, t, settings.window);
  auto sl = compute_slices(amp, pulse, t, win, n_phi, box.x_center, box.y_center, settings.threads,
                           settings.window.alias_factor);
  const std::size_t nz = sl.z.size();
  Eigen::MatrixXcd Gm(4 * nz, n_phi);
  for (int j = 0; j < n_phi; ++j)
    for (std::size_t i = 0; i < nz; ++i) {
      const double sw = std::sqrt(sl.wz[i]);
      for (int k = 0; k < 4; ++k) Gm(4 * i + k, j) = sw * sl.at(j, i)(k);
    }
  const Eigen::MatrixXcd C = Gm.adjoint() * Gm;

  ScalarGrid out;
  out.time = t;
  out.x = {"x", box.x_center - box.half_width, box.x_center + box.half_width, box.n};
  out.y = {"y", box.y_center - box.half_width, box.y_center + box.half_width, box.n};
  out.values.assign(static_cast<std::size_t>(box.n) * box.n, 0.0);
  std::vector<double> cj(n_phi), sj(n_phi);
  for (int j = 0; j < n_phi; ++j) {
    cj[j] = pp * std::cos(2 * pi * j / n_phi);
    sj[j] = pp * std::sin(2 * pi * j / n_phi);
  }
  parallel_chunks(static_cast<std::size_t>(box.n), settings.threads,
                  [&](std::size_t b, std::size_t e, int) {
                    Eigen::VectorXcd a(n_phi);
                    for (std::size_t ix = b; ix < e; ++ix) {
                      const double dx = out.x.at(static_cast<int>(ix)) - box.x_center;
                      for (int iy = 0; iy < box.n; ++iy) {
                        const double dy = out.y.at(iy) - box.y_center;
                        for (int j = 0; j < n_phi; ++j) a(j) = std::polar(1.0, cj[j] * dx + sj[j] * dy);
                        const double v = (a.adjoint() * C * a)(0).real();
                        out.values[ix * box.n + iy] = std::max(v, 0.0);
                      }
                    }
                  });
  const double cell = (out.x.max - out.x.min) / (box.n - 1) * (out.y.max - out.y.min) / (box.n - 1);
  double total = 0;
  for (double v : out.values) total += v;
  total *= cell;
  if (!(total > 0)) throw NumericalError("snapshot: empty density in box", total);
  for (double& v : out.values) v /= total;
  return out;
}

SliceMoments slice_moments(const SliceSet& sl) {
  SliceMoments m;
  const std::size_t nz = sl.z.size();
  const double dphi = 2 * pi / sl.n_phi;
  for (int j = 0; j < sl.n_phi; ++j)
    for (std::size_t i = 0; i < nz; ++i) {
      const Bispinor& G = sl.at(j, i);
      const double w = dphi * sl.wz[i];
      const double n2 = G.squaredNorm();
      m.norm += w * n2;
      m.z += w * sl.z[i] * n2;
      m.vx += w * 2 * (std::conj(G(0)) * G(3) + std::conj(G(1)) * G(2)).real();
      m.vy += w * 2 * ((std::conj(G(0)) * G(3)).imag() - (std::conj(G(1)) * G(2)).imag());
      m.vz += w * 2 * (std::conj(G(0)) * G(2) - std::conj(G(1)) * G(3)).real();
    }
  if (!(m.norm > 0)) throw NumericalError("slice moments: zero norm", 0.0);
  m.z /= m.norm;
  m.vx *= c / m.norm;
  m.vy *= c / m.norm;
  m.vz *= c / m.norm;
  return m;
}

PositionSeries position_mean(const MomentumAmplitude& amp, const LaserPulse& pulse,
                             const std::vector<double>& times, const SeriesSettings& settings) {
  const std::size_t n = times.size();
  if (n < 2) throw ConfigError("position_mean: need at least two times");
  const double lead = times[0] - amp.t_in;
  if (lead < -1e-9 * std::max(1.0, std::abs(amp.t_in)))
    throw ConfigError("position_mean: first time precedes t_in");
  const double h = times[1] - times[0];
  if (!(h > 0)) throw ConfigError("position_mean: times must increase");
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs(times[k] - times[k - 1] - h) > 1e-9 * h)
      throw ConfigError("position_mean: times must be uniformly spaced");

  PositionSeries out;
  out.t = times;
  out.x.assign(n, Vec3::Zero());
  out.v.assign(n, Vec3::Zero());
  for (std::size_t k = 0; k < n; ++k) {
    auto win = plan_z_window(amp, pulse, times[k], settings.window);
    if (k == 0 && lead > 0 && c * times[0] + win.z_max > -pulse.xi_max())
      throw DomainError("position_mean: packet reaches the pulse before the first time");
    auto sl = compute_slices(amp, pulse, times[k], win, settings.n_phi, 0.0, 0.0, settings.threads,
                             settings.window.alias_factor);
    auto m = slice_moments(sl);
    out.v[k] = Vec3(m.vx, m.vy, m.vz);
    out.x[k].z() = m.z;
  }
  // cumulative fourth-order integration of the transverse velocity
  for (int d = 0; d < 2; ++d) {
    auto f = [&](std::size_t k) { return out.v[k](d); };
    // free drift from t_in
    double acc = lead > 0 ? f(0) * lead : 0.0;
    out.x[0](d) = acc;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      double inc;
      if (n < 4)
        inc = 0.5 * h * (f(k) + f(k + 1));
      else if (k == 0)
        inc = h * (9 * f(0) + 19 * f(1) - 5 * f(2) + f(3)) / 24;
      else if (k + 2 == n)
        inc = h * (f(k - 2) - 5 * f(k - 1) + 19 * f(k) + 9 * f(k + 1)) / 24;
      else
        inc = h * (-f(k - 1) + 13 * f(k) + 13 * f(k + 1) - f(k + 2)) / 24;
      acc += inc;
      out.x[k + 1](d) = acc;
    }
  }
  return out;
}

AngularMomentumReport angular_momentum_stats(const MomentumAmplitude& amp, const LaserPulse& pulse,
                                             double t, int n_phi, const WindowPolicy& window) {
  if (n_phi < 8 || (n_phi & (n_phi - 1)) != 0)
    throw ConfigError("angular momentum: n_phi must be a power of two, at least 8");
  const std::size_t np = amp.p.size();
  if (np < 5) throw ConfigError("angular momentum: need at least 5 p nodes");

  // the packet must sit entirely in front of or behind the pulse
  const auto win = plan_z_window(amp, pulse, t, window);
  const double xm = pulse.xi_max();
  double A0 = 0, R1 = 0, R2 = 0;
  if (c * t + win.z_min >= xm) {
    const auto s = pulse.sample(xm);
    A0 = s.A;
    R1 = s.IA - s.A * xm;
    R2 = s.IA2 - s.A * s.A * xm;
  } else if (!(c * t + win.z_max <= -xm)) {
    throw DomainError("angular momentum: packet overlaps the pulse at t = " + fmt(t) +
                      "; evaluate before entry or after exit");
  }

  const double pp = amp.spec.p_perp;
  const double dp = amp.dp();
  const double dphi = 2 * pi / n_phi;
  // U(p, phi) and the derivative pieces; layout [i][j][component]
  std::vector<cplx> U(np * n_phi * 4), Uphi;
  std::vector<double> kp(np * n_phi), ratio(np * n_phi), Dth(np * n_phi);
  for (std::size_t i = 0; i < np; ++i) {
    const double p = amp.p[i];
    const double eps = units::energy(pp * pp + p * p);
    const double lam = lambda_of(pp, p);
    const double lam_p = c * c * p / eps + c;
    const double a = A0 / (2 * lam);
    for (int j = 0; j < n_phi; ++j) {
      const double ph = j * dphi;
      const double px = pp * std::cos(ph), py = pp * std::sin(ph);
      const double kap = (px * A0 + A0 * A0 / (2 * c)) / lam;
      const double kap_p = -kap * lam_p / lam;
      const double kap_f = -py * A0 / lam;
      const double ph0 = (px * R1 + R2 / (2 * c)) / lam;
      const double ph0_p = -ph0 * lam_p / lam;
      const double ph0_f = -py * R1 / lam;
      const double th_p = (c * c * p / eps + c * kap_p) * t + ph0_p;
      const double th_f = c * kap_f * t + ph0_f;
      const double k = 1.0 - kap_p;
      const std::size_t ij = i * n_phi + j;
      kp[ij] = k;
      ratio[ij] = kap_f / k;
      Dth[ij] = th_f + ratio[ij] * th_p;
      const Bispinor f = amp.value(i, ph);
      const cplx u = f(0) + f(2), v = f(3) - f(1);
      cplx* o = &U[4 * ij];
      o[0] = (f(0) + a * v) / k;
      o[1] = (f(1) + a * u) / k;
      o[2] = (f(2) - a * v) / k;
      o[3] = (f(3) + a * u) / k;
    }
  }

  // aliasing check on the phi dependence
  double tail = 0, peak = 0;
  std::vector<double> colnorm(np * 4);
  std::vector<cplx> col(n_phi);
  for (std::size_t i = 0; i < np; ++i)
    for (int k = 0; k < 4; ++k) {
      double s2 = 0;
      for (int j = 0; j < n_phi; ++j) s2 += std::norm(U[4 * (i * n_phi + j) + k]);
      colnorm[4 * i + k] = std::sqrt(s2);
      peak = std::max(peak, colnorm[4 * i + k]);
    }
  for (std::size_t i = 0; i < np; ++i)
    for (int k = 0; k < 4; ++k) {
      if (colnorm[4 * i + k] < 1e-6 * peak) continue;
      for (int j = 0; j < n_phi; ++j) col[j] = U[4 * (i * n_phi + j) + k];
      tail = std::max(tail, num::spectral_tail_fraction(col) * colnorm[4 * i + k] / peak);
    }
  if (tail > 1e-6)
    throw NumericalError("angular momentum: phi resolution too coarse (tail " + fmt(tail) +
                             "); increase n_phi",
                         tail);

  Uphi = U;
  for (std::size_t i = 0; i < np; ++i) num::spectral_derivative_batch(&Uphi[4 * i * n_phi], n_phi, 4);

  auto dU_dp = [&](std::size_t i, std::size_t jk) -> cplx {
    auto at = [&](std::size_t ii) { return U[4 * ii * n_phi + jk]; };
    if (i >= 2 && i + 2 < np)
      return (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12 * dp);
    if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2 * dp);
    if (i + 1 == np) return (3.0 * at(i) - 4.0 * at(i - 1) + at(i - 2)) / (2 * dp);
    return (at(i + 1) - at(i - 1)) / (2 * dp);
  };

  double N = 0, J1 = 0, J2 = 0, S1 = 0, L1 = 0, Px = 0, Py = 0, Pxx = 0, Pyy = 0, Pxy = 0, JPx = 0, JPy = 0;
  const cplx I(0, 1);
  for (std::size_t i = 0; i < np; ++i)
    for (int j = 0; j < n_phi; ++j) {
      const std::size_t ij = i * n_phi + j;
      const double mu = kp[ij] * amp.w[i] * dphi;
      const double ph = j * dphi;
      const double px = pp * std::cos(ph), py = pp * std::sin(ph);
      double u2 = 0, uw = 0, w2 = 0, sz = 0, ul = 0;
      for (int k = 0; k < 4; ++k) {
        const cplx Uk = U[4 * ij + k];
        const double sgn = (k % 2 == 0) ? 0.5 : -0.5;
        const cplx WL = -I * (Uphi[4 * ij + k] + ratio[ij] * dU_dp(i, 4 * j + k)) - Dth[ij] * Uk;
        const cplx W = WL + sgn * Uk;
        ul += (std::conj(Uk) * WL).real();
        u2 += std::norm(Uk);
        uw += (std::conj(Uk) * W).real();
        w2 += std::norm(W);
        sz += sgn * std::norm(Uk);
      }
      N += mu * u2;
      J1 += mu * uw;
      J2 += mu * w2;
      S1 += mu * sz;
      L1 += mu * ul;
      Px += mu * px * u2;
      Py += mu * py * u2;
      Pxx += mu * px * px * u2;
      Pyy += mu * py * py * u2;
      Pxy += mu * px * py * u2;
      JPx += mu * px * uw;
      JPy += mu * py * uw;
    }

  AngularMomentumReport r;
  r.time = t;
  r.S_E = pulse.S_E();
  r.norm = N;
  r.spectral_tail = tail;
  r.J_mean = J1 / N;
  r.J2_mean = J2 / N;
  r.S_mean = S1 / N;
  r.L_mean = L1 / N;
  r.DJ = std::sqrt(std::max(0.0, r.J2_mean - r.J_mean * r.J_mean));
  // minimize Var(J - x P_y + y P_x) over the axis position (x, y)
  const double vJ = r.DJ * r.DJ;
  const double mx = Px / N, my = Py / N;
  const double Vx = Pxx / N - mx * mx, Vy = Pyy / N - my * my, Cxy = Pxy / N - mx * my;
  const double CJx = JPx / N - r.J_mean * mx, CJy = JPy / N - r.J_mean * my;
  const double det = Vx * Vy - Cxy * Cxy;
  if (det > 0) {
    r.axis_x = (Vx * CJy - Cxy * CJx) / det;
    r.axis_y = (Cxy * CJy - Vy * CJx) / det;
  }
  const double x0 = r.axis_x, y0 = r.axis_y;
  const double v = vJ - 2 * x0 * CJy + 2 * y0 * CJx + x0 * x0 * Vy + y0 * y0 * Vx - 2 * x0 * y0 * Cxy;
  r.DJ_intrinsic = std::sqrt(std::max(0.0, v));
  return r;
}

double angular_momentum_position_space(const MomentumAmplitude& amp, const LaserPulse& pulse,
                                       double t, double R, int rho_panels, int n_ang, int n_phi,
                                       const WindowPolicy& window, int threads) {
  if (n_ang < 8 || (n_ang & (n_ang - 1)) != 0)
    throw ConfigError("position-space J: n_ang must be a power of two, at least 8");
  const auto win = plan_z_window(amp, pulse, t, window);
  const auto sl = compute_slices(amp, pulse, t, win, n_phi, 0.0, 0.0, threads, window.alias_factor);
  const auto rq = num::gauss_legendre_panels(rho_panels, 8, 0.0, R);
  const std::size_t nr = rq.x.size(), nz = sl.z.size();
  const double pp = amp.spec.p_perp;
  // plane-wave table e^{i p_j . x} on the polar grid
  std::vector<cplx> E(nr * n_ang * n_phi);
  for (std::size_t r = 0; r < nr; ++r)
    for (int a = 0; a < n_ang; ++a)
      for (int j = 0; j < n_phi; ++j)
        E[(r * n_ang + a) * n_phi + j] =
            std::polar(1.0, pp * rq.x[r] * std::cos(2 * pi * (double(j) / n_phi - double(a) / n_ang)));
  std::vector<double> num(nz, 0.0), den(nz, 0.0);
  parallel_chunks(nz, threads, [&](std::size_t b, std::size_t e, int) {
    std::vector<cplx> psi(n_ang * 4), dpsi;
    for (std::size_t i = b; i < e; ++i) {
      for (std::size_t r = 0; r < nr; ++r) {
        std::fill(psi.begin(), psi.end(), cplx(0));
        for (int a = 0; a < n_ang; ++a) {
          const cplx* er = &E[(r * n_ang + a) * n_phi];
          for (int j = 0; j < n_phi; ++j) {
            const Bispinor& G = sl.at(j, i);
            for (int k = 0; k < 4; ++k) psi[4 * a + k] += er[j] * G(k);
          }
        }
        dpsi = psi;
        num::spectral_derivative_batch(dpsi.data(), n_ang, 4);
        const double w = rq.w[r] * rq.x[r] * sl.wz[i];
        for (int a = 0; a < n_ang; ++a)
          for (int k = 0; k < 4; ++k) {
            const cplx f = psi[4 * a + k];
            const double sgn = (k % 2 == 0) ? 0.5 : -0.5;
            num[i] += w * (std::conj(f) * (cplx(0, -1) * dpsi[4 * a + k] + sgn * f)).real();
            den[i] += w * std::norm(f);
          }
      }
    }
  });
  double n1 = 0, d1 = 0;
  for (std::size_t i = 0; i < nz; ++i) {
    n1 += num[i];
    d1 += den[i];
  }
  if (!(d1 > 0)) throw NumericalError("position-space J: zero density", 0.0);
  return n1 / d1;
}

std::vector<SweepRow> cep_sweep(const BeamSpec& spec, const PulseParams& base,
                                const std::vector<double>& phis, const SweepSettings& settings) {
  if (phis.empty()) throw ConfigError("cep_sweep: empty phi list");
  const double L = settings.L > 0 ? settings.L : default_L(spec);
  const double margin = settings.margin > 0 ? settings.margin : 3 * L;
  std::vector<SweepRow> rows;
  for (double phi : phis) {
    PulseParams pp = base;
    pp.phi = phi;
    LaserPulse pulse(pp);
    const double t_in = entry_time(pulse, L);
    auto amp = packet_coefficients_delta(spec, pulse, t_in, L, settings.grid);
    SweepRow row;
    row.phi = phi;
    row.S_E = pulse.S_E();
    row.t_out = exit_time(amp, pulse, margin, settings.window);
    row.report = angular_momentum_stats(amp, pulse, row.t_out, settings.n_phi, settings.window);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace twist
