#include "twist/classical.hpp"

#include <cmath>
#include <string>

#include "twist/errors.hpp"
#include "twist/units.hpp"

namespace twist {

using units::c;
using units::pi;

namespace {

double eps_over_c(const Vec3& p) { return std::sqrt(c * c + p.squaredNorm()); }

// light-front constant lambda = eps/c + p_z without cancellation
double lambda_of(const Vec3& p) {
  double e = eps_over_c(p);
  if (p.z() >= 0) return e + p.z();
  return (c * c + p.x() * p.x() + p.y() * p.y()) / (e - p.z());
}

// kinematics along the exact path as a function of xi
struct LightFrontPath {
  const LaserPulse& pulse;
  Vec3 p0;
  Vec3 x0;
  double t0, xi0, lam, m2;  // m2 = c^2 + p0_perp^2
  PotentialSample s0;

  LightFrontPath(const LaserPulse& L, const ClassicalState& st)
      : pulse(L), p0(st.p), x0(st.x), t0(st.t), xi0(c * st.t + st.x.z()) {
    lam = lambda_of(p0);
    if (!(lam > 0)) throw DomainError("classical: light-front invariant must be positive");
    m2 = c * c + p0.x() * p0.x() + p0.y() * p0.y();
    s0 = pulse.sample(xi0);
  }

  // kinetic momentum at xi
  Vec3 momentum(const PotentialSample& s) const {
    double px = p0.x() + (s.A - s0.A) / c;
    double perp2 = c * c + px * px + p0.y() * p0.y();
    return Vec3(px, p0.y(), 0.5 * (lam - perp2 / lam));
  }

  // positions and time at xi
  ClassicalState state(double xi) const {
    auto s = pulse.sample(xi);
    double d = xi - xi0;
    double dA = s0.A;
    // int (p0x + (A - A(xi0))/c) dxi
    double ix = p0.x() * d + (s.IA - s0.IA - dA * d) / c;
    // int perp^2 dxi with px = p0x + (A - dA)/c
    double q = p0.x() - dA / c;
    double iperp = (c * c + q * q + p0.y() * p0.y()) * d + 2 * q * (s.IA - s0.IA) / c +
                   (s.IA2 - s0.IA2) / (c * c);
    ClassicalState out;
    out.p = momentum(s);
    out.x = Vec3(x0.x() + ix / lam, x0.y() + p0.y() * d / lam,
                 x0.z() + 0.5 * d - iperp / (2 * lam * lam));
    out.t = t0 + (0.5 * d + iperp / (2 * lam * lam)) / c;
    return out;
  }
};

}  // namespace

double light_front_invariant(const Vec3& p) { return lambda_of(p); }

Vec3 final_momentum(const Vec3& p0, double S_E) {
  double lam = lambda_of(p0);
  if (!(lam > 0) || !std::isfinite(lam))
    throw DomainError("final_momentum: light-front denominator eps0/c + p0z vanishes");
  return Vec3(p0.x() - S_E, p0.y(), p0.z() + S_E * (p0.x() - 0.5 * S_E) / lam);
}

std::vector<ClassicalState> trajectory_exact(const ClassicalState& start, const LaserPulse& pulse,
                                             const std::vector<double>& times) {
  LightFrontPath path(pulse, start);
  std::vector<ClassicalState> out;
  out.reserve(times.size());
  // t(xi) is strictly increasing with slope >= 1/(2c) (times (1 + m2/lam^2)); bracket then bisect
  for (double t : times) {
    double lo = path.xi0, hi = path.xi0;
    const double step0 = std::max(1.0, std::abs(t - start.t) * c);
    if (t >= start.t) {
      double st = step0;
      while (path.state(hi).t < t) { lo = hi; hi += st; st *= 2; }
    } else {
      double st = step0;
      while (path.state(lo).t > t) { hi = lo; lo -= st; st *= 2; }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
      double mid = 0.5 * (lo + hi);
      (path.state(mid).t < t ? lo : hi) = mid;
    }
    // final secant step on the bracket
    ClassicalState a = path.state(lo), b = path.state(hi);
    double xi = b.t == a.t ? lo : lo + (t - a.t) * (hi - lo) / (b.t - a.t);
    ClassicalState s = path.state(xi);
    s.t = t;
    out.push_back(s);
  }
  return out;
}

double carrier_period(const LaserPulse& pulse, const Vec3& p) {
  double v_z = c * p.z() / eps_over_c(p);
  return 2 * pi * c / pulse.params().omega / (c + v_z);
}

RK4Report trajectory_rk4(const ClassicalState& start, const LaserPulse& pulse, double t_end,
                         double dt, int sample_every) {
  if (!(dt > 0)) throw DomainError("rk4: dt must be positive");
  if (dt > carrier_period(pulse, start.p) / 64.0)
    throw DomainError("rk4: step too coarse, need at least 64 steps per carrier period (dt <= " +
                      std::to_string(carrier_period(pulse, start.p) / 64.0) + ")");
  struct D {
    Vec3 dx, dp;
  };
  auto rhs = [&](double t, const Vec3& x, const Vec3& p) {
    double e = eps_over_c(p);
    Vec3 v = c * p / e;
    double E = pulse.electric_field(c * t + x.z());
    return D{v, Vec3(-E * (1 + v.z() / c), 0.0, v.x() * E / c)};
  };
  RK4Report rep;
  ClassicalState s = start;
  const double lam0 = lambda_of(start.p);
  rep.states.push_back(s);
  const long n = static_cast<long>(std::ceil((t_end - start.t) / dt));
  const double h = (t_end - start.t) / std::max(n, 1L);
  for (long i = 0; i < n; ++i) {
    D k1 = rhs(s.t, s.x, s.p);
    D k2 = rhs(s.t + h / 2, s.x + h / 2 * k1.dx, s.p + h / 2 * k1.dp);
    D k3 = rhs(s.t + h / 2, s.x + h / 2 * k2.dx, s.p + h / 2 * k2.dp);
    D k4 = rhs(s.t + h, s.x + h * k3.dx, s.p + h * k3.dp);
    s.x += h / 6 * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx);
    s.p += h / 6 * (k1.dp + 2 * k2.dp + 2 * k3.dp + k4.dp);
    s.t = start.t + (i + 1) * h;
    rep.invariant_drift = std::max(rep.invariant_drift, std::abs(lambda_of(s.p) - lam0) / lam0);
    if ((i + 1) % sample_every == 0 || i + 1 == n) rep.states.push_back(s);
  }
  return rep;
}

MeanPath averaged_trajectory(double p_perp, double p_par, const LaserPulse& pulse, int n_phi,
                             double t0, const Vec3& x0, const std::vector<double>& times,
                             double phi_offset) {
  if (n_phi < 16) throw ConfigError("averaged_trajectory: need at least 16 azimuthal samples");
  MeanPath out{times, std::vector<Vec3>(times.size(), Vec3::Zero())};
  for (int j = 0; j < n_phi; ++j) {
    double ph = phi_offset + 2 * pi * j / n_phi;
    ClassicalState st{t0, x0, Vec3(p_perp * std::cos(ph), p_perp * std::sin(ph), p_par)};
    auto tr = trajectory_exact(st, pulse, times);
    for (std::size_t i = 0; i < times.size(); ++i) out.x[i] += tr[i].x;
  }
  for (auto& v : out.x) v /= n_phi;
  return out;
}

}  // namespace twist
