#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "twist/classical.hpp"
#include "twist/errors.hpp"
#include "twist/observables.hpp"
#include "twist/units.hpp"

using namespace twist;
using units::c;
using units::pi;

namespace {

PulseParams fig2_pulse() {
  PulseParams p;
  p.E_star = units::intensity_to_field(1.3e13);
  p.omega = 0.242;
  p.a = 9;
  return p;
}

BeamSpec fig2_beam() { return bessel_spec(3, 1, units::kinetic_energy_to_momentum(817.4), pi / 4); }

PulseParams fig7_pulse(double phi) {
  PulseParams p;
  p.E_star = units::intensity_to_field(3.5e16);
  p.omega = 0.15;
  p.a = 0.9;
  p.phi = phi;
  return p;
}

BeamSpec fig7_beam() {
  return bessel_spec(3, 1, units::kinetic_energy_to_momentum(1.41), 11.3 * pi / 180);
}

MomentumAmplitude initial(const BeamSpec& spec, const LaserPulse& pulse, AmplitudeGrid g = {}) {
  double L = default_L(spec);
  return packet_coefficients_delta(spec, pulse, entry_time(pulse, L), L, g);
}

// l + s (1 - c^2/eps) sin^2 theta0 at each p_par', averaged over the packet
double packet_averaged_L(const MomentumAmplitude& amp) {
  double num = 0, den = 0;
  const double pp = amp.spec.p_perp;
  for (std::size_t i = 0; i < amp.p.size(); ++i) {
    double p = amp.p[i], eps = units::energy(pp * pp + p * p);
    double s2 = pp * pp / (pp * pp + p * p);
    double w = amp.w[i] * amp.g[i].squaredNorm();
    num += w * (amp.spec.l + 0.5 * amp.spec.s * (1 - c * c / eps) * s2);
    den += w;
  }
  return num / den;
}

}  // namespace

TEST_CASE("angular momentum of the initial packet") {
  LaserPulse pulse(fig2_pulse());
  auto amp = initial(fig2_beam(), pulse);
  auto r = angular_momentum_stats(amp, pulse, amp.t_in);
  CHECK(std::abs(r.J_mean - 3.5) < 1e-8);
  CHECK(r.DJ < 1e-6);
  CHECK(std::abs(r.L_mean - packet_averaged_L(amp)) < 1e-8);
  CHECK(std::abs(r.J_mean - r.L_mean - r.S_mean) < 1e-10);
  CHECK(std::abs(r.norm - 1) < 1e-10);
  const auto& sp = amp.spec;
  double central = sp.l + 0.5 * (1 - c * c / sp.eps()) * std::pow(std::sin(sp.theta0()), 2);
  CHECK(std::abs(r.L_mean - central) < 1e-3);
}

TEST_CASE("angular momentum of a rotated packet") {
  LaserPulse pulse(fig2_pulse());
  auto spec = rotated_spec(-1, 1, std::sqrt(200.0), pi / 4);
  auto amp = initial(spec, pulse);
  auto r = angular_momentum_stats(amp, pulse, amp.t_in);
  CHECK(std::abs(r.J_mean + 0.5) < 1e-8);
  CHECK(r.DJ < 1e-6);
}

TEST_CASE("angular momentum after a unipolar pulse") {
  auto spec = fig7_beam();
  LaserPulse uni(fig7_pulse(pi / 2)), bal(fig7_pulse(0.0));
  auto a_uni = initial(spec, uni), a_bal = initial(spec, bal);
  double L = default_L(spec);
  auto r_uni = angular_momentum_stats(a_uni, uni, exit_time(a_uni, uni, 3 * L));
  auto r_bal = angular_momentum_stats(a_bal, bal, exit_time(a_bal, bal, 3 * L));
  CHECK(std::abs(r_uni.norm - 1) < 1e-6);
  CHECK(std::abs(r_uni.J_mean - r_uni.L_mean - r_uni.S_mean) < 1e-10);
  CHECK(std::abs(r_uni.J_mean - 3.5) < 0.2);
  CHECK(r_uni.DJ > 5 * r_bal.DJ);
  CHECK(r_uni.DJ_intrinsic <= r_uni.DJ + 1e-12);
  MESSAGE("DJ unipolar " << r_uni.DJ << " (intrinsic " << r_uni.DJ_intrinsic << "), balanced "
                         << r_bal.DJ << " (intrinsic " << r_bal.DJ_intrinsic << "), J " << r_uni.J_mean);
}

TEST_CASE("angular momentum inside the pulse is refused") {
  LaserPulse pulse(fig7_pulse(pi / 2));
  auto amp = initial(fig7_beam(), pulse);
  CHECK_THROWS_AS(angular_momentum_stats(amp, pulse, 0.0), DomainError);
}

TEST_CASE("position-space angular momentum agrees at t_in") {
  LaserPulse pulse(fig7_pulse(0.0));
  auto amp = initial(fig7_beam(), pulse);
  double R = default_half_width(amp.spec);
  double J = angular_momentum_position_space(amp, pulse, amp.t_in, R, 16, 64, 64);
  double Jm = angular_momentum_stats(amp, pulse, amp.t_in).J_mean;
  CHECK(std::abs(J - Jm) < 1e-4);
}

TEST_CASE("initial snapshot is the packet column density") {
  PulseParams free = fig7_pulse(0.0);
  free.E_star = 0.0;
  LaserPulse pulse(free);
  auto spec = fig7_beam();
  auto coarse = initial(spec, pulse);
  AmplitudeGrid g;
  g.dp = required_dp(coarse, pulse, {coarse.t_in, coarse.t_in + 0.5});
  auto amp = initial(spec, pulse, g);
  for (double dt : {0.0, 0.5}) {
    double t = amp.t_in + dt;
    auto box = default_box(amp, pulse, t, 33);
    auto grid = density_snapshot(amp, pulse, t, box);
    CHECK(grid.x.min < grid.x.max);
    std::vector<double> ref(grid.values.size());
    double s = 0;
    for (int ix = 0; ix < box.n; ++ix)
      for (int iy = 0; iy < box.n; ++iy) {
        double rho = std::hypot(grid.x.at(ix), grid.y.at(iy));
        ref[ix * box.n + iy] = packet_column_density(amp.spec, rho);
        s += ref[ix * box.n + iy];
      }
    double cell = std::pow(2 * box.half_width / (box.n - 1), 2);
    double num = 0, den = 0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      ref[k] /= s * cell;
      num += std::pow(grid.values[k] - ref[k], 2);
      den += ref[k] * ref[k];
    }
    CHECK(std::sqrt(num / den) < 1e-4);
    CHECK(grid.value(box.n / 2, box.n / 2) < 1e-3 * *std::max_element(ref.begin(), ref.end()));
  }
}

TEST_CASE("snapshot box must hold the classical center") {
  LaserPulse pulse(fig7_pulse(0.0));
  auto amp = initial(fig7_beam(), pulse);
  SnapshotBox box;
  box.x_center = 5.0;
  box.half_width = 1.0;
  CHECK_THROWS_AS(density_snapshot(amp, pulse, amp.t_in, box), ConfigError);
}

TEST_CASE("mean position through a unipolar pulse") {
  LaserPulse pulse(fig7_pulse(pi / 2));
  auto spec = fig7_beam();
  spec.sigma = 2.0;
  double L = default_L(spec), t_in = entry_time(pulse, L);
  std::vector<double> times;
  double t_end = t_in + 2 * (L + pulse.xi_max()) / c;
  const int n = 81;
  for (int k = 0; k < n; ++k) times.push_back(t_in + (t_end - t_in) * k / (n - 1));
  WindowPolicy win;
  win.sigmas = 3.5;
  AmplitudeGrid g;
  g.span = 4.5;
  g.dp = required_dp(initial(spec, pulse), pulse, times, win);
  auto amp = packet_coefficients_delta(spec, pulse, t_in, L, g);
  SeriesSettings st;
  st.window = win;
  auto series = position_mean(amp, pulse, times, st);
  auto cl = averaged_trajectory(spec.p_perp, spec.p_par, pulse, 32, t_in, Vec3::Zero(), times);
  double peak = 0, dev = 0, ymax = 0;
  for (int k = 0; k < n; ++k) {
    peak = std::max(peak, std::abs(cl.x[k].x()));
    dev = std::max(dev, std::abs(series.x[k].x() - cl.x[k].x()));
    ymax = std::max(ymax, std::abs(series.x[k].y()));
  }
  MESSAGE("peak " << peak << " dev " << dev << " ymax " << ymax << " N_p " << amp.p.size());
  CHECK(series.x[0].norm() < 1e-10);
  // two cells of a 64-point snapshot box
  CHECK(ymax < 2 * 2 * default_half_width(spec) / 63);
  CHECK(dev < 0.05 * peak);
}

TEST_CASE("mean position series may start late but not inside the pulse") {
  LaserPulse pulse(fig7_pulse(pi / 2));
  auto spec = fig7_beam();
  spec.sigma = 2.0;
  auto amp = initial(spec, pulse);
  const double h = 1e-3;
  CHECK_THROWS_AS(position_mean(amp, pulse, {amp.t_in - h, amp.t_in}), ConfigError);
  auto late = position_mean(amp, pulse, {amp.t_in + h, amp.t_in + 2 * h});
  CHECK(late.x[0].head<2>().norm() < 1e-12);
  CHECK_THROWS_AS(position_mean(amp, pulse, {0.0, h}), DomainError);
}
