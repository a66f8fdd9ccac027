#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "twist/classical.hpp"
#include "twist/errors.hpp"
#include "twist/units.hpp"

using namespace twist;
using units::c;
using units::pi;

namespace {

// time at which the exact path has left the pulse
double exit_time(const ClassicalState& st, const LaserPulse& L) {
  double t = st.t + 1.0;
  for (;;) {
    auto s = trajectory_exact(st, L, {t})[0];
    if (c * s.t + s.x.z() > L.xi_max() + 1.0) return t;
    t = st.t + 2 * (t - st.t);
  }
}

}  // namespace

TEST_CASE("final momentum closed form") {
  Vec3 p0(1.5, -2.0, 30.0);
  CHECK((final_momentum(p0, 0.0) - p0).norm() == 0.0);
  for (double S : {-40.0, -1.0, 3.0, 100.0}) {
    Vec3 pf = final_momentum(p0, S);
    CHECK(pf.y() == p0.y());
    CHECK(pf.x() == doctest::Approx(p0.x() - S));
    CHECK(light_front_invariant(pf) == doctest::Approx(light_front_invariant(p0)).epsilon(1e-13));
  }
}

TEST_CASE("closed form agrees with Runge-Kutta over random draws") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0, 1);
  double worst = 0, worst_lf = 0;
  for (int i = 0; i < 100; ++i) {
    PulseParams pp;
    pp.E_star = 0.01 + 2 * U(rng);
    pp.omega = 0.1 + 0.9 * U(rng);
    pp.a = 0.5 + 2.5 * U(rng);
    pp.phi = 2 * pi * U(rng);
    pp.table_cells = 1 << 12;
    LaserPulse L(pp);
    double pm = 50 * U(rng), th = pi * U(rng) / 2, az = 2 * pi * U(rng);
    Vec3 p0(pm * std::sin(th) * std::cos(az), pm * std::sin(th) * std::sin(az), pm * std::cos(th));
    ClassicalState st{(-L.xi_max() - 1.0) / c, Vec3::Zero(), p0};
    double t1 = exit_time(st, L);
    double dt = carrier_period(L, p0) / 1000;
    auto rk = trajectory_rk4(st, L, t1, dt, 1 << 30);
    Vec3 ref = final_momentum(p0, L.S_E());
    double scale = std::max({p0.norm(), ref.norm(), pp.E_star * pp.a / pp.omega});
    worst = std::max(worst, (rk.states.back().p - ref).norm() / scale);
    worst_lf = std::max(worst_lf, rk.invariant_drift);
  }
  CHECK(worst < 1e-6);
  CHECK(worst_lf < 1e-8);
}

TEST_CASE("exact and Runge-Kutta paths coincide") {
  PulseParams pp;
  pp.E_star = 0.9986533649447692;
  pp.omega = 0.15;
  pp.a = 0.9;
  pp.phi = pi / 2;
  LaserPulse L(pp);
  double th = 11.3 * pi / 180, p = 10.187053842328957;
  ClassicalState st{(-L.xi_max() - 5.0) / c, Vec3(0.1, 0.0, -5.0),
                    Vec3(p * std::sin(th), 0.0, p * std::cos(th))};
  double t1 = exit_time(st, L) + 10.0;
  double dt = carrier_period(L, st.p) / 2000;
  auto rk = trajectory_rk4(st, L, t1, dt, 200);
  std::vector<double> ts;
  for (auto& s : rk.states) ts.push_back(s.t);
  auto ex = trajectory_exact(st, L, ts);
  double dx = 0, dp = 0, scale = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    dx = std::max(dx, (ex[i].x - rk.states[i].x).norm());
    dp = std::max(dp, (ex[i].p - rk.states[i].p).norm());
    scale = std::max(scale, ex[i].x.norm());
  }
  CHECK(dp < 1e-6 * p);
  CHECK(dx < 1e-6 * scale);
}

TEST_CASE("light-front invariant along exact paths") {
  PulseParams pp;
  pp.E_star = 9.9865;
  pp.omega = 0.15;
  pp.a = 9;
  pp.phi = pi / 2;
  LaserPulse L(pp);
  ClassicalState st{-L.xi_max() / c, Vec3::Zero(), Vec3(0.2, 0.05, 1.0)};
  std::vector<double> ts;
  for (int i = 0; i <= 200; ++i) ts.push_back(st.t + i * 2.0 * L.xi_max() / c / 200 * 3);
  double lam = light_front_invariant(st.p);
  for (auto& s : trajectory_exact(st, L, ts)) {
    CHECK(std::abs(light_front_invariant(s.p) - lam) <= 1e-10 * lam);
    CHECK(std::abs(c * s.t + s.x.z()) < 1e12);
  }
}

TEST_CASE("uniform motion without field") {
  PulseParams pp;
  pp.E_star = 0.0;
  LaserPulse L(pp);
  Vec3 p0(3, -4, 12);
  ClassicalState st{-2.0, Vec3(1, 2, 3), p0};
  Vec3 v = c * p0 / std::sqrt(c * c + p0.squaredNorm());
  auto tr = trajectory_exact(st, L, {-1.0, 0.0, 7.5});
  for (auto& s : tr) {
    CHECK((s.x - (st.x + v * (s.t - st.t))).norm() < 1e-9);
    CHECK((s.p - p0).norm() < 1e-12 * p0.norm());
  }
}

TEST_CASE("azimuthal average") {
  PulseParams pp;
  pp.E_star = 0.019246529233012106;
  pp.omega = 0.242;
  pp.a = 9;
  LaserPulse L(pp);
  double p = 328.82878103147549;
  double t0 = -L.xi_max() / c;
  std::vector<double> ts;
  for (int i = 0; i <= 50; ++i) ts.push_back(t0 + i * 2 * L.xi_max() / c / 50);
  auto m1 = averaged_trajectory(p / std::sqrt(2.0), p / std::sqrt(2.0), L, 16, t0, Vec3::Zero(), ts);
  auto m2 = averaged_trajectory(p / std::sqrt(2.0), p / std::sqrt(2.0), L, 16, t0, Vec3::Zero(), ts, 0.137);
  double xmax = 0;
  for (auto& v : m1.x) xmax = std::max(xmax, std::abs(v.x()));
  CHECK(xmax > 0);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(std::abs(m1.x[i].y()) < 1e-10 * std::max(1.0, m1.x[i].norm()));
    CHECK(std::abs(m1.x[i].x() - m2.x[i].x()) < 1e-8 * std::max(xmax, 1e-12));
  }
  CHECK_THROWS_AS(averaged_trajectory(1, 1, L, 8, t0, Vec3::Zero(), ts), ConfigError);
}

TEST_CASE("coarse Runge-Kutta step is rejected") {
  PulseParams pp;
  pp.E_star = 0.1;
  LaserPulse L(pp);
  ClassicalState st{0.0, Vec3::Zero(), Vec3(0, 0, 1)};
  CHECK_THROWS_AS(trajectory_rk4(st, L, 10.0, carrier_period(L, st.p) / 10, 1), DomainError);
}
