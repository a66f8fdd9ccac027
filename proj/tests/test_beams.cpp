#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <cmath>
#include <random>

#include "twist/beams.hpp"
#include "twist/errors.hpp"
#include "twist/numerics.hpp"
#include "twist/units.hpp"

using namespace twist;
using units::c;
using units::pi;

namespace {

Vec3 cyl(double rho, double phi, double z) {
  return Vec3(rho * std::cos(phi), rho * std::sin(phi), z);
}

// Eqs. for the helicity states, transcribed component by component
Bispinor psi_tilde(int m2, int mu, double p_par, double p_perp, const Vec3& x) {
  const double rho = std::hypot(x.x(), x.y()), phi = std::atan2(x.y(), x.x());
  const double eps = units::energy(p_par * p_par + p_perp * p_perp);
  const double th = std::atan2(p_perp, p_par);
  const double co = std::cos(th / 2), si = std::sin(th / 2);
  const double sp = std::sqrt(eps + c * c), sm = std::sqrt(eps - c * c);
  const int lo = (m2 - 1) / 2, hi = (m2 + 1) / 2;
  const cplx I(0, 1);
  const cplx elo = std::exp(I * double(lo) * phi) * num::bessel_j(lo, p_perp * rho);
  const cplx ehi = std::exp(I * double(hi) * phi) * num::bessel_j(hi, p_perp * rho);
  Bispinor v;
  if (mu > 0)
    v << sp * co * elo, I * sp * si * ehi, sm * co * elo, I * sm * si * ehi;
  else
    v << I * sp * si * elo, sp * co * ehi, -I * sm * si * elo, -sm * co * ehi;
  return std::pow(2 * pi, -1.5) * std::exp(I * p_par * x.z()) / std::sqrt(2 * eps) * v;
}

// int_0^R rho J_n(k rho)^2 drho
double bessel_sq_integral(int n, double k, double R) {
  double J = boost::math::cyl_bessel_j(n, k * R);
  double Jp = boost::math::cyl_bessel_j_prime(n, k * R);
  double x = k * R;
  return 0.5 * R * R * (Jp * Jp + (1.0 - double(n) * n / (x * x)) * J * J);
}

}  // namespace

TEST_CASE("beam parameter construction and validation") {
  auto b = bessel_spec(3, 1, 10.0, pi / 4);
  CHECK(b.p_par == doctest::Approx(10 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(b.theta0() == doctest::Approx(pi / 4).epsilon(1e-14));
  CHECK(b.m() == 3.5);
  CHECK_THROWS_AS(bessel_spec(3, 2, 10.0, pi / 4), ConfigError);
  CHECK_THROWS_AS(bessel_spec(3, 1, 10.0, 0.0), ConfigError);
  CHECK_THROWS_AS(rotated_spec(2, 1, 10.0, pi / 4), ConfigError);
  CHECK_THROWS_AS(rotated_spec(-1, 1, 10.0, pi / 4, -1.0), ConfigError);
  CHECK(rotated_spec(-1, -1, 10.0, pi / 4).m() == -0.5);
}

TEST_CASE("on-axis value vanishes for l >= 2") {
  for (int l = 2; l < 6; ++l)
    for (int s : {1, -1}) CHECK(bessel_beam(bessel_spec(l, s, 5.0, 0.7), Vec3(0, 0, 0.3)).norm() == 0.0);
  CHECK(bessel_beam(bessel_spec(0, 1, 5.0, 0.7), Vec3(0, 0, 0)).norm() > 0.0);
}

TEST_CASE("density is independent of the azimuth") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 100; ++i) {
    int l = int(U(rng) * 9) - 4;
    int s = U(rng) < 0.5 ? 1 : -1;
    auto b = bessel_spec(l, s, 0.5 + 20 * U(rng), 0.05 + 1.5 * U(rng));
    double rho = 3 * U(rng), z = U(rng);
    double n1 = bessel_beam(b, cyl(rho, 2 * pi * U(rng), z)).squaredNorm();
    double n2 = bessel_beam(b, cyl(rho, 2 * pi * U(rng), z)).squaredNorm();
    CHECK(std::abs(n1 - n2) <= 1e-13 * std::max(n1, 1e-300) + 1e-300);
    auto r = rotated_spec(2 * l + 1, s, b.p(), b.theta0());
    double r1 = rotated_beam(r, cyl(rho, 2 * pi * U(rng), z)).squaredNorm();
    double r2 = rotated_beam(r, cyl(rho, 2 * pi * U(rng), z)).squaredNorm();
    CHECK(std::abs(r1 - r2) <= 1e-13 * std::max(r1, 1e-300) + 1e-300);
  }
}

TEST_CASE("total angular momentum eigenstate") {
  const int N = 32;
  for (int l : {-3, 0, 3}) {
    for (int s : {1, -1}) {
      auto b = bessel_spec(l, s, 10.0, pi / 4);
      std::vector<Bispinor> v(N);
      for (int j = 0; j < N; ++j) v[j] = bessel_beam(b, cyl(0.37, 2 * pi * j / N, 0.1));
      double res = 0, scale = 0;
      for (int comp = 0; comp < 4; ++comp) {
        std::vector<cplx> col(N);
        for (int j = 0; j < N; ++j) col[j] = v[j](comp);
        auto d = num::spectral_derivative_periodic(col);
        double sz = (comp % 2 == 0) ? 0.5 : -0.5;
        for (int j = 0; j < N; ++j) {
          cplx Jv = cplx(0, -1) * d[j] + sz * col[j];
          res = std::max(res, std::abs(Jv - b.m() * col[j]));
          scale = std::max(scale, std::abs(col[j]));
        }
      }
      CHECK(res < 1e-8 * scale);
    }
  }
}

TEST_CASE("Bessel current closed form matches the bispinor contraction") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 50; ++i) {
    auto b = bessel_spec(int(U(rng) * 7) - 3, U(rng) < 0.5 ? 1 : -1, 0.5 + 30 * U(rng),
                         0.05 + 1.5 * U(rng));
    double rho = 4 * U(rng);
    Bispinor v = bessel_beam(b, cyl(rho, 2 * pi * U(rng), 0.2));
    double direct = v.dot(dirac::alpha(2) * v).real();
    double closed = current_density_bessel(b, rho);
    CHECK(closed >= 0.0);
    CHECK(std::abs(direct - closed) <= 1e-10 * b.p_perp / (4 * pi * pi));
  }
  auto b = bessel_spec(2, 1, 10.0, pi / 3);
  double z1 = bessel_zero(2, 1) / b.p_perp;
  CHECK(std::abs(current_density_bessel(b, z1)) < 1e-28);
}

TEST_CASE("rotated current closed form, sign structure and sum identity") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 50; ++i) {
    int m2 = 2 * (int(U(rng) * 7) - 3) + 1;
    double p = 0.5 + 30 * U(rng), th = 0.05 + 1.5 * U(rng), rho = 4 * U(rng);
    double sum_r = 0, sum_b = 0;
    for (int mu : {1, -1}) {
      auto r = rotated_spec(m2, mu, p, th);
      Bispinor v = rotated_beam(r, cyl(rho, 2 * pi * U(rng), -0.4));
      double direct = v.dot(dirac::alpha(2) * v).real();
      CHECK(std::abs(direct - current_density_rotated(r, rho)) <= 1e-10 * r.p_perp / (4 * pi * pi));
      sum_r += current_density_rotated(r, rho);
    }
    sum_b += current_density_bessel(bessel_spec((m2 - 1) / 2, 1, p, th), rho);
    sum_b += current_density_bessel(bessel_spec((m2 + 1) / 2, -1, p, th), rho);
    CHECK(std::abs(sum_r - sum_b) <= 1e-13 * p);
  }
  // zero of J_{m - mu} with J_{m + mu} nonzero: m = -1/2, mu = +1/2 -> J_{-1}, J_0
  auto r = rotated_spec(-1, 1, 10.0 * std::sqrt(2.0), pi / 4);
  double rho = bessel_zero(1, 1) / r.p_perp;
  CHECK(current_density_rotated(r, rho) < 0.0);
}

TEST_CASE("rotated beam reduces to a single Bessel beam as the angle closes") {
  const double th = 1e-7;
  auto r = rotated_spec(5, 1, 3.0, th);
  auto b = bessel_spec(2, 1, 3.0, th);
  for (double rho : {0.0, 1e5, 3e6}) {
    Vec3 x = cyl(rho, 0.4, 0.3);
    Bispinor d = rotated_beam(r, x) - bessel_beam(b, x);
    CHECK(d.norm() <= 1e-6 * std::max(bessel_beam(b, x).norm(), 1e-30));
  }
  CHECK(std::abs(current_density_rotated(r, 1e5) - current_density_bessel(b, 1e5)) <=
        1e-6 * std::abs(current_density_bessel(b, 1e5)));
}

TEST_CASE("rotated beams equal sqrt(2 pi p_perp) times the helicity states") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 40; ++i) {
    int m2 = 2 * (int(U(rng) * 9) - 4) + 1;
    int mu = U(rng) < 0.5 ? 1 : -1;
    auto r = rotated_spec(m2, mu, 0.5 + 30 * U(rng), 0.05 + 1.5 * U(rng));
    Vec3 x = cyl(3 * U(rng), 2 * pi * U(rng), U(rng));
    Bispinor t = psi_tilde(m2, mu, r.p_par, r.p_perp, x);
    Bispinor R = rotated_beam(r, x);
    CHECK((std::sqrt(2 * pi * r.p_perp) * t - R).norm() <= 1e-12 * std::max(R.norm(), 1e-3));
  }
}

TEST_CASE("mixing matrix is unitary and inverts") {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> g(0, 1);
  for (double th : {0.1, pi / 4, 1.4}) {
    Bispinor a, b;
    for (int k = 0; k < 4; ++k) {
      a(k) = cplx(g(rng), g(rng));
      b(k) = cplx(g(rng), g(rng));
    }
    auto r = rotated_from_bessel(a, b, th);
    auto back = bessel_from_rotated(r[0], r[1], th);
    CHECK((back[0] - a).norm() < 1e-12 * a.norm());
    CHECK((back[1] - b).norm() < 1e-12 * b.norm());
    CHECK(r[0].squaredNorm() + r[1].squaredNorm() ==
          doctest::Approx(a.squaredNorm() + b.squaredNorm()).epsilon(1e-13));
  }
}

TEST_CASE("beam overlap") {
  const double R = bessel_zero(3, 6) / 10.0 * std::sqrt(2.0);
  auto A = bessel_spec(3, 1, 10.0, pi / 4);
  auto B = bessel_spec(2, 1, 10.0, pi / 4);
  auto C = bessel_spec(3, -1, 10.0, pi / 4);
  CHECK(std::abs(beam_overlap(A, B, R, 5.0)) < 1e-12);
  CHECK(std::abs(beam_overlap(A, C, R, 5.0)) < 1e-12);
  cplx s1 = beam_overlap(A, A, R, 5.0), s2 = beam_overlap(A, A, R, 10.0);
  CHECK(s1.real() > 0);
  CHECK(std::abs(s1.imag()) < 1e-14 * s1.real());
  CHECK(s2.real() == doctest::Approx(2 * s1.real()).epsilon(1e-13));
  // closed form: (p_perp / 8 pi^3) 2 pi Z sum_k |a_k|^2 int rho J_{l+k}^2
  auto a = a_coefficients(A.p_par, A.p_perp, A.s);
  double ref = 0;
  for (int k = -1; k <= 1; ++k) ref += a[k].squaredNorm() * bessel_sq_integral(A.l + k, A.p_perp, R);
  ref *= A.p_perp / (8 * pi * pi) * 2 * pi * 5.0;
  CHECK(s1.real() == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("Bessel zeros") {
  CHECK(bessel_zero(0, 1) == doctest::Approx(2.4048255576957728).epsilon(1e-14));
  CHECK(bessel_zero(3, 2) == doctest::Approx(9.7610231299816697).epsilon(1e-14));
  CHECK(bessel_zero(1, 1) == doctest::Approx(3.8317059702075123).epsilon(1e-14));
}

TEST_CASE("radial current profiles of packets") {
  const double p = 10 * std::sqrt(2.0), th = pi / 4;
  std::vector<double> rho;
  const double d = pi / 10 / 8;
  for (double r = 0; r <= 1.5; r += d) rho.push_back(r);
  PacketQuadrature q{6.0, 24, 8};
  auto b1 = radial_current_profile(bessel_spec(-1, 1, p, th), rho, q);
  auto b2 = radial_current_profile(bessel_spec(0, -1, p, th), rho, q);
  auto r1 = radial_current_profile(rotated_spec(-1, 1, p, th), rho, q);
  auto r2 = radial_current_profile(rotated_spec(-1, -1, p, th), rho, q);
  double mx = 0, mn_b = 0, mn_r = 0, diff = 0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    mx = std::max(mx, b1.value[i] + b2.value[i]);
    mn_b = std::min({mn_b, b1.value[i], b2.value[i]});
    mn_r = std::min({mn_r, r1.value[i], r2.value[i]});
    diff = std::max(diff, std::abs(b1.value[i] + b2.value[i] - r1.value[i] - r2.value[i]));
  }
  CHECK(mn_b >= 0.0);
  CHECK(mn_r < -1e-3 * mx);
  CHECK(diff <= 1e-6 * mx);
  std::vector<double> coarse{0.0, 0.2, 0.4};
  CHECK_THROWS_AS(radial_current_profile(bessel_spec(-1, 1, p, th), coarse, q), ConfigError);
}

TEST_CASE("packet column density matches the profile integrand") {
  auto b = bessel_spec(3, 1, 10.0, pi / 4);
  PacketQuadrature q{8.0, 32, 8};
  // z-integral of |packet|^2 equals 2 pi int f^2 |psi_q|^2 dq, checked by brute force in z
  double rho = 0.5;
  auto g = num::gauss_legendre_panels(80, 8, -2.0, 2.0);
  double brute = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i)
    brute += g.w[i] * packet_value(b, Vec3(rho, 0, g.x[i]), 0.0, q).squaredNorm();
  CHECK(brute == doctest::Approx(packet_column_density(b, rho, q)).epsilon(1e-8));
}
