#include "twist/spinors.hpp"

#include <cmath>

#include "twist/errors.hpp"
#include "twist/units.hpp"

namespace twist {

using units::c;

namespace dirac {
namespace {

struct Tables {
  Mat4 beta, sz;
  std::array<Mat4, 3> alpha;
  std::array<Mat4, 4> gamma;
  Tables() {
    using M2 = Eigen::Matrix<cplx, 2, 2>;
    const cplx I(0, 1);
    std::array<M2, 3> s;
    s[0] << 0, 1, 1, 0;
    s[1] << 0, -I, I, 0;
    s[2] << 1, 0, 0, -1;
    beta.setZero();
    beta.diagonal() << 1, 1, -1, -1;
    for (int i = 0; i < 3; ++i) {
      alpha[i].setZero();
      alpha[i].block<2, 2>(0, 2) = s[i];
      alpha[i].block<2, 2>(2, 0) = s[i];
      gamma[i + 1] = beta * alpha[i];
    }
    gamma[0] = beta;
    sz.setZero();
    sz.diagonal() << 1, -1, 1, -1;
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

const Mat4& beta() { return tables().beta; }
const Mat4& alpha(int i) { return tables().alpha.at(i); }
const Mat4& gamma(int mu) { return tables().gamma.at(mu); }
const Mat4& sigma_z() { return tables().sz; }

Mat4 hamiltonian(const Vec3& p) {
  return c * (p.x() * alpha(0) + p.y() * alpha(1) + p.z() * alpha(2)) + c * c * beta();
}

}  // namespace dirac

namespace {

Eigen::Vector2cd spin_w(int s) {
  if (s != 1 && s != -1) throw DomainError("spin label must be +1 or -1");
  return s > 0 ? Eigen::Vector2cd(1, 0) : Eigen::Vector2cd(0, 1);
}

// c sigma.p w
Eigen::Vector2cd sigma_p(const Vec3& p, const Eigen::Vector2cd& w) {
  const cplx I(0, 1);
  return c * Eigen::Vector2cd(p.z() * w(0) + (p.x() - I * p.y()) * w(1),
                              (p.x() + I * p.y()) * w(0) - p.z() * w(1));
}

}  // namespace

Bispinor bispinor_u(const Vec3& p, int s) {
  auto w = spin_w(s);
  double eps = units::energy(p.squaredNorm());
  double n = std::sqrt((eps + c * c) / (2.0 * eps));
  Bispinor u;
  u.head<2>() = n * w;
  u.tail<2>() = n * sigma_p(p, w) / (eps + c * c);
  return u;
}

Bispinor bispinor_v(const Vec3& p, int s) {
  auto w = spin_w(s);
  double eps = units::energy(p.squaredNorm());
  double n = std::sqrt((eps + c * c) / (2.0 * eps));
  Bispinor v;
  v.head<2>() = -n * sigma_p(p, w) / (eps + c * c);
  v.tail<2>() = n * w;
  return v;
}

SpinorCoefficients a_coefficients(double p_par, double p_perp, int s) {
  if (!(p_perp > 0.0)) throw DomainError("a_coefficients: p_perp must be positive");
  auto w = spin_w(s);
  double p2 = p_par * p_par + p_perp * p_perp;
  double eps = units::energy(p2);
  double r = c * c / eps;
  double pm = std::sqrt(p2);
  double cth = p_par / pm, sth2 = p_perp * p_perp / p2;
  // 1 - c^2/eps without cancellation
  double one_minus_r = p2 / ((eps / c) * (eps / c + c));
  double sq_delta = std::sqrt(one_minus_r * sth2);
  double up = std::sqrt(1.0 + r), dn = std::sqrt(one_minus_r);
  SpinorCoefficients a;
  a.a_0 << up * w(0), up * w(1), dn * cth * w(0), -dn * cth * w(1);
  a.a_minus1 << 0, 0, w(1) * sq_delta, 0;
  a.a_plus1 << 0, 0, 0, w(0) * sq_delta;
  return a;
}

}  // namespace twist
