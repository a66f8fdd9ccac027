#pragma once
#include <Eigen/Dense>
#include <array>
#include <complex>

namespace twist {

using cplx = std::complex<double>;
using Bispinor = Eigen::Matrix<cplx, 4, 1>;
using Mat4 = Eigen::Matrix<cplx, 4, 4>;
using Vec3 = Eigen::Vector3d;

// Dirac (standard) representation
namespace dirac {
const Mat4& beta();
const Mat4& alpha(int i);  // i = 0, 1, 2 for x, y, z
const Mat4& gamma(int mu); // mu = 0..3
const Mat4& sigma_z();     // Sigma_z = diag(1, -1, 1, -1)
Mat4 hamiltonian(const Vec3& p);  // c alpha.p + beta c^2
}  // namespace dirac

// spin label s = +1/2 -> +1, s = -1/2 -> -1
Bispinor bispinor_u(const Vec3& p, int s);
Bispinor bispinor_v(const Vec3& p, int s);

struct SpinorCoefficients {
  Bispinor a_minus1;
  Bispinor a_0;
  Bispinor a_plus1;
  const Bispinor& operator[](int k) const { return k < 0 ? a_minus1 : (k == 0 ? a_0 : a_plus1); }
};

// Bessel-beam spinor coefficients; cos(theta0) = p_par / |p| keeps its sign
SpinorCoefficients a_coefficients(double p_par, double p_perp, int s);

}  // namespace twist
