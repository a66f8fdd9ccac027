#pragma once
#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace twist::num {

using cplx = std::complex<double>;

inline constexpr int kBesselOrderCap = 64;

// J_n(x), integer n with |n| <= cap
double bessel_j(int n, double x, int cap = kBesselOrderCap);

// J_0..J_nmax at x (Miller backward recurrence), out.size() == nmax + 1
void bessel_j_range(int nmax, double x, std::span<double> out);

struct QuadratureRule {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  unsigned max_depth = 20;
};

struct QuadResult {
  double value;
  double error;
};

// adaptive Gauss-Kronrod (7/15); infinite endpoints allowed
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadratureRule& rule = {});

// integrate_1d over `pieces` equal sub-intervals of a finite [a, b]
QuadResult integrate_panels(const std::function<double(double)>& f, double a, double b, int pieces,
                            const QuadratureRule& rule = {});

struct NodesWeights {
  std::vector<double> x;
  std::vector<double> w;
};

// n-point Gauss-Legendre on [a, b]
NodesWeights gauss_legendre(int n, double a, double b);

// composite Gauss-Legendre: `panels` equal panels of `order` points each
NodesWeights gauss_legendre_panels(int panels, int order, double a, double b);

// d/dphi of samples on the uniform grid phi_j = 2 pi j / N, N a power of two
std::vector<cplx> spectral_derivative_periodic(std::span<const cplx> samples);
std::vector<cplx> spectral_derivative_periodic(std::span<const double> phi,
                                               std::span<const cplx> samples);

// in-place derivative of `howmany` interleaved columns (stride howmany, length n)
void spectral_derivative_batch(cplx* data, int n, int howmany);

// fraction of spectral weight in the top quarter of |k| (aliasing indicator)
double spectral_tail_fraction(std::span<const cplx> samples);

}  // namespace twist::num
