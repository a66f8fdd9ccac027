#include "twist/numerics.hpp"

#include <fftw3.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "twist/errors.hpp"

namespace twist::num {

namespace {

constexpr double kPi = 3.14159265358979323846;

// start order for the downward recurrence
int miller_start(int nmax, double x) {
  double m = std::max<double>(nmax, x);
  int N = static_cast<int>(m + 24.0 + 14.0 * std::cbrt(m));
  return N + (N & 1);
}

bool is_pow2(std::size_t n) { return n && !(n & (n - 1)); }

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void bessel_j_range(int nmax, double x, std::span<double> out) {
  if (nmax < 0 || out.size() < static_cast<std::size_t>(nmax) + 1)
    throw DomainError("bessel_j_range: bad output span");
  double sgn = 1.0;
  if (x < 0) {
    x = -x;
    sgn = -1.0;
  }
  if (x == 0.0) {
    out[0] = 1.0;
    for (int n = 1; n <= nmax; ++n) out[n] = 0.0;
    return;
  }
  const int N = miller_start(nmax, x);
  double jp = 0.0, j = 1e-300, sum = 0.0;
  for (int n = N; n > 0; --n) {
    double jm = 2.0 * n / x * j - jp;
    jp = j;
    j = jm;
    // j now holds the unnormalized J_{n-1}
    if (n - 1 <= nmax) out[n - 1] = j;
    if (((n - 1) & 1) == 0 && n - 1 > 0) sum += 2.0 * j;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp *= 1e-250;
      sum *= 1e-250;
      for (int k = n - 1; k <= nmax; ++k) out[k] *= 1e-250;
    }
  }
  sum += j;
  const double scale = 1.0 / sum;
  for (int n = 0; n <= nmax; ++n) {
    out[n] *= scale;
    if (sgn < 0 && (n & 1)) out[n] = -out[n];
  }
}

double bessel_j(int n, double x, int cap) {
  if (std::abs(n) > cap)
    throw DomainError("bessel_j: order " + std::to_string(n) + " beyond cap " +
                      std::to_string(cap));
  int an = std::abs(n);
  std::vector<double> v(an + 1);
  bessel_j_range(an, x, v);
  double r = v[an];
  return (n < 0 && (an & 1)) ? -r : r;
}

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const QuadratureRule& rule) {
  double err = 0.0, l1 = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, rule.max_depth, rule.rel_tol, &err, &l1);
  // |K15 - G7| summed over leaves; pessimistic
  double abs_err = err;
  if (!std::isfinite(v) || abs_err > std::max(rule.abs_tol, rule.rel_tol * l1) * 100.0)
    throw NumericalError("integrate_1d: no convergence, error estimate " + std::to_string(abs_err),
                         v);
  return {v, abs_err};
}

QuadResult integrate_panels(const std::function<double(double)>& f, double a, double b, int pieces,
                            const QuadratureRule& rule) {
  if (pieces < 1 || !std::isfinite(a) || !std::isfinite(b))
    throw DomainError("integrate_panels: finite interval and pieces >= 1 required");
  QuadResult r{0.0, 0.0};
  double d = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    auto q = integrate_1d(f, a + i * d, i + 1 == pieces ? b : a + (i + 1) * d, rule);
    r.value += q.value;
    r.error += q.error;
  }
  return r;
}

NodesWeights gauss_legendre(int n, double a, double b) {
  if (n < 1) throw DomainError("gauss_legendre: n < 1");
  NodesWeights r;
  r.x.resize(n);
  r.w.resize(n);
  const double h = 0.5 * (b - a), m = 0.5 * (b + a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p = boost::math::legendre_p(n, z);
      double dp = boost::math::legendre_p_prime(n, z);
      double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double dp = boost::math::legendre_p_prime(n, z);
    double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x[i] = m - h * z;
    r.x[n - 1 - i] = m + h * z;
    r.w[i] = r.w[n - 1 - i] = w * h;
  }
  return r;
}

NodesWeights gauss_legendre_panels(int panels, int order, double a, double b) {
  NodesWeights r;
  double d = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    auto g = gauss_legendre(order, a + p * d, a + (p + 1) * d);
    r.x.insert(r.x.end(), g.x.begin(), g.x.end());
    r.w.insert(r.w.end(), g.w.begin(), g.w.end());
  }
  return r;
}

void spectral_derivative_batch(cplx* data, int n, int howmany) {
  if (!is_pow2(static_cast<std::size_t>(n)))
    throw DomainError("spectral derivative: length must be a power of two");
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    fwd = fftw_plan_many_dft(1, &n, howmany, buf, nullptr, howmany, 1, buf, nullptr, howmany, 1,
                             FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_many_dft(1, &n, howmany, buf, nullptr, howmany, 1, buf, nullptr, howmany, 1,
                             FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(fwd);
  for (int k = 0; k < n; ++k) {
    int kk = k < n / 2 ? k : k - n;
    cplx fac = (k == n / 2) ? cplx(0.0) : cplx(0.0, kk / double(n));
    for (int j = 0; j < howmany; ++j) data[static_cast<std::size_t>(k) * howmany + j] *= fac;
  }
  fftw_execute(bwd);
  std::lock_guard<std::mutex> lk(planner_mutex());
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
}

std::vector<cplx> spectral_derivative_periodic(std::span<const cplx> samples) {
  std::vector<cplx> d(samples.begin(), samples.end());
  spectral_derivative_batch(d.data(), static_cast<int>(d.size()), 1);
  return d;
}

std::vector<cplx> spectral_derivative_periodic(std::span<const double> phi,
                                               std::span<const cplx> samples) {
  const std::size_t n = samples.size();
  if (phi.size() != n) throw DomainError("spectral derivative: size mismatch");
  const double h = 2.0 * kPi / n;
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(phi[j] - phi[0] - j * h) > 1e-9 * h)
      throw DomainError("spectral derivative: grid is not uniform over [0, 2pi)");
  return spectral_derivative_periodic(samples);
}

double spectral_tail_fraction(std::span<const cplx> samples) {
  const int n = static_cast<int>(samples.size());
  std::vector<cplx> d(samples.begin(), samples.end());
  auto* buf = reinterpret_cast<fftw_complex*>(d.data());
  fftw_plan p;
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    p = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(p);
  {
    std::lock_guard<std::mutex> lk(planner_mutex());
    fftw_destroy_plan(p);
  }
  double tot = 0.0, tail = 0.0;
  for (int k = 0; k < n; ++k) {
    int kk = std::abs(k < n / 2 ? k : k - n);
    double w = std::norm(d[k]);
    tot += w;
    if (kk >= 3 * n / 8) tail += w;
  }
  return tot > 0 ? std::sqrt(tail / tot) : 0.0;
}

}  // namespace twist::num
