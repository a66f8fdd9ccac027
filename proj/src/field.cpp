#include "twist/field.hpp"

#include <cmath>

#include "twist/errors.hpp"
#include "twist/numerics.hpp"
#include "twist/units.hpp"

namespace twist {

using units::c;
using units::pi;

double support_bounds(double a, double omega, double tol) {
  if (!(tol > 0.0) || tol >= 1.0) throw DomainError("support tolerance must lie in (0, 1)");
  if (!(a > 0.0) || !(omega > 0.0)) throw DomainError("envelope width and frequency must be positive");
  return c * a / omega * std::sqrt(std::log(1.0 / tol));
}

FieldArea field_area(const PulseParams& p) {
  double A0 = -std::sqrt(pi) * c * p.a * p.E_star / p.omega * std::exp(-p.a * p.a / 4.0) *
              std::sin(p.phi);
  return {-A0 / c, A0};
}

LaserPulse::LaserPulse(const PulseParams& p) : p_(p) {
  if (!(p.E_star >= 0.0)) throw DomainError("E* must be non-negative");
  if (p.table_cells < 16 || (p.table_cells & 1)) throw DomainError("table_cells must be even and >= 16");
  xi_max_ = support_bounds(p.a, p.omega, p.support_tol);
  A0_ = field_area(p).A0;
  const int n = p.table_cells;
  h_ = 2.0 * xi_max_ / n;
  xi_.resize(n + 1);
  A_.resize(n + 1);
  IA_.resize(n + 1);
  IA2_.resize(n + 1);
  E_.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    xi_[i] = -xi_max_ + i * h_;
    E_[i] = electric_field(xi_[i]);
  }

  // left tail beyond the support, tiny but kept for the plateau closure
  double tail = 0.0;
  if (p.E_star > 0.0) {
    auto f = [this](double x) { return electric_field(x); };
    tail = num::integrate_panels(f, -2.0 * xi_max_, -xi_max_, 4, {1e-300, 1e-10, 30}).value;
  }
  A_[0] = -tail;
  IA_[0] = 0.0;
  IA2_[0] = 0.0;
  // per cell: Simpson on half cells for A, Simpson on the full cell for I_A, I_A2
  for (int i = 0; i < n; ++i) {
    double x0 = xi_[i], q = 0.25 * h_;
    double e0 = electric_field(x0), e1 = electric_field(x0 + q), e2 = electric_field(x0 + 2 * q),
           e3 = electric_field(x0 + 3 * q), e4 = electric_field(x0 + 4 * q);
    double Am = A_[i] - (2 * q) / 6.0 * (e0 + 4 * e1 + e2);
    A_[i + 1] = Am - (2 * q) / 6.0 * (e2 + 4 * e3 + e4);
    IA_[i + 1] = IA_[i] + h_ / 6.0 * (A_[i] + 4 * Am + A_[i + 1]);
    IA2_[i + 1] = IA2_[i] + h_ / 6.0 * (A_[i] * A_[i] + 4 * Am * Am + A_[i + 1] * A_[i + 1]);
  }
}

double LaserPulse::electric_field(double xi) const {
  double eta = p_.omega * xi / c;
  return p_.E_star * std::exp(-eta * eta / (p_.a * p_.a)) * std::sin(eta + p_.phi);
}

double LaserPulse::S_E() const { return -A0_ / c; }

PotentialSample LaserPulse::sample(double xi) const {
  const int n = p_.table_cells;
  if (xi <= -xi_max_) return {0.0, 0.0, 0.0};
  if (xi >= xi_max_) {
    double d = xi - xi_max_;
    return {A0_, IA_[n] + A0_ * d, IA2_[n] + A0_ * A0_ * d};
  }
  double s = (xi + xi_max_) / h_;
  int i = std::min(static_cast<int>(s), n - 1);
  double t = s - i;
  // cubic Hermite with exact derivatives: A' = -E, I_A' = A, I_A2' = A^2
  double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t),
         h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  double dA0 = -E_[i], dA1 = -E_[i + 1];
  double A = h00 * A_[i] + h10 * h_ * dA0 + h01 * A_[i + 1] + h11 * h_ * dA1;
  double IA = h00 * IA_[i] + h10 * h_ * A_[i] + h01 * IA_[i + 1] + h11 * h_ * A_[i + 1];
  double IA2 = h00 * IA2_[i] + h10 * h_ * A_[i] * A_[i] + h01 * IA2_[i + 1] +
               h11 * h_ * A_[i + 1] * A_[i + 1];
  return {A, IA, IA2};
}

}  // namespace twist
