#pragma once
#include <vector>

namespace twist {

struct PulseParams {
  double E_star = 0.0;
  double omega = 0.15;
  double a = 1.0;
  double phi = 0.0;
  double support_tol = 1e-8;
  int table_cells = 1 << 14;
};

// A, I_A = int A, I_A2 = int A^2 at one xi
struct PotentialSample {
  double A;
  double IA;
  double IA2;
};

// (c a / omega) sqrt(ln(1/tol))
double support_bounds(double a, double omega, double tol);

// Linearly polarized pulse counterpropagating along -z, field along x,
// depending on xi = ct + z only.
class LaserPulse {
 public:
  explicit LaserPulse(const PulseParams& p);

  const PulseParams& params() const { return p_; }
  double xi_max() const { return xi_max_; }

  double electric_field(double xi) const;
  double vector_potential(double xi) const { return sample(xi).A; }
  PotentialSample sample(double xi) const;

  // closed form asymptotic potential and field area S_E = -A0 / c
  double A0() const { return A0_; }
  double S_E() const;

  const std::vector<double>& table_xi() const { return xi_; }
  const std::vector<double>& table_A() const { return A_; }
  const std::vector<double>& table_IA() const { return IA_; }
  const std::vector<double>& table_IA2() const { return IA2_; }

 private:
  PulseParams p_;
  double xi_max_;
  double h_;
  double A0_;
  std::vector<double> xi_, A_, IA_, IA2_, E_;
};

struct FieldArea {
  double S_E;
  double A0;
};

FieldArea field_area(const PulseParams& p);

}  // namespace twist
