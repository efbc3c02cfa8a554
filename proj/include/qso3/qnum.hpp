#pragma once

#include <cmath>

namespace qso3 {

/// Real deformation parameter tau, q = exp(tau).  tau = 0 selects the
/// classical limit: every q-number reduces to the ordinary number.
struct DeformationParam {
  double tau = 0.0;

  double q() const { return std::exp(tau); }
  /// Below this |tau| all q-numbers are evaluated at their tau -> 0 limit
  /// (the sinh ratio loses accuracy to cancellation there).
  static constexpr double classical_cutoff = 1e-12;
  bool classical() const { return std::abs(tau) < classical_cutoff; }
};

/// [x] = (q^x - q^-x)/(q - q^-1) = sinh(tau x)/sinh(tau), and x at tau = 0.
double q_number(double x, DeformationParam p);

/// Bracket in base q^s: [x]_{q^s}, i.e. q_number with tau' = s*tau.
double q_number_scaled(double x, double s, DeformationParam p);

/// [n]! = [n][n-1]...[1], [0]! = 1.  Throws std::domain_error for n < 0.
double q_factorial(int n, DeformationParam p);

/// [n]!! = [n][n-2]..., [0]!! = [-1]!! = 1.  Throws for n < -1.
double q_double_factorial(int n, DeformationParam p);

/// Binomial in base q^s: [k]_{q^s}! / ([t]_{q^s}! [k-t]_{q^s}!).
/// Throws std::domain_error unless 0 <= t <= k.
double q_binomial(int k, int t, double s, DeformationParam p);

}  // namespace qso3
