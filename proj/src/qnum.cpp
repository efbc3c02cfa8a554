#include "qso3/qnum.hpp"

#include <stdexcept>

namespace qso3 {

double q_number(double x, DeformationParam p) {
  if (!std::isfinite(x) || !std::isfinite(p.tau))
    throw std::domain_error("q_number: non-finite argument");
  if (p.classical()) return x;
  return std::sinh(p.tau * x) / std::sinh(p.tau);
}

double q_number_scaled(double x, double s, DeformationParam p) {
  if (!std::isfinite(s)) throw std::domain_error("q_number_scaled: non-finite scale");
  return q_number(x, DeformationParam{s * p.tau});
}

double q_factorial(int n, DeformationParam p) {
  if (n < 0) throw std::domain_error("q_factorial: negative argument");
  double r = 1.0;
  for (int k = 1; k <= n; ++k) r *= q_number(k, p);
  return r;
}

double q_double_factorial(int n, DeformationParam p) {
  if (n < -1) throw std::domain_error("q_double_factorial: argument below -1");
  double r = 1.0;
  for (int k = n; k >= 1; k -= 2) r *= q_number(k, p);
  return r;
}

double q_binomial(int k, int t, double s, DeformationParam p) {
  if (t < 0 || t > k) throw std::domain_error("q_binomial: need 0 <= t <= k");
  DeformationParam scaled{s * p.tau};
  return q_factorial(k, scaled) / (q_factorial(t, scaled) * q_factorial(k - t, scaled));
}

}  // namespace qso3
