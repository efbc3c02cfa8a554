#include "qso3/qcg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace qso3 {

namespace {

void validate_pair(int two_j, int two_m, const char* what) {
  if (two_j < 0) throw std::domain_error(std::string("qcg: negative ") + what);
  if (std::abs(two_m) > two_j)
    throw std::domain_error(std::string("qcg: |m| > j for ") + what);
  if ((two_j - two_m) % 2 != 0)
    throw std::domain_error(std::string("qcg: m not integer-shifted from j for ") + what);
}

bool triangle_ok(int two_j1, int two_j2, int two_J) {
  return two_J >= std::abs(two_j1 - two_j2) && two_J <= two_j1 + two_j2 &&
         (two_j1 + two_j2 - two_J) % 2 == 0;
}

// sqrt(  [a+b-c]! [a-b+c]! [-a+b+c]! / [a+b+c+1]!  ), arguments as 2x values
double delta_factor(int two_a, int two_b, int two_c, DeformationParam p) {
  return std::sqrt(q_factorial((two_a + two_b - two_c) / 2, p) *
                   q_factorial((two_a - two_b + two_c) / 2, p) *
                   q_factorial((-two_a + two_b + two_c) / 2, p) /
                   q_factorial((two_a + two_b + two_c) / 2 + 1, p));
}

// Closed q-Racah sum at base q = e^tau (no inversion handling here).
double qcg_closed(int two_j1, int two_m1, int two_j2, int two_m2, int two_J,
                  int two_M, DeformationParam p) {
  if (two_M != two_m1 + two_m2) return 0.0;
  if (!triangle_ok(two_j1, two_j2, two_J)) return 0.0;

  const double j1 = two_j1 / 2.0, m1 = two_m1 / 2.0;
  const double j2 = two_j2 / 2.0, m2 = two_m2 / 2.0;
  const double J = two_J / 2.0;

  // integer combinations entering factorials
  const int JpM = (two_J + two_M) / 2, JmM = (two_J - two_M) / 2;
  const int j1pm1 = (two_j1 + two_m1) / 2, j1mm1 = (two_j1 - two_m1) / 2;
  const int j2pm2 = (two_j2 + two_m2) / 2, j2mm2 = (two_j2 - two_m2) / 2;
  const int j12J = (two_j1 + two_j2 - two_J) / 2;
  const int Jj2m1 = (two_J - two_j2 + two_m1) / 2;
  const int Jj1m2 = (two_J - two_j1 - two_m2) / 2;

  const double pre =
      std::sqrt(q_number(2 * J + 1, p)) * delta_factor(two_j1, two_j2, two_J, p) *
      std::sqrt(q_factorial(JpM, p) * q_factorial(JmM, p) * q_factorial(j1pm1, p) *
                q_factorial(j1mm1, p) * q_factorial(j2pm2, p) * q_factorial(j2mm2, p));

  const int zlo = std::max({0, -Jj2m1, -Jj1m2});
  const int zhi = std::min({j12J, j1mm1, j2pm2});
  const double zexp = j1 + j2 + J + 1;
  double sum = 0.0;
  for (int z = zlo; z <= zhi; ++z) {
    const double den = q_factorial(z, p) * q_factorial(j12J - z, p) *
                       q_factorial(j1mm1 - z, p) * q_factorial(j2pm2 - z, p) *
                       q_factorial(Jj2m1 + z, p) * q_factorial(Jj1m2 + z, p);
    sum += ((z % 2) ? -1.0 : 1.0) * std::exp(-p.tau * zexp * z) / den;
  }

  const double fexp =
      0.5 * ((j1 + j2) * (j1 + j2 + 1) - J * (J + 1)) + j1 * m2 - j2 * m1;
  return std::exp(p.tau * fexp) * pre * sum;
}

struct ColumnKey {
  int two_j1, two_j2, two_J, two_M;
  std::uint64_t tau_bits;  // tau after base inversion
  auto operator<=>(const ColumnKey&) const = default;
};

using Column = std::vector<CGEntry>;

const Column& cached_column(int two_j1, int two_j2, int two_J, int two_M, double tau) {
  static std::map<ColumnKey, Column> cache;
  static std::mutex mtx;
  const ColumnKey key{two_j1, two_j2, two_J, two_M, std::bit_cast<std::uint64_t>(tau)};
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  Column col;
  const DeformationParam p{tau};
  if (triangle_ok(two_j1, two_j2, two_J) && std::abs(two_M) <= two_J) {
    for (int two_m1 = -two_j1; two_m1 <= two_j1; two_m1 += 2) {
      const int two_m2 = two_M - two_m1;
      if (std::abs(two_m2) > two_j2) continue;
      const double c = qcg_closed(two_j1, two_m1, two_j2, two_m2, two_J, two_M, p);
      if (c != 0.0) col.push_back({two_m1, two_m2, c});
    }
  }
  return cache.emplace(key, std::move(col)).first->second;
}

}  // namespace

double qcg(const CGKey& key, DeformationParam p) {
  validate_pair(key.two_j1, key.two_m1, "(j1,m1)");
  validate_pair(key.two_j2, key.two_m2, "(j2,m2)");
  validate_pair(key.two_J, key.two_M, "(J,M)");
  const double tau = key.base_inverted ? -p.tau : p.tau;
  if (key.two_M != key.two_m1 + key.two_m2) return 0.0;
  if (!triangle_ok(key.two_j1, key.two_j2, key.two_J)) return 0.0;
  for (const auto& e : cached_column(key.two_j1, key.two_j2, key.two_J, key.two_M, tau))
    if (e.two_m1 == key.two_m1) return e.coeff;
  return 0.0;
}

std::vector<CGEntry> qcg_column(int two_j1, int two_j2, int two_J, int two_M,
                                bool base_inverted, DeformationParam p) {
  validate_pair(two_J, two_M, "(J,M)");
  if (two_j1 < 0 || two_j2 < 0) throw std::domain_error("qcg_column: negative j");
  return cached_column(two_j1, two_j2, two_J, two_M, base_inverted ? -p.tau : p.tau);
}

std::vector<CGEntry> qcg_column_by_construction(int two_j1, int two_j2, int two_J,
                                                int two_M, bool base_inverted,
                                                DeformationParam p) {
  if (!triangle_ok(two_j1, two_j2, two_J) || std::abs(two_M) > two_J) return {};
  const DeformationParam pp{base_inverted ? -p.tau : p.tau};
  const double q = pp.q();
  const double j1 = two_j1 / 2.0, j2 = two_j2 / 2.0, J = two_J / 2.0;

  // Highest-weight chain: coefficients x[m1] of |j1 m1>|j2 J-m1| in |J J>.
  // Annihilation by the coupled raising operator links adjacent m1 values.
  const int two_m1max = std::min(two_j1, two_J + two_j2);
  const int two_m1min = std::max(-two_j1, two_J - two_j2);
  std::map<int, double> x;
  x[two_m1max] = 1.0;
  for (int two_m1 = two_m1max; two_m1 > two_m1min; two_m1 -= 2) {
    const double m1 = two_m1 / 2.0;
    const double m2p = J + 1 - m1;
    const double num =
        std::pow(q, -m1) * std::sqrt(q_number(j2 - m2p + 1, pp) * q_number(j2 + m2p, pp));
    const double den =
        std::pow(q, m2p) * std::sqrt(q_number(j1 - m1 + 1, pp) * q_number(j1 + m1, pp));
    x[two_m1 - 2] = -x[two_m1] * num / den;
  }
  double nrm = 0.0;
  for (auto& [m, v] : x) nrm += v * v;
  nrm = std::sqrt(nrm);
  const double sgn = x[two_m1max] > 0 ? 1.0 : -1.0;
  for (auto& [m, v] : x) v *= sgn / nrm;

  // Lower with Delta(J-) = J- (x) q^{J0} + q^{-J0} (x) J-, dividing out
  // sqrt([J+M][J-M+1]) at each step.
  std::map<std::pair<int, int>, double> cur;
  for (const auto& [two_m1, v] : x) cur[{two_m1, two_J - two_m1}] = v;
  for (int two_Mc = two_J; two_Mc > two_M; two_Mc -= 2) {
    std::map<std::pair<int, int>, double> nxt;
    for (const auto& [mm, c] : cur) {
      const auto [two_m1, two_m2] = mm;
      const double m1 = two_m1 / 2.0, m2 = two_m2 / 2.0;
      if (two_m1 - 2 >= -two_j1)
        nxt[{two_m1 - 2, two_m2}] +=
            c * std::sqrt(q_number(j1 + m1, pp) * q_number(j1 - m1 + 1, pp)) * std::pow(q, m2);
      if (two_m2 - 2 >= -two_j2)
        nxt[{two_m1, two_m2 - 2}] +=
            c * std::pow(q, -m1) * std::sqrt(q_number(j2 + m2, pp) * q_number(j2 - m2 + 1, pp));
    }
    const double Mc = two_Mc / 2.0;
    const double s = std::sqrt(q_number(J + Mc, pp) * q_number(J - Mc + 1, pp));
    for (auto& [mm, c] : nxt) c /= s;
    cur = std::move(nxt);
  }

  std::vector<CGEntry> col;
  for (const auto& [mm, c] : cur)
    if (c != 0.0) col.push_back({mm.first, mm.second, c});
  std::sort(col.begin(), col.end(),
            [](const CGEntry& a, const CGEntry& b) { return a.two_m1 < b.two_m1; });
  return col;
}

}  // namespace qso3
