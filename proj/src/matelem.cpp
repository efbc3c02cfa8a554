#include "qso3/matelem.hpp"

#include <cmath>
#include <stdexcept>

#include "qso3/qcg.hpp"

namespace qso3 {

namespace {

void check_parity(int lambda, int L, const char* who) {
  if (L < 0 || lambda < L)
    throw std::domain_error(std::string(who) + ": need 0 <= L <= lambda");
  if ((lambda - L) % 2 != 0)
    throw std::domain_error(std::string(who) + ": lambda - L must be even");
}

double qp(double x, DeformationParam p) { return std::exp(p.tau * x); }

}  // namespace

double coeff_a(int lambda, int L, DeformationParam p) {
  check_parity(lambda, L, "coeff_a");
  if (lambda < L + 2) throw std::domain_error("coeff_a: no L+2 multiplet in this irrep");
  return qp(lambda - 2 * L - 0.5, p) / q_number(2 * L + 3, p) *
         std::sqrt(q_number(3, p) * q_number(4, p) / q_number(2, p)) *
         std::sqrt(q_number(lambda - L, p) * q_number(lambda + L + 3, p) *
                   q_number(2 * L + 2, p) / (q_number(2, p) * q_number(2 * L + 5, p)));
}

double coeff_b(int lambda, int L, DeformationParam p) {
  check_parity(lambda, L, "coeff_b");
  if (L == 0) return 0.0;  // the [2L] factor
  return -qp(lambda + 2.5, p) * q_number(2 * L, p) / (q_number(2, p) * q_number(2 * L + 3, p)) *
         std::sqrt(q_number(2, p) / (q_number(3, p) * q_number(4, p))) *
         (qp(L - 0.5, p) * q_number(lambda - L, p) +
          qp(-L + 0.5, p) * q_number(lambda + L + 3, p));
}

ReducedMERecord reduced_me_raising(int lambda, int L, DeformationParam p) {
  check_parity(lambda, L, "reduced_me_raising");
  if (lambda < L + 2)
    throw std::domain_error("reduced_me_raising: no L+2 multiplet in this irrep");
  const double v = qp(lambda - 0.5, p) / q_number(2, p) *
                   std::sqrt(q_number(3, p) * q_number(4, p) / q_number(2, p)) *
                   std::sqrt(q_number(lambda - L, p) * q_number(lambda + L + 3, p) *
                             q_number(2 * L + 4, p) * q_number(2 * L + 2, p) /
                             q_number(2 * L + 3, p));
  return {lambda, L + 2, L, p.tau, v, MESource::ClosedForm};
}

ReducedMERecord reduced_me_diagonal(int lambda, int L, DeformationParam p) {
  check_parity(lambda, L, "reduced_me_diagonal");
  if (L == 0) return {lambda, 0, 0, p.tau, 0.0, MESource::ClosedForm};
  const double v =
      -qp(lambda - 0.5, p) / q_number(2, p) *
      std::sqrt(q_number(2 * L, p) * q_number(2 * L + 1, p) * q_number(2 * L + 2, p) /
                (q_number(2 * L - 1, p) * q_number(2 * L + 3, p))) *
      (qp(L - 0.5, p) * q_number(lambda - L, p) +
       qp(-L + 0.5, p) * q_number(lambda + L + 3, p));
  return {lambda, L, L, p.tau, v, MESource::ClosedForm};
}

BE2Record be2(int lambda, int L, DeformationParam p) {
  const auto rme = reduced_me_raising(lambda, L, p);
  return {lambda, L, p.tau, rme.value * rme.value / q_number(2 * L + 5, p)};
}

TaylorCoeffs taylor_raising(int lambda, int L) {
  check_parity(lambda, L, "taylor_raising");
  if (lambda < L + 2) throw std::domain_error("taylor_raising: no L+2 multiplet");
  const double c0 = std::sqrt(6.0 * (lambda - L) * (lambda + L + 3) * (L + 2) * (L + 1) /
                              (2.0 * L + 3));
  return {c0, c0 * (lambda - 0.5),
          c0 * (2.0 * lambda * lambda / 3 + 0.5 * L * L + 1.5 * L + 65.0 / 24)};
}

TaylorCoeffs taylor_diagonal(int lambda, int L) {
  check_parity(lambda, L, "taylor_diagonal");
  if (L == 0) return {0.0, 0.0, 0.0};
  const double c0 = -(2.0 * lambda + 3) *
                    std::sqrt(L * (L + 1.0) * (2 * L + 1) / ((2.0 * L - 1) * (2 * L + 3)));
  const double c1 = c0 * 2.0 / (2 * lambda + 3) * (lambda * (lambda + 1.0) - L * (L + 1.0));
  const double c2 = c0 / (3.0 * (2 * lambda + 3)) *
                    ((2.0 * lambda + 15) * L * (L + 1) +
                     (2.0 * lambda + 1) * (2.0 * lambda * lambda + 2 * lambda + 3));
  return {c0, c1, c2};
}

namespace {

ReducedMERecord closed_reduced(int lambda, int Lp, int L, DeformationParam p) {
  if (Lp == L + 2) return reduced_me_raising(lambda, L, p);
  if (Lp == L) return reduced_me_diagonal(lambda, L, p);
  if (Lp == L - 2) {
    // symmetry (q15): equals the raising element with the roles exchanged
    auto r = reduced_me_raising(lambda, Lp, p);
    return {lambda, Lp, L, p.tau, r.value, MESource::ClosedForm};
  }
  throw std::domain_error("reduced ME: L_final must be L, L+2 or L-2");
}

}  // namespace

double full_me_from_reduced(int lambda, int Lp, int Mp, int m, int L, int M,
                            DeformationParam p) {
  if (std::abs(M) > L || std::abs(Mp) > Lp || std::abs(m) > 2)
    throw std::domain_error("full_me_from_reduced: bad projections");
  if (Mp != M + m) return 0.0;
  const double c = qcg({2 * L, 2 * M, 4, 2 * m, 2 * Lp, 2 * Mp, false}, p);
  if (c == 0.0) return 0.0;
  // (-1)^{2j} with j = 2 is +1, kept literal for half-integer reuse
  const double phase = ((2 * 2) % 2) ? -1.0 : 1.0;
  return phase * c / std::sqrt(q_number(2 * Lp + 1, p)) * closed_reduced(lambda, Lp, L, p).value;
}

OracleContext::OracleContext(const FockSpace& space, DeformationParam p)
    : space_(&space), p_(p), q2_(quadrupole(space, p)), basis_(make_basis_context(space, p)) {}

SectorVector OracleContext::state(int lambda, int L, int M) const {
  std::lock_guard<std::mutex> lock(mtx_);
  auto it = families_.find(lambda);
  if (it == families_.end())
    it = families_.emplace(lambda, basis_family_lowering(lambda, *space_, p_, basis_)).first;
  for (const auto& v : it->second)
    if (v.L == L && v.M == M) return v.dense(*space_);
  throw std::domain_error("OracleContext::state: no such state in the irrep");
}

OracleContext make_oracle_context(const FockSpace& space, DeformationParam p) {
  return {space, p};
}

namespace {

struct Channel {
  int M, m;
};

// Channels whose Clebsch-Gordan divisor is not small: dividing by a tiny
// coefficient amplifies the matrix-element roundoff without testing anything
// new (the factorization at such channels is covered by the direct
// Wigner-Eckart comparison, which never divides).
constexpr double kChannelFloor = 1e-2;

std::vector<Channel> legal_channels(const OracleContext& ctx, int Lp, int L) {
  std::vector<Channel> out;
  for (int M = -L; M <= L; ++M)
    for (int m = -2; m <= 2; ++m) {
      const int Mp = M + m;
      if (std::abs(Mp) > Lp) continue;
      if (std::abs(qcg({2 * L, 2 * M, 4, 2 * m, 2 * Lp, 2 * Mp, false}, ctx.param())) >
          kChannelFloor)
        out.push_back({M, m});
    }
  return out;
}

double extract(const OracleContext& ctx, int lambda, int Lp, int L, const Channel& ch) {
  const auto bra = ctx.state(lambda, Lp, ch.M + ch.m);
  const auto ket = ctx.state(lambda, L, ch.M);
  const double me = bra.dot(ctx.q2(ch.m).apply(ket));
  const double c =
      qcg({2 * L, 2 * ch.M, 4, 2 * ch.m, 2 * Lp, 2 * (ch.M + ch.m), false}, ctx.param());
  return me * std::sqrt(q_number(2 * Lp + 1, ctx.param())) / c;
}

}  // namespace

ReducedMERecord reduced_me_oracle(const OracleContext& ctx, int lambda, int Lp, int L,
                                  bool all_channels, double consistency_tol) {
  check_parity(lambda, L, "reduced_me_oracle");
  check_parity(lambda, Lp, "reduced_me_oracle");
  if (lambda > ctx.space().nmax())
    throw std::out_of_range("reduced_me_oracle: lambda exceeds the space cutoff");

  const auto channels = legal_channels(ctx, Lp, L);
  if (channels.empty())
    throw std::domain_error("reduced_me_oracle: every extraction channel vanishes");

  // default channel: M = L with M' = L when legal, else lowest |M|
  Channel def = channels.front();
  bool stretched = false;
  for (const auto& ch : channels) {
    if (ch.M == L && ch.M + ch.m == L) {
      def = ch;
      stretched = true;
      break;
    }
  }
  if (!stretched)
    for (const auto& ch : channels)
      if (std::abs(ch.M) < std::abs(def.M)) def = ch;

  const double value = extract(ctx, lambda, Lp, L, def);
  if (all_channels) {
    double lo = value, hi = value;
    for (const auto& ch : channels) {
      const double v = extract(ctx, lambda, Lp, L, ch);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > consistency_tol * std::max(1.0, std::abs(value)))
      throw std::runtime_error("reduced_me_oracle: channel extractions disagree");
  }
  return {lambda, Lp, L, ctx.param().tau, value, MESource::Oracle};
}

ReducedMERecord reduced_me_oracle(int lambda, int Lp, int L, DeformationParam p,
                                  const FockSpace& space) {
  return reduced_me_oracle(make_oracle_context(space, p), lambda, Lp, L);
}

double oracle_channel_spread(const OracleContext& ctx, int lambda, int Lp, int L) {
  const auto channels = legal_channels(ctx, Lp, L);
  if (channels.empty())
    throw std::domain_error("oracle_channel_spread: every extraction channel vanishes");
  double lo = 0, hi = 0;
  bool first = true;
  for (const auto& ch : channels) {
    const double v = extract(ctx, lambda, Lp, L, ch);
    lo = first ? v : std::min(lo, v);
    hi = first ? v : std::max(hi, v);
    first = false;
  }
  return hi - lo;
}

}  // namespace qso3
