#include "qso3/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace qso3 {

namespace {

void check_lLM(int lambda, int L, int M, int nmax) {
  if (lambda < 0 || L < 0 || L > lambda)
    throw std::domain_error("basis: need 0 <= L <= lambda");
  if ((lambda - L) % 2 != 0)
    throw std::domain_error("basis: lambda - L must be even");
  if (std::abs(M) > L) throw std::domain_error("basis: need |M| <= L");
  if (lambda > nmax) throw std::out_of_range("basis: lambda exceeds the space cutoff");
}

SectorVector vacuum() {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(1);
  v(0) = 1.0;
  return {0, v};
}

}  // namespace

SectorVector BasisVector::dense(const FockSpace&) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(FockSpace::sector_dim(lambda));
  for (const auto& [s, c] : coeffs) v(FockSpace::index_of(s)) = c;
  return {lambda, v};
}

double BasisVector::norm() const {
  double s = 0.0;
  for (const auto& [st, c] : coeffs) s += c * c;
  return std::sqrt(s);
}

BasisVector BasisVector::from_dense(int lambda, int L, int M, const FockSpace& space,
                                    const SectorVector& v) {
  if (v.sector != lambda)
    throw std::invalid_argument("BasisVector: vector not in the lambda sector");
  BasisVector out{lambda, L, M, {}};
  const auto& sec = space.sector(lambda);
  for (int i = 0; i < static_cast<int>(sec.size()); ++i)
    if (std::abs(v.coeffs(i)) >= coeff_cutoff) out.coeffs[sec[i]] = v.coeffs(i);
  return out;
}

BasisContext make_basis_context(const FockSpace& space, DeformationParam p) {
  return {so3_generators(space, p), scalar_ops(space, p)};
}

BasisVector highest_weight_state(int L, const FockSpace& space, DeformationParam p) {
  if (L < 0) throw std::domain_error("highest_weight_state: negative L");
  if (L > space.nmax())
    throw std::out_of_range("highest_weight_state: L exceeds the space cutoff");

  const auto bpd = q_boson(Mode::Plus, true, space, p);
  SectorVector v = vacuum();
  for (int i = 0; i < L; ++i) v = bpd.apply(v);
  v.coeffs /= std::sqrt(q_factorial(L, p));

  const auto Bpd = modified_boson(Mode::Plus, true, space, p);
  SectorVector w = vacuum();
  for (int i = 0; i < L; ++i) w = Bpd.apply(w);
  w.coeffs *= std::exp(-p.tau * 0.5 * L * L) / std::sqrt(q_double_factorial(2 * L, p));

  if ((v.coeffs - w.coeffs).cwiseAbs().maxCoeff() > 1e-10 * v.coeffs.cwiseAbs().maxCoeff())
    throw std::runtime_error("highest_weight_state: the two construction forms differ");
  return BasisVector::from_dense(L, L, L, space, v);
}

double normalization_constant(int lambda, int L, DeformationParam p) {
  if (L < 0 || lambda < L) throw std::domain_error("normalization_constant: need lambda >= L >= 0");
  if ((lambda - L) % 2 != 0)
    throw std::domain_error("normalization_constant: lambda - L must be even");
  return std::sqrt(q_double_factorial(lambda - L, p) * q_double_factorial(lambda + L + 1, p) /
                   q_double_factorial(2 * L + 1, p));
}

BasisVector basis_state_lowering(int lambda, int L, int M, const FockSpace& space,
                                 DeformationParam p) {
  return basis_state_lowering(lambda, L, M, space, p, make_basis_context(space, p));
}

BasisVector basis_state_lowering(int lambda, int L, int M, const FockSpace& space,
                                 DeformationParam p, const BasisContext& ctx) {
  check_lLM(lambda, L, M, space.nmax());
  for (auto& v : basis_family_lowering(lambda, space, p, ctx))
    if (v.L == L && v.M == M) return std::move(v);
  throw std::logic_error("basis_state_lowering: state not produced");  // unreachable
}

std::vector<BasisVector> basis_family_lowering(int lambda, const FockSpace& space,
                                               DeformationParam p, const BasisContext& ctx) {
  check_lLM(lambda, lambda, lambda, space.nmax());

  // top states (S+)^k |L L> / N_{lambda L} for every L in the irrep
  std::map<int, SectorVector> tops;
  for (int L = lambda % 2; L <= lambda; L += 2) {
    SectorVector v = highest_weight_state(L, space, p).dense(space);
    for (int i = 0; i < (lambda - L) / 2; ++i) v = ctx.scalars.splus.apply(v);
    v.coeffs /= normalization_constant(lambda, L, p);
    tops.emplace(L, std::move(v));
  }

  // descend all multiplets together; the sqrt([L+M]!/([2L]![L-M]!)) prefactor
  // telescopes into one 1/sqrt([L+M][L-M+1]) factor per step
  std::map<std::pair<int, int>, SectorVector> states;  // (L, M)
  std::map<int, SectorVector> frame;                   // L -> current state at M
  for (int M = lambda; M >= -lambda; --M) {
    if (M >= 0 && (lambda - M) % 2 == 0) frame.emplace(M, tops.at(M));
    for (const auto& [L, v] : frame) states.emplace(std::pair{L, M}, v);
    if (M == -lambda) break;
    frame.erase(-M);  // that multiplet bottoms out here
    for (auto& [L, v] : frame) {
      v = ctx.gens.lminus.apply(v);
      v.coeffs /= std::sqrt(q_number(L + M, p) * q_number(L - M + 1, p));
    }
    // modified Gram-Schmidt, largest L first: strips the cross-talk that the
    // next step would amplify (a no-op for the exact states)
    for (auto it = frame.rbegin(); it != frame.rend(); ++it) {
      for (auto jt = frame.rbegin(); jt != it; ++jt)
        it->second.coeffs -= jt->second.coeffs.dot(it->second.coeffs) * jt->second.coeffs;
      it->second.coeffs /= it->second.coeffs.norm();
    }
  }

  std::vector<BasisVector> out;
  out.reserve(FockSpace::sector_dim(lambda));
  for (int L = lambda % 2; L <= lambda; L += 2)
    for (int M = L; M >= -L; --M)
      out.push_back(BasisVector::from_dense(lambda, L, M, space, states.at({L, M})));
  return out;
}

BasisVector basis_state_explicit(int lambda, int L, int M, const FockSpace& space,
                                 DeformationParam p) {
  check_lLM(lambda, L, M, space.nmax());
  const double tau = p.tau;
  const double pre =
      std::exp(tau * (0.25 * (lambda - L) * (lambda + L + 1) - 0.5 * M * M)) *
      std::sqrt(q_factorial(L + M, p) * q_factorial(L - M, p) *
                q_double_factorial(lambda - L, p) * q_number(2 * L + 1, p) /
                q_double_factorial(lambda + L + 1, p));

  Eigen::VectorXd out = Eigen::VectorXd::Zero(FockSpace::sector_dim(lambda));
  for (int t = 0; t <= (lambda - L) / 2; ++t) {
    for (int pp = std::max(0, M); 2 * pp <= L + M; ++pp) {
      const int a = pp + t;                      // B+^dag exponent
      const int b = lambda + M - 2 * pp - 2 * t; // B0^dag exponent
      const int c = pp + t - M;                  // B-^dag exponent
      double coef = ((t % 2) ? -1.0 : 1.0) * std::exp(-tau * (lambda + L + 1) * t) /
                    (q_double_factorial(2 * t, p) * q_double_factorial(lambda - L - 2 * t, p));
      coef /= q_double_factorial(2 * pp, p) * q_factorial(L + M - 2 * pp, p) *
              q_double_factorial(2 * pp - 2 * M, p);
      // (B+^dag)^a (B0^dag)^b (B-^dag)^c |0> amplitude on |a,b,c>
      const double amp =
          std::sqrt(q_double_factorial(2 * a, p)) * std::exp(tau * 0.5 * a * a) *
          std::sqrt(q_factorial(b, p)) * std::exp(-tau * 0.25 * b * (b - 1)) *
          std::sqrt(q_double_factorial(2 * c, p)) * std::exp(tau * 0.5 * c * c);
      out(FockSpace::index_of({a, b, c})) += pre * coef * amp;
    }
  }
  return BasisVector::from_dense(lambda, L, M, space, {lambda, out});
}

SectorOperator splus_power_expansion(int k, const FockSpace& space, DeformationParam p) {
  if (k < 0) throw std::domain_error("splus_power_expansion: negative power");
  if (2 * k > space.nmax())
    throw std::out_of_range("splus_power_expansion: 2k exceeds the space cutoff");
  if (k == 0) return SectorOperator::identity(space);

  const double tau = p.tau;
  const auto Bpd = modified_boson(Mode::Plus, true, space, p);
  const auto B0d = modified_boson(Mode::Zero, true, space, p);
  const auto Bmd = modified_boson(Mode::Minus, true, space, p);

  SectorOperator acc(space, 2 * k);
  bool first = true;
  for (int t = 0; t <= k; ++t) {
    SectorOperator term = SectorOperator::diagonal(space, [=](const FockState& s) {
      return std::exp(tau * (k - 2 * t) * s.total());
    });
    for (int i = 0; i < t; ++i) term = Bmd * term;
    for (int i = 0; i < 2 * (k - t); ++i) term = B0d * term;
    for (int i = 0; i < t; ++i) term = Bpd * term;
    const double coef = ((t % 2) ? -1.0 : 1.0) * std::exp(-tau * (2 * k + 1) * t) /
                        (q_double_factorial(2 * t, p) * q_double_factorial(2 * k - 2 * t, p));
    term = coef * term;
    acc = first ? std::move(term) : acc + term;
    first = false;
  }
  return std::exp(tau * k * (k + 0.5)) * q_double_factorial(2 * k, p) * acc;
}

}  // namespace qso3
