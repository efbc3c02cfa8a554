#pragma once

#include <map>

#include "qso3/fock.hpp"
#include "qso3/operators.hpp"
#include "qso3/qnum.hpp"

namespace qso3 {

/// Orthonormal state |lambda; L M> expanded over Fock states of the
/// N = lambda sector.  Coefficients below 1e-14 are suppressed.
struct BasisVector {
  int lambda = 0, L = 0, M = 0;
  std::map<FockState, double> coeffs;

  static constexpr double coeff_cutoff = 1e-14;
  SectorVector dense(const FockSpace& space) const;
  double norm() const;
  static BasisVector from_dense(int lambda, int L, int M, const FockSpace& space,
                                const SectorVector& v);
};

/// Operator bundle reused across basis constructions on one (space, tau).
struct BasisContext {
  So3Generators gens;
  ScalarOps scalars;
};
BasisContext make_basis_context(const FockSpace& space, DeformationParam p);

/// Highest-weight state: (b+^dag)^L / sqrt([L]!) |0>.  The modified-operator
/// form q^{-L^2/2} (B+^dag)^L / sqrt([2L]!!) |0> is computed as well and
/// equality asserted.  Throws std::out_of_range when L > nmax.
BasisVector highest_weight_state(int L, const FockSpace& space, DeformationParam p);

/// N_{lambda L} = sqrt([lambda-L]!! [lambda+L+1]!! / [2L+1]!!).
/// Throws std::domain_error on parity or ordering violations.
double normalization_constant(int lambda, int L, DeformationParam p);

/// |lambda; L M> by applying (S+)^{(lambda-L)/2} / N_{lambda L} to the
/// highest-weight state and lowering with the sqrt([L+M]!/([2L]![L-M]!))
/// prefactor.
BasisVector basis_state_lowering(int lambda, int L, int M, const FockSpace& space,
                                 DeformationParam p);
BasisVector basis_state_lowering(int lambda, int L, int M, const FockSpace& space,
                                 DeformationParam p, const BasisContext& ctx);

/// Every |lambda; L M> of the irrep by the lowering route, ordered by
/// (L ascending, M descending).  All L-multiplets descend together and the
/// frame is re-orthogonalized after each step: the exact states are already
/// orthonormal, so this only strips roundoff cross-talk, which otherwise
/// compounds geometrically (the lowering map stretches higher-L directions
/// harder than the state being followed).  Prefer this over per-state calls
/// when touching a whole irrep.
std::vector<BasisVector> basis_family_lowering(int lambda, const FockSpace& space,
                                               DeformationParam p, const BasisContext& ctx);

/// Same state from the explicit double-sum polynomial in the modified
/// creation operators.  The printed formula is exactly normalized; the
/// output is NOT renormalized, so a norm defect is detectable.
BasisVector basis_state_explicit(int lambda, int L, int M, const FockSpace& space,
                                 DeformationParam p);

/// (S+)^k as the explicit alternating sum over creation-operator monomials;
/// equals the k-fold composition of S+.
SectorOperator splus_power_expansion(int k, const FockSpace& space, DeformationParam p);

}  // namespace qso3
