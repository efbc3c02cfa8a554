#pragma once

#include <array>
#include <map>
#include <mutex>
#include <vector>

#include "qso3/basis.hpp"
#include "qso3/fock.hpp"
#include "qso3/operators.hpp"
#include "qso3/qnum.hpp"

namespace qso3 {

enum class MESource { ClosedForm, Oracle };

struct ReducedMERecord {
  int lambda = 0;
  int L_final = 0;
  int L_initial = 0;
  double tau = 0.0;
  double value = 0.0;
  MESource source = MESource::ClosedForm;
};

struct BE2Record {
  int lambda = 0;
  int L = 0;
  double tau = 0.0;
  double value = 0.0;  // dimensionless, |<lambda,L+2||Q^2||lambda,L>|^2 / [2L+5]
};

/// Expansion coefficients of A^2_0 acting on |lambda; L L>:
/// the L+2 component (a) and the diagonal component (b).
double coeff_a(int lambda, int L, DeformationParam p);  // needs lambda >= L+2
double coeff_b(int lambda, int L, DeformationParam p);  // needs lambda >= L

/// <lambda, L+2 || Q^2 || lambda, L>, closed form; positive for real q.
ReducedMERecord reduced_me_raising(int lambda, int L, DeformationParam p);

/// <lambda, L || Q^2 || lambda, L>, closed form; zero at L = 0, negative
/// otherwise for the tau range of interest.
ReducedMERecord reduced_me_diagonal(int lambda, int L, DeformationParam p);

BE2Record be2(int lambda, int L, DeformationParam p);

struct TaylorCoeffs {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;  // value = c0 + c1 tau + c2 tau^2 + O(tau^3)
};
TaylorCoeffs taylor_raising(int lambda, int L);
TaylorCoeffs taylor_diagonal(int lambda, int L);

/// Full matrix element from the closed-form reduced one via the
/// Wigner-Eckart factorization.
double full_me_from_reduced(int lambda, int Lp, int Mp, int m, int L, int M,
                            DeformationParam p);

/// Prebuilt machinery reused across oracle extractions at one (space, tau);
/// basis families are built once per lambda (thread-safe, insert-once).
class OracleContext {
 public:
  OracleContext(const FockSpace& space, DeformationParam p);
  const FockSpace& space() const { return *space_; }
  DeformationParam param() const { return p_; }
  const SectorOperator& q2(int m) const { return q2_[m + 2]; }
  const BasisContext& basis() const { return basis_; }
  SectorVector state(int lambda, int L, int M) const;

 private:
  const FockSpace* space_;
  DeformationParam p_;
  std::array<SectorOperator, 5> q2_;
  BasisContext basis_;
  mutable std::mutex mtx_;
  mutable std::map<int, std::vector<BasisVector>> families_;
};
OracleContext make_oracle_context(const FockSpace& space, DeformationParam p);

/// Wigner-Eckart extraction of the reduced matrix element from the explicit
/// Fock-space matrices.  The default extraction channel is M = L with
/// M' = L when that Clebsch-Gordan coefficient is nonzero, otherwise the
/// legal channel of lowest |M|.  With all_channels set, every legal channel
/// is extracted and a spread beyond consistency_tol throws std::runtime_error;
/// if no channel has a nonzero coefficient, std::domain_error is thrown.
ReducedMERecord reduced_me_oracle(const OracleContext& ctx, int lambda, int Lp, int L,
                                  bool all_channels = false, double consistency_tol = 1e-9);
ReducedMERecord reduced_me_oracle(int lambda, int Lp, int L, DeformationParam p,
                                  const FockSpace& space);

/// Spread (max - min) of the oracle extraction over all legal channels.
double oracle_channel_spread(const OracleContext& ctx, int lambda, int Lp, int L);

}  // namespace qso3
