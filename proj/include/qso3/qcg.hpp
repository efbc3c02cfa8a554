#pragma once

#include <vector>

#include "qso3/qnum.hpp"

namespace qso3 {

/// Clebsch-Gordan key.  Angular momenta and projections are stored as twice
/// their value so half-integers stay exact.  base_inverted selects the
/// coefficients at q -> q^-1 (used when coupling operator pairs).
struct CGKey {
  int two_j1 = 0, two_m1 = 0;
  int two_j2 = 0, two_m2 = 0;
  int two_J = 0, two_M = 0;
  bool base_inverted = false;
};

struct CGEntry {
  int two_m1 = 0;
  int two_m2 = 0;
  double coeff = 0.0;
};

/// q-deformed su_q(2) Clebsch-Gordan coefficient, q-Racah sum form.
///
/// Convention: sign fixed by C(j1 j1, j2 J-j1 | J J) > 0, base fixed so that
/// the coupled first-rank tensor built with the base-inverted coefficients
/// reproduces the generator tensor J^1 (the (v16)/(v18) identity); the base-q
/// coefficients then make the Wigner-Eckart factorization (t8a) hold.  The
/// verification suite enforces both.
///
/// Returns 0 for M != m1+m2 or a triangle-rule violation; throws
/// std::domain_error for a malformed key (|m| > j, negative j, bad parity).
double qcg(const CGKey& key, DeformationParam p);

/// All nonzero coefficients for fixed (J, M), ordered by m1 ascending.
/// The column is L2-normalized by construction (not renormalized here).
/// Triangle violation yields an empty list.  Columns are cached; the cache
/// is insert-once and safe for concurrent use.
std::vector<CGEntry> qcg_column(int two_j1, int two_j2, int two_J, int two_M,
                                bool base_inverted, DeformationParam p);

/// Independent route used to certify the closed formula: solve the kernel of
/// the coupled raising operator for the highest-weight vector, then lower
/// with the coupled lowering operator.  No q-factorial sum involved.
std::vector<CGEntry> qcg_column_by_construction(int two_j1, int two_j2, int two_J,
                                                int two_M, bool base_inverted,
                                                DeformationParam p);

}  // namespace qso3
