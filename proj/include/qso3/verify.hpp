#pragma once

#include <string>
#include <vector>

#include "qso3/fock.hpp"
#include "qso3/qnum.hpp"

namespace qso3 {

/// One verification check: an identity evaluated on the Fock representation
/// (or on a coefficient grid), its residual, and the tolerance it must meet.
struct CheckResult {
  std::string name;  // e.g. "q-boson relation, mode +, upper sign"
  std::string tag;   // identity tag used throughout the sources, e.g. "(s1)"
  double tau = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  int sectors = 0;  // size of the comparison domain (0 = not sector-based)
  bool pass() const { return residual <= tolerance; }
};

struct VerifyOptions {
  int nmax = 12;
  std::vector<double> taus = {-0.3, 0.0, 0.1, 0.5};
  int lambda_max = 10;
  double tol_identity = 1e-10;
  double tol_construction = 1e-12;  // (s3)=(s10)
  double tol_oracle = 1e-8;
  double tol_channel = 1e-9;
  bool with_matelem = true;
};

/// Operator identities of the realization: q-boson and modified-boson
/// relations, generator constructions, Casimir, scalars, vector and coupled
/// tensors, and the commutator tables.
std::vector<CheckResult> algebra_suite(const FockSpace& space, DeformationParam p,
                                       double tol, double tol_construction);

/// Clebsch-Gordan checks at one tau: closed sum vs kernel construction,
/// orthogonality, column normalization.
std::vector<CheckResult> qcg_suite(DeformationParam p, double tol);

/// Basis construction checks: route equality, orthonormality, eigenrelations,
/// the lowering formula, and the S+ power expansion.
std::vector<CheckResult> basis_suite(const FockSpace& space, DeformationParam p,
                                     int lambda_max, double tol);

/// Reduced-matrix-element checks: closed forms vs the Wigner-Eckart oracle,
/// channel independence, the raising/lowering symmetry, sign conventions.
std::vector<CheckResult> matelem_suite(const FockSpace& space, DeformationParam p,
                                       int lambda_max, double tol_oracle,
                                       double tol_channel);

/// tau-independent checks: classical limits and the Taylor expansions.
std::vector<CheckResult> expansion_suite();

/// Everything, parallel over the tau grid (QSO3_THREADS caps the fan-out),
/// results in deterministic order.
std::vector<CheckResult> run_verification(const VerifyOptions& opt);

int thread_budget();

}  // namespace qso3
