#pragma once

#include <array>
#include <string>
#include <vector>

#include "qso3/fock.hpp"
#include "qso3/qnum.hpp"

namespace qso3 {

enum class Mode { Plus, Zero, Minus };
enum class GeneratorForm { Simplified, Original };

/// q-boson ladder operator: b|n> = sqrt([n])|n-1>, b^dag|n> = sqrt([n+1])|n+1>
/// in the selected mode, diagonal in the other two.
SectorOperator q_boson(Mode mode, bool dagger, const FockSpace& space, DeformationParam p);

/// Modified operators: B_0 = q^{-N_0/2} b_0 and, for the +/- modes,
/// B^dag|n> = sqrt([2n+2]) q^{n+1/2}|n+1>, B|n> = sqrt([2n]) q^{n-1/2}|n-1>
/// (the action form of the sqrt([2N]/[N]) dressing, free of 0/0).
SectorOperator modified_boson(Mode mode, bool dagger, const FockSpace& space,
                              DeformationParam p);

struct So3Generators {
  SectorOperator l0, lplus, lminus;
};

/// Angular-momentum generators; both forms produce identical matrices.
So3Generators so3_generators(const FockSpace& space, DeformationParam p,
                             GeneratorForm form = GeneratorForm::Simplified);

/// Casimir L-L+ + [L0][L0+1]; the companion form L+L- + [L0][L0-1] is
/// computed too and equality asserted at construction.
SectorOperator casimir(const FockSpace& space, DeformationParam p);

struct ScalarOps {
  SectorOperator splus, s0, sminus;
  SectorOperator stilde_plus, stilde_minus;  // S+-/[2]
};

ScalarOps scalar_ops(const FockSpace& space, DeformationParam p);

/// Parameters of the vector-operator family; the highest component is
/// omega B+^dag q^{alpha N+ + beta N0 + gamma N- + delta} and the tensor
/// property requires alpha + 2 = beta = gamma.
struct VectorOpParams {
  double omega, alpha, beta, gamma, delta;
  static VectorOpParams fixed_by_j1(DeformationParam p);  // omega=1/sqrt[2], beta=1, delta=-1/2
};

struct VectorOps {
  std::array<SectorOperator, 3> tdag;    // T^dag_m, index m+1
  std::array<SectorOperator, 3> ttilde;  // Ttilde_m, index m+1
};

VectorOps vector_ops(const FockSpace& space, DeformationParam p, const VectorOpParams& params);
VectorOps vector_ops(const FockSpace& space, DeformationParam p);  // fixed params

/// Coupled tensor A^rank_M = sum qC(base-inverted) T^dag_m Ttilde_n,
/// rank 0, 1 or 2; component index M + rank.
std::vector<SectorOperator> coupled_tensor(int rank, const FockSpace& space, DeformationParam p);
std::vector<SectorOperator> coupled_tensor(int rank, const VectorOps& v, const FockSpace& space,
                                           DeformationParam p);

/// First-rank tensor built from the generators; component index M + 1.
std::array<SectorOperator, 3> j1_tensor(const FockSpace& space, DeformationParam p);

/// Quadrupole Q^2_M = sqrt([3][4]/[2]) A^2_M; component index M + 2.
std::array<SectorOperator, 5> quadrupole(const FockSpace& space, DeformationParam p);

/// Scalars R+- built from coupled pairs of T^dag (resp. Ttilde) alone.
struct RScalars {
  SectorOperator rplus, rminus;
};
RScalars r_scalars(const VectorOps& v, const FockSpace& space, DeformationParam p);

/// [X, Y]_{q^m} = X Y - q^m Y X.
SectorOperator q_commutator(const SectorOperator& x, const SectorOperator& y,
                            double m_exponent, DeformationParam p);

/// Verifies the defining commutation relations of a rank-j tensor family
/// against the generators; components indexed m + j.
struct TensorCheckReport {
  std::vector<std::pair<std::string, double>> relations;
  double max_residual() const;
  int min_sectors = 0;  // smallest comparison domain over all relations
};

TensorCheckReport tensor_check(const std::vector<SectorOperator>& components, int j,
                               const FockSpace& space, DeformationParam p);

}  // namespace qso3
