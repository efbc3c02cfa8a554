#pragma once

#include <Eigen/Dense>
#include <compare>
#include <functional>
#include <optional>
#include <vector>

namespace qso3 {

/// Occupation triple of the three boson modes (+, 0, -).
struct FockState {
  int nplus = 0;
  int nzero = 0;
  int nminus = 0;
  int total() const { return nplus + nzero + nminus; }
  friend auto operator<=>(const FockState&, const FockState&) = default;
};

/// Three-mode Fock space truncated at total boson number nmax, organized in
/// fixed-N sectors.  Within a sector states are ordered lexicographically by
/// (nplus, nzero) ascending, so |0,0,N> comes first and |N,0,0> last.
class FockSpace {
 public:
  explicit FockSpace(int nmax);

  int nmax() const { return nmax_; }
  static int sector_dim(int n) { return n < 0 ? 0 : (n + 1) * (n + 2) / 2; }
  const std::vector<FockState>& sector(int n) const;
  /// Index of a state inside its own sector.
  static int index_of(const FockState& s);

 private:
  int nmax_;
  std::vector<std::vector<FockState>> sectors_;
};

class SectorOperator;

/// State vector supported on a single total-number sector.
struct SectorVector {
  int sector = 0;
  Eigen::VectorXd coeffs;  // over FockSpace::sector(sector), empty if sector < 0

  double norm() const { return coeffs.size() ? coeffs.norm() : 0.0; }
  double dot(const SectorVector& other) const;
};

/// Linear operator with a fixed total-number shift delta_n, stored as dense
/// blocks mapping sector N -> N + delta_n.
///
/// A block is kept only where the truncated matrix equals the untruncated
/// one: compositions drop any source sector whose intermediate would exceed
/// nmax, so a present block is always exact.  Blocks whose target sector is
/// negative are present with zero rows.
class SectorOperator {
 public:
  SectorOperator(const FockSpace& space, int delta_n);

  static SectorOperator diagonal(const FockSpace& space,
                                 const std::function<double(const FockState&)>& f);
  static SectorOperator identity(const FockSpace& space);

  const FockSpace& space() const { return *space_; }
  int delta_n() const { return delta_; }
  bool has_block(int n) const;
  const Eigen::MatrixXd& block(int n) const;
  Eigen::MatrixXd& mutable_block(int n);
  void set_block(int n, Eigen::MatrixXd m);
  /// Largest source sector with a block present (-1 if none).
  int max_source() const;

  SectorOperator adjoint() const;
  SectorVector apply(const SectorVector& v) const;

  friend SectorOperator operator*(const SectorOperator& a, const SectorOperator& b);
  friend SectorOperator operator*(double c, const SectorOperator& a);
  friend SectorOperator operator+(const SectorOperator& a, const SectorOperator& b);
  friend SectorOperator operator-(const SectorOperator& a, const SectorOperator& b);
  SectorOperator operator-() const;

 private:
  const FockSpace* space_;
  int delta_;
  std::vector<std::optional<Eigen::MatrixXd>> blocks_;  // by source sector
};

/// Max-abs entry difference over the blocks present on both sides, divided by
/// the max-abs entry of the larger operand in the same sector.  Sectors where
/// both operands vanish (below 1e-12) are compared absolutely.
struct ResidualReport {
  double residual = 0.0;
  int sectors_compared = 0;
};
ResidualReport relative_residual(const SectorOperator& a, const SectorOperator& b);

}  // namespace qso3
