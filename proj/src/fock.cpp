#include "qso3/fock.hpp"

#include <stdexcept>

namespace qso3 {

FockSpace::FockSpace(int nmax) : nmax_(nmax) {
  if (nmax < 0) throw std::domain_error("FockSpace: nmax must be >= 0");
  sectors_.resize(nmax + 1);
  for (int n = 0; n <= nmax; ++n) {
    auto& sec = sectors_[n];
    sec.reserve(sector_dim(n));
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n - a; ++b) sec.push_back({a, b, n - a - b});
  }
}

const std::vector<FockState>& FockSpace::sector(int n) const {
  if (n < 0 || n > nmax_) throw std::out_of_range("FockSpace::sector: bad sector");
  return sectors_[n];
}

int FockSpace::index_of(const FockState& s) {
  const int n = s.total();
  // states with nplus < s.nplus contribute (n - a + 1) each
  return s.nplus * (n + 1) - s.nplus * (s.nplus - 1) / 2 + s.nzero;
}

double SectorVector::dot(const SectorVector& other) const {
  if (sector != other.sector) return 0.0;
  if (!coeffs.size() || !other.coeffs.size()) return 0.0;
  return coeffs.dot(other.coeffs);
}

SectorOperator::SectorOperator(const FockSpace& space, int delta_n)
    : space_(&space), delta_(delta_n), blocks_(space.nmax() + 1) {}

SectorOperator SectorOperator::diagonal(const FockSpace& space,
                                        const std::function<double(const FockState&)>& f) {
  SectorOperator op(space, 0);
  for (int n = 0; n <= space.nmax(); ++n) {
    const auto& sec = space.sector(n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(sec.size(), sec.size());
    for (int i = 0; i < static_cast<int>(sec.size()); ++i) m(i, i) = f(sec[i]);
    op.blocks_[n] = std::move(m);
  }
  return op;
}

SectorOperator SectorOperator::identity(const FockSpace& space) {
  return diagonal(space, [](const FockState&) { return 1.0; });
}

bool SectorOperator::has_block(int n) const {
  return n >= 0 && n <= space_->nmax() && blocks_[n].has_value();
}

const Eigen::MatrixXd& SectorOperator::block(int n) const {
  if (!has_block(n)) throw std::out_of_range("SectorOperator::block: absent block");
  return *blocks_[n];
}

Eigen::MatrixXd& SectorOperator::mutable_block(int n) {
  if (!has_block(n)) throw std::out_of_range("SectorOperator::block: absent block");
  return *blocks_[n];
}

void SectorOperator::set_block(int n, Eigen::MatrixXd m) {
  if (n < 0 || n > space_->nmax()) throw std::out_of_range("SectorOperator::set_block");
  const int rows = FockSpace::sector_dim(n + delta_);
  if (m.rows() != rows || m.cols() != FockSpace::sector_dim(n))
    throw std::invalid_argument("SectorOperator::set_block: shape mismatch");
  blocks_[n] = std::move(m);
}

int SectorOperator::max_source() const {
  for (int n = space_->nmax(); n >= 0; --n)
    if (blocks_[n].has_value()) return n;
  return -1;
}

SectorOperator SectorOperator::adjoint() const {
  SectorOperator out(*space_, -delta_);
  for (int n = 0; n <= space_->nmax(); ++n) {
    const int src = n - delta_;  // block of *this whose transpose lands at source n
    if (src > space_->nmax()) continue;
    if (src < 0) {
      out.blocks_[n] = Eigen::MatrixXd::Zero(0, FockSpace::sector_dim(n));
    } else if (blocks_[src].has_value()) {
      out.blocks_[n] = blocks_[src]->transpose();
    }
  }
  return out;
}

SectorVector SectorOperator::apply(const SectorVector& v) const {
  const int target = v.sector + delta_;
  if (v.sector < 0 || v.coeffs.size() == 0)
    return {target, Eigen::VectorXd::Zero(std::max(0, FockSpace::sector_dim(target)))};
  if (!has_block(v.sector))
    throw std::out_of_range("SectorOperator::apply: target sector beyond truncation");
  return {target, *blocks_[v.sector] * v.coeffs};
}

SectorOperator operator*(const SectorOperator& a, const SectorOperator& b) {
  if (a.space_ != b.space_)
    throw std::invalid_argument("SectorOperator: mixed spaces");
  SectorOperator out(*a.space_, a.delta_ + b.delta_);
  const int nmax = a.space_->nmax();
  for (int n = 0; n <= nmax; ++n) {
    if (!b.blocks_[n].has_value()) continue;
    const int mid = n + b.delta_;
    if (mid > nmax) continue;  // truncated intermediate: drop, do not fake
    if (mid < 0) {             // empty intermediate sector: exact zero
      out.blocks_[n] =
          Eigen::MatrixXd::Zero(FockSpace::sector_dim(n + out.delta_), FockSpace::sector_dim(n));
      continue;
    }
    if (!a.blocks_[mid].has_value()) continue;
    if (n + out.delta_ > nmax) continue;
    out.blocks_[n] = *a.blocks_[mid] * *b.blocks_[n];
  }
  return out;
}

SectorOperator operator*(double c, const SectorOperator& a) {
  SectorOperator out = a;
  for (auto& blk : out.blocks_)
    if (blk) *blk *= c;
  return out;
}

SectorOperator operator+(const SectorOperator& a, const SectorOperator& b) {
  if (a.space_ != b.space_) throw std::invalid_argument("SectorOperator: mixed spaces");
  if (a.delta_ != b.delta_)
    throw std::invalid_argument("SectorOperator: sum requires equal delta_n");
  SectorOperator out(*a.space_, a.delta_);
  for (int n = 0; n <= a.space_->nmax(); ++n)
    if (a.blocks_[n].has_value() && b.blocks_[n].has_value())
      out.blocks_[n] = *a.blocks_[n] + *b.blocks_[n];
  return out;
}

SectorOperator operator-(const SectorOperator& a, const SectorOperator& b) {
  return a + (-1.0 * b);
}

SectorOperator SectorOperator::operator-() const { return -1.0 * *this; }

ResidualReport relative_residual(const SectorOperator& a, const SectorOperator& b) {
  ResidualReport rep;
  if (a.delta_n() != b.delta_n())
    throw std::invalid_argument("relative_residual: delta_n mismatch");
  for (int n = 0; n <= a.space().nmax(); ++n) {
    if (!a.has_block(n) || !b.has_block(n)) continue;
    const auto& ma = a.block(n);
    const auto& mb = b.block(n);
    if (ma.size() == 0) continue;
    ++rep.sectors_compared;
    const double den = std::max(ma.cwiseAbs().maxCoeff(), mb.cwiseAbs().maxCoeff());
    const double diff = (ma - mb).cwiseAbs().maxCoeff();
    rep.residual = std::max(rep.residual, den < 1e-12 ? diff : diff / den);
  }
  return rep;
}

}  // namespace qso3
