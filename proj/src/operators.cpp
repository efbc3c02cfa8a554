#include "qso3/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "qso3/qcg.hpp"

namespace qso3 {

namespace {

int occ(const FockState& s, Mode m) {
  switch (m) {
    case Mode::Plus: return s.nplus;
    case Mode::Zero: return s.nzero;
    default: return s.nminus;
  }
}

FockState shifted(const FockState& s, Mode m, int by) {
  FockState t = s;
  switch (m) {
    case Mode::Plus: t.nplus += by; break;
    case Mode::Zero: t.nzero += by; break;
    default: t.nminus += by; break;
  }
  return t;
}

/// Generic one-mode ladder: amplitude(n) multiplies |..n..> -> |..n+step..>,
/// where n is the occupation before the shift.
SectorOperator mode_ladder(Mode mode, int step, const FockSpace& space,
                           const std::function<double(int)>& amplitude) {
  SectorOperator op(space, step);
  for (int n = 0; n <= space.nmax(); ++n) {
    const int tn = n + step;
    if (tn > space.nmax()) continue;
    const auto& src = space.sector(n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(FockSpace::sector_dim(tn), src.size());
    for (int i = 0; i < static_cast<int>(src.size()); ++i) {
      const int k = occ(src[i], mode);
      if (step < 0 && k == 0) continue;
      m(FockSpace::index_of(shifted(src[i], mode, step)), i) = amplitude(k);
    }
    op.set_block(n, std::move(m));
  }
  return op;
}

SectorOperator diag_qpow(const FockSpace& space, DeformationParam p,
                         const std::function<double(const FockState&)>& exponent) {
  return SectorOperator::diagonal(
      space, [&](const FockState& s) { return std::exp(p.tau * exponent(s)); });
}

void assert_equal(const SectorOperator& a, const SectorOperator& b, double tol,
                  const char* what) {
  const auto rep = relative_residual(a, b);
  if (rep.sectors_compared == 0 || rep.residual > tol)
    throw std::runtime_error(std::string("construction self-check failed: ") + what);
}

}  // namespace

SectorOperator q_boson(Mode mode, bool dagger, const FockSpace& space, DeformationParam p) {
  if (dagger)
    return mode_ladder(mode, +1, space, [p](int n) { return std::sqrt(q_number(n + 1, p)); });
  return mode_ladder(mode, -1, space, [p](int n) { return std::sqrt(q_number(n, p)); });
}

SectorOperator modified_boson(Mode mode, bool dagger, const FockSpace& space,
                              DeformationParam p) {
  const double tau = p.tau;
  if (mode == Mode::Zero) {
    if (dagger)
      return mode_ladder(mode, +1, space, [=](int n) {
        return std::sqrt(q_number(n + 1, p)) * std::exp(-tau * n / 2.0);
      });
    return mode_ladder(mode, -1, space, [=](int n) {
      return std::sqrt(q_number(n, p)) * std::exp(-tau * (n - 1) / 2.0);
    });
  }
  if (dagger)
    return mode_ladder(mode, +1, space, [=](int n) {
      return std::sqrt(q_number(2 * n + 2, p)) * std::exp(tau * (n + 0.5));
    });
  return mode_ladder(mode, -1, space, [=](int n) {
    return std::sqrt(q_number(2 * n, p)) * std::exp(tau * (n - 0.5));
  });
}

So3Generators so3_generators(const FockSpace& space, DeformationParam p, GeneratorForm form) {
  SectorOperator l0 = SectorOperator::diagonal(
      space, [](const FockState& s) { return double(s.nplus - s.nminus); });

  if (form == GeneratorForm::Simplified) {
    const auto Bpd = modified_boson(Mode::Plus, true, space, p);
    const auto Bp = modified_boson(Mode::Plus, false, space, p);
    const auto B0d = modified_boson(Mode::Zero, true, space, p);
    const auto B0 = modified_boson(Mode::Zero, false, space, p);
    const auto Bmd = modified_boson(Mode::Minus, true, space, p);
    const auto Bm = modified_boson(Mode::Minus, false, space, p);
    const auto qm = diag_qpow(space, p, [](const FockState& s) { return -(s.nplus - s.nminus) + 0.5; });
    const auto qp = diag_qpow(space, p, [](const FockState& s) { return (s.nplus - s.nminus) - 0.5; });
    const auto qm2 = diag_qpow(space, p, [](const FockState& s) { return -(s.nplus - s.nminus) - 0.5; });
    const auto qp2 = diag_qpow(space, p, [](const FockState& s) { return (s.nplus - s.nminus) + 0.5; });
    SectorOperator lplus = qm * Bpd * B0 + qp * B0d * Bm;
    SectorOperator lminus = qm2 * B0d * Bp + qp2 * Bmd * B0;
    return {std::move(l0), std::move(lplus), std::move(lminus)};
  }

  const auto bpd = q_boson(Mode::Plus, true, space, p);
  const auto bp = q_boson(Mode::Plus, false, space, p);
  const auto b0d = q_boson(Mode::Zero, true, space, p);
  const auto b0 = q_boson(Mode::Zero, false, space, p);
  const auto bmd = q_boson(Mode::Minus, true, space, p);
  const auto bm = q_boson(Mode::Minus, false, space, p);
  const double tau = p.tau;
  const auto d1 = SectorOperator::diagonal(space, [=](const FockState& s) {
    return std::exp(tau * (s.nminus - 0.5 * s.nzero)) *
           std::sqrt(std::exp(tau * s.nplus) + std::exp(-tau * s.nplus));
  });
  const auto d2 = SectorOperator::diagonal(space, [=](const FockState& s) {
    return std::exp(tau * (s.nplus - 0.5 * s.nzero)) *
           std::sqrt(std::exp(tau * s.nminus) + std::exp(-tau * s.nminus));
  });
  SectorOperator lplus = d1 * bpd * b0 + b0d * bm * d2;
  SectorOperator lminus = b0d * bp * d1 + d2 * bmd * b0;
  return {std::move(l0), std::move(lplus), std::move(lminus)};
}

SectorOperator casimir(const FockSpace& space, DeformationParam p) {
  const auto g = so3_generators(space, p);
  const auto ql0 = SectorOperator::diagonal(
      space, [&](const FockState& s) { return q_number(s.nplus - s.nminus, p); });
  const auto ql0p1 = SectorOperator::diagonal(
      space, [&](const FockState& s) { return q_number(s.nplus - s.nminus + 1, p); });
  const auto ql0m1 = SectorOperator::diagonal(
      space, [&](const FockState& s) { return q_number(s.nplus - s.nminus - 1, p); });
  SectorOperator c2 = g.lminus * g.lplus + ql0 * ql0p1;
  SectorOperator c2b = g.lplus * g.lminus + ql0 * ql0m1;
  assert_equal(c2, c2b, 1e-12, "the two Casimir forms differ");
  return c2;
}

ScalarOps scalar_ops(const FockSpace& space, DeformationParam p) {
  const auto Bpd = modified_boson(Mode::Plus, true, space, p);
  const auto Bp = modified_boson(Mode::Plus, false, space, p);
  const auto B0d = modified_boson(Mode::Zero, true, space, p);
  const auto B0 = modified_boson(Mode::Zero, false, space, p);
  const auto Bmd = modified_boson(Mode::Minus, true, space, p);
  const auto Bm = modified_boson(Mode::Minus, false, space, p);
  const auto q2s0 = diag_qpow(space, p, [](const FockState& s) { return s.total() + 1.5; });
  const auto q2s0m = diag_qpow(space, p, [](const FockState& s) { return -(s.total() + 1.5); });

  SectorOperator splus = B0d * B0d * q2s0 - Bpd * Bmd * q2s0m;
  SectorOperator sminus = q2s0 * B0 * B0 - q2s0m * Bp * Bm;
  SectorOperator s0 = SectorOperator::diagonal(
      space, [](const FockState& s) { return 0.5 * (s.total() + 1.5); });
  const double inv2 = 1.0 / q_number(2, p);
  return {splus, std::move(s0), sminus, inv2 * splus, inv2 * sminus};
}

VectorOpParams VectorOpParams::fixed_by_j1(DeformationParam p) {
  return {1.0 / std::sqrt(q_number(2, p)), -1.0, 1.0, 1.0, -0.5};
}

VectorOps vector_ops(const FockSpace& space, DeformationParam p, const VectorOpParams& params) {
  if (std::abs(params.alpha + 2 - params.beta) > 1e-12 ||
      std::abs(params.gamma - params.beta) > 1e-12)
    throw std::domain_error("vector_ops: parameters must satisfy alpha + 2 = beta = gamma");

  const double w = params.omega, be = params.beta, de = params.delta;
  const double q = p.q(), qi = 1.0 / q;
  const auto Bpd = modified_boson(Mode::Plus, true, space, p);
  const auto Bp = modified_boson(Mode::Plus, false, space, p);
  const auto B0d = modified_boson(Mode::Zero, true, space, p);
  const auto B0 = modified_boson(Mode::Zero, false, space, p);
  const auto Bmd = modified_boson(Mode::Minus, true, space, p);
  const auto Bm = modified_boson(Mode::Minus, false, space, p);
  auto dq = [&](double coef_nplus, double shift) {
    return diag_qpow(space, p, [=](const FockState& s) {
      return coef_nplus * s.nplus + be * s.total() + shift;
    });
  };
  const double s2 = std::sqrt(q_number(2, p));

  SectorOperator td_p1 = w * (Bpd * dq(-2, de));
  SectorOperator td_0 = (w * s2) * (B0d * dq(-2, de + 0.5));
  SectorOperator td_m1 =
      w * (Bmd * diag_qpow(space, p,
                           [=](const FockState& s) {
                             return 2 * s.nplus + (be - 2) * s.total() + de;
                           }) -
           (q - qi) * (Bp * B0d * B0d * dq(-2, de + 2)));

  SectorOperator tt_p1 =
      (-w) * (diag_qpow(space, p,
                        [=](const FockState& s) {
                          return 2 * s.nplus + (be - 2) * s.total() + de - 1;
                        }) *
                  Bm -
              (q - qi) * (dq(-2, de + 1) * Bpd * B0 * B0));
  SectorOperator tt_0 = (w * s2) * (dq(-2, de + 0.5) * B0);
  SectorOperator tt_m1 = (-w) * (dq(-2, de + 1) * Bp);

  return {{std::move(td_m1), std::move(td_0), std::move(td_p1)},
          {std::move(tt_m1), std::move(tt_0), std::move(tt_p1)}};
}

VectorOps vector_ops(const FockSpace& space, DeformationParam p) {
  return vector_ops(space, p, VectorOpParams::fixed_by_j1(p));
}

std::vector<SectorOperator> coupled_tensor(int rank, const VectorOps& v,
                                           const FockSpace& space, DeformationParam p) {
  if (rank < 0 || rank > 2) throw std::domain_error("coupled_tensor: rank must be 0, 1 or 2");
  std::vector<SectorOperator> out;
  out.reserve(2 * rank + 1);
  for (int M = -rank; M <= rank; ++M) {
    SectorOperator acc(space, 0);
    bool first = true;
    for (const auto& e : qcg_column(2, 2, 2 * rank, 2 * M, /*base_inverted=*/true, p)) {
      SectorOperator term = e.coeff * (v.tdag[e.two_m1 / 2 + 1] * v.ttilde[e.two_m2 / 2 + 1]);
      acc = first ? std::move(term) : acc + term;
      first = false;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

std::vector<SectorOperator> coupled_tensor(int rank, const FockSpace& space,
                                           DeformationParam p) {
  return coupled_tensor(rank, vector_ops(space, p), space, p);
}

std::array<SectorOperator, 3> j1_tensor(const FockSpace& space, DeformationParam p) {
  const auto g = so3_generators(space, p);
  const double q = p.q();
  const double s2 = std::sqrt(q_number(2, p));
  const auto qml0 = diag_qpow(space, p, [](const FockState& s) {
    return -double(s.nplus - s.nminus);
  });
  SectorOperator jp = (-1.0 / s2) * (qml0 * g.lplus);
  SectorOperator jm = (1.0 / s2) * (qml0 * g.lminus);
  SectorOperator j0 =
      (1.0 / q_number(2, p)) * (q * (g.lplus * g.lminus) - (1.0 / q) * (g.lminus * g.lplus));
  return {std::move(jm), std::move(j0), std::move(jp)};
}

std::array<SectorOperator, 5> quadrupole(const FockSpace& space, DeformationParam p) {
  const double scale = std::sqrt(q_number(3, p) * q_number(4, p) / q_number(2, p));
  auto a2 = coupled_tensor(2, space, p);
  return {scale * a2[0], scale * a2[1], scale * a2[2], scale * a2[3], scale * a2[4]};
}

RScalars r_scalars(const VectorOps& v, const FockSpace& space, DeformationParam p) {
  const double s3 = std::sqrt(q_number(3, p));
  SectorOperator rp(space, 2), rm(space, -2);
  bool first = true;
  for (const auto& e : qcg_column(2, 2, 0, 0, /*base_inverted=*/true, p)) {
    const int i = e.two_m1 / 2 + 1, j = e.two_m2 / 2 + 1;
    SectorOperator tp = (-s3 * e.coeff) * (v.tdag[i] * v.tdag[j]);
    SectorOperator tm = (-s3 * e.coeff) * (v.ttilde[i] * v.ttilde[j]);
    rp = first ? std::move(tp) : rp + tp;
    rm = first ? std::move(tm) : rm + tm;
    first = false;
  }
  return {std::move(rp), std::move(rm)};
}

SectorOperator q_commutator(const SectorOperator& x, const SectorOperator& y,
                            double m_exponent, DeformationParam p) {
  return x * y - std::exp(p.tau * m_exponent) * (y * x);
}

double TensorCheckReport::max_residual() const {
  double r = 0.0;
  for (const auto& [name, v] : relations) r = std::max(r, v);
  return r;
}

TensorCheckReport tensor_check(const std::vector<SectorOperator>& components, int j,
                               const FockSpace& space, DeformationParam p) {
  if (static_cast<int>(components.size()) != 2 * j + 1)
    throw std::invalid_argument("tensor_check: need 2j+1 components");
  const auto g = so3_generators(space, p);
  const auto ql0 = diag_qpow(space, p, [](const FockState& s) {
    return double(s.nplus - s.nminus);
  });

  TensorCheckReport rep;
  rep.min_sectors = space.nmax() + 1;
  auto record = [&](const std::string& name, const SectorOperator& lhs,
                    const SectorOperator& rhs) {
    const auto r = relative_residual(lhs, rhs);
    rep.relations.emplace_back(name, r.residual);
    rep.min_sectors = std::min(rep.min_sectors, r.sectors_compared);
  };

  // every relation is compared in product form, L T q^{L0} = q^m T L q^{L0}
  // + c T', so residuals are measured against the operand scale
  for (int m = -j; m <= j; ++m) {
    const auto& t = components[m + j];
    record("[L0,T_" + std::to_string(m) + "]", g.l0 * t, t * g.l0 + double(m) * t);

    // raising: [L+, T_m]_{q^m} q^{L0} = sqrt([j-m][j+m+1]) T_{m+1}
    {
      const std::string name = "[L+,T_" + std::to_string(m) + "]";
      SectorOperator rhs = std::exp(p.tau * m) * (t * g.lplus * ql0);
      if (m + 1 <= j) {
        const double c = std::sqrt(q_number(j - m, p) * q_number(j + m + 1, p));
        rhs = rhs + c * components[m + 1 + j];
      }
      record(name, g.lplus * t * ql0, rhs);
    }
    // lowering: [L-, T_m]_{q^m} q^{L0} = sqrt([j+m][j-m+1]) T_{m-1}
    {
      const std::string name = "[L-,T_" + std::to_string(m) + "]";
      SectorOperator rhs = std::exp(p.tau * m) * (t * g.lminus * ql0);
      if (m - 1 >= -j) {
        const double c = std::sqrt(q_number(j + m, p) * q_number(j - m + 1, p));
        rhs = rhs + c * components[m - 1 + j];
      }
      record(name, g.lminus * t * ql0, rhs);
    }
  }
  return rep;
}

}  // namespace qso3
