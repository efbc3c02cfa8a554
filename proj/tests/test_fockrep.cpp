#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "qso3/operators.hpp"
#include "qso3/verify.hpp"

using namespace qso3;

static double ref_qnum(double x, double tau) {
  const double q = std::exp(tau);
  return (std::pow(q, x) - std::pow(q, -x)) / (q - 1.0 / q);
}

static SectorVector unit_state(const FockSpace&, const FockState& s) {
  SectorVector v{s.total(), Eigen::VectorXd::Zero(FockSpace::sector_dim(s.total()))};
  v.coeffs(FockSpace::index_of(s)) = 1.0;
  return v;
}

TEST_CASE("space layout") {
  CHECK(FockSpace(0).sector(0).size() == 1);
  CHECK(FockSpace(0).sector(0)[0] == FockState{0, 0, 0});
  const FockSpace s2(2);
  CHECK(s2.sector(0).size() == 1);
  CHECK(s2.sector(1).size() == 3);
  CHECK(s2.sector(2).size() == 6);
  CHECK(FockSpace::sector_dim(10) == 66);
  for (int n = 0; n <= 2; ++n)
    for (int i = 0; i < static_cast<int>(s2.sector(n).size()); ++i)
      CHECK(FockSpace::index_of(s2.sector(n)[i]) == i);
  CHECK_THROWS_AS(FockSpace(-1), std::domain_error);
}

TEST_CASE("q-boson ladder amplitudes") {
  const FockSpace space(4);
  const DeformationParam p{0.2};
  const auto b0d = q_boson(Mode::Zero, true, space, p);
  auto v = b0d.apply(unit_state(space, {0, 0, 0}));
  CHECK(v.coeffs(FockSpace::index_of({0, 1, 0})) == doctest::Approx(1.0));

  const auto bp = q_boson(Mode::Plus, false, space, p);
  CHECK(bp.apply(unit_state(space, {0, 0, 0})).norm() == 0.0);

  const auto bpd = q_boson(Mode::Plus, true, space, p);
  auto w = bpd.apply(unit_state(space, {2, 0, 0}));
  CHECK(w.coeffs(FockSpace::index_of({3, 0, 0})) ==
        doctest::Approx(std::sqrt(ref_qnum(3, 0.2))).epsilon(1e-14));
}

TEST_CASE("modified boson products and amplitudes") {
  const FockSpace space(5);
  const DeformationParam p{0.1};
  const double q = p.q();

  // B+^dag B+ diagonal q^{2n-1} [2n]
  const auto Bp = modified_boson(Mode::Plus, false, space, p);
  const auto Bpd = modified_boson(Mode::Plus, true, space, p);
  const auto prod = Bpd * Bp;
  for (int n = 1; n <= 4; ++n) {
    const auto v = unit_state(space, {n, 0, 0});
    const auto w = prod.apply(v);
    CHECK(w.coeffs(FockSpace::index_of({n, 0, 0})) ==
          doctest::Approx(std::pow(q, 2 * n - 1) * ref_qnum(2 * n, 0.1)).epsilon(1e-13));
  }

  const auto B0 = modified_boson(Mode::Zero, false, space, p);
  const auto B0d = modified_boson(Mode::Zero, true, space, p);
  const auto w0 = (B0 * B0d).apply(unit_state(space, {0, 0, 0}));
  CHECK(w0.coeffs(0) == doctest::Approx(1.0));

  auto w = Bpd.apply(unit_state(space, {1, 0, 0}));
  CHECK(w.coeffs(FockSpace::index_of({2, 0, 0})) ==
        doctest::Approx(std::sqrt(ref_qnum(4, 0.1)) * std::pow(q, 1.5)).epsilon(1e-13));
}

TEST_CASE("generators") {
  const FockSpace space(6);
  const DeformationParam p{0.15};
  const auto g = so3_generators(space, p);

  auto v = g.l0.apply(unit_state(space, {2, 1, 0}));
  CHECK(v.coeffs(FockSpace::index_of({2, 1, 0})) == doctest::Approx(2.0));

  CHECK(g.lplus.apply(unit_state(space, {0, 0, 0})).norm() == 0.0);

  const auto gc = so3_generators(space, {1e-13});
  auto low = gc.lminus.apply(unit_state(space, {1, 0, 0}));
  CHECK(low.coeffs(FockSpace::index_of({0, 1, 0})) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("casimir spectrum on a sector") {
  const FockSpace space(6);
  const DeformationParam p{0.2};
  const auto c2 = casimir(space, p);

  CHECK(c2.apply(unit_state(space, {0, 0, 0})).coeffs(0) == doctest::Approx(0.0));
  const auto v1 = c2.apply(unit_state(space, {1, 0, 0}));
  CHECK(v1.coeffs(FockSpace::index_of({1, 0, 0})) ==
        doctest::Approx(ref_qnum(1, 0.2) * ref_qnum(2, 0.2)).epsilon(1e-12));

  // sector N = 4: eigenvalues [L][L+1] for L = 4, 2, 0 with multiplicity 2L+1
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c2.block(4));
  std::vector<double> expected;
  for (int L : {0, 2, 4})
    for (int i = 0; i < 2 * L + 1; ++i)
      expected.push_back(q_number(L, p) * q_number(L + 1, p));
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 15; ++i)
    CHECK(es.eigenvalues()(i) == doctest::Approx(expected[i]).epsilon(1e-10));
}

TEST_CASE("scalar operators") {
  const FockSpace space(6);
  const DeformationParam p{0.3};
  const auto sc = scalar_ops(space, p);

  auto v = sc.s0.apply(unit_state(space, {1, 2, 0}));
  CHECK(v.coeffs(FockSpace::index_of({1, 2, 0})) == doctest::Approx((3 + 1.5) / 2));

  CHECK(sc.sminus.apply(unit_state(space, {0, 0, 0})).norm() == 0.0);

  const auto sc0 = scalar_ops(space, {0.0});
  const auto w = (sc0.sminus * sc0.splus).apply(unit_state(space, {0, 0, 0}));
  CHECK(w.coeffs(0) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("vector operators") {
  const FockSpace space(6);
  const DeformationParam p{0.2};
  const auto V = vector_ops(space, p);

  auto v = V.tdag[2].apply(unit_state(space, {0, 0, 0}));
  CHECK(v.coeffs(FockSpace::index_of({1, 0, 0})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));

  CHECK(V.ttilde[0].apply(unit_state(space, {0, 0, 0})).norm() == 0.0);

  const auto g = so3_generators(space, p);
  const auto zero_rep = relative_residual(g.lplus * V.tdag[2], p.q() * (V.tdag[2] * g.lplus));
  CHECK(zero_rep.residual <= 1e-12);

  CHECK_THROWS_AS(vector_ops(space, p, {1.0, 0.0, 1.0, 1.0, 0.0}), std::domain_error);

  // the tensor property holds for the whole (v6) family, not just the
  // values fixed by the generator-tensor matching
  const VectorOpParams custom{0.8, 0.4, 2.4, 2.4, -1.1};
  const auto Vc = vector_ops(space, p, custom);
  const auto repc = tensor_check({Vc.tdag.begin(), Vc.tdag.end()}, 1, space, p);
  CHECK(repc.max_residual() <= 1e-10);
}

TEST_CASE("coupled tensors and j1") {
  const FockSpace space(8);
  const DeformationParam p{0.25};

  const auto A2 = coupled_tensor(2, space, p);
  CHECK(A2[4].apply(unit_state(space, {0, 0, 0})).norm() == 0.0);
  CHECK_THROWS_AS(coupled_tensor(3, space, p), std::domain_error);

  const auto A1 = coupled_tensor(1, space, p);
  const auto J1 = j1_tensor(space, p);
  const double c = -std::sqrt(q_number(2, p) / q_number(4, p));
  for (int i = 0; i < 3; ++i) {
    const auto rep = relative_residual(c * J1[i], A1[i]);
    CHECK(rep.residual <= 1e-12);
    CHECK(rep.sectors_compared >= 7);
  }

  auto v = J1[1].apply(unit_state(space, {1, 0, 0}));
  CHECK(v.coeffs(FockSpace::index_of({1, 0, 0})) == doctest::Approx(p.q()).epsilon(1e-13));
  CHECK(J1[1].apply(unit_state(space, {0, 0, 0})).norm() == 0.0);

  const auto J1c = j1_tensor(space, {1e-13});
  const auto l0 = SectorOperator::diagonal(
      space, [](const FockState& s) { return double(s.nplus - s.nminus); });
  CHECK(relative_residual(J1c[1], l0).residual <= 1e-8);
}

TEST_CASE("quadrupole eigenrelation on the plus ladder") {
  const FockSpace space(8);
  const DeformationParam p{0.2};
  const auto Q = quadrupole(space, p);
  CHECK(Q[2].apply(unit_state(space, {0, 0, 0})).norm() == 0.0);

  const auto V = vector_ops(space, p);
  SectorVector v{0, Eigen::VectorXd::Ones(1)};
  const int L = 3;
  for (int i = 0; i < L; ++i) v = V.tdag[2].apply(v);
  const auto w = Q[2].apply(v);
  const double eig = -std::pow(p.q(), 3) * q_number(2 * L, p) / q_number(2, p);
  CHECK((w.coeffs - eig * v.coeffs).cwiseAbs().maxCoeff() <=
        1e-12 * w.coeffs.cwiseAbs().maxCoeff());
}

TEST_CASE("q_commutator") {
  const FockSpace space(6);
  const DeformationParam p{0.2};
  const auto g = so3_generators(space, p);

  // m = 0 is the plain commutator: [L+, L-] = [2 L0]
  const auto lhs = q_commutator(g.lplus, g.lminus, 0.0, p);
  const auto rhs = SectorOperator::diagonal(
      space, [&](const FockState& s) { return q_number(2.0 * (s.nplus - s.nminus), p); });
  CHECK(relative_residual(g.lplus * g.lminus, g.lminus * g.lplus + rhs).residual <= 1e-13);
  CHECK(relative_residual(lhs, rhs).residual <= 1e-10);

  const auto V = vector_ops(space, p);
  const auto q2n1 = SectorOperator::diagonal(space, [&](const FockState& s) {
    return -std::exp(p.tau * (2.0 * s.total() + 1));
  });
  CHECK(relative_residual(q_commutator(V.ttilde[0], V.tdag[2], -2.0, p), q2n1).residual <=
        1e-11);

  const FockSpace other(4);
  const auto g2 = so3_generators(other, p);
  CHECK_THROWS_AS(q_commutator(g.lplus, g2.lminus, 0.0, p), std::invalid_argument);
}

TEST_CASE("tensor_check accepts tensors and rejects bare generators") {
  const FockSpace space(8);
  const DeformationParam p{0.2};

  const auto J1 = j1_tensor(space, p);
  CHECK(tensor_check({J1.begin(), J1.end()}, 1, space, p).max_residual() <= 1e-10);

  const auto Q = quadrupole(space, p);
  CHECK(tensor_check({Q.begin(), Q.end()}, 2, space, p).max_residual() <= 1e-10);

  // negative control: the undressed generators are not q-tensor components
  const auto g = so3_generators(space, p);
  const auto bad = tensor_check({g.lminus, g.l0, g.lplus}, 1, space, p);
  CHECK(bad.max_residual() > 1e-2);

  CHECK_THROWS_AS(tensor_check({g.l0, g.lplus}, 1, space, p), std::invalid_argument);
}

TEST_CASE("algebra suite at off-grid parameters") {
  for (double tau : {-0.17, 0.33}) {
    const FockSpace space(9);
    for (const auto& c : algebra_suite(space, {tau}, 1e-10, 1e-12)) {
      INFO(c.name, " tag ", c.tag, " at tau=", tau, " residual ", c.residual);
      CHECK(c.pass());
      CHECK(c.sectors >= 1);
    }
  }
}
