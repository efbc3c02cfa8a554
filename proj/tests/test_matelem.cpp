#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qso3/matelem.hpp"
#include "qso3/qcg.hpp"
#include "qso3/verify.hpp"

using namespace qso3;

TEST_CASE("expansion coefficients a and b") {
  CHECK(coeff_b(4, 0, {0.3}) == 0.0);
  CHECK(coeff_b(6, 0, {-0.2}) == 0.0);
  // direct classical evaluation: (1/[2L+3]) sqrt([3][4]/[2]) sqrt(...)
  CHECK(coeff_a(2, 0, {0.0}) == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(coeff_a(2, 2, {0.1}), std::domain_error);
  CHECK_THROWS_AS(coeff_a(3, 0, {0.1}), std::domain_error);
  CHECK_THROWS_AS(coeff_b(3, 0, {0.1}), std::domain_error);
}

TEST_CASE("closed-form reduced matrix elements at tau = 0") {
  CHECK(reduced_me_raising(2, 0, {0.0}).value ==
        doctest::Approx(2 * std::sqrt(10.0)).epsilon(1e-12));
  CHECK(reduced_me_raising(4, 0, {0.0}).value ==
        doctest::Approx(std::sqrt(112.0)).epsilon(1e-12));
  CHECK(reduced_me_diagonal(2, 2, {0.0}).value ==
        doctest::Approx(-7 * std::sqrt(30.0 / 21.0)).epsilon(1e-12));
  CHECK(reduced_me_diagonal(6, 0, {0.3}).value == 0.0);
  CHECK_THROWS_AS(reduced_me_raising(2, 2, {0.0}), std::domain_error);
  CHECK_THROWS_AS(reduced_me_raising(3, 0, {0.0}), std::domain_error);
  CHECK_THROWS_AS(reduced_me_diagonal(3, 2, {0.0}), std::domain_error);
}

TEST_CASE("record bookkeeping") {
  const auto r = reduced_me_raising(4, 2, {0.17});
  CHECK(r.lambda == 4);
  CHECK(r.L_final == 4);
  CHECK(r.L_initial == 2);
  CHECK(r.tau == 0.17);
  CHECK(r.source == MESource::ClosedForm);
}

TEST_CASE("be2 factors") {
  CHECK(be2(4, 0, {0.0}).value == doctest::Approx(22.4).epsilon(1e-12));
  CHECK(be2(2, 0, {0.0}).value == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(be2(2, 0, {0.0}).value ==
        doctest::Approx(std::pow(2 * std::sqrt(10.0), 2) / 5).epsilon(1e-12));
  CHECK_THROWS_AS(be2(2, 2, {0.0}), std::domain_error);
}

TEST_CASE("taylor coefficients") {
  const auto r = taylor_raising(2, 0);
  CHECK(r.c0 == doctest::Approx(std::sqrt(40.0)).epsilon(1e-13));
  CHECK(r.c1 == doctest::Approx(1.5 * std::sqrt(40.0)).epsilon(1e-13));
  const auto d0 = taylor_diagonal(6, 0);
  CHECK(d0.c0 == 0.0);
  CHECK(d0.c1 == 0.0);
  CHECK(d0.c2 == 0.0);
  // quadratic truncation follows the closed form to third order
  for (auto [lam, L] : {std::pair{6, 2}, {9, 5}}) {
    const auto t = taylor_diagonal(lam, L);
    const double tau = 1e-3;
    const double closed = reduced_me_diagonal(lam, L, {tau}).value;
    CHECK(std::abs(closed - (t.c0 + t.c1 * tau + t.c2 * tau * tau)) <= 1e-4);
  }
}

TEST_CASE("Wigner-Eckart bridge") {
  const DeformationParam p{0.2};
  CHECK(full_me_from_reduced(4, 4, 2, 1, 2, 2, p) == 0.0);  // m != M' - M

  // classical stretched element: CG * reduced / sqrt(2L'+1)
  const DeformationParam cls{0.0};
  const double cg = qcg({4, 4, 4, 0, 4, 4, false}, cls);
  const double expect = cg * reduced_me_diagonal(2, 2, cls).value / std::sqrt(5.0);
  CHECK(full_me_from_reduced(2, 2, 2, 0, 2, 2, cls) == doctest::Approx(expect).epsilon(1e-12));

  // against the direct matrix element
  const FockSpace space(6);
  const auto ctx = make_oracle_context(space, p);
  const auto bra = ctx.state(4, 4, 3);
  const auto ket = ctx.state(4, 2, 2);
  const double direct = bra.dot(ctx.q2(1).apply(ket));
  CHECK(full_me_from_reduced(4, 4, 3, 1, 2, 2, p) ==
        doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("oracle extraction") {
  const FockSpace space(8);
  const DeformationParam p{0.1};
  const auto ctx = make_oracle_context(space, p);

  const auto rec = reduced_me_oracle(ctx, 2, 2, 0);
  CHECK(rec.source == MESource::Oracle);
  CHECK(rec.value ==
        doctest::Approx(reduced_me_raising(2, 0, p).value).epsilon(1e-10));

  // lambda = 1 carries only L = 1; the diagonal element still matches
  const auto r1 = reduced_me_oracle(ctx, 1, 1, 1);
  CHECK(r1.value == doctest::Approx(reduced_me_diagonal(1, 1, p).value).epsilon(1e-10));

  // the raising/lowering symmetry through the oracle
  const auto dn = reduced_me_oracle(ctx, 4, 2, 4);
  CHECK(dn.value == doctest::Approx(reduced_me_raising(4, 2, p).value).epsilon(1e-9));

  // all channels agree (throws on inconsistency)
  CHECK_NOTHROW(reduced_me_oracle(ctx, 6, 4, 2, true));
  CHECK(oracle_channel_spread(ctx, 6, 4, 2) <= 1e-9);

  // no extraction channel exists for L' = L = 0
  CHECK_THROWS_AS(reduced_me_oracle(ctx, 2, 0, 0), std::domain_error);
  CHECK_THROWS_AS(reduced_me_oracle(ctx, 9, 1, 1, false, 1e-9), std::out_of_range);

  // convenience overload builds its own context
  const auto r2 = reduced_me_oracle(2, 2, 0, p, space);
  CHECK(r2.value == doctest::Approx(rec.value).epsilon(1e-13));
}

TEST_CASE("oracle agreement on an off-grid tau") {
  const FockSpace space(8);
  const DeformationParam p{-0.22};
  for (const auto& c : matelem_suite(space, p, 6, 1e-8, 1e-9)) {
    INFO(c.name, " tag ", c.tag, " residual ", c.residual);
    CHECK(c.pass());
  }
}

TEST_CASE("expansion suite") {
  for (const auto& c : expansion_suite()) {
    INFO(c.name, " residual ", c.residual);
    CHECK(c.pass());
  }
}
