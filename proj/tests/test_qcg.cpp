#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "qso3/qcg.hpp"
#include "qso3/verify.hpp"

using namespace qso3;

TEST_CASE("stretched and selection-rule values") {
  for (double tau : {-0.4, 0.0, 0.31}) {
    const DeformationParam p{tau};
    CHECK(qcg({2, 2, 2, 2, 4, 4, false}, p) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(qcg({2, 0, 2, 2, 4, 4, false}, p) == 0.0);  // M != m1 + m2
    CHECK(qcg({2, 2, 2, 2, 8, 4, false}, p) == 0.0);  // triangle violation
  }
}

TEST_CASE("classical singlet coupling") {
  const DeformationParam p{1e-13};
  CHECK(qcg({2, 2, 2, -2, 0, 0, false}, p) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-8));
  const auto col = qcg_column(2, 2, 0, 0, false, p);
  REQUIRE(col.size() == 3);
  // signs alternate with m1, largest m1 positive
  CHECK(col[0].coeff == doctest::Approx(+1 / std::sqrt(3.0)).epsilon(1e-8));
  CHECK(col[1].coeff == doctest::Approx(-1 / std::sqrt(3.0)).epsilon(1e-8));
  CHECK(col[2].coeff == doctest::Approx(+1 / std::sqrt(3.0)).epsilon(1e-8));
}

TEST_CASE("malformed keys throw") {
  const DeformationParam p{0.1};
  CHECK_THROWS_AS(qcg({2, 4, 2, 0, 2, 0, false}, p), std::domain_error);   // |m1| > j1
  CHECK_THROWS_AS(qcg({-2, 0, 2, 0, 2, 0, false}, p), std::domain_error);  // j1 < 0
  CHECK_THROWS_AS(qcg({2, 1, 2, 0, 2, 1, false}, p), std::domain_error);   // parity
}

TEST_CASE("column properties") {
  const DeformationParam p{0.27};
  const auto stretched = qcg_column(2, 2, 4, 4, false, p);
  REQUIRE(stretched.size() == 1);
  CHECK(stretched[0].two_m1 == 2);
  CHECK(stretched[0].coeff == doctest::Approx(1.0));
  CHECK(qcg_column(2, 2, 8, 0, false, p).empty());  // triangle violation

  for (int two_J : {0, 2, 4})
    for (int two_M = -two_J; two_M <= two_J; two_M += 2) {
      double n = 0;
      for (const auto& e : qcg_column(2, 2, two_J, two_M, false, p)) n += e.coeff * e.coeff;
      CHECK(n == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("closed sum equals kernel construction, half-integers included") {
  for (double tau : {-0.35, 0.18, 0.5}) {
    const DeformationParam p{tau};
    for (int two_j1 : {1, 2, 3, 4})
      for (int two_j2 : {1, 2, 3}) {
        for (int two_J = std::abs(two_j1 - two_j2); two_J <= two_j1 + two_j2; two_J += 2)
          for (int two_M = -two_J; two_M <= two_J; two_M += 2)
            for (bool inv : {false, true}) {
              const auto a = qcg_column(two_j1, two_j2, two_J, two_M, inv, p);
              const auto b = qcg_column_by_construction(two_j1, two_j2, two_J, two_M, inv, p);
              REQUIRE(a.size() == b.size());
              for (size_t i = 0; i < a.size(); ++i) {
                CHECK(a[i].two_m1 == b[i].two_m1);
                CHECK(a[i].coeff == doctest::Approx(b[i].coeff).epsilon(1e-12));
              }
            }
      }
  }
}

TEST_CASE("orthogonality across the verification grid") {
  for (double tau : {-0.3, 0.0, 0.2, 0.5})
    for (const auto& c : qcg_suite({tau}, 1e-10)) {
      INFO(c.name, " at tau=", tau);
      CHECK(c.pass());
    }
}

// brute-force oracle: diagonalize the classical coupled Casimir in each
// fixed-M subspace and match eigenvectors against the q -> 1 coefficients
TEST_CASE("classical limit against coupled-Casimir diagonalization") {
  auto cls = [](double x) { return x; };  // classical [x] = x
  for (int two_j1 : {2, 3, 4})
    for (int two_j2 : {2, 4}) {
      const double j1 = two_j1 / 2.0, j2 = two_j2 / 2.0;
      for (int two_M = -(two_j1 + two_j2); two_M <= two_j1 + two_j2; two_M += 2) {
        // enumerate product states with m1 + m2 = M
        std::vector<std::pair<int, int>> states;
        for (int m1 = -two_j1; m1 <= two_j1; m1 += 2) {
          const int m2 = two_M - m1;
          if (std::abs(m2) <= two_j2) states.push_back({m1, m2});
        }
        if (states.empty()) continue;
        const int n = static_cast<int>(states.size());
        // coupled J-J+ in this subspace (coproduct at q = 1 is the plain sum)
        Eigen::MatrixXd jp = Eigen::MatrixXd::Zero(n, n), j0 = Eigen::MatrixXd::Zero(n, n);
        std::map<std::pair<int, int>, int> up_index;
        std::vector<std::pair<int, int>> up_states;
        for (int m1 = -two_j1; m1 <= two_j1; m1 += 2) {
          const int m2 = two_M + 2 - m1;
          if (std::abs(m2) <= two_j2) {
            up_index[{m1, m2}] = static_cast<int>(up_states.size());
            up_states.push_back({m1, m2});
          }
        }
        Eigen::MatrixXd raise(up_states.size(), n);
        raise.setZero();
        for (int i = 0; i < n; ++i) {
          const double m1 = states[i].first / 2.0, m2 = states[i].second / 2.0;
          auto it = up_index.find({states[i].first + 2, states[i].second});
          if (it != up_index.end())
            raise(it->second, i) += std::sqrt(cls(j1 - m1) * cls(j1 + m1 + 1));
          it = up_index.find({states[i].first, states[i].second + 2});
          if (it != up_index.end())
            raise(it->second, i) += std::sqrt(cls(j2 - m2) * cls(j2 + m2 + 1));
        }
        const double M = two_M / 2.0;
        Eigen::MatrixXd casimir =
            raise.transpose() * raise + M * (M + 1) * Eigen::MatrixXd::Identity(n, n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(casimir);
        const DeformationParam p{1e-13};
        for (int k = 0; k < n; ++k) {
          const double Jval = 0.5 * (-1 + std::sqrt(1 + 4 * es.eigenvalues()(k)));
          const int two_J = static_cast<int>(std::lround(2 * Jval));
          Eigen::VectorXd v = es.eigenvectors().col(k);
          if (v(n - 1) < 0) v = -v;  // largest m1 positive
          for (int i = 0; i < n; ++i) {
            const double c = qcg(
                {two_j1, states[i].first, two_j2, states[i].second, two_J, two_M, false}, p);
            CHECK(std::abs(c - v(i)) <= 1e-8);
          }
        }
      }
    }
}

TEST_CASE("concurrent column retrieval is consistent") {
  const DeformationParam p{0.21};
  const auto ref = qcg_column(4, 4, 4, 2, true, p);
  std::vector<std::thread> pool;
  std::vector<int> ok(8, 0);
  for (int t = 0; t < 8; ++t)
    pool.emplace_back([&, t] {
      for (int i = 0; i < 50; ++i) {
        const auto col = qcg_column(4, 4, 4, 2, true, p);
        if (col.size() == ref.size() && col[0].coeff == ref[0].coeff) ok[t]++;
      }
    });
  for (auto& th : pool) th.join();
  for (int t = 0; t < 8; ++t) CHECK(ok[t] == 50);
}
