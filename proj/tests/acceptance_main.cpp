// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Criteria 1-7 drive the library directly; criterion 8 runs the
// command-line binary twice and compares bytes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qso3/matelem.hpp"
#include "qso3/verify.hpp"

using namespace qso3;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool pass, const std::string& detail) {
  if (!pass) ++g_failures;
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.c_str());
}

struct TagStat {
  double worst = -1.0;  // -1: tag never seen
  bool all_pass = true;
};

TagStat scan(const std::vector<CheckResult>& results,
             const std::function<bool(const CheckResult&)>& select) {
  TagStat st;
  for (const auto& c : results)
    if (select(c)) {
      st.worst = std::max(st.worst, c.residual);
      st.all_pass = st.all_pass && c.pass();
    }
  return st;
}

TagStat by_tag(const std::vector<CheckResult>& results, const std::string& tag) {
  return scan(results, [&](const CheckResult& c) { return c.tag == tag; });
}

TagStat by_name(const std::vector<CheckResult>& results, const std::string& needle) {
  return scan(results,
              [&](const CheckResult& c) { return c.name.find(needle) != std::string::npos; });
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QSO3_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string fmt_residual(double r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "worst residual %.3e", r);
  return buf;
}

}  // namespace

int main() {
  const std::vector<double> grid4 = {-0.3, 0.0, 0.1, 0.5};
  const std::vector<double> grid6 = {-0.3, -0.1, 0.0, 0.1, 0.3, 0.5};

  // ---- criteria 1-3: identity and construction suites on the 4-tau grid ----
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<CheckResult> alg;
  for (double tau : grid4) {
    const FockSpace space(12);
    auto r = algebra_suite(space, {tau}, 1e-10, 1e-12);
    alg.insert(alg.end(), r.begin(), r.end());
  }
  const double algebra_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  {
    const std::vector<std::string> tags = {"(s1)",   "(s4)",   "(s5)",   "(s7)",  "(s8)",
                                           "(s9)",   "(b3)",   "(b4)",   "(v3)",  "(v5)",
                                           "(v11)",  "(v14)",  "(v16)",  "(v21)", "(v22a)",
                                           "(v22b)", "(v22c)", "(q8)",   "(q10)", "(q11)"};
    bool ok = algebra_seconds <= 60.0;
    double worst = 0.0;
    for (const auto& t : tags) {
      const auto st = by_tag(alg, t);
      ok = ok && st.worst >= 0.0 && st.all_pass;
      worst = std::max(worst, st.worst);
    }
    char detail[128];
    std::snprintf(detail, sizeof detail, "worst residual %.3e, tol 1e-10, %.1f s", worst,
                  algebra_seconds);
    report(1, "algebra suite, nmax 12, tau {-0.3, 0, 0.1, 0.5}", ok, detail);
  }

  std::vector<CheckResult> bas;
  for (double tau : grid4) {
    const FockSpace space(12);
    auto r = basis_suite(space, {tau}, 10, 1e-10);
    bas.insert(bas.end(), r.begin(), r.end());
  }

  {
    const auto gen = by_tag(alg, "(s3)=(s10)");
    const auto route = by_tag(bas, "(b7)=(b16)");
    const auto b15 = by_tag(bas, "(b15)");
    const bool ok = gen.all_pass && gen.worst >= 0 && route.all_pass && route.worst >= 0 &&
                    b15.all_pass && b15.worst >= 0;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "generators %.3e (tol 1e-12), basis routes %.3e, S+ powers %.3e (tol 1e-10)",
                  gen.worst, route.worst, b15.worst);
    report(2, "construction equivalence", ok, detail);
  }

  {
    const auto gram = by_name(bas, "basis orthonormal");
    const auto compl_ = by_name(bas, "basis complete");
    const auto cas = by_name(bas, "Casimir eigenvalue");
    const auto norm = by_name(bas, "unit norm without renormalization");
    const bool ok = gram.all_pass && gram.worst >= 0 && compl_.all_pass && cas.all_pass &&
                    norm.all_pass && norm.worst >= 0;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "Gram %.3e, Casimir %.3e, explicit norm %.3e (tol 1e-10), lambda <= 10",
                  gram.worst, cas.worst, norm.worst);
    report(3, "basis integrity", ok, detail);
  }

  // ---- criteria 4 and 7: oracle equivalence on the 6-tau grid ----
  std::vector<CheckResult> mat;
  for (double tau : grid6) {
    const FockSpace space(12);
    auto r = matelem_suite(space, {tau}, 10, 1e-8, 1e-9);
    mat.insert(mat.end(), r.begin(), r.end());
  }

  {
    const auto up = by_tag(mat, "(q14a)");
    const auto dn = by_tag(mat, "(q14b)");
    const auto ch = by_name(mat, "channel independence");
    const bool ok = up.all_pass && up.worst >= 0 && dn.all_pass && dn.worst >= 0 &&
                    ch.all_pass && ch.worst >= 0;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "closed vs oracle %.3e (tol 1e-8), channel spread %.3e (tol 1e-9)",
                  std::max(up.worst, dn.worst), ch.worst);
    report(4, "reduced-matrix-element oracle equivalence, lambda <= 10, 6 tau values", ok,
           detail);
  }

  {
    const double v1 = reduced_me_raising(2, 0, {0.0}).value;
    const double v2 = reduced_me_diagonal(2, 2, {0.0}).value;
    const double v3 = be2(4, 0, {0.0}).value;
    const double d1 = std::abs(v1 - 2 * std::sqrt(10.0));
    const double d2 = std::abs(v2 - (-8.3666003));
    const double d3 = std::abs(v3 - 22.4);
    const bool ok = d1 <= 1e-8 && d2 <= 1e-7 && d3 <= 1e-8;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "2*sqrt(10): %.1e (tol 1e-8), -8.3666003: %.1e (tol 1e-7), 22.4: %.1e "
                  "(tol 1e-8)",
                  d1, d2, d3);
    report(5, "exact spot values at tau = 0", ok, detail);
  }

  const auto exp_suite = expansion_suite();
  {
    const auto st = by_name(exp_suite, "tau^3");
    report(6, "quadratic truncation error scales as tau^3 over 20 random (lambda, L)",
           st.all_pass && st.worst >= 0,
           "worst scaling factor " + std::to_string(st.worst) + ", allowed 3");
  }

  {
    const auto st = by_tag(mat, "(q15)");
    report(7, "raising/lowering symmetry via closed form and oracle, lambda <= 10",
           st.all_pass && st.worst >= 0, fmt_residual(st.worst) + ", tol 1e-9");
  }

  // ---- criterion 8: byte-identical CLI output ----
  {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "qso3_acceptance";
    fs::create_directories(dir);
    const auto f = [&](const char* n) { return (dir / n).string(); };

    bool ok = true;
    ok &= run_cli("verify --nmax 8 --tau -0.2,0.3 --lambda-max 6 --output " + f("v1")) == 0;
    ok &= run_cli("verify --nmax 8 --tau -0.2,0.3 --lambda-max 6 --output " + f("v2")) == 0;
    const bool verify_same = read_file(f("v1")) == read_file(f("v2"));
    ok &= verify_same && !read_file(f("v1")).empty();

    ok &= run_cli("be2-table --lambda 2:6 --tau -0.25:0.25:5 --output " + f("b1")) == 0;
    ok &= run_cli("be2-table --lambda 2:6 --tau -0.25:0.25:5 --output " + f("b2")) == 0;
    const bool table_same = read_file(f("b1")) == read_file(f("b2"));
    ok &= table_same && !read_file(f("b1")).empty();

    // spot-check the emitted schema and the classical row
    ok &= run_cli("be2-table --lambda 4 --tau 0 --format csv --output " + f("b3")) == 0;
    const std::string table = read_file(f("b3"));
    ok &= table.rfind("lambda,L,tau,rme_raising,rme_diagonal,be2\n", 0) == 0;
    ok &= table.find("\n4,0,0,") != std::string::npos;
    ok &= table.find(",22.4\n") != std::string::npos;

    ok &= run_cli("qnum --x 0 --tau 0.3 --output " + f("q1")) == 0;
    ok &= read_file(f("q1")) == "0\n";
    ok &= run_cli("qnum --bogus 2>/dev/null") == 2;

    report(8, "deterministic output and CLI contract", ok,
           std::string("verify runs identical: ") + (verify_same ? "yes" : "no") +
               ", be2-table runs identical: " + (table_same ? "yes" : "no"));
  }

  if (g_failures == 0) std::printf("all acceptance criteria satisfied\n");
  return g_failures == 0 ? 0 : 1;
}
