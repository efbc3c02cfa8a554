#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qso3/basis.hpp"
#include "qso3/matelem.hpp"
#include "qso3/qcg.hpp"
#include "qso3/qnum.hpp"
#include "qso3/textio.hpp"
#include "qso3/verify.hpp"

using nlohmann::json;
using namespace qso3;

namespace {

struct Output {
  std::string path;  // empty = stdout
  void write(const std::string& text) const {
    if (path.empty()) {
      std::fwrite(text.data(), 1, text.size(), stdout);
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
  }
};

std::string fmt(double x) { return format_double(x); }

int half_from_double(double v, const char* what) {
  const double tw = 2 * v;
  const long r = std::lround(tw);
  if (std::abs(tw - r) > 1e-9)
    throw CLI::ValidationError(std::string(what) + " must be integer or half-integer");
  return static_cast<int>(r);
}

int run_qnum(double x, double tau, double scale, const std::string& kind, int k, int t,
             const Output& out) {
  const DeformationParam p{tau};
  double v = 0.0;
  if (kind == "number")
    v = scale == 1.0 ? q_number(x, p) : q_number_scaled(x, scale, p);
  else if (kind == "factorial")
    v = q_factorial(static_cast<int>(std::lround(x)), DeformationParam{scale * tau});
  else if (kind == "double-factorial")
    v = q_double_factorial(static_cast<int>(std::lround(x)), DeformationParam{scale * tau});
  else if (kind == "binomial")
    v = q_binomial(k, t, scale, p);
  else
    throw CLI::ValidationError("unknown --kind " + kind);
  out.write(fmt(v) + "\n");
  return 0;
}

int run_cg(double j1, double m1, double j2, double m2, double J, double M, double tau,
           bool inverted, bool column, const std::string& format, const Output& out) {
  const DeformationParam p{tau};
  const int tj1 = half_from_double(j1, "j1"), tm1 = half_from_double(m1, "m1");
  const int tj2 = half_from_double(j2, "j2"), tm2 = half_from_double(m2, "m2");
  const int tJ = half_from_double(J, "J"), tM = half_from_double(M, "M");
  std::ostringstream s;
  if (!column) {
    const double c = qcg({tj1, tm1, tj2, tm2, tJ, tM, inverted}, p);
    out.write(fmt(c) + "\n");
    return 0;
  }
  const auto col = qcg_column(tj1, tj2, tJ, tM, inverted, p);
  if (format == "json") {
    json rows = json::array();
    for (const auto& e : col)
      rows.push_back({{"m1", e.two_m1 / 2.0}, {"m2", e.two_m2 / 2.0}, {"coeff", e.coeff}});
    s << rows.dump(2) << "\n";
  } else {
    s << "m1,m2,coeff\n";
    for (const auto& e : col)
      s << fmt(e.two_m1 / 2.0) << "," << fmt(e.two_m2 / 2.0) << "," << fmt(e.coeff) << "\n";
  }
  out.write(s.str());
  return 0;
}

int run_basis(int lambda, int L, int M, double tau, int nmax, const std::string& route,
              const std::string& format, const Output& out) {
  const DeformationParam p{tau};
  const FockSpace space(nmax);
  const BasisVector v = route == "explicit" ? basis_state_explicit(lambda, L, M, space, p)
                                            : basis_state_lowering(lambda, L, M, space, p);
  std::ostringstream s;
  if (format == "json") {
    json rows = json::array();
    for (const auto& [st, c] : v.coeffs)
      rows.push_back(
          {{"nplus", st.nplus}, {"nzero", st.nzero}, {"nminus", st.nminus}, {"coeff", c}});
    s << rows.dump(2) << "\n";
  } else {
    s << "nplus,nzero,nminus,coeff\n";
    for (const auto& [st, c] : v.coeffs)
      s << st.nplus << "," << st.nzero << "," << st.nminus << "," << fmt(c) << "\n";
  }
  out.write(s.str());
  return 0;
}

int run_rme(int lambda, int L, int Lp, const std::vector<double>& taus, bool with_oracle,
            int nmax, const std::string& format, const Output& out) {
  std::ostringstream s;
  json rows = json::array();
  if (format != "json")
    s << (with_oracle ? "lambda,L_final,L_initial,tau,value,oracle,rel_diff\n"
                      : "lambda,L_final,L_initial,tau,value\n");
  for (double tau : taus) {
    const DeformationParam p{tau};
    ReducedMERecord rec;
    if (Lp == L + 2)
      rec = reduced_me_raising(lambda, L, p);
    else if (Lp == L)
      rec = reduced_me_diagonal(lambda, L, p);
    else if (Lp == L - 2)
      rec = {lambda, Lp, L, tau, reduced_me_raising(lambda, Lp, p).value, MESource::ClosedForm};
    else
      throw CLI::ValidationError("Lp must be one of L-2, L, L+2");
    double oracle = 0, rel = 0;
    if (with_oracle) {
      const FockSpace space(nmax);
      oracle = reduced_me_oracle(lambda, Lp, L, p, space).value;
      rel = std::abs(oracle - rec.value) / std::max(1.0, std::abs(rec.value));
    }
    if (format == "json") {
      json row = {{"lambda", lambda}, {"L_final", Lp},   {"L_initial", L},
                  {"tau", tau},       {"value", rec.value}};
      if (with_oracle) {
        row["oracle"] = oracle;
        row["rel_diff"] = rel;
      }
      rows.push_back(row);
    } else {
      s << lambda << "," << Lp << "," << L << "," << fmt(tau) << "," << fmt(rec.value);
      if (with_oracle) s << "," << fmt(oracle) << "," << fmt(rel);
      s << "\n";
    }
  }
  if (format == "json") s << rows.dump(2) << "\n";
  out.write(s.str());
  return 0;
}

int run_be2_table(const std::pair<int, int>& lambdas, const std::vector<double>& taus,
                  const std::string& format, const Output& out) {
  std::ostringstream s;
  json rows = json::array();
  if (format != "json") s << "lambda,L,tau,rme_raising,rme_diagonal,be2\n";
  for (int lambda = lambdas.first; lambda <= lambdas.second; ++lambda)
    for (int L = lambda % 2; L + 2 <= lambda; L += 2)
      for (double tau : taus) {
        const DeformationParam p{tau};
        const double up = reduced_me_raising(lambda, L, p).value;
        const double diag = reduced_me_diagonal(lambda, L, p).value;
        const double b = be2(lambda, L, p).value;
        if (format == "json")
          rows.push_back({{"lambda", lambda},
                          {"L", L},
                          {"tau", tau},
                          {"rme_raising", up},
                          {"rme_diagonal", diag},
                          {"be2", b}});
        else
          s << lambda << "," << L << "," << fmt(tau) << "," << fmt(up) << "," << fmt(diag)
            << "," << fmt(b) << "\n";
      }
  if (format == "json") s << rows.dump(2) << "\n";
  out.write(s.str());
  return 0;
}

int run_taylor_check(const Output& out) {
  const auto checks = expansion_suite();
  std::ostringstream s;
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.pass();
    s << (c.pass() ? "[PASS] " : "[FAIL] ") << c.tag << " " << c.name << "  residual "
      << fmt(c.residual) << "  tol " << fmt(c.tolerance) << "\n";
  }
  out.write(s.str());
  return ok ? 0 : 1;
}

int run_verify(int nmax, const std::vector<double>& taus, int lambda_max, bool skip_matelem,
               double tol, const Output& out) {
  VerifyOptions opt;
  opt.nmax = nmax;
  opt.taus = taus;
  opt.lambda_max = lambda_max;
  opt.with_matelem = !skip_matelem;
  if (tol > 0) opt.tol_identity = tol;
  const auto t0 = std::chrono::steady_clock::now();
  const auto checks = run_verification(opt);
  const auto dt =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);

  std::ostringstream s;
  int failed = 0;
  for (const auto& c : checks) {
    if (!c.pass()) ++failed;
    char line[256];
    std::snprintf(line, sizeof line, "%s tau=%-5s %-10s %-55s residual %-12s tol %s\n",
                  c.pass() ? "[PASS]" : "[FAIL]", fmt(c.tau).c_str(), c.tag.c_str(),
                  c.name.c_str(), fmt(c.residual).c_str(), fmt(c.tolerance).c_str());
    s << line;
  }
  s << checks.size() << " checks, " << failed << " failed\n";
  out.write(s.str());
  std::cerr << "verification took " << dt.count() << " ms\n";
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-deformed so(3) angular momentum in the symmetric u(3) irreps: "
               "basis states, Clebsch-Gordan coefficients, quadrupole matrix "
               "elements and B(E2) factors, with a built-in verification suite"};
  app.require_subcommand(1);

  std::string output_path, format = "csv", kind = "number", route = "lowering", tau_spec = "0";
  double x = 0, scale = 1.0, j1 = 0, m1 = 0, j2 = 0, m2 = 0, J = 0, M = 0;
  int kk = 0, tt = 0, lambda = 0, L = 0, Lp = -1, Mproj = 0, nmax = -1, lambda_max = 10;
  double tol = 0.0;
  bool inverted = false, column = false, with_oracle = false, skip_matelem = false;
  std::string lambda_spec = "0";

  auto* c_qnum = app.add_subcommand("qnum", "evaluate q-numbers and q-factorials");
  c_qnum->add_option("--x", x, "argument")->required();
  c_qnum->add_option("--tau", tau_spec, "deformation parameter")->required();
  c_qnum->add_option("--scale", scale, "base scale s (bracket in base q^s)");
  c_qnum->add_option("--kind", kind, "number|factorial|double-factorial|binomial");
  c_qnum->add_option("--k", kk, "binomial upper index");
  c_qnum->add_option("--t", tt, "binomial lower index");

  auto* c_cg = app.add_subcommand("cg", "q-deformed Clebsch-Gordan coefficients");
  c_cg->add_option("--j1", j1)->required();
  c_cg->add_option("--m1", m1);
  c_cg->add_option("--j2", j2)->required();
  c_cg->add_option("--m2", m2);
  c_cg->add_option("--J", J)->required();
  c_cg->add_option("--M", M)->required();
  c_cg->add_option("--tau", tau_spec)->required();
  c_cg->add_flag("--inverted", inverted, "coefficients at q -> 1/q");
  c_cg->add_flag("--column", column, "emit the whole (J,M) column");
  c_cg->add_option("--format", format, "csv|json");

  auto* c_basis = app.add_subcommand("basis", "basis-state coefficients over Fock states");
  c_basis->add_option("--lambda", lambda)->required();
  c_basis->add_option("--L", L)->required();
  c_basis->add_option("--M", Mproj)->required();
  c_basis->add_option("--tau", tau_spec)->required();
  c_basis->add_option("--nmax", nmax, "space cutoff (default max(12, lambda+2))");
  c_basis->add_option("--route", route, "lowering|explicit");
  c_basis->add_option("--format", format, "csv|json");

  auto* c_rme = app.add_subcommand("rme", "reduced quadrupole matrix elements");
  c_rme->add_option("--lambda", lambda)->required();
  c_rme->add_option("--L", L, "initial angular momentum")->required();
  c_rme->add_option("--Lp", Lp, "final angular momentum (default L+2)");
  c_rme->add_option("--tau", tau_spec, "tau value, list or start:stop:count")->required();
  c_rme->add_flag("--oracle", with_oracle, "cross-check against the Fock-space extraction");
  c_rme->add_option("--nmax", nmax, "space cutoff for --oracle");
  c_rme->add_option("--format", format, "csv|json");

  auto* c_be2 = app.add_subcommand("be2-table", "B(E2) transition table");
  c_be2->add_option("--lambda", lambda_spec, "lambda or range a:b")->required();
  c_be2->add_option("--tau", tau_spec, "tau value, list or start:stop:count")->required();
  c_be2->add_option("--format", format, "csv|json");

  auto* c_taylor = app.add_subcommand("taylor-check", "small-tau expansion checks");

  auto* c_verify = app.add_subcommand("verify", "run the full identity suite");
  c_verify->add_option("--nmax", nmax, "space cutoff (default 12)");
  c_verify->add_option("--tau", tau_spec, "tau grid (default -0.3,0,0.1,0.5)");
  c_verify->add_option("--lambda-max", lambda_max, "largest irrep label (default 10)");
  c_verify->add_flag("--skip-matelem", skip_matelem, "identities only, no oracle grid");
  c_verify->add_option("--tol", tol, "identity tolerance override (default 1e-10)")
      ->check(CLI::PositiveNumber);

  for (auto* c : {c_qnum, c_cg, c_basis, c_rme, c_be2, c_taylor, c_verify})
    c->add_option("--output", output_path, "write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  const Output out{output_path};
  try {
    if (app.got_subcommand(c_qnum))
      return run_qnum(x, std::stod(tau_spec), scale, kind, kk, tt, out);
    if (app.got_subcommand(c_cg))
      return run_cg(j1, m1, j2, m2, J, M, std::stod(tau_spec), inverted, column, format, out);
    if (app.got_subcommand(c_basis)) {
      if (nmax < 0) nmax = std::max(12, lambda + 2);
      if (nmax < lambda) throw CLI::ValidationError("nmax must be >= lambda");
      return run_basis(lambda, L, Mproj, std::stod(tau_spec), nmax, route, format, out);
    }
    if (app.got_subcommand(c_rme)) {
      if (Lp < 0) Lp = L + 2;
      if (nmax < 0) nmax = std::max(12, lambda + 2);
      if (nmax < lambda) throw CLI::ValidationError("nmax must be >= lambda");
      return run_rme(lambda, L, Lp, parse_grid(tau_spec), with_oracle, nmax, format, out);
    }
    if (app.got_subcommand(c_be2))
      return run_be2_table(parse_int_range(lambda_spec), parse_grid(tau_spec), format, out);
    if (app.got_subcommand(c_taylor)) return run_taylor_check(out);
    if (app.got_subcommand(c_verify)) {
      if (nmax < 0) nmax = 12;
      const auto taus = c_verify->count("--tau") ? parse_grid(tau_spec)
                                                 : std::vector<double>{-0.3, 0.0, 0.1, 0.5};
      return run_verify(nmax, taus, lambda_max, skip_matelem, tol, out);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    // flag values outside the mathematical domain are usage errors too
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
