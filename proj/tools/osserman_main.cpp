#include "gff/catalog.hpp"
#include "gff/engines.hpp"
#include "gff/osserman.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;
using namespace gff;

using Clock = std::chrono::steady_clock;

json vec_json(const Vec& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json spectrum_json(const Spectrum& sp) {
  json out;
  out["eigenvalues"] = sp.eigenvalues;
  out["multiplicities"] = sp.multiplicities;
  return out;
}

json model_descriptor(const Model& m) {
  json out;
  out["name"] = m.name;
  out["kind"] = to_string(m.kind);
  out["provenance"] = m.provenance;
  out["n"] = m.point.n();
  out["s"] = m.point.s();
  json params = json::object();
  if (m.c) params["c"] = *m.c;
  if (m.kind == ModelKind::chart) params["point"] = vec_json(m.chart_model().point);
  out["parameters"] = std::move(params);
  return out;
}

std::vector<double> expand(const Spectrum& sp) {
  std::vector<double> out;
  for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i)
    out.insert(out.end(), sp.multiplicities[i], sp.eigenvalues[i]);
  return out;
}

std::string fmt_list(const std::vector<double>& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v[i]);
    os << buf;
  }
  os << "]";
  return os.str();
}

std::string fmt_spectrum(const Spectrum& sp) {
  std::ostringstream os;
  for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) {
    if (i) os << ", ";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g (x%d)", sp.eigenvalues[i], sp.multiplicities[i]);
    os << buf;
  }
  return os.str();
}

int emit(json& report, Clock::time_point start, int code) {
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
  report["wall_time_ms"] = static_cast<std::int64_t>(ms);
  std::cout << report.dump(2) << "\n";
  return code;
}

/// Curvature from the data the model kind natively carries.
CurvatureTensor native_curvature(const Model& m) {
  switch (m.kind) {
    case ModelKind::lie:
      return lie_group_curvature(m.lie_model());
    case ModelKind::chart:
      return coordinate_curvature(m.chart_model());
    case ModelKind::algebraic:
      break;
  }
  if (!m.c) throw StructureError("algebraic model carries no curvature constant");
  return space_form_curvature(m.point, *m.c);
}

/// The model's constant phi-sectional curvature: declared when present,
/// otherwise measured from the native engine on the first im(phi) direction.
double resolve_c(const Model& m, json& results) {
  if (m.c) return *m.c;
  if (m.kind == ModelKind::algebraic)
    throw StructureError("algebraic model carries no curvature constant");
  const CurvatureTensor nat = native_curvature(m);
  const double c = phi_sectional_curvature(nat, m.point, m.point.im_phi_basis().col(0));
  results["measured_c"] = c;
  return c;
}

CurvatureTensor engine_curvature(const std::string& engine, const Model& m, json& results) {
  if (engine == "eq1") return space_form_curvature(m.point, resolve_c(m, results));
  if (engine == "koszul") {
    if (m.kind != ModelKind::lie)
      throw StructureError("engine 'koszul' needs a lie model, got kind '" + to_string(m.kind) +
                           "'");
    return lie_group_curvature(m.lie_model());
  }
  if (engine == "chart") {
    if (m.kind != ModelKind::chart)
      throw StructureError("engine 'chart' needs a chart model, got kind '" + to_string(m.kind) +
                           "'");
    return coordinate_curvature(m.chart_model());
  }
  // thm57: two-eigenvalue reconstruction with J induced by phi.
  if (m.point.s() != 2) throw StructureError("engine 'thm57' needs s = 2");
  const double c = resolve_c(m, results);
  const double c1 = c + 1.0;
  const double c2 = (c + 4.0) / 4.0;
  const Mat& B = m.point.im_phi_basis();
  const Mat jm = B.transpose() * m.point.g().matrix() * m.point.phi() * B;
  const AlmostComplexJ J(m.point, jm);
  json params;
  params["c1"] = c1;
  params["c2"] = c2;
  results["thm57_parameters"] = std::move(params);
  return reconstructed_curvature(m.point, J, c1, c2);
}

int cmd_validate(const std::string& file, double tol) {
  const auto start = Clock::now();
  json report;
  report["command"] = "validate";
  try {
    const Model m = load_model(file);
    report["model"] = model_descriptor(m);
    const StructureReport sr = validate_model(m, tol);

    json checks = json::array();
    std::fprintf(stderr, "structure checks for %s (%s):\n", m.name.c_str(),
                 to_string(m.kind).c_str());
    for (const AxiomCheck& c : sr.checks) {
      json jc;
      jc["name"] = c.name;
      jc["violation"] = c.violation;
      jc["passed"] = c.passed;
      checks.push_back(std::move(jc));
      std::fprintf(stderr, "  %-28s %10.3e  %s\n", c.name.c_str(), c.violation,
                   c.passed ? "pass" : "FAIL");
    }
    json results;
    results["passed"] = sr.passed;
    results["checks"] = std::move(checks);
    report["results"] = std::move(results);
    report["seed"] = 0;
    report["tolerances"] = json{{"structure", tol}};
    std::fprintf(stderr, "result: %s\n", sr.passed ? "PASS" : "FAIL");
    return emit(report, start, sr.passed ? 0 : 2);
  } catch (const IoError& e) {
    report["error"] = e.what();
    std::fprintf(stderr, "io error: %s\n", e.what());
    return emit(report, start, 1);
  } catch (const std::exception& e) {
    report["error"] = e.what();
    std::fprintf(stderr, "error: %s\n", e.what());
    return emit(report, start, 2);
  }
}

int cmd_check(const std::string& file, const std::string& engine, const std::string& mode,
              int count, std::uint64_t seed, double tol) {
  const auto start = Clock::now();
  json report;
  report["command"] = "check";
  try {
    const Model m = load_model(file);
    report["model"] = model_descriptor(m);

    json results;
    results["engine"] = engine;
    results["mode"] = mode;
    results["count"] = count;

    const StructureReport sr = validate_model(m);
    if (!sr.passed) {
      results["structure_failed"] = sr.first_failure();
      report["results"] = std::move(results);
      report["seed"] = static_cast<std::int64_t>(seed);
      report["tolerances"] = json{{"verdict", tol}, {"structure", 1e-10}};
      std::fprintf(stderr, "structure check failed: %s\n", sr.first_failure().c_str());
      return emit(report, start, 2);
    }

    const CurvatureTensor r = engine_curvature(engine, m, results);
    const OssermanConfig cfg{count, seed, tol};
    const OssermanVerdict v = mode == "phi-null" ? check_phi_null_osserman(r, m.point, cfg)
                                                 : check_null_osserman(r, m.point, cfg);

    json jv;
    jv["passed"] = v.passed;
    jv["samples"] = v.samples;
    jv["worst_deviation"] = v.worst_deviation;
    jv["reference_spectrum"] = spectrum_json(v.reference);
    if (!v.passed) {
      json w;
      w["x"] = vec_json(v.witness_x);
      w["eigenvalues"] = v.witness_eigenvalues;
      jv["witness"] = std::move(w);
    }
    results["verdict"] = std::move(jv);
    report["results"] = std::move(results);
    report["seed"] = static_cast<std::int64_t>(seed);
    report["tolerances"] = json{{"verdict", tol}, {"structure", 1e-10}};

    std::fprintf(stderr, "check %s (%s)  engine=%s mode=%s seed=%llu count=%d tol=%g\n",
                 m.name.c_str(), to_string(m.kind).c_str(), engine.c_str(), mode.c_str(),
                 static_cast<unsigned long long>(seed), count, tol);
    std::fprintf(stderr, "spectrum: %s\n", fmt_spectrum(v.reference).c_str());
    std::fprintf(stderr, "worst deviation: %.3e over %d samples\n", v.worst_deviation, v.samples);
    if (!v.passed)
      std::fprintf(stderr, "witness x = %s with eigenvalues %s\n",
                   fmt_list(std::vector<double>(v.witness_x.data(),
                                                v.witness_x.data() + v.witness_x.size()))
                       .c_str(),
                   fmt_list(v.witness_eigenvalues).c_str());
    std::fprintf(stderr, "verdict: %s\n", v.passed ? "PASS" : "FAIL");
    return emit(report, start, v.passed ? 0 : 3);
  } catch (const IoError& e) {
    report["error"] = e.what();
    std::fprintf(stderr, "io error: %s\n", e.what());
    return emit(report, start, 1);
  } catch (const std::exception& e) {
    report["error"] = e.what();
    std::fprintf(stderr, "error: %s\n", e.what());
    return emit(report, start, 2);
  }
}

struct Row {
  std::string label;
  std::vector<double> expected;
  std::vector<double> computed;
  double deviation = 0.0;
  bool passed = false;
};

Row make_row(std::string label, std::vector<double> expected, std::vector<double> computed,
             double tol, bool extra_ok = true) {
  Row row;
  row.label = std::move(label);
  row.expected = std::move(expected);
  row.computed = std::move(computed);
  if (row.expected.size() != row.computed.size()) {
    row.deviation = 1.0;
    row.passed = false;
    return row;
  }
  for (std::size_t i = 0; i < row.expected.size(); ++i)
    row.deviation = std::max(row.deviation, std::abs(row.expected[i] - row.computed[i]));
  row.passed = row.deviation < tol && extra_ok;
  return row;
}

std::vector<double> thm44_expected(int n, int s, double c) {
  std::vector<double> out;
  out.push_back(c + 1.0);
  out.insert(out.end(), 2 * n - 2, (c + 3.0 * s - 2.0) / 4.0);
  if (s >= 2) out.push_back(s - 1.0);
  if (s >= 3) out.insert(out.end(), s - 2, 0.0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Row> table_u2(const OssermanConfig& cfg, double tol) {
  const Model m = build_u2_model();
  const CurvatureTensor r = lie_group_curvature(m.lie_model());
  const GffPoint& S = m.point;
  std::vector<Row> rows;
  const char* labels[2] = {"spectrum at u = xi1 + X", "spectrum at u = xi1 + Y"};
  for (int k = 0; k < 2; ++k) {
    Vec x = Vec::Zero(4);
    x[2 + k] = 1.0;
    const JacobiOperator op = jacobi_operator(r, S, null_direction(S, x));
    rows.push_back(make_row(labels[k], {1.0, 5.0}, op.eigen().eigenvalues, tol));
  }
  {
    const JacobiOperator op = jacobi_operator(r, S, null_direction(S, S.xi(1)));
    Row row = make_row("spectrum at u = xi1 + xi2", {0.0, 0.0}, op.eigen().eigenvalues, tol);
    row.passed = row.passed && op.matrix.cwiseAbs().maxCoeff() < tol;
    rows.push_back(std::move(row));
  }
  const OssermanVerdict vp = check_phi_null_osserman(r, S, cfg);
  rows.push_back(make_row("phi-null verdict (1 = pass)", {1.0}, {vp.passed ? 1.0 : 0.0}, 0.5));
  const OssermanVerdict vn = check_null_osserman(r, S, cfg);
  rows.push_back(make_row("full-null verdict (0 = fail)", {0.0}, {vn.passed ? 1.0 : 0.0}, 0.5));
  return rows;
}

std::vector<Row> table_thm44(const OssermanConfig& cfg, double tol) {
  std::vector<Row> rows;
  for (int n = 1; n <= 3; ++n) {
    for (int s = 1; s <= 3; ++s) {
      for (double c : {-1.0, 0.0, 1.0, 4.0}) {
        const Model m = build_space_form_model(n, s, c);
        const CurvatureTensor r = space_form_curvature(m.point, c);
        const OssermanVerdict v = check_phi_null_osserman(r, m.point, cfg);
        std::ostringstream label;
        label << "n=" << n << " s=" << s << " c=" << c;
        rows.push_back(
            make_row(label.str(), thm44_expected(n, s, c), expand(v.reference), tol, v.passed));
      }
    }
  }
  return rows;
}

std::vector<Row> table_r4(const OssermanConfig& cfg, double tol) {
  std::vector<Row> rows;
  for (double y : {0.0, 0.7, -1.3}) {
    Vec p = Vec::Zero(4);
    p[1] = y;
    const Model m = build_r4_model(p);
    const CurvatureTensor r = coordinate_curvature(m.chart_model());
    const OssermanVerdict v = check_phi_null_osserman(r, m.point, cfg);
    std::ostringstream label;
    label << "spectrum at y=" << y;
    rows.push_back(make_row(label.str(), {1.0, 1.0}, expand(v.reference), tol, v.passed));
  }
  return rows;
}

std::vector<Row> table_remark58(const OssermanConfig& cfg, double tol) {
  std::vector<Row> rows;
  for (double c : {-1.0, 0.0, 1.0, 4.0}) {
    const Model m = build_space_form_model(2, 2, c);
    const CurvatureTensor r = space_form_curvature(m.point, c);
    const SingleEigenvalueReport rep = classify_single_eigenvalue(r, m.point, cfg);
    // Split the restricted spectrum into the simple eigenvalue and the rest.
    double c1 = 0.0, c2 = 0.0;
    if (rep.restricted.eigenvalues.size() == 1) {
      c1 = c2 = rep.restricted.eigenvalues[0];
    } else {
      for (std::size_t i = 0; i < rep.restricted.eigenvalues.size(); ++i) {
        if (rep.restricted.multiplicities[i] == 1)
          c1 = rep.restricted.eigenvalues[i];
        else
          c2 = rep.restricted.eigenvalues[i];
      }
    }
    std::ostringstream label;
    label << "c1 - 4 c2 + 3 at c=" << c << " (c1=" << c1 << ", c2=" << c2 << ")";
    rows.push_back(make_row(label.str(), {0.0}, {remark58_residual(c1, c2)}, tol));
  }
  return rows;
}

std::vector<Row> table_prop59(const OssermanConfig& cfg, double tol) {
  std::vector<Row> rows;
  {
    const Model m = build_space_form_model(2, 2, 0.0);
    const CurvatureTensor r = space_form_curvature(m.point, 0.0);
    const SingleEigenvalueReport rep = classify_single_eigenvalue(r, m.point, cfg);
    rows.push_back(
        make_row("c=0: single eigenvalue (1 = yes)", {1.0}, {rep.is_single ? 1.0 : 0.0}, 0.5));
    rows.push_back(make_row("c=0: eigenvalue", {1.0}, {rep.lambda}, tol));
    rows.push_back(make_row("c=0: phi-sectional curvature", {0.0}, {rep.phi_sectional_c}, tol));
  }
  {
    const Model m = build_space_form_model(2, 2, 4.0);
    const CurvatureTensor r = space_form_curvature(m.point, 4.0);
    const SingleEigenvalueReport rep = classify_single_eigenvalue(r, m.point, cfg);
    rows.push_back(
        make_row("c=4: single eigenvalue (0 = no)", {0.0}, {rep.is_single ? 1.0 : 0.0}, 0.5));
  }
  return rows;
}

int cmd_reproduce(const std::string& table, int count, std::uint64_t seed, double tol) {
  const auto start = Clock::now();
  json report;
  report["command"] = "reproduce";
  report["model"] = nullptr;
  try {
    const OssermanConfig cfg{count, seed, std::min(tol, 1e-7)};
    std::vector<Row> rows;
    if (table == "u2")
      rows = table_u2(cfg, tol);
    else if (table == "thm44")
      rows = table_thm44(cfg, tol);
    else if (table == "r4")
      rows = table_r4(cfg, tol);
    else if (table == "remark58")
      rows = table_remark58(cfg, tol);
    else
      rows = table_prop59(cfg, tol);

    bool all = true;
    json jrows = json::array();
    std::fprintf(stderr, "%-42s %-22s %-22s %-10s %s\n", "row", "expected", "computed",
                 "deviation", "status");
    for (const Row& row : rows) {
      all = all && row.passed;
      json jr;
      jr["label"] = row.label;
      jr["expected"] = row.expected;
      jr["computed"] = row.computed;
      jr["deviation"] = row.deviation;
      jr["passed"] = row.passed;
      jrows.push_back(std::move(jr));
      std::fprintf(stderr, "%-42s %-22s %-22s %-10.3e %s\n", row.label.c_str(),
                   fmt_list(row.expected).c_str(), fmt_list(row.computed).c_str(), row.deviation,
                   row.passed ? "pass" : "FAIL");
    }
    json results;
    results["table"] = table;
    results["count"] = count;
    results["rows"] = std::move(jrows);
    results["passed"] = all;
    report["results"] = std::move(results);
    report["seed"] = static_cast<std::int64_t>(seed);
    report["tolerances"] = json{{"row", tol}};
    std::fprintf(stderr, "table %s: %s\n", table.c_str(), all ? "PASS" : "FAIL");
    return emit(report, start, all ? 0 : 3);
  } catch (const std::exception& e) {
    report["error"] = e.what();
    std::fprintf(stderr, "error: %s\n", e.what());
    return emit(report, start, 2);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature engines and null-Osserman checks for Lorentz framed structures"};
  app.require_subcommand(1);

  std::string file;
  std::string engine;
  std::string mode = "phi-null";
  std::string table;
  int count = 64;
  std::uint64_t seed = 42;
  double tol = 1e-7;
  double structure_tol = 1e-10;

  CLI::App* validate = app.add_subcommand("validate", "Check the structure axioms of a model file");
  validate->add_option("model", file, "model JSON file")->required();
  validate->add_option("--tol", structure_tol, "structure tolerance")->capture_default_str();

  CLI::App* check = app.add_subcommand("check", "Run a null-Osserman verdict on a model file");
  check->add_option("model", file, "model JSON file")->required();
  check->add_option("--engine", engine, "curvature engine")
      ->required()
      ->check(CLI::IsMember({"eq1", "koszul", "chart", "thm57"}));
  check->add_option("--mode", mode, "congruence to sample")
      ->check(CLI::IsMember({"phi-null", "null"}))
      ->capture_default_str();
  check->add_option("--count", count, "random probe count")->capture_default_str();
  check->add_option("--seed", seed, "probe seed")->capture_default_str();
  check->add_option("--tol", tol, "verdict tolerance")
      ->envname("OSSERMAN_TOL")
      ->capture_default_str();

  CLI::App* reproduce = app.add_subcommand("reproduce", "Recompute a built-in reference table");
  reproduce->add_option("--table", table, "table name")
      ->required()
      ->check(CLI::IsMember({"u2", "thm44", "r4", "remark58", "prop59"}));
  reproduce->add_option("--count", count, "random probe count")->capture_default_str();
  reproduce->add_option("--seed", seed, "probe seed")->capture_default_str();
  CLI::Option* rtol = reproduce->add_option("--tol", tol, "row tolerance (default per table)")
                          ->envname("OSSERMAN_TOL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (validate->parsed()) return cmd_validate(file, structure_tol);
  if (check->parsed()) return cmd_check(file, engine, mode, count, seed, tol);

  if (rtol->count() == 0) {
    if (table == "u2" || table == "r4")
      tol = 1e-7;
    else
      tol = 1e-9;
  }
  return cmd_reproduce(table, count, seed, tol);
}
