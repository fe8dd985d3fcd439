#include "gff/catalog.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace gff {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void schema_fail(const std::string& what) { throw SchemaError("model schema: " + what); }

const json& require(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) schema_fail(std::string("missing field '") + field + "'");
  return *it;
}

std::string get_string(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_string()) schema_fail(std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

int get_int(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_number_integer()) schema_fail(std::string("field '") + field + "' must be an integer");
  return v.get<int>();
}

double number_at(const json& v, const char* field) {
  if (!v.is_number()) schema_fail(std::string("field '") + field + "' must hold numbers");
  return v.get<double>();
}

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vec vec_from_json(const json& j, int size, const char* field) {
  if (!j.is_array() || static_cast<int>(j.size()) != size)
    schema_fail(std::string("field '") + field + "' must be an array of " + std::to_string(size) +
                " numbers");
  Vec v(size);
  for (int i = 0; i < size; ++i) v[i] = number_at(j[i], field);
  return v;
}

json mat_to_json(const Mat& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Mat mat_from_json(const json& j, int rows, int cols, const char* field) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    schema_fail(std::string("field '") + field + "' must have " + std::to_string(rows) + " rows");
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) m.row(i) = vec_from_json(j[i], cols, field).transpose();
  return m;
}

json poly_to_json(const Polynomial& p) {
  json out = json::array();
  for (const Polynomial::Term& t : p.terms()) {
    json exps = json::array();
    for (int e : t.exps) exps.push_back(e);
    out.push_back(json::array({t.coeff, std::move(exps)}));
  }
  return out;
}

Polynomial poly_from_json(const json& j, int nvars, const char* field) {
  if (!j.is_array()) schema_fail(std::string("field '") + field + "' must hold term lists");
  Polynomial p(nvars);
  for (const json& term : j) {
    if (!term.is_array() || term.size() != 2 || !term[1].is_array() ||
        static_cast<int>(term[1].size()) != nvars)
      schema_fail(std::string("field '") + field + "': each term must be [coeff, [" +
                  std::to_string(nvars) + " exponents]]");
    std::vector<int> exps(nvars);
    for (int k = 0; k < nvars; ++k) {
      if (!term[1][k].is_number_integer() || term[1][k].get<int>() < 0)
        schema_fail(std::string("field '") + field + "': exponents must be non-negative integers");
      exps[k] = term[1][k].get<int>();
    }
    p.add_term(number_at(term[0], field), std::move(exps));
  }
  return p;
}

json polymat_to_json(const PolyMatrix& m) {
  json out = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const Polynomial& p : row) r.push_back(poly_to_json(p));
    out.push_back(std::move(r));
  }
  return out;
}

PolyMatrix polymat_from_json(const json& j, int rows, int cols, int nvars, const char* field) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    schema_fail(std::string("field '") + field + "' must have " + std::to_string(rows) + " rows");
  PolyMatrix m(rows);
  for (int i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      schema_fail(std::string("field '") + field + "' rows must have " + std::to_string(cols) +
                  " entries");
    m[i].reserve(cols);
    for (int k = 0; k < cols; ++k) m[i].push_back(poly_from_json(row[k], nvars, field));
  }
  return m;
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* name : allowed)
      if (it.key() == name) known = true;
    if (!known) schema_fail(std::string("unknown field '") + it.key() + "' in " + where);
  }
}

constexpr const char* kSchemaTag = "gff-point-model/1";

GffPoint point_from_tensors(int n, int s, const Mat& g, const Mat& phi, const Mat& xi,
                            const Mat& eta, std::vector<int> eps) {
  try {
    return GffPoint(n, s, PseudoMetric(g), phi, xi, eta, std::move(eps));
  } catch (const std::invalid_argument& e) {
    throw StructureError(std::string("model tensors rejected: ") + e.what());
  }
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::algebraic: return "algebraic";
    case ModelKind::lie: return "lie";
    case ModelKind::chart: return "chart";
  }
  return "algebraic";
}

ModelKind model_kind_from_string(const std::string& text) {
  if (text == "algebraic") return ModelKind::algebraic;
  if (text == "lie") return ModelKind::lie;
  if (text == "chart") return ModelKind::chart;
  schema_fail("unknown kind '" + text + "'");
}

LiePointModel Model::lie_model() const {
  if (kind != ModelKind::lie || !brackets) throw std::logic_error("model has no bracket table");
  return LiePointModel{point, *brackets};
}

const ChartPointModel& Model::chart_model() const {
  if (kind != ModelKind::chart || !chart) throw std::logic_error("model has no chart data");
  return *chart;
}

Model build_u2_model() {
  const int d = 4;
  Mat g = Mat::Identity(d, d);
  g(0, 0) = -1.0;

  Mat phi = Mat::Zero(d, d);
  phi(3, 2) = 1.0;   // phi X = Y
  phi(2, 3) = -1.0;  // phi Y = -X

  Mat xi = Mat::Zero(d, 2);
  xi(0, 0) = 1.0;
  xi(1, 1) = 1.0;

  Mat eta = Mat::Zero(2, d);
  eta(0, 0) = 1.0;
  eta(1, 1) = 1.0;

  LieBrackets b(d);
  Vec v = Vec::Zero(d);
  v[0] = 2.0;
  v[1] = 2.0;
  b.set(2, 3, v);  // [X, Y] = 2 xi_1 + 2 xi_2
  v.setZero();
  v[3] = -1.0;
  b.set(2, 0, v);  // [X, xi_1] = -Y
  b.set(2, 1, v);  // [X, xi_2] = -Y
  v.setZero();
  v[2] = 1.0;
  b.set(3, 0, v);  // [Y, xi_1] = X
  b.set(3, 1, v);  // [Y, xi_2] = X

  return Model{"u2",
               ModelKind::lie,
               "Left-invariant Lorentz structure on the four dimensional unitary group; "
               "two characteristic directions, constant phi-sectional curvature 4.",
               point_from_tensors(1, 2, g, phi, xi, eta, {-1, 1}),
               4.0,
               std::move(b),
               std::nullopt};
}

Model build_r4_model(const Vec& point) {
  if (point.size() != 4) throw std::invalid_argument("build_r4_model: point must have 4 coordinates");
  const int d = 4;
  const double r2 = std::sqrt(2.0);
  auto c = [&](double v) { return Polynomial::constant(d, v); };
  const Polynomial zero(d);
  const Polynomial y = Polynomial::variable(d, 1);

  PolyMatrix metric = {{c(0.5), zero, y * -1.0, y},
                       {zero, c(0.5), zero, zero},
                       {y * -1.0, zero, c(-1.0), zero},
                       {y, zero, zero, c(1.0)}};
  PolyMatrix phi = {{zero, c(-1.0), zero, zero},
                    {c(1.0), zero, zero, zero},
                    {zero, y, zero, zero},
                    {zero, y, zero, zero}};
  PolyMatrix xi = {{zero, zero, c(1.0), zero}, {zero, zero, zero, c(1.0)}};
  PolyMatrix eta = {{y, zero, c(1.0), zero}, {y, zero, zero, c(1.0)}};
  PolyMatrix frame = {{c(r2), zero, zero, zero},
                      {zero, c(r2), zero, zero},
                      {y * -r2, zero, c(1.0), zero},
                      {y * -r2, zero, zero, c(1.0)}};

  ChartPointModel chart{1, 2, std::move(metric), std::move(phi), std::move(xi),
                        std::move(eta), std::move(frame), {-1, 1}, point};
  GffPoint at = chart.structure_point();
  return Model{"r4",
               ModelKind::chart,
               "Polynomial chart model on R^4; every null Jacobi operator over the "
               "phi-celestial sphere has the single eigenvalue 1, phi-sectional curvature 0.",
               std::move(at),
               0.0,
               std::nullopt,
               std::move(chart)};
}

Model build_space_form_model(int n, int s, double c) {
  if (n < 1 || s < 1) throw std::invalid_argument("build_space_form_model: need n >= 1, s >= 1");
  const int d = 2 * n + s;
  Mat g = Mat::Identity(d, d);
  g(0, 0) = -1.0;

  Mat phi = Mat::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    const int a = s + 2 * i;
    phi(a + 1, a) = 1.0;
    phi(a, a + 1) = -1.0;
  }

  Mat xi = Mat::Zero(d, s);
  Mat eta = Mat::Zero(s, d);
  std::vector<int> eps(s, 1);
  eps[0] = -1;
  for (int a = 0; a < s; ++a) {
    xi(a, a) = 1.0;
    eta(a, a) = 1.0;
  }

  std::ostringstream name;
  name << "space-form-n" << n << "-s" << s << "-c" << c;
  return Model{name.str(),
               ModelKind::algebraic,
               "Canonical point model of constant phi-sectional curvature; characteristic "
               "directions first, then the phi-invariant planes.",
               point_from_tensors(n, s, g, phi, xi, eta, std::move(eps)),
               c,
               std::nullopt,
               std::nullopt};
}

Model parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    schema_fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) schema_fail("top level must be an object");
  reject_unknown(j,
                 {"schema", "name", "kind", "provenance", "n", "s", "eps", "c", "metric", "phi",
                  "xi", "eta", "brackets", "chart"},
                 "model");

  if (get_string(j, "schema") != kSchemaTag)
    schema_fail(std::string("expected schema '") + kSchemaTag + "'");
  const std::string name = get_string(j, "name");
  if (name.empty()) schema_fail("field 'name' must be non-empty");
  const ModelKind kind = model_kind_from_string(get_string(j, "kind"));
  const std::string provenance = get_string(j, "provenance");
  const int n = get_int(j, "n");
  const int s = get_int(j, "s");
  if (n < 1 || s < 1) schema_fail("fields 'n' and 's' must be at least 1");
  const int d = 2 * n + s;

  const json& jeps = require(j, "eps");
  if (!jeps.is_array() || static_cast<int>(jeps.size()) != s)
    schema_fail("field 'eps' must list one sign per characteristic direction");
  std::vector<int> eps(s);
  for (int a = 0; a < s; ++a) {
    if (!jeps[a].is_number_integer() || std::abs(jeps[a].get<int>()) != 1)
      schema_fail("field 'eps' entries must be +1 or -1");
    eps[a] = jeps[a].get<int>();
  }

  std::optional<double> c;
  if (j.contains("c")) c = number_at(j["c"], "c");

  std::optional<LieBrackets> brackets;
  std::optional<ChartPointModel> chart;

  if (kind == ModelKind::chart) {
    if (j.contains("metric") || j.contains("phi") || j.contains("xi") || j.contains("eta"))
      schema_fail("chart models carry their tensors inside 'chart'");
    const json& cj = require(j, "chart");
    if (!cj.is_object()) schema_fail("field 'chart' must be an object");
    reject_unknown(cj, {"point", "metric", "phi", "xi", "eta", "frame"}, "chart");
    ChartPointModel cm{n,
                       s,
                       polymat_from_json(require(cj, "metric"), d, d, d, "chart.metric"),
                       polymat_from_json(require(cj, "phi"), d, d, d, "chart.phi"),
                       polymat_from_json(require(cj, "xi"), s, d, d, "chart.xi"),
                       polymat_from_json(require(cj, "eta"), s, d, d, "chart.eta"),
                       polymat_from_json(require(cj, "frame"), d, d, d, "chart.frame"),
                       eps,
                       vec_from_json(require(cj, "point"), d, "chart.point")};
    try {
      GffPoint at = cm.structure_point();
      chart = std::move(cm);
      return Model{name, kind, provenance, std::move(at), c, std::move(brackets), std::move(chart)};
    } catch (const std::invalid_argument& e) {
      throw StructureError(std::string("chart tensors rejected at the point: ") + e.what());
    }
  }

  if (j.contains("chart")) schema_fail("only chart models may carry 'chart'");
  const Mat g = mat_from_json(require(j, "metric"), d, d, "metric");
  const Mat phi = mat_from_json(require(j, "phi"), d, d, "phi");
  const Mat xi = mat_from_json(require(j, "xi"), s, d, "xi").transpose();
  const Mat eta = mat_from_json(require(j, "eta"), s, d, "eta");

  if (kind == ModelKind::lie) {
    const json& jb = require(j, "brackets");
    if (!jb.is_array()) schema_fail("field 'brackets' must be an array");
    LieBrackets b(d);
    for (const json& entry : jb) {
      if (!entry.is_object()) schema_fail("bracket entries must be objects");
      reject_unknown(entry, {"i", "j", "v"}, "brackets");
      const int bi = get_int(entry, "i");
      const int bj = get_int(entry, "j");
      if (bi < 0 || bi >= d || bj < 0 || bj >= d || bi == bj)
        schema_fail("bracket indices must be distinct frame indices");
      b.set(bi, bj, vec_from_json(require(entry, "v"), d, "brackets.v"));
    }
    brackets = std::move(b);
  } else if (j.contains("brackets")) {
    schema_fail("only lie models may carry 'brackets'");
  }

  return Model{name,
               kind,
               provenance,
               point_from_tensors(n, s, g, phi, xi, eta, std::move(eps)),
               c,
               std::move(brackets),
               std::move(chart)};
}

std::string serialize_model(const Model& m) {
  json j;
  j["schema"] = kSchemaTag;
  j["name"] = m.name;
  j["kind"] = to_string(m.kind);
  j["provenance"] = m.provenance;
  j["n"] = m.point.n();
  j["s"] = m.point.s();
  j["eps"] = m.point.eps();
  if (m.c) j["c"] = *m.c;

  if (m.kind == ModelKind::chart) {
    const ChartPointModel& cm = m.chart_model();
    json cj;
    cj["point"] = vec_to_json(cm.point);
    cj["metric"] = polymat_to_json(cm.metric);
    cj["phi"] = polymat_to_json(cm.phi);
    cj["xi"] = polymat_to_json(cm.xi);
    cj["eta"] = polymat_to_json(cm.eta);
    cj["frame"] = polymat_to_json(cm.frame);
    j["chart"] = std::move(cj);
  } else {
    j["metric"] = mat_to_json(m.point.g().matrix());
    j["phi"] = mat_to_json(m.point.phi());
    j["xi"] = mat_to_json(m.point.xi_matrix().transpose());
    j["eta"] = mat_to_json(m.point.eta_matrix());
    if (m.kind == ModelKind::lie) {
      const LieBrackets& b = *m.brackets;
      json jb = json::array();
      for (int i = 0; i < b.dim(); ++i) {
        for (int k = i + 1; k < b.dim(); ++k) {
          const Vec v = b.bracket(i, k);
          if (v.cwiseAbs().maxCoeff() == 0.0) continue;
          json entry;
          entry["i"] = i;
          entry["j"] = k;
          entry["v"] = vec_to_json(v);
          jb.push_back(std::move(entry));
        }
      }
      j["brackets"] = std::move(jb);
    }
  }
  return j.dump(2) + "\n";
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on model file: " + path);
  return parse_model(buf.str());
}

void save_model(const Model& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file: " + path);
  out << serialize_model(m);
  out.flush();
  if (!out) throw IoError("write failure on model file: " + path);
}

StructureReport validate_model(const Model& m, double tol) {
  StructureReport r = m.point.validate(tol);
  if (m.kind == ModelKind::lie && m.brackets) {
    const double anti = m.brackets->antisymmetry_violation();
    const double jac = m.brackets->jacobi_violation();
    r.checks.push_back({"bracket_antisymmetry", anti, anti < tol});
    r.checks.push_back({"bracket_jacobi", jac, jac < std::max(tol, 1e-10)});
  }
  if (m.kind == ModelKind::chart && m.chart) {
    Eigen::JacobiSVD<Mat> svd(m.chart->frame_matrix());
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    const double violation = (smax <= 0.0 || smin < 1e-10 * smax) ? 1.0 : 0.0;
    r.checks.push_back({"chart_frame_invertible", violation, violation == 0.0});
  }
  r.passed = true;
  for (const AxiomCheck& c : r.checks) r.passed = r.passed && c.passed;
  return r;
}

const GffPoint& checked_point(const Model& m, double tol) {
  const StructureReport r = validate_model(m, tol);
  if (!r.passed) throw StructureError("structure check failed: " + r.first_failure());
  return m.point;
}

}  // namespace gff
