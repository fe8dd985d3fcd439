#pragma once

#include "gff/engines.hpp"
#include "gff/structure.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace gff {

/// A model file failed to parse: missing or ill-typed fields, inconsistent
/// dimensions, unknown kind or schema tag.
class SchemaError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A model parsed cleanly but its tensors do not form a valid structure
/// (degenerate metric, failed axiom).
class StructureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A model file could not be read or written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// How the curvature of a model is natively produced:
///   algebraic - explicit point tensors plus a declared curvature constant
///   lie       - left-invariant frame with a bracket table
///   chart     - polynomial tensors in a coordinate chart around the point
enum class ModelKind { algebraic, lie, chart };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& text);  // throws SchemaError

/// A cataloged example: a pointwise structure plus whatever native data its
/// kind carries. `point` is always present and expressed in the structure
/// frame; `c` is the declared constant phi-sectional curvature when the model
/// has one.
struct Model {
  std::string name;
  ModelKind kind = ModelKind::algebraic;
  std::string provenance;
  GffPoint point;
  std::optional<double> c;
  std::optional<LieBrackets> brackets;   // kind == lie
  std::optional<ChartPointModel> chart;  // kind == chart

  /// Bundles point and brackets; throws std::logic_error unless kind == lie.
  LiePointModel lie_model() const;
  /// Chart data; throws std::logic_error unless kind == chart.
  const ChartPointModel& chart_model() const;
};

/// Left-invariant Lorentz structure on a four dimensional unitary group with
/// two characteristic directions; constant phi-sectional curvature 4.
Model build_u2_model();

/// Polynomial chart model on R^4 whose null Jacobi operators have the single
/// eigenvalue 1 along the phi-celestial sphere; constant phi-sectional
/// curvature 0. `point` is the chart point (x, y, z1, z2).
Model build_r4_model(const Vec& point);

/// Canonical algebraic point model of constant phi-sectional curvature c in
/// dimension 2n + s: characteristic directions first, then n phi-invariant
/// planes.
Model build_space_form_model(int n, int s, double c);

/// Parses the JSON text of a model file. Schema problems throw SchemaError;
/// tensors that cannot form a structure (e.g. a degenerate metric) throw
/// StructureError. Axioms are NOT checked here; see validate_model.
Model parse_model(const std::string& text);

/// Canonical JSON form: fixed field order, two-space indent, trailing
/// newline. parse_model(serialize_model(m)) round-trips byte for byte.
std::string serialize_model(const Model& m);

Model load_model(const std::string& path);               // IoError on read failure
void save_model(const Model& m, const std::string& path);  // IoError on write failure

/// Structure axioms at the point plus kind-specific checks (lie: bracket
/// antisymmetry and the Jacobi identity; chart: frame invertibility).
StructureReport validate_model(const Model& m, double tol = 1e-10);

/// The model's point after validate_model, throwing StructureError naming
/// the first failed check.
const GffPoint& checked_point(const Model& m, double tol = 1e-10);

}  // namespace gff
