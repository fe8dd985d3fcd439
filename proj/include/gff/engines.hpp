#pragma once

#include "gff/curvature.hpp"
#include "gff/structure.hpp"

#include <vector>

namespace gff {

/// Curvature tensor of a space of constant phi-sectional curvature c:
///
///   R(X,Y,Z,W) = -(c+3e)/4 {g(pY,pZ) g(pX,pW) - g(pX,pZ) g(pY,pW)}
///                -(c-e)/4 {F(W,X)F(Z,Y) - F(Z,X)F(W,Y) + 2 F(X,Y)F(W,Z)}
///                -{n(W)n(X) g(pZ,pY) - n(W)n(Y) g(pZ,pX)
///                  + n(Y)n(Z) g(pW,pX) - n(Z)n(X) g(pW,pY)}
///
/// with p = phi, F the fundamental 2-form, n = eta~ and e = sum of eps.
CurvatureTensor space_form_curvature(const GffPoint& S, double c);

/// S*(x,y)v = n(y)n(v) x - n(x)n(v) y + g(y,v) n(x) xi~ - g(x,v) n(y) xi~,
/// with n = eta~ and xi~ the sum of the characteristic vectors.
Vec s_star(const GffPoint& S, const Vec& x, const Vec& y, const Vec& v);

/// S_*(x,y)v = -g(phi y, phi v) phi^2 x + g(phi x, phi v) phi^2 y.
Vec s_lower_star(const GffPoint& S, const Vec& x, const Vec& y, const Vec& v);

/// R0(x,y)v = g(Py, Pv) Px - g(Px, Pv) Py with P the projection onto im(phi).
Vec r_zero(const GffPoint& S, const Vec& x, const Vec& y, const Vec& v);

/// Orthogonal anti-involution of im(phi), stored as a 2n x 2n matrix on the
/// cached im(phi) basis. Construction validates J^2 = -I and orthogonality
/// (both within 1e-9).
class AlmostComplexJ {
public:
  AlmostComplexJ(const GffPoint& S, Mat j);

  const Mat& matrix() const { return j_; }
  /// J composed with the projection onto im(phi), in frame components.
  Vec apply(const GffPoint& S, const Vec& v) const;
  /// The same operator as a dim x dim frame matrix.
  Mat frame_operator(const GffPoint& S) const;

private:
  Mat j_;
};

/// RJ(x,y)v = g(J Py, Pv) J Px - g(J Px, Pv) J Py + 2 g(Px, J Py) J Pv.
Vec r_j(const GffPoint& S, const AlmostComplexJ& J, const Vec& x, const Vec& y,
        const Vec& v);

/// Curvature of a two-eigenvalue Jacobi model on an s = 2 structure:
///
///   R(x,y)v = S*(x,y)v - S_*(x,y)v + c2 R0(x,y)v + (c1-c2)/3 RJ(x,y)v
///
/// lowered with the standard convention. Throws std::invalid_argument when
/// s != 2.
CurvatureTensor reconstructed_curvature(const GffPoint& S, const AlmostComplexJ& J,
                                        double c1, double c2);

/// Lie algebra data at a point: a left-invariant frame with constant metric
/// coefficients and the bracket table bracket(i, j) = [e_i, e_j] in frame
/// components.
class LieBrackets {
public:
  explicit LieBrackets(int dim);

  int dim() const { return dim_; }
  Vec bracket(int i, int j) const;
  /// Sets [e_i, e_j] = v and [e_j, e_i] = -v.
  void set(int i, int j, const Vec& v);
  /// Bracket of arbitrary constant-coefficient combinations.
  Vec apply(const Vec& x, const Vec& y) const;

  /// Max violations of antisymmetry and of the Jacobi identity.
  double antisymmetry_violation() const;
  double jacobi_violation() const;

private:
  int dim_;
  std::vector<double> c_;  // c_[(i*dim + j)*dim + k] = [e_i, e_j]^k
};

struct LiePointModel {
  GffPoint point;
  LieBrackets brackets;
};

/// Levi-Civita connection of a left-invariant metric, from the Koszul
/// formula (constant coefficients kill the derivative terms):
///   2 g(D_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y).
/// Returns nabla[i] whose column j is D_{e_i} e_j in frame components.
std::vector<Mat> lie_levi_civita(const LiePointModel& M);

/// Curvature R(X,Y)Z = D_X D_Y Z - D_Y D_X Z - D_[X,Y] Z of a left-invariant
/// metric, lowered to the frame. Validates the bracket table first.
CurvatureTensor lie_group_curvature(const LiePointModel& M);

/// Sparse multivariate polynomial with exact differentiation; the chart
/// engine relies on it so no finite differencing enters the curvature.
class Polynomial {
public:
  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int k);

  int nvars() const { return nvars_; }
  bool zero() const { return terms_.empty(); }
  void add_term(double coeff, std::vector<int> exps);

  double eval(const Vec& x) const;
  Polynomial derivative(int k) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(double c) const;

  struct Term {
    double coeff;
    std::vector<int> exps;
  };
  const std::vector<Term>& terms() const { return terms_; }

private:
  void normalize();

  int nvars_ = 0;
  std::vector<Term> terms_;
};

using PolyMatrix = std::vector<std::vector<Polynomial>>;

/// Coordinate-chart data around a point: polynomial metric and structure
/// tensors plus the frame (columns, polynomial in the coordinates) that
/// carries tensors into the structure frame.
struct ChartPointModel {
  int n = 0, s = 0;
  PolyMatrix metric;  // dim x dim
  PolyMatrix phi;     // dim x dim, column action
  PolyMatrix xi;      // s rows of dim entries (vector components)
  PolyMatrix eta;     // s rows of dim entries (covector components)
  PolyMatrix frame;   // dim x dim, columns = structure frame vectors
  std::vector<int> eps;
  Vec point;

  Mat eval_matrix(const PolyMatrix& p) const;
  /// Structure in the coordinate frame, evaluated at the point.
  GffPoint coordinate_point() const;
  /// Frame matrix evaluated at the point (columns = structure frame).
  Mat frame_matrix() const;
  /// Structure converted to the structure frame at the point.
  GffPoint structure_point() const;
};

/// Christoffel symbols at the point from exact polynomial derivatives;
/// gamma[k] has entry (i, j) = Gamma^i_{kj}.
std::vector<Mat> christoffel(const ChartPointModel& M);

/// Coordinate curvature R^i_jkl = d_k G^i_lj - d_l G^i_kj + G^i_km G^m_lj
/// - G^i_lm G^m_kj at the point, lowered and carried into the structure
/// frame.
CurvatureTensor coordinate_curvature(const ChartPointModel& M);

/// Max violations of the characteristic curvature identities satisfied by
/// every S-manifold, instantiated on the cached im(phi) basis and the xi_a:
///   R(X, xi_a, X, Y) = 0
///   R(xi_a, X, xi_b, Y) = eps_a eps_b g(X, Y)
///   R(xi_a, X, xi_b, xi_c) = 0
///   R(xi_a, xi_d, xi_b, xi_c) = 0
///   R(X, Y, phi Z, W) + R(X, Y, Z, phi W) = e P(X, Y; Z, W)
struct Identities2Report {
  double im_mixed = 0.0;
  double characteristic_pair = 0.0;
  double characteristic_triple = 0.0;
  double pure_characteristic = 0.0;
  double phi_shift = 0.0;

  double worst() const;
  bool passed(double tol = 1e-9) const { return worst() < tol; }
};

Identities2Report check_identities_2(const CurvatureTensor& r, const GffPoint& S);

}  // namespace gff
