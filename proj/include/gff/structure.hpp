#pragma once

#include "gff/curvature.hpp"
#include "gff/linalg.hpp"

#include <string>
#include <vector>

namespace gff {

struct AxiomCheck {
  std::string name;
  double violation = 0.0;
  bool passed = false;
};

struct StructureReport {
  std::vector<AxiomCheck> checks;
  bool passed = false;
  double tol = 0.0;

  const AxiomCheck* find(const std::string& name) const;
  std::string first_failure() const;  // empty when passed
};

/// Pointwise Lorentz globally framed f-structure (phi, xi_a, eta^a, g, eps_a)
/// on a 2n + s dimensional tangent space. Frame components are arbitrary;
/// xi(0) is the timelike characteristic vector (eps 0 = -1, the rest +1).
///
/// Axioms, checked by validate():
///   phi^2 = -I + sum_a eta^a (x) xi_a
///   eta^a(xi_b) = delta_ab
///   g(phi X, phi Y) = g(X, Y) - sum_a eps_a eta^a(X) eta^a(Y)
///   eta^a(X) = eps_a g(X, xi_a)
/// plus: g Lorentz, g(xi_0, xi_0) = -1, rank(phi) = 2n with g positive
/// definite on im(phi) and im(phi) orthogonal to every xi_a.
class GffPoint {
public:
  GffPoint(int n, int s, PseudoMetric g, Mat phi, Mat xi, Mat eta,
           std::vector<int> eps);

  int n() const { return n_; }
  int s() const { return s_; }
  int dim() const { return 2 * n_ + s_; }

  const PseudoMetric& g() const { return g_; }
  const Mat& phi() const { return phi_; }
  /// Characteristic vector field xi_a as a frame-component column.
  Vec xi(int a) const { return xi_.col(a); }
  const Mat& xi_matrix() const { return xi_; }
  /// One-form eta^a as a vector of coefficients; eta^a(v) = eta(a) . v.
  Vec eta(int a) const { return eta_.row(a).transpose(); }
  const Mat& eta_matrix() const { return eta_; }
  int eps(int a) const { return eps_[a]; }
  const std::vector<int>& eps() const { return eps_; }
  /// Sum of the characteristic signs (s - 2 in the Lorentz case).
  int eps_sum() const;
  /// eta~(v) = sum_a eps_a eta^a(v).
  double eta_tilde(const Vec& v) const;
  /// xi~ = sum_a xi_a.
  Vec xi_tilde() const;

  StructureReport validate(double tol = 1e-10) const;

  /// g-orthonormal basis of im(phi) as columns (cached at first use; requires
  /// a valid structure). For the probe sets the basis order is deterministic:
  /// Gram-Schmidt over the columns of phi.
  const Mat& im_phi_basis() const;

private:
  int n_, s_;
  PseudoMetric g_;
  Mat phi_;
  Mat xi_;   // dim x s, columns xi_a
  Mat eta_;  // s x dim, rows eta^a
  std::vector<int> eps_;
  mutable Mat im_phi_basis_;
  mutable bool im_phi_ready_ = false;
};

/// Fundamental 2-form Phi(x, y) = g(x, phi y).
double sasaki_form(const GffPoint& S, const Vec& x, const Vec& y);

/// Matrix of the fundamental 2-form on the frame: (G phi)_ij = Phi(e_i, e_j).
Mat sasaki_matrix(const GffPoint& S);

/// g-orthogonal projection of v onto im(phi): v - sum_a eta^a(v) xi_a.
Vec project_im_phi(const GffPoint& S, const Vec& v);

/// P(x, y; z, w) = Phi(x,z) g(y,w) - Phi(x,w) g(y,z)
///               - Phi(y,z) g(x,w) + Phi(y,w) g(x,z).
double p_tensor(const GffPoint& S, const Vec& x, const Vec& y, const Vec& z,
                const Vec& w);

/// Sectional curvature of the plane {x, phi x} for non-lightlike x in
/// im(phi). Throws std::domain_error when x is outside im(phi) (beyond 1e-9)
/// or lightlike.
double phi_sectional_curvature(const CurvatureTensor& r, const GffPoint& S,
                               const Vec& x);

}  // namespace gff
