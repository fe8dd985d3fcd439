#pragma once

#include "gff/linalg.hpp"

#include <cstdint>
#include <vector>

namespace gff {

/// Covariant rank-4 tensor over a fixed frame e_0..e_{d-1}. The entry
/// convention is at(i,j,k,l) = R(e_i, e_j, e_k, e_l) with
/// R(X, Y, Z, W) = g(R(Z, W)Y, X), so the curvature operator sits in the
/// last two slots and pairs against the first two.
class CurvatureTensor {
public:
  explicit CurvatureTensor(int dim);

  int dim() const { return dim_; }

  double& at(int i, int j, int k, int l) { return a_[idx(i, j, k, l)]; }
  double at(int i, int j, int k, int l) const { return a_[idx(i, j, k, l)]; }

  /// Multilinear evaluation on arbitrary vectors in frame components.
  double value(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const;

  /// Contracts slots 2 and 4 with u: result(i,k) = R(e_i, u, e_k, u).
  /// This is the bilinear form whose restriction to a realization basis is
  /// the Jacobi operator matrix.
  Mat jacobi_form(const Vec& u) const;

  double max_abs() const;

private:
  int idx(int i, int j, int k, int l) const {
    return ((i * dim_ + j) * dim_ + k) * dim_ + l;
  }

  int dim_;
  std::vector<double> a_;
};

/// Pulls a covariant tensor back along a frame change: columns of `basis`
/// are the new frame vectors in old-frame components, and
/// out(p,q,r,t) = R(b_p, b_q, b_r, b_t).
CurvatureTensor change_frame(const CurvatureTensor& r, const Mat& basis);

/// Max absolute violation of each curvature-like identity.
struct CurvatureLikeReport {
  double antisym_12 = 0.0;     // R(x,y,z,w) + R(y,x,z,w)
  double antisym_34 = 0.0;     // R(x,y,z,w) + R(x,y,w,z)
  double pair_symmetry = 0.0;  // R(x,y,z,w) - R(z,w,x,y)
  double bianchi = 0.0;        // R(x,y,z,w) + R(x,z,w,y) + R(x,w,y,z)

  double worst() const;
  bool passed(double tol = 1e-9) const { return worst() < tol; }
};

CurvatureLikeReport validate_curvature_like(const CurvatureTensor& r);

/// Constant-curvature tensor: R(x,y,z,w) = k (g(x,z)g(y,w) - g(y,z)g(x,w)).
CurvatureTensor constant_k_form(double k, const PseudoMetric& g);

/// Plane spanned by two vectors, with the area form
/// delta = g(x,x) g(y,y) - g(x,y)^2 deciding degeneracy.
struct PlaneSection {
  Vec x, y;

  double delta(const PseudoMetric& g) const;
};

/// Sectional curvature R(x,y,x,y) / delta. Throws std::domain_error on a
/// degenerate plane (|delta| <= 1e-9).
double sectional_curvature(const CurvatureTensor& r, const PseudoMetric& g,
                           const PlaneSection& plane);

/// Deterministic family of degenerate planes span{u, y} in a Lorentz space:
/// u = z + x with z the unit timelike frame direction and x a unit spacelike
/// probe (every spacelike frame vector, every normalized pairwise sum, then
/// `count` seeded points on the spacelike sphere); y runs over an orthonormal
/// basis of u-perp modulo u. Requires a Lorentz metric.
std::vector<PlaneSection> degenerate_planes(const PseudoMetric& g, int count,
                                            std::uint64_t seed);

/// Unit spacelike probe directions used by degenerate_planes: the frame
/// vectors, their normalized pairwise sums, and seeded sphere points, all
/// inside the positive definite span of `axes` (columns, g-orthonormal).
std::vector<Vec> sphere_probes(const PseudoMetric& g, const Mat& axes, int count,
                               std::uint64_t seed);

/// Applies the curvature operator hidden in a covariant tensor:
/// returns the vector R(x, y)z, i.e. the unique w with
/// g(w, e_i) = R(e_i, z, x, y) for every frame vector e_i.
Vec curvature_operator(const CurvatureTensor& r, const PseudoMetric& g,
                       const Vec& x, const Vec& y, const Vec& z);

struct Lemma21Result {
  bool is_constant_form = false;
  double k = 0.0;               // fitted constant when is_constant_form
  double residual = 0.0;        // max |R - constant_k_form(k)| entrywise
  double worst_violation = 0.0; // max |R(u,y,y,u)| over probed degenerate planes
  PlaneSection witness;         // degenerate plane realizing worst_violation
};

/// Decides whether a curvature-like tensor on a Lorentz space has the
/// constant-curvature form by probing degenerate planes: it does exactly when
/// R(u,y,y,u) vanishes on all of them. On success the constant k is fitted
/// and the entrywise residual reported; on failure the worst witness plane is
/// returned. Throws std::invalid_argument when r is not curvature-like.
Lemma21Result lemma21_check(const CurvatureTensor& r, const PseudoMetric& g,
                            int count = 64, std::uint64_t seed = 42,
                            double tol = 1e-9);

}  // namespace gff
