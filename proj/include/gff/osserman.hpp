#pragma once

#include "gff/curvature.hpp"
#include "gff/engines.hpp"
#include "gff/structure.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gff {

/// Null direction u = base + x in the congruence of the unit timelike base:
/// g(u, u) = 0 and g(u, base) = -1, x a unit spacelike direction orthogonal
/// to base.
struct NullDirection {
  Vec u;
  Vec x;
  Vec base;
};

/// Builds base + x from the timelike characteristic direction of S.
/// Validates |g(x,x) - 1| and |g(x, xi_0)| within 1e-9.
NullDirection null_direction(const GffPoint& S, const Vec& x);

/// Unit spacelike probe directions inside im(phi): every cached basis
/// vector, every normalized pairwise sum, then `count` seeded sphere points.
std::vector<Vec> sample_phi_celestial_sphere(const GffPoint& S, int count,
                                             std::uint64_t seed);

/// Probe directions over the whole celestial sphere of xi_0: the im(phi)
/// basis and the spacelike xi_a, their normalized pairwise sums, then seeded
/// points on the full unit sphere of the xi_0 orthogonal complement.
std::vector<Vec> sample_full_celestial_sphere(const GffPoint& S, int count,
                                              std::uint64_t seed);

/// Spacelike screen W = u-perp intersected with base-perp, as orthonormal
/// columns. W realizes the quotient u-perp / span{u} isometrically, so
/// operators on the quotient are computed here.
struct GeometricRealization {
  NullDirection dir;
  Mat basis;  // dim x (dim - 2)
};

GeometricRealization geometric_realization(const GffPoint& S, const NullDirection& u);

/// Jacobi operator of the null direction on its geometric realization:
/// matrix(i, j) = R(w_i, u, w_j, u). Symmetric within 1e-9 for curvature-like
/// input (pair symmetry).
struct JacobiOperator {
  Mat matrix;
  GeometricRealization realization;

  SymmetricEigen eigen(double tol = 1e-10) const { return symmetric_eigen(matrix, tol); }
};

JacobiOperator jacobi_operator(const CurvatureTensor& r, const GffPoint& S,
                               const NullDirection& u);

struct OssermanConfig {
  int count = 64;
  std::uint64_t seed = 42;
  double tol = 1e-7;
};

struct OssermanVerdict {
  bool passed = false;
  Spectrum reference;          // spectrum of the first probed direction
  int samples = 0;
  double worst_deviation = 0.0;
  Vec witness_x;               // spacelike part of the worst direction
  std::vector<double> witness_eigenvalues;
};

/// Compares Jacobi spectra across the probe directions xs (each a unit
/// spacelike vector orthogonal to z); passes when all sorted eigenvalue lists
/// agree with the first one within tol.
OssermanVerdict check_null_congruence(const CurvatureTensor& r, const PseudoMetric& g,
                                      const Vec& z, const std::vector<Vec>& xs,
                                      double tol);

/// Null Osserman condition restricted to the phi-celestial sphere of xi_0.
OssermanVerdict check_phi_null_osserman(const CurvatureTensor& r, const GffPoint& S,
                                        const OssermanConfig& cfg = {});

/// Null Osserman condition over the full celestial sphere of xi_0.
OssermanVerdict check_null_osserman(const CurvatureTensor& r, const GffPoint& S,
                                    const OssermanConfig& cfg = {});

/// Recovers the almost complex structure of a two-eigenvalue Jacobi model:
/// for each probe x on the phi-celestial sphere, the restricted Jacobi
/// operator R(., x)x on x-perp in im(phi) must have a simple eigenvalue near
/// c1 - 1; the recovered J maps x to that eigendirection, with signs aligned
/// through 45-degree rotations against the first basis vector. The result is
/// determined up to one global sign. Throws std::domain_error when an
/// eigenvalue near c1 - 1 is missing or not simple.
AlmostComplexJ recover_J(const CurvatureTensor& r, const GffPoint& S, double c1,
                         double tol = 1e-7);

/// Residual of the coupling c1 - 4 c2 + 3 that a phi-compatible J forces
/// between the two Jacobi eigenvalues.
double remark58_residual(double c1, double c2);

struct SingleEigenvalueReport {
  bool is_single = false;
  double lambda = 0.0;           // the eigenvalue when is_single
  double phi_sectional_c = 0.0;  // sampled constant phi-sectional curvature
  Spectrum restricted;           // spectrum on im(phi) screen of the first probe
};

/// Detects whether the Jacobi operators restricted to the im(phi) part of
/// the screen carry a single eigenvalue across the phi-celestial sphere, and
/// samples the phi-sectional curvature for the equivalence with a flat
/// phi-sectional model (lambda = 1 exactly when that curvature is 0).
SingleEigenvalueReport classify_single_eigenvalue(const CurvatureTensor& r,
                                                  const GffPoint& S,
                                                  const OssermanConfig& cfg = {});

}  // namespace gff
