#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace gff {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Deterministic random source. The normal variates are produced by an
/// explicit Box-Muller transform on mt19937_64 words, so a fixed seed yields
/// the same stream on every platform and standard library.
class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal variate.
  double normal();
  /// Vector of independent standard normal variates.
  Vec normal_vec(int d);

private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Eigenvalue multiset, clustered so that numerically coincident values are
/// reported once with a multiplicity. Cluster means are strictly increasing.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<int> multiplicities;
  double cluster_gap = 0.0;  // threshold used to merge raw eigenvalues

  int total() const;
};

/// Groups a raw sorted-or-unsorted eigenvalue list into a Spectrum. Two
/// eigenvalues land in the same cluster when their gap is below
/// max(tol, 1e-7 * spectral_radius).
Spectrum cluster_spectrum(std::vector<double> raw, double tol);

struct SymmetricEigen {
  std::vector<double> eigenvalues;  // ascending
  Mat eigenvectors;                 // orthonormal columns, same order
  Spectrum spectrum;                // clustered view of `eigenvalues`
};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi plane rotations.
/// Deterministic: no pivoting heuristics, fixed sweep order. Throws
/// std::invalid_argument when the input is not symmetric within
/// 1e-9 relative to its largest entry.
SymmetricEigen symmetric_eigen(const Mat& m, double tol = 1e-10);

/// Nondegenerate symmetric bilinear form together with its signature and a
/// pseudo-orthonormal frame (negative directions first).
class PseudoMetric {
public:
  explicit PseudoMetric(const Mat& g);

  int dim() const { return static_cast<int>(g_.rows()); }
  const Mat& matrix() const { return g_; }
  const Mat& inverse() const { return inv_; }

  double operator()(const Vec& x, const Vec& y) const;

  int negatives() const { return negatives_; }
  int positives() const { return dim() - negatives_; }
  /// Lorentz means signature (1, dim-1).
  bool lorentz() const { return negatives_ == 1; }

  /// Columns e_k with g(e_j, e_k) = ±δ_jk; the sign of column k is
  /// frame_signs()[k]. Timelike directions come first.
  const Mat& frame() const { return frame_; }
  const std::vector<int>& frame_signs() const { return frame_signs_; }

private:
  Mat g_;
  Mat inv_;
  Mat frame_;
  std::vector<int> frame_signs_;
  int negatives_ = 0;
};

/// Gram-Schmidt in the metric g over the given spanning columns. Assumes the
/// spanned subspace is positive definite: a residual with significantly
/// negative square norm throws std::domain_error, while residuals with
/// |g(w,w)| below drop_tol are discarded as linearly dependent. Returns the
/// orthonormal basis as columns; the column count is the detected rank.
Mat gram_schmidt(const PseudoMetric& g, const Mat& span, double drop_tol = 1e-10);

/// Haar-ish random orthogonal matrix from the QR factorization of a Gaussian
/// matrix, with the sign convention that makes the factorization unique.
Mat random_orthogonal(int d, SeededRng& rng);

}  // namespace gff
