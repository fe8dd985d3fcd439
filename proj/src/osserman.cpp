#include "gff/osserman.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gff {

namespace {

// Columns spanning the xi_0 orthogonal complement in probe order: the
// im(phi) basis first, then the spacelike characteristic vectors.
Mat screen_axes(const GffPoint& S) {
  const Mat& B = S.im_phi_basis();
  Mat axes(S.dim(), B.cols() + S.s() - 1);
  axes.leftCols(B.cols()) = B;
  for (int a = 1; a < S.s(); ++a) axes.col(B.cols() + a - 1) = S.xi(a);
  return axes;
}

// Orthonormal basis of {v : g(v, z) = 0, g(v, x) = 0} obtained by projecting
// the given axes along x (the axes are already orthogonal to z).
Mat realization_basis(const PseudoMetric& g, const Vec& x, const Mat& axes) {
  Mat span(axes.rows(), axes.cols());
  for (int k = 0; k < axes.cols(); ++k) {
    const Vec e = axes.col(k);
    span.col(k) = e - g(e, x) * x;
  }
  return gram_schmidt(g, span);
}

struct SpectrumSample {
  Vec x;
  std::vector<double> eigenvalues;  // ascending, full list
};

OssermanVerdict verdict_from_samples(const std::vector<SpectrumSample>& samples,
                                     double tol) {
  OssermanVerdict v;
  v.samples = static_cast<int>(samples.size());
  if (samples.empty()) return v;
  const std::vector<double>& ref = samples.front().eigenvalues;
  v.reference = cluster_spectrum(ref, tol);

  std::size_t worst = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double dev = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k)
      dev = std::max(dev, std::abs(samples[i].eigenvalues[k] - ref[k]));
    if (dev > v.worst_deviation) {
      v.worst_deviation = dev;
      worst = i;
    }
  }
  v.passed = v.worst_deviation < tol;
  v.witness_x = samples[worst].x;
  v.witness_eigenvalues = samples[worst].eigenvalues;
  return v;
}

}  // namespace

NullDirection null_direction(const GffPoint& S, const Vec& x) {
  const Vec z = S.xi(0);
  const PseudoMetric& g = S.g();
  if (std::abs(g(x, x) - 1.0) > 1e-9) {
    throw std::invalid_argument("null_direction: x is not unit spacelike");
  }
  if (std::abs(g(x, z)) > 1e-9) {
    throw std::invalid_argument("null_direction: x is not orthogonal to the base");
  }
  return NullDirection{z + x, x, z};
}

std::vector<Vec> sample_phi_celestial_sphere(const GffPoint& S, int count,
                                             std::uint64_t seed) {
  return sphere_probes(S.g(), S.im_phi_basis(), count, seed);
}

std::vector<Vec> sample_full_celestial_sphere(const GffPoint& S, int count,
                                              std::uint64_t seed) {
  return sphere_probes(S.g(), screen_axes(S), count, seed);
}

GeometricRealization geometric_realization(const GffPoint& S, const NullDirection& u) {
  Mat basis = realization_basis(S.g(), u.x, screen_axes(S));
  if (basis.cols() != S.dim() - 2) {
    throw std::domain_error("geometric_realization: screen has wrong dimension");
  }
  return GeometricRealization{u, std::move(basis)};
}

JacobiOperator jacobi_operator(const CurvatureTensor& r, const GffPoint& S,
                               const NullDirection& u) {
  GeometricRealization real = geometric_realization(S, u);
  const Mat form = r.jacobi_form(u.u);
  Mat m = real.basis.transpose() * form * real.basis;
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9) {
    throw std::invalid_argument("jacobi_operator: operator not self-adjoint, violation " +
                                std::to_string(asym));
  }
  return JacobiOperator{std::move(m), std::move(real)};
}

OssermanVerdict check_null_congruence(const CurvatureTensor& r, const PseudoMetric& g,
                                      const Vec& z, const std::vector<Vec>& xs,
                                      double tol) {
  // Generic screen: frame vectors projected along z and x.
  std::vector<SpectrumSample> samples;
  for (const Vec& x : xs) {
    const Vec u = z + x;
    Mat span(g.dim(), g.dim());
    for (int k = 0; k < g.dim(); ++k) {
      const Vec e = g.frame().col(k);
      span.col(k) = e + g(e, z) * z - g(e, x) * x;
    }
    const Mat basis = gram_schmidt(g, span);
    if (basis.cols() != g.dim() - 2) {
      throw std::domain_error("check_null_congruence: screen has wrong dimension");
    }
    const Mat m = basis.transpose() * r.jacobi_form(u) * basis;
    samples.push_back({x, symmetric_eigen(m).eigenvalues});
  }
  return verdict_from_samples(samples, tol);
}

namespace {

OssermanVerdict check_congruence_on(const CurvatureTensor& r, const GffPoint& S,
                                    const std::vector<Vec>& xs, double tol) {
  std::vector<SpectrumSample> samples;
  for (const Vec& x : xs) {
    const JacobiOperator op = jacobi_operator(r, S, null_direction(S, x));
    samples.push_back({x, op.eigen().eigenvalues});
  }
  return verdict_from_samples(samples, tol);
}

}  // namespace

OssermanVerdict check_phi_null_osserman(const CurvatureTensor& r, const GffPoint& S,
                                        const OssermanConfig& cfg) {
  return check_congruence_on(r, S, sample_phi_celestial_sphere(S, cfg.count, cfg.seed),
                             cfg.tol);
}

OssermanVerdict check_null_osserman(const CurvatureTensor& r, const GffPoint& S,
                                    const OssermanConfig& cfg) {
  return check_congruence_on(r, S, sample_full_celestial_sphere(S, cfg.count, cfg.seed),
                             cfg.tol);
}

namespace {

// Unit eigenvector of the restricted operator R(., x)x on x-perp in im(phi)
// for the simple eigenvalue near c1 - 1 (frame components).
Vec tangent_eigenvector(const CurvatureTensor& r, const GffPoint& S, const Vec& x,
                        double c1, double tol, const std::string& who) {
  const Mat basis = realization_basis(S.g(), x, S.im_phi_basis());
  const Mat m = basis.transpose() * r.jacobi_form(x) * basis;
  const SymmetricEigen eig = symmetric_eigen(m);

  const double target = c1 - 1.0;
  const double accept = std::max(tol, 1e-7);
  int hits = 0;
  int index = -1;
  for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
    if (std::abs(eig.eigenvalues[i] - target) < accept) {
      ++hits;
      index = static_cast<int>(i);
    }
  }
  if (hits == 0) {
    throw std::domain_error("recover_J: no eigenvalue near c1 - 1 at probe " + who);
  }
  if (hits > 1) {
    throw std::domain_error("recover_J: eigenvalue near c1 - 1 is not simple at probe " + who);
  }
  return basis * eig.eigenvectors.col(index);
}

}  // namespace

AlmostComplexJ recover_J(const CurvatureTensor& r, const GffPoint& S, double c1,
                         double tol) {
  const Mat& B = S.im_phi_basis();
  const int m = static_cast<int>(B.cols());
  const PseudoMetric& g = S.g();

  std::vector<Vec> jb(m);
  jb[0] = tangent_eigenvector(r, S, B.col(0), c1, tol, "b1");
  // Deterministic global sign: largest im(phi) coefficient positive.
  {
    const Vec coords = B.transpose() * g.matrix() * jb[0];
    int arg = 0;
    for (int i = 1; i < m; ++i)
      if (std::abs(coords[i]) > std::abs(coords[arg])) arg = i;
    if (coords[arg] < 0.0) jb[0] = -jb[0];
  }

  for (int k = 1; k < m; ++k) {
    const Vec vk = tangent_eigenvector(r, S, B.col(k), c1, tol, "b" + std::to_string(k + 1));
    // Rotate the probe 45 degrees towards b1: the eigendirection of the
    // rotated operator is (J b1 + J b_k)/sqrt(2) up to sign, which pins the
    // sign of J b_k relative to J b1.
    const Vec a = (B.col(0) + B.col(k)) / std::sqrt(2.0);
    const Vec w = tangent_eigenvector(r, S, a, c1, tol, "b1+b" + std::to_string(k + 1));
    const double align = g(w, jb[0]);
    if (std::abs(align) < 0.1) {
      throw std::domain_error("recover_J: sign alignment is degenerate at probe b" +
                              std::to_string(k + 1));
    }
    const double tau = align > 0.0 ? 1.0 : -1.0;
    const double sigma = tau * (g(w, vk) > 0.0 ? 1.0 : -1.0);
    jb[k] = sigma * vk;
  }

  Mat j(m, m);
  for (int k = 0; k < m; ++k) j.col(k) = B.transpose() * g.matrix() * jb[k];
  return AlmostComplexJ(S, j);
}

double remark58_residual(double c1, double c2) { return c1 - 4.0 * c2 + 3.0; }

SingleEigenvalueReport classify_single_eigenvalue(const CurvatureTensor& r,
                                                  const GffPoint& S,
                                                  const OssermanConfig& cfg) {
  if (S.s() != 2 || S.n() <= 1) {
    throw std::invalid_argument("classify_single_eigenvalue: requires s = 2 and n > 1");
  }

  SingleEigenvalueReport rep;
  const std::vector<Vec> probes = sample_phi_celestial_sphere(S, cfg.count, cfg.seed);
  bool first = true;
  bool single = true;
  double lambda = 0.0;
  for (const Vec& x : probes) {
    // Restrict the Jacobi operator of u = xi_0 + x to the im(phi) part of
    // the screen, x-perp in im(phi).
    const Vec u = S.xi(0) + x;
    const Mat basis = realization_basis(S.g(), x, S.im_phi_basis());
    const Mat m = basis.transpose() * r.jacobi_form(u) * basis;
    const SymmetricEigen eig = symmetric_eigen(m, cfg.tol);
    const Spectrum sp = eig.spectrum;
    if (first) {
      rep.restricted = sp;
      rep.phi_sectional_c = phi_sectional_curvature(r, S, x);
      lambda = sp.eigenvalues.front();
      first = false;
    }
    if (sp.eigenvalues.size() != 1 || std::abs(sp.eigenvalues.front() - lambda) >= cfg.tol) {
      single = false;
      break;
    }
  }
  rep.is_single = single;
  rep.lambda = single ? lambda : 0.0;
  return rep;
}

}  // namespace gff
