#include "gff/curvature.hpp"

#include <cmath>
#include <stdexcept>

namespace gff {

CurvatureTensor::CurvatureTensor(int dim)
    : dim_(dim), a_(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {
  if (dim <= 0) throw std::invalid_argument("CurvatureTensor: dimension must be positive");
}

double CurvatureTensor::value(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const {
  // Contract one slot at a time to keep the cost at O(d^4 + d^3 + d^2 + d).
  const int d = dim_;
  std::vector<double> c3(static_cast<std::size_t>(d) * d * d, 0.0);
  for (int i = 0; i < d; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          c3[(j * d + k) * d + l] += x[i] * at(i, j, k, l);
  }
  std::vector<double> c2(static_cast<std::size_t>(d) * d, 0.0);
  for (int j = 0; j < d; ++j) {
    if (y[j] == 0.0) continue;
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) c2[k * d + l] += y[j] * c3[(j * d + k) * d + l];
  }
  double out = 0.0;
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) out += z[k] * w[l] * c2[k * d + l];
  return out;
}

Mat CurvatureTensor::jacobi_form(const Vec& u) const {
  const int d = dim_;
  Mat form = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      double acc = 0.0;
      for (int j = 0; j < d; ++j) {
        if (u[j] == 0.0) continue;
        for (int l = 0; l < d; ++l) acc += u[j] * u[l] * at(i, j, k, l);
      }
      form(i, k) = acc;
    }
  return form;
}

double CurvatureTensor::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

CurvatureTensor change_frame(const CurvatureTensor& r, const Mat& basis) {
  const int d = r.dim();
  if (basis.rows() != d || basis.cols() != d) {
    throw std::invalid_argument("change_frame: basis must be dim x dim");
  }
  // Contract one slot per pass.
  auto contract = [&](const std::vector<double>& in, int slot) {
    std::vector<double> out(in.size(), 0.0);
    const int stride[] = {d * d * d, d * d, d, 1};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            const int ids[] = {i, j, k, l};
            int base = 0;
            for (int s = 0; s < 4; ++s)
              if (s != slot) base += ids[s] * stride[s];
            double acc = 0.0;
            for (int a = 0; a < d; ++a) acc += basis(a, ids[slot]) * in[base + a * stride[slot]];
            out[((i * d + j) * d + k) * d + l] = acc;
          }
    return out;
  };

  std::vector<double> work(static_cast<std::size_t>(d) * d * d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          work[((i * d + j) * d + k) * d + l] = r.at(i, j, k, l);
  for (int slot = 0; slot < 4; ++slot) work = contract(work, slot);

  CurvatureTensor out(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          out.at(i, j, k, l) = work[((i * d + j) * d + k) * d + l];
  return out;
}

double CurvatureLikeReport::worst() const {
  return std::max(std::max(antisym_12, antisym_34), std::max(pair_symmetry, bianchi));
}

CurvatureLikeReport validate_curvature_like(const CurvatureTensor& r) {
  CurvatureLikeReport rep;
  const int d = r.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const double v = r.at(i, j, k, l);
          rep.antisym_12 = std::max(rep.antisym_12, std::abs(v + r.at(j, i, k, l)));
          rep.antisym_34 = std::max(rep.antisym_34, std::abs(v + r.at(i, j, l, k)));
          rep.pair_symmetry = std::max(rep.pair_symmetry, std::abs(v - r.at(k, l, i, j)));
          rep.bianchi = std::max(
              rep.bianchi, std::abs(v + r.at(i, k, l, j) + r.at(i, l, j, k)));
        }
  return rep;
}

CurvatureTensor constant_k_form(double k, const PseudoMetric& g) {
  const int d = g.dim();
  CurvatureTensor r(d);
  const Mat& m = g.matrix();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q)
          r.at(i, j, p, q) = k * (m(i, p) * m(j, q) - m(j, p) * m(i, q));
  return r;
}

double PlaneSection::delta(const PseudoMetric& g) const {
  return g(x, x) * g(y, y) - g(x, y) * g(x, y);
}

double sectional_curvature(const CurvatureTensor& r, const PseudoMetric& g,
                           const PlaneSection& plane) {
  const double delta = plane.delta(g);
  if (std::abs(delta) <= 1e-9) {
    throw std::domain_error("sectional_curvature: degenerate plane");
  }
  return r.value(plane.x, plane.y, plane.x, plane.y) / delta;
}

Vec curvature_operator(const CurvatureTensor& r, const PseudoMetric& g,
                       const Vec& x, const Vec& y, const Vec& z) {
  const int d = r.dim();
  Vec m(d);
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e(i) = 1.0;
    m(i) = r.value(e, z, x, y);
  }
  return g.inverse() * m;
}

std::vector<Vec> sphere_probes(const PseudoMetric& g, const Mat& axes, int count,
                               std::uint64_t seed) {
  std::vector<Vec> probes;
  const int m = static_cast<int>(axes.cols());
  for (int i = 0; i < m; ++i) probes.push_back(axes.col(i));
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      probes.push_back((axes.col(i) + axes.col(j)) / std::sqrt(2.0));

  SeededRng rng(seed);
  for (int t = 0; t < count; ++t) {
    Vec coeff = rng.normal_vec(m);
    Vec v = axes * coeff;
    const double q = g(v, v);
    if (q <= 1e-12) {
      --t;  // degenerate draw; the stream advances so this terminates
      continue;
    }
    probes.push_back(v / std::sqrt(q));
  }
  return probes;
}

std::vector<PlaneSection> degenerate_planes(const PseudoMetric& g, int count,
                                            std::uint64_t seed) {
  if (!g.lorentz()) {
    throw std::invalid_argument("degenerate_planes: metric is not Lorentz");
  }
  const int d = g.dim();
  const Vec z = g.frame().col(0);  // unit timelike
  Mat spacelike(d, d - 1);
  for (int k = 1; k < d; ++k) spacelike.col(k - 1) = g.frame().col(k);

  std::vector<PlaneSection> planes;
  for (const Vec& x : sphere_probes(g, spacelike, count, seed)) {
    const Vec u = z + x;  // null: g(u,u) = -1 + 1
    // Orthonormal basis of u-perp modulo u: spacelike directions orthogonal
    // to both z and x.
    Mat span(d, d - 1);
    for (int k = 0; k < d - 1; ++k) {
      const Vec& e = spacelike.col(k);
      span.col(k) = e - g(e, x) * x;
    }
    const Mat basis = gram_schmidt(g, span);
    for (int k = 0; k < basis.cols(); ++k) {
      planes.push_back(PlaneSection{u, basis.col(k)});
    }
  }
  return planes;
}

Lemma21Result lemma21_check(const CurvatureTensor& r, const PseudoMetric& g,
                            int count, std::uint64_t seed, double tol) {
  const CurvatureLikeReport shape = validate_curvature_like(r);
  if (!shape.passed(1e-9)) {
    throw std::invalid_argument("lemma21_check: tensor is not curvature-like, worst violation " +
                                std::to_string(shape.worst()));
  }
  if (r.dim() != g.dim()) throw std::invalid_argument("lemma21_check: dimension mismatch");

  Lemma21Result res;
  for (const PlaneSection& plane : degenerate_planes(g, count, seed)) {
    const double v = std::abs(r.value(plane.x, plane.y, plane.y, plane.x));
    if (v > res.worst_violation) {
      res.worst_violation = v;
      res.witness = plane;
    }
  }
  if (res.worst_violation >= tol) {
    res.is_constant_form = false;
    return res;
  }

  // Fit k on the first nondegenerate frame plane, then measure the full
  // entrywise residual against the constant form.
  const Vec e0 = g.frame().col(0);
  const Vec e1 = g.frame().col(1);
  const PlaneSection first{e0, e1};
  res.k = r.value(e0, e1, e0, e1) / first.delta(g);
  const CurvatureTensor model = constant_k_form(res.k, g);
  double residual = 0.0;
  const int d = r.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q)
          residual = std::max(residual, std::abs(r.at(i, j, p, q) - model.at(i, j, p, q)));
  res.residual = residual;
  res.is_constant_form = residual < tol;
  return res;
}

}  // namespace gff
