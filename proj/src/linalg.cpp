#include "gff/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gff {

double SeededRng::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double SeededRng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller on explicit uniforms; u1 is kept away from zero.
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

Vec SeededRng::normal_vec(int d) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = normal();
  return v;
}

int Spectrum::total() const {
  return std::accumulate(multiplicities.begin(), multiplicities.end(), 0);
}

Spectrum cluster_spectrum(std::vector<double> raw, double tol) {
  Spectrum sp;
  if (raw.empty()) return sp;
  std::sort(raw.begin(), raw.end());
  double radius = std::max(std::abs(raw.front()), std::abs(raw.back()));
  sp.cluster_gap = std::max(tol, 1e-7 * radius);

  double sum = raw[0];
  int count = 1;
  for (std::size_t i = 1; i <= raw.size(); ++i) {
    if (i < raw.size() && raw[i] - raw[i - 1] < sp.cluster_gap) {
      sum += raw[i];
      ++count;
    } else {
      sp.eigenvalues.push_back(sum / count);
      sp.multiplicities.push_back(count);
      if (i < raw.size()) {
        sum = raw[i];
        count = 1;
      }
    }
  }
  return sp;
}

SymmetricEigen symmetric_eigen(const Mat& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("symmetric_eigen: matrix not square");
  const int d = static_cast<int>(m.rows());
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    throw std::invalid_argument("symmetric_eigen: matrix not symmetric, max asymmetry " +
                                std::to_string(asym));
  }

  Mat a = 0.5 * (m + m.transpose());
  Mat v = Mat::Identity(d, d);

  // Cyclic sweeps: every off-diagonal pair (p, q) is rotated away in a fixed
  // order until the off-diagonal mass is negligible.
  for (int sweep = 0; sweep < 128; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-15 * scale) break;

    for (int p = 0; p < d; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-18 * scale) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (int k = 0; k < d; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - s * akq;
          a(k, q) = a(q, k) = s * akp + c * akq;
        }
        for (int k = 0; k < d; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) < a(j, j); });

  SymmetricEigen res;
  res.eigenvalues.resize(d);
  res.eigenvectors.resize(d, d);
  for (int k = 0; k < d; ++k) {
    res.eigenvalues[k] = a(order[k], order[k]);
    res.eigenvectors.col(k) = v.col(order[k]);
  }
  res.spectrum = cluster_spectrum(res.eigenvalues, tol);
  return res;
}

PseudoMetric::PseudoMetric(const Mat& g) : g_(g) {
  if (g.rows() != g.cols()) throw std::invalid_argument("PseudoMetric: matrix not square");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("PseudoMetric: matrix not symmetric");
  }
  g_ = 0.5 * (g + g.transpose());

  const SymmetricEigen eig = symmetric_eigen(g_);
  const int d = dim();
  double max_abs = 0.0, min_abs = std::numeric_limits<double>::infinity();
  for (double ev : eig.eigenvalues) {
    max_abs = std::max(max_abs, std::abs(ev));
    min_abs = std::min(min_abs, std::abs(ev));
  }
  if (max_abs == 0.0 || min_abs <= 1e-12 * max_abs) {
    throw std::invalid_argument("PseudoMetric: degenerate bilinear form");
  }

  frame_.resize(d, d);
  frame_signs_.resize(d);
  for (int k = 0; k < d; ++k) {
    const double ev = eig.eigenvalues[k];  // ascending: timelike first
    frame_.col(k) = eig.eigenvectors.col(k) / std::sqrt(std::abs(ev));
    frame_signs_[k] = ev < 0.0 ? -1 : 1;
    if (ev < 0.0) ++negatives_;
  }
  inv_ = g_.inverse();
}

double PseudoMetric::operator()(const Vec& x, const Vec& y) const {
  return x.dot(g_ * y);
}

Mat gram_schmidt(const PseudoMetric& g, const Mat& span, double drop_tol) {
  std::vector<Vec> basis;
  for (int c = 0; c < span.cols(); ++c) {
    Vec w = span.col(c);
    // Two orthogonalization passes for numerical stability.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& b : basis) w -= g(w, b) * b;
    }
    const double q = g(w, w);
    if (std::abs(q) < drop_tol) continue;  // linearly dependent direction
    if (q < 0.0) {
      throw std::domain_error("gram_schmidt: span is not positive definite");
    }
    basis.push_back(w / std::sqrt(q));
  }
  Mat out(span.rows(), static_cast<int>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) out.col(static_cast<int>(k)) = basis[k];
  return out;
}

Mat random_orthogonal(int d, SeededRng& rng) {
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    if (r(k, k) < 0.0) q.col(k) = -q.col(k);
  }
  return q;
}

}  // namespace gff
