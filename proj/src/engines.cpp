#include "gff/engines.hpp"

#include <cmath>
#include <stdexcept>

namespace gff {

CurvatureTensor space_form_curvature(const GffPoint& S, double c) {
  const int d = S.dim();
  const double e = static_cast<double>(S.eps_sum());
  const Mat& G = S.g().matrix();
  const Mat pphi = S.phi().transpose() * G * S.phi();  // g(phi e_i, phi e_j)
  const Mat ff = sasaki_matrix(S);                     // Phi(e_i, e_j)
  Vec te(d);
  for (int i = 0; i < d; ++i) te[i] = S.eta_tilde(Vec::Unit(d, i));

  const double ca = -(c + 3.0 * e) / 4.0;
  const double cb = -(c - e) / 4.0;
  CurvatureTensor r(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double v = ca * (pphi(j, k) * pphi(i, l) - pphi(i, k) * pphi(j, l));
          v += cb * (ff(l, i) * ff(k, j) - ff(k, i) * ff(l, j) +
                     2.0 * ff(i, j) * ff(l, k));
          v -= te[l] * te[i] * pphi(k, j) - te[l] * te[j] * pphi(k, i) +
               te[j] * te[k] * pphi(l, i) - te[k] * te[i] * pphi(l, j);
          r.at(i, j, k, l) = v;
        }
  return r;
}

Vec s_star(const GffPoint& S, const Vec& x, const Vec& y, const Vec& v) {
  const double nx = S.eta_tilde(x), ny = S.eta_tilde(y), nv = S.eta_tilde(v);
  const PseudoMetric& g = S.g();
  return ny * nv * x - nx * nv * y + (g(y, v) * nx - g(x, v) * ny) * S.xi_tilde();
}

Vec s_lower_star(const GffPoint& S, const Vec& x, const Vec& y, const Vec& v) {
  const Mat& phi = S.phi();
  const PseudoMetric& g = S.g();
  const Vec pv = phi * v;
  return -g(phi * y, pv) * (phi * (phi * x)) + g(phi * x, pv) * (phi * (phi * y));
}

Vec r_zero(const GffPoint& S, const Vec& x, const Vec& y, const Vec& v) {
  const Vec px = project_im_phi(S, x);
  const Vec py = project_im_phi(S, y);
  const Vec pv = project_im_phi(S, v);
  const PseudoMetric& g = S.g();
  return g(py, pv) * px - g(px, pv) * py;
}

AlmostComplexJ::AlmostComplexJ(const GffPoint& S, Mat j) : j_(std::move(j)) {
  const int m = 2 * S.n();
  if (j_.rows() != m || j_.cols() != m) {
    throw std::invalid_argument("AlmostComplexJ: matrix must be 2n x 2n");
  }
  const double inv = (j_ * j_ + Mat::Identity(m, m)).cwiseAbs().maxCoeff();
  if (inv > 1e-9) {
    throw std::invalid_argument("AlmostComplexJ: J^2 != -I, violation " + std::to_string(inv));
  }
  // The im(phi) basis is g-orthonormal, so metric compatibility is plain
  // orthogonality of the coefficient matrix.
  const double orth = (j_.transpose() * j_ - Mat::Identity(m, m)).cwiseAbs().maxCoeff();
  if (orth > 1e-9) {
    throw std::invalid_argument("AlmostComplexJ: not orthogonal, violation " + std::to_string(orth));
  }
}

Vec AlmostComplexJ::apply(const GffPoint& S, const Vec& v) const {
  const Mat& B = S.im_phi_basis();
  const Vec coords = B.transpose() * S.g().matrix() * v;
  return B * (j_ * coords);
}

Mat AlmostComplexJ::frame_operator(const GffPoint& S) const {
  const Mat& B = S.im_phi_basis();
  return B * j_ * B.transpose() * S.g().matrix();
}

Vec r_j(const GffPoint& S, const AlmostComplexJ& J, const Vec& x, const Vec& y,
        const Vec& v) {
  const Vec px = project_im_phi(S, x);
  const Vec py = project_im_phi(S, y);
  const Vec pv = project_im_phi(S, v);
  const Vec jx = J.apply(S, px);
  const Vec jy = J.apply(S, py);
  const PseudoMetric& g = S.g();
  return g(jy, pv) * jx - g(jx, pv) * jy + 2.0 * g(px, jy) * J.apply(S, pv);
}

CurvatureTensor reconstructed_curvature(const GffPoint& S, const AlmostComplexJ& J,
                                        double c1, double c2) {
  if (S.s() != 2) {
    throw std::invalid_argument("reconstructed_curvature: requires s = 2");
  }
  const int d = S.dim();
  const double tau = (c1 - c2) / 3.0;
  const Mat& G = S.g().matrix();

  CurvatureTensor r(d);
  for (int k = 0; k < d; ++k) {
    const Vec ek = Vec::Unit(d, k);
    for (int l = 0; l < d; ++l) {
      const Vec el = Vec::Unit(d, l);
      for (int j = 0; j < d; ++j) {
        const Vec ej = Vec::Unit(d, j);
        const Vec op = s_star(S, ek, el, ej) - s_lower_star(S, ek, el, ej) +
                       c2 * r_zero(S, ek, el, ej) + tau * r_j(S, J, ek, el, ej);
        const Vec lowered = G * op;  // g(op, e_i) over i
        for (int i = 0; i < d; ++i) r.at(i, j, k, l) = lowered[i];
      }
    }
  }
  return r;
}

LieBrackets::LieBrackets(int dim)
    : dim_(dim), c_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

Vec LieBrackets::bracket(int i, int j) const {
  Vec v(dim_);
  for (int k = 0; k < dim_; ++k) v[k] = c_[(i * dim_ + j) * dim_ + k];
  return v;
}

void LieBrackets::set(int i, int j, const Vec& v) {
  for (int k = 0; k < dim_; ++k) {
    c_[(i * dim_ + j) * dim_ + k] = v[k];
    c_[(j * dim_ + i) * dim_ + k] = -v[k];
  }
}

Vec LieBrackets::apply(const Vec& x, const Vec& y) const {
  Vec out = Vec::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      if (y[j] == 0.0) continue;
      for (int k = 0; k < dim_; ++k)
        out[k] += x[i] * y[j] * c_[(i * dim_ + j) * dim_ + k];
    }
  }
  return out;
}

double LieBrackets::antisymmetry_violation() const {
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      worst = std::max(worst, (bracket(i, j) + bracket(j, i)).cwiseAbs().maxCoeff());
  return worst;
}

double LieBrackets::jacobi_violation() const {
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = j + 1; k < dim_; ++k) {
        const Vec cyc = apply(Vec::Unit(dim_, i), bracket(j, k)) +
                        apply(Vec::Unit(dim_, j), bracket(k, i)) +
                        apply(Vec::Unit(dim_, k), bracket(i, j));
        worst = std::max(worst, cyc.cwiseAbs().maxCoeff());
      }
  return worst;
}

std::vector<Mat> lie_levi_civita(const LiePointModel& M) {
  const int d = M.point.dim();
  const Mat& G = M.point.g().matrix();
  const Mat& Ginv = M.point.g().inverse();

  std::vector<Mat> nabla(d, Mat::Zero(d, d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Vec omega(d);
      for (int k = 0; k < d; ++k) {
        omega[k] = (G * M.brackets.bracket(i, j))(k) -
                   (G * M.brackets.bracket(j, k))(i) +
                   (G * M.brackets.bracket(k, i))(j);
      }
      nabla[i].col(j) = 0.5 * (Ginv * omega);
    }
  }
  return nabla;
}

CurvatureTensor lie_group_curvature(const LiePointModel& M) {
  if (M.brackets.dim() != M.point.dim()) {
    throw std::invalid_argument("lie_group_curvature: bracket dimension mismatch");
  }
  if (M.brackets.antisymmetry_violation() > 1e-12) {
    throw std::invalid_argument("lie_group_curvature: brackets not antisymmetric");
  }
  const double jac = M.brackets.jacobi_violation();
  if (jac > 1e-10) {
    throw std::invalid_argument("lie_group_curvature: Jacobi identity fails, violation " +
                                std::to_string(jac));
  }

  const int d = M.point.dim();
  const Mat& G = M.point.g().matrix();
  const std::vector<Mat> nabla = lie_levi_civita(M);

  CurvatureTensor r(d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      Mat op = nabla[k] * nabla[l] - nabla[l] * nabla[k];
      const Vec c = M.brackets.bracket(k, l);
      for (int m = 0; m < d; ++m) {
        if (c[m] != 0.0) op -= c[m] * nabla[m];
      }
      const Mat lowered = G * op;  // (i, j) = g(R(e_k, e_l) e_j, e_i)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r.at(i, j, k, l) = lowered(i, j);
    }
  return r;
}

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  if (c != 0.0) p.add_term(c, std::vector<int>(nvars, 0));
  return p;
}

Polynomial Polynomial::variable(int nvars, int k) {
  Polynomial p(nvars);
  std::vector<int> e(nvars, 0);
  e[k] = 1;
  p.add_term(1.0, std::move(e));
  return p;
}

void Polynomial::add_term(double coeff, std::vector<int> exps) {
  if (static_cast<int>(exps.size()) != nvars_) {
    throw std::invalid_argument("Polynomial: exponent arity mismatch");
  }
  terms_.push_back({coeff, std::move(exps)});
  normalize();
}

void Polynomial::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.exps < b.exps; });
  std::vector<Term> merged;
  for (const Term& t : terms_) {
    if (!merged.empty() && merged.back().exps == t.exps) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
  terms_ = std::move(merged);
}

double Polynomial::eval(const Vec& x) const {
  double acc = 0.0;
  for (const Term& t : terms_) {
    double m = t.coeff;
    for (int k = 0; k < nvars_; ++k)
      for (int e = 0; e < t.exps[k]; ++e) m *= x[k];
    acc += m;
  }
  return acc;
}

Polynomial Polynomial::derivative(int k) const {
  Polynomial out(nvars_);
  for (const Term& t : terms_) {
    if (t.exps[k] == 0) continue;
    Term d = t;
    d.coeff *= d.exps[k];
    d.exps[k] -= 1;
    out.terms_.push_back(std::move(d));
  }
  out.normalize();
  return out;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial out(nvars_);
  out.terms_ = terms_;
  out.terms_.insert(out.terms_.end(), o.terms_.begin(), o.terms_.end());
  out.normalize();
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  return *this + o * -1.0;
}

Polynomial Polynomial::operator*(double c) const {
  Polynomial out(nvars_);
  out.terms_ = terms_;
  for (Term& t : out.terms_) t.coeff *= c;
  out.normalize();
  return out;
}

Mat ChartPointModel::eval_matrix(const PolyMatrix& p) const {
  const int rows = static_cast<int>(p.size());
  const int cols = rows > 0 ? static_cast<int>(p[0].size()) : 0;
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = p[i][j].eval(point);
  return m;
}

GffPoint ChartPointModel::coordinate_point() const {
  return GffPoint(n, s, PseudoMetric(eval_matrix(metric)), eval_matrix(phi),
                  eval_matrix(xi).transpose(), eval_matrix(eta), eps);
}

Mat ChartPointModel::frame_matrix() const { return eval_matrix(frame); }

GffPoint ChartPointModel::structure_point() const {
  const Mat B = frame_matrix();
  const Mat Binv = B.inverse();
  const Mat G = eval_matrix(metric);
  const Mat P = eval_matrix(phi);
  return GffPoint(n, s, PseudoMetric(B.transpose() * G * B), Binv * P * B,
                  Binv * eval_matrix(xi).transpose(), eval_matrix(eta) * B, eps);
}

std::vector<Mat> christoffel(const ChartPointModel& M) {
  const int d = static_cast<int>(M.metric.size());
  const Mat G = M.eval_matrix(M.metric);
  const Mat Ginv = G.inverse();

  // dg[k](i, j) = d_k g_ij, exactly.
  std::vector<Mat> dg(d, Mat(d, d));
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        dg[k](i, j) = M.metric[i][j].derivative(k).eval(M.point);

  std::vector<Mat> gamma(d, Mat(d, d));
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) {
      Vec lower(d);
      for (int m = 0; m < d; ++m)
        lower[m] = 0.5 * (dg[k](m, j) + dg[j](k, m) - dg[m](k, j));
      gamma[k].col(j) = Ginv * lower;
    }
  return gamma;
}

CurvatureTensor coordinate_curvature(const ChartPointModel& M) {
  const int d = static_cast<int>(M.metric.size());
  const Mat G = M.eval_matrix(M.metric);
  const Mat Ginv = G.inverse();

  std::vector<Mat> dg(d, Mat(d, d));
  std::vector<std::vector<Mat>> ddg(d, std::vector<Mat>(d, Mat(d, d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        const Polynomial pk = M.metric[i][j].derivative(k);
        dg[k](i, j) = pk.eval(M.point);
        for (int l = 0; l < d; ++l) ddg[k][l](i, j) = pk.derivative(l).eval(M.point);
      }
    }

  const std::vector<Mat> gamma = christoffel(M);

  // dginv[k] = -Ginv dg[k] Ginv, exact at the point.
  std::vector<Mat> dginv(d);
  for (int k = 0; k < d; ++k) dginv[k] = -Ginv * dg[k] * Ginv;

  // dgamma[k][l](i, j) = d_k Gamma^i_{lj}
  std::vector<std::vector<Mat>> dgamma(d, std::vector<Mat>(d, Mat(d, d)));
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int j = 0; j < d; ++j) {
        Vec lower(d), dlower(d);
        for (int m = 0; m < d; ++m) {
          lower[m] = 0.5 * (dg[l](m, j) + dg[j](l, m) - dg[m](l, j));
          dlower[m] = 0.5 * (ddg[k][l](m, j) + ddg[k][j](l, m) - ddg[k][m](l, j));
        }
        dgamma[k][l].col(j) = dginv[k] * lower + Ginv * dlower;
      }

  CurvatureTensor r(d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      // up(i, j) = R^i_{jkl}
      Mat up = dgamma[k][l] - dgamma[l][k] + gamma[k] * gamma[l] - gamma[l] * gamma[k];
      const Mat lowered = G * up;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r.at(i, j, k, l) = lowered(i, j);
    }

  return change_frame(r, M.frame_matrix());
}

double Identities2Report::worst() const {
  double w = std::max(im_mixed, characteristic_pair);
  w = std::max(w, characteristic_triple);
  w = std::max(w, pure_characteristic);
  return std::max(w, phi_shift);
}

Identities2Report check_identities_2(const CurvatureTensor& r, const GffPoint& S) {
  Identities2Report rep;
  const Mat& B = S.im_phi_basis();
  const int m = static_cast<int>(B.cols());
  const int s = S.s();
  const double e = static_cast<double>(S.eps_sum());
  const PseudoMetric& g = S.g();

  for (int a = 0; a < s; ++a) {
    const Vec xa = S.xi(a);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        rep.im_mixed = std::max(
            rep.im_mixed, std::abs(r.value(B.col(i), xa, B.col(i), B.col(j))));
      }
    for (int b = 0; b < s; ++b) {
      const Vec xb = S.xi(b);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const double expected = S.eps(a) * S.eps(b) * g(B.col(i), B.col(j));
          rep.characteristic_pair = std::max(
              rep.characteristic_pair,
              std::abs(r.value(xa, B.col(i), xb, B.col(j)) - expected));
        }
      for (int c = 0; c < s; ++c) {
        for (int i = 0; i < m; ++i)
          rep.characteristic_triple = std::max(
              rep.characteristic_triple,
              std::abs(r.value(xa, B.col(i), xb, S.xi(c))));
        for (int dd = 0; dd < s; ++dd)
          rep.pure_characteristic = std::max(
              rep.pure_characteristic,
              std::abs(r.value(xa, S.xi(dd), xb, S.xi(c))));
      }
    }
  }

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          const Vec x = B.col(i), y = B.col(j), z = B.col(k), w = B.col(l);
          const double lhs = r.value(x, y, S.phi() * z, w) + r.value(x, y, z, S.phi() * w);
          rep.phi_shift = std::max(rep.phi_shift,
                                   std::abs(lhs - e * p_tensor(S, x, y, z, w)));
        }
  return rep;
}

}  // namespace gff
