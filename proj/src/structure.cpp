#include "gff/structure.hpp"

#include <cmath>
#include <stdexcept>

namespace gff {

const AxiomCheck* StructureReport::find(const std::string& name) const {
  for (const AxiomCheck& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string StructureReport::first_failure() const {
  for (const AxiomCheck& c : checks)
    if (!c.passed) return c.name;
  return {};
}

GffPoint::GffPoint(int n, int s, PseudoMetric g, Mat phi, Mat xi, Mat eta,
                   std::vector<int> eps)
    : n_(n), s_(s), g_(std::move(g)), phi_(std::move(phi)), xi_(std::move(xi)),
      eta_(std::move(eta)), eps_(std::move(eps)) {
  const int d = 2 * n_ + s_;
  if (n_ < 1 || s_ < 1) throw std::invalid_argument("GffPoint: need n >= 1 and s >= 1");
  if (g_.dim() != d) throw std::invalid_argument("GffPoint: metric dimension mismatch");
  if (phi_.rows() != d || phi_.cols() != d)
    throw std::invalid_argument("GffPoint: phi must be dim x dim");
  if (xi_.rows() != d || xi_.cols() != s_)
    throw std::invalid_argument("GffPoint: xi must be dim x s");
  if (eta_.rows() != s_ || eta_.cols() != d)
    throw std::invalid_argument("GffPoint: eta must be s x dim");
  if (static_cast<int>(eps_.size()) != s_)
    throw std::invalid_argument("GffPoint: eps must have s entries");
}

int GffPoint::eps_sum() const {
  int e = 0;
  for (int v : eps_) e += v;
  return e;
}

double GffPoint::eta_tilde(const Vec& v) const {
  double acc = 0.0;
  for (int a = 0; a < s_; ++a) acc += eps_[a] * eta_.row(a).dot(v);
  return acc;
}

Vec GffPoint::xi_tilde() const {
  Vec t = Vec::Zero(dim());
  for (int a = 0; a < s_; ++a) t += xi_.col(a);
  return t;
}

StructureReport GffPoint::validate(double tol) const {
  StructureReport rep;
  rep.tol = tol;
  const int d = dim();
  auto add = [&](const std::string& name, double violation) {
    rep.checks.push_back({name, violation, violation < tol});
  };

  // eps pattern: exactly one timelike sign, in the leading slot.
  {
    int negatives = 0;
    for (int v : eps_) negatives += (v == -1) ? 1 : 0;
    bool ok = negatives == 1 && eps_[0] == -1;
    for (int v : eps_)
      if (v != 1 && v != -1) ok = false;
    rep.checks.push_back({"eps_pattern", ok ? 0.0 : 1.0, ok});
  }

  add("metric_lorentz", g_.lorentz() ? 0.0 : 1.0);
  add("xi_timelike", std::abs(g_(xi_.col(0), xi_.col(0)) + 1.0));

  // phi^2 = -I + sum_a xi_a (x) eta^a
  {
    Mat expected = -Mat::Identity(d, d);
    for (int a = 0; a < s_; ++a) expected += xi_.col(a) * eta_.row(a);
    add("phi_squared", (phi_ * phi_ - expected).cwiseAbs().maxCoeff());
  }

  // eta^a(xi_b) = delta_ab
  {
    Mat dual = eta_ * xi_;  // s x s
    add("eta_xi_duality", (dual - Mat::Identity(s_, s_)).cwiseAbs().maxCoeff());
  }

  // eta^a = eps_a g(., xi_a)
  {
    double worst = 0.0;
    for (int a = 0; a < s_; ++a) {
      Vec expected = eps_[a] * (g_.matrix() * xi_.col(a));
      worst = std::max(worst, (Vec(eta_.row(a).transpose()) - expected).cwiseAbs().maxCoeff());
    }
    add("eta_metric_duality", worst);
  }

  // g(phi X, phi Y) = g(X, Y) - sum_a eps_a eta^a(X) eta^a(Y)
  {
    Mat lhs = phi_.transpose() * g_.matrix() * phi_;
    Mat rhs = g_.matrix();
    for (int a = 0; a < s_; ++a)
      rhs -= eps_[a] * (eta_.row(a).transpose() * eta_.row(a));
    add("compatibility", (lhs - rhs).cwiseAbs().maxCoeff());
  }

  // rank(phi) = 2n with g positive definite on im(phi), im(phi) perp ker(phi).
  {
    bool rank_ok = false;
    double perp = 1.0, posdef = 1.0;
    try {
      Mat basis = gram_schmidt(g_, phi_, 1e-8);
      rank_ok = basis.cols() == 2 * n_;
      posdef = 0.0;
      if (rank_ok) {
        perp = 0.0;
        for (int k = 0; k < basis.cols(); ++k)
          for (int a = 0; a < s_; ++a)
            perp = std::max(perp, std::abs(g_(basis.col(k), xi_.col(a))));
        im_phi_basis_ = basis;
        im_phi_ready_ = true;
      }
    } catch (const std::domain_error&) {
      // negative norm inside im(phi): positive definiteness fails
    }
    rep.checks.push_back({"phi_rank", rank_ok ? 0.0 : 1.0, rank_ok});
    rep.checks.push_back({"im_phi_positive", posdef, posdef < tol});
    add("im_phi_perp_ker", perp);
  }

  rep.passed = true;
  for (const AxiomCheck& c : rep.checks) rep.passed = rep.passed && c.passed;
  return rep;
}

const Mat& GffPoint::im_phi_basis() const {
  if (!im_phi_ready_) {
    StructureReport rep = validate();
    if (!rep.passed) {
      throw std::domain_error("GffPoint: invalid structure (" + rep.first_failure() + ")");
    }
  }
  return im_phi_basis_;
}

double sasaki_form(const GffPoint& S, const Vec& x, const Vec& y) {
  return S.g()(x, S.phi() * y);
}

Mat sasaki_matrix(const GffPoint& S) { return S.g().matrix() * S.phi(); }

Vec project_im_phi(const GffPoint& S, const Vec& v) {
  Vec out = v;
  for (int a = 0; a < S.s(); ++a) out -= S.eta(a).dot(v) * S.xi(a);
  return out;
}

double p_tensor(const GffPoint& S, const Vec& x, const Vec& y, const Vec& z,
                const Vec& w) {
  const PseudoMetric& g = S.g();
  return sasaki_form(S, x, z) * g(y, w) - sasaki_form(S, x, w) * g(y, z) -
         sasaki_form(S, y, z) * g(x, w) + sasaki_form(S, y, w) * g(x, z);
}

double phi_sectional_curvature(const CurvatureTensor& r, const GffPoint& S,
                               const Vec& x) {
  const Vec proj = project_im_phi(S, x);
  if ((proj - x).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::domain_error("phi_sectional_curvature: vector is not in im(phi)");
  }
  return sectional_curvature(r, S.g(), PlaneSection{x, S.phi() * x});
}

}  // namespace gff
