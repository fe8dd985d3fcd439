#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gff/catalog.hpp"
#include "gff/engines.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <tuple>
#include <vector>

using namespace gff;

namespace {

double gdot(const GffPoint& S, const Vec& a, const Vec& b) { return S.g()(a, b); }

/// Lowers an operator-valued map T(x,y)v into the tensor storage convention
/// at(i,j,k,l) = g(T(e_k,e_l)e_j, e_i).
CurvatureTensor lower_op(const GffPoint& S,
                         const std::function<Vec(const Vec&, const Vec&, const Vec&)>& t) {
  const int d = S.dim();
  CurvatureTensor out(d);
  Mat id = Mat::Identity(d, d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int j = 0; j < d; ++j) {
        Vec v = t(id.col(k), id.col(l), id.col(j));
        for (int i = 0; i < d; ++i) out.at(i, j, k, l) = gdot(S, v, id.col(i));
      }
  return out;
}

/// Closed form for R(x, u, u, w) on a space of constant phi-sectional
/// curvature c, valid for null u = xi_0 + x1 and x orthogonal to u.
double closed_null_jacobi(const GffPoint& S, double c, const Vec& x, const Vec& u,
                          const Vec& w) {
  const double s = S.s();
  const Vec phix = S.phi() * x;
  const Vec phiu = S.phi() * u;
  const Vec phiw = S.phi() * w;
  const double eta1x = S.eta(0).dot(x);
  const double t1 =
      -(c + 3.0 * (s - 2.0)) / 4.0 * (gdot(S, phix, phiw) - eta1x * gdot(S, phiu, phiw));
  const double t2 = -0.75 * (c - s + 2.0) * gdot(S, x, phiu) * gdot(S, w, phiu);
  const double t3 = -(S.eta_tilde(w) * S.eta_tilde(x) + S.eta_tilde(w) * eta1x +
                      gdot(S, phiw, phix) + S.eta_tilde(x) * gdot(S, phiw, phiu));
  return t1 + t2 + t3;
}

/// Projects v into the orthogonal complement of the null vector u, using a
/// transversal vector t with g(u, t) != 0.
Vec into_perp(const GffPoint& S, const Vec& v, const Vec& u, const Vec& t) {
  return v - (gdot(S, v, u) / gdot(S, t, u)) * t;
}

double max_diff(const CurvatureTensor& a, const CurvatureTensor& b) {
  double worst = 0.0;
  const int d = a.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          worst = std::max(worst, std::abs(a.at(i, j, k, l) - b.at(i, j, k, l)));
  return worst;
}

}  // namespace

TEST_CASE("constant phi-sectional models are curvature-like") {
  const std::vector<std::tuple<int, int, double>> cases = {
      {1, 2, 4.0}, {2, 2, 0.0}, {2, 3, 1.0}, {3, 3, -2.5}};
  for (auto [n, s, c] : cases) {
    GffPoint S = build_space_form_model(n, s, c).point;
    CurvatureTensor r = space_form_curvature(S, c);
    CHECK(validate_curvature_like(r).worst() < 1e-12);
  }
}

TEST_CASE("constant phi-sectional models satisfy the structural curvature identities") {
  const std::vector<std::tuple<int, int, double>> cases = {
      {1, 2, 4.0}, {2, 2, 0.0}, {2, 3, 1.0}};
  for (auto [n, s, c] : cases) {
    GffPoint S = build_space_form_model(n, s, c).point;
    CurvatureTensor r = space_form_curvature(S, c);
    Identities2Report rep = check_identities_2(r, S);
    INFO("n=", n, " s=", s, " c=", c, " worst=", rep.worst());
    CHECK(rep.worst() < 1e-9);
  }
}

TEST_CASE("phi sectional curvature of the model is the declared constant") {
  GffPoint S = build_space_form_model(2, 3, 1.7).point;
  CurvatureTensor r = space_form_curvature(S, 1.7);
  SeededRng rng(21);
  const Mat& b = S.im_phi_basis();
  for (int t = 0; t < 8; ++t) {
    Vec x = b * rng.normal_vec(b.cols());
    if (std::abs(gdot(S, x, x)) < 1e-3) continue;
    CHECK(phi_sectional_curvature(r, S, x) == doctest::Approx(1.7).epsilon(1e-9));
  }
}

TEST_CASE("null vectors against the timelike characteristic direction") {
  GffPoint S = build_space_form_model(2, 3, 0.8).point;
  Vec x1 = S.im_phi_basis().col(0);
  Vec u = S.xi(0) + x1;
  CHECK(std::abs(gdot(S, u, u)) < 1e-12);

  // The squared phi-image of u is a unit vector.
  Vec phiu = S.phi() * u;
  CHECK(gdot(S, phiu, phiu) == doctest::Approx(1.0).epsilon(1e-12));

  // For x orthogonal to u, g(phi x, phi u) reduces to the first one-form.
  SeededRng rng(13);
  Vec t = S.xi(0) - x1;
  for (int k = 0; k < 10; ++k) {
    Vec x = into_perp(S, rng.normal_vec(S.dim()), u, t);
    CHECK(std::abs(gdot(S, x, u)) < 1e-9);
    CHECK(gdot(S, S.phi() * x, phiu) == doctest::Approx(S.eta(0).dot(x)).epsilon(1e-9));
  }
}

TEST_CASE("closed-form null Jacobi values match the curvature engine") {
  const std::vector<std::tuple<int, int, double>> cases = {
      {1, 2, 4.0}, {2, 3, 1.7}, {3, 3, -1.0}};
  for (auto [n, s, c] : cases) {
    GffPoint S = build_space_form_model(n, s, c).point;
    CurvatureTensor r = space_form_curvature(S, c);
    SeededRng rng(31);
    // Several null directions u = xi_0 + x1 over the phi-celestial sphere.
    const Mat& b = S.im_phi_basis();
    for (int trial = 0; trial < 4; ++trial) {
      Vec x1 = b * rng.normal_vec(b.cols());
      x1 /= std::sqrt(gdot(S, x1, x1));
      Vec u = S.xi(0) + x1;
      Vec t = S.xi(0) - x1;
      for (int k = 0; k < 6; ++k) {
        Vec x = into_perp(S, rng.normal_vec(S.dim()), u, t);
        Vec w = rng.normal_vec(S.dim());
        CHECK(r.value(x, u, u, w) ==
              doctest::Approx(closed_null_jacobi(S, c, x, u, w)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("the doubly characteristic null direction kills the curvature operator") {
  // With two characteristic directions, u = xi_0 + xi_1 is null and R(., u)u
  // vanishes identically for every constant phi-sectional curvature.
  for (double c : {4.0, 0.0, -1.0}) {
    GffPoint S = build_space_form_model(2, 2, c).point;
    CurvatureTensor r = space_form_curvature(S, c);
    Vec u3 = S.xi(0) + S.xi(1);
    CHECK(std::abs(gdot(S, u3, u3)) < 1e-12);
    SeededRng rng(17);
    for (int k = 0; k < 6; ++k) {
      Vec z = rng.normal_vec(S.dim());
      CHECK(curvature_operator(r, S.g(), z, u3, u3).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("building blocks of the reconstruction are curvature-like") {
  GffPoint S = build_space_form_model(2, 2, 1.0).point;
  SeededRng rng(23);
  Mat k0(4, 4);
  k0 << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
  Mat q = random_orthogonal(4, rng);
  AlmostComplexJ J(S, q * k0 * q.transpose());

  auto sstar = [&](const Vec& x, const Vec& y, const Vec& v) { return s_star(S, x, y, v); };
  auto slow = [&](const Vec& x, const Vec& y, const Vec& v) {
    return s_lower_star(S, x, y, v);
  };
  auto rz = [&](const Vec& x, const Vec& y, const Vec& v) { return r_zero(S, x, y, v); };
  auto rj = [&](const Vec& x, const Vec& y, const Vec& v) { return r_j(S, J, x, y, v); };
  CHECK(validate_curvature_like(lower_op(S, sstar)).worst() < 1e-12);
  CHECK(validate_curvature_like(lower_op(S, slow)).worst() < 1e-12);
  CHECK(validate_curvature_like(lower_op(S, rz)).worst() < 1e-12);
  CHECK(validate_curvature_like(lower_op(S, rj)).worst() < 1e-12);
}

TEST_CASE("pointwise identities of the reconstruction blocks") {
  GffPoint S = build_space_form_model(2, 2, 1.0).point;
  const Mat& b = S.im_phi_basis();
  SeededRng rng(29);

  SUBCASE("characteristic block vanishes on the phi-image") {
    for (int t = 0; t < 6; ++t) {
      Vec x = b * rng.normal_vec(b.cols());
      Vec y = b * rng.normal_vec(b.cols());
      Vec v = rng.normal_vec(S.dim());
      CHECK(s_star(S, x, y, v).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("phi block is antisymmetric in its first arguments") {
    for (int t = 0; t < 6; ++t) {
      Vec x = rng.normal_vec(S.dim());
      Vec v = rng.normal_vec(S.dim());
      CHECK(s_lower_star(S, x, x, v).cwiseAbs().maxCoeff() < 1e-12);
      Vec y = rng.normal_vec(S.dim());
      CHECK((s_lower_star(S, x, y, v) + s_lower_star(S, y, x, v)).cwiseAbs().maxCoeff() <
            1e-12);
    }
  }

  SUBCASE("projected constant block acts as the identity curvature") {
    Vec x = b.col(0), y = b.col(1);
    CHECK((r_zero(S, x, y, y) - x).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((r_zero(S, x, y, x) + y).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r_zero(S, x, y, S.xi(0)).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("complex block scales its diagonal by three") {
    Mat phi_im(b.cols(), b.cols());
    // J = phi restricted to the cached basis is a valid anti-involution.
    for (int i = 0; i < b.cols(); ++i)
      for (int j = 0; j < b.cols(); ++j)
        phi_im(i, j) = gdot(S, b.col(i), S.phi() * b.col(j));
    AlmostComplexJ J(S, phi_im);
    Vec x1 = b.col(0);
    Vec y1 = J.apply(S, x1);
    Vec u = S.xi(0) + x1;
    CHECK((r_j(S, J, y1, u, u) - 3.0 * y1).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("the two null-plane diagonals of the blocks cancel") {
    // g(S*(u,y)u, y) = g(S_*(u,y)u, y) for null u over the phi-celestial
    // sphere and y in its screen.
    for (int t = 0; t < 8; ++t) {
      Vec x1 = b * rng.normal_vec(b.cols());
      x1 /= std::sqrt(gdot(S, x1, x1));
      Vec u = S.xi(0) + x1;
      Vec y = b * rng.normal_vec(b.cols());
      y = y - gdot(S, y, x1) * x1;  // into u-perp within the phi-image
      CHECK(gdot(S, s_star(S, u, y, u), y) ==
            doctest::Approx(gdot(S, s_lower_star(S, u, y, u), y)).epsilon(1e-10));
    }
  }
}

TEST_CASE("almost complex structures on the phi-image are validated") {
  GffPoint S = build_space_form_model(2, 2, 1.0).point;
  Mat good(4, 4);
  good << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
  CHECK_NOTHROW(AlmostComplexJ(S, good));

  Mat not_squared = Mat::Identity(4, 4);
  CHECK_THROWS_AS(AlmostComplexJ(S, not_squared), std::invalid_argument);

  Mat not_orthogonal = good;
  not_orthogonal(1, 0) = 2.0;
  CHECK_THROWS_AS(AlmostComplexJ(S, not_orthogonal), std::invalid_argument);

  // frame_operator acts on the full frame and squares to minus the
  // projection onto the phi-image.
  AlmostComplexJ J(S, good);
  Mat jf = J.frame_operator(S);
  const int d = S.dim();
  REQUIRE(jf.rows() == d);
  Mat proj(d, d);
  for (int c = 0; c < d; ++c) {
    Vec e = Vec::Zero(d);
    e(c) = 1.0;
    proj.col(c) = project_im_phi(S, e);
  }
  CHECK((jf * jf + proj).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("reconstruction with J = phi reproduces the constant model") {
  GffPoint S = build_u2_model().point;
  const Mat& b = S.im_phi_basis();
  Mat phi_im(b.cols(), b.cols());
  for (int i = 0; i < b.cols(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      phi_im(i, j) = gdot(S, b.col(i), S.phi() * b.col(j));
  AlmostComplexJ J(S, phi_im);
  const double c = 4.0;
  CurvatureTensor rec = reconstructed_curvature(S, J, c + 1.0, (c + 4.0) / 4.0);
  CurvatureTensor direct = space_form_curvature(S, c);
  CHECK(max_diff(rec, direct) < 1e-9);
}

TEST_CASE("reconstructions are curvature-like and satisfy the frame identities") {
  GffPoint S = build_space_form_model(2, 2, 1.0).point;
  SeededRng rng(37);
  Mat k0(4, 4);
  k0 << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
  for (int trial = 0; trial < 3; ++trial) {
    Mat q = random_orthogonal(4, rng);
    AlmostComplexJ J(S, q * k0 * q.transpose());
    const double c1 = 2.0 + trial, c2 = 0.5 * trial - 1.0;
    CurvatureTensor r = reconstructed_curvature(S, J, c1, c2);
    CHECK(validate_curvature_like(r).worst() < 1e-10);

    Identities2Report rep = check_identities_2(r, S);
    CHECK(rep.im_mixed < 1e-10);
    CHECK(rep.characteristic_pair < 1e-10);
    CHECK(rep.characteristic_triple < 1e-10);
    CHECK(rep.pure_characteristic < 1e-10);
    // The phi-shift identity is deliberately not asserted here: it fails for
    // generic eigenvalue pairs and holds only under the coupling
    // c1 - 4 c2 + 3 = 0.
  }
}

TEST_CASE("reconstruction curvature on characteristic arguments") {
  GffPoint S = build_space_form_model(2, 2, 1.0).point;
  SeededRng rng(41);
  Mat k0(4, 4);
  k0 << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
  Mat q = random_orthogonal(4, rng);
  AlmostComplexJ J(S, q * k0 * q.transpose());
  const double c1 = 3.0, c2 = 0.75;
  CurvatureTensor r = reconstructed_curvature(S, J, c1, c2);
  const Mat& b = S.im_phi_basis();

  // R(x, xi_0)xi_0 = x - eta~(x) xi_1 for x orthogonal to xi_0.
  for (int k = 0; k < b.cols(); ++k) {
    Vec x = b.col(k);
    CHECK((curvature_operator(r, S.g(), x, S.xi(0), S.xi(0)) - x).cwiseAbs().maxCoeff() <
          1e-10);
  }
  Vec xi2 = S.xi(1);
  CHECK(curvature_operator(r, S.g(), xi2, S.xi(0), S.xi(0)).cwiseAbs().maxCoeff() < 1e-10);

  // R(xi_1, x)x = xi~ for unit x in the phi-image.
  Vec x1 = b.col(0);
  CHECK((curvature_operator(r, S.g(), xi2, x1, x1) - S.xi_tilde()).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("mixed-plane values of a reconstruction are pinned by the eigenvalue gap") {
  GffPoint S = build_space_form_model(2, 2, 0.0).point;
  SeededRng rng(43);
  Mat k0(4, 4);
  k0 << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
  Mat q = random_orthogonal(4, rng);
  AlmostComplexJ J(S, q * k0 * q.transpose());
  const double c1 = 2.5, c2 = -0.5;
  CurvatureTensor r = reconstructed_curvature(S, J, c1, c2);

  // |R(Jx, x, y, Jy)| = 2|c1 - c2| / 3 for unit x and unit y orthogonal to
  // the J-plane of x.
  const Mat& b = S.im_phi_basis();
  Vec x = b.col(0);
  Vec jx = J.apply(S, x);
  Vec y = b.col(2) - gdot(S, b.col(2), x) * x - gdot(S, b.col(2), jx) * jx;
  y /= std::sqrt(gdot(S, y, y));
  Vec jy = J.apply(S, y);
  CHECK(std::abs(r.value(jx, x, y, jy)) ==
        doctest::Approx(2.0 * std::abs(c1 - c2) / 3.0).epsilon(1e-10));
}

TEST_CASE("reconstruction refuses more than two characteristic directions") {
  GffPoint S = build_space_form_model(2, 3, 1.0).point;
  Mat k0 = Mat::Zero(4, 4);
  k0(0, 1) = -1;
  k0(1, 0) = 1;
  k0(2, 3) = -1;
  k0(3, 2) = 1;
  AlmostComplexJ J(S, k0);
  CHECK_THROWS_AS(reconstructed_curvature(S, J, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("left-invariant connection of the unitary group model") {
  Model m = build_u2_model();
  LiePointModel M = m.lie_model();
  std::vector<Mat> nabla = lie_levi_civita(M);
  const GffPoint& S = M.point;
  const int d = S.dim();
  Mat id = Mat::Identity(d, d);

  SUBCASE("metric compatibility") {
    for (int i = 0; i < d; ++i) {
      // Left-invariant metric: g(D_i e_j, e_k) + g(e_j, D_i e_k) = 0.
      Mat gn = S.g().matrix() * nabla[i];
      CHECK((gn + gn.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("torsion freeness against the bracket table") {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Vec torsion = nabla[i].col(j) - nabla[j].col(i) - M.brackets.bracket(i, j);
        CHECK(torsion.cwiseAbs().maxCoeff() < 1e-12);
      }
  }

  SUBCASE("characteristic directions are transported by phi") {
    // D_X xi_a = -eps_a phi X for every frame direction X.
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < S.s(); ++a) {
        Vec want = -static_cast<double>(S.eps(a)) * (S.phi() * id.col(i));
        // xi_a is the frame vector a in this model.
        CHECK((nabla[i].col(a) - want).cwiseAbs().maxCoeff() < 1e-12);
      }
  }
}

TEST_CASE("left-invariant curvature of the unitary group matches the constant model") {
  Model m = build_u2_model();
  CurvatureTensor lie = lie_group_curvature(m.lie_model());
  CurvatureTensor direct = space_form_curvature(m.point, 4.0);
  CHECK(max_diff(lie, direct) < 1e-9);
  CHECK(check_identities_2(lie, m.point).worst() < 1e-9);
}

TEST_CASE("abelian brackets produce a flat left-invariant metric") {
  Model m = build_u2_model();
  LiePointModel flat{m.point, LieBrackets(4)};
  CurvatureTensor r = lie_group_curvature(flat);
  CHECK(r.max_abs() < 1e-12);
}

TEST_CASE("bracket tables must satisfy the Jacobi identity") {
  LieBrackets b(3);
  Vec e0 = Vec::Zero(3), e1 = Vec::Zero(3);
  e0(0) = 1.0;
  e1(1) = 1.0;
  b.set(0, 1, e0);
  b.set(1, 2, e1);
  CHECK(b.antisymmetry_violation() < 1e-15);
  CHECK(b.jacobi_violation() > 0.5);

  Model m = build_u2_model();
  CHECK(m.lie_model().brackets.jacobi_violation() < 1e-15);

  LieBrackets bad(4);
  Vec f0 = Vec::Zero(4), f1 = Vec::Zero(4);
  f0(0) = 1.0;
  f1(1) = 1.0;
  bad.set(0, 1, f0);
  bad.set(1, 2, f1);
  LiePointModel broken{m.point, bad};
  CHECK_THROWS_AS(lie_group_curvature(broken), std::invalid_argument);
}

TEST_CASE("polynomials evaluate, differentiate and combine") {
  Polynomial p(3);
  p.add_term(3.0, {2, 1, 0});  // 3 x^2 y
  p.add_term(-2.0, {0, 0, 1});
  p.add_term(1.0, {0, 0, 0});
  Vec at(3);
  at << 1.0, 2.0, 3.0;
  CHECK(p.eval(at) == doctest::Approx(1.0));

  Polynomial dx = p.derivative(0);
  CHECK(dx.eval(at) == doctest::Approx(12.0));
  Polynomial dz = p.derivative(2);
  CHECK(dz.eval(at) == doctest::Approx(-2.0));
  CHECK(p.derivative(1).derivative(2).zero());

  Polynomial x = Polynomial::variable(3, 0);
  Polynomial sum = p + x * 2.0;
  CHECK(sum.eval(at) == doctest::Approx(3.0));
  CHECK((p - p).zero());

  Polynomial dup(2);
  dup.add_term(1.0, {1, 0});
  dup.add_term(1.5, {1, 0});
  CHECK(dup.terms().size() == 1);
  CHECK(dup.eval(Vec::Ones(2)) == doctest::Approx(2.5));
}

TEST_CASE("christoffel symbols vanish for constant metrics and stay symmetric") {
  ChartPointModel flat;
  flat.n = 1;
  flat.s = 2;
  flat.metric.assign(4, std::vector<Polynomial>(4, Polynomial(4)));
  for (int i = 0; i < 4; ++i)
    flat.metric[i][i] = Polynomial::constant(4, i == 2 ? -1.0 : 1.0);
  flat.point = Vec::Zero(4);
  for (const Mat& gamma : christoffel(flat)) CHECK(gamma.cwiseAbs().maxCoeff() < 1e-12);

  Vec pt(4);
  pt << 0.0, 0.7, 0.0, 0.0;
  Model r4 = build_r4_model(pt);
  std::vector<Mat> gamma = christoffel(r4.chart_model());
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i)
        CHECK(gamma[k](i, j) == doctest::Approx(gamma[j](i, k)).epsilon(1e-12));
}

TEST_CASE("chart curvature of the flat-phi model matches the constant engine") {
  for (double y : {0.0, 0.7, -1.3}) {
    Vec pt(4);
    pt << 0.3, y, -0.1, 0.2;
    Model m = build_r4_model(pt);
    CHECK(validate_model(m).passed);
    CurvatureTensor chart = coordinate_curvature(m.chart_model());
    CurvatureTensor direct = space_form_curvature(m.point, 0.0);
    INFO("chart point y=", y);
    CHECK(max_diff(chart, direct) < 1e-6);
    CHECK(check_identities_2(chart, m.point).worst() < 1e-6);
  }
}
