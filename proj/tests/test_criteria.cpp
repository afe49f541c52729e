#include <doctest.h>

#include <cmath>

#include "va/criteria.hpp"

using namespace va;

namespace {

PWSet set_of(std::vector<std::pair<double, double>> scalars) {
  PWSet s;
  s.anchor_x = vec1(0);
  s.anchor_xstar = vec1(0);
  for (auto [p, w] : scalars) {
    Mat P(1, 1), W(1, 1);
    P << p;
    W << w;
    s.pairs.emplace_back(P, W);
  }
  return s;
}

}  // namespace

TEST_CASE("varco_bound on scalar pair sets") {
  CHECK(varco_bound(set_of({{1, 2}})).value == doctest::Approx(2.0));
  VarcoResult vertical = varco_bound(set_of({{0, 1}}));
  CHECK(vertical.value == kInf);
  CHECK(vertical.convention_inf_used);
  VarcoResult ind = varco_bound(set_of({{1, 0}, {0, 1}}));
  CHECK(ind.value == doctest::Approx(0.0));
  CHECK(ind.achieving_pair == 0);
  CHECK(ind.per_pair.size() == 2);
  CHECK(ind.per_pair[1] == kInf);
}

TEST_CASE("varco_bound on the orthant face set") {
  PWSet set = sc_derivative(builtin("orthant_quad(2,3)"), vec2(0, 0), vec2(0, 0));
  REQUIRE(set.pairs.size() == 4);
  VarcoResult v = varco_bound(set);
  CHECK(v.value == doctest::Approx(2.0));
  // per-pair minima over faces: 2, 2, 3, inf in some order
  int finite = 0, infinite = 0;
  for (double pv : v.per_pair) (std::isfinite(pv) ? finite : infinite)++;
  CHECK(finite == 3);
  CHECK(infinite == 1);
}

TEST_CASE("tilt_bound verdicts") {
  TiltResult q = tilt_bound(set_of({{1, 2}}));
  CHECK(q.tilt_stable);
  CHECK(q.value == doctest::Approx(0.5));

  TiltResult ind = tilt_bound(set_of({{1, 0}, {0, 1}}));
  CHECK(!ind.tilt_stable);
  CHECK(ind.offending_pair == 0);
  CHECK(ind.reason == "singular W");

  TiltResult neg = tilt_bound(set_of({{1, -1}}));
  CHECK(!neg.tilt_stable);
  CHECK(neg.reason == "PW^{-1} not positive semidefinite");

  TiltResult vert = tilt_bound(set_of({{0, 1}}));
  CHECK(vert.tilt_stable);
  CHECK(vert.value == doctest::Approx(0.0));

  PWSet orthant = sc_derivative(builtin("orthant_quad(2,3)"), vec2(0, 0), vec2(0, 0));
  TiltResult ot = tilt_bound(orthant);
  CHECK(ot.tilt_stable);
  CHECK(ot.value == doctest::Approx(0.5));
}

TEST_CASE("pointbased PSD test with boundary flag") {
  PointbasedVerdict v1 = test_pointbased(set_of({{1, 2}}), 2.0);
  CHECK(v1.pass);
  CHECK(v1.boundary);

  PointbasedVerdict v2 = test_pointbased(set_of({{1, 0}, {0, 1}}), 0.1);
  CHECK(!v2.pass);
  CHECK(v2.failing_pair == 0);

  PointbasedVerdict v3 = test_pointbased(set_of({{1, 0}, {0, 1}}), 0.0);
  CHECK(v3.pass);
  CHECK(v3.boundary);

  PointbasedVerdict v4 = test_pointbased(set_of({{1, 2}}), 1.0);
  CHECK(v4.pass);
  CHECK(!v4.boundary);
}

TEST_CASE("pointbased threshold is monotone in s") {
  for (auto scalars : {std::vector<std::pair<double, double>>{{1, 2}},
                       std::vector<std::pair<double, double>>{{1, 0}, {0, 1}}}) {
    PWSet set = set_of(scalars);
    double v = varco_bound(set).value;
    REQUIRE(std::isfinite(v));
    for (double ds : {0.05, 0.3, 1.0, 2.5}) {
      CHECK(test_pointbased(set, v - ds).pass);
      CHECK(!test_pointbased(set, v + ds).pass);
    }
  }
}

TEST_CASE("axiom-violating pairs are rejected") {
  Mat P(1, 1), W(1, 1);
  P << 0.5;
  W << 1.0;
  PWSet bad;
  bad.anchor_x = vec1(0);
  bad.anchor_xstar = vec1(0);
  bad.pairs.emplace_back(P, W);
  CHECK_THROWS_AS(varco_bound(bad), error);
  CHECK_THROWS_AS(tilt_bound(bad), error);
  CHECK_THROWS_AS(test_pointbased(bad, 0.0), error);
}

TEST_CASE("neighborhood PSD test over sampled windows") {
  Window w0 = Window::around(vec1(0), vec1(0), 0.25, 0.25, 0.25);
  NeighborhoodVerdict zero = test_neighborhood(builtin("f2_zero"), vec1(0), vec1(0), 0.0, w0,
                                               Resolution{101, 17});
  CHECK(zero.pass);
  CHECK(zero.tested_points > 50);

  NeighborhoodVerdict f1 = test_neighborhood(builtin("f1_neg_quartic"), vec1(0), vec1(0), 0.0,
                                             w0, Resolution{101, 17});
  CHECK(!f1.pass);
  REQUIRE(f1.has_witness);
  CHECK(std::abs(f1.witness_x[0]) > 1e-9);  // fails at every x != 0
  CHECK(f1.min_eig == doctest::Approx(-12.0 * 0.25 * 0.25).epsilon(0.05));

  NeighborhoodVerdict a5 = test_neighborhood(builtin("abs"), vec1(0), vec1(0), 5.0, w0,
                                             Resolution{101, 17});
  CHECK(a5.pass);  // only the vertical fan is inside the attentive window
}

TEST_CASE("1D rayleigh criteria on exact cones") {
  double a = 2.0;
  ConeDescription1D qc = attentive_coderivative_1d(builtin("quad(2)"), 0, 0, 0.25);
  CHECK(coderivative_rayleigh_1d(qc, a).pass);
  CHECK(coderivative_rayleigh_1d(qc, a + 0.01).pass == false);
  TiltRayleighResult qt = tilt_rayleigh_1d(qc);
  CHECK(qt.tilt_stable);
  CHECK(qt.value == doctest::Approx(1.0 / a));

  ConeDescription1D ac = attentive_coderivative_1d(builtin("abs"), 0, 0, 0.25);
  CHECK(coderivative_rayleigh_1d(ac, 100.0).pass);  // only z = 0 in the cone
  TiltRayleighResult at = tilt_rayleigh_1d(ac);
  CHECK(at.tilt_stable);
  CHECK(at.value == doctest::Approx(0.0));
  CHECK(at.degenerate_zero);

  ConeDescription1D fc = attentive_coderivative_1d(builtin("flagship_jump"), 0, 0, 0.25);
  CHECK(coderivative_rayleigh_1d(fc, 0.0).pass);
  CHECK(!coderivative_rayleigh_1d(fc, 0.1).pass);  // the (z,0), z>0 piece fails
  TiltRayleighResult ft = tilt_rayleigh_1d(fc);
  CHECK(!ft.tilt_stable);
}

TEST_CASE("reciprocity of exact bounds") {
  for (double a : {0.5, 1.0, 2.0}) {
    PWSet set = sc_derivative(builtin("quad(" + std::to_string(a) + ")"), vec1(0), vec1(0));
    BoundReport b = bound_report(set);
    REQUIRE(b.reciprocity_applicable);
    CHECK(b.reciprocity_ok);
    CHECK(std::abs(b.tilt.value - 1.0 / b.varco.value) <= 1e-10);
  }
  PWSet orthant = sc_derivative(builtin("orthant_quad(2,3)"), vec2(0, 0), vec2(0, 0));
  BoundReport b = bound_report(orthant);
  REQUIRE(b.reciprocity_applicable);
  CHECK(b.reciprocity_ok);
  CHECK(b.varco.value == doctest::Approx(2.0));
  CHECK(b.tilt.value == doctest::Approx(0.5));
}

TEST_CASE("both tilt routes agree in 1D") {
  for (const char* name : {"abs", "quad(0.5)", "quad(2)"}) {
    FunctionSpec f = builtin(name);
    TiltResult tb = tilt_bound(sc_derivative(f, vec1(0), vec1(0)));
    TiltRayleighResult tr = tilt_rayleigh_1d(attentive_coderivative_1d(f, 0, 0, 0.25));
    REQUIRE(tb.tilt_stable == tr.tilt_stable);
    if (tb.tilt_stable) CHECK(std::abs(tb.value - tr.value) <= 1e-10 * (1 + tb.value));
  }
  // unstable cases agree as well
  for (const char* name : {"flagship_jump", "f1_neg_quartic", "indicator_halfline"}) {
    FunctionSpec f = builtin(name);
    TiltResult tb = tilt_bound(sc_derivative(f, vec1(0), vec1(0)));
    TiltRayleighResult tr = tilt_rayleigh_1d(attentive_coderivative_1d(f, 0, 0, 0.25));
    INFO(name);
    CHECK(tb.tilt_stable == tr.tilt_stable);
    CHECK(!tb.tilt_stable);
  }
}
