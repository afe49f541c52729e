#include <doctest.h>

#include <cmath>
#include <vector>

#include "va/subspace.hpp"

using namespace va;

namespace {

Subspace2n span1(double u, double v) {
  Mat b(2, 1);
  b << u, v;
  return Subspace2n::from_span(b);
}

Subspace2n graph_of(const Mat& B) {
  const int n = static_cast<int>(B.rows());
  Mat cols(2 * n, n);
  cols.topRows(n) = Mat::Identity(n, n);
  cols.bottomRows(n) = B;
  return Subspace2n::from_span(cols);
}

PWPair pair1(double p, double w) {
  Mat P(1, 1), W(1, 1);
  P << p;
  W << w;
  return PWPair(P, W);
}

}  // namespace

TEST_CASE("projection matrices") {
  Mat p1 = span1(1, 0).projector();
  CHECK(p1(0, 0) == doctest::Approx(1.0));
  CHECK(p1(0, 1) == doctest::Approx(0.0));
  CHECK(p1(1, 1) == doctest::Approx(0.0));

  Mat p2 = span1(1, 1).projector();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(p2(i, j) == doctest::Approx(0.5));

  Mat p3 = span1(0, 1).projector();
  CHECK(p3(0, 0) == doctest::Approx(0.0));
  CHECK(p3(1, 1) == doctest::Approx(1.0));

  // idempotent and symmetric
  CHECK((p2 * p2 - p2).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((p2 - p2.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("d_Z distances") {
  Subspace2n horizontal = span1(1, 0);
  Subspace2n vertical = span1(0, 1);
  Subspace2n diagonal = span1(1, 1);
  CHECK(dz_distance(horizontal, horizontal) == doctest::Approx(0.0));
  CHECK(dz_distance(horizontal, vertical) == doctest::Approx(1.0));
  CHECK(dz_distance(diagonal, horizontal) == doctest::Approx(1.0 / std::sqrt(2.0)));
  // basis invariance
  Mat b(2, 1);
  b << -3.0, -3.0;
  CHECK(dz_distance(Subspace2n::from_span(b), diagonal) == doctest::Approx(0.0));
}

TEST_CASE("adjoint subspaces") {
  // scalar graphs are self-adjoint
  for (double a : {-2.0, 0.0, 0.7}) {
    Subspace2n l = span1(1, a);
    CHECK(dz_distance(adjoint(l), l) <= 1e-12);
  }
  // vertical space is self-adjoint
  CHECK(dz_distance(adjoint(span1(0, 1)), span1(0, 1)) <= 1e-12);

  // graph of a nonsymmetric B maps to the graph of B^T
  Mat B(2, 2);
  B << 0, 1, 0, 0;
  Subspace2n l = graph_of(B);
  Subspace2n lstar = adjoint(l);
  CHECK(dz_distance(lstar, graph_of(B.transpose())) <= 1e-12);
  CHECK(dz_distance(l, lstar) > 0.1);

  // involution and isometry
  CHECK(dz_distance(adjoint(lstar), l) <= 1e-12);
  Subspace2n m = graph_of(Mat::Identity(2, 2));
  CHECK(dz_distance(l, m) == doctest::Approx(dz_distance(lstar, adjoint(m))));
}

TEST_CASE("pw_from_subspace recovers canonical pairs") {
  PWPair vertical = pw_from_subspace(span1(0, 1));
  CHECK(vertical.P(0, 0) == doctest::Approx(0.0));
  CHECK(vertical.W(0, 0) == doctest::Approx(1.0));

  PWPair horizontal = pw_from_subspace(span1(1, 0));
  CHECK(horizontal.P(0, 0) == doctest::Approx(1.0));
  CHECK(horizontal.W(0, 0) == doctest::Approx(0.0));

  Mat B(2, 2);
  B << 0, 1, 0, 0;
  CHECK_THROWS_AS(pw_from_subspace(graph_of(B)), not_self_adjoint_error);
}

TEST_CASE("subspace_from_pw matches rge(P,W)") {
  CHECK(dz_distance(subspace_from_pw(pair1(1, -2)), span1(1, -2)) <= 1e-12);
  CHECK(dz_distance(subspace_from_pw(pair1(0, 1)), span1(0, 1)) <= 1e-12);

  Mat P(2, 2), W(2, 2);
  P << 1, 0, 0, 0;
  W << 2, 0, 0, 1;
  Subspace2n l = subspace_from_pw(PWPair(P, W));
  Mat expect(4, 2);
  expect << 1, 0, 0, 0, 2, 0, 0, 1;  // span{(1,0,2,0), (0,0,0,1)}
  CHECK(dz_distance(l, Subspace2n::from_span(expect)) <= 1e-12);
}

TEST_CASE("axiom checks") {
  CHECK(check_pw_axioms(pair1(0, 1).P, pair1(0, 1).W).pass);
  CHECK(check_pw_axioms(pair1(1, 0.5).P, pair1(1, 0.5).W).pass);
  Mat P(1, 1), W(1, 1);
  P << 0.5;
  W << 1.0;
  PWAxiomReport rep = check_pw_axioms(P, W);
  CHECK(!rep.pass);
  CHECK(rep.idempotency > 0.1);

  Mat P2(2, 2), W2(2, 2);
  P2 << 1, 0, 0, 0;
  W2 << 2, 0, 0, 1;
  CHECK(check_pw_axioms(P2, W2).pass);
  // W(I-P) != I-P
  W2(1, 1) = 3.0;
  W2(0, 0) = 2.0;
  Mat Wbad = W2;
  Wbad(1, 1) = 0.0;
  CHECK(!check_pw_axioms(P2, Wbad).pass);
}

TEST_CASE("roundtrip and self-adjointness of axiom pairs") {
  std::vector<PWPair> pairs;
  pairs.push_back(pair1(1, 2.5));
  pairs.push_back(pair1(0, 1));
  pairs.push_back(pair1(1, 0));
  Mat P(2, 2), W(2, 2);
  P << 1, 0, 0, 0;
  W << 2, 0, 0, 1;
  pairs.emplace_back(P, W);
  Mat Ps(2, 2), Ws(2, 2);
  Ps << 0.5, 0.5, 0.5, 0.5;
  Ws << 1.5, 0.5, 0.5, 1.5;  // W = 2P + (I-P), satisfies W(I-P) = I-P
  pairs.emplace_back(Ps, Ws);

  for (const PWPair& pw : pairs) {
    REQUIRE(check_pw_axioms(pw.P, pw.W).pass);
    Subspace2n l = subspace_from_pw(pw);
    CHECK(dz_distance(adjoint(l), l) <= 1e-10);  // L = L*
    PWPair back = pw_from_subspace(l);
    CHECK((back.P - pw.P).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((back.W - pw.W).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("d_Z is a metric on a generated set") {
  std::vector<Subspace2n> ls;
  for (double t : {-3.0, -1.0, -0.2, 0.0, 0.5, 1.0, 4.0}) ls.push_back(span1(1, t));
  ls.push_back(span1(0, 1));
  for (const auto& a : ls) {
    CHECK(dz_distance(a, a) <= 1e-12);
    for (const auto& b : ls) {
      double dab = dz_distance(a, b);
      CHECK(dab == doctest::Approx(dz_distance(b, a)));
      CHECK(dab >= 0.0);
      for (const auto& c : ls)
        CHECK(dab <= dz_distance(a, c) + dz_distance(c, b) + 1e-12);
    }
  }
}
