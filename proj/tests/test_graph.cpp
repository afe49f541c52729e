#include <doctest.h>

#include <cmath>
#include <sstream>

#include "va/graph.hpp"

using namespace va;

namespace {

bool has_point(const TruncatedGraph& g, double x, double xstar, double tol = 1e-12) {
  for (const auto& p : g.points)
    if (std::abs(p.x[0] - x) <= tol && std::abs(p.xstar[0] - xstar) <= tol) return true;
  return false;
}

bool any_xstar_near(const TruncatedGraph& g, double xstar, double tol = 1e-9) {
  for (const auto& p : g.points)
    if (std::abs(p.xstar[0] - xstar) <= tol) return true;
  return false;
}

}  // namespace

TEST_CASE("truncated graph of abs: fan plus conditional branches") {
  FunctionSpec f = builtin("abs");
  Window small = Window::around(vec1(0), vec1(0), 0.5, 0.5, 0.25);
  TruncatedGraph g = sample_truncated_graph(f, small, Mode::attentive);
  CHECK(!g.points.empty());
  CHECK(has_point(g, 0.0, 0.5));   // fan endpoints clipped to V
  CHECK(has_point(g, 0.0, -0.5));
  CHECK(has_point(g, 0.0, 0.0));
  CHECK(!any_xstar_near(g, 1.0));  // branch slope 1 > r_V = 0.5
  for (const auto& p : g.points) CHECK(p.fval < 0.25);

  Window wide = Window::around(vec1(0), vec1(0), 0.5, 1.5, 0.25);
  TruncatedGraph gw = sample_truncated_graph(f, wide, Mode::attentive);
  CHECK(any_xstar_near(gw, 1.0));   // now 1 < r_V
  CHECK(any_xstar_near(gw, -1.0));
}

TEST_CASE("truncated graph of the flagship jump drops the high branch attentively") {
  FunctionSpec f = builtin("flagship_jump");
  Window w = Window::around(vec1(0), vec1(0), 0.5, 1.5, 0.25);
  TruncatedGraph att = sample_truncated_graph(f, w, Mode::attentive);
  CHECK(!any_xstar_near(att, -1.0));  // f = 1-x >= 0.5 > rho on the right branch
  CHECK(any_xstar_near(att, 0.0));
  CHECK(has_point(att, 0.0, 1.5));  // fan [0,inf) clipped at r_V

  TruncatedGraph plain = sample_truncated_graph(f, w, Mode::plain);
  CHECK(any_xstar_near(plain, -1.0));  // plain mode keeps it
  bool right_branch_high = false;
  for (const auto& p : plain.points)
    if (p.x[0] > 0 && std::abs(p.xstar[0] + 1.0) < 1e-9 && p.fval > 0.5) right_branch_high = true;
  CHECK(right_branch_high);
}

TEST_CASE("zero function samples the x-grid at level zero") {
  TruncatedGraph g = localization(builtin("f2_zero"), vec1(0), vec1(0), 0.25, Mode::attentive);
  CHECK(g.points.size() >= 200);
  for (const auto& p : g.points) {
    CHECK(p.xstar[0] == 0.0);
    CHECK(p.fval == 0.0);
  }
}

TEST_CASE("localization preconditions") {
  CHECK_THROWS_AS(localization(builtin("f2_zero"), vec1(0), vec1(0.5), 0.25, Mode::attentive),
                  precondition_error);
  CHECK_THROWS_AS(localization(builtin("abs"), vec1(0), vec1(0), -1.0, Mode::attentive),
                  precondition_error);
  CHECK_THROWS_AS(
      localization(builtin("indicator_halfline"), vec1(-1), vec1(0), 0.25, Mode::attentive),
      precondition_error);
}

TEST_CASE("attentive is a subset of plain at identical window and resolution") {
  for (const char* name : {"abs", "flagship_jump", "f1_neg_quartic", "indicator_halfline"}) {
    FunctionSpec f = builtin(name);
    Window w = Window::around(vec1(0), vec1(0), 0.5, 1.5, evaluate1(f, 0) + 0.25);
    TruncatedGraph att = sample_truncated_graph(f, w, Mode::attentive);
    TruncatedGraph pl = sample_truncated_graph(f, w, Mode::plain);
    CHECK(att.points.size() <= pl.points.size());
    for (const auto& p : att.points) {
      bool found = false;
      for (const auto& q : pl.points)
        if (q.x == p.x && q.xstar == p.xstar) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("dyadic refinement produces a superset") {
  FunctionSpec f = builtin("flagship_jump");
  Window w = Window::around(vec1(0), vec1(0), 0.5, 1.5, 0.25);
  Resolution coarse{51, 9};
  TruncatedGraph g0 = sample_truncated_graph(f, w, Mode::attentive, coarse);
  TruncatedGraph g1 = sample_truncated_graph(f, w, Mode::attentive, coarse.refined());
  CHECK(g1.points.size() > g0.points.size());
  for (const auto& p : g0.points) {
    bool found = false;
    for (const auto& q : g1.points)
      if (q.x == p.x && q.xstar == p.xstar) found = true;
    CHECK(found);
  }
}

TEST_CASE("every sample re-verifies against the exact subdifferential") {
  for (const char* name : {"abs", "flagship_jump", "f1_neg_quartic", "quad(2)"}) {
    FunctionSpec f = builtin(name);
    TruncatedGraph g = localization(f, vec1(0), vec1(0), 0.3, Mode::attentive, Resolution{101, 17});
    REQUIRE(!g.points.empty());
    for (const auto& p : g.points) {
      CHECK(std::abs(evaluate(f, p.x) - p.fval) <= 1e-12 * (1 + std::abs(p.fval)));
      CHECK(subdifferential(f, p.x).contains(p.xstar));
    }
  }
}

TEST_CASE("canonical ordering is lexicographic and duplicate free") {
  TruncatedGraph g = localization(builtin("abs"), vec1(0), vec1(0), 0.5, Mode::attentive,
                                  Resolution{51, 9});
  for (std::size_t i = 0; i + 1 < g.points.size(); ++i) {
    const auto& a = g.points[i];
    const auto& b = g.points[i + 1];
    bool less = a.x[0] < b.x[0] || (a.x[0] == b.x[0] && a.xstar[0] < b.xstar[0]);
    CHECK(less);
  }
}

TEST_CASE("orthant graph sampling covers all face strata") {
  FunctionSpec f = builtin("orthant_quad(2,3)");
  Window w = Window::around(vec2(0, 0), vec2(0, 0), 0.4, 0.4, 0.25);
  TruncatedGraph g = sample_truncated_graph(f, w, Mode::attentive, Resolution{101, 9});
  REQUIRE(!g.points.empty());
  bool interior = false, edge1 = false, edge2 = false, vertex_fan = false;
  for (const auto& p : g.points) {
    CHECK(f.polyhedron().contains(p.x));
    CHECK(subdifferential(f, p.x).contains(p.xstar, 1e-7));
    if (p.x[0] > 1e-12 && p.x[1] > 1e-12) interior = true;
    if (p.x[0] > 1e-12 && p.x[1] == 0.0) edge1 = true;
    if (p.x[0] == 0.0 && p.x[1] > 1e-12) edge2 = true;
    if (p.x.norm() == 0.0 && p.xstar.norm() > 1e-12) vertex_fan = true;
  }
  CHECK(interior);
  CHECK(edge1);
  CHECK(edge2);
  CHECK(vertex_fan);
}

TEST_CASE("closedness probe passes attentive samples and flags the plain flagship graph") {
  FunctionSpec f = builtin("flagship_jump");
  Window w = Window::around(vec1(0), vec1(0), 0.5, 1.5, 0.25);
  Resolution res{101, 17};

  ClosednessReport att = closedness_probe(sample_truncated_graph(f, w, Mode::attentive, res), f);
  CHECK(att.pass);
  CHECK(att.membership_ok);

  ClosednessReport plain = closedness_probe(sample_truncated_graph(f, w, Mode::plain, res), f);
  CHECK(!plain.pass);
  REQUIRE(!plain.issues.empty());
  // the right branch accumulates at (0,-1) whose fval limit 1 mismatches f(0) = 0
  bool flagged = false;
  for (const auto& issue : plain.issues) {
    if (std::abs(issue.limit_x[0]) < 0.02 && std::abs(issue.limit_xstar[0] + 1.0) < 1e-6 &&
        std::abs(issue.fval_along - 1.0) < 0.02 && std::abs(issue.f_at_limit) < 1e-12)
      flagged = true;
  }
  CHECK(flagged);
  CHECK(plain.max_deviation > 0.9);

  ClosednessReport abs_probe = closedness_probe(
      sample_truncated_graph(builtin("abs"), w, Mode::attentive, res), builtin("abs"));
  CHECK(abs_probe.pass);
}

TEST_CASE("tabular export") {
  TruncatedGraph g = localization(builtin("abs"), vec1(0), vec1(0), 0.5, Mode::attentive,
                                  Resolution{21, 5});
  std::ostringstream os;
  export_graph(g, os);
  std::string text = os.str();
  CHECK(text.find("# x1 xstar1 f") == 0);
  std::size_t lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == g.points.size() + 1);
}
