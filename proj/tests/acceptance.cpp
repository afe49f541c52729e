// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "va/calculus.hpp"
#include "va/catalog.hpp"
#include "va/criteria.hpp"
#include "va/graph.hpp"
#include "va/oracles.hpp"
#include "va/scderiv.hpp"
#include "va/subspace.hpp"

using namespace va;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& what, bool pass, const std::string& detail = "") {
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", number, what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Anchor {
  FunctionSpec f;
  Vec x;
  Vec xs;
};

std::vector<Anchor> catalog_anchors() {
  std::vector<Anchor> a;
  a.push_back({builtin("f1_neg_quartic"), vec1(0), vec1(0)});
  a.push_back({builtin("f2_zero"), vec1(0), vec1(0)});
  a.push_back({builtin("abs"), vec1(0), vec1(0)});
  a.push_back({builtin("indicator_halfline"), vec1(0), vec1(0)});
  a.push_back({builtin("flagship_jump"), vec1(0), vec1(0)});
  a.push_back({builtin("quad(0.5)"), vec1(0), vec1(0)});
  a.push_back({builtin("quad(1)"), vec1(0), vec1(0)});
  a.push_back({builtin("quad(2)"), vec1(0), vec1(0)});
  a.push_back({builtin("orthant_quad(2,3)"), vec2(0, 0), vec2(0, 0)});
  return a;
}

Mat identity_shift(int n, double t) { return t * Mat::Identity(n, n); }

// Bisection of the attentive monotonicity level over an explicit window.
double monotone_level(const FunctionSpec& f, const Window& w, const Resolution& res, double lo,
                      double hi) {
  auto passes = [&](double s) { return check_monotone_window(f, w, s, Mode::attentive, res).pass; };
  if (!passes(lo) || passes(hi)) return kInf;  // not bracketed
  while (hi - lo > 1e-4) {
    double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

int main() {
  const Resolution res{201, 33};

  // 1. f1 = -x^4 and f2 = 0: equal exact bounds, opposite boundary behavior.
  {
    auto t0 = std::chrono::steady_clock::now();
    FunctionSpec f1 = builtin("f1_neg_quartic");
    VarcoResult v1 = varco_bound(sc_derivative(f1, vec1(0), vec1(0)));
    Window w1 = Window::around(vec1(0), vec1(0), 0.25, 0.25, 0.25);
    GrowthResult g1 = check_quadratic_growth(f1, vec1(0), vec1(0), 0.0, w1, res);
    MonotoneResult m1 = check_monotone(f1, vec1(0), vec1(0), 0.0, 0.25, Mode::attentive, res);
    double el1 = seconds_since(t0);

    auto t1 = std::chrono::steady_clock::now();
    FunctionSpec f2 = builtin("f2_zero");
    VarcoResult v2 = varco_bound(sc_derivative(f2, vec1(0), vec1(0)));
    GrowthResult g2 = check_quadratic_growth(f2, vec1(0), vec1(0), 0.0, w1, res);
    MonotoneResult m2 = check_monotone(f2, vec1(0), vec1(0), 0.0, 0.25, Mode::attentive, res);
    double el2 = seconds_since(t1);

    bool pass = v1.value == 0.0 && v2.value == 0.0 && !g1.pass && !m1.pass && g2.pass &&
                m2.pass && el1 < 5.0 && el2 < 5.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "varco(f1)=%g varco(f2)=%g, f1 growth/monotone fail, f2 pass (%.2fs, %.2fs)",
                  v1.value, v2.value, el1, el2);
    criterion(1, "exact bounds and boundary behavior of f1 = -x^4 and f2 = 0", pass, buf);
  }

  // 2. (P,W) axioms and self-adjointness for every pair produced anywhere.
  {
    bool pass = true;
    double worst_axiom = 0.0, worst_adj = 0.0;
    auto inspect = [&](const PWSet& set) {
      for (const PWPair& p : set.pairs) {
        PWAxiomReport ax = check_pw_axioms(p.P, p.W, 1e-10);
        worst_axiom = std::max(worst_axiom, ax.worst);
        if (!ax.pass) pass = false;
        Subspace2n l = subspace_from_pw(p);
        double gap = dz_distance(l, adjoint(l));
        worst_adj = std::max(worst_adj, gap);
        if (gap > 1e-10) pass = false;
      }
    };
    for (const Anchor& a : catalog_anchors()) {
      PWSet closed = sc_derivative(a.f, a.x, a.xs);
      inspect(closed);
      for (double t : {-1.0, -0.3, 0.5, 2.0})
        inspect(transform_pw(closed, identity_shift(a.f.dim(), t)));
      inspect(sc_derivative_numeric(a.f, a.x, a.xs, 0.25, Mode::attentive));
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "worst axiom residual %.2e, worst d_Z(L,L*) %.2e",
                  worst_axiom, worst_adj);
    criterion(2, "PW axiom suite over all produced pairs", pass, buf);
  }

  // 3. the fundamental equivalence at desk scale: growth, attentive
  //    monotonicity and the pointbased PSD test agree off the boundary.
  {
    bool pass = true;
    std::string detail;
    for (const Anchor& a : catalog_anchors()) {
      PWSet set = sc_derivative(a.f, a.x, a.xs);
      double v = varco_bound(set).value;
      if (!std::isfinite(v)) continue;
      double r = a.f.dim() == 1 ? 0.05 : 0.25;  // small windows tame curvature
      Window w = Window::around(a.x, a.xs, r, r, evaluate(a.f, a.x) + r);
      for (double ds : {-0.5, -0.1, 0.1, 0.5}) {
        double s = v + ds;
        bool pg = check_quadratic_growth(a.f, a.x, a.xs, s, w, res).pass;
        bool pm = check_monotone_window(a.f, w, s, Mode::attentive, res).pass;
        bool pp = test_pointbased(set, s).pass;
        if (pg != pm || pm != pp) {
          pass = false;
          detail += a.f.name() + " s=" + std::to_string(s) + " ";
        }
      }
    }
    criterion(3, "theorem-equivalence triangle on all finite-varco anchors", pass,
              pass ? "zero disagreements" : detail);
  }

  // 4. attentive/plain separation for the flagship jump.
  {
    auto t0 = std::chrono::steady_clock::now();
    FunctionSpec f = builtin("flagship_jump");
    Window w = Window::around(vec1(0), vec1(0), 0.5, 1.5, 0.25);
    MonotoneResult att = check_monotone_window(f, w, 0.0, Mode::attentive, res);
    MonotoneResult plain = check_monotone_window(f, w, 0.0, Mode::plain, res);
    bool pair_ok = !plain.pass &&
                   (std::abs(plain.worst_a.xstar[0] + 1.0) < 1e-9 ||
                    std::abs(plain.worst_b.xstar[0] + 1.0) < 1e-9);

    PWSet set = sc_derivative(f, vec1(0), vec1(0));
    Mat h_line(2, 1), v_line(2, 1);
    h_line << 1, 0;
    v_line << 0, 1;
    bool sc_ok = set.pairs.size() == 2;
    for (const Subspace2n& l : set.subspaces())
      sc_ok = sc_ok && (dz_distance(l, Subspace2n::from_span(h_line)) <= 1e-10 ||
                        dz_distance(l, Subspace2n::from_span(v_line)) <= 1e-10);

    SubgradientSet sd = subdifferential1(f, 0.0);
    bool sd_ok = sd.has_interval && sd.lo == 0.0 && sd.hi == kInf;
    bool varco_ok = varco_bound(set).value == 0.0;
    bool tilt_ok = !tilt_bound(set).tilt_stable;
    bool pb_ok = test_pointbased(set, 0.0).pass;
    double el = seconds_since(t0);
    bool pass = att.pass && pair_ok && sc_ok && sd_ok && varco_ok && tilt_ok && pb_ok && el < 5.0;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "attentive pass, plain violated by ((%.3f,%.3f),(%.3f,%.3f)), "
                  "sc={(1,0),(0,1)} (%.2fs)",
                  plain.worst_a.x[0], plain.worst_a.xstar[0], plain.worst_b.x[0],
                  plain.worst_b.xstar[0], el);
    criterion(4, "flagship jump: attentive vs plain separation and hand-derived values", pass,
              buf);
  }

  // 5. exact-bound reciprocity and the empirical Lipschitz estimate.
  {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    TiltProbeParams params;
    params.min_grid = 401;
    for (double a : {0.5, 1.0, 2.0}) {
      FunctionSpec f = builtin("quad(" + std::to_string(a) + ")");
      BoundReport b = bound_report(sc_derivative(f, vec1(0), vec1(0)));
      if (!b.tilt.tilt_stable || std::abs(b.tilt.value - 1.0 / b.varco.value) > 1e-10)
        pass = false;
      TiltProbeResult tp = tilt_probe(f, vec1(0), vec1(0), 0.5, 0.25, params);
      if (std::abs(tp.lipschitz - b.tilt.value) > 0.05 * b.tilt.value) {
        pass = false;
        detail += f.name() + " lip=" + std::to_string(tp.lipschitz) + " ";
      }
    }
    FunctionSpec oq = builtin("orthant_quad(2,3)");
    BoundReport ob = bound_report(sc_derivative(oq, vec2(0, 0), vec2(0, 0)));
    if (!(std::abs(ob.varco.value - 2.0) <= 1e-12 && ob.tilt.tilt_stable &&
          std::abs(ob.tilt.value - 0.5) <= 1e-12 &&
          std::abs(ob.tilt.value - 1.0 / ob.varco.value) <= 1e-10))
      pass = false;
    TiltProbeResult otp = tilt_probe(oq, vec2(0, 0), vec2(0, 0), 0.5, 0.25, params);
    if (std::abs(otp.lipschitz - 0.5) > 0.05 * 0.5) {
      pass = false;
      detail += "orthant lip=" + std::to_string(otp.lipschitz);
    }
    double el = seconds_since(t0);
    pass = pass && el < 60.0;
    char buf[120];
    std::snprintf(buf, sizeof buf, "orthant varco=%g tilt=%g, probes within 5%% (%.1fs)",
                  ob.varco.value, ob.tilt.value, el);
    criterion(5, "tilt = 1/varco and tilt_probe within 5% at resolution 401", pass,
              detail.empty() ? buf : (std::string(buf) + " " + detail).c_str());
  }

  // 6. not-tilt-stable detection along both routes.
  {
    TiltProbeParams params;
    params.min_grid = 401;
    FunctionSpec f1 = builtin("f1_neg_quartic");
    TiltResult t1 = tilt_bound(sc_derivative(f1, vec1(0), vec1(0)));
    TiltProbeResult p1 = tilt_probe(f1, vec1(0), vec1(0), 0.5, 0.25, params);
    FunctionSpec ind = builtin("indicator_halfline");
    TiltResult t2 = tilt_bound(sc_derivative(ind, vec1(0), vec1(0)));
    TiltProbeResult p2 = tilt_probe(ind, vec1(0), vec1(0), 1.0, 0.25, params);
    bool pass = !t1.tilt_stable && p1.not_tilt_stable && !t2.tilt_stable && p2.not_tilt_stable;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "f1: %s + %s; indicator: %s + %s", t1.reason.c_str(),
                  p1.multivalued_detected ? "multivalued" : "jump", t2.reason.c_str(),
                  p2.multivalued_detected ? "multivalued" : "jump");
    criterion(6, "NotTiltStable detected by bound and probe for f1 and the indicator", pass, buf);
  }

  // 7. sum rule and shift equivariance.
  {
    bool pass = true;
    std::string detail;
    for (const Anchor& a : catalog_anchors()) {
      PWSet base = sc_derivative(a.f, a.x, a.xs);
      double v = varco_bound(base).value;
      for (double t : {-1.0, -0.3, 0.5, 2.0}) {
        QuadraticPerturbation q = QuadraticPerturbation::tilt_curvature(a.x, Vec::Zero(a.f.dim()), t);
        FunctionSpec h = add_quadratic(a.f, q);
        PWSet lhs = sc_derivative(h, a.x, a.xs + q.gradient(a.x));
        PWSet rhs = transform_pw(base, q.H);
        if (dz_hausdorff(lhs, rhs) > 1e-10) {
          pass = false;
          detail += a.f.name() + " sum-rule ";
        }
        double vs = varco_bound(rhs).value;
        bool shift_ok = std::isfinite(v) ? std::abs(vs - (v + t)) <= 1e-10 : vs == v;
        if (!shift_ok) {
          pass = false;
          detail += a.f.name() + " varco-shift ";
        }
      }
    }
    // empirical brackets on corresponding (wide x*) windows
    for (const Anchor& a : catalog_anchors()) {
      Window w = Window::around(a.x, a.xs, 0.05, 4.2, evaluate(a.f, a.x) + 0.05);
      double base = monotone_level(a.f, w, res, -6.0, 6.0);
      if (!std::isfinite(base)) continue;  // one-sided (abs)
      for (double t : {-0.3, 2.0}) {
        QuadraticPerturbation q = QuadraticPerturbation::tilt_curvature(a.x, Vec::Zero(a.f.dim()), t);
        FunctionSpec h = add_quadratic(a.f, q);
        Window wh = Window::around(a.x, a.xs + q.gradient(a.x), 0.05, 4.2,
                                   evaluate(h, a.x) + 0.05);
        double shifted = monotone_level(h, wh, res, -6.0 + t, 6.0 + t);
        if (std::abs((shifted - t) - base) > 1e-3) {
          pass = false;
          detail += a.f.name() + " bracket(t=" + std::to_string(t) + ") ";
        }
      }
    }
    criterion(7, "sum rule, varco shift by exactly t, empirical brackets follow", pass,
              pass ? "t in {-1,-0.3,0.5,2} on all catalog anchors" : detail);
  }

  // 8. numeric SC derivatives against the closed form, and eps-independence.
  {
    bool pass = true;
    std::string detail;
    std::vector<Anchor> anchors = catalog_anchors();
    anchors.push_back({builtin("abs"), vec1(0), vec1(1)});
    for (const Anchor& a : anchors) {
      PWSet closed = sc_derivative(a.f, a.x, a.xs);
      PWSet numeric = sc_derivative_numeric(a.f, a.x, a.xs, 0.25, Mode::attentive);
      double hd = dz_hausdorff(closed, numeric);
      PWSet numeric_half = sc_derivative_numeric(a.f, a.x, a.xs, 0.125, Mode::attentive);
      double he = dz_hausdorff(numeric, numeric_half);
      if (hd > 1e-6 || he > 1e-8) {
        pass = false;
        detail += a.f.name() + " hd=" + std::to_string(hd) + " he=" + std::to_string(he) + " ";
      }
    }
    criterion(8, "numeric vs closed-form SC derivatives (<=1e-6), eps-independent (<=1e-8)",
              pass, pass ? "all catalog anchors" : detail);
  }

  // 9. 1D coderivative consistency.
  {
    bool pass = true;
    std::string detail;
    std::vector<Anchor> anchors{{builtin("abs"), vec1(0), vec1(0)},
                                {builtin("flagship_jump"), vec1(0), vec1(0)},
                                {builtin("quad(0.5)"), vec1(0), vec1(0)},
                                {builtin("quad(1)"), vec1(0), vec1(0)},
                                {builtin("quad(2)"), vec1(0), vec1(0)}};
    for (const Anchor& a : anchors) {
      PWSet set = sc_derivative(a.f, a.x, a.xs);
      ConeDescription1D cone = attentive_coderivative_1d(a.f, a.x[0], a.xs[0], 0.25);
      for (const Subspace2n& l : set.subspaces()) {
        Vec b = l.basis().col(0);
        if (!cone.coderivative_contains(b[0], b[1]) ||
            !cone.coderivative_contains(-b[0], -b[1])) {
          pass = false;
          detail += a.f.name() + " inclusion ";
        }
      }
      TiltResult tb = tilt_bound(set);
      TiltRayleighResult tr = tilt_rayleigh_1d(cone);
      if (tb.tilt_stable != tr.tilt_stable) {
        pass = false;
        detail += a.f.name() + " stability ";
      } else if (tb.tilt_stable && std::abs(tb.value - tr.value) > 1e-10 * (1 + tb.value)) {
        pass = false;
        detail += a.f.name() + " value ";
      }
    }
    criterion(9, "rge(P,W) inside gph D*_f and both tilt routes equal in 1D", pass,
              pass ? "abs, flagship, quad(a)" : detail);
  }

  // 10. the affine minorant from sampled graphs.
  {
    bool pass = true;
    std::string detail;
    struct MCase {
      Anchor a;
      double rv;
      bool expect_ok;
    };
    std::vector<MCase> cases{{{builtin("f2_zero"), vec1(0), vec1(0)}, 0.25, true},
                             {{builtin("abs"), vec1(0), vec1(0)}, 1.5, true},
                             {{builtin("orthant_quad(2,3)"), vec2(0, 0), vec2(0, 0)}, 0.5, true},
                             {{builtin("f1_neg_quartic"), vec1(0), vec1(0)}, 0.25, false}};
    for (const MCase& c : cases) {
      Window w = Window::around(c.a.x, c.a.xs, 0.25, c.rv, evaluate(c.a.f, c.a.x) + 0.25);
      TruncatedGraph g = sample_truncated_graph(c.a.f, w, Mode::attentive, res);
      MinorantResult m = build_affine_minorant(g, c.a.f);
      if (c.expect_ok) {
        if (!(m.minorant_ok && m.max_violation <= 1e-12 && m.graph_tight)) {
          pass = false;
          detail += c.a.f.name() + " ";
        }
      } else {
        if (m.minorant_ok || m.max_violation <= 0.0 || m.worst_x.size() == 0) {
          pass = false;
          detail += c.a.f.name() + " ";
        }
      }
    }
    criterion(10, "affine minorant: holds and is tight where certified, fails for f1", pass,
              pass ? "f2, abs, orthant ok; f1 violation reported" : detail);
  }

  if (g_failures) {
    std::printf("ACCEPTANCE: %d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("ACCEPTANCE: all 10 criteria passed\n");
  return 0;
}
