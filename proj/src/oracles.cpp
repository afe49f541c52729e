#include "va/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace va {

namespace {

// Deterministic stratified thinning: always keeps, per x-site, the extreme
// subgradients (fan endpoints) and the extreme x sites, then strides.
std::vector<const GraphPoint*> thin_points(const std::vector<GraphPoint>& pts,
                                           std::size_t target) {
  std::vector<const GraphPoint*> keep;
  if (pts.size() <= target) {
    keep.reserve(pts.size());
    for (const auto& p : pts) keep.push_back(&p);
    return keep;
  }
  std::vector<char> kept(pts.size(), 0);
  std::map<std::vector<double>, std::pair<std::size_t, std::size_t>> site_extremes;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<double> key(pts[i].x.data(), pts[i].x.data() + pts[i].x.size());
    auto it = site_extremes.find(key);
    if (it == site_extremes.end()) {
      site_extremes[key] = {i, i};
    } else {
      auto& [lo, hi] = it->second;
      if (pts[i].xstar.norm() < pts[lo].xstar.norm()) lo = i;
      if (pts[i].xstar.norm() > pts[hi].xstar.norm()) hi = i;
    }
  }
  for (const auto& [key, ext] : site_extremes) {
    kept[ext.first] = 1;
    kept[ext.second] = 1;
  }
  kept.front() = 1;
  kept.back() = 1;
  std::size_t base = 0;
  for (char c : kept) base += c;
  std::size_t remaining = target > base ? target - base : 0;
  std::size_t stride = remaining ? std::max<std::size_t>(1, pts.size() / remaining) : pts.size();
  for (std::size_t i = 0; i < pts.size(); i += stride) kept[i] = 1;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (kept[i]) keep.push_back(&pts[i]);
  return keep;
}

// Grid of U (box clipped to the ball) restricted to dom f.
std::vector<Vec> u_grid(const FunctionSpec& f, const Window& w, int per_axis) {
  const int n = static_cast<int>(w.x_center.size());
  int m = std::max(per_axis | 1, 3);
  if (n >= 2) m = std::max(per_axis / 6 | 1, 17);
  if (n >= 3) m = n == 3 ? 13 : 7;
  std::vector<Vec> out;
  std::vector<int> idx(n, 0);
  while (true) {
    Vec x(n);
    for (int d = 0; d < n; ++d)
      x[d] = w.x_center[d] + (idx[d] - (m - 1) / 2) * (2.0 * w.x_radius / (m - 1));
    if ((x - w.x_center).norm() <= w.x_radius && in_domain(f, x)) out.push_back(x);
    int d = 0;
    while (d < n && ++idx[d] == m) idx[d++] = 0;
    if (d == n) break;
  }
  // 1D: make sure breakpoints inside U are probed as well.
  if (n == 1)
    for (double b : breakpoints_1d(f, w.x_center[0] - w.x_radius, w.x_center[0] + w.x_radius))
      if (in_domain(f, vec1(b))) out.push_back(vec1(b));
  return out;
}

}  // namespace

GrowthResult check_quadratic_growth(const FunctionSpec& f, const Vec& xbar,
                                    const Vec& xbarstar, double s, const Window& window,
                                    const Resolution& res) {
  (void)xbar;
  (void)xbarstar;
  GrowthResult r;
  TruncatedGraph g = sample_truncated_graph(f, window, Mode::attentive, res);
  auto pts = thin_points(g.points, 2000);
  std::vector<Vec> xs = u_grid(f, window, res.grid);
  for (const GraphPoint* p : pts) {
    for (const Vec& xp : xs) {
      double fxp = evaluate(f, xp);
      if (!std::isfinite(fxp)) continue;
      double lhs = fxp - p->fval - p->xstar.dot(xp - p->x) -
                   0.5 * s * (xp - p->x).squaredNorm();
      ++r.tuples_tested;
      if (lhs < r.margin) {
        r.margin = lhs;
        r.witness_x = p->x;
        r.witness_xstar = p->xstar;
        r.witness_xprime = xp;
      }
    }
  }
  if (r.tuples_tested == 0) r.margin = 0.0;
  r.pass = r.margin >= -1e-12 * (1.0 + std::abs(s));
  return r;
}

MonotoneResult check_monotone_window(const FunctionSpec& f, const Window& window, double s,
                                     Mode mode, const Resolution& res) {
  MonotoneResult r;
  TruncatedGraph g = sample_truncated_graph(f, window, mode, res);
  auto pts = thin_points(g.points, 1000);  // caps the pair count at 5e5
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      Vec dx = pts[j]->x - pts[i]->x;
      double val = (pts[j]->xstar - pts[i]->xstar).dot(dx) - s * dx.squaredNorm();
      ++r.pairs_tested;
      if (val < r.margin) {
        r.margin = val;
        r.worst_a = *pts[i];
        r.worst_b = *pts[j];
      }
    }
  }
  if (r.pairs_tested == 0) r.margin = 0.0;
  r.pass = r.margin >= -1e-12 * (1.0 + std::abs(s));
  return r;
}

MonotoneResult check_monotone(const FunctionSpec& f, const Vec& xbar, const Vec& xbarstar,
                              double s, double eps, Mode mode, const Resolution& res) {
  if (eps <= 0.0) throw precondition_error("check_monotone needs eps > 0");
  double fbar = evaluate(f, xbar);
  if (!std::isfinite(fbar)) throw precondition_error("anchor outside dom f");
  Window w = Window::around(xbar, xbarstar, eps, eps, fbar + eps);
  return check_monotone_window(f, w, s, mode, res);
}

ProxEstimate estimate_prox_regularity(const FunctionSpec& f, const Vec& xbar,
                                      const Vec& xbarstar, const Window& window,
                                      const Resolution& res) {
  (void)xbar;
  (void)xbarstar;
  ProxEstimate r;
  TruncatedGraph g = sample_truncated_graph(f, window, Mode::attentive, res);
  auto pts = thin_points(g.points, 2000);
  std::vector<Vec> xs = u_grid(f, window, res.grid);
  for (const GraphPoint* p : pts) {
    for (const Vec& xp : xs) {
      double d2 = (xp - p->x).squaredNorm();
      // grid points from different strata can coincide up to rounding; the
      // quotient there is pure cancellation noise
      if (d2 <= 1e-20) continue;
      double fxp = evaluate(f, xp);
      if (!std::isfinite(fxp)) continue;
      double ratio = 2.0 * (p->fval + p->xstar.dot(xp - p->x) - fxp) / d2;
      ++r.tuples_tested;
      if (ratio > r.r_hat) {
        r.r_hat = ratio;
        r.witness_x = p->x;
        r.witness_xstar = p->xstar;
        r.witness_xprime = xp;
      }
    }
  }
  return r;
}

namespace {

// Grid + zoom minimization of f(x) - <t,x> over the ball; returns the best
// point, its value, and a well-separated near-tie when one exists.
struct ArgminResult {
  Vec x;
  double value = kInf;
  bool tie = false;
  Vec tie_x;
};

ArgminResult grid_argmin(const FunctionSpec& f, const Vec& t, const Vec& center, double gamma,
                         const TiltProbeParams& params) {
  const int n = static_cast<int>(center.size());
  int m = params.min_grid;
  if (n >= 3) m = 21;
  auto objective = [&](const Vec& x) { return evaluate(f, x) - t.dot(x); };

  ArgminResult best;
  double cell = 2.0 * gamma / (m - 1);
  Vec x(n);
  auto sweep = [&](auto&& visit) {
    std::vector<int> idx(n, 0);
    while (true) {
      for (int d = 0; d < n; ++d) x[d] = center[d] + (idx[d] - (m - 1) / 2) * cell;
      if ((x - center).norm() <= gamma) {
        double v = objective(x);
        if (std::isfinite(v)) visit(v, x);
      }
      int d = 0;
      while (d < n && ++idx[d] == m) idx[d++] = 0;
      if (d == n) break;
    }
  };
  sweep([&](double v, const Vec& xx) {
    if (v < best.value) {
      best.value = v;
      best.x = xx;
    }
  });
  if (!std::isfinite(best.value)) return best;

  // Second pass for multivaluedness: a near-tie well separated from the best cell.
  double tie_tol = params.tie_rel * (1.0 + std::abs(best.value));
  double sep = params.tie_cells * cell;
  sweep([&](double v, const Vec& xx) {
    if (!best.tie && v <= best.value + tie_tol && (xx - best.x).norm() > sep) {
      best.tie = true;
      best.tie_x = xx;
    }
  });

  // Zoom around the best cell; keeps the ball constraint.
  double r = 2.0 * cell;
  Vec c = best.x;
  const int mm = 17;
  for (int level = 0; level < params.refine_levels; ++level) {
    std::vector<int> ridx(n, 0);
    Vec improved = c;
    double improved_v = best.value;
    while (true) {
      Vec x(n);
      for (int d = 0; d < n; ++d) x[d] = c[d] + (ridx[d] - (mm - 1) / 2) * (2.0 * r / (mm - 1));
      if ((x - center).norm() <= gamma) {
        double v = objective(x);
        if (std::isfinite(v) && v < improved_v) {
          improved_v = v;
          improved = x;
        }
      }
      int d = 0;
      while (d < n && ++ridx[d] == mm) ridx[d++] = 0;
      if (d == n) break;
    }
    c = improved;
    best.value = improved_v;
    r /= 4.0;
  }
  best.x = c;
  return best;
}

}  // namespace

TiltProbeResult tilt_probe(const FunctionSpec& f, const Vec& xbar, const Vec& base_tilt,
                           double gamma, double v_radius, const TiltProbeParams& params) {
  if (gamma <= 0.0 || v_radius <= 0.0) throw precondition_error("tilt_probe needs gamma, v_radius > 0");
  const int n = static_cast<int>(xbar.size());
  TiltProbeResult r;

  const int tg = std::max(params.tilt_grid | 1, 3);
  std::vector<Vec> tilts;
  std::vector<int> idx(n, 0);
  while (true) {
    Vec t(n);
    for (int d = 0; d < n; ++d)
      t[d] = base_tilt[d] + (idx[d] - (tg - 1) / 2) * (2.0 * v_radius / (tg - 1));
    if ((t - base_tilt).norm() <= v_radius) tilts.push_back(t);
    int d = 0;
    while (d < n && ++idx[d] == tg) idx[d++] = 0;
    if (d == n) break;
  }

  for (const Vec& t : tilts) {
    ArgminResult am = grid_argmin(f, t, xbar, gamma, params);
    if (!std::isfinite(am.value)) continue;
    if (am.tie && !r.multivalued_detected) {
      r.multivalued_detected = true;
      r.multivalued_at = t;
    }
    r.samples.emplace_back(t, am.x);
  }

  double tilt_cell = 2.0 * v_radius / (tg - 1);
  Vec jump_a, jump_b;
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    for (std::size_t j = i + 1; j < r.samples.size(); ++j) {
      double dt = (r.samples[i].first - r.samples[j].first).norm();
      if (dt <= 0.0) continue;
      double dm = (r.samples[i].second - r.samples[j].second).norm();
      r.lipschitz = std::max(r.lipschitz, dm / dt);
      if (dt <= 1.5 * tilt_cell && dm > r.max_jump) {
        r.max_jump = dm;
        jump_a = r.samples[i].first;
        jump_b = r.samples[j].first;
      }
    }
  }

  // A genuine jump of M keeps its size when the tilt step shrinks, a steep but
  // Lipschitz selection does not.
  if (r.max_jump > params.jump_fraction * gamma && jump_a.size()) {
    double sub_jump = 0.0;
    Vec prev;
    bool have_prev = false;
    for (int k = 0; k <= params.confirm_subdiv; ++k) {
      Vec t = jump_a + (jump_b - jump_a) * (static_cast<double>(k) / params.confirm_subdiv);
      ArgminResult am = grid_argmin(f, t, xbar, gamma, params);
      if (!std::isfinite(am.value)) continue;
      if (have_prev) sub_jump = std::max(sub_jump, (am.x - prev).norm());
      prev = am.x;
      have_prev = true;
    }
    r.jump_detected = sub_jump > 0.9 * params.jump_fraction * gamma;
  }
  r.not_tilt_stable = r.multivalued_detected || r.jump_detected;
  return r;
}

double AffineMinorant::operator()(const Vec& x) const {
  double best = -kInf;
  for (const GraphPoint& p : pts_)
    best = std::max(best, p.fval + p.xstar.dot(x - p.x));
  return best;
}

MinorantResult build_affine_minorant(const TruncatedGraph& g, const FunctionSpec& f) {
  if (g.points.empty()) throw precondition_error("minorant needs a nonempty graph");
  MinorantResult r{AffineMinorant(g.points), false, false, 0.0, 0.0, Vec()};
  std::vector<Vec> xs = u_grid(f, g.window, g.res.grid);
  for (const Vec& x : xs) {
    double fx = evaluate(f, x);
    if (!std::isfinite(fx)) continue;
    double gap = r.hhat(x) - fx;
    if (gap > r.max_violation) {
      r.max_violation = gap;
      r.worst_x = x;
    }
  }
  for (const GraphPoint& p : g.points)
    r.max_graph_gap = std::max(r.max_graph_gap, std::abs(r.hhat(p.x) - p.fval));
  r.minorant_ok = r.max_violation <= 1e-12;
  r.graph_tight = r.max_graph_gap <= 1e-10;
  return r;
}

VarcoBracket varco_empirical(const FunctionSpec& f, const Vec& xbar, const Vec& xbarstar,
                             double eps, const Resolution& res, double s_lo, double s_hi,
                             double width) {
  if (!(s_lo < s_hi)) throw precondition_error("varco_empirical needs s_lo < s_hi");
  auto passes = [&](double s) {
    return check_monotone(f, xbar, xbarstar, s, eps, Mode::attentive, res).pass;
  };
  VarcoBracket b;
  bool lo_pass = passes(s_lo);
  bool hi_pass = passes(s_hi);
  if (lo_pass && hi_pass) {
    b.s_pass = s_hi;
    b.note = "one-sided: monotone for the whole bracket, varco >= s_hi";
    return b;
  }
  if (!lo_pass && !hi_pass) {
    b.s_fail = s_lo;
    b.note = "one-sided: not monotone on the whole bracket, varco <= s_lo";
    return b;
  }
  double lo = s_lo, hi = s_hi;
  while (hi - lo > width) {
    double mid = 0.5 * (lo + hi);
    if (passes(mid))
      lo = mid;
    else
      hi = mid;
  }
  b.bracketed = true;
  b.s_pass = lo;
  b.s_fail = hi;
  return b;
}

}  // namespace va
