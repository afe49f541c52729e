#include "va/graph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace va {

Window Window::around(const Vec& x, const Vec& xstar, double rx, double rv, double rho) {
  if (rx <= 0.0 || rv <= 0.0) throw error("window radii must be positive");
  Window w;
  w.x_center = x;
  w.xstar_center = xstar;
  w.x_radius = rx;
  w.xstar_radius = rv;
  w.rho = rho;
  return w;
}

bool Window::contains(const Vec& x, const Vec& xstar) const {
  return (x - x_center).norm() <= x_radius + 1e-15 &&
         (xstar - xstar_center).norm() <= xstar_radius + 1e-15;
}

namespace {

void emit(std::vector<GraphPoint>& out, const Window& w, Mode mode, const Vec& x,
          const Vec& xstar, double fval) {
  if (!std::isfinite(fval)) return;
  if (mode == Mode::attentive && !(fval < w.rho)) return;
  if (!w.contains(x, xstar)) return;
  out.push_back(GraphPoint{x, xstar, fval});
}

// 1D branch and fan sampling.
void sample_1d(const FunctionSpec& f, const Window& w, Mode mode, const Resolution& res,
               std::vector<GraphPoint>& out) {
  const double cx = w.x_center[0];
  const double rx = w.x_radius;
  const int m = std::max(res.grid, 3);

  auto sample_branch_range = [&](double a, double b, const Poly& p, bool incl_a, bool incl_b) {
    if (!(a <= b)) return;
    Poly d1 = p.derivative();
    for (int j = 0; j < m; ++j) {
      double x = a + (b - a) * static_cast<double>(j) / static_cast<double>(m - 1);
      if ((x == a && !incl_a) || (x == b && !incl_b)) continue;
      emit(out, w, mode, vec1(x), vec1(d1(x)), p(x));
    }
  };

  if (f.kind() == FunctionSpec::Kind::smooth_poly) {
    sample_branch_range(cx - rx, cx + rx, f.poly(), true, true);
    return;
  }

  for (const Branch& br : f.branches()) {
    double a = std::max(br.lo, cx - rx);
    double b = std::min(br.hi, cx + rx);
    if (a >= b) continue;
    sample_branch_range(a, b, br.poly, a != br.lo, b != br.hi);
  }

  const double cv = w.xstar_center[0];
  const double rv = w.xstar_radius;
  for (double bp : breakpoints_1d(f, cx - rx, cx + rx)) {
    double fb = evaluate1(f, bp);
    if (!std::isfinite(fb)) continue;
    SubgradientSet sd = point_structure_1d(f, bp).subdiff;
    if (sd.has_interval) {
      double l = std::max(sd.lo, cv - rv);
      double u = std::min(sd.hi, cv + rv);
      if (l <= u) {
        int k = res.fan_interior + 2;
        for (int j = 0; j < k; ++j) {
          double t = (k == 1) ? l : l + (u - l) * static_cast<double>(j) / static_cast<double>(k - 1);
          emit(out, w, mode, vec1(bp), vec1(t), fb);
        }
      }
    }
    for (double t : sd.isolated) emit(out, w, mode, vec1(bp), vec1(t), fb);
  }
}

// Face-stratified sampling for quadratic-plus-polyhedron specs. Every face
// stratum through the window contributes its own grid, so each connected
// graph piece is covered.
void sample_quad_polyhedron(const FunctionSpec& f, const Window& w, Mode mode,
                            const Resolution& res, std::vector<GraphPoint>& out) {
  const int n = f.dim();
  const Polyhedron& C = f.polyhedron();
  const int m = C.m();
  const Mat& A = f.quad_a();
  const Vec& blin = f.quad_b();

  auto face_axis_points = [&](int d) {
    if (d <= 1) return res.grid;
    if (d == 2) return std::max(res.grid2, 5);
    return d == 3 ? 13 : 7;
  };
  auto fan_axis_points = [&](int k) {
    if (k <= 2) return res.fan_interior + 2;
    return k == 3 ? 9 : 5;
  };

  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> act;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) act.push_back(i);

    // Affine hull of the face: particular solution + orthonormal nullspace basis.
    Mat As(act.size(), n);
    Vec rs(act.size());
    for (std::size_t i = 0; i < act.size(); ++i) {
      As.row(i) = C.a.row(act[i]);
      rs[i] = C.rhs[act[i]];
    }
    Vec x0;
    Mat N;
    int d = n;
    if (!act.empty()) {
      Eigen::JacobiSVD<Mat> svd(As, Eigen::ComputeFullV | Eigen::ComputeThinU);
      x0 = svd.solve(rs);
      if ((As * x0 - rs).norm() > 1e-9 * (1.0 + rs.norm())) continue;  // inconsistent
      double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
      int rank = 0;
      for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > 1e-12 * std::max(1.0, smax)) ++rank;
      d = n - rank;
      N = svd.matrixV().rightCols(d);
    } else {
      x0 = Vec::Zero(n);
      N = Mat::Identity(n, n);
    }

    // Grid the face plane across the window.
    Vec tc = N.transpose() * (w.x_center - x0);
    int g = (d == 0) ? 1 : face_axis_points(d);
    std::vector<int> idx(std::max(d, 1), 0);
    bool done = false;
    while (!done) {
      Vec t(d);
      for (int j = 0; j < d; ++j)
        t[j] = tc[j] + (idx[j] - (g - 1) / 2) * (2.0 * w.x_radius / std::max(g - 1, 1));
      Vec x = x0 + N * t;
      // advance the odometer now so `continue` is safe
      int jj = 0;
      if (d == 0)
        done = true;
      else {
        while (jj < d && ++idx[jj] == g) idx[jj++] = 0;
        if (jj == d) done = true;
      }

      if ((x - w.x_center).norm() > w.x_radius) continue;
      if (!C.contains(x)) continue;
      std::vector<int> at = C.active_set(x);
      if (at != act) continue;  // belongs to another stratum

      double fx = 0.5 * x.dot(A * x) + blin.dot(x) + f.quad_c();
      Vec apex = A * x + blin;

      // Normal-cone fan over the active generators.
      int k = static_cast<int>(act.size());
      if (k == 0) {
        emit(out, w, mode, x, apex, fx);
        continue;
      }
      int fg = fan_axis_points(k);
      std::vector<double> lam_max(k);
      for (int j = 0; j < k; ++j)
        lam_max[j] = 2.0 * w.xstar_radius / std::max(C.a.row(act[j]).norm(), 1e-12);
      std::vector<int> li(k, 0);
      bool fan_done = false;
      while (!fan_done) {
        Vec xs = apex;
        for (int j = 0; j < k; ++j)
          xs += (lam_max[j] * li[j] / (fg - 1)) * C.a.row(act[j]).transpose();
        emit(out, w, mode, x, xs, fx);
        int q = 0;
        while (q < k && ++li[q] == fg) li[q++] = 0;
        if (q == k) fan_done = true;
      }
    }
  }
}

void canonicalize(std::vector<GraphPoint>& pts) {
  auto lex_less = [](const GraphPoint& a, const GraphPoint& b) {
    for (int i = 0; i < a.x.size(); ++i)
      if (a.x[i] != b.x[i]) return a.x[i] < b.x[i];
    for (int i = 0; i < a.xstar.size(); ++i)
      if (a.xstar[i] != b.xstar[i]) return a.xstar[i] < b.xstar[i];
    return false;
  };
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const GraphPoint& a, const GraphPoint& b) {
                          return a.x == b.x && a.xstar == b.xstar;
                        }),
            pts.end());
}

}  // namespace

TruncatedGraph sample_truncated_graph(const FunctionSpec& f, const Window& w, Mode mode,
                                      const Resolution& res) {
  if (w.x_center.size() != f.dim() || w.xstar_center.size() != f.dim())
    throw error("window dimension mismatch");
  TruncatedGraph g;
  g.window = w;
  g.mode = mode;
  g.res = res;
  if (f.kind() == FunctionSpec::Kind::quad_polyhedron)
    sample_quad_polyhedron(f, w, mode, res, g.points);
  else
    sample_1d(f, w, mode, res, g.points);
  canonicalize(g.points);
  return g;
}

TruncatedGraph localization(const FunctionSpec& f, const Vec& xbar, const Vec& xbarstar,
                            double eps, Mode mode, const Resolution& res) {
  if (eps <= 0.0) throw precondition_error("localization needs eps > 0");
  double fbar = evaluate(f, xbar);
  if (!std::isfinite(fbar)) throw precondition_error("anchor outside dom f");
  if (!subdifferential(f, xbar).contains(xbarstar))
    throw precondition_error("anchor subgradient not in subdifferential");
  Window w = Window::around(xbar, xbarstar, eps, eps, fbar + eps);
  return sample_truncated_graph(f, w, mode, res);
}

namespace {

// x*-clusters of a 1D sample, used by the closedness probe.
struct Group {
  double center = 0.0;
  std::vector<const GraphPoint*> pts;  // sorted by x
};

std::vector<Group> group_by_xstar(const std::vector<GraphPoint>& pts, double cell) {
  std::vector<const GraphPoint*> sorted;
  sorted.reserve(pts.size());
  for (const auto& p : pts) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](const GraphPoint* a, const GraphPoint* b) {
    return a->xstar[0] < b->xstar[0];
  });
  std::vector<Group> groups;
  for (const GraphPoint* p : sorted) {
    if (groups.empty() || p->xstar[0] - groups.back().pts.back()->xstar[0] > cell) {
      groups.push_back(Group{});
    }
    groups.back().pts.push_back(p);
  }
  for (auto& g : groups) {
    double lo = g.pts.front()->xstar[0], hi = g.pts.back()->xstar[0];
    g.center = 0.5 * (lo + hi);
    std::sort(g.pts.begin(), g.pts.end(),
              [](const GraphPoint* a, const GraphPoint* b) { return a->x[0] < b->x[0]; });
  }
  return groups;
}

const Group* match_group(const std::vector<Group>& groups, double center, double cell) {
  const Group* best = nullptr;
  double best_d = cell;
  for (const auto& g : groups) {
    double d = std::abs(g.center - center);
    if (d <= best_d) {
      best_d = d;
      best = &g;
    }
  }
  return best;
}

}  // namespace

ClosednessReport closedness_probe(const TruncatedGraph& g, const FunctionSpec& f) {
  ClosednessReport rep;
  if (g.points.empty()) return rep;

  // Exact re-verification of every sample.
  for (const auto& p : g.points) {
    double fv = evaluate(f, p.x);
    if (!(std::abs(fv - p.fval) <= tol::exact * (1.0 + std::abs(fv))) ||
        !subdifferential(f, p.x).contains(p.xstar))
      rep.membership_ok = false;
  }

  TruncatedGraph g1 = sample_truncated_graph(f, g.window, g.mode, g.res.refined());
  TruncatedGraph g2 = sample_truncated_graph(f, g.window, g.mode, g.res.refined().refined());

  // fval Cauchy along nearest-point refinement chains.
  auto nearest = [](const std::vector<GraphPoint>& pts, const Vec& x, const Vec& xs) {
    const GraphPoint* best = nullptr;
    double best_d = kInf;
    for (const auto& p : pts) {
      double d = (p.x - x).squaredNorm() + (p.xstar - xs).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = &p;
      }
    }
    return best;
  };
  for (const auto& p : g.points) {
    const GraphPoint* q1 = nearest(g1.points, p.x, p.xstar);
    if (!q1) continue;
    const GraphPoint* q2 = nearest(g2.points, q1->x, q1->xstar);
    if (!q2) continue;
    double d01 = std::abs(q1->fval - p.fval);
    double d12 = std::abs(q2->fval - q1->fval);
    rep.max_fval_cauchy = std::max(rep.max_fval_cauchy, std::max(d01, d12));
  }

  // Accumulation-point detector (1D): x*-groups whose x-frontier keeps marching
  // under refinement converge to a limit (xhat, x*). That limit must carry the
  // fvals of the march; otherwise the sample accumulates outside the graph.
  if (f.dim() == 1) {
    double cell = 2.0 * g.window.xstar_radius / std::max(g.res.grid - 1, 1) * 4.0;
    auto G0 = group_by_xstar(g.points, cell);
    auto G1 = group_by_xstar(g1.points, cell);
    auto G2 = group_by_xstar(g2.points, cell);
    for (const Group& grp0 : G0) {
      const Group* grp1 = match_group(G1, grp0.center, cell);
      const Group* grp2 = match_group(G2, grp0.center, cell);
      if (!grp1 || !grp2) continue;
      for (int side = 0; side < 2; ++side) {
        const GraphPoint* p0 = side ? grp0.pts.back() : grp0.pts.front();
        const GraphPoint* p1 = side ? grp1->pts.back() : grp1->pts.front();
        const GraphPoint* p2 = side ? grp2->pts.back() : grp2->pts.front();
        double s0 = p0->x[0], s1 = p1->x[0], s2 = p2->x[0];
        double step1 = s1 - s0, step2 = s2 - s1;
        if (std::abs(step2) < 1e-15) continue;             // frontier stabilized
        if (std::abs(step2) > 0.75 * std::abs(step1)) continue;  // not contracting
        double xhat = s2 + step2;  // geometric extrapolation with ratio <= 1/2
        double fhat = evaluate(f, vec1(xhat));
        double slope = std::abs(p2->fval - p1->fval) / std::max(std::abs(s2 - s1), 1e-15);
        double allowance = 10.0 * slope * std::abs(s2 - xhat) + 1e-6;
        double deviation = std::isfinite(fhat) ? std::abs(p2->fval - fhat) : kInf;
        if (deviation > allowance) {
          ClosednessIssue issue;
          issue.limit_x = vec1(xhat);
          issue.limit_xstar = p2->xstar;
          issue.fval_along = p2->fval;
          issue.f_at_limit = fhat;
          issue.deviation = deviation;
          rep.issues.push_back(issue);
          rep.max_deviation = std::max(rep.max_deviation, deviation);
        }
      }
    }
  }

  rep.pass = rep.issues.empty() && rep.membership_ok;
  return rep;
}

void export_graph(const TruncatedGraph& g, std::ostream& os) {
  const int n = g.points.empty() ? static_cast<int>(g.window.x_center.size())
                                 : static_cast<int>(g.points.front().x.size());
  os << "#";
  for (int i = 0; i < n; ++i) os << " x" << i + 1;
  for (int i = 0; i < n; ++i) os << " xstar" << i + 1;
  os << " f\n";
  os.precision(17);
  for (const auto& p : g.points) {
    for (int i = 0; i < n; ++i) os << p.x[i] << " ";
    for (int i = 0; i < n; ++i) os << p.xstar[i] << " ";
    os << p.fval << "\n";
  }
}

}  // namespace va
