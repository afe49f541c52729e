#include "va/scderiv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace va {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

PWPair pair_1d(double p, double w) {
  Mat P(1, 1), W(1, 1);
  P(0, 0) = p;
  W(0, 0) = w;
  return PWPair(P, W);
}

void dedup_add(std::vector<PWPair>& pairs, PWPair pair, double eps) {
  Subspace2n l = subspace_from_pw(pair);
  for (const PWPair& q : pairs)
    if (dz_distance(subspace_from_pw(q), l) <= eps) return;
  pairs.push_back(std::move(pair));
}

// SC derivative of a piecewise/smooth 1D function from the exact local
// structure: branch tangents along admissible one-sided limits plus the
// vertical fan when the anchor lies on a nondegenerate subgradient interval.
void sc_derivative_1d(const FunctionSpec& f, double xbar, double xbarstar, Mode mode,
                      std::vector<PWPair>& out) {
  PointStructure1D ps = point_structure_1d(f, xbar);
  if (!ps.subdiff.contains1(xbarstar))
    throw precondition_error("anchor subgradient not in subdifferential");

  if (!ps.is_breakpoint) {
    out.push_back(pair_1d(1.0, ps.left.second_limit));
    return;
  }
  const SubgradientSet& sd = ps.subdiff;
  if (sd.has_interval && sd.lo < sd.hi && xbarstar >= sd.lo - tol::membership &&
      xbarstar <= sd.hi + tol::membership)
    dedup_add(out, pair_1d(0.0, 1.0), tol::dedup);
  auto branch_arc = [&](const SideInfo& side) {
    if (!side.exists) return;
    if (mode == Mode::attentive && !side.attentive) return;
    if (std::abs(side.deriv_limit - xbarstar) > tol::membership) return;
    dedup_add(out, pair_1d(1.0, side.second_limit), tol::dedup);
  };
  branch_arc(ps.left);
  branch_arc(ps.right);
}

// Face strata of a quadratic-plus-polyhedron spec reachable at the anchor.
void sc_derivative_faces(const FunctionSpec& f, const Vec& xbar, const Vec& xbarstar,
                         std::vector<PWPair>& out) {
  const int n = f.dim();
  const Polyhedron& C = f.polyhedron();
  if (!C.contains(xbar)) throw precondition_error("anchor outside dom f");
  Vec vbar = xbarstar - (f.quad_a() * xbar + f.quad_b());
  std::vector<int> act = C.active_set(xbar);
  const int k = static_cast<int>(act.size());
  {
    Mat gens(n, k);
    for (int j = 0; j < k; ++j) gens.col(j) = C.a.row(act[j]).transpose();
    if (!cone_contains(gens, vbar))
      throw precondition_error("anchor subgradient not in subdifferential");
  }

  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> sel;
    for (int j = 0; j < k; ++j)
      if (mask & (1u << j)) sel.push_back(act[j]);

    Mat As(sel.size(), n);
    for (std::size_t i = 0; i < sel.size(); ++i) As.row(i) = C.a.row(sel[i]);
    Mat N;  // orthonormal basis of the face subspace
    if (sel.empty()) {
      N = Mat::Identity(n, n);
    } else {
      Eigen::JacobiSVD<Mat> svd(As, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      double smax = sv.size() ? sv[0] : 0.0;
      int rank = 0;
      for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > 1e-12 * std::max(1.0, smax)) ++rank;
      N = svd.matrixV().rightCols(n - rank);
    }

    // The stratum must have points with active set exactly `sel` near xbar.
    if (sel.size() != act.size()) {
      Vec drive = Vec::Zero(n);
      for (int j : act)
        if (std::find(sel.begin(), sel.end(), j) == sel.end())
          drive -= C.a.row(j).transpose();
      Vec d = N * (N.transpose() * drive);
      bool ok = true;
      for (int j : act) {
        if (std::find(sel.begin(), sel.end(), j) != sel.end()) continue;
        if (C.a.row(j).dot(d) >= -1e-12 * std::max(1.0, C.a.row(j).norm())) ok = false;
      }
      if (!ok) continue;
    }

    // Attentive reachability of the stratum: the normal part of the anchor
    // subgradient must lie in the face's normal cone.
    Mat gens(n, sel.size());
    for (std::size_t j = 0; j < sel.size(); ++j) gens.col(j) = C.a.row(sel[j]).transpose();
    if (!cone_contains(gens, vbar)) continue;

    Mat P = N * N.transpose();
    Mat I = Mat::Identity(n, n);
    Mat W = P * f.quad_a() * P + (I - P);
    dedup_add(out, PWPair(0.5 * (P + P.transpose()), 0.5 * (W + W.transpose())), tol::dedup);
  }
}

}  // namespace

std::vector<Subspace2n> PWSet::subspaces() const {
  std::vector<Subspace2n> out;
  out.reserve(pairs.size());
  for (const PWPair& p : pairs) out.push_back(subspace_from_pw(p));
  return out;
}

PWSet sc_derivative(const FunctionSpec& f, const Vec& xbar, const Vec& xbarstar, Mode mode) {
  if (xbar.size() != f.dim() || xbarstar.size() != f.dim())
    throw error("anchor dimension mismatch");
  PWSet set;
  set.provenance = Provenance::closed_form;
  set.anchor_x = xbar;
  set.anchor_xstar = xbarstar;
  if (f.kind() == FunctionSpec::Kind::quad_polyhedron)
    sc_derivative_faces(f, xbar, xbarstar, set.pairs);
  else
    sc_derivative_1d(f, xbar[0], xbarstar[0], mode, set.pairs);
  return set;
}

std::variant<Subspace2n, TangentFailure> estimate_tangent(const TruncatedGraph& g,
                                                          const GraphPoint& at, double radius,
                                                          double smooth_tol) {
  const int n = static_cast<int>(at.x.size());
  std::vector<Vec> diffs;
  for (const GraphPoint& q : g.points) {
    Vec d(2 * n);
    d.head(n) = q.x - at.x;
    d.tail(n) = q.xstar - at.xstar;
    double dist = d.norm();
    if (dist > 0.0 && dist <= radius) diffs.push_back(d);
  }
  if (static_cast<int>(diffs.size()) < 2 * n + 1)
    return TangentFailure{TangentFailure::Reason::insufficient_samples, 0.0,
                          static_cast<int>(diffs.size())};
  Mat D(diffs.size(), 2 * n);
  for (std::size_t i = 0; i < diffs.size(); ++i) D.row(i) = diffs[i].transpose();
  Eigen::JacobiSVD<Mat> svd(D, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double s1 = sv[0];
  double sn = sv[n - 1];
  double res = sv.size() > n ? sv[n] : 0.0;
  if (s1 <= 0.0 || res > smooth_tol * s1 || sn < 1e-3 * s1)
    return TangentFailure{TangentFailure::Reason::not_smooth, s1 > 0 ? res / s1 : kInf,
                          static_cast<int>(diffs.size())};
  return Subspace2n::from_span(svd.matrixV().leftCols(n));
}

PWSet sc_derivative_numeric(const FunctionSpec& f, const Vec& xbar, const Vec& xbarstar,
                            double eps, Mode mode, const NumericParams& params) {
  const int n = f.dim();
  double fbar = evaluate(f, xbar);
  if (!std::isfinite(fbar)) throw precondition_error("anchor outside dom f");
  if (!subdifferential(f, xbar).contains(xbarstar))
    throw precondition_error("anchor subgradient not in subdifferential");

  struct Chain {
    Subspace2n rep;
    int count = 0;
    int last = -1;
  };
  std::vector<Chain> chains;

  std::vector<double> radii;
  for (double r = std::min(params.r0, eps / 2.0); r >= params.r_min; r /= 2.0)
    radii.push_back(r);
  const int grid = (n == 1) ? params.grid_1d : params.grid_nd;

  for (std::size_t k = 0; k < radii.size(); ++k) {
    double r = radii[k];
    Window w = Window::around(xbar, xbarstar, r, r, fbar + r);
    Resolution res;
    res.grid = grid;
    res.fan_interior = grid - 2;  // fans as dense as the x grid
    res.grid2 = grid;
    TruncatedGraph g = sample_truncated_graph(f, w, mode, res);

    std::vector<const GraphPoint*> shell;
    for (const GraphPoint& p : g.points) {
      double d = std::sqrt((p.x - xbar).squaredNorm() + (p.xstar - xbarstar).squaredNorm());
      if (d >= 0.5 * r && d <= r) shell.push_back(&p);
    }
    std::size_t stride = std::max<std::size_t>(1, shell.size() / params.max_shell_points);

    // The fit radius adapts to the local sample spacing: 1.5x the distance of
    // the (2n+1)-th neighbor, capped well below the annulus scale.
    auto knn_radius = [&](const GraphPoint& at) {
      std::vector<double> dists;
      dists.reserve(g.points.size());
      for (const GraphPoint& q : g.points) {
        double d = std::sqrt((q.x - at.x).squaredNorm() + (q.xstar - at.xstar).squaredNorm());
        if (d > 0.0) dists.push_back(d);
      }
      std::size_t need = 2 * static_cast<std::size_t>(n) + 1;
      if (dists.size() < need) return 0.0;
      std::nth_element(dists.begin(), dists.begin() + (need - 1), dists.end());
      return 1.5 * dists[need - 1];
    };

    std::vector<Subspace2n> found;
    for (std::size_t i = 0; i < shell.size(); i += stride) {
      double fit_r = knn_radius(*shell[i]);
      // the cap leaves room for the graph-metric stretch of steep strata;
      // contaminated fits are rejected by the smoothness gate anyway
      if (fit_r <= 0.0 || fit_r > 0.35 * r) continue;
      auto t = estimate_tangent(g, *shell[i], fit_r, params.smooth_tol);
      if (std::holds_alternative<TangentFailure>(t)) continue;
      const Subspace2n& l = std::get<Subspace2n>(t);
      bool dup = false;
      for (const Subspace2n& q : found)
        if (dz_distance(q, l) <= 0.5 * params.cluster_tol) dup = true;
      if (!dup) found.push_back(l);
    }

    for (const Subspace2n& l : found) {
      Chain* best = nullptr;
      double best_d = params.cluster_tol;
      for (Chain& c : chains) {
        if (c.last == static_cast<int>(k)) continue;     // one match per annulus
        if (c.last + 2 < static_cast<int>(k)) continue;  // allow a one-annulus gap
        double d = dz_distance(c.rep, l);
        if (d <= best_d) {
          best_d = d;
          best = &c;
        }
      }
      if (best) {
        best->rep = l;
        best->count += 1;
        best->last = static_cast<int>(k);
      } else {
        chains.push_back(Chain{l, 1, static_cast<int>(k)});
      }
    }
  }

  PWSet set;
  set.provenance = Provenance::numeric;
  set.anchor_x = xbar;
  set.anchor_xstar = xbarstar;
  const int final_k = static_cast<int>(radii.size()) - 1;
  for (const Chain& c : chains) {
    if (c.count < params.min_annuli || c.last < final_k - 1) continue;
    PWPair pair = [&] {
      try {
        return pw_from_subspace(c.rep);
      } catch (const not_self_adjoint_error&) {
        std::ostringstream os;
        os << "numeric cluster produced a non-self-adjoint subspace; basis:\n" << c.rep.basis();
        throw not_self_adjoint_error(os.str());
      }
    }();
    dedup_add(set.pairs, std::move(pair), params.cluster_tol);
  }
  return set;
}

namespace {

double normalize_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

// Polar cone {w : <w,d> <= 0 for all d} as a single angular sector, or nothing
// when the polar is {0}.
std::optional<ConePiece> polar_sector(const std::vector<double>& dir_angles) {
  if (dir_angles.empty()) return ConePiece{0.0, kTwoPi};
  auto feasible = [&](double theta) {
    for (double phi : dir_angles)
      if (std::cos(theta - phi) > 1e-12) return false;
    return true;
  };
  std::vector<double> cand;
  for (double phi : dir_angles) {
    cand.push_back(normalize_angle(phi + M_PI / 2));
    cand.push_back(normalize_angle(phi - M_PI / 2));
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             cand.end());
  const std::size_t m = cand.size();
  std::vector<bool> arc_ok(m);
  bool any = false, all = true;
  for (std::size_t i = 0; i < m; ++i) {
    double a = cand[i];
    double b = (i + 1 < m) ? cand[i + 1] : cand[0] + kTwoPi;
    arc_ok[i] = feasible(0.5 * (a + b));
    any = any || arc_ok[i];
    all = all && arc_ok[i];
  }
  if (all) return ConePiece{0.0, kTwoPi};
  if (!any) {
    // The polar may still be a single ray (a feasible candidate angle).
    for (double c : cand)
      if (feasible(c)) return ConePiece{c, c};
    return std::nullopt;
  }
  // Merge the (cyclically contiguous) feasible arcs into one sector.
  std::size_t start = 0;
  while (arc_ok[(start + m - 1) % m]) start = (start + m - 1) % m;  // terminates: not all ok
  while (!arc_ok[start]) start = (start + 1) % m;
  double lo = cand[start];
  double hi = lo;
  std::size_t i = start;
  while (arc_ok[i]) {
    double next = (i + 1 < m) ? cand[i + 1] : cand[0] + kTwoPi;
    hi = lo + normalize_angle(next - lo);
    i = (i + 1) % m;
    if (i == start) break;
  }
  return ConePiece{lo, hi};
}

void add_perp_line(std::vector<ConePiece>& pieces, double phi) {
  double a = normalize_angle(phi + M_PI / 2);
  double b = normalize_angle(phi - M_PI / 2);
  pieces.push_back(ConePiece{a, a});
  pieces.push_back(ConePiece{b, b});
}

}  // namespace

bool ConePiece::contains(double x, double y, double eps) const {
  double r = std::hypot(x, y);
  if (r <= eps) return true;
  double t = normalize_angle(std::atan2(y, x));
  const double ang_eps = 1e-9;
  double rel = normalize_angle(t - theta_lo);
  double width = theta_hi - theta_lo;
  return rel <= width + ang_eps || rel >= kTwoPi - ang_eps;
}

bool ConeDescription1D::normal_contains(double w1, double w2) const {
  for (const ConePiece& p : normal_cone)
    if (p.contains(w1, w2)) return true;
  return false;
}

bool ConeDescription1D::coderivative_contains(double z, double zstar) const {
  for (const ConePiece& p : coderivative_graph)
    if (p.contains(z, zstar)) return true;
  return false;
}

ConeDescription1D attentive_coderivative_1d(const FunctionSpec& f, double xbar,
                                            double xbarstar, double eps) {
  if (f.dim() != 1) throw error("attentive_coderivative_1d needs n = 1");
  if (eps <= 0.0) throw precondition_error("eps must be positive");
  PointStructure1D ps = point_structure_1d(f, xbar);
  if (!ps.subdiff.contains1(xbarstar))
    throw precondition_error("anchor subgradient not in subdifferential");

  // Outgoing unit directions of the attentively adjacent graph arcs.
  std::vector<double> dir_angles;
  std::vector<double> arc_tangent_angles;  // one per adjacent arc
  auto add_dir = [&](double dx, double dy) {
    dir_angles.push_back(std::atan2(dy, dx));
  };

  if (!ps.is_breakpoint) {
    double phi = std::atan2(ps.left.second_limit, 1.0);
    add_dir(std::cos(phi), std::sin(phi));
    add_dir(-std::cos(phi), -std::sin(phi));
    arc_tangent_angles.push_back(phi);
  } else {
    const SubgradientSet& sd = ps.subdiff;
    if (ps.left.exists && ps.left.attentive &&
        std::abs(ps.left.deriv_limit - xbarstar) <= tol::membership) {
      add_dir(-1.0, -ps.left.second_limit);
      arc_tangent_angles.push_back(std::atan2(ps.left.second_limit, 1.0));
    }
    if (ps.right.exists && ps.right.attentive &&
        std::abs(ps.right.deriv_limit - xbarstar) <= tol::membership) {
      add_dir(1.0, ps.right.second_limit);
      arc_tangent_angles.push_back(std::atan2(ps.right.second_limit, 1.0));
    }
    if (sd.has_interval && sd.lo < sd.hi) {
      bool above = xbarstar < sd.hi - tol::membership;
      bool below = xbarstar > sd.lo + tol::membership;
      if (above) add_dir(0.0, 1.0);
      if (below) add_dir(0.0, -1.0);
      if (above || below) arc_tangent_angles.push_back(M_PI / 2);
    }
  }

  ConeDescription1D cone;
  if (auto sector = polar_sector(dir_angles)) cone.normal_cone.push_back(*sector);
  std::sort(arc_tangent_angles.begin(), arc_tangent_angles.end());
  arc_tangent_angles.erase(std::unique(arc_tangent_angles.begin(), arc_tangent_angles.end(),
                                       [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                           arc_tangent_angles.end());
  for (double phi : arc_tangent_angles) add_perp_line(cone.normal_cone, phi);

  // (z,z*) with (z*,-z) in N^f: a quarter-turn of every normal piece.
  for (const ConePiece& p : cone.normal_cone)
    cone.coderivative_graph.push_back(
        ConePiece{p.theta_lo + M_PI / 2, p.theta_hi + M_PI / 2});
  return cone;
}

double dz_hausdorff(const PWSet& a, const PWSet& b) {
  if (a.pairs.empty() && b.pairs.empty()) return 0.0;
  if (a.pairs.empty() || b.pairs.empty()) return kInf;
  std::vector<Subspace2n> la = a.subspaces(), lb = b.subspaces();
  double h = 0.0;
  for (const auto& x : la) {
    double best = kInf;
    for (const auto& y : lb) best = std::min(best, dz_distance(x, y));
    h = std::max(h, best);
  }
  for (const auto& y : lb) {
    double best = kInf;
    for (const auto& x : la) best = std::min(best, dz_distance(x, y));
    h = std::max(h, best);
  }
  return h;
}

}  // namespace va
