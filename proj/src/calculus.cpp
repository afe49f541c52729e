#include "va/calculus.hpp"

namespace va {

QuadraticPerturbation QuadraticPerturbation::general(double c, Vec b, Mat H) {
  if (H.rows() != H.cols() || H.rows() != b.size())
    throw error("perturbation dimension mismatch");
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 0.0) throw error("H must be symmetric");
  QuadraticPerturbation q;
  q.c = c;
  q.b = std::move(b);
  q.H = std::move(H);
  return q;
}

QuadraticPerturbation QuadraticPerturbation::tilt_curvature(const Vec& anchor, const Vec& ystar,
                                                            double t) {
  const int n = static_cast<int>(anchor.size());
  if (ystar.size() != n) throw error("perturbation dimension mismatch");
  QuadraticPerturbation q;
  q.c = -ystar.dot(anchor) + 0.5 * t * anchor.squaredNorm();
  q.b = ystar - t * anchor;
  q.H = t * Mat::Identity(n, n);
  return q;
}

FunctionSpec add_quadratic(const FunctionSpec& f, const QuadraticPerturbation& q) {
  if (q.dim() != f.dim()) throw error("perturbation dimension mismatch");
  switch (f.kind()) {
    case FunctionSpec::Kind::smooth_poly: {
      Poly add{q.c, q.b[0], 0.5 * q.H(0, 0)};
      return FunctionSpec::make_smooth_poly(f.poly() + add, f.name() + "+quad");
    }
    case FunctionSpec::Kind::piecewise_1d: {
      Poly add{q.c, q.b[0], 0.5 * q.H(0, 0)};
      std::vector<Branch> branches = f.branches();
      for (Branch& br : branches) {
        br.poly = br.poly + add;
        if (br.value_lo) *br.value_lo += add(br.lo);
        if (br.value_hi) *br.value_hi += add(br.hi);
      }
      return FunctionSpec::make_piecewise(std::move(branches), f.name() + "+quad");
    }
    case FunctionSpec::Kind::quad_polyhedron:
      return FunctionSpec::make_quad_polyhedron(f.quad_a() + q.H, f.quad_b() + q.b,
                                                f.quad_c() + q.c, f.polyhedron(),
                                                f.name() + "+quad");
  }
  throw error("unreachable");
}

PWSet transform_pw(const PWSet& set, const Mat& H) {
  if (!set.pairs.empty() && H.rows() != set.pairs.front().P.rows())
    throw error("H dimension mismatch");
  PWSet out;
  out.provenance = set.provenance;
  out.anchor_x = set.anchor_x;
  out.anchor_xstar = set.anchor_xstar;
  for (const PWPair& pw : set.pairs) {
    Mat php = pw.P * H * pw.P;
    Mat W = 0.5 * (php + php.transpose()) + pw.W;
    out.pairs.emplace_back(pw.P, std::move(W));
    if (!check_pw_axioms(out.pairs.back().P, out.pairs.back().W).pass)
      throw error("transform_pw produced an axiom-violating pair");
  }
  return out;
}

std::vector<Subspace2n> transform_subspaces(const std::vector<Subspace2n>& subspaces,
                                            const Mat& H) {
  std::vector<Subspace2n> out;
  out.reserve(subspaces.size());
  for (const Subspace2n& l : subspaces) {
    const int n = l.half_dim();
    if (H.rows() != n) throw error("H dimension mismatch");
    Mat abar = Mat::Identity(2 * n, 2 * n);
    abar.bottomLeftCorner(n, n) = H;
    out.push_back(Subspace2n::from_span(abar * l.basis()));
  }
  return out;
}

}  // namespace va
