#include "va/criteria.hpp"

#include <algorithm>
#include <cmath>

namespace va {

namespace {

// Orthonormal basis of rge P for an exact projector (eigenvalues 0 or 1).
Mat range_basis(const Mat& P) {
  Eigen::SelfAdjointEigenSolver<Mat> es(P);
  const Vec& ev = es.eigenvalues();
  int k = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev[i] > 0.5) ++k;
  Mat basis(P.rows(), k);
  int j = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev[i] > 0.5) basis.col(j++) = es.eigenvectors().col(i);
  return basis;
}

double min_eig(const Mat& sym) {
  if (sym.rows() == 0) return kInf;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sym + sym.transpose()));
  return es.eigenvalues().minCoeff();
}

double spectral_norm(const Mat& sym) {
  if (sym.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sym + sym.transpose()));
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

void require_axioms(const PWSet& set) {
  for (const PWPair& p : set.pairs)
    if (!check_pw_axioms(p.P, p.W).pass) throw error("axiom-violating pair rejected");
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

VarcoResult varco_bound(const PWSet& set) {
  if (set.pairs.empty()) throw precondition_error("varco_bound needs a nonempty PWSet");
  require_axioms(set);
  VarcoResult r;
  for (std::size_t i = 0; i < set.pairs.size(); ++i) {
    const PWPair& pw = set.pairs[i];
    Mat basis = range_basis(pw.P);
    double v;
    if (basis.cols() == 0) {
      v = kInf;  // inf over p with Pp = 0 only: 0/0 := +inf
      r.convention_inf_used = true;
    } else {
      Mat restricted = basis.transpose() * pw.W * basis;
      v = min_eig(restricted);
    }
    r.per_pair.push_back(v);
    if (r.achieving_pair < 0 || v < r.value) {
      r.value = v;
      r.achieving_pair = static_cast<int>(i);
    }
  }
  return r;
}

TiltResult tilt_bound(const PWSet& set) {
  if (set.pairs.empty()) throw precondition_error("tilt_bound needs a nonempty PWSet");
  require_axioms(set);
  TiltResult r;
  r.tilt_stable = true;
  for (std::size_t i = 0; i < set.pairs.size(); ++i) {
    const PWPair& pw = set.pairs[i];
    Eigen::SelfAdjointEigenSolver<Mat> es(pw.W);
    double wscale = std::max(1.0, spectral_norm(pw.W));
    if (es.eigenvalues().cwiseAbs().minCoeff() <= 1e-12 * wscale) {
      r.tilt_stable = false;
      r.offending_pair = static_cast<int>(i);
      r.reason = "singular W";
      r.per_pair.push_back(kInf);
      continue;
    }
    Mat winv = es.eigenvectors() *
               es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    Mat pwinv = 0.5 * (pw.P * winv + winv * pw.P);  // symmetric by PW = WP
    if (min_eig(pwinv) < -tol::psd_rel * (1.0 + spectral_norm(pwinv))) {
      r.tilt_stable = false;
      r.offending_pair = static_cast<int>(i);
      r.reason = "PW^{-1} not positive semidefinite";
      r.per_pair.push_back(kInf);
      continue;
    }
    double v = spectral_norm(pwinv);
    r.per_pair.push_back(v);
    if (v > r.value) {
      r.value = v;
      r.achieving_pair = static_cast<int>(i);
    }
  }
  if (!r.tilt_stable) r.value = kInf;
  return r;
}

PointbasedVerdict test_pointbased(const PWSet& set, double s) {
  if (set.pairs.empty()) throw precondition_error("test_pointbased needs a nonempty PWSet");
  require_axioms(set);
  PointbasedVerdict v;
  v.pass = true;
  v.min_eig = kInf;
  for (std::size_t i = 0; i < set.pairs.size(); ++i) {
    const PWPair& pw = set.pairs[i];
    double scale = 1.0 + spectral_norm(pw.W) + std::abs(s);
    double me = min_eig(pw.W - s * pw.P);
    if (me < v.min_eig) v.min_eig = me;
    if (me < -tol::psd_rel * scale && v.pass) {
      v.pass = false;
      v.failing_pair = static_cast<int>(i);
    }
  }
  double vb = varco_bound(set).value;
  v.boundary = std::isfinite(vb) && std::abs(s - vb) <= 1e-9 * (1.0 + std::abs(s));
  return v;
}

NeighborhoodVerdict test_neighborhood(const FunctionSpec& f, const Vec& xbar,
                                      const Vec& xbarstar, double s, const Window& window,
                                      const Resolution& res) {
  (void)xbar;
  (void)xbarstar;
  NeighborhoodVerdict v;
  v.pass = true;
  TruncatedGraph g = sample_truncated_graph(f, window, Mode::attentive, res);
  for (const GraphPoint& p : g.points) {
    PWSet set = sc_derivative(f, p.x, p.xstar, Mode::attentive);
    ++v.tested_points;
    for (const PWPair& pw : set.pairs) {
      double scale = 1.0 + spectral_norm(pw.W) + std::abs(s);
      double me = min_eig(pw.P * pw.W * pw.P - s * pw.P);
      v.min_eig = std::min(v.min_eig, me);
      if (me < -tol::psd_rel * scale && v.pass) {
        v.pass = false;
        v.has_witness = true;
        v.witness_x = p.x;
        v.witness_xstar = p.xstar;
        v.witness_p = pw.P;
        v.witness_w = pw.W;
      }
    }
  }
  return v;
}

namespace {

// min of q(theta) = cos sin - s cos^2 over a closed sector.
double sector_min_rayleigh(const ConePiece& piece, double s) {
  auto q = [&](double t) {
    double c = std::cos(t), sn = std::sin(t);
    return c * sn - s * c * c;
  };
  double best = std::min(q(piece.theta_lo), q(piece.theta_hi));
  // stationary points: cos(2t) + s sin(2t) = 0
  double base = std::atan2(-1.0, s);  // one solution of tan(2t) = -1/s
  for (int j = -4; j <= 8; ++j) {
    double t = 0.5 * (base + j * kPi);
    if (t >= piece.theta_lo - 1e-14 && t <= piece.theta_hi + 1e-14) best = std::min(best, q(t));
  }
  return best;
}

}  // namespace

RayleighVerdict coderivative_rayleigh_1d(const ConeDescription1D& cone, double s) {
  RayleighVerdict v;
  v.min_value = kInf;
  for (const ConePiece& piece : cone.coderivative_graph)
    v.min_value = std::min(v.min_value, sector_min_rayleigh(piece, s));
  if (!std::isfinite(v.min_value)) v.min_value = 0.0;  // empty cone: only z = 0
  v.pass = v.min_value >= -1e-12 * (1.0 + std::abs(s));
  return v;
}

TiltRayleighResult tilt_rayleigh_1d(const ConeDescription1D& cone) {
  TiltRayleighResult r;
  r.tilt_stable = true;
  bool any_nonzero_z = false;

  // Evaluates |z|^2/<z*,z> at the direction theta; 0/0 := 0 on the z = 0 axis.
  auto eval_dir = [&](double t) {
    double c = std::cos(t), sn = std::sin(t);
    if (std::abs(c) <= 1e-12) return;  // z = 0
    any_nonzero_z = true;
    if (c * sn <= 1e-15) {  // z != 0 with <z*,z> <= 0
      r.tilt_stable = false;
      r.value = kInf;
      return;
    }
    if (r.tilt_stable) r.value = std::max(r.value, c / sn);
  };

  for (const ConePiece& piece : cone.coderivative_graph) {
    if (piece.theta_hi - piece.theta_lo <= 1e-14) {
      eval_dir(piece.theta_lo);
      continue;
    }
    // Split at quadrant boundaries; the sign of cos*sin is constant per subarc
    // and cot is monotone there, so endpoints and midpoints decide.
    std::vector<double> cuts{piece.theta_lo, piece.theta_hi};
    for (int j = -4; j <= 12; ++j) {
      double b = j * kPi / 2.0;
      if (b > piece.theta_lo + 1e-14 && b < piece.theta_hi - 1e-14) cuts.push_back(b);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      eval_dir(cuts[i]);
      eval_dir(0.5 * (cuts[i] + cuts[i + 1]));
      eval_dir(cuts[i + 1]);
    }
  }
  if (r.tilt_stable && !any_nonzero_z) r.degenerate_zero = true;
  return r;
}

BoundReport bound_report(const PWSet& set) {
  BoundReport b;
  b.varco = varco_bound(set);
  b.tilt = tilt_bound(set);
  b.reciprocity_applicable =
      b.tilt.tilt_stable && std::isfinite(b.varco.value) && b.varco.value > 0.0;
  if (b.reciprocity_applicable) {
    b.reciprocity_gap = std::abs(b.tilt.value - 1.0 / b.varco.value);
    b.reciprocity_ok = b.reciprocity_gap <= 1e-10 * (1.0 + b.tilt.value);
  }
  return b;
}

}  // namespace va
