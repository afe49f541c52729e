#include "va/subspace.hpp"

#include <cmath>

namespace va {

namespace {

Mat mirror_upper(Mat m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < i; ++j) m(i, j) = m(j, i);
  return m;
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Subspace2n Subspace2n::from_span(const Mat& cols) {
  if (cols.rows() % 2 != 0) throw error("subspace basis must live in R^{2n}");
  const int n = static_cast<int>(cols.rows()) / 2;
  Eigen::JacobiSVD<Mat> svd(cols, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-10 * std::max(1.0, smax)) ++rank;
  if (rank != n) throw error("span does not have dimension n");
  Subspace2n l;
  l.basis_ = svd.matrixU().leftCols(n);
  return l;
}

double dz_distance(const Subspace2n& l1, const Subspace2n& l2) {
  if (l1.half_dim() != l2.half_dim()) throw error("subspace dimension mismatch");
  Mat diff = l1.projector() - l2.projector();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (diff + diff.transpose()));
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Subspace2n adjoint(const Subspace2n& l) {
  const int n = l.half_dim();
  // Orthonormal basis of L^perp from the full SVD of the basis.
  Eigen::JacobiSVD<Mat> svd(l.basis(), Eigen::ComputeFullU);
  Mat perp = svd.matrixU().rightCols(n);
  // (z1, z2) in L^perp corresponds to (-z2, z1) in L*.
  Mat mapped(2 * n, n);
  mapped.topRows(n) = -perp.bottomRows(n);
  mapped.bottomRows(n) = perp.topRows(n);
  return Subspace2n::from_span(mapped);
}

PWPair::PWPair(Mat p, Mat w) : P(mirror_upper(std::move(p))), W(mirror_upper(std::move(w))) {
  if (P.rows() != P.cols() || W.rows() != W.cols() || P.rows() != W.rows())
    throw error("PWPair needs square matrices of equal size");
}

PWAxiomReport check_pw_axioms(const Mat& P, const Mat& W, double eps) {
  PWAxiomReport r;
  const int n = static_cast<int>(P.rows());
  Mat I = Mat::Identity(n, n);
  r.sym_p = max_abs(P - P.transpose());
  r.sym_w = max_abs(W - W.transpose());
  r.idempotency = max_abs(P * P - P);
  r.complement = max_abs(W * (I - P) - (I - P));
  r.commute = max_abs(P * W - W * P);
  r.product = max_abs(P * W - P * W * P);
  r.decomposition = max_abs(W - (P * W * P + (I - P)));
  r.worst = std::max({r.sym_p, r.sym_w, r.idempotency, r.complement, r.commute, r.product,
                      r.decomposition});
  double scale = 1.0 + std::max(max_abs(P), max_abs(W));
  r.pass = r.worst <= eps * scale;
  return r;
}

PWPair pw_from_subspace(const Subspace2n& l) {
  const int n = l.half_dim();
  const Mat x_block = l.basis().topRows(n);
  const Mat y_block = l.basis().bottomRows(n);

  // P projects onto the x-component image of L.
  Eigen::JacobiSVD<Mat> svd(x_block, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double rank_tol = 1e-7;
  int k = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > rank_tol) ++k;
  Mat s_basis = svd.matrixU().leftCols(k);     // orthonormal basis of rge P
  Mat s_perp = svd.matrixU().rightCols(n - k); // basis of ker P
  Mat P = s_basis * s_basis.transpose();

  // The representation requires {0} x ker P to be contained in L.
  const Mat proj_l = l.projector();
  for (int j = 0; j < n - k; ++j) {
    Vec z = Vec::Zero(2 * n);
    z.tail(n) = s_perp.col(j);
    if ((proj_l * z - z).norm() > 1e-4)
      throw not_self_adjoint_error("subspace has no rge(P,W) representation");
  }

  // W maps s_j to the projected y-part of the basis solution of X a = s_j and
  // acts as the identity on ker P.
  Mat W = Mat::Identity(n, n) - P;
  for (int j = 0; j < k; ++j) {
    Vec alpha = svd.solve(s_basis.col(j));
    Vec y = y_block * alpha;
    W += (P * y) * s_basis.col(j).transpose();
  }
  if (max_abs(W - W.transpose()) > 1e-4 * (1.0 + max_abs(W)))
    throw not_self_adjoint_error("subspace has no symmetric W, L != L*");
  W = 0.5 * (W + W.transpose());
  P = 0.5 * (P + P.transpose());

  PWPair pair(std::move(P), std::move(W));
  PWAxiomReport rep = check_pw_axioms(pair.P, pair.W);
  if (!rep.pass) throw not_self_adjoint_error("recovered pair violates the axioms");
  return pair;
}

Subspace2n subspace_from_pw(const PWPair& pw) {
  PWAxiomReport rep = check_pw_axioms(pw.P, pw.W);
  if (!rep.pass) throw error("PW axioms violated, cannot build subspace");
  const int n = pw.n();
  Mat stacked(2 * n, n);
  stacked.topRows(n) = pw.P;
  stacked.bottomRows(n) = pw.W;
  return Subspace2n::from_span(stacked);
}

}  // namespace va
