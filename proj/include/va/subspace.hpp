#pragma once

#include "va/types.hpp"

namespace va {

// n-dimensional subspace of R^{2n}, stored as a 2n x n orthonormal basis.
class Subspace2n {
 public:
  // Orthonormalizes the span of `cols`; the span must have dimension rows/2.
  static Subspace2n from_span(const Mat& cols);

  int half_dim() const { return static_cast<int>(basis_.cols()); }
  const Mat& basis() const { return basis_; }
  Mat projector() const { return basis_ * basis_.transpose(); }

 private:
  Subspace2n() = default;
  Mat basis_;
};

// Metric on Z_nn: spectral norm of the projector difference.
double dz_distance(const Subspace2n& l1, const Subspace2n& l2);

// L* = {(v*,u*) : (u*,-v*) in L^perp}. Involution and d_Z isometry.
Subspace2n adjoint(const Subspace2n& l);

// Symmetric matrix pair with P^2 = P and W(I-P) = I-P; symmetry is exact by
// construction (upper triangle mirrored).
struct PWPair {
  Mat P;
  Mat W;

  PWPair(Mat p, Mat w);
  int n() const { return static_cast<int>(P.rows()); }
};

struct PWAxiomReport {
  double sym_p = 0.0;
  double sym_w = 0.0;
  double idempotency = 0.0;    // P^2 - P
  double complement = 0.0;     // W(I-P) - (I-P)
  double commute = 0.0;        // PW - WP
  double product = 0.0;        // PW - PWP
  double decomposition = 0.0;  // W - (PWP + (I-P))
  double worst = 0.0;
  bool pass = false;
};

PWAxiomReport check_pw_axioms(const Mat& P, const Mat& W, double eps = tol::pw_axiom);

// Unique (P,W) with L = rge(P,W). Throws not_self_adjoint_error if L admits no
// such representation (equivalently L != L*).
PWPair pw_from_subspace(const Subspace2n& l);

// Orthonormalized basis of {(Pp, Wp) : p in R^n}; validates the axioms first.
Subspace2n subspace_from_pw(const PWPair& pw);

}  // namespace va
