#pragma once

#include <vector>

#include "va/catalog.hpp"
#include "va/scderiv.hpp"
#include "va/subspace.hpp"
#include "va/types.hpp"

namespace va {

// g(x) = c + b'x + (1/2) x'Hx with H symmetric.
struct QuadraticPerturbation {
  double c = 0.0;
  Vec b;
  Mat H;

  static QuadraticPerturbation general(double c, Vec b, Mat H);
  // g(x) = <ystar, x - anchor> + (t/2)|x - anchor|^2, expanded exactly.
  static QuadraticPerturbation tilt_curvature(const Vec& anchor, const Vec& ystar, double t);

  int dim() const { return static_cast<int>(b.size()); }
  double value(const Vec& x) const { return c + b.dot(x) + 0.5 * x.dot(H * x); }
  Vec gradient(const Vec& x) const { return b + H * x; }
};

// Exact catalog member for f + g, with coefficients merged per kind.
FunctionSpec add_quadratic(const FunctionSpec& f, const QuadraticPerturbation& q);

// Sum rule on (P,W) pairs: {(P, PHP + W)}.
PWSet transform_pw(const PWSet& set, const Mat& H);

// Applies [[I,0],[H,I]] to each basis and re-orthonormalizes.
std::vector<Subspace2n> transform_subspaces(const std::vector<Subspace2n>& subspaces,
                                            const Mat& H);

}  // namespace va
