#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "va/catalog.hpp"
#include "va/graph.hpp"
#include "va/subspace.hpp"
#include "va/types.hpp"

namespace va {

enum class Provenance { closed_form, numeric };

// Finite SC derivative at an anchor: a set of (P,W) pairs, deduplicated under
// d_Z and all passing the axioms.
struct PWSet {
  std::vector<PWPair> pairs;
  Provenance provenance = Provenance::closed_form;
  Vec anchor_x;
  Vec anchor_xstar;

  std::vector<Subspace2n> subspaces() const;
};

// Closed-form attentive (or plain) SC derivative per catalog class.
PWSet sc_derivative(const FunctionSpec& f, const Vec& xbar, const Vec& xbarstar,
                    Mode mode = Mode::attentive);

struct TangentFailure {
  enum class Reason { not_smooth, insufficient_samples } reason;
  double residual = 0.0;
  int samples = 0;
};

// Least-squares subspace fit to graph samples near `at` (radius in the joint
// (x,x*) metric). Returns TangentFailure when the local sample is not an
// n-dimensional flat within tolerance.
std::variant<Subspace2n, TangentFailure> estimate_tangent(const TruncatedGraph& g,
                                                          const GraphPoint& at, double radius,
                                                          double smooth_tol = 1e-7);

struct NumericParams {
  double r0 = 0.05;      // outermost annulus radius
  double r_min = 1e-6;   // innermost annulus radius
  int grid_1d = 257;     // per-axis resolution of each annulus sample, n = 1
  int grid_nd = 49;      // per-axis resolution, n >= 2
  double smooth_tol = 1e-7;   // relative residual gate for graphical smoothness
  double cluster_tol = 1e-4;  // d_Z matching of tangents across annuli
  int min_annuli = 3;         // persistence requirement
  int max_shell_points = 400; // tangent fits per annulus (deterministic stride)
};

// Numeric SC derivative: tangents at graphically smooth sample points on
// shrinking annuli around the anchor, clustered in d_Z. Attentive mode keeps
// the fval truncation coupled to the annulus radius.
PWSet sc_derivative_numeric(const FunctionSpec& f, const Vec& xbar, const Vec& xbarstar,
                            double eps, Mode mode, const NumericParams& params = {});

// Closed convex cone piece in R^2: the angular sector between theta_lo and
// theta_hi (width <= pi; rays have width 0; lines are stored as two rays).
struct ConePiece {
  double theta_lo = 0.0;
  double theta_hi = 0.0;

  bool contains(double x, double y, double eps = 1e-12) const;
};

struct ConeDescription1D {
  std::vector<ConePiece> normal_cone;         // f-attentive limiting normal cone
  std::vector<ConePiece> coderivative_graph;  // {(z,z*) : (z*,-z) in N^f}

  bool normal_contains(double w1, double w2) const;
  bool coderivative_contains(double z, double zstar) const;
};

// Exact f-attentive limiting normal cone of gph(subdiff f) at a 1D anchor and
// the induced coderivative graph.
ConeDescription1D attentive_coderivative_1d(const FunctionSpec& f, double xbar,
                                            double xbarstar, double eps);

// Symmetric Hausdorff distance between the subspace sets of two PWSets.
double dz_hausdorff(const PWSet& a, const PWSet& b);

}  // namespace va
