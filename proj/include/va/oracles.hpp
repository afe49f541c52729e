#pragma once

#include <utility>
#include <vector>

#include "va/catalog.hpp"
#include "va/graph.hpp"
#include "va/types.hpp"

namespace va {

// Brute-force check of f(x') >= f(x) + <x*,x'-x> + (s/2)|x'-x|^2 over all
// sampled graph points (x,x*) and all grid points x' of U.
struct GrowthResult {
  bool pass = false;
  double margin = kInf;  // min of LHS - RHS over tested tuples
  Vec witness_x, witness_xstar, witness_xprime;
  long tuples_tested = 0;
};

GrowthResult check_quadratic_growth(const FunctionSpec& f, const Vec& xbar,
                                    const Vec& xbarstar, double s, const Window& window,
                                    const Resolution& res = {});

// All-pairs monotonicity <y*-x*,y-x> >= s|y-x|^2 over a localization sample.
struct MonotoneResult {
  bool pass = false;
  double margin = kInf;
  GraphPoint worst_a, worst_b;
  long pairs_tested = 0;
};

MonotoneResult check_monotone(const FunctionSpec& f, const Vec& xbar, const Vec& xbarstar,
                              double s, double eps, Mode mode, const Resolution& res = {});

// Same test over an explicit window (decoupled radii and rho).
MonotoneResult check_monotone_window(const FunctionSpec& f, const Window& window, double s,
                                     Mode mode, const Resolution& res = {});

// Smallest prox parameter supported by the samples: max over tuples of
// 2(f(x)+<x*,x'-x>-f(x'))/|x'-x|^2, clamped at 0.
struct ProxEstimate {
  double r_hat = 0.0;
  Vec witness_x, witness_xstar, witness_xprime;
  long tuples_tested = 0;
};

ProxEstimate estimate_prox_regularity(const FunctionSpec& f, const Vec& xbar,
                                      const Vec& xbarstar, const Window& window,
                                      const Resolution& res = {});

// Grid probe of M(t) = argmin{ f(x) - <base_tilt + t, x> : x in ball(xbar,gamma) }.
struct TiltProbeResult {
  bool multivalued_detected = false;
  Vec multivalued_at;
  double lipschitz = 0.0;        // max pairwise difference quotient of the selection
  double max_jump = 0.0;         // max |M(t_i)-M(t_j)| over adjacent tilts
  bool jump_detected = false;    // adjacent jump that survives tilt subdivision
  bool not_tilt_stable = false;  // multivalued or jump detected
  std::vector<std::pair<Vec, Vec>> samples;  // (tilt, minimizer)
};

struct TiltProbeParams {
  int tilt_grid = 9;         // per-axis tilt samples (odd, includes 0)
  int min_grid = 401;        // per-axis minimization samples
  int refine_levels = 6;
  double tie_rel = 1e-10;    // multivaluedness value tolerance
  double tie_cells = 10.0;   // minimizer separation in grid cells
  double jump_fraction = 0.25;  // jump size relative to gamma that flags instability
  int confirm_subdiv = 8;       // tilt subdivisions used to confirm a jump
};

TiltProbeResult tilt_probe(const FunctionSpec& f, const Vec& xbar, const Vec& base_tilt,
                           double gamma, double v_radius, const TiltProbeParams& params = {});

// hhat(x') = sup{ fval + <x*, x'-x> } over the sampled graph.
class AffineMinorant {
 public:
  explicit AffineMinorant(std::vector<GraphPoint> pts) : pts_(std::move(pts)) {}
  double operator()(const Vec& x) const;
  const std::vector<GraphPoint>& points() const { return pts_; }

 private:
  std::vector<GraphPoint> pts_;
};

struct MinorantResult {
  AffineMinorant hhat;
  bool minorant_ok = false;   // hhat <= f on the tested grid of U
  bool graph_tight = false;   // hhat = f at every sample point
  double max_violation = 0.0; // max of hhat - f over the U grid (clamped at 0)
  double max_graph_gap = 0.0; // max |hhat - f| at sample points
  Vec worst_x;
};

MinorantResult build_affine_minorant(const TruncatedGraph& g, const FunctionSpec& f);

// Bisection on s of attentive monotonicity; bracket width 1e-3.
struct VarcoBracket {
  bool bracketed = false;
  double s_pass = -kInf;  // largest tested s that passed
  double s_fail = kInf;   // smallest tested s that failed
  std::string note;
};

VarcoBracket varco_empirical(const FunctionSpec& f, const Vec& xbar, const Vec& xbarstar,
                             double eps, const Resolution& res, double s_lo, double s_hi,
                             double width = 1e-3);

}  // namespace va
