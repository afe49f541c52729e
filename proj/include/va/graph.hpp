#pragma once

#include <iosfwd>
#include <vector>

#include "va/catalog.hpp"
#include "va/types.hpp"

namespace va {

struct GraphPoint {
  Vec x;
  Vec xstar;
  double fval = 0.0;
};

// Euclidean-ball window U x V around an anchor, plus the f-truncation level rho.
struct Window {
  Vec x_center;
  Vec xstar_center;
  double x_radius = 0.25;
  double xstar_radius = 0.25;
  double rho = kInf;

  static Window around(const Vec& x, const Vec& xstar, double rx, double rv, double rho);
  bool contains(const Vec& x, const Vec& xstar) const;
};

enum class Mode { attentive, plain };

struct Resolution {
  int grid = 201;         // samples per axis across a window diameter
  int fan_interior = 33;  // interior samples per bounded subgradient segment
  int grid2 = 33;         // per-axis samples on 2-dimensional face strata

  Resolution refined() const {
    return Resolution{2 * (grid - 1) + 1, fan_interior, 2 * (grid2 - 1) + 1};
  }
};

struct TruncatedGraph {
  std::vector<GraphPoint> points;
  Window window;
  Mode mode = Mode::attentive;
  Resolution res;
};

// Deterministic sample of gph_rho(subdiff f) within the window. Attentive mode
// keeps only points with fval < rho. Grids are nested under Resolution::refined.
TruncatedGraph sample_truncated_graph(const FunctionSpec& f, const Window& w, Mode mode,
                                      const Resolution& res = {});

// f-attentive eps-localization around (xbar, xbarstar): balls of radius eps and
// truncation rho = f(xbar) + eps. Plain mode drops the truncation.
TruncatedGraph localization(const FunctionSpec& f, const Vec& xbar, const Vec& xbarstar,
                            double eps, Mode mode, const Resolution& res = {});

struct ClosednessIssue {
  Vec limit_x;
  Vec limit_xstar;
  double fval_along = 0.0;  // fval carried by the accumulating samples
  double f_at_limit = 0.0;
  double deviation = 0.0;
};

struct ClosednessReport {
  bool pass = true;
  double max_deviation = 0.0;     // worst fval gap at an accumulation point
  double max_fval_cauchy = 0.0;   // worst fval increment along refinement chains
  bool membership_ok = true;      // every sample re-verified against subdifferential
  std::vector<ClosednessIssue> issues;
};

// Refines the sample twice and checks that fvals converge along refinement
// chains and that accumulation points of the sample stay in the graph. Plain
// samples of functions that are not subdifferentially continuous get flagged.
ClosednessReport closedness_probe(const TruncatedGraph& g, const FunctionSpec& f);

// Tabular export: x_1..x_n  xstar_1..xstar_n  f, one point per line.
void export_graph(const TruncatedGraph& g, std::ostream& os);

}  // namespace va
