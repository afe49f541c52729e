#pragma once

#include <string>
#include <vector>

#include "va/graph.hpp"
#include "va/scderiv.hpp"
#include "va/types.hpp"

namespace va {

// varco = min over pairs of the smallest eigenvalue of PWP restricted to
// rge P, with the 0/0 := +inf convention for P = 0.
struct VarcoResult {
  double value = kInf;
  int achieving_pair = -1;
  std::vector<double> per_pair;
  bool convention_inf_used = false;  // some pair contributed via P = 0
};

VarcoResult varco_bound(const PWSet& set);

// tilt = sup ||P W^{-1}|| when every W is nonsingular and every PW^{-1} is
// positive semidefinite; otherwise the anchor is not a tilt-stable minimizer.
struct TiltResult {
  bool tilt_stable = false;
  double value = 0.0;
  int achieving_pair = -1;
  int offending_pair = -1;
  std::string reason;
  std::vector<double> per_pair;
};

TiltResult tilt_bound(const PWSet& set);

// W - sP positive semidefinite for every pair. `boundary` marks s equal to the
// exact bound, where the PSD verdict alone decides.
struct PointbasedVerdict {
  bool pass = false;
  bool boundary = false;
  int failing_pair = -1;
  double min_eig = 0.0;
};

PointbasedVerdict test_pointbased(const PWSet& set, double s);

// PWP - sP positive semidefinite at every sampled graph point of the window.
struct NeighborhoodVerdict {
  bool pass = false;
  int tested_points = 0;
  double min_eig = kInf;
  bool has_witness = false;
  Vec witness_x, witness_xstar;
  Mat witness_p, witness_w;
};

NeighborhoodVerdict test_neighborhood(const FunctionSpec& f, const Vec& xbar,
                                      const Vec& xbarstar, double s, const Window& window,
                                      const Resolution& res = {});

// <z*,z> >= s|z|^2 over the 1D coderivative cone, analytically per piece.
struct RayleighVerdict {
  bool pass = false;
  double min_value = 0.0;  // min of <z*,z> - s|z|^2 over unit vectors of the cone
};

RayleighVerdict coderivative_rayleigh_1d(const ConeDescription1D& cone, double s);

// sup |z|^2/<z*,z> over the 1D coderivative cone with the 0/0 := 0 convention.
struct TiltRayleighResult {
  bool tilt_stable = false;
  double value = 0.0;
  bool degenerate_zero = false;  // only z = 0 pieces contributed (0/0 := 0)
};

TiltRayleighResult tilt_rayleigh_1d(const ConeDescription1D& cone);

struct BoundReport {
  VarcoResult varco;
  TiltResult tilt;
  bool reciprocity_applicable = false;  // 0 < varco < inf and tilt-stable
  bool reciprocity_ok = true;           // tilt == 1/varco to 1e-10
  double reciprocity_gap = 0.0;
};

BoundReport bound_report(const PWSet& set);

}  // namespace va
