#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "va/poly.hpp"
#include "va/types.hpp"

namespace va {

// One polynomial piece of a piecewise 1D function. A closed endpoint owns the
// function value there; `value_lo`/`value_hi` override the polynomial limit,
// which permits lsc functions with isolated drops.
struct Branch {
  double lo = -kInf;
  double hi = kInf;
  bool closed_lo = false;
  bool closed_hi = false;
  Poly poly;
  std::optional<double> value_lo;
  std::optional<double> value_hi;
};

// Exact description of a limiting subdifferential at one point.
//   n == 1: a closed interval (possibly unbounded or absent) plus isolated points.
//   quad_polyhedron (any n): apex + polyhedral cone spanned by `gens` columns.
struct SubgradientSet {
  int n = 1;
  bool domain_error_flag = false;  // x outside dom f

  bool has_interval = false;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> isolated;

  bool has_cone = false;
  Vec apex;
  Mat gens;  // n x k, cone generators

  bool empty() const;
  bool contains1(double xstar, double eps = tol::membership) const;
  bool contains(const Vec& xstar, double eps = tol::membership) const;
};

// Polyhedron {x : a_i'x <= rhs_i}, row-wise constraints, m <= 8.
struct Polyhedron {
  Mat a;    // m x n
  Vec rhs;  // m

  int m() const { return static_cast<int>(a.rows()); }
  int n() const { return static_cast<int>(a.cols()); }
  bool contains(const Vec& x, double eps = tol::membership) const;
  std::vector<int> active_set(const Vec& x, double eps = tol::membership) const;
};

class FunctionSpec {
 public:
  enum class Kind { smooth_poly, piecewise_1d, quad_polyhedron };

  static FunctionSpec make_smooth_poly(Poly p, std::string name = "");
  static FunctionSpec make_piecewise(std::vector<Branch> branches, std::string name = "");
  static FunctionSpec make_quad_polyhedron(Mat A, Vec b, double c, Polyhedron C,
                                           std::string name = "");

  Kind kind() const { return kind_; }
  int dim() const;
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const Poly& poly() const;                    // smooth_poly
  const std::vector<Branch>& branches() const; // piecewise_1d
  const Mat& quad_a() const;                   // quad_polyhedron
  const Vec& quad_b() const;
  double quad_c() const;
  const Polyhedron& polyhedron() const;

 private:
  FunctionSpec() = default;
  Kind kind_ = Kind::smooth_poly;
  std::string name_;
  Poly poly_;
  std::vector<Branch> branches_;
  Mat qa_;
  Vec qb_;
  double qc_ = 0.0;
  Polyhedron poly_c_;
};

double evaluate(const FunctionSpec& f, const Vec& x);
double evaluate1(const FunctionSpec& f, double x);
bool in_domain(const FunctionSpec& f, const Vec& x);

// Exact limiting subdifferential. Throws domain_error outside dom f.
SubgradientSet subdifferential(const FunctionSpec& f, const Vec& x);
SubgradientSet subdifferential1(const FunctionSpec& f, double x);

// One-sided structure of a piecewise_1d / smooth_poly function at a point,
// used by the graph and SC-derivative machinery.
struct SideInfo {
  bool exists = false;
  double value_limit = 0.0;   // lim of branch values into x
  double deriv_limit = 0.0;   // lim of branch derivative
  double second_limit = 0.0;  // lim of branch second derivative
  bool attentive = false;     // value_limit == f(x)
};

struct PointStructure1D {
  double x = 0.0;
  double fval = 0.0;
  bool is_breakpoint = false;  // false: interior smooth point of a branch
  SideInfo left, right;
  SubgradientSet subdiff;
};

PointStructure1D point_structure_1d(const FunctionSpec& f, double x);

// Breakpoints (branch junctions and domain endpoints) inside [xlo, xhi].
std::vector<double> breakpoints_1d(const FunctionSpec& f, double xlo, double xhi);

// Verdict of the regular-subgradient test at (xbar, xbarstar): the minimum of
// (f(x)-f(xbar)-<xbarstar,x-xbar>)/|x-xbar| over shrinking grids must not stay
// below -eps.
struct RegularProbeResult {
  bool pass = false;
  double worst_ratio = 0.0;      // over the finest grid level
  double overall_worst = 0.0;    // over all levels
  Vec witness;
};

RegularProbeResult regular_subgradient_probe(const FunctionSpec& f, const Vec& xbar,
                                             const Vec& xbarstar, double radius, int grid,
                                             double eps = 1e-6);

// Named catalog. Parameterized entries: quad(a), orthant_quad(d1,...,dn).
FunctionSpec builtin(const std::string& name);
std::vector<std::string> builtin_names();

// Exact membership of v in cone{columns of gens}, by enumeration of linearly
// independent generator subsets (m <= 8).
bool cone_contains(const Mat& gens, const Vec& v, double eps = tol::membership);

// Accepts decimals, "p/q" rationals and +-inf spellings.
double parse_exact_number(const std::string& s);

}  // namespace va
