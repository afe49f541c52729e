#include "va/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace va {

namespace {

bool near(double a, double b, double eps) {
  return std::abs(a - b) <= eps * (1.0 + std::max(std::abs(a), std::abs(b)));
}

// Accepts decimals, "p/q" rationals and +-inf spellings.
double parse_number_impl(const std::string& s) {
  std::string t = s;
  t.erase(std::remove_if(t.begin(), t.end(), [](char c) { return c == ' '; }), t.end());
  if (t == "inf" || t == "+inf") return kInf;
  if (t == "-inf") return -kInf;
  auto slash = t.find('/');
  if (slash != std::string::npos) {
    double num = std::stod(t.substr(0, slash));
    double den = std::stod(t.substr(slash + 1));
    if (den == 0.0) throw error("rational with zero denominator: " + s);
    return num / den;
  }
  std::size_t pos = 0;
  double v = std::stod(t, &pos);
  if (pos != t.size()) throw error("malformed number: " + s);
  return v;
}

}  // namespace

double parse_exact_number(const std::string& s) { return parse_number_impl(s); }

bool SubgradientSet::empty() const {
  return !has_interval && isolated.empty() && !has_cone;
}

bool SubgradientSet::contains1(double xstar, double eps) const {
  if (has_cone) return contains(vec1(xstar), eps);
  if (has_interval && xstar >= lo - eps && xstar <= hi + eps) return true;
  for (double p : isolated)
    if (std::abs(p - xstar) <= eps) return true;
  return false;
}

bool SubgradientSet::contains(const Vec& xstar, double eps) const {
  if (!has_cone) {
    if (xstar.size() != 1) return false;
    return contains1(xstar[0], eps);
  }
  Vec v = xstar - apex;
  if (v.norm() <= eps) return true;
  return cone_contains(gens, v, eps);
}

bool Polyhedron::contains(const Vec& x, double eps) const {
  for (int i = 0; i < m(); ++i) {
    double lhs = a.row(i).dot(x);
    if (lhs > rhs[i] + eps * (1.0 + std::abs(rhs[i]) + a.row(i).norm() * x.norm()))
      return false;
  }
  return true;
}

std::vector<int> Polyhedron::active_set(const Vec& x, double eps) const {
  std::vector<int> act;
  for (int i = 0; i < m(); ++i) {
    double lhs = a.row(i).dot(x);
    if (std::abs(lhs - rhs[i]) <= eps * (1.0 + std::abs(rhs[i]) + a.row(i).norm() * x.norm()))
      act.push_back(i);
  }
  return act;
}

bool cone_contains(const Mat& gens, const Vec& v, double eps) {
  const int k = static_cast<int>(gens.cols());
  const double scale = 1.0 + v.norm();
  if (v.norm() <= eps * scale) return true;
  if (k == 0) return false;
  if (k > 16) throw error("cone_contains: too many generators");
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> idx;
    for (int j = 0; j < k; ++j)
      if (mask & (1u << j)) idx.push_back(j);
    if (static_cast<int>(idx.size()) > gens.rows()) continue;
    Mat sub(gens.rows(), idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) sub.col(j) = gens.col(idx[j]);
    Vec lam = sub.colPivHouseholderQr().solve(v);
    if ((sub * lam - v).norm() > eps * scale) continue;
    if ((lam.array() >= -eps * scale).all()) return true;
  }
  return false;
}

FunctionSpec FunctionSpec::make_smooth_poly(Poly p, std::string name) {
  if (p.degree() > 6) throw error("polynomial degree exceeds catalog cap 6");
  FunctionSpec f;
  f.kind_ = Kind::smooth_poly;
  f.poly_ = std::move(p);
  f.name_ = std::move(name);
  return f;
}

FunctionSpec FunctionSpec::make_piecewise(std::vector<Branch> branches, std::string name) {
  if (branches.empty()) throw error("piecewise spec needs at least one branch");
  std::sort(branches.begin(), branches.end(),
            [](const Branch& a, const Branch& b) { return a.lo < b.lo; });
  for (const auto& br : branches) {
    if (!(br.lo < br.hi)) throw error("branch interval must satisfy lo < hi");
    if (br.poly.degree() > 6) throw error("branch degree exceeds catalog cap 6");
    if (br.closed_lo && !std::isfinite(br.lo)) throw error("closed endpoint at -inf");
    if (br.closed_hi && !std::isfinite(br.hi)) throw error("closed endpoint at +inf");
    if (br.value_lo && !br.closed_lo) throw error("explicit value at open endpoint");
    if (br.value_hi && !br.closed_hi) throw error("explicit value at open endpoint");
  }
  for (std::size_t i = 0; i + 1 < branches.size(); ++i) {
    const Branch& a = branches[i];
    const Branch& b = branches[i + 1];
    if (a.hi != b.lo) throw error("branches must tile an interval without gaps or overlap");
    if (a.closed_hi && b.closed_lo)
      throw error("breakpoint value owned by two branches");
    if (!a.closed_hi && !b.closed_lo)
      throw error("breakpoint value owned by no branch");
  }
  // lsc at every breakpoint: the owned value must not exceed one-sided limits.
  for (std::size_t i = 0; i + 1 < branches.size(); ++i) {
    const Branch& a = branches[i];
    const Branch& b = branches[i + 1];
    double bp = a.hi;
    double vl = a.poly(bp);
    double vr = b.poly(bp);
    double owned = a.closed_hi ? a.value_hi.value_or(vl) : b.value_lo.value_or(vr);
    if (owned > std::min(vl, vr) + tol::exact * (1.0 + std::abs(owned)))
      throw error("piecewise spec is not lower semicontinuous at breakpoint");
  }
  FunctionSpec f;
  f.kind_ = Kind::piecewise_1d;
  f.branches_ = std::move(branches);
  f.name_ = std::move(name);
  return f;
}

FunctionSpec FunctionSpec::make_quad_polyhedron(Mat A, Vec b, double c, Polyhedron C,
                                                std::string name) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || b.size() != n) throw error("quadratic data dimension mismatch");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 0.0) throw error("A must be symmetric");
  if (n > 4) throw error("dimension exceeds catalog cap 4");
  if (C.m() > 0 && C.n() != n) throw error("polyhedron dimension mismatch");
  if (C.m() > 8) throw error("polyhedron exceeds 8 constraints");
  FunctionSpec f;
  f.kind_ = Kind::quad_polyhedron;
  f.qa_ = std::move(A);
  f.qb_ = std::move(b);
  f.qc_ = c;
  f.poly_c_ = std::move(C);
  f.name_ = std::move(name);
  return f;
}

int FunctionSpec::dim() const {
  return kind_ == Kind::quad_polyhedron ? static_cast<int>(qa_.rows()) : 1;
}

const Poly& FunctionSpec::poly() const {
  if (kind_ != Kind::smooth_poly) throw error("not a smooth_poly spec");
  return poly_;
}
const std::vector<Branch>& FunctionSpec::branches() const {
  if (kind_ != Kind::piecewise_1d) throw error("not a piecewise spec");
  return branches_;
}
const Mat& FunctionSpec::quad_a() const { return qa_; }
const Vec& FunctionSpec::quad_b() const { return qb_; }
double FunctionSpec::quad_c() const { return qc_; }
const Polyhedron& FunctionSpec::polyhedron() const { return poly_c_; }

double evaluate1(const FunctionSpec& f, double x) {
  switch (f.kind()) {
    case FunctionSpec::Kind::smooth_poly:
      return f.poly()(x);
    case FunctionSpec::Kind::piecewise_1d: {
      for (const Branch& br : f.branches()) {
        if (x > br.lo && x < br.hi) return br.poly(x);
        if (x == br.lo && br.closed_lo) return br.value_lo.value_or(br.poly(x));
        if (x == br.hi && br.closed_hi) return br.value_hi.value_or(br.poly(x));
      }
      return kInf;
    }
    case FunctionSpec::Kind::quad_polyhedron:
      return evaluate(f, vec1(x));
  }
  throw error("unreachable");
}

double evaluate(const FunctionSpec& f, const Vec& x) {
  if (f.kind() == FunctionSpec::Kind::quad_polyhedron) {
    if (x.size() != f.dim()) throw error("point dimension mismatch");
    if (!f.polyhedron().contains(x)) return kInf;
    return 0.5 * x.dot(f.quad_a() * x) + f.quad_b().dot(x) + f.quad_c();
  }
  if (x.size() != 1) throw error("point dimension mismatch");
  return evaluate1(f, x[0]);
}

bool in_domain(const FunctionSpec& f, const Vec& x) { return std::isfinite(evaluate(f, x)); }

PointStructure1D point_structure_1d(const FunctionSpec& f, double x) {
  PointStructure1D ps;
  ps.x = x;
  if (f.kind() == FunctionSpec::Kind::smooth_poly) {
    const Poly& p = f.poly();
    Poly d1 = p.derivative();
    Poly d2 = d1.derivative();
    ps.fval = p(x);
    ps.is_breakpoint = false;
    ps.left = ps.right = SideInfo{true, p(x), d1(x), d2(x), true};
    ps.subdiff.n = 1;
    ps.subdiff.isolated = {d1(x)};
    return ps;
  }
  if (f.kind() != FunctionSpec::Kind::piecewise_1d)
    throw error("point_structure_1d needs a 1D spec");

  ps.fval = evaluate1(f, x);
  if (!std::isfinite(ps.fval)) throw domain_error("point outside dom f");

  const Branch* interior = nullptr;
  const Branch* left = nullptr;
  const Branch* right = nullptr;
  for (const Branch& br : f.branches()) {
    if (x > br.lo && x < br.hi) interior = &br;
    if (br.hi == x) left = &br;
    if (br.lo == x) right = &br;
  }

  if (interior) {
    Poly d1 = interior->poly.derivative();
    Poly d2 = d1.derivative();
    ps.is_breakpoint = false;
    ps.left = ps.right = SideInfo{true, interior->poly(x), d1(x), d2(x), true};
    ps.subdiff.n = 1;
    ps.subdiff.isolated = {d1(x)};
    return ps;
  }

  ps.is_breakpoint = true;
  auto side_info = [&](const Branch* br) {
    SideInfo s;
    if (!br) return s;
    s.exists = true;
    Poly d1 = br->poly.derivative();
    s.value_limit = br->poly(x);
    s.deriv_limit = d1(x);
    s.second_limit = d1.derivative()(x);
    s.attentive = near(s.value_limit, ps.fval, tol::exact);
    return s;
  };
  ps.left = side_info(left);
  ps.right = side_info(right);

  // Regular subdifferential: a side constrains only when its value limit
  // attains f(x); otherwise the difference quotient blows up on that side.
  double lo = (ps.left.exists && ps.left.attentive) ? ps.left.deriv_limit : -kInf;
  double hi = (ps.right.exists && ps.right.attentive) ? ps.right.deriv_limit : kInf;
  SubgradientSet& sd = ps.subdiff;
  sd.n = 1;
  if (lo < hi) {
    sd.has_interval = true;
    sd.lo = lo;
    sd.hi = hi;
  }
  auto add_isolated = [&](double v) {
    if (sd.has_interval && v >= sd.lo && v <= sd.hi) return;
    for (double q : sd.isolated)
      if (q == v) return;
    sd.isolated.push_back(v);
  };
  if (lo == hi) add_isolated(lo);
  // Attentive one-sided derivative limits are limiting subgradients.
  if (ps.left.exists && ps.left.attentive) add_isolated(ps.left.deriv_limit);
  if (ps.right.exists && ps.right.attentive) add_isolated(ps.right.deriv_limit);
  std::sort(sd.isolated.begin(), sd.isolated.end());
  return ps;
}

SubgradientSet subdifferential(const FunctionSpec& f, const Vec& x) {
  if (f.kind() == FunctionSpec::Kind::quad_polyhedron) {
    if (x.size() != f.dim()) throw error("point dimension mismatch");
    if (!f.polyhedron().contains(x)) throw domain_error("point outside dom f");
    SubgradientSet sd;
    sd.n = f.dim();
    sd.has_cone = true;
    sd.apex = f.quad_a() * x + f.quad_b();
    std::vector<int> act = f.polyhedron().active_set(x);
    sd.gens.resize(f.dim(), act.size());
    for (std::size_t j = 0; j < act.size(); ++j)
      sd.gens.col(j) = f.polyhedron().a.row(act[j]).transpose();
    return sd;
  }
  if (x.size() != 1) throw error("point dimension mismatch");
  return point_structure_1d(f, x[0]).subdiff;
}

SubgradientSet subdifferential1(const FunctionSpec& f, double x) {
  return subdifferential(f, vec1(x));
}

std::vector<double> breakpoints_1d(const FunctionSpec& f, double xlo, double xhi) {
  std::vector<double> bps;
  if (f.kind() != FunctionSpec::Kind::piecewise_1d) return bps;
  auto push = [&](double b) {
    if (!std::isfinite(b) || b < xlo || b > xhi) return;
    for (double q : bps)
      if (q == b) return;
    bps.push_back(b);
  };
  for (const Branch& br : f.branches()) {
    push(br.lo);
    push(br.hi);
  }
  std::sort(bps.begin(), bps.end());
  return bps;
}

RegularProbeResult regular_subgradient_probe(const FunctionSpec& f, const Vec& xbar,
                                             const Vec& xbarstar, double radius, int grid,
                                             double eps) {
  const int n = f.dim();
  if (xbar.size() != n || xbarstar.size() != n) throw error("dimension mismatch");
  double fbar = evaluate(f, xbar);
  if (!std::isfinite(fbar)) throw domain_error("anchor outside dom f");

  RegularProbeResult res;
  res.worst_ratio = kInf;
  res.overall_worst = kInf;
  const int levels = 8;
  const int m = std::max(grid | 1, 5);  // odd, so the center is a grid point
  std::vector<int> idx(n, 0);
  for (int level = 0; level < levels; ++level) {
    double r = radius / static_cast<double>(1 << level);
    double level_worst = kInf;
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      Vec x(n);
      for (int d = 0; d < n; ++d)
        x[d] = xbar[d] + (idx[d] - (m - 1) / 2) * (2.0 * r / (m - 1));
      double dist = (x - xbar).norm();
      if (dist > 0.0 && dist <= r) {
        double fx = evaluate(f, x);
        if (std::isfinite(fx)) {
          double ratio = (fx - fbar - xbarstar.dot(x - xbar)) / dist;
          if (ratio < level_worst) level_worst = ratio;
          if (ratio < res.overall_worst) {
            res.overall_worst = ratio;
            res.witness = x;
          }
        }
      }
      int d = 0;
      while (d < n && ++idx[d] == m) idx[d++] = 0;
      if (d == n) break;
    }
    if (level == levels - 1) res.worst_ratio = level_worst;
  }
  if (!std::isfinite(res.worst_ratio)) res.worst_ratio = 0.0;  // nothing to test
  res.pass = res.worst_ratio >= -eps;
  return res;
}

namespace {

std::vector<double> parse_args(const std::string& name, std::size_t open) {
  if (name.back() != ')') throw error("unknown builtin: " + name);
  std::string inner = name.substr(open + 1, name.size() - open - 2);
  std::vector<double> args;
  std::stringstream ss(inner);
  std::string tok;
  while (std::getline(ss, tok, ',')) args.push_back(parse_exact_number(tok));
  if (args.empty()) throw error("builtin needs arguments: " + name);
  return args;
}

}  // namespace

FunctionSpec builtin(const std::string& name) {
  if (name == "f1_neg_quartic")
    return FunctionSpec::make_smooth_poly(Poly{0, 0, 0, 0, -1}, name);
  if (name == "f2_zero") return FunctionSpec::make_smooth_poly(Poly{0}, name);
  if (name == "abs") {
    Branch l{-kInf, 0.0, false, true, Poly{0, -1}, {}, {}};
    Branch r{0.0, kInf, false, false, Poly{0, 1}, {}, {}};
    return FunctionSpec::make_piecewise({l, r}, name);
  }
  if (name == "indicator_halfline") {
    Branch b{0.0, kInf, true, false, Poly{0}, {}, {}};
    return FunctionSpec::make_piecewise({b}, name);
  }
  if (name == "flagship_jump") {
    Branch l{-kInf, 0.0, false, true, Poly{0}, {}, {}};
    Branch r{0.0, kInf, false, false, Poly{1, -1}, {}, {}};
    return FunctionSpec::make_piecewise({l, r}, name);
  }
  auto open = name.find('(');
  if (open != std::string::npos) {
    std::string head = name.substr(0, open);
    std::vector<double> args = parse_args(name, open);
    if (head == "quad") {
      if (args.size() != 1) throw error("quad(a) takes one argument");
      return FunctionSpec::make_smooth_poly(Poly{0, 0, args[0] / 2.0}, name);
    }
    if (head == "orthant_quad") {
      int n = static_cast<int>(args.size());
      if (n < 1 || n > 4) throw error("orthant_quad takes 1..4 diagonal entries");
      Mat A = Mat::Zero(n, n);
      for (int i = 0; i < n; ++i) A(i, i) = args[i];
      Polyhedron C;
      C.a = -Mat::Identity(n, n);
      C.rhs = Vec::Zero(n);
      return FunctionSpec::make_quad_polyhedron(A, Vec::Zero(n), 0.0, C, name);
    }
  }
  throw error("unknown builtin: " + name);
}

std::vector<std::string> builtin_names() {
  return {"f1_neg_quartic", "f2_zero",  "abs",
          "indicator_halfline", "flagship_jump", "quad(a)",
          "orthant_quad(d1,...,dn)"};
}

}  // namespace va
