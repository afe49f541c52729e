#include "va/analysis.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace va {

using njson = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

double jnum(const njson& j) {
  if (j.is_string()) return parse_exact_number(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  throw error("expected a number, got: " + j.dump());
}

Vec jvec(const njson& j) {
  if (!j.is_array()) throw error("expected an array, got: " + j.dump());
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = jnum(j[i]);
  return v;
}

Mat jmat(const njson& j) {
  if (!j.is_array() || j.empty()) throw error("expected a matrix, got: " + j.dump());
  Mat m(j.size(), j[0].size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != j[0].size()) throw error("ragged matrix");
    for (std::size_t k = 0; k < j[i].size(); ++k) m(i, k) = jnum(j[i][k]);
  }
  return m;
}

// Extended reals: JSON has no inf, so non-finite values are emitted as strings.
njson ext(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

njson to_json(const Vec& v) {
  njson a = njson::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

njson to_json(const Mat& m) {
  njson a = njson::array();
  for (int i = 0; i < m.rows(); ++i) {
    njson row = njson::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

njson pwset_json(const PWSet& set) {
  njson j;
  j["op"] = set.provenance == Provenance::closed_form ? "sc_derivative" : "sc_derivative_numeric";
  j["provenance"] = set.provenance == Provenance::closed_form ? "closed_form" : "numeric";
  j["anchor_x"] = to_json(set.anchor_x);
  j["anchor_xstar"] = to_json(set.anchor_xstar);
  njson pairs = njson::array();
  double worst_axiom = 0.0;
  double worst_selfadj = 0.0;
  for (const PWPair& p : set.pairs) {
    njson pj;
    pj["P"] = to_json(p.P);
    pj["W"] = to_json(p.W);
    PWAxiomReport ax = check_pw_axioms(p.P, p.W);
    pj["axiom_residual"] = ax.worst;
    worst_axiom = std::max(worst_axiom, ax.worst);
    Subspace2n l = subspace_from_pw(p);
    double sa = dz_distance(l, adjoint(l));
    pj["self_adjoint_gap"] = sa;
    worst_selfadj = std::max(worst_selfadj, sa);
    pairs.push_back(pj);
  }
  j["pairs"] = pairs;
  j["worst_axiom_residual"] = worst_axiom;
  j["worst_self_adjoint_gap"] = worst_selfadj;
  return j;
}

struct CrossChecks {
  njson list = njson::array();
  bool ok = true;

  void add(const std::string& name, bool pass, const std::string& detail) {
    njson c;
    c["name"] = name;
    c["ok"] = pass;
    c["detail"] = detail;
    list.push_back(c);
    ok = ok && pass;
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

Window AnalysisConfig::window(double fbar) const {
  return Window::around(anchor, subgradient, x_radius.value_or(eps), xstar_radius.value_or(eps),
                        rho.value_or(fbar + eps));
}

FunctionSpec parse_function_spec(const njson& j) {
  if (j.is_string()) return builtin(j.get<std::string>());
  if (j.contains("builtin")) return builtin(j["builtin"].get<std::string>());
  if (!j.contains("kind")) throw error("function spec needs a kind or builtin field");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "smooth_poly") {
    std::vector<double> c;
    for (const auto& v : j.at("coeffs")) c.push_back(jnum(v));
    return FunctionSpec::make_smooth_poly(Poly(c), j.value("name", ""));
  }
  if (kind == "piecewise_1d") {
    std::vector<Branch> branches;
    for (const auto& bj : j.at("branches")) {
      Branch b;
      b.lo = jnum(bj.at("lo"));
      b.hi = jnum(bj.at("hi"));
      b.closed_lo = bj.value("closed_lo", false);
      b.closed_hi = bj.value("closed_hi", false);
      std::vector<double> c;
      for (const auto& v : bj.at("coeffs")) c.push_back(jnum(v));
      b.poly = Poly(c);
      if (bj.contains("value_lo")) b.value_lo = jnum(bj["value_lo"]);
      if (bj.contains("value_hi")) b.value_hi = jnum(bj["value_hi"]);
      branches.push_back(std::move(b));
    }
    return FunctionSpec::make_piecewise(std::move(branches), j.value("name", ""));
  }
  if (kind == "quad_polyhedron") {
    Mat A = jmat(j.at("A"));
    Vec b = j.contains("b") ? jvec(j["b"]) : Vec(Vec::Zero(A.rows()));
    double c = j.contains("c") ? jnum(j["c"]) : 0.0;
    Polyhedron C;
    if (j.contains("constraints") && !j["constraints"].empty()) {
      const auto& cons = j["constraints"];
      C.a.resize(cons.size(), A.rows());
      C.rhs.resize(cons.size());
      for (std::size_t i = 0; i < cons.size(); ++i) {
        C.a.row(i) = jvec(cons[i].at("a")).transpose();
        C.rhs[i] = jnum(cons[i].at("rhs"));
      }
    } else {
      C.a.resize(0, A.rows());
      C.rhs.resize(0);
    }
    return FunctionSpec::make_quad_polyhedron(std::move(A), std::move(b), c, std::move(C),
                                              j.value("name", ""));
  }
  if (kind == "shifted") {
    FunctionSpec base = parse_function_spec(j.at("base"));
    QuadraticPerturbation q;
    if (j.contains("H")) {
      q = QuadraticPerturbation::general(j.contains("c") ? jnum(j["c"]) : 0.0, jvec(j.at("b")),
                                         jmat(j["H"]));
    } else {
      Vec anchor = j.contains("anchor") ? jvec(j["anchor"]) : Vec(Vec::Zero(base.dim()));
      Vec tilt = j.contains("tilt") ? jvec(j["tilt"]) : Vec(Vec::Zero(base.dim()));
      double t = j.contains("curvature") ? jnum(j["curvature"]) : 0.0;
      q = QuadraticPerturbation::tilt_curvature(anchor, tilt, t);
    }
    return add_quadratic(base, q);
  }
  throw error("unknown function kind: " + kind);
}

AnalysisConfig parse_config_text(const std::string& text) {
  njson j;
  try {
    j = njson::parse(text);
  } catch (const std::exception& e) {
    throw error(std::string("config parse error: ") + e.what());
  }
  AnalysisConfig cfg;
  if (!j.contains("function")) throw error("config needs a function field");
  njson fj = j["function"];
  if (fj.is_string() && fj.get<std::string>().find('.') != std::string::npos) {
    std::ifstream in(fj.get<std::string>());
    if (!in) throw error("cannot open function spec file: " + fj.get<std::string>());
    std::stringstream ss;
    ss << in.rdbuf();
    fj = njson::parse(ss.str());
  }
  cfg.function = parse_function_spec(fj);
  cfg.function_echo = fj;

  const int n = cfg.function.dim();
  cfg.anchor = j.contains("anchor") ? jvec(j["anchor"]) : Vec(Vec::Zero(n));
  cfg.subgradient = j.contains("subgradient") ? jvec(j["subgradient"]) : Vec(Vec::Zero(n));
  if (cfg.anchor.size() != n || cfg.subgradient.size() != n)
    throw error("anchor/subgradient dimension mismatch");

  if (j.contains("eps")) cfg.eps = jnum(j["eps"]);
  if (cfg.eps <= 0.0) throw error("eps must be positive");
  if (j.contains("resolution")) cfg.res.grid = j["resolution"].get<int>();
  if (j.contains("fan_interior")) cfg.res.fan_interior = j["fan_interior"].get<int>();
  if (cfg.res.grid < 3 || cfg.res.fan_interior < 1) throw error("resolution too small");
  if (j.contains("window")) {
    const auto& w = j["window"];
    if (w.contains("x_radius")) cfg.x_radius = jnum(w["x_radius"]);
    if (w.contains("xstar_radius")) cfg.xstar_radius = jnum(w["xstar_radius"]);
    if (w.contains("rho")) cfg.rho = jnum(w["rho"]);
    if ((cfg.x_radius && *cfg.x_radius <= 0) || (cfg.xstar_radius && *cfg.xstar_radius <= 0))
      throw error("window radii must be positive");
  }
  if (j.contains("s_values")) {
    cfg.s_values.clear();
    for (const auto& v : j["s_values"]) cfg.s_values.push_back(jnum(v));
  }
  if (j.contains("oracles")) {
    const auto& o = j["oracles"];
    cfg.oracles.growth = o.value("growth", true);
    cfg.oracles.monotone = o.value("monotone", true);
    cfg.oracles.prox = o.value("prox", true);
    cfg.oracles.tilt_probe = o.value("tilt_probe", true);
    cfg.oracles.minorant = o.value("minorant", true);
    cfg.oracles.varco_empirical = o.value("varco_empirical", true);
    cfg.oracles.numeric_sc = o.value("numeric_sc", true);
    cfg.oracles.neighborhood = o.value("neighborhood", true);
    cfg.oracles.coderivative = o.value("coderivative", true);
  }
  if (j.contains("tilt_probe")) {
    const auto& t = j["tilt_probe"];
    if (t.contains("gamma")) cfg.gamma = jnum(t["gamma"]);
    if (t.contains("v_radius")) cfg.v_radius = jnum(t["v_radius"]);
    if (t.contains("tilt_grid")) cfg.tilt_params.tilt_grid = t["tilt_grid"].get<int>();
    if (t.contains("min_grid")) cfg.tilt_params.min_grid = t["min_grid"].get<int>();
  }
  if (j.contains("varco_bracket")) {
    cfg.bracket_lo = jnum(j["varco_bracket"].at("lo"));
    cfg.bracket_hi = jnum(j["varco_bracket"].at("hi"));
  }
  if (j.contains("output")) {
    cfg.out_path = j["output"].value("path", "-");
    cfg.format = j["output"].value("format", "json");
  }
  cfg.seedless = j.value("seedless", false);

  // The anchor pair is validated before any analysis runs.
  double fbar = evaluate(cfg.function, cfg.anchor);
  if (!std::isfinite(fbar)) throw error("invalid anchor: outside dom f");
  if (!subdifferential(cfg.function, cfg.anchor).contains(cfg.subgradient)) {
    std::ostringstream os;
    os << "invalid anchor pair: subgradient [" << cfg.subgradient.transpose()
       << "] is not in the subdifferential at [" << cfg.anchor.transpose() << "]";
    throw error(os.str());
  }
  return cfg;
}

AnalysisConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

njson config_echo(const AnalysisConfig& cfg) {
  njson j;
  j["function"] = cfg.function_echo;
  j["function_name"] = cfg.function.name();
  j["anchor"] = to_json(cfg.anchor);
  j["subgradient"] = to_json(cfg.subgradient);
  j["eps"] = cfg.eps;
  j["resolution"] = cfg.res.grid;
  j["fan_interior"] = cfg.res.fan_interior;
  if (cfg.x_radius) j["x_radius"] = *cfg.x_radius;
  if (cfg.xstar_radius) j["xstar_radius"] = *cfg.xstar_radius;
  if (cfg.rho) j["rho"] = *cfg.rho;
  j["s_values"] = cfg.s_values;
  j["tilt_probe"] = {{"gamma", cfg.gamma},
                     {"v_radius", cfg.v_radius},
                     {"tilt_grid", cfg.tilt_params.tilt_grid},
                     {"min_grid", cfg.tilt_params.min_grid}};
  j["varco_bracket"] = {{"lo", cfg.bracket_lo}, {"hi", cfg.bracket_hi}};
  j["seedless"] = cfg.seedless;
  return j;
}

}  // namespace

AnalysisReport run_analysis(const AnalysisConfig& cfg, RunKind kind) {
  auto t_start = std::chrono::steady_clock::now();
  const FunctionSpec& f = cfg.function;
  const int n = f.dim();
  const double fbar = evaluate(f, cfg.anchor);
  const Window w = cfg.window(fbar);
  CrossChecks checks;

  njson doc;
  doc["version"] = kVersion;
  doc["run_kind"] = kind == RunKind::analyze   ? "analyze"
                    : kind == RunKind::bounds  ? "bounds"
                    : kind == RunKind::oracle  ? "oracle"
                                               : "compare";
  doc["config"] = config_echo(cfg);

  const bool want_criteria = kind != RunKind::oracle;
  const bool want_oracles = kind == RunKind::analyze || kind == RunKind::oracle;
  const bool want_compare = kind == RunKind::compare;

  PWSet pwset;
  if (want_criteria || want_oracles) {
    pwset = sc_derivative(f, cfg.anchor, cfg.subgradient, Mode::attentive);
    doc["pwset"] = pwset_json(pwset);
    checks.add("pw_axioms", doc["pwset"]["worst_axiom_residual"].get<double>() <= tol::pw_axiom,
               "worst residual " + fmt(doc["pwset"]["worst_axiom_residual"].get<double>()));
    checks.add("self_adjoint",
               doc["pwset"]["worst_self_adjoint_gap"].get<double>() <= tol::pw_axiom,
               "worst d_Z(L, L*) " + fmt(doc["pwset"]["worst_self_adjoint_gap"].get<double>()));
  }

  BoundReport bounds;
  if (want_criteria) {
    bounds = bound_report(pwset);
    njson bj;
    bj["varco"] = {{"op", "varco_bound"},
                   {"value", ext(bounds.varco.value)},
                   {"achieving_pair", bounds.varco.achieving_pair},
                   {"convention_0over0_inf", bounds.varco.convention_inf_used}};
    njson pv = njson::array();
    for (double v : bounds.varco.per_pair) pv.push_back(ext(v));
    bj["varco"]["per_pair"] = pv;
    bj["tilt"] = {{"op", "tilt_bound"}, {"tilt_stable", bounds.tilt.tilt_stable}};
    if (bounds.tilt.tilt_stable) {
      bj["tilt"]["value"] = ext(bounds.tilt.value);
      bj["tilt"]["achieving_pair"] = bounds.tilt.achieving_pair;
    } else {
      bj["tilt"]["value"] = "not_tilt_stable";
      bj["tilt"]["offending_pair"] = bounds.tilt.offending_pair;
      bj["tilt"]["reason"] = bounds.tilt.reason;
    }
    bj["reciprocity"] = {{"applicable", bounds.reciprocity_applicable},
                         {"ok", bounds.reciprocity_ok},
                         {"gap", bounds.reciprocity_gap}};
    doc["bounds"] = bj;
    if (bounds.reciprocity_applicable)
      checks.add("reciprocity_tilt_eq_inv_varco", bounds.reciprocity_ok,
                 "gap " + fmt(bounds.reciprocity_gap));
  }

  if (want_criteria && cfg.oracles.numeric_sc && kind == RunKind::analyze) {
    PWSet numeric = sc_derivative_numeric(f, cfg.anchor, cfg.subgradient, cfg.eps,
                                          Mode::attentive);
    doc["pwset_numeric"] = pwset_json(numeric);
    double h = dz_hausdorff(pwset, numeric);
    doc["pwset_numeric"]["hausdorff_vs_closed_form"] = ext(h);
    checks.add("numeric_vs_closed_form", h <= tol::numeric_match, "d_Z-Hausdorff " + fmt(h));
    PWSet numeric_half = sc_derivative_numeric(f, cfg.anchor, cfg.subgradient, cfg.eps / 2.0,
                                               Mode::attentive);
    double he = dz_hausdorff(numeric, numeric_half);
    doc["pwset_numeric"]["eps_independence_gap"] = ext(he);
    checks.add("eps_independence", he <= 1e-8, "d_Z-Hausdorff(eps, eps/2) " + fmt(he));
  }

  if (want_criteria && cfg.oracles.coderivative && n == 1) {
    ConeDescription1D cone =
        attentive_coderivative_1d(f, cfg.anchor[0], cfg.subgradient[0], cfg.eps);
    njson cj;
    cj["op"] = "attentive_coderivative_1d";
    njson pieces = njson::array();
    for (const ConePiece& p : cone.normal_cone)
      pieces.push_back({{"theta_lo", p.theta_lo}, {"theta_hi", p.theta_hi}});
    cj["normal_cone_sectors"] = pieces;
    njson dpieces = njson::array();
    for (const ConePiece& p : cone.coderivative_graph)
      dpieces.push_back({{"theta_lo", p.theta_lo}, {"theta_hi", p.theta_hi}});
    cj["coderivative_sectors"] = dpieces;

    TiltRayleighResult tr = tilt_rayleigh_1d(cone);
    cj["tilt_rayleigh"] = {{"op", "tilt_rayleigh_1d"},
                           {"tilt_stable", tr.tilt_stable},
                           {"value", ext(tr.value)},
                           {"degenerate_zero", tr.degenerate_zero}};

    // Adjoint inclusion: both unit directions of every rge(P,W) line.
    bool incl = true;
    for (const Subspace2n& l : pwset.subspaces()) {
      Vec b = l.basis().col(0);
      if (!cone.coderivative_contains(b[0], b[1]) || !cone.coderivative_contains(-b[0], -b[1]))
        incl = false;
    }
    cj["adjoint_inclusion"] = incl;
    doc["coderivative_1d"] = cj;
    checks.add("adjoint_inclusion_in_coderivative", incl, "rge(P,W) in gph D*_f");
    if (want_criteria) {
      bool agree = tr.tilt_stable == bounds.tilt.tilt_stable;
      double gap = 0.0;
      if (tr.tilt_stable && bounds.tilt.tilt_stable) {
        gap = std::abs(tr.value - bounds.tilt.value);
        agree = agree && gap <= 1e-10 * (1.0 + bounds.tilt.value);
      }
      checks.add("tilt_rayleigh_vs_pw_route", agree, "gap " + fmt(gap));
    }
  }

  // Per-s verdict table.
  njson per_s = njson::array();
  GrowthResult growth_at_zero;
  bool have_growth_zero = false;
  std::vector<double> s_list = cfg.s_values;
  if (want_oracles && cfg.oracles.minorant &&
      std::find(s_list.begin(), s_list.end(), 0.0) == s_list.end())
    s_list.push_back(0.0);
  for (double s : s_list) {
    njson row;
    row["s"] = s;
    PointbasedVerdict pb;
    if (want_criteria) {
      pb = test_pointbased(pwset, s);
      row["pointbased"] = {{"op", "test_pointbased"},
                           {"pass", pb.pass},
                           {"boundary", pb.boundary},
                           {"min_eig", pb.min_eig}};
      if (cfg.oracles.neighborhood && kind == RunKind::analyze) {
        NeighborhoodVerdict nb = test_neighborhood(f, cfg.anchor, cfg.subgradient, s, w, cfg.res);
        row["neighborhood"] = {{"op", "test_neighborhood"},
                               {"pass", nb.pass},
                               {"tested_points", nb.tested_points},
                               {"min_eig", ext(nb.min_eig)}};
        if (nb.has_witness) {
          row["neighborhood"]["witness_x"] = to_json(nb.witness_x);
          row["neighborhood"]["witness_xstar"] = to_json(nb.witness_xstar);
        }
      }
    }
    GrowthResult gr;
    MonotoneResult mo_att, mo_plain;
    bool have_gr = false, have_mo = false;
    if (want_oracles && cfg.oracles.growth) {
      gr = check_quadratic_growth(f, cfg.anchor, cfg.subgradient, s, w, cfg.res);
      have_gr = true;
      if (s == 0.0) {
        growth_at_zero = gr;
        have_growth_zero = true;
      }
      row["growth_oracle"] = {{"op", "check_quadratic_growth"},
                              {"pass", gr.pass},
                              {"margin", gr.margin},
                              {"tuples", gr.tuples_tested}};
      if (!gr.pass) {
        row["growth_oracle"]["witness_x"] = to_json(gr.witness_x);
        row["growth_oracle"]["witness_xprime"] = to_json(gr.witness_xprime);
      }
    }
    if (want_oracles && cfg.oracles.monotone) {
      mo_att = check_monotone_window(f, w, s, Mode::attentive, cfg.res);
      mo_plain = check_monotone_window(f, w, s, Mode::plain, cfg.res);
      have_mo = true;
      row["monotone_attentive"] = {{"op", "check_monotone"},
                                   {"pass", mo_att.pass},
                                   {"margin", mo_att.margin},
                                   {"pairs", mo_att.pairs_tested}};
      row["monotone_plain"] = {{"op", "check_monotone"},
                               {"pass", mo_plain.pass},
                               {"margin", mo_plain.margin},
                               {"pairs", mo_plain.pairs_tested}};
      if (!mo_plain.pass) {
        row["monotone_plain"]["violating_pair"] = {
            {"x", to_json(mo_plain.worst_a.x)},
            {"xstar", to_json(mo_plain.worst_a.xstar)},
            {"y", to_json(mo_plain.worst_b.x)},
            {"ystar", to_json(mo_plain.worst_b.xstar)}};
      }
      if (!mo_att.pass) {
        row["monotone_attentive"]["violating_pair"] = {
            {"x", to_json(mo_att.worst_a.x)},
            {"xstar", to_json(mo_att.worst_a.xstar)},
            {"y", to_json(mo_att.worst_b.x)},
            {"ystar", to_json(mo_att.worst_b.xstar)}};
      }
    }
    if (want_criteria && have_gr && have_mo) {
      if (pb.boundary) {
        row["triangle"] = "boundary (excluded from cross-checks)";
        checks.add("triangle_s_" + fmt(s), true, "boundary case, PSD verdict reported only");
      } else {
        bool agree = (gr.pass == mo_att.pass) && (mo_att.pass == pb.pass);
        row["triangle"] = agree ? "agree" : "DISAGREE";
        checks.add("triangle_s_" + fmt(s), agree,
                   "growth " + std::string(gr.pass ? "pass" : "fail") + ", monotone " +
                       (mo_att.pass ? "pass" : "fail") + ", pointbased " +
                       (pb.pass ? "pass" : "fail"));
      }
      if (want_criteria && cfg.oracles.neighborhood && kind == RunKind::analyze &&
          row.contains("neighborhood") && !pb.boundary) {
        bool agree = row["neighborhood"]["pass"].get<bool>() == gr.pass;
        checks.add("neighborhood_vs_growth_s_" + fmt(s), agree,
                   "both quantify over the same window");
      }
    }
    per_s.push_back(row);
  }
  doc["per_s"] = per_s;

  if (want_oracles) {
    njson oj;
    if (cfg.oracles.varco_empirical) {
      VarcoBracket vb = varco_empirical(f, cfg.anchor, cfg.subgradient, cfg.eps, cfg.res,
                                        cfg.bracket_lo, cfg.bracket_hi);
      oj["varco_empirical"] = {{"op", "varco_empirical"},
                               {"bracketed", vb.bracketed},
                               {"s_pass", ext(vb.s_pass)},
                               {"s_fail", ext(vb.s_fail)},
                               {"note", vb.note}};
      if (want_criteria) {
        // The empirical level certifies variational s-convexity for s <= s_pass,
        // hence it can never exceed varco.
        bool consistent = !std::isfinite(vb.s_pass) || vb.s_pass <= bounds.varco.value + 2e-3;
        checks.add("varco_empirical_lower_bound", consistent,
                   "s_pass " + fmt(vb.s_pass) + " vs varco " + fmt(bounds.varco.value));
      }
    }
    if (cfg.oracles.prox) {
      ProxEstimate pe = estimate_prox_regularity(f, cfg.anchor, cfg.subgradient, w, cfg.res);
      oj["prox_parameter"] = {{"op", "estimate_prox_regularity"},
                              {"r_hat", pe.r_hat},
                              {"tuples", pe.tuples_tested}};
    }
    if (cfg.oracles.tilt_probe) {
      TiltProbeResult tp =
          tilt_probe(f, cfg.anchor, cfg.subgradient, cfg.gamma, cfg.v_radius, cfg.tilt_params);
      oj["tilt_probe"] = {{"op", "tilt_probe"},
                          {"multivalued", tp.multivalued_detected},
                          {"jump_detected", tp.jump_detected},
                          {"lipschitz_estimate", tp.lipschitz},
                          {"max_adjacent_jump", tp.max_jump},
                          {"not_tilt_stable", tp.not_tilt_stable}};
      if (tp.multivalued_detected) oj["tilt_probe"]["multivalued_at"] = to_json(tp.multivalued_at);
      if (want_criteria) {
        bool agree = tp.not_tilt_stable == !bounds.tilt.tilt_stable;
        std::string detail = "probe " + std::string(tp.not_tilt_stable ? "unstable" : "stable") +
                             ", bound " + (bounds.tilt.tilt_stable ? "stable" : "unstable");
        if (agree && bounds.tilt.tilt_stable && std::isfinite(bounds.tilt.value)) {
          double err = std::abs(tp.lipschitz - bounds.tilt.value);
          agree = err <= 0.05 * bounds.tilt.value + 1e-3;
          detail += ", lipschitz " + fmt(tp.lipschitz) + " vs tilt " + fmt(bounds.tilt.value);
        }
        checks.add("tilt_probe_vs_bound", agree, detail);
      }
    }
    if (cfg.oracles.minorant) {
      TruncatedGraph g = sample_truncated_graph(f, w, Mode::attentive, cfg.res);
      if (!g.points.empty()) {
        MinorantResult mr = build_affine_minorant(g, f);
        oj["minorant"] = {{"op", "build_affine_minorant"},
                          {"minorant_ok", mr.minorant_ok},
                          {"graph_tight", mr.graph_tight},
                          {"max_violation", mr.max_violation},
                          {"max_graph_gap", mr.max_graph_gap}};
        if (!mr.minorant_ok) oj["minorant"]["worst_x"] = to_json(mr.worst_x);
        if (have_growth_zero)
          checks.add("minorant_vs_growth_at_0", mr.minorant_ok == growth_at_zero.pass,
                     std::string("minorant ") + (mr.minorant_ok ? "holds" : "fails") +
                         ", growth(0) " + (growth_at_zero.pass ? "passes" : "fails"));
      }
    }
    doc["oracles"] = oj;
  }

  if (want_compare) {
    njson cj;
    TruncatedGraph ga = sample_truncated_graph(f, w, Mode::attentive, cfg.res);
    TruncatedGraph gp = sample_truncated_graph(f, w, Mode::plain, cfg.res);
    cj["attentive_points"] = ga.points.size();
    cj["plain_points"] = gp.points.size();
    bool subset = true;
    for (const GraphPoint& p : ga.points) {
      bool found = false;
      for (const GraphPoint& q : gp.points)
        if (p.x == q.x && p.xstar == q.xstar) found = true;
      if (!found) subset = false;
    }
    cj["attentive_subset_of_plain"] = subset;
    checks.add("attentive_subset_of_plain", subset, "same window and resolution");

    ClosednessReport ca = closedness_probe(ga, f);
    ClosednessReport cp = closedness_probe(gp, f);
    auto closedness_json = [&](const ClosednessReport& c) {
      njson x;
      x["op"] = "closedness_probe";
      x["pass"] = c.pass;
      x["max_deviation"] = c.max_deviation;
      x["issues"] = njson::array();
      for (const auto& is : c.issues)
        x["issues"].push_back({{"limit_x", to_json(is.limit_x)},
                               {"limit_xstar", to_json(is.limit_xstar)},
                               {"fval_along", is.fval_along},
                               {"f_at_limit", ext(is.f_at_limit)},
                               {"deviation", ext(is.deviation)}});
      return x;
    };
    cj["closedness_attentive"] = closedness_json(ca);
    cj["closedness_plain"] = closedness_json(cp);

    PWSet sa = sc_derivative(f, cfg.anchor, cfg.subgradient, Mode::attentive);
    PWSet sp = sc_derivative(f, cfg.anchor, cfg.subgradient, Mode::plain);
    cj["sc_attentive"] = pwset_json(sa);
    cj["sc_plain"] = pwset_json(sp);
    njson rows = njson::array();
    for (double s : cfg.s_values) {
      MonotoneResult ma = check_monotone_window(f, w, s, Mode::attentive, cfg.res);
      MonotoneResult mp = check_monotone_window(f, w, s, Mode::plain, cfg.res);
      njson row;
      row["s"] = s;
      row["attentive"] = {{"pass", ma.pass}, {"margin", ma.margin}};
      row["plain"] = {{"pass", mp.pass}, {"margin", mp.margin}};
      if (!mp.pass)
        row["plain"]["violating_pair"] = {{"x", to_json(mp.worst_a.x)},
                                          {"xstar", to_json(mp.worst_a.xstar)},
                                          {"y", to_json(mp.worst_b.x)},
                                          {"ystar", to_json(mp.worst_b.xstar)}};
      rows.push_back(row);
    }
    cj["monotone"] = rows;
    doc["compare"] = cj;
  }

  // Verdict line for the boundary behavior at s = varco.
  if (want_criteria && want_oracles && std::isfinite(bounds.varco.value)) {
    for (const auto& row : doc["per_s"]) {
      if (!row.contains("growth_oracle") || !row.contains("pointbased")) continue;
      if (!row["pointbased"]["boundary"].get<bool>()) continue;
      bool attained = row["growth_oracle"]["pass"].get<bool>();
      doc["verdict"] = attained
                           ? "variationally convex at the exact bound s = varco = " +
                                 fmt(bounds.varco.value) + " (boundary attained)"
                           : "not variationally convex at the exact bound s = varco = " +
                                 fmt(bounds.varco.value);
    }
  }

  doc["cross_checks"] = {{"all_ok", checks.ok}, {"items", checks.list}};

  auto t_end = std::chrono::steady_clock::now();
  doc["timestamp"] = {
      {"generated_at_unix_ms",
       std::chrono::duration_cast<std::chrono::milliseconds>(
           std::chrono::system_clock::now().time_since_epoch())
           .count()},
      {"elapsed_ms",
       std::chrono::duration_cast<std::chrono::milliseconds>(t_end - t_start).count()}};

  AnalysisReport rep;
  rep.doc = std::move(doc);
  rep.cross_checks_ok = checks.ok;
  return rep;
}

std::string report_json(const AnalysisReport& rep) { return rep.doc.dump(2) + "\n"; }

std::string report_text(const AnalysisReport& rep) {
  const njson& d = rep.doc;
  std::ostringstream os;
  os << "analysis report (version " << d["version"].get<std::string>() << ")\n";
  os << "function: " << d["config"]["function_name"].get<std::string>() << "\n";
  os << "anchor: " << d["config"]["anchor"].dump()
     << "  subgradient: " << d["config"]["subgradient"].dump() << "\n";
  if (d.contains("bounds")) {
    os << "varco_bound: " << d["bounds"]["varco"]["value"].dump() << "\n";
    os << "tilt_bound:  " << d["bounds"]["tilt"]["value"].dump() << "\n";
  }
  if (d.contains("per_s")) {
    os << "s-verdicts:\n";
    for (const auto& row : d["per_s"]) {
      os << "  s = " << row["s"].get<double>() << ":";
      const char* sep = " ";
      auto item = [&](const char* label, const njson& v, bool boundary = false) {
        os << sep << label << " " << (v.get<bool>() ? "pass" : "FAIL")
           << (boundary ? " (boundary)" : "");
        sep = ", ";
      };
      if (row.contains("pointbased"))
        item("pointbased", row["pointbased"]["pass"], row["pointbased"]["boundary"].get<bool>());
      if (row.contains("growth_oracle")) item("growth", row["growth_oracle"]["pass"]);
      if (row.contains("monotone_attentive"))
        item("monotone(att)", row["monotone_attentive"]["pass"]);
      if (row.contains("monotone_plain")) item("monotone(plain)", row["monotone_plain"]["pass"]);
      os << "\n";
    }
  }
  if (d.contains("oracles")) {
    const auto& oj = d["oracles"];
    if (oj.contains("varco_empirical"))
      os << "varco_empirical: [" << oj["varco_empirical"]["s_pass"].dump() << ", "
         << oj["varco_empirical"]["s_fail"].dump() << "]\n";
    if (oj.contains("prox_parameter"))
      os << "prox parameter estimate: " << oj["prox_parameter"]["r_hat"].get<double>() << "\n";
    if (oj.contains("tilt_probe"))
      os << "tilt_probe: lipschitz " << oj["tilt_probe"]["lipschitz_estimate"].get<double>()
         << (oj["tilt_probe"]["not_tilt_stable"].get<bool>() ? " (NOT tilt stable)" : "")
         << "\n";
    if (oj.contains("minorant"))
      os << "minorant: " << (oj["minorant"]["minorant_ok"].get<bool>() ? "holds" : "FAILS")
         << "\n";
  }
  if (d.contains("verdict")) os << "verdict: " << d["verdict"].get<std::string>() << "\n";
  os << "cross-checks: " << (d["cross_checks"]["all_ok"].get<bool>() ? "all ok" : "DISAGREEMENT")
     << "\n";
  for (const auto& c : d["cross_checks"]["items"])
    if (!c["ok"].get<bool>())
      os << "  FAIL " << c["name"].get<std::string>() << ": " << c["detail"].get<std::string>()
         << "\n";
  return os.str();
}

void emit_report(const AnalysisReport& rep, const std::string& format, std::ostream& os) {
  if (format == "json")
    os << report_json(rep);
  else if (format == "text")
    os << report_text(rep);
  else
    throw error("unknown report format: " + format);
}

}  // namespace va
