#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "va/calculus.hpp"
#include "va/catalog.hpp"
#include "va/criteria.hpp"
#include "va/graph.hpp"
#include "va/oracles.hpp"
#include "va/scderiv.hpp"
#include "va/types.hpp"

namespace va {

struct OracleToggles {
  bool growth = true;
  bool monotone = true;
  bool prox = true;
  bool tilt_probe = true;
  bool minorant = true;
  bool varco_empirical = true;
  bool numeric_sc = true;
  bool neighborhood = true;
  bool coderivative = true;
};

struct AnalysisConfig {
  FunctionSpec function = builtin("f2_zero");
  nlohmann::ordered_json function_echo;
  Vec anchor;
  Vec subgradient;
  double eps = 0.25;
  Resolution res;
  std::optional<double> x_radius;      // window overrides; default eps
  std::optional<double> xstar_radius;
  std::optional<double> rho;           // default f(anchor) + eps
  std::vector<double> s_values{0.0};
  OracleToggles oracles;
  double gamma = 0.5;
  double v_radius = 0.25;
  TiltProbeParams tilt_params;
  double bracket_lo = -4.0;
  double bracket_hi = 4.0;
  std::string out_path = "-";
  std::string format = "json";
  bool seedless = false;

  Window window(double fbar) const;
};

// Function-spec files and inline objects share one schema; "shifted" wrappers
// are merged into closed catalog members on load.
FunctionSpec parse_function_spec(const nlohmann::ordered_json& j);

AnalysisConfig parse_config_text(const std::string& text);
AnalysisConfig parse_config(const std::string& path);

struct AnalysisReport {
  nlohmann::ordered_json doc;
  bool cross_checks_ok = true;
};

enum class RunKind { analyze, bounds, oracle, compare };

AnalysisReport run_analysis(const AnalysisConfig& cfg, RunKind kind = RunKind::analyze);

std::string report_json(const AnalysisReport& rep);
std::string report_text(const AnalysisReport& rep);
void emit_report(const AnalysisReport& rep, const std::string& format, std::ostream& os);

}  // namespace va
