#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "va/analysis.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::string dump_graph;
  int resolution = 0;
  double eps = 0.0;
  std::vector<double> s_values;
  bool seedless = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("config,--config", o.config_path, "analysis config file (json)")->required();
  cmd->add_option("--out", o.out_path, "output path (default: config's output.path or stdout)");
  cmd->add_option("--format", o.format, "json|text (default from config)");
  cmd->add_option("--resolution", o.resolution, "override sampling resolution");
  cmd->add_option("--eps", o.eps, "override localization eps");
  cmd->add_option("--s", o.s_values, "override tested s values (repeatable)");
  cmd->add_option("--dump-graph", o.dump_graph,
                  "write the attentive truncated-graph sample as tabular text");
  cmd->add_flag("--seedless", o.seedless,
                "assert the pipeline uses no randomness (it never does; recorded in the report)");
}

int run(const CommonOpts& o, va::RunKind kind) {
  va::AnalysisConfig cfg = va::parse_config(o.config_path);
  if (o.resolution > 0) cfg.res.grid = o.resolution;
  if (o.eps > 0.0) cfg.eps = o.eps;
  if (!o.s_values.empty()) cfg.s_values = o.s_values;
  if (!o.format.empty()) cfg.format = o.format;
  if (!o.out_path.empty()) cfg.out_path = o.out_path;
  if (o.seedless) cfg.seedless = true;

  if (!o.dump_graph.empty()) {
    double fbar = va::evaluate(cfg.function, cfg.anchor);
    va::TruncatedGraph g = va::sample_truncated_graph(cfg.function, cfg.window(fbar),
                                                      va::Mode::attentive, cfg.res);
    std::ofstream gout(o.dump_graph);
    if (!gout) throw va::error("cannot open graph dump path: " + o.dump_graph);
    va::export_graph(g, gout);
    std::cerr << g.points.size() << " graph points written to " << o.dump_graph << "\n";
  }

  va::AnalysisReport rep = va::run_analysis(cfg, kind);
  if (cfg.out_path == "-" || cfg.out_path.empty()) {
    va::emit_report(rep, cfg.format, std::cout);
  } else {
    std::ofstream out(cfg.out_path);
    if (!out) throw va::error("cannot open output path: " + cfg.out_path);
    va::emit_report(rep, cfg.format, out);
    std::cerr << "report written to " << cfg.out_path << "\n";
  }
  return rep.cross_checks_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational convexity and tilt stability analysis"};
  app.require_subcommand(1);

  CommonOpts o_analyze, o_bounds, o_oracle, o_compare;
  CLI::App* analyze = app.add_subcommand("analyze", "criteria + oracles + cross-checks");
  add_common(analyze, o_analyze);
  CLI::App* bounds = app.add_subcommand("bounds", "criteria only");
  add_common(bounds, o_bounds);
  CLI::App* oracle = app.add_subcommand("oracle", "oracles only");
  add_common(oracle, o_oracle);
  CLI::App* compare = app.add_subcommand("compare", "attentive vs plain side-by-side");
  add_common(compare, o_compare);
  CLI::App* catalog = app.add_subcommand("catalog", "list builtin functions");

  CLI11_PARSE(app, argc, argv);

  try {
    if (catalog->parsed()) {
      for (const std::string& name : va::builtin_names()) std::cout << name << "\n";
      return 0;
    }
    if (analyze->parsed()) return run(o_analyze, va::RunKind::analyze);
    if (bounds->parsed()) return run(o_bounds, va::RunKind::bounds);
    if (oracle->parsed()) return run(o_oracle, va::RunKind::oracle);
    if (compare->parsed()) return run(o_compare, va::RunKind::compare);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
