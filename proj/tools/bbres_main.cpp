// bbres command line front end. Talks to the core exclusively through the C
// API in bbres/bbres.h; human tables are rendered from the JSON reports.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "bbres/bbres.h"

namespace {

using Json = nlohmann::json;

struct CommonFlags {
  std::uint64_t seed;
  double tol_newton;
  double tol_degenerate;
  int max_path_failures;
  std::string json_path;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  bbres_options defaults;
  bbres_options_init(&defaults);
  flags.seed = defaults.seed;
  flags.tol_newton = defaults.tol_newton;
  flags.tol_degenerate = defaults.tol_degenerate;
  flags.max_path_failures = defaults.max_path_failures;
  cmd->add_option("--seed", flags.seed, "Seed for the homotopy gamma constant");
  cmd->add_option("--tol-newton", flags.tol_newton, "Residual tolerance for refined zeros");
  cmd->add_option("--tol-degenerate", flags.tol_degenerate,
                  "Scale-aware |det J| degeneracy threshold");
  cmd->add_option("--max-path-failures", flags.max_path_failures,
                  "Failed-path budget before exit code 3");
  cmd->add_option("--json", flags.json_path, "Write the machine-readable report here");
}

bbres_options make_options(const CommonFlags& flags, std::optional<double> t = {}) {
  bbres_options opts;
  bbres_options_init(&opts);
  opts.seed = flags.seed;
  opts.tol_newton = flags.tol_newton;
  opts.tol_degenerate = flags.tol_degenerate;
  opts.max_path_failures = flags.max_path_failures;
  if (t.has_value()) {
    opts.t_value = *t;
    opts.has_t_value = 1;
  }
  return opts;
}

int fail_input(const char* err) {
  std::cerr << "error: " << (err ? err : "invalid input") << "\n";
  return 2;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fmt_complex(const Json& pair) {
  const double re = pair.at(0).get<double>();
  const double im = pair.at(1).get<double>();
  char buf[80];
  if (std::abs(im) <= 1e-12 * std::max(1.0, std::abs(re))) {
    std::snprintf(buf, sizeof(buf), "%.10g", re);
  } else {
    std::snprintf(buf, sizeof(buf), "%.10g%+.10gi", re, im);
  }
  return buf;
}

std::string fmt_point(const Json& coords) {
  std::string out = "[";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) out += " : ";
    out += fmt_complex(coords[i]);
  }
  return out + "]";
}

void print_warnings(const Json& report) {
  if (!report.contains("warnings")) return;
  for (const auto& w : report["warnings"])
    std::cout << "warning: " << w.get<std::string>() << "\n";
}

void render_chart(const Json& report) {
  std::cout << "chart " << report["source_chart"] << " -> chart "
            << report["target_chart"] << "\n";
  std::cout << "components:\n";
  for (const auto& c : report["components"])
    std::cout << "  " << c.get<std::string>() << "\n";
  std::cout << "clearing exponent: " << report["clearing_exponent"] << "\n";
}

void render_residues(const Json& report) {
  std::cout << "t = " << report["t"].get<double>() << "\n\n";
  std::cout << "singularities (" << report["singularities"].size() << "):\n";
  for (const auto& s : report["singularities"]) {
    std::cout << "  [" << s["index"] << "] " << fmt_point(s["point"]) << "  chart "
              << s["chart"] << "  residual " << s["residual_norm"].get<double>()
              << "  det J " << fmt_complex(s["det_jacobian"]) << "\n";
  }
  if (!report["degenerate_candidates"].empty()) {
    std::cout << "degenerate candidates (" << report["degenerate_candidates"].size()
              << "):\n";
    for (const auto& s : report["degenerate_candidates"])
      std::cout << "  " << fmt_point(s["point"]) << "  chart " << s["chart"] << "\n";
  }
  std::cout << "\nresidues:\n";
  for (const auto& entry : report["residues"]) {
    std::cout << "  " << entry["monomial"].get<std::string>() << ":\n";
    for (const auto& p : entry["points"])
      std::cout << "    [" << p["index"] << "] " << fmt_complex(p["value"]) << "\n";
    if (entry.contains("attribution")) {
      std::cout << "    " << entry["attribution"]["label"].get<std::string>()
                << " (residual attribution): "
                << fmt_complex(entry["attribution"]["value"]) << "\n";
      std::cout << "    isolated sum " << fmt_complex(entry["sum"])
                << " + attribution = target " << entry["target"] << "\n";
    } else {
      std::cout << "    sum " << fmt_complex(entry["sum"]) << "  target "
                << entry["target"] << "  |sum-target| "
                << entry["sum_residual"].get<double>() << "\n";
    }
  }
  print_warnings(report);
}

void render_sweep(const Json& report) {
  std::cout << "grid:";
  for (const auto& t : report["grid"]) std::cout << " " << t.get<double>();
  std::cout << "\n\npaths:\n";
  for (const auto& p : report["paths"])
    std::cout << "  [" << p["id"] << "] " << p["status"].get<std::string>()
              << "  limit " << fmt_point(p["limit"]) << "\n";
  std::cout << "\ngroups:\n";
  for (const auto& g : report["groups"]) {
    std::cout << "  " << g["label"].get<std::string>() << " = { paths";
    for (const auto& id : g["paths"]) std::cout << " " << id;
    std::cout << " }  limit " << fmt_point(g["limit"]) << "\n";
  }
  std::cout << "\ngrouped residue limits:\n";
  for (const auto& s : report["series"]) {
    std::cout << "  " << s["group"].get<std::string>() << "  "
              << s["monomial"].get<std::string>() << "  ";
    if (s["limit"].is_null()) {
      std::cout << "(no estimate)";
    } else {
      std::cout << fmt_complex(s["limit"]) << "  (error est. "
                << s["error_estimate"].get<double>() << ")";
    }
    std::cout << "\n";
  }
  print_warnings(report);
}

int deliver(bbres_report* report, bbres_status status, const CommonFlags& flags,
            void (*render)(const Json&)) {
  if (!report) return 2;
  const std::string json_text = bbres_report_json(report);
  bbres_report_free(report);
  if (!flags.json_path.empty()) {
    std::ofstream out(flags.json_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << flags.json_path << "\n";
      return 2;
    }
    out << json_text;
  }
  if (render) render(Json::parse(json_text));
  if (status == BBRES_ERR_NUMERIC) {
    std::cerr << "error: numerical failure budget exceeded\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Baum-Bott residues of polynomial vector fields on P^n"};
  app.require_subcommand(1);

  std::string spec_path;
  int target_chart = 0;
  std::optional<double> t_value;
  double t_raw = 0.0;
  int chern_dim = 0;
  std::string chern_label;

  CommonFlags chart_flags, residues_flags, sweep_flags;

  CLI::App* chart = app.add_subcommand("chart", "Pushforward of the field to a chart");
  chart->add_option("spec", spec_path, "Field specification file")->required();
  chart->add_option("--to", target_chart, "Target chart index")->required();
  add_common_flags(chart, chart_flags);

  CLI::App* residues =
      app.add_subcommand("residues", "Singular set and residues at fixed t");
  residues->add_option("spec", spec_path, "Field specification file")->required();
  CLI::Option* t_opt = residues->add_option("--t", t_raw, "Parameter value");
  add_common_flags(residues, residues_flags);

  CLI::App* sweep = app.add_subcommand("sweep", "Deformation sweep toward t0");
  sweep->add_option("spec", spec_path, "Field specification file")->required();
  add_common_flags(sweep, sweep_flags);

  CLI::App* chern = app.add_subcommand("chern", "Chern number of P^n for one monomial");
  chern->add_option("--dim", chern_dim, "Ambient dimension n")->required();
  chern->add_option("--phi", chern_label, "Monomial label, e.g. c1^3")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (chern->parsed()) {
    bbres_report* report = nullptr;
    char* err = nullptr;
    const bbres_status status = bbres_run_chern(chern_dim, chern_label.c_str(), &report, &err);
    if (status == BBRES_ERR_INPUT || status == BBRES_ERR_INTERNAL) {
      const int code = fail_input(err);
      bbres_string_free(err);
      return code;
    }
    const Json j = Json::parse(bbres_report_json(report));
    std::cout << j["value"] << "\n";
    bbres_report_free(report);
    return 0;
  }

  const std::optional<std::string> spec_text = read_file(spec_path);
  if (!spec_text.has_value()) return fail_input(("cannot read " + spec_path).c_str());

  bbres_problem* problem = nullptr;
  char* err = nullptr;
  if (bbres_problem_parse(spec_text->c_str(), &problem, &err) != BBRES_OK) {
    const int code = fail_input(err);
    bbres_string_free(err);
    return code;
  }

  bbres_report* report = nullptr;
  bbres_status status = BBRES_OK;
  int code = 0;
  if (chart->parsed()) {
    const bbres_options opts = make_options(chart_flags);
    status = bbres_run_chart(problem, target_chart, &opts, &report, &err);
    if (status == BBRES_ERR_INPUT || status == BBRES_ERR_INTERNAL) {
      code = fail_input(err);
    } else {
      code = deliver(report, status, chart_flags, render_chart);
      report = nullptr;
    }
  } else if (residues->parsed()) {
    if (t_opt->count() > 0) t_value = t_raw;
    const bbres_options opts = make_options(residues_flags, t_value);
    status = bbres_run_residues(problem, &opts, &report, &err);
    if (status == BBRES_ERR_INPUT || status == BBRES_ERR_INTERNAL) {
      code = fail_input(err);
    } else {
      code = deliver(report, status, residues_flags, render_residues);
      report = nullptr;
    }
  } else if (sweep->parsed()) {
    const bbres_options opts = make_options(sweep_flags);
    status = bbres_run_sweep(problem, &opts, &report, &err);
    if (status == BBRES_ERR_INPUT || status == BBRES_ERR_INTERNAL) {
      code = fail_input(err);
    } else {
      code = deliver(report, status, sweep_flags, render_sweep);
      report = nullptr;
    }
  }

  bbres_string_free(err);
  bbres_report_free(report);
  bbres_problem_free(problem);
  return code;
}
