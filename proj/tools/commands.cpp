#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "gidx/error.hpp"
#include "gidx/parallel.hpp"
#include "gidx/scenario.hpp"

namespace gidx::cli {

namespace {

struct Options {
  std::string path;
  int threads = 0;
  int resolution = 0;
  int truncation = 0;
  double tolerance = 0.0;
  std::string report;
};

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

RunOptions run_options(const Options& o) { return {o.resolution, o.truncation, o.tolerance}; }

int grid_of(const Scenario& s, const Options& o) { return o.resolution > 0 ? o.resolution : s.grid; }

int truncation_of(const Scenario& s, const Options& o) {
  if (!s.family) throw Error(ErrorCode::InvalidArgument, "cli", "index", "scenario has no family section");
  return o.truncation > 0 ? o.truncation : s.family->truncation;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cli", "write_report", "cannot write '" + path + "'");
  f << text;
}

int emit_report(const VerificationReport& r, const Options& o, std::ostream& out) {
  if (!o.report.empty()) write_file(o.report, report_to_json(r));
  out << report_table(r);
  return r.pass() ? kPass : kFail;
}

int cmd_validate(const Options& o, std::ostream& out) {
  return emit_report(validate_scenario(load_scenario(o.path), run_options(o)), o, out);
}

int cmd_ddclass(const Options& o, std::ostream& out) {
  const Scenario s = load_scenario(o.path);
  if (!s.gerbe) throw Error(ErrorCode::InvalidArgument, "cli", "ddclass", "scenario has no gerbe section");
  const AtlasPtr atlas = scenario_atlas(s, grid_of(s, o));
  const GerbeCocycle t = scenario_twist(s, scenario_cover(s, atlas));
  const SimplicialComplex& x = *t.cover().base;
  if (x.dimension() < 3) {
    out << "H^3: 0 (complex of dimension " << x.dimension() << ")\n";
  } else {
    const CohomologyGroup h3 = cohomology_group(x, 3);
    out << "H^3: free rank " << h3.free_rank << ", torsion [";
    for (std::size_t i = 0; i < h3.torsion.size(); ++i) out << (i ? ", " : "") << h3.torsion[i].get_str();
    out << "]\n";
  }
  out << dd_class_summary(t) << "\n";
  return kPass;
}

int cmd_chern(const Options& o, std::ostream& out) {
  const Scenario s = load_scenario(o.path);
  const AtlasPtr atlas = scenario_atlas(s, grid_of(s, o));
  const ConnectionData c = scenario_connection(s, atlas);
  out << "rank " << c.rank << "\n";
  auto c1 = [](const ConnectionData& conn, bool ov) {
    return integrate(degree_part(det_line_c1(curvature(conn, ov)), 2)).real();
  };
  if (c.has_override()) out << "integral c1 (analytic curvature) " << fixed(c1(c, true)) << "\n";
  out << "integral c1 (grid curvature " << atlas->grid() << ") " << fixed(c1(c, false)) << "\n";
  return kPass;
}

int cmd_index_analytic(const Options& o, std::ostream& out) {
  const Scenario s = load_scenario(o.path);
  const AtlasPtr atlas = scenario_atlas(s, grid_of(s, o));
  const FamilySpec f = scenario_family(s, atlas, truncation_of(s, o));
  const Stabilizer st = stabilize(f);
  const IndexBundle idx = analytic_index(f, st);
  const auto ints = index_chern_integrals(idx, false);
  out << "stabilizer N " << st.n << " (min singular value " << fixed(st.min_singular) << ")\n";
  out << "kernel rank " << idx.kernel_rank() << "\n";
  out << "virtual rank " << fixed(ints[0]) << "\n";
  if (ints.size() > 1) out << "integral c1 " << fixed(ints[1]) << "\n";
  return kPass;
}

int cmd_index_topological(const Options& o, std::ostream& out) {
  const Scenario s = load_scenario(o.path);
  const AtlasPtr atlas = scenario_atlas(s, grid_of(s, o));
  const FamilySpec f = scenario_family(s, atlas, truncation_of(s, o));
  const auto ints = form_integrals(topological_index_chern(symbol_class(f)));
  out << "degree 0 " << fixed(ints[0]) << "\n";
  if (ints.size() > 1) out << "degree 2 integral " << fixed(ints[1]) << "\n";
  return kPass;
}

int cmd_verify(const Options& o, std::ostream& out) {
  return emit_report(verify_scenario(load_scenario(o.path), run_options(o)), o, out);
}

int cmd_report(const Options& o, std::ostream& out) {
  std::ifstream in(o.path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cli", "report", "cannot read '" + o.path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const VerificationReport r = report_from_json(ss.str());
  out << report_table(r);
  return r.pass() ? kPass : kFail;
}

bool is_input_error(ErrorCode c) {
  return c == ErrorCode::ParseError || c == ErrorCode::UnsupportedVersion ||
         c == ErrorCode::InvalidArgument || c == ErrorCode::InvalidComplex;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Twisted index verification from scenario files", "gerbe-index"};
  app.require_subcommand(1);
  Options o;
  using Cmd = int (*)(const Options&, std::ostream&);
  std::vector<std::pair<CLI::App*, Cmd>> commands;

  auto add = [&](const char* name, const char* help, Cmd fn, bool resolution, bool family, bool verify) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("scenario", o.path, "Scenario file or bundled fixture name")->required();
    sub->add_option("--threads", o.threads, "Worker threads (default: GERBE_INDEX_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    if (resolution) sub->add_option("--resolution", o.resolution, "Grid nodes per chart side")->check(CLI::Range(3, 4096));
    if (family) sub->add_option("--truncation", o.truncation, "Fourier truncation K")->check(CLI::Range(1, 512));
    if (verify) {
      sub->add_option("--tolerance", o.tolerance, "Primary tolerance override")->check(CLI::PositiveNumber);
      sub->add_option("--report", o.report, "Write the JSON report to this path");
    }
    commands.emplace_back(sub, fn);
  };
  add("validate", "Structural checks without heavy computation", cmd_validate, true, true, false);
  commands.back().first->add_option("--report", o.report, "Write the JSON report to this path");
  add("ddclass", "Dixmier-Douady class of the scenario twist", cmd_ddclass, false, false, false);
  add("chern", "Chern-Weil integrals of the scenario connection", cmd_chern, true, false, false);
  add("index-analytic", "Analytic index bundle and its Chern integrals", cmd_index_analytic, true, true, false);
  add("index-topological", "Topological index integrals from the symbol", cmd_index_topological, true, true, false);
  add("verify", "Run the scenario's verification checks", cmd_verify, true, true, true);
  CLI::App* report = app.add_subcommand("report", "Print a saved JSON report as a table");
  report->add_option("report", o.path, "Report file")->required();
  commands.emplace_back(report, cmd_report);

  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPass : kInputError;
  }

  if (o.threads > 0) set_thread_count(o.threads);
  try {
    for (const auto& [sub, fn] : commands)
      if (sub->parsed()) return fn(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? kInputError : kFail;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace gidx::cli
