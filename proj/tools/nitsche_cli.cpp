// Command-line front end: solve, study, mesh, check.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "nitsche/errors.hpp"
#include "nitsche/experiment.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kAssumption = 2, kSolver = 3, kConfig = 4 };

struct Overrides {
  std::string config_file;
  std::string example;
  int levels = 0;
  std::string out;
  double tol = 0;
  std::vector<std::string> sets;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_file, "key = value configuration file");
  cmd->add_option("-e,--example", o.example, "ex51a..ex55 or custom");
  cmd->add_option("-l,--levels", o.levels, "number of refinement levels");
  cmd->add_option("-o,--out", o.out, "output directory");
  cmd->add_option("--tol", o.tol, "CG relative residual tolerance");
  cmd->add_option("--set", o.sets, "extra key=value settings (repeatable)");
  cmd->add_flag("-q,--quiet", o.quiet, "no progress output");
}

nitsche::ExperimentConfig build_config(const Overrides& o) {
  nitsche::ExperimentConfig cfg;
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) throw nitsche::ConfigError("cannot open config file '" + o.config_file + "'");
    nitsche::parse_config(in, o.config_file, cfg);
  }
  if (!o.example.empty()) cfg.example = o.example;
  if (o.levels > 0) cfg.levels = o.levels;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.tol > 0) cfg.solver_tol = o.tol;
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw nitsche::ConfigError("--set expects key=value, got '" + kv + "'");
    nitsche::set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  nitsche::validate(cfg);
  return cfg;
}

int cmd_study(const Overrides& o) {
  const auto cfg = build_config(o);
  const auto res = nitsche::run_study(cfg, o.quiet ? nullptr : &std::clog);
  nitsche::write_study(res, cfg);
  nitsche::write_table(res.report, std::cout);
  return kOk;
}

int cmd_solve(const Overrides& o, int level) {
  auto cfg = build_config(o);
  const auto ex = nitsche::resolve_example(cfg);
  cfg.levels = std::max(nitsche::study_levels(ex, cfg), level + 1);
  auto meshes = nitsche::study_meshes(ex, cfg);
  if (level < 0 || level >= static_cast<int>(meshes.size())) throw nitsche::ConfigError("--level out of range");
  const auto st = nitsche::solve_level(ex, std::move(meshes[level]), cfg);
  std::printf("example      %s\n", ex.name.c_str());
  std::printf("dofs         %d\n", st->errors.ndofs);
  std::printf("cut elements %zu\n", st->geo.cuts.size());
  std::printf("cg           %d iterations, residual %.2e\n", st->solve.iterations, st->solve.residual);
  std::printf("De           %.6e\nDie          %.6e\nDre          %.6e\n", st->errors.De, st->errors.Die,
              st->errors.Dre);
  std::printf("eta          %.6e (effectivity %.4f)\n", st->eta, st->effectivity);
  if (cfg.emit_fields) {
    const auto dir = std::filesystem::path(cfg.output_dir) / ex.name / ("level" + std::to_string(level));
    nitsche::emit_fields(*st, dir.string());
    std::printf("fields       %s\n", dir.string().c_str());
  }
  return kOk;
}

int cmd_mesh(const Overrides& o) {
  const auto cfg = build_config(o);
  const auto ex = nitsche::resolve_example(cfg);
  nitsche::Mesh mesh;
  if (ex.adaptive) {
    mesh = nitsche::adaptive_initial_mesh(ex.iface, nitsche::adaptive_options(ex, cfg)).mesh;
  } else {
    mesh = nitsche::uniform_mesh(nitsche::first_uniform_n(ex, cfg));
  }
  const auto dir = std::filesystem::path(cfg.output_dir) / ex.name;
  std::filesystem::create_directories(dir);
  std::ofstream nodes(dir / "mesh.node"), elements(dir / "mesh.ele");
  if (!nodes || !elements) throw nitsche::Error("cannot write mesh files in " + dir.string());
  nitsche::write_nodes(mesh, nodes);
  nitsche::write_elements(mesh, elements);
  std::printf("%d vertices, %d triangles -> %s\n", mesh.num_vertices(), mesh.num_triangles(), dir.string().c_str());
  return kOk;
}

int cmd_check(const Overrides& o) {
  const auto cfg = build_config(o);
  const auto ex = nitsche::resolve_example(cfg);
  const auto meshes = nitsche::study_meshes(ex, cfg);
  bool ok = true;
  for (std::size_t k = 0; k < meshes.size(); ++k) {
    const auto rep = nitsche::check_assumption2(meshes[k], ex.iface);
    std::printf("level %zu: %d triangles, %s", k, meshes[k].num_triangles(), rep.ok ? "ok" : "VIOLATED");
    if (!rep.ok) std::printf(" (%zu elements, first %d)", rep.elements.size(), rep.elements.empty() ? -1 : rep.elements[0]);
    std::printf("\n");
    ok = ok && rep.ok;
  }
  return ok ? kOk : kAssumption;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unfitted Nitsche finite elements with gradient recovery"};
  app.require_subcommand(1);
  Overrides o;
  int level = 0;
  auto* solve = app.add_subcommand("solve", "solve one level and print its errors");
  add_common(solve, o);
  solve->add_option("--level", level, "level index (0 = coarsest)");
  auto* study = app.add_subcommand("study", "convergence table over all levels");
  add_common(study, o);
  auto* mesh = app.add_subcommand("mesh", "write the initial mesh as mesh.node / mesh.ele");
  add_common(mesh, o);
  auto* check = app.add_subcommand("check", "audit the interface crossing condition on every level");
  add_common(check, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (solve->parsed()) return cmd_solve(o, level);
    if (study->parsed()) return cmd_study(o);
    if (mesh->parsed()) return cmd_mesh(o);
    if (check->parsed()) return cmd_check(o);
  } catch (const nitsche::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const nitsche::AssumptionViolation& e) {
    std::cerr << "assumption violated: " << e.what() << '\n';
    return kAssumption;
  } catch (const nitsche::BudgetExceeded& e) {
    std::cerr << "assumption violated: " << e.what() << '\n';
    return kAssumption;
  } catch (const nitsche::NotConverged& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  } catch (const nitsche::IndefiniteDetected& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
