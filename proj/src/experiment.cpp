#include "nitsche/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nitsche/errors.hpp"
#include "nitsche/field_io.hpp"

namespace nitsche {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int to_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  int out = 0;
  try {
    out = std::stoi(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::array<double, 3> to_triple(const std::string& key, const std::string& v) {
  std::array<double, 3> out{};
  std::stringstream ss(v);
  std::string item;
  int k = 0;
  while (std::getline(ss, item, ',')) {
    if (k == 3) throw ConfigError(key + ": expected three comma-separated numbers");
    out[k++] = to_double(key, trim(item));
  }
  if (k != 3) throw ConfigError(key + ": expected three comma-separated numbers");
  return out;
}

ScalarField affine(std::array<double, 3> c) {
  return [c](Point2 p) { return c[0] + c[1] * p.x + c[2] * p.y; };
}

}  // namespace

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "example") {
    cfg.example = v;
  } else if (key == "levels") {
    cfg.levels = to_int(key, v);
  } else if (key == "uniform_n0") {
    cfg.uniform_n0 = to_int(key, v);
  } else if (key == "n0") {
    cfg.n0 = to_int(key, v);
  } else if (key == "theta") {
    cfg.theta = to_double(key, v);
  } else if (key == "max_levels") {
    cfg.max_levels = to_int(key, v);

  } else if (key == "solver_tol") {
    cfg.solver_tol = to_double(key, v);
  } else if (key == "solver_maxit") {
    cfg.solver_maxit = to_int(key, v);
  } else if (key == "q_penalty_scaling") {
    if (v == "with_hinv") {
      cfg.q_penalty_scaling = QPenaltyScaling::WithHinv;
    } else if (v == "paper_literal") {
      cfg.q_penalty_scaling = QPenaltyScaling::WithoutHinv;
    } else {
      throw ConfigError(key + ": expected with_hinv or paper_literal, got '" + v + "'");
    }
  } else if (key == "output_dir") {
    cfg.output_dir = v;
  } else if (key == "emit_fields") {
    cfg.emit_fields = to_bool(key, v);
  } else if (key == "curved_subdivisions") {
    cfg.curved_subdivisions = to_int(key, v);
  } else if (key == "polyline_samples") {
    cfg.polyline_samples = to_int(key, v);
  } else if (key == "custom.interface") {
    cfg.custom.interface = v;
  } else if (key == "custom.line") {
    cfg.custom.line = to_triple(key, v);
  } else if (key == "custom.beta1") {
    cfg.custom.beta1 = to_double(key, v);
  } else if (key == "custom.beta2") {
    cfg.custom.beta2 = to_double(key, v);
  } else if (key == "custom.u1") {
    cfg.custom.u1 = to_triple(key, v);
  } else if (key == "custom.u2") {
    cfg.custom.u2 = to_triple(key, v);
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

void parse_config(std::istream& in, const std::string& source, ExperimentConfig& cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    try {
      set_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.levels < 0) throw ConfigError("levels: must be 0 (default) or positive");
  if (cfg.uniform_n0 != 0 && cfg.uniform_n0 < 2) throw ConfigError("uniform_n0: must be 0 or at least 2");
  if (cfg.n0 != 0 && cfg.n0 < 2) throw ConfigError("n0: must be 0 or at least 2");
  if (!(cfg.theta > 0)) throw ConfigError("theta: must be positive");
  if (cfg.max_levels < -1) throw ConfigError("max_levels: must be -1 (example default) or non-negative");
  if (!(cfg.solver_tol > 0 && cfg.solver_tol < 1)) throw ConfigError("solver_tol: must lie in (0, 1)");
  if (cfg.solver_maxit < 0) throw ConfigError("solver_maxit: must be non-negative");
  if (cfg.curved_subdivisions < 1) throw ConfigError("curved_subdivisions: must be at least 1");
  if (cfg.polyline_samples < 16) throw ConfigError("polyline_samples: must be at least 16");
  if (!(cfg.custom.beta1 > 0 && cfg.custom.beta2 > 0)) throw ConfigError("custom.beta1/beta2: must be positive");
  bool known = cfg.example == "custom";
  for (const auto& n : example_names()) known = known || n == cfg.example;
  if (!known) throw ConfigError("example: unknown example '" + cfg.example + "'");
}

Example resolve_example(const ExperimentConfig& cfg) {
  if (cfg.example != "custom") return make_example(cfg.example, cfg.polyline_samples);
  const auto& c = cfg.custom;
  Example ex;
  ex.name = "custom";
  ex.title = "custom affine problem";
  try {
    ex.iface = c.interface == "line" ? line_interface(c.line[0], c.line[1], c.line[2])
                                     : make_interface(c.interface, cfg.polyline_samples);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("custom.interface: ") + e.what());
  }
  const double b1 = c.beta1, b2 = c.beta2;
  auto& pb = ex.problem;
  pb.beta = {[b1](Point2) { return b1; }, [b2](Point2) { return b2; }};
  pb.source = {[](Point2) { return 0.0; }, [](Point2) { return 0.0; }};
  pb.exact_u = {affine(c.u1), affine(c.u2)};
  const Vec2 g1{c.u1[1], c.u1[2]}, g2{c.u2[1], c.u2[2]};
  pb.exact_grad = {[g1](Point2) { return g1; }, [g2](Point2) { return g2; }};
  return ex;
}

AdaptiveOptions adaptive_options(const Example& ex, const ExperimentConfig& cfg) {
  AdaptiveOptions opts;
  opts.theta = cfg.theta;
  opts.n0 = cfg.n0 > 0 ? cfg.n0 : ex.adaptive_n0;
  opts.max_levels = cfg.max_levels >= 0 ? cfg.max_levels : ex.max_levels;
  opts.lookahead = study_levels(ex, cfg);
  return opts;
}

int study_levels(const Example& ex, const ExperimentConfig& cfg) {
  if (cfg.levels > 0) return cfg.levels;
  if (ex.adaptive) return 4;
  const int n0 = first_uniform_n(ex, cfg);
  int k = 0;
  while (k < 4 && (n0 << k) <= 512) ++k;
  return std::max(k, 1);
}

int first_uniform_n(const Example& ex, const ExperimentConfig& cfg) {
  return cfg.uniform_n0 > 0 ? cfg.uniform_n0 : ex.uniform_n0;
}

std::vector<Mesh> study_meshes(const Example& ex, const ExperimentConfig& cfg) {
  std::vector<Mesh> meshes;
  if (!ex.adaptive) {
    const int n0 = first_uniform_n(ex, cfg);
    for (int k = 0; k < study_levels(ex, cfg); ++k) meshes.push_back(uniform_mesh(n0 << k));
    return meshes;
  }
  meshes.push_back(adaptive_initial_mesh(ex.iface, adaptive_options(ex, cfg)).mesh);
  for (int k = 0; k < study_levels(ex, cfg); ++k) meshes.push_back(red_refine(meshes.back()));
  return meshes;
}

std::unique_ptr<LevelState> solve_level(const Example& ex, Mesh mesh, const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  auto last = start;
  auto lap = [&last] {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last).count();
    last = now;
    return s;
  };
  auto st = std::make_unique<LevelState>();
  st->mesh = std::move(mesh);
  const auto& pb = ex.problem;
  st->geo = build_cut_geometry(st->mesh, ex.iface, pb.beta[0], pb.beta[1]);
  st->dofmap = std::make_unique<DofMap>(st->mesh, st->geo.classification);
  const DofMap& dm = *st->dofmap;
  st->times.geometry = lap();

  AssemblyOptions aopts;
  aopts.q_penalty = cfg.q_penalty_scaling;
  const auto sys = assemble(st->geo, dm, pb, aopts);
  st->times.assembly = lap();
  SolveOptions sopts;
  sopts.tol = cfg.solver_tol;
  sopts.maxit = cfg.solver_maxit;
  auto sol = solve(sys, sopts);
  st->times.solve = lap();
  st->solve = sol.report;
  st->uh = PairedField(dm, std::move(sol.x));
  st->recovered = uppr(dm, st->uh);
  st->times.recovery = lap();

  if (pb.has_exact()) {
    ErrorOptions eopts;
    eopts.subdivisions = cfg.curved_subdivisions;
    st->errors = error_norms(st->geo, dm, ex.iface, pb, st->uh, st->recovered, eopts);
    const auto est = estimate(st->geo, dm, st->uh, st->recovered, pb.beta);
    st->eta = est.eta;
    st->effectivity = st->errors.energy > 0 ? est.eta / st->errors.energy : std::nan("");
    PairedField diff = interpolate_exact(pb, dm);
    for (int d = 0; d < dm.n_dofs(); ++d) diff.coefficients[d] -= st->uh.coefficients[d];
    st->supercloseness = mesh_norm(st->geo, dm, diff);
  }
  st->times.errors = lap();
  st->errors.ndofs = dm.n_dofs();
  st->errors.h = st->mesh.max_h() / std::sqrt(2.0);
  st->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return st;
}

StudyResult run_study(const ExperimentConfig& cfg, std::ostream* log) {
  validate(cfg);
  const Example ex = resolve_example(cfg);
  auto meshes = study_meshes(ex, cfg);
  StudyResult res;
  res.example = ex.name;
  std::vector<ErrorTriple> rows;
  for (std::size_t k = 0; k < meshes.size(); ++k) {
    auto st = solve_level(ex, std::move(meshes[k]), cfg);
    if (log) {
      const auto& t = st->times;
      *log << ex.name << " level " << k << ": " << st->errors.ndofs << " dofs, " << st->solve.iterations
           << " CG iterations, " << st->seconds << " s (geometry " << t.geometry << ", assembly " << t.assembly
           << ", solve " << t.solve << ", recovery " << t.recovery << ", errors " << t.errors << ")\n";
    }
    rows.push_back(st->errors);
    res.solves.push_back(st->solve);
    res.eta.push_back(st->eta);
    res.effectivity.push_back(st->effectivity);
    res.supercloseness.push_back(st->supercloseness);
    res.seconds.push_back(st->seconds);
    res.cut_elements.push_back(static_cast<int>(st->geo.cuts.size()));
    if (cfg.emit_fields) {
      emit_fields(*st, (std::filesystem::path(cfg.output_dir) / ex.name / ("level" + std::to_string(k))).string());
    }
  }
  res.report = make_report(std::move(rows), ex.adaptive);
  return res;
}

void write_study(const StudyResult& res, const ExperimentConfig& cfg) {
  const auto dir = std::filesystem::path(cfg.output_dir) / res.example;
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw Error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("convergence.csv");
    write_csv(res.report, f);
  }
  {
    auto f = open("convergence.txt");
    write_table(res.report, f);
  }
  auto f = open("diagnostics.csv");
  f << "level,ndofs,cut_elements,cg_iterations,cg_residual,eta,effectivity,supercloseness\n";
  char buf[256];
  for (std::size_t k = 0; k < res.report.rows.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%d,%d,%d,%.3e,%.6e,%.6f,%.6e\n", k, res.report.rows[k].ndofs,
                  res.cut_elements[k], res.solves[k].iterations, res.solves[k].residual, res.eta[k],
                  res.effectivity[k], res.supercloseness[k]);
    f << buf;
  }
}

void emit_fields(const LevelState& st, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (Side s : kSides) {
    const std::string tag = "_s" + std::to_string(index(s) + 1);
    auto open = [&](const std::string& name) {
      std::ofstream f(std::filesystem::path(dir) / name);
      if (!f) throw Error("cannot write " + (std::filesystem::path(dir) / name).string());
      return f;
    };
    {
      auto f = open("solution" + tag + ".vtk");
      write_solution_vtk(st.uh, s, f);
    }
    {
      auto f = open("solution" + tag + ".csv");
      write_solution_csv(st.uh, s, f);
    }
    {
      auto f = open("recovered" + tag + ".vtk");
      write_recovered_vtk(st.recovered, s, f);
    }
    auto f = open("recovered" + tag + ".csv");
    write_recovered_csv(st.recovered, s, f);
  }
}

}  // namespace nitsche
