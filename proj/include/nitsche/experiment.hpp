#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nitsche/analysis.hpp"
#include "nitsche/assembly.hpp"
#include "nitsche/examples.hpp"
#include "nitsche/report.hpp"
#include "nitsche/solver.hpp"

namespace nitsche {

/// User-defined problem with constant coefficients and affine branches
/// u_i = c0 + c1 x + c2 y, for which the discrete solution is exact.
struct CustomProblem {
  std::string interface = "line";        // "line" or a catalog name
  std::array<double, 3> line{1.0, 0.0, -0.5};  // a x + b y + c = 0
  double beta1 = 1.0, beta2 = 1.0;
  std::array<double, 3> u1{0.0, 1.0, 0.0};
  std::array<double, 3> u2{0.0, 1.0, 0.0};
};

struct ExperimentConfig {
  std::string example = "ex51a";
  int levels = 0;  // 0: four, capped so uniform studies stop at h = 1/256
  int uniform_n0 = 0;  // first uniform mesh (h = 2 / n); 0 takes the example default
  int n0 = 0;           // coarse grid of the adaptive initial mesh; 0 takes the example default
  double theta = 0.8;
  int max_levels = -1;  // -1 takes the example default
  double solver_tol = 1e-10;
  int solver_maxit = 0;
  QPenaltyScaling q_penalty_scaling = QPenaltyScaling::WithHinv;
  std::string output_dir = "results";
  bool emit_fields = false;
  int curved_subdivisions = 8;
  int polyline_samples = 4096;
  CustomProblem custom;
};

/// Sets one key; throws ConfigError naming the key on bad input.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);
/// Flat "key = value" lines; '#' starts a comment. Errors carry source:line.
void parse_config(std::istream& in, const std::string& source, ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);

/// Example by name, including "custom" built from cfg.custom.
Example resolve_example(const ExperimentConfig& cfg);

/// cfg.uniform_n0, or the example's default when it is 0.
int first_uniform_n(const Example& ex, const ExperimentConfig& cfg);

/// cfg.levels, or the desk-scale default when it is 0.
int study_levels(const Example& ex, const ExperimentConfig& cfg);

/// Initial-mesh options; the look-ahead covers the `levels` study sweeps.
AdaptiveOptions adaptive_options(const Example& ex, const ExperimentConfig& cfg);

/// Mesh of row k of the study (0-based).
std::vector<Mesh> study_meshes(const Example& ex, const ExperimentConfig& cfg);

struct StageTimes {
  double geometry = 0, assembly = 0, solve = 0, recovery = 0, errors = 0;
};

/// Everything computed on one mesh.
struct LevelState {
  Mesh mesh;
  CutGeometry geo;
  std::unique_ptr<DofMap> dofmap;
  PairedField uh;
  RecoveredGradient recovered;
  SolveReport solve;
  ErrorTriple errors;
  double eta = 0.0;
  double effectivity = 0.0;
  double supercloseness = 0.0;  // mesh-dependent norm of u_h - I u
  double seconds = 0.0;
  StageTimes times;
};

/// classify, cut, assemble, solve, recover, measure. h is the leg length of
/// the finest element (2 / n on uniform meshes).
std::unique_ptr<LevelState> solve_level(const Example& ex, Mesh mesh, const ExperimentConfig& cfg);

struct StudyResult {
  std::string example;
  ConvergenceReport report;
  std::vector<SolveReport> solves;
  std::vector<double> eta, effectivity, supercloseness, seconds;
  std::vector<int> cut_elements;
};

/// Runs every level; with emit_fields also writes the per-level fields.
StudyResult run_study(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// Writes <output_dir>/<example>/convergence.csv, convergence.txt, diagnostics.csv.
void write_study(const StudyResult& res, const ExperimentConfig& cfg);

/// Writes solution_s{1,2}.{vtk,csv} and recovered_s{1,2}.{vtk,csv} into dir.
void emit_fields(const LevelState& state, const std::string& dir);

}  // namespace nitsche
