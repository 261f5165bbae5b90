#pragma once

// Experiment configuration, validation and dispatch for the command-line driver.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "peierls/exact_gibbs.hpp"
#include "peierls/lattice.hpp"
#include "peierls/model.hpp"

namespace peierls::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitViolation = 4;

inline constexpr const char* kOutputDirVariable = "PEIERLS_OUTPUT_DIR";

struct ExperimentConfig {
  std::string command;

  std::string model = "ising";
  int d = 2;
  int N = 1;
  double T = 1.0;
  double eps = 0.0;
  int q = 3;
  int bc = 1;
  std::uint64_t seed = 1;
  // Unset: a per-command default.
  std::optional<int> replicas;
  std::uint64_t budget = kDefaultEnumerationBudget;
  int workers = 1;
  std::string out;

  // exact: Delta table over simply connected sets with at most this many cells
  int max_cells = 2;
  int rotation = 1;

  // mcmc
  std::uint64_t sweeps = 20000;
  std::optional<std::uint64_t> burn_in;
  int chains = 16;

  // animals
  std::string task = "counts";
  int max_boundary = 10;
  std::string mode = "rectangles";
  std::vector<int> dims{2};
  std::vector<int> radii{8};
  int steps = 20000;
  int restarts = 4;

  // audit
  std::string lemma = "one-point";
  std::string set_a = "singleton";
  std::string set_b = "(1,0)";
  std::vector<double> lambdas{0.25, 0.5, 1.0};
  std::vector<double> eps_list;
  std::optional<int> dyadic;

  // psi
  double threshold = 0.5;
  int max_radius = 16;

  ModelParams params() const;
  /// Every field, keys sorted. The config hash uses all of them except `out`.
  nlohmann::json to_json() const;
};

enum class DiagnosticKind { config, budget };

struct Diagnostic {
  DiagnosticKind kind = DiagnosticKind::config;
  std::string field;
  std::string message;
  std::string text() const { return field + ": " + message; }
};

/// Every constraint violation, not just the first.
std::vector<Diagnostic> validate(const ExperimentConfig& config);

/// "singleton", "domino", "origin" or "(x,y);(x,y);..." in dimension d.
SiteSet parse_set(const std::string& text, int d);

struct RunResult {
  int exit_code = kExitOk;
  /// Artifact text (CSV or JSON); empty on error.
  std::string content;
  std::string extension;
  std::vector<std::string> errors;
};

/// Validates, runs, and renders the artifact. Never throws for bad input.
RunResult run(const ExperimentConfig& config);

/// FNV-1a 64 of the canonical config JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::string& path, const std::string& content);

/// Parses argv (config file, then flags overriding it). Returns an exit code
/// when the process should stop (help, parse error); otherwise nullopt.
std::optional<int> parse_command_line(int argc, const char* const* argv, ExperimentConfig& config, bool& check_only);

/// Whole program: parse, run, write the artifact and its manifest.
int main_entry(int argc, const char* const* argv);

}  // namespace peierls::cli
