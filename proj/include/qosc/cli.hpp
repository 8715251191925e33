#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include "qosc/qcore.hpp"
#include "qosc/qhermite.hpp"

namespace qosc::cli {

enum class Command { Spectrum, Hamiltonian, Polys, Eigenfunction, Transform, Locate, Verdict, Verify };
enum class Format { Json, Csv };

constexpr int kSchemaVersion = 1;

struct CliConfig {
  Command command = Command::Verify;
  double q = 2.0;
  std::optional<double> b;
  std::optional<double> b_prime;
  std::optional<std::pair<int, int>> window;
  std::optional<int> n_max;
  Format format = Format::Json;
  Tolerance tol;
  std::optional<std::string> output;

  Kind kind = Kind::Position;
  std::optional<double> x;       // polys / eigenfunction argument, locate x0
  std::optional<double> y;       // eigenfunction variable
  std::optional<int> state;      // Fock level whose grid image spectrum exports
  std::string matrix = "F";      // transform: F or T
  std::optional<int> validate;   // transform spot checks
  int threads = 0;
  std::string op = "position";   // verdict: position, momentum or undeformed
  std::optional<int> n_probe;
};

/// Exit codes.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

/// Tolerance defaults, with QOSC_REL_TOL, QOSC_TAIL_EPS and QOSC_MAX_TERMS
/// applied when set. Throws std::invalid_argument on malformed values.
Tolerance default_tolerance();

/// Dispatches one command, writing its document to `out` (or to
/// config.output) and diagnostics to `err`.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv into a CliConfig and runs it.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qosc::cli
