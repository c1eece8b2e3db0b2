#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsp/protocol.hpp"

// Command-line front end: argument parsing, report construction and
// JSON/CSV emission for the run/exact/simulate/sweep/validate modes.

namespace rsp {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was requested; carries the help text to print on stdout.
struct HelpRequested {
  std::string text;
};

enum class Mode { Run, Exact, Simulate, Sweep, Validate };

enum class OutputFormat { Json, Csv };

struct RunConfig {
  Mode mode = Mode::Exact;
  std::optional<std::array<Amplitude, 4>> target;
  double a = 0.70710678118654752440;  // channel defaults to two EPR pairs
  double c = 0.70710678118654752440;
  std::optional<std::uint64_t> trials;
  std::uint64_t seed = 0;
  std::optional<Outcome> forced_outcome;
  std::optional<AuxOutcome> forced_aux;
  double step = 0.1;
  OutputFormat format = OutputFormat::Json;
  std::optional<std::string> out_path;
};

/// Parses one complex literal: "re" or "re+imj" (also "re-imj" and a bare
/// imaginary "imj"). Throws UsageError on malformed input.
Amplitude parse_complex_literal(const std::string& text);

/// Parses the argument vector (without the program name). Throws
/// UsageError on malformed input or constraint violations, HelpRequested
/// for --help.
RunConfig parse_args(const std::vector<std::string>& args);

/// Runs the configured mode, writing the report to `out` (or the
/// configured file) and diagnostics to `err`. Returns the exit status.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full entry point used by the rsp binary.
int cli_main(int argc, const char* const* argv);

}  // namespace rsp
