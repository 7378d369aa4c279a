#pragma once

#include "qtel/formulas.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtel {

/// Configuration error with the offending line number (0 = whole file).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A probability entry that is either a literal or a reference to a grid
/// variable ($name).
struct Param {
  bool is_var = false;
  double value = 0.0;
  std::string var;
};

struct NoiseTemplate {
  NoiseKind kind = NoiseKind::None;
  Param p;              // single strength
  Param p1, p2;         // split amplitude-damping strengths
  bool split_ad = false;
};

struct CadTemplate {
  Param eta, p1, p2;
  bool swap_pairing = false;
};

struct ScenarioTemplate {
  NoiseTemplate input, alice, bob;
  std::optional<CadTemplate> cad;
};

struct AveragingSpec {
  enum class Method { Quadrature, MonteCarlo };
  Method method = Method::Quadrature;
  QuadratureSpec quadrature;
  int samples = 100000;
  std::uint64_t seed = 1;
};

struct OutputSpec {
  enum class Format { Csv, Json };
  std::string path;
  Format format = Format::Csv;
};

struct SweepConfig {
  ScenarioTemplate scenario;
  std::vector<std::pair<std::string, std::vector<double>>> grids;  // config order
  AveragingSpec averaging;
  OutputSpec output;
  std::string compare;  // registry name for the closed-form column, may be empty

  /// Bind grid variables to concrete values (same order as `grids`).
  TeleportScenario bind(const std::vector<double>& values) const;
};

/// Parse the plain-text key-value tree format (grammar in the README).
/// Throws ConfigError with a line number on unknown keys, missing grids,
/// unused grids and out-of-range probabilities.
SweepConfig parse_config(const std::string& text);

struct SweepRow {
  std::vector<double> values;  // one per grid, config order
  double f_avg = 0.0;
  std::optional<double> f_closed_form;
  std::optional<double> abs_diff;
};

/// Cartesian product of the grids in lexicographic order (first grid
/// outermost); rows are evaluated in parallel but emitted in grid order.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

void write_csv(std::ostream& os, const SweepConfig& cfg,
               const std::vector<SweepRow>& rows);
void write_json(std::ostream& os, const SweepConfig& cfg,
                const std::vector<SweepRow>& rows);

/// Render rows to the configured format and path ("-" or empty = stdout).
void write_output(const SweepConfig& cfg, const std::vector<SweepRow>& rows,
                  const std::string& path_override = "");

}  // namespace qtel
