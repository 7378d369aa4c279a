#pragma once

#include "qtel/fidelity.hpp"

#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace qtel {

/// How a reference expression ties the three noise strengths together.
enum class FormulaVariant {
  InputOnly,    // noise on the input qutrit only, variable pI
  InputBob,     // input + Bob channel noise, variables (pI, pB)
  AliceTied,    // pI = pA = p, variables (p[, pB])
  ChannelTied,  // pA = pB = p, variables ([pI,] p)
  Cad,          // correlated damping, variables (p, eta)
};

const char* to_string(FormulaVariant v);

/// One published closed-form average-fidelity expression, kept verbatim as a
/// hypothesis to audit against the simulator.
struct Formula {
  std::string name;  // e.g. "BF,non,AD"; "|ch" marks the channel-tied variant
  NoiseKind input;
  NoiseKind alice;
  NoiseKind bob;
  FormulaVariant variant;
  std::vector<std::string> vars;  // free variables, in evaluation order
  double (*closed)(const double*);
  const char* expression;  // human-readable form of the evaluated expression
};

const std::vector<Formula>& formula_registry();
const Formula* find_formula(std::string_view name);  // nullptr when absent

/// Evaluates the stored expression; throws on arity mismatch.
double closed_form(const Formula& f, const std::vector<double>& probs);

/// The simulation scenario the expression describes at the given point.
TeleportScenario scenario_for(const Formula& f, const std::vector<double>& probs);

/// Quadrature is near-exact here; a real transcription error in a reference
/// expression shows up at the 1e-3 level or worse.
inline constexpr double kVerifyTol = 1e-8;

struct VerifyRow {
  const Formula* formula = nullptr;
  std::vector<double> point;
  double simulated = 0.0;
  double closed = 0.0;
  double abs_diff = 0.0;
  bool match = false;
};

/// Compare simulation against the expression on the cartesian grid (one axis
/// per free variable). A mismatch is a finding, not an error.
std::vector<VerifyRow> verify_formula(const Formula& f,
                                      const std::vector<double>& grid,
                                      const QuadratureSpec& q = {});

/// verify_formula over the whole registry, evaluated in parallel.
std::vector<VerifyRow> verify_all(const std::vector<double>& grid,
                                  const QuadratureSpec& q = {});

/// Names of formulas with at least one mismatching grid point.
std::set<std::string> discrepant_names(const std::vector<VerifyRow>& rows);

void write_verify_report(std::ostream& os, const std::vector<VerifyRow>& rows);

// ---- correlated-damping eta probe ----

struct CadProbeRow {
  double p = 0.0;
  double eta = 0.0;
  double simulated = 0.0;
  double registry_value = 0.0;      // the CAD reference expression
  double uncorrelated_value = 0.0;  // the non,AD,AD reference expression
};

struct CadProbeReport {
  std::vector<double> p_grid;
  std::vector<double> eta_grid;
  std::vector<CadProbeRow> rows;  // p-major order

  /// max over eta minus min over eta of the simulated value at fixed p.
  double eta_variation(double p) const;
};

CadProbeReport cad_eta_probe(const std::vector<double>& p_grid,
                             const std::vector<double>& eta_grid,
                             const QuadratureSpec& q = {});

void write_cad_report(std::ostream& os, const CadProbeReport& report);

// ---- cross-combination ordering table ----

struct OrderingRow {
  char label;                      // 'a'..'d'
  NoiseKind kind;                  // the noise family the row compares
  std::vector<std::string> chain;  // registry names, all variables tied to p
  std::string ops;                 // relation between consecutive entries, '<' or '='
};

const std::vector<OrderingRow>& ordering_table();

inline constexpr double kOrderingEqualityTol = 1e-9;
inline constexpr double kOrderingStrictMargin = 1e-6;

struct RelationVerdict {
  std::string lhs, rhs;
  char op = '<';
  double lhs_value = 0.0, rhs_value = 0.0;  // simulated
  bool holds = false;
  bool lhs_flagged = false, rhs_flagged = false;  // registry-audit status
};

/// Evaluate one row's chain from simulated values at probability p. `flagged`
/// carries the names whose reference expressions failed the registry audit.
std::vector<RelationVerdict> evaluate_ordering_row(
    const OrderingRow& row, double p, const std::set<std::string>& flagged,
    const QuadratureSpec& q = {});

void write_ordering_report(std::ostream& os, const std::vector<double>& p_values,
                           const std::set<std::string>& flagged,
                           const QuadratureSpec& q = {});

}  // namespace qtel
