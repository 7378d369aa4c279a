// Acceptance gate: one pass/fail line per criterion. Exit code is the number
// of failed criteria. Run a single criterion with --criterion N.

#include "qtel/sweep.hpp"

#include <cstring>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace qtel;

namespace {

struct Checker {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "      FAILED: " << what << "\n";
    }
  }
  void note(const std::string& what) { detail << "      " << what << "\n"; }
};

Vector random_complex_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector psi(3);
  for (int i = 0; i < 3; ++i) psi(i) = Complex(unif(rng), unif(rng));
  psi.normalize();
  return psi;
}

Matrix random_density(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(unif(rng), unif(rng));
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(12) << v;
  return os.str();
}

// 1. noiseless protocol: uniform probabilities and unit fidelity
void criterion1(Checker& c) {
  std::mt19937_64 rng(1001);
  double worst_prob = 0.0, worst_fid = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vector psi = random_complex_state(rng);
    for (const auto& o : teleport(psi, TeleportScenario{})) {
      worst_prob = std::max(worst_prob, std::abs(o.probability - 1.0 / 9.0));
      worst_fid = std::min(worst_fid, state_fidelity(psi, o.bob_corrected));
    }
  }
  c.note("max |P(j) - 1/9| = " + fmt(worst_prob) + ", min fidelity = " + fmt(worst_fid));
  c.require(worst_prob <= 1e-10, "outcome probabilities uniform within 1e-10");
  c.require(worst_fid >= 1.0 - 1e-10, "corrected fidelity 1 within 1e-10");
}

// 2. channel validity: completeness and valid-to-valid over a 21-point grid
void criterion2(Checker& c) {
  std::mt19937_64 rng(1002);
  double worst_defect = 0.0;
  bool all_valid = true;
  for (int i = 0; i <= 20; ++i) {
    const double p = i / 20.0;
    const std::vector<KrausSet> sets = {
        bit_flip_kraus(p), phase_flip_kraus(p), depolarizing_kraus(p),
        amplitude_damping_kraus(p, p), cad_kraus({p, p, p})};
    for (const KrausSet& k : sets) {
      worst_defect = std::max(worst_defect, completeness_defect(k));
      const Matrix rho = random_density(k.dim, rng);
      all_valid = all_valid && check_density(apply_channel_raw(rho, k)).ok;
    }
  }
  c.note("max completeness defect = " + fmt(worst_defect));
  c.require(worst_defect <= 1e-10, "completeness within 1e-10 for all families");
  c.require(all_valid, "every channel maps valid states to valid states");
}

// 3. input-only reference expressions at p in {0, .25, .5, .75, 1}
void criterion3(Checker& c) {
  for (const char* name : {"BF,non,non", "PF,non,non", "DP,non,non", "AD,non,non"}) {
    const Formula* f = find_formula(name);
    double worst = 0.0, worst_sim = 0.0, worst_cf = 0.0, worst_p = 0.0;
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double sim = average_fidelity(scenario_for(*f, {p}));
      const double cf = closed_form(*f, {p});
      if (std::abs(sim - cf) > worst) {
        worst = std::abs(sim - cf);
        worst_sim = sim;
        worst_cf = cf;
        worst_p = p;
      }
    }
    if (worst <= 1e-8) {
      c.note(std::string(name) + ": matches, worst |diff| = " + fmt(worst));
    } else {
      c.note(std::string(name) + ": at p=" + fmt(worst_p) + " simulated " +
             fmt(worst_sim) + " vs reference " + fmt(worst_cf));
    }
    c.require(worst <= 1e-8, std::string(name) + " within 1e-8 on the grid");
  }
}

// 4. endpoint values: the 1/5 bit-flip point and every stated 1/3 corner
void criterion4(Checker& c) {
  const double bf1 = average_fidelity(scenario_for(*find_formula("BF,non,non"), {1}));
  c.note("full input bit flip: " + fmt(bf1));
  c.require(std::abs(bf1 - 0.2) <= 1e-9, "full input bit flip gives 1/5");

  struct Corner {
    const char* name;
    std::vector<std::vector<double>> points;
  };
  // each scenario at the corner its constant-1/3 claim is stated for
  const std::vector<Corner> corners = {
      {"AD,non,AD", {{1, 0}, {1, 0.5}, {1, 1}}},
      {"BF,BF,AD", {{1, 1}}},
      {"PF,PF,AD", {{0, 1}, {0.5, 1}, {1, 1}}},
      {"DP,DP,AD", {{0, 1}, {0.5, 1}, {1, 1}}},
      {"AD,AD,AD", {{1, 1}}},
      {"AD,BF,BF", {{1, 0}, {1, 0.5}, {1, 1}}},
  };
  for (const Corner& corner : corners) {
    const Formula* f = find_formula(corner.name);
    for (const auto& pt : corner.points) {
      const double sim = average_fidelity(scenario_for(*f, pt));
      std::ostringstream label;
      label << corner.name << " at (" << pt[0] << ", " << pt[1] << ")";
      c.require(std::abs(sim - 1.0 / 3.0) <= 1e-9,
                label.str() + " equals 1/3 (got " + fmt(sim) + ")");
    }
  }
}

// 5. registry audit: completes, reports both values, required matches hold
void criterion5(Checker& c) {
  const std::vector<double> grid{0, 0.25, 0.5, 0.75, 1};
  const auto rows = verify_all(grid);
  std::ostringstream report;
  write_verify_report(report, rows);
  const std::string text = report.str();

  size_t match_count = 0, disc_count = 0;
  for (const VerifyRow& r : rows) {
    if (r.match) ++match_count;
    else ++disc_count;
    if (r.point == std::vector<double>(r.point.size(), 0.0))
      c.require(r.match, r.formula->name + " matches at the all-zero point");
  }
  c.note("grid points checked: " + std::to_string(rows.size()) + " (" +
         std::to_string(match_count) + " match, " + std::to_string(disc_count) +
         " discrepant)");

  for (const char* name : {"BF,non,non", "PF,non,non", "AD,non,non"}) {
    bool all = true;
    for (const VerifyRow& r : rows)
      if (r.formula->name == name && !r.match) all = false;
    c.require(all, std::string(name) + " verdict=match across the grid");
  }

  // discrepancy entries carry both values in the emitted report
  c.require(text.find("simulated") != std::string::npos &&
                text.find("reference") != std::string::npos,
            "report shows both values for flagged entries");
  c.require(text.find("DISCREPANCY") != std::string::npos,
            "flagged entries are present in the report");
}

// 6. cross-oracle: Monte Carlo vs quadrature on 20 random scenarios
void criterion6(Checker& c) {
  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 4);
  double worst_sigma = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    TeleportScenario s;
    if (trial % 5 == 4) {
      s.cad = CadParams{unif(rng), unif(rng), unif(rng)};
      s.input = NoiseSpec::of(static_cast<NoiseKind>(kind(rng)), unif(rng));
    } else {
      s.input = NoiseSpec::of(static_cast<NoiseKind>(kind(rng)), unif(rng));
      s.alice = NoiseSpec::of(static_cast<NoiseKind>(kind(rng)), unif(rng));
      s.bob = NoiseSpec::of(static_cast<NoiseKind>(kind(rng)), unif(rng));
    }
    const double quad = average_fidelity(s);
    const MonteCarloEstimate mc = monte_carlo_average(s, 100000, 5000 + trial);
    const double sigmas =
        std::abs(mc.mean - quad) / std::max(mc.std_error, 1e-14);
    worst_sigma = std::max(worst_sigma, sigmas);
  }
  c.note("worst deviation = " + fmt(worst_sigma) + " standard errors");
  c.require(worst_sigma <= 4.0, "Monte Carlo within 4 standard errors of quadrature");
}

// 7. correlated damping: eta=0 column and the eta-independence adjudication
void criterion7(Checker& c) {
  const std::vector<double> ps{0, 0.25, 0.5, 0.75, 1};
  const auto rep = cad_eta_probe(ps, {0, 0.5, 1});

  double worst = 0.0;
  for (const CadProbeRow& r : rep.rows)
    if (r.eta == 0.0)
      worst = std::max(worst, std::abs(r.simulated - r.uncorrelated_value));
  c.note("eta=0 worst |diff| from 2p^2/3 - 16p/15 + 1: " + fmt(worst));
  c.require(worst <= 1e-8, "eta=0 reproduces the uncorrelated reference");

  c.require(rep.rows.size() == ps.size() * 3, "probe covers the full (p, eta) grid");
  c.require(rep.eta_variation(0.0) <= 1e-9, "p=0 column eta-invariant");
  c.require(rep.eta_variation(1.0) <= 1e-9, "p=1 column eta-invariant");

  std::ostringstream os;
  write_cad_report(os, rep);
  c.require(os.str().find("adjudication") != std::string::npos,
            "probe emits its adjudication table");
  c.note("interior spread across eta at p=0.5: " + fmt(rep.eta_variation(0.5)) +
         " (the independence claim is adjudicated against simulation)");
}

// 8. ordering chains at p = 0.7 and p = 1 from simulated values,
//    with explicit adjudication wherever a published relation fails
void criterion8(Checker& c) {
  const auto audit = verify_all({0, 0.25, 0.5, 0.75, 1});
  const auto flagged = discrepant_names(audit);

  for (double p : {0.7, 1.0}) {
    for (const OrderingRow& row : ordering_table()) {
      for (const RelationVerdict& v : evaluate_ordering_row(row, p, flagged)) {
        if (v.holds) continue;
        std::ostringstream os;
        os << "p=" << p << " row (" << row.label << "): " << v.lhs << " " << v.op
           << " " << v.rhs << " violated; simulated " << fmt(v.lhs_value) << " vs "
           << fmt(v.rhs_value)
           << (v.lhs_flagged || v.rhs_flagged
                   ? " (involves a flagged reference expression)"
                   : " (the published ordering itself disagrees with simulation)");
        if (p == 1.0) {
          c.require(false, os.str());  // at p=1 every chain must hold outright
        } else {
          c.note("adjudicated: " + os.str());
        }
      }
    }
  }
  // representative chain that must hold at both probabilities
  for (const RelationVerdict& v :
       evaluate_ordering_row(ordering_table()[0], 0.7, flagged))
    c.require(v.holds, "bit-flip chain holds at p=0.7");
}

// 9. determinism: identical config + seed produce byte-identical output
void criterion9(Checker& c) {
  const char* cfg_text = R"(
scenario {
  input { kind = depolarizing  p = $p }
  bob   { kind = amplitude_damping  p = $pB }
}
grids {
  p = 0, 0.5, 1
  pB = 0, 0.5, 1
}
averaging {
  method = monte-carlo
  samples = 5000
  seed = 77
}
)";
  const SweepConfig cfg = parse_config(cfg_text);
  const auto rows_a = run_sweep(cfg);
  const auto rows_b = run_sweep(cfg);
  std::ostringstream a, b;
  write_csv(a, cfg, rows_a);
  write_csv(b, cfg, rows_b);
  c.require(a.str() == b.str(), "two runs emit byte-identical CSV");
  c.note("rows: " + std::to_string(rows_a.size()) +
         ", bytes: " + std::to_string(a.str().size()));
}

struct Criterion {
  int id;
  const char* title;
  void (*fn)(Checker&);
};

const Criterion kCriteria[] = {
    {1, "noiseless protocol: uniform outcomes, unit fidelity", criterion1},
    {2, "channel completeness and validity over the strength grid", criterion2},
    {3, "input-only reference expressions within 1e-8", criterion3},
    {4, "endpoint values: 1/5 bit-flip point and all 1/3 corners", criterion4},
    {5, "registry audit completes with required matches and full detail", criterion5},
    {6, "Monte Carlo cross-oracle within 4 standard errors", criterion6},
    {7, "correlated damping: eta=0 column and eta adjudication", criterion7},
    {8, "ordering chains hold or are explicitly adjudicated", criterion8},
    {9, "byte-identical sweep output for identical config and seed", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      only = std::atoi(argv[++i]);
  }

  int failures = 0;
  for (const Criterion& cr : kCriteria) {
    if (only != 0 && cr.id != only) continue;
    Checker c;
    try {
      cr.fn(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail << "      exception: " << e.what() << "\n";
    }
    std::cout << (c.ok ? "[PASS]" : "[FAIL]") << " criterion " << cr.id << ": "
              << cr.title << "\n"
              << c.detail.str();
    if (!c.ok) ++failures;
  }
  if (only == 0)
    std::cout << (failures == 0 ? "acceptance: all criteria pass\n"
                                : "acceptance: " + std::to_string(failures) +
                                      " criterion(s) failed\n");
  return failures;
}
