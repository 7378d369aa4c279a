#pragma once

#include "qtel/algebra.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace qtel {

enum class NoiseKind { None, BitFlip, PhaseFlip, Depolarizing, AmplitudeDamping };

const char* to_string(NoiseKind k);

/// One noise acting on one qutrit. For AmplitudeDamping a split (p1, p2) pair
/// may be given; a single p means p1 = p2 = p.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::None;
  double p = 0.0;
  std::optional<std::pair<double, double>> ad_params;

  static NoiseSpec none() { return {}; }
  static NoiseSpec bit_flip(double p) { return {NoiseKind::BitFlip, p, {}}; }
  static NoiseSpec phase_flip(double p) { return {NoiseKind::PhaseFlip, p, {}}; }
  static NoiseSpec depolarizing(double p) { return {NoiseKind::Depolarizing, p, {}}; }
  static NoiseSpec amplitude_damping(double p) {
    return {NoiseKind::AmplitudeDamping, p, {}};
  }
  static NoiseSpec amplitude_damping(double p1, double p2) {
    return {NoiseKind::AmplitudeDamping, p1, std::make_pair(p1, p2)};
  }
  static NoiseSpec of(NoiseKind kind, double p);

  void validate() const;  // probability ranges, ad_params only with AD
};

struct KrausSet {
  int dim = 3;
  std::vector<Matrix> ops;
};

/// || sum K^dag K - I ||_F ; zero for a trace-preserving set.
double completeness_defect(const KrausSet& k);

// Weyl operators: shift Y (|0>->|2>, |1>->|0>, |2>->|1>) and clock
// Z = diag(1, w, w^2) with w = exp(2 pi i / 3).
Matrix weyl_shift();
Matrix weyl_clock();
Matrix weyl(int m, int n);  // Z^m Y^n

KrausSet bit_flip_kraus(double p);
KrausSet phase_flip_kraus(double p);
KrausSet depolarizing_kraus(double p);
KrausSet amplitude_damping_kraus(double p1, double p2);
KrausSet kraus_for(const NoiseSpec& spec);

/// Damping probability 1 - exp(-gamma * t) for a decay rate and elapsed time.
double gamma_to_p(double gamma, double t);

/// Tensor each operator with identities so it acts on one slot of the
/// three-qutrit space (slot 0 = input, 1 = Alice channel, 2 = Bob channel).
KrausSet lift_to_subsystem(const KrausSet& k, int slot);

/// sum_j K_j rho K_j^dag, no output validation.
Matrix apply_channel_raw(const Matrix& rho, const KrausSet& k);

/// sum_j K_j rho K_j^dag; validates the output density matrix and throws if
/// the Kraus set is malformed.
Matrix apply_channel(const Matrix& rho, const KrausSet& k);

/// Apply a single-qutrit Kraus set on one slot of an n-qutrit state.
Matrix apply_on_slot(const Matrix& rho, const KrausSet& k, int slot, int subsystems);

/// Bob-lifted channel first, then Alice-lifted, then input-lifted.
/// The three lifted channels act on disjoint slots and commute.
Matrix compose_triple_noise(const Matrix& rho27, const NoiseSpec& input,
                            const NoiseSpec& alice, const NoiseSpec& bob);

/// Correlated amplitude damping on the two-qutrit channel state.
/// The correlated branch uses joint decay operators A_k taking |11> and |22>
/// straight to |00>. With the default pairing, p1 couples to |11> and p2 to
/// |22>; `swap_pairing` exchanges the two (equivalent when p1 = p2).
struct CadParams {
  double eta = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  bool swap_pairing = false;

  void validate() const;
};

/// The three 9x9 joint decay operators A_0, A_1, A_2.
std::vector<Matrix> cad_correlated_ops(const CadParams& c);

/// Full Kraus set: sqrt(1-eta) K_i (x) K_j plus sqrt(eta) A_k.
KrausSet cad_kraus(const CadParams& c);

/// eps(rho) = (1-eta) sum_ij K_ij rho K_ij^dag + eta sum_k A_k rho A_k^dag.
Matrix cad_channel(const Matrix& rho9, const CadParams& c);

/// Which noise (kind + strength) acts on the input / Alice / Bob qutrit.
/// When `cad` is set it replaces the Alice and Bob specs with the correlated
/// channel on the two-qutrit channel state.
struct TeleportScenario {
  NoiseSpec input;
  NoiseSpec alice;
  NoiseSpec bob;
  std::optional<CadParams> cad;

  void validate() const;  // cad set => alice and bob must be None
};

}  // namespace qtel
