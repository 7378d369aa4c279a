#pragma once

#include "qtel/channels.hpp"

#include <array>

namespace qtel {

/// Real-amplitude input (a, b, c) = (sin t cos f, sin t sin f, cos t); this is
/// the parametrization the averaging measure integrates over.
Vector input_state(double theta, double phi);

/// Arbitrary normalized qutrit state a|0> + b|1> + c|2>.
Vector general_input(Complex a, Complex b, Complex c);

/// (|00> + |11> + |22>) / sqrt(3).
Vector channel_state();

/// The 9 maximally entangled two-qutrit measurement states, ordered in three
/// groups by second-qutrit offset n, with phase w^{m z} on term z inside each
/// group: |phi_{3n+m}> = 1/sqrt(3) sum_z w^{m z} |z, z+n>.
const std::array<Vector, 9>& bell_basis();

/// Bob's correction unitaries, index-aligned with bell_basis(). Derived by
/// exhaustively testing the 9 candidates (Z^m Y^n)^dag against three linearly
/// independent inputs of the noiseless protocol; throws if no candidate
/// reaches fidelity 1 (which would mean the basis conventions are broken).
std::array<Matrix, 9> derive_corrections();

/// Cached copy of derive_corrections().
const std::array<Matrix, 9>& corrections();

struct MeasurementOutcome {
  int index = 0;
  double probability = 0.0;
  bool defined = false;  // false when the outcome has (numerically) zero probability
  Matrix bob_raw;        // conditional Bob state before correction
  Matrix bob_corrected;  // U_j bob_raw U_j^dag
};

/// Outcomes below this probability are reported undefined rather than 0/0.
inline constexpr double kOutcomeProbabilityFloor = 1e-14;

/// Two-qutrit channel state after the scenario's channel-side noise
/// (Alice/Bob lifted channels, or the correlated damping channel).
Matrix noisy_channel_state(const TeleportScenario& s);

/// Unnormalized conditional Bob block B_j[k,l] = <phi_j k| rho |phi_j l>;
/// trace(B_j) is the outcome probability.
Matrix outcome_block(const Matrix& rho27, int j);

/// Probability-weighted corrected output sum_j U_j B_j U_j^dag. Linear in
/// rho27, so it is also the weighted average over measurement outcomes.
Matrix weighted_corrected_output(const Matrix& rho27);

/// Full protocol: rho = rho_in (x) rho_ch, channel-side and input noise,
/// projective measurement in the entangled basis, partial trace, correction.
std::array<MeasurementOutcome, 9> teleport(const Vector& input,
                                           const TeleportScenario& s);

}  // namespace qtel
