#pragma once

#include "qtel/teleport.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace qtel {

/// <psi|rho|psi>, checked real within 1e-10 and clamped to [0,1].
double state_fidelity(const Vector& psi, const Matrix& rho);

/// Probability-weighted corrected fidelity over the 9 outcomes of the full
/// teleport() pipeline at input angles (theta, phi).
double scenario_fidelity(double theta, double phi, const TeleportScenario& s);

/// The scenario's end-to-end map on the input qutrit: the probability-weighted
/// corrected output is linear in rho_in, so nine matrix-unit evaluations
/// determine it completely. Used to make grid averaging cheap; agrees with the
/// teleport() route to machine precision.
class OutputChannel {
 public:
  static OutputChannel make(const TeleportScenario& s);

  Matrix apply(const Matrix& rho_in) const;
  double input_fidelity(const Vector& psi) const;
  double input_fidelity(double theta, double phi) const;

 private:
  // t_[3a+b] = weighted corrected output for input matrix unit |a><b|.
  std::array<Eigen::Matrix3cd, 9> t_;
};

struct QuadratureSpec {
  int theta_nodes = 64;
  int phi_nodes = 64;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// (1/4pi) Int dtheta dphi F(theta,phi) sin(theta): Gauss-Legendre in
/// u = cos(theta), uniform periodic grid in phi. Exact for the trigonometric
/// polynomial integrands produced by these scenarios at modest node counts.
double average_fidelity(const TeleportScenario& s, const QuadratureSpec& q = {});

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean scenario fidelity over inputs sampled from the averaging measure
/// (u = cos(theta) uniform on [-1,1], phi uniform). Sample i draws from its
/// own counter-based stream, so the result is identical for a given seed
/// regardless of evaluation order.
MonteCarloEstimate monte_carlo_average(const TeleportScenario& s, int n_samples,
                                       std::uint64_t seed);

}  // namespace qtel
