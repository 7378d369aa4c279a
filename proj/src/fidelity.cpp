#include "qtel/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtel {

double state_fidelity(const Vector& psi, const Matrix& rho) {
  if (psi.size() != rho.rows() || rho.rows() != rho.cols())
    throw std::invalid_argument("state_fidelity: dimension mismatch");
  const Complex f = (psi.adjoint() * rho * psi)(0);
  if (std::abs(f.imag()) > 1e-10)
    throw std::runtime_error("state_fidelity: imaginary residue " +
                             std::to_string(f.imag()));
  double v = f.real();
  if (v < -1e-10 || v > 1.0 + 1e-10)
    throw std::runtime_error("state_fidelity: value " + std::to_string(v) +
                             " outside [0,1] beyond tolerance");
  return std::clamp(v, 0.0, 1.0);
}

double scenario_fidelity(double theta, double phi, const TeleportScenario& s) {
  const Vector psi = input_state(theta, phi);
  const auto outcomes = teleport(psi, s);
  double f = 0.0;
  for (const MeasurementOutcome& o : outcomes) {
    if (!o.defined) continue;  // zero-probability outcomes contribute nothing
    f += o.probability * state_fidelity(psi, o.bob_corrected);
  }
  return std::clamp(f, 0.0, 1.0);
}

OutputChannel OutputChannel::make(const TeleportScenario& s) {
  s.validate();
  const Matrix rho_ch = noisy_channel_state(s);
  const KrausSet kin = kraus_for(s.input);
  OutputChannel oc;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      Matrix unit = Matrix::Zero(3, 3);
      unit(a, b) = 1.0;
      Matrix noisy_unit = Matrix::Zero(3, 3);
      for (const Matrix& k : kin.ops) noisy_unit += k * unit * k.adjoint();
      const Matrix rho27 = tensor(noisy_unit, rho_ch);
      oc.t_[3 * a + b] = weighted_corrected_output(rho27);
    }
  }
  return oc;
}

Matrix OutputChannel::apply(const Matrix& rho_in) const {
  if (rho_in.rows() != 3 || rho_in.cols() != 3)
    throw std::invalid_argument("OutputChannel::apply: expected a qutrit state");
  Eigen::Matrix3cd out = Eigen::Matrix3cd::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) out += rho_in(a, b) * t_[3 * a + b];
  return out;
}

double OutputChannel::input_fidelity(const Vector& psi) const {
  Eigen::Vector3cd v = psi;
  Eigen::Matrix3cd out = Eigen::Matrix3cd::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      out += (v(a) * std::conj(v(b))) * t_[3 * a + b];
  const Complex f = v.adjoint() * out * v;
  return f.real();
}

double OutputChannel::input_fidelity(double theta, double phi) const {
  return input_fidelity(input_state(theta, phi));
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  std::vector<double> nodes(n), weights(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev-like initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return {nodes, weights};
}

namespace {

// Averages must sit in [0,1]; anything worse than roundoff is a real defect.
double clamp_unit(double v, const char* what) {
  if (v < -1e-9 || v > 1.0 + 1e-9)
    throw std::runtime_error(std::string(what) + ": value " + std::to_string(v) +
                             " outside [0,1] beyond tolerance");
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace

double average_fidelity(const TeleportScenario& s, const QuadratureSpec& q) {
  if (q.theta_nodes < 2 || q.phi_nodes < 2)
    throw std::invalid_argument("average_fidelity: node counts must be >= 2");
  const OutputChannel oc = OutputChannel::make(s);
  const auto [u, w] = gauss_legendre(q.theta_nodes);
  double total = 0.0;
  for (int i = 0; i < q.theta_nodes; ++i) {
    const double theta = std::acos(u[i]);
    double row = 0.0;
    for (int k = 0; k < q.phi_nodes; ++k)
      row += oc.input_fidelity(theta, 2.0 * M_PI * k / q.phi_nodes);
    total += w[i] * row / q.phi_nodes;
  }
  return clamp_unit(total / 2.0, "average_fidelity");
}

namespace {

// splitmix64: a fixed, portable per-sample stream generator.
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
  return (splitmix64(state) >> 11) * 0x1.0p-53;
}

}  // namespace

MonteCarloEstimate monte_carlo_average(const TeleportScenario& s, int n_samples,
                                       std::uint64_t seed) {
  if (n_samples < 100)
    throw std::invalid_argument("monte_carlo_average: need at least 100 samples");
  const OutputChannel oc = OutputChannel::make(s);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    std::uint64_t stream = seed ^ (0x9e3779b97f4a7c15ULL * (std::uint64_t(i) + 1));
    const double u = 2.0 * uniform01(stream) - 1.0;
    const double phi = 2.0 * M_PI * uniform01(stream);
    const double f = oc.input_fidelity(std::acos(u), phi);
    sum += f;
    sum_sq += f * f;
  }
  const double raw_mean = sum / n_samples;
  const double var = std::max(0.0, sum_sq / n_samples - raw_mean * raw_mean);
  MonteCarloEstimate e;
  e.mean = clamp_unit(raw_mean, "monte_carlo_average");
  e.std_error = std::sqrt(var / n_samples);
  return e;
}

}  // namespace qtel
