#include "qtel/teleport.hpp"

#include <cmath>
#include <stdexcept>

namespace qtel {

Vector input_state(double theta, double phi) {
  Vector v(3);
  v << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
      std::cos(theta);
  return v;
}

Vector general_input(Complex a, Complex b, Complex c) {
  const double n2 = std::norm(a) + std::norm(b) + std::norm(c);
  if (std::abs(n2 - 1.0) > 1e-10)
    throw std::invalid_argument("general_input: amplitudes are not normalized");
  Vector v(3);
  v << a, b, c;
  return v;
}

Vector channel_state() {
  Vector v = Vector::Zero(9);
  const double a = 1.0 / std::sqrt(3.0);
  v(0) = a;   // |00>
  v(4) = a;   // |11>
  v(8) = a;   // |22>
  return v;
}

const std::array<Vector, 9>& bell_basis() {
  static const std::array<Vector, 9> basis = [] {
    std::array<Vector, 9> b;
    for (int n = 0; n < 3; ++n) {
      for (int m = 0; m < 3; ++m) {
        Vector v = Vector::Zero(9);
        for (int z = 0; z < 3; ++z)
          v(3 * z + (z + n) % 3) =
              std::polar(1.0 / std::sqrt(3.0), 2.0 * M_PI * ((m * z) % 3) / 3.0);
        b[3 * n + m] = v;
      }
    }
    return b;
  }();
  return basis;
}

Matrix outcome_block(const Matrix& rho27, int j) {
  if (j < 0 || j > 8) throw std::invalid_argument("outcome_block: bad outcome index");
  const Vector& phi = bell_basis()[j];
  Matrix block = Matrix::Zero(3, 3);
  for (int u = 0; u < 9; ++u) {
    if (phi(u) == Complex(0, 0)) continue;
    for (int v = 0; v < 9; ++v) {
      if (phi(v) == Complex(0, 0)) continue;
      const Complex c = std::conj(phi(u)) * phi(v);
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          block(k, l) += c * rho27(3 * u + k, 3 * v + l);
    }
  }
  return block;
}

std::array<Matrix, 9> derive_corrections() {
  // Three linearly independent inputs pin each candidate down uniquely.
  const std::array<Vector, 3> probes = {
      general_input(1, 0, 0),
      general_input(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0),
      general_input(1.0 / std::sqrt(2.0), 0, Complex(0, 1.0 / std::sqrt(2.0)))};

  std::array<Matrix, 9> candidates;
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) candidates[3 * m + n] = weyl(m, n).adjoint();

  const Vector ch = channel_state();
  const Matrix rho_ch = ch * ch.adjoint();

  std::array<Matrix, 9> out;
  for (int j = 0; j < 9; ++j) {
    bool found = false;
    for (const Matrix& u : candidates) {
      bool ok = true;
      for (const Vector& psi : probes) {
        const Matrix rho = tensor(Matrix(psi * psi.adjoint()), rho_ch);
        const Matrix block = outcome_block(rho, j);
        const double prob = block.trace().real();
        const Matrix corrected = u * (block / prob) * u.adjoint();
        if (std::abs((psi.adjoint() * corrected * psi)(0).real() - 1.0) > 1e-10) {
          ok = false;
          break;
        }
      }
      if (ok) {
        out[j] = u;
        found = true;
        break;
      }
    }
    if (!found)
      throw std::logic_error("derive_corrections: no Weyl candidate restores outcome " +
                             std::to_string(j));
  }
  return out;
}

const std::array<Matrix, 9>& corrections() {
  static const std::array<Matrix, 9> u = derive_corrections();
  return u;
}

Matrix noisy_channel_state(const TeleportScenario& s) {
  s.validate();
  const Vector ch = channel_state();
  Matrix rho_ch = ch * ch.adjoint();
  if (s.cad) return cad_channel(rho_ch, *s.cad);
  rho_ch = apply_on_slot(rho_ch, kraus_for(s.alice), 0, 2);
  rho_ch = apply_on_slot(rho_ch, kraus_for(s.bob), 1, 2);
  return rho_ch;
}

Matrix weighted_corrected_output(const Matrix& rho27) {
  const auto& u = corrections();
  Matrix out = Matrix::Zero(3, 3);
  for (int j = 0; j < 9; ++j)
    out += u[j] * outcome_block(rho27, j) * u[j].adjoint();
  return out;
}

std::array<MeasurementOutcome, 9> teleport(const Vector& input,
                                           const TeleportScenario& s) {
  s.validate();
  if (input.size() != 3)
    throw std::invalid_argument("teleport: input must be a single qutrit");

  const Vector ch = channel_state();
  const Matrix rho_in = input * input.adjoint();
  const Matrix rho_ch = ch * ch.adjoint();
  Matrix rho;
  if (s.cad) {
    rho = tensor(rho_in, cad_channel(rho_ch, *s.cad));
    rho = apply_on_slot(rho, kraus_for(s.input), 0, 3);
  } else {
    rho = tensor(rho_in, rho_ch);
    rho = compose_triple_noise(rho, s.input, s.alice, s.bob);
  }

  const auto& u = corrections();
  std::array<MeasurementOutcome, 9> outcomes;
  for (int j = 0; j < 9; ++j) {
    MeasurementOutcome& o = outcomes[j];
    o.index = j;
    const Matrix block = outcome_block(rho, j);
    o.probability = block.trace().real();
    if (o.probability < kOutcomeProbabilityFloor) {
      o.defined = false;
      o.probability = std::max(o.probability, 0.0);
      continue;
    }
    o.defined = true;
    o.bob_raw = block / o.probability;
    o.bob_corrected = u[j] * o.bob_raw * u[j].adjoint();
  }
  return outcomes;
}

}  // namespace qtel
