#include "qtel/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qtel {

namespace {

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in [0,1], got " +
                                std::to_string(p));
}

}  // namespace

const char* to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::None: return "non";
    case NoiseKind::BitFlip: return "BF";
    case NoiseKind::PhaseFlip: return "PF";
    case NoiseKind::Depolarizing: return "DP";
    case NoiseKind::AmplitudeDamping: return "AD";
  }
  return "?";
}

NoiseSpec NoiseSpec::of(NoiseKind kind, double p) {
  NoiseSpec s;
  s.kind = kind;
  s.p = p;
  return s;
}

void NoiseSpec::validate() const {
  if (kind != NoiseKind::None) require_probability(p, "p");
  if (ad_params) {
    if (kind != NoiseKind::AmplitudeDamping)
      throw std::invalid_argument("ad_params only apply to amplitude damping");
    require_probability(ad_params->first, "p1");
    require_probability(ad_params->second, "p2");
  }
}

double completeness_defect(const KrausSet& k) {
  Matrix acc = Matrix::Zero(k.dim, k.dim);
  for (const Matrix& op : k.ops) acc += op.adjoint() * op;
  return (acc - Matrix::Identity(k.dim, k.dim)).norm();
}

Matrix weyl_shift() {
  Matrix y = Matrix::Zero(3, 3);
  y(0, 1) = 1;
  y(1, 2) = 1;
  y(2, 0) = 1;
  return y;
}

Matrix weyl_clock() {
  const Complex w = std::polar(1.0, 2.0 * M_PI / 3.0);
  Matrix z = Matrix::Zero(3, 3);
  z(0, 0) = 1;
  z(1, 1) = w;
  z(2, 2) = w * w;
  return z;
}

Matrix weyl(int m, int n) {
  Matrix out = Matrix::Identity(3, 3);
  for (int i = 0; i < ((m % 3) + 3) % 3; ++i) out = weyl_clock() * out;
  for (int i = 0; i < ((n % 3) + 3) % 3; ++i) out = out * weyl_shift();
  return out;
}

KrausSet bit_flip_kraus(double p) {
  require_probability(p, "p");
  Matrix up = Matrix::Zero(3, 3);   // |0>->|1>->|2>->|0>
  up(1, 0) = 1;
  up(2, 1) = 1;
  up(0, 2) = 1;
  KrausSet k{3, {}};
  k.ops.push_back(std::sqrt(1.0 - p) * Matrix::Identity(3, 3));
  k.ops.push_back(std::sqrt(p / 2.0) * up);
  k.ops.push_back(std::sqrt(p / 2.0) * weyl_shift());
  return k;
}

KrausSet phase_flip_kraus(double p) {
  require_probability(p, "p");
  Matrix k1 = Matrix::Identity(3, 3);
  k1(1, 1) = -1;
  Matrix k2 = Matrix::Identity(3, 3);
  k2(2, 2) = -1;
  KrausSet k{3, {}};
  k.ops.push_back(std::sqrt(1.0 - p) * Matrix::Identity(3, 3));
  k.ops.push_back(std::sqrt(p / 2.0) * k1);
  k.ops.push_back(std::sqrt(p / 2.0) * k2);
  return k;
}

KrausSet depolarizing_kraus(double p) {
  require_probability(p, "p");
  KrausSet k{3, {}};
  k.ops.push_back(std::sqrt(1.0 - p) * Matrix::Identity(3, 3));
  const Matrix y = weyl_shift(), z = weyl_clock();
  const double wgt = std::sqrt(p / 8.0);
  for (const Matrix& op : {y, z, Matrix(y * y), Matrix(y * z), Matrix(y * y * z),
                           Matrix(y * z * z), Matrix(y * y * z * z), Matrix(z * z)})
    k.ops.push_back(wgt * op);
  return k;
}

KrausSet amplitude_damping_kraus(double p1, double p2) {
  require_probability(p1, "p1");
  require_probability(p2, "p2");
  Matrix k0 = Matrix::Identity(3, 3);
  k0(1, 1) = std::sqrt(1.0 - p1);
  k0(2, 2) = std::sqrt(1.0 - p2);
  Matrix k1 = Matrix::Zero(3, 3);
  k1(0, 1) = std::sqrt(p1);
  Matrix k2 = Matrix::Zero(3, 3);
  k2(0, 2) = std::sqrt(p2);
  return KrausSet{3, {k0, k1, k2}};
}

KrausSet kraus_for(const NoiseSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case NoiseKind::None:
      return KrausSet{3, {Matrix::Identity(3, 3)}};
    case NoiseKind::BitFlip:
      return bit_flip_kraus(spec.p);
    case NoiseKind::PhaseFlip:
      return phase_flip_kraus(spec.p);
    case NoiseKind::Depolarizing:
      return depolarizing_kraus(spec.p);
    case NoiseKind::AmplitudeDamping:
      if (spec.ad_params)
        return amplitude_damping_kraus(spec.ad_params->first, spec.ad_params->second);
      return amplitude_damping_kraus(spec.p, spec.p);
  }
  throw std::logic_error("kraus_for: unknown noise kind");
}

double gamma_to_p(double gamma, double t) {
  if (gamma < 0.0 || t < 0.0)
    throw std::invalid_argument("gamma_to_p: gamma and t must be nonnegative");
  return 1.0 - std::exp(-gamma * t);
}

KrausSet lift_to_subsystem(const KrausSet& k, int slot) {
  if (slot < 0 || slot > 2)
    throw std::invalid_argument("lift_to_subsystem: slot must be 0, 1 or 2");
  if (k.dim != 3)
    throw std::invalid_argument("lift_to_subsystem: expected single-qutrit operators");
  const Matrix id = Matrix::Identity(3, 3);
  KrausSet out{27, {}};
  for (const Matrix& op : k.ops) {
    Matrix lifted = (slot == 0) ? op : id;
    lifted = tensor(lifted, slot == 1 ? op : id);
    lifted = tensor(lifted, slot == 2 ? op : id);
    out.ops.push_back(std::move(lifted));
  }
  return out;
}

Matrix apply_channel_raw(const Matrix& rho, const KrausSet& k) {
  if (rho.rows() != k.dim || rho.cols() != k.dim)
    throw std::invalid_argument("apply_channel: dimension mismatch");
  Matrix out = Matrix::Zero(k.dim, k.dim);
  for (const Matrix& op : k.ops) out += op * rho * op.adjoint();
  return out;
}

Matrix apply_channel(const Matrix& rho, const KrausSet& k) {
  Matrix out = apply_channel_raw(rho, k);
  const DensityCheck c = check_density(out);
  if (!c.ok)
    throw std::runtime_error("apply_channel: output is not a valid state (" +
                             c.violation + "), Kraus set is malformed");
  return out;
}

Matrix apply_on_slot(const Matrix& rho, const KrausSet& k, int slot, int subsystems) {
  if (slot < 0 || slot >= subsystems)
    throw std::invalid_argument("apply_on_slot: slot out of range");
  const Matrix id = Matrix::Identity(3, 3);
  const int dim = static_cast<int>(rho.rows());
  Matrix out = Matrix::Zero(dim, dim);
  for (const Matrix& op : k.ops) {
    Matrix lifted = (slot == 0) ? op : id;
    for (int s = 1; s < subsystems; ++s) lifted = tensor(lifted, s == slot ? op : id);
    out += lifted * rho * lifted.adjoint();
  }
  return out;
}

Matrix compose_triple_noise(const Matrix& rho27, const NoiseSpec& input,
                            const NoiseSpec& alice, const NoiseSpec& bob) {
  if (rho27.rows() != 27 || rho27.cols() != 27)
    throw std::invalid_argument("compose_triple_noise: expected a 27-dim state");
  Matrix out = apply_on_slot(rho27, kraus_for(bob), 2, 3);
  out = apply_on_slot(out, kraus_for(alice), 1, 3);
  out = apply_on_slot(out, kraus_for(input), 0, 3);
  return out;
}

void CadParams::validate() const {
  require_probability(eta, "eta");
  require_probability(p1, "p1");
  require_probability(p2, "p2");
}

std::vector<Matrix> cad_correlated_ops(const CadParams& c) {
  c.validate();
  const double q11 = c.swap_pairing ? c.p2 : c.p1;  // decay of |11>
  const double q22 = c.swap_pairing ? c.p1 : c.p2;  // decay of |22>
  Matrix a0 = Matrix::Identity(9, 9);
  a0(4, 4) = std::sqrt(1.0 - q11);  // |11>
  a0(8, 8) = std::sqrt(1.0 - q22);  // |22>
  Matrix a1 = Matrix::Zero(9, 9);
  a1(0, 4) = std::sqrt(q11);  // |00><11|
  Matrix a2 = Matrix::Zero(9, 9);
  a2(0, 8) = std::sqrt(q22);  // |00><22|
  return {a0, a1, a2};
}

KrausSet cad_kraus(const CadParams& c) {
  c.validate();
  const KrausSet ad = amplitude_damping_kraus(c.p1, c.p2);
  KrausSet out{9, {}};
  const double wu = std::sqrt(1.0 - c.eta);
  for (const Matrix& a : ad.ops)
    for (const Matrix& b : ad.ops) out.ops.push_back(wu * tensor(a, b));
  const double wc = std::sqrt(c.eta);
  for (const Matrix& a : cad_correlated_ops(c)) out.ops.push_back(wc * a);
  return out;
}

Matrix cad_channel(const Matrix& rho9, const CadParams& c) {
  if (rho9.rows() != 9 || rho9.cols() != 9)
    throw std::invalid_argument("cad_channel: expected a two-qutrit state");
  return apply_channel(rho9, cad_kraus(c));
}

void TeleportScenario::validate() const {
  input.validate();
  alice.validate();
  bob.validate();
  if (cad) {
    cad->validate();
    if (alice.kind != NoiseKind::None || bob.kind != NoiseKind::None)
      throw std::invalid_argument(
          "scenario: correlated damping replaces the Alice and Bob specs");
  }
}

}  // namespace qtel
