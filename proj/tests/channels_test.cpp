#include "qtel/channels.hpp"
#include "qtel/teleport.hpp"

#include "doctest.h"

#include <random>

using namespace qtel;

namespace {

Matrix random_density(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(unif(rng), unif(rng));
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

Matrix ket_projector(int dim, int k) {
  Matrix m = Matrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("every constructor satisfies completeness for random strengths") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double p = unif(rng);
    CHECK(completeness_defect(bit_flip_kraus(p)) < 1e-10);
    CHECK(completeness_defect(phase_flip_kraus(p)) < 1e-10);
    CHECK(completeness_defect(depolarizing_kraus(p)) < 1e-10);
    CHECK(completeness_defect(amplitude_damping_kraus(p, unif(rng))) < 1e-10);
    CHECK(completeness_defect(cad_kraus({unif(rng), p, unif(rng)})) < 1e-10);
  }
}

TEST_CASE("strength zero gives the identity channel") {
  std::mt19937_64 rng(12);
  const Matrix rho = random_density(3, rng);
  for (const KrausSet& k : {bit_flip_kraus(0), phase_flip_kraus(0),
                            depolarizing_kraus(0), amplitude_damping_kraus(0, 0)})
    CHECK(frobenius_distance(apply_channel(rho, k), rho) < 1e-14);
}

TEST_CASE("constructors reject out-of-range strengths") {
  CHECK_THROWS_AS(bit_flip_kraus(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(phase_flip_kraus(1.1), std::invalid_argument);
  CHECK_THROWS_AS(depolarizing_kraus(2.0), std::invalid_argument);
  CHECK_THROWS_AS(amplitude_damping_kraus(0.5, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_to_p(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("full bit flip scatters a basis state over the other two") {
  const Matrix out = apply_channel(ket_projector(3, 0), bit_flip_kraus(1.0));
  Matrix expect = Matrix::Zero(3, 3);
  expect(1, 1) = 0.5;
  expect(2, 2) = 0.5;
  CHECK(frobenius_distance(out, expect) < 1e-14);
}

TEST_CASE("bit flip at full strength fixes the cyclic-invariant state") {
  Vector balanced(3);
  balanced << 1, 1, 1;
  balanced /= std::sqrt(3.0);
  const Matrix rho = balanced * balanced.adjoint();
  CHECK(frobenius_distance(apply_channel(rho, bit_flip_kraus(1.0)), rho) < 1e-14);
}

TEST_CASE("phase flip fixes diagonal states and kills the 01 coherence at p=1") {
  Matrix diag = Matrix::Zero(3, 3);
  diag(0, 0) = 0.2;
  diag(1, 1) = 0.3;
  diag(2, 2) = 0.5;
  CHECK(frobenius_distance(apply_channel(diag, phase_flip_kraus(0.77)), diag) < 1e-14);

  Vector plus(3);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0;
  const Matrix rho = plus * plus.adjoint();
  // oracle: (1/2) rho01 * (-1) + (1/2) rho01 * (+1) = 0
  const Matrix out = apply_channel(rho, phase_flip_kraus(1.0));
  CHECK(std::abs(out(0, 1)) < 1e-14);
  CHECK(out(0, 0).real() == doctest::Approx(0.5));
}

TEST_CASE("depolarizing matches its closed action and fixes the mixed state") {
  std::mt19937_64 rng(13);
  for (double p : {0.1, 0.5, 0.9, 1.0}) {
    const Matrix rho = random_density(3, rng);
    const Matrix out = apply_channel(rho, depolarizing_kraus(p));
    const Matrix oracle =
        (1 - p) * rho +
        (p / 8.0) * (3.0 * rho.trace() * Matrix::Identity(3, 3) - rho);
    CHECK(frobenius_distance(out, oracle) < 1e-13);

    const Matrix third = Matrix::Identity(3, 3) / 3.0;
    CHECK(frobenius_distance(apply_channel(third, depolarizing_kraus(p)), third) <
          1e-14);
  }
}

TEST_CASE("amplitude damping decays the upper levels") {
  // complete decay
  CHECK(frobenius_distance(
            apply_channel(ket_projector(3, 1), amplitude_damping_kraus(1, 1)),
            ket_projector(3, 0)) < 1e-14);
  // partial decay of |1>
  const Matrix out =
      apply_channel(ket_projector(3, 1), amplitude_damping_kraus(0.36, 0.5));
  Matrix expect = Matrix::Zero(3, 3);
  expect(0, 0) = 0.36;
  expect(1, 1) = 0.64;
  CHECK(frobenius_distance(out, expect) < 1e-14);
}

TEST_CASE("gamma_to_p") {
  CHECK(gamma_to_p(0.0, 5.0) == 0.0);
  CHECK(gamma_to_p(3.0, 0.0) == 0.0);
  CHECK(gamma_to_p(1.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("lifting preserves completeness and acts on the right slot") {
  const KrausSet lifted = lift_to_subsystem(bit_flip_kraus(1.0), 2);
  CHECK(lifted.dim == 27);
  CHECK(completeness_defect(lifted) < 1e-10);

  const Matrix rho000 = ket_projector(27, 0);
  const Matrix out = apply_channel(rho000, lifted);
  Matrix expect = Matrix::Zero(27, 27);
  expect(1, 1) = 0.5;  // |001>
  expect(2, 2) = 0.5;  // |002>
  CHECK(frobenius_distance(out, expect) < 1e-14);

  CHECK_THROWS_AS(lift_to_subsystem(bit_flip_kraus(0.5), 3), std::invalid_argument);
}

TEST_CASE("lifted application equals apply_on_slot") {
  std::mt19937_64 rng(14);
  const Matrix rho = random_density(27, rng);
  for (int slot = 0; slot < 3; ++slot) {
    const KrausSet k = amplitude_damping_kraus(0.3, 0.7);
    const Matrix a = apply_channel_raw(rho, lift_to_subsystem(k, slot));
    const Matrix b = apply_on_slot(rho, k, slot, 3);
    CHECK(frobenius_distance(a, b) < 1e-13);
  }
}

TEST_CASE("apply_channel validates and preserves trace") {
  std::mt19937_64 rng(15);
  const Matrix rho = random_density(3, rng);
  for (double p : {0.0, 0.3, 1.0}) {
    const Matrix out = apply_channel(rho, depolarizing_kraus(p));
    CHECK(std::abs(out.trace() - Complex(1, 0)) < 1e-12);
  }
  // malformed set: drop one operator
  KrausSet broken = bit_flip_kraus(0.8);
  broken.ops.pop_back();
  CHECK_THROWS_AS(apply_channel(rho, broken), std::runtime_error);
}

TEST_CASE("triple-noise channels on disjoint slots commute") {
  std::mt19937_64 rng(16);
  const Matrix rho = random_density(27, rng);
  const NoiseSpec i = NoiseSpec::bit_flip(0.3);
  const NoiseSpec a = NoiseSpec::amplitude_damping(0.6);
  const NoiseSpec b = NoiseSpec::depolarizing(0.9);

  const Matrix nested = compose_triple_noise(rho, i, a, b);

  Matrix other = apply_on_slot(rho, kraus_for(i), 0, 3);
  other = apply_on_slot(other, kraus_for(b), 2, 3);
  other = apply_on_slot(other, kraus_for(a), 1, 3);
  CHECK(frobenius_distance(nested, other) < 1e-12);

  const NoiseSpec none = NoiseSpec::none();
  CHECK(frobenius_distance(compose_triple_noise(rho, none, none, none), rho) < 1e-14);
}

TEST_CASE("input-slot noise shows up in the input marginal") {
  const Vector psi = general_input(1, 0, 0);
  const Vector ch = channel_state();
  const Matrix rho =
      tensor(Matrix(psi * psi.adjoint()), Matrix(ch * ch.adjoint()));
  const Matrix noisy = compose_triple_noise(rho, NoiseSpec::bit_flip(1.0),
                                            NoiseSpec::none(), NoiseSpec::none());
  const Matrix marginal = partial_trace(noisy, {0});
  const Matrix expect =
      apply_channel(Matrix(psi * psi.adjoint()), bit_flip_kraus(1.0));
  CHECK(frobenius_distance(marginal, expect) < 1e-13);
}

TEST_CASE("correlated damping reduces to independent damping at eta=0") {
  const Vector ch = channel_state();
  Matrix rho = ch * ch.adjoint();
  for (double p : {0.25, 0.6, 1.0}) {
    const Matrix corr = cad_channel(rho, {0.0, p, p});
    Matrix indep = apply_on_slot(rho, amplitude_damping_kraus(p, p), 0, 2);
    indep = apply_on_slot(indep, amplitude_damping_kraus(p, p), 1, 2);
    CHECK(frobenius_distance(corr, indep) < 1e-12);
  }
}

TEST_CASE("fully correlated damping at full strength lands on the ground pair") {
  const Vector ch = channel_state();
  const Matrix out = cad_channel(Matrix(ch * ch.adjoint()), {1.0, 1.0, 1.0});
  CHECK(frobenius_distance(out, ket_projector(9, 0)) < 1e-14);
}

TEST_CASE("correlated damping preserves trace and validity") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 10; ++i) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const Matrix rho = random_density(9, rng);
    const Matrix out = cad_channel(rho, {unif(rng), unif(rng), unif(rng)});
    CHECK(std::abs(out.trace() - Complex(1, 0)) < 1e-10);
    CHECK(check_density(out).ok);
  }
}

TEST_CASE("pairing swap only matters for split damping strengths") {
  std::mt19937_64 rng(18);
  const Matrix rho = random_density(9, rng);
  const Matrix a = cad_channel(rho, {0.7, 0.4, 0.4, false});
  const Matrix b = cad_channel(rho, {0.7, 0.4, 0.4, true});
  CHECK(frobenius_distance(a, b) < 1e-14);

  const Matrix c = cad_channel(rho, {0.7, 0.2, 0.9, false});
  const Matrix d = cad_channel(rho, {0.7, 0.2, 0.9, true});
  CHECK(frobenius_distance(c, d) > 1e-3);  // the asymmetric case distinguishes them
  // both pairings stay trace preserving
  CHECK(std::abs(c.trace() - Complex(1, 0)) < 1e-10);
  CHECK(std::abs(d.trace() - Complex(1, 0)) < 1e-10);
}

TEST_CASE("scenario validation") {
  TeleportScenario s;
  s.cad = CadParams{0.5, 0.5, 0.5};
  s.alice = NoiseSpec::bit_flip(0.1);
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.alice = NoiseSpec::none();
  CHECK_NOTHROW(s.validate());

  NoiseSpec bad = NoiseSpec::bit_flip(0.5);
  bad.ad_params = std::make_pair(0.1, 0.2);  // split strengths need damping
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(NoiseSpec::depolarizing(1.5).validate(), std::invalid_argument);
}
