#include "qtel/fidelity.hpp"

#include "doctest.h"

#include <random>

using namespace qtel;

namespace {

// frozen expected values come from an independent dense-matrix implementation
// of the same protocol (quadrature exact for these integrands)

TeleportScenario scenario(NoiseSpec in, NoiseSpec al = NoiseSpec::none(),
                          NoiseSpec bo = NoiseSpec::none()) {
  TeleportScenario s;
  s.input = in;
  s.alice = al;
  s.bob = bo;
  return s;
}

}  // namespace

TEST_CASE("state_fidelity basics") {
  const Vector zero = general_input(1, 0, 0);
  const Vector one = general_input(0, 1, 0);
  CHECK(state_fidelity(zero, Matrix(zero * zero.adjoint())) == doctest::Approx(1.0));
  CHECK(state_fidelity(zero, Matrix(one * one.adjoint())) == doctest::Approx(0.0));
  CHECK(state_fidelity(zero, Matrix(Matrix::Identity(3, 3) / 3.0)) ==
        doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(state_fidelity(zero, Matrix(Matrix::Identity(9, 9) / 9.0)),
                  std::invalid_argument);
}

TEST_CASE("scenario fidelity at specific inputs") {
  CHECK(scenario_fidelity(1.1, 2.2, TeleportScenario{}) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // |0> under a full input bit flip never overlaps itself
  CHECK(scenario_fidelity(M_PI / 2, 0.0, scenario(NoiseSpec::bit_flip(1.0))) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // the cyclic-invariant input is untouched
  CHECK(scenario_fidelity(std::acos(1.0 / std::sqrt(3.0)), M_PI / 4,
                          scenario(NoiseSpec::bit_flip(1.0))) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the linear output channel agrees with the full protocol route") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    TeleportScenario s;
    s.input = NoiseSpec::of(static_cast<NoiseKind>(1 + trial % 4), unif(rng));
    s.alice = NoiseSpec::amplitude_damping(unif(rng), unif(rng));
    s.bob = NoiseSpec::depolarizing(unif(rng));
    const OutputChannel oc = OutputChannel::make(s);
    for (int k = 0; k < 3; ++k) {
      const double theta = unif(rng) * M_PI, phi = unif(rng) * 2 * M_PI;
      CHECK(oc.input_fidelity(theta, phi) ==
            doctest::Approx(scenario_fidelity(theta, phi, s)).epsilon(1e-12));
    }
  }
  // correlated-damping scenarios too
  TeleportScenario s;
  s.input = NoiseSpec::phase_flip(0.3);
  s.cad = CadParams{0.7, 0.4, 0.4};
  const OutputChannel oc = OutputChannel::make(s);
  CHECK(oc.input_fidelity(0.9, 2.1) ==
        doctest::Approx(scenario_fidelity(0.9, 2.1, s)).epsilon(1e-12));
}

TEST_CASE("gauss-legendre nodes are correct") {
  const auto [n2, w2] = gauss_legendre(2);
  CHECK(n2[0] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(w2[0] == doctest::Approx(1.0).epsilon(1e-14));

  // integrates x^4 exactly with 3 nodes
  const auto [n3, w3] = gauss_legendre(3);
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) acc += w3[i] * std::pow(n3[i], 4);
  CHECK(acc == doctest::Approx(2.0 / 5.0).epsilon(1e-14));
}

TEST_CASE("average fidelity reproduces frozen oracle values") {
  CHECK(average_fidelity(TeleportScenario{}) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(average_fidelity(scenario(NoiseSpec::bit_flip(1.0))) ==
        doctest::Approx(0.2).epsilon(1e-10));
  CHECK(average_fidelity(scenario(NoiseSpec::bit_flip(0.3))) ==
        doctest::Approx(0.76).epsilon(1e-10));
  CHECK(average_fidelity(scenario(NoiseSpec::amplitude_damping(1.0))) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(average_fidelity(scenario(NoiseSpec::amplitude_damping(0.36))) ==
        doctest::Approx(0.80266666666667).epsilon(1e-11));
  CHECK(average_fidelity(scenario(NoiseSpec::depolarizing(0.5))) ==
        doctest::Approx(0.625).epsilon(1e-10));

  CHECK(average_fidelity(scenario(NoiseSpec::bit_flip(0.2),
                                  NoiseSpec::amplitude_damping(0.4),
                                  NoiseSpec::depolarizing(0.6))) ==
        doctest::Approx(0.44423870240074).epsilon(1e-11));
  CHECK(average_fidelity(scenario(NoiseSpec::phase_flip(0.5), NoiseSpec::phase_flip(0.5),
                                  NoiseSpec::amplitude_damping(0.25))) ==
        doctest::Approx(0.57182335127931).epsilon(1e-11));

  TeleportScenario cad;
  cad.cad = CadParams{0.6, 0.3, 0.3};
  CHECK(average_fidelity(cad) == doctest::Approx(0.84586560424545).epsilon(1e-11));
  cad.cad = CadParams{0.3, 0.2, 0.7};
  CHECK(average_fidelity(cad) == doctest::Approx(0.73328190788247).epsilon(1e-11));
}

TEST_CASE("pointwise fidelity reproduces frozen oracle values") {
  const TeleportScenario s = scenario(NoiseSpec::bit_flip(0.2),
                                      NoiseSpec::amplitude_damping(0.4),
                                      NoiseSpec::depolarizing(0.6));
  CHECK(scenario_fidelity(0.7, 1.1, s) ==
        doctest::Approx(0.47079095860602).epsilon(1e-11));
  CHECK(scenario_fidelity(2.0, 4.5, s) ==
        doctest::Approx(0.45135613044186).epsilon(1e-11));

  TeleportScenario cad;
  cad.cad = CadParams{0.3, 0.2, 0.7};
  CHECK(scenario_fidelity(0.7, 1.1, cad) ==
        doctest::Approx(0.69992918148114).epsilon(1e-11));
}

TEST_CASE("quadrature is converged: doubling nodes changes nothing") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    TeleportScenario s;
    s.input = NoiseSpec::of(static_cast<NoiseKind>(1 + trial % 4), unif(rng));
    s.bob = NoiseSpec::of(static_cast<NoiseKind>(1 + (trial + 2) % 4), unif(rng));
    const double coarse = average_fidelity(s, {24, 24});
    const double fine = average_fidelity(s, {48, 48});
    CHECK(std::abs(coarse - fine) < 1e-10);
  }
}

TEST_CASE("fidelities stay in [0,1] across a grid") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    TeleportScenario s;
    s.input = NoiseSpec::of(static_cast<NoiseKind>(trial % 5), unif(rng));
    s.bob = NoiseSpec::of(static_cast<NoiseKind>((trial + 3) % 5), unif(rng));
    const double f = average_fidelity(s, {16, 16});
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-12);
  }
}

TEST_CASE("input-only average fidelity is non-increasing in the strength") {
  for (int kind = 1; kind <= 4; ++kind) {
    double prev = 1.0 + 1e-12;
    for (int i = 0; i <= 20; ++i) {
      const double p = i / 20.0;
      const double f = average_fidelity(
          scenario(NoiseSpec::of(static_cast<NoiseKind>(kind), p)), {16, 16});
      CHECK(f <= prev + 1e-12);
      prev = f;
    }
  }
}

TEST_CASE("monte carlo: exact for the noiseless channel, deterministic by seed") {
  const MonteCarloEstimate base = monte_carlo_average(TeleportScenario{}, 1000, 42);
  CHECK(base.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(base.std_error < 1e-12);

  const TeleportScenario s = scenario(NoiseSpec::bit_flip(0.5));
  const MonteCarloEstimate a = monte_carlo_average(s, 20000, 7);
  const MonteCarloEstimate b = monte_carlo_average(s, 20000, 7);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  const MonteCarloEstimate c = monte_carlo_average(s, 20000, 8);
  CHECK(a.mean != c.mean);

  CHECK_THROWS_AS(monte_carlo_average(s, 10, 1), std::invalid_argument);
}

TEST_CASE("monte carlo brackets the quadrature value") {
  const TeleportScenario s = scenario(NoiseSpec::bit_flip(0.5));
  const MonteCarloEstimate e = monte_carlo_average(s, 100000, 12345);
  CHECK(std::abs(e.mean - 0.6) < 3.0 * e.std_error);

  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    TeleportScenario r;
    r.input = NoiseSpec::of(static_cast<NoiseKind>(trial % 5), unif(rng));
    r.alice = NoiseSpec::of(static_cast<NoiseKind>((trial + 1) % 5), unif(rng));
    r.bob = NoiseSpec::of(static_cast<NoiseKind>((trial + 2) % 5), unif(rng));
    const double quad = average_fidelity(r);
    const MonteCarloEstimate mc = monte_carlo_average(r, 40000, 1000 + trial);
    CHECK(std::abs(mc.mean - quad) < 4.0 * std::max(mc.std_error, 1e-12));
  }
}
