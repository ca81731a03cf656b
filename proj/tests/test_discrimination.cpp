#include <doctest.h>

#include <cmath>

#include "dampdisc/discrimination.hpp"
#include "dampdisc/monte_carlo.hpp"
#include "dampdisc/optimize.hpp"
#include "dampdisc/strategies.hpp"
#include "support.hpp"

using namespace dampdisc;
using namespace testing_support;

namespace {

void check_helstrom_shape(const HelstromResult& h, const DensityMatrix& r0, const DensityMatrix& r1,
                          PriorPair pr) {
  const int d = r0.dim();
  const ComplexMatrix& pp = h.projector_plus;
  const ComplexMatrix& pm = h.projector_minus;
  CHECK(max_abs_diff(pp + pm, ComplexMatrix::identity(d)) <= 1e-10);
  CHECK(max_abs_diff(pp * pp, pp) <= 1e-10);
  CHECK(max_abs_diff(pm * pm, pm) <= 1e-10);
  CHECK(pp.max_asymmetry() <= 1e-10);
  const double direct = pr.p0 * (r0.mat() * pp).trace().real() + pr.p1 * (r1.mat() * pm).trace().real();
  CHECK(std::abs(h.psucc - direct) <= 1e-10);
}

ComplexMatrix proj(std::vector<Complex> v) { return PureState::normalized(std::move(v)).projector(); }

}  // namespace

TEST_CASE("priors") {
  CHECK_NOTHROW(PriorPair(0.3, 0.7));
  CHECK_THROWS_AS(PriorPair(0.3, 0.6), NumericError);
  CHECK_THROWS_AS(PriorPair(-0.1, 1.1), NumericError);
  CHECK(PriorPair::equal().p0 == 0.5);
}

TEST_CASE("helstrom examples") {
  const DensityMatrix a(ComplexMatrix::diagonal({1.0, 0.0}));
  const DensityMatrix b(ComplexMatrix::diagonal({0.75, 0.25}));
  const DensityMatrix one(ComplexMatrix::diagonal({0.0, 1.0}));

  CHECK(helstrom(a, a).psucc == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(helstrom(a, one).psucc == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(helstrom(a, b).psucc - 0.625) <= 1e-15);
  check_helstrom_shape(helstrom(a, b), a, b, {});

  // Equal states: the whole space is the zero eigenspace and goes to "guess 0".
  const HelstromResult same = helstrom(b, b);
  CHECK(max_abs_diff(same.projector_plus, ComplexMatrix::identity(2)) <= 1e-15);

  // Unequal priors on orthogonal states still give certainty.
  CHECK(helstrom(a, one, PriorPair(0.2, 0.8)).psucc == doctest::Approx(1.0));
  // With fully lopsided priors the answer is the prior.
  CHECK(helstrom(a, b, PriorPair(0.9, 0.1)).psucc >= 0.9 - 1e-15);

  CHECK_THROWS_AS(helstrom(a, DensityMatrix(ComplexMatrix::identity(4) * 0.25)), NumericError);
}

TEST_CASE("helstrom on random pairs agrees with the trace-norm formula") {
  Gen g(200);
  for (int dim : {2, 4}) {
    for (int trial = 0; trial < 200; ++trial) {
      const DensityMatrix r0(g.density(dim, 1 + trial % dim));
      const DensityMatrix r1(g.density(dim, 1 + (trial / 2) % dim));
      const HelstromResult h = helstrom(r0, r1);
      check_helstrom_shape(h, r0, r1, {});
      CHECK(h.psucc >= 0.5 - 1e-12);
      CHECK(h.psucc <= 1.0 + 1e-12);
      const double oracle = 0.5 * (1.0 + 0.5 * oracle_trace_norm(r0.mat() - r1.mat()));
      CHECK(std::abs(h.psucc - oracle) <= 1e-10);
      CHECK(std::abs(helstrom_psucc_equal_priors(r0.mat(), r1.mat()) - oracle) <= 1e-10);
      CHECK(std::abs(helstrom(r1, r0).psucc - h.psucc) <= 1e-12);

      const double p0 = g.uniform();
      const PriorPair pr(p0, 1.0 - p0);
      const HelstromResult hp = helstrom(r0, r1, pr);
      check_helstrom_shape(hp, r0, r1, pr);
      const double w = weighted_guess_value(pr.p0, r0.mat(), pr.p1, r1.mat());
      CHECK(std::abs(hp.psucc - w) <= 1e-10);
      CHECK(hp.psucc >= std::max(pr.p0, pr.p1) - 1e-12);
    }
  }
}

TEST_CASE("weighted guess value against the Eigen oracle") {
  Gen g(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = trial % 2 == 0 ? 2 : 4;
    const ComplexMatrix r0 = g.density(dim);
    const ComplexMatrix r1 = g.density(dim);
    const double w0 = g.uniform(0.0, 0.6);
    const double w1 = g.uniform(0.0, 0.6);
    const double oracle = 0.5 * (w0 + w1 + oracle_trace_norm(r0 * w0 - r1 * w1));
    CHECK(std::abs(weighted_guess_value(w0, r0, w1, r1) - oracle) <= 1e-12);
  }
}

TEST_CASE("nonnegative projector") {
  const ComplexMatrix p = nonnegative_projector(ComplexMatrix::diagonal({0.0, -1.0, 2.0, 0.0}));
  CHECK(max_abs_diff(p, ComplexMatrix::diagonal({1.0, 0.0, 1.0, 1.0})) == 0.0);
}

TEST_CASE("pure-state success") {
  const PureState zero = PureState::basis(2, 0);
  const PureState one = PureState::basis(2, 1);
  const PureState plus = PureState::normalized({1.0, 1.0});
  CHECK(pure_state_psucc(zero, zero) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pure_state_psucc(zero, one) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(pure_state_psucc(zero, plus) - 0.5 * (1.0 + std::sqrt(0.5))) <= 1e-12);
  CHECK(std::abs(pure_state_psucc(zero, plus) - 0.853553390593) <= 1e-12);

  Gen g(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = trial % 2 == 0 ? 2 : 4;
    const PureState a = g.pure(dim);
    const PureState b = g.pure(dim);
    const double h = helstrom(DensityMatrix(a.projector()), DensityMatrix(b.projector())).psucc;
    CHECK(std::abs(pure_state_psucc(a, b) - h) <= 1e-10);
    CHECK(std::abs(pure_state_psucc(a, b) - pure_state_psucc(b, a)) <= 1e-15);
  }
}

TEST_CASE("POVM validation") {
  CHECK_NOTHROW(binary_povm(0.3, 0.9, 0.4, 1.0).povm().validate());
  CHECK_THROWS_AS((Povm{{ComplexMatrix::identity(2), ComplexMatrix::identity(2)}}.validate()), NumericError);
  const ComplexMatrix neg = ComplexMatrix::diagonal({-0.1, 0.5});
  CHECK_THROWS_AS((Povm{{neg, ComplexMatrix::identity(2) - neg}}.validate()), NumericError);

  const BinaryPovm m = binary_povm(1.0, 0.0, 0.0, 0.0);
  CHECK(max_abs_diff(m.effect, ComplexMatrix::diagonal({1.0, 0.0})) <= 1e-16);
  const BinaryPovm t = binary_povm(1.0, 0.0, kPi / 4.0, kHalfPi);
  CHECK(max_abs_diff(t.effect, proj({1.0, Complex(0.0, 1.0)})) <= 1e-15);

  Gen g(12);
  for (int trial = 0; trial < 100; ++trial) {
    const BinaryPovm p = binary_povm(g.uniform(), g.uniform(), g.uniform(0.0, kHalfPi), g.uniform(0.0, 2 * kPi));
    CHECK_NOTHROW(p.povm().validate());
  }
}

TEST_CASE("maximize_scalar") {
  const ScalarMax q = maximize_scalar([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0);
  CHECK(std::abs(q.argmax - 0.3) <= 1e-6);

  const ChannelPair pair(kHalfPi, kPi / 3.0);
  const ScalarMax os = maximize_scalar([&](double x) { return one_shot_psucc(pair, x); }, 0.0, 1.0);
  CHECK(std::abs(os.argmax - 2.0 / 3.0) <= 1e-4);

  const ScalarMax c = maximize_scalar([](double) { return 4.0; }, -2.0, 5.0);
  CHECK(c.argmax == -2.0);
  CHECK(c.value == 4.0);

  // Endpoint maxima are returned exactly.
  CHECK(maximize_scalar([](double x) { return x; }, 0.0, 1.0).argmax == 1.0);

  CHECK_THROWS_AS(maximize_scalar([](double x) { return x; }, 1.0, 1.0), NumericError);
  CHECK_THROWS_AS(maximize_scalar([](double x) { return x; }, 0.0, 1.0, 1), NumericError);

  // Random concave quadratics.
  Gen g(77);
  for (int trial = 0; trial < 50; ++trial) {
    const double peak = g.uniform(-1.0, 1.0);
    const double curv = g.uniform(0.1, 10.0);
    const ScalarMax r = maximize_scalar([&](double x) { return -curv * (x - peak) * (x - peak); }, -1.0, 1.0);
    CHECK(std::abs(r.argmax - peak) <= 1e-6);
  }
}

TEST_CASE("golden section and 2d maximizers") {
  const ScalarMax gs = golden_section_max([](double x) { return std::sin(x); }, 0.0, 3.0);
  CHECK(std::abs(gs.argmax - kHalfPi) <= 1e-6);

  const PlanarMax p = maximize_2d([](double x, double y) { return -(x - 0.2) * (x - 0.2) - (y - 0.7) * (y - 0.7); },
                                  0.0, 1.0, 0.0, 1.0);
  CHECK(std::abs(p.x - 0.2) <= 1e-6);
  CHECK(std::abs(p.y - 0.7) <= 1e-6);

  const PlanarMax flat = maximize_2d([](double, double) { return 1.0; }, 0.0, 1.0, 0.0, 1.0);
  CHECK(flat.x == 0.0);
  CHECK(flat.y == 0.0);
}

TEST_CASE("maximize_povm_2x2") {
  const ComplexMatrix zero = ComplexMatrix::diagonal({1.0, 0.0});
  const PovmMax a = maximize_povm_2x2([&](const BinaryPovm& m) { return trace_product_real(zero, m.effect); });
  CHECK(std::abs(a.value - 1.0) <= 1e-9);
  CHECK(std::abs(a.povm.effect(0, 0) - 1.0) <= 1e-6);

  const PovmMax c = maximize_povm_2x2([](const BinaryPovm&) { return 0.25; });
  CHECK(c.value == 0.25);
  CHECK_NOTHROW(c.povm.povm().validate());

  // Identical hypotheses: the two-copy objective cannot beat a coin flip.
  const ChannelPair same(0.7, 0.7);
  const ComplexMatrix rho = output_state(same.channel(0), {0.6, 0.0}).mat();
  const PovmMax s = maximize_povm_2x2([&](const BinaryPovm& m) { return backward_objective(rho, rho, m); });
  CHECK(std::abs(s.value - 0.5) <= 1e-12);

  // Never below the Helstrom projective extremes.
  Gen g(41);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix r0 = g.density(2);
    const ComplexMatrix r1 = g.density(2);
    auto f = [&](const BinaryPovm& m) { return trace_product_real(r0 - r1, m.effect); };
    const PovmMax best = maximize_povm_2x2(f);
    const ComplexMatrix pi = nonnegative_projector(r0 - r1);
    CHECK(best.value >= f(BinaryPovm{pi}) - 1e-9);
    CHECK(best.value >= f(BinaryPovm{ComplexMatrix::identity(2) - pi}) - 1e-9);
    CHECK_NOTHROW(best.povm.povm().validate());
  }

  // Seeds are honoured.
  const BinaryPovm seed{ComplexMatrix::diagonal({0.123, 0.456})};
  const std::vector<BinaryPovm> seeds{seed};
  const PovmMax w = maximize_povm_2x2(
      [&](const BinaryPovm& m) { return -max_abs_diff(m.effect, seed.effect); }, seeds);
  CHECK(w.value == 0.0);
}

TEST_CASE("sample_index and sample_measurement") {
  Rng rng(9);
  const std::vector<double> bad{0.5, 0.4};
  CHECK_THROWS_AS(sample_index(bad, rng), NumericError);

  const Povm z{{ComplexMatrix::diagonal({1.0, 0.0}), ComplexMatrix::diagonal({0.0, 1.0})}};
  const ComplexMatrix ground = ComplexMatrix::diagonal({1.0, 0.0});
  bool always_zero = true;
  for (int i = 0; i < 10000; ++i) always_zero = always_zero && sample_measurement(ground, z, rng) == 0;
  CHECK(always_zero);

  const ComplexMatrix mixed = ComplexMatrix::identity(2) * 0.5;
  Rng r2(10);
  int zeros = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) zeros += sample_measurement(mixed, z, r2) == 0 ? 1 : 0;
  CHECK(std::abs(zeros / static_cast<double>(n) - 0.5) <= 0.01);

  Rng a(1234);
  Rng b(1234);
  bool same = true;
  for (int i = 0; i < 1000; ++i) same = same && sample_measurement(mixed, z, a) == sample_measurement(mixed, z, b);
  CHECK(same);

  // Three outcomes with unequal weights.
  const std::vector<double> probs{0.2, 0.5, 0.3};
  Rng r3(11);
  std::array<int, 3> counts{};
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(sample_index(probs, r3))];
  for (std::size_t k = 0; k < 3; ++k) {
    const double sigma = std::sqrt(probs[k] * (1 - probs[k]) / n);
    CHECK(std::abs(counts[k] / static_cast<double>(n) - probs[k]) <= 4 * sigma);
  }
}

TEST_CASE("derive_seed spreads streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}

TEST_CASE("Monte Carlo driver") {
  // A coin that is right with probability 0.7.
  const Protocol biased = [](int h, Rng& rng) {
    OutcomeSample s;
    s.true_hypothesis = h;
    s.guessed = rng.uniform() < 0.7 ? h : 1 - h;
    return s;
  };
  const McEstimate e = monte_carlo_psucc(biased, 100000, 5);
  CHECK(e.trials == 100000);
  CHECK(std::abs(e.estimate - 0.7) <= 3 * e.std_error);
  CHECK(std::abs(e.std_error - std::sqrt(e.estimate * (1 - e.estimate) / e.trials)) <= 1e-15);

  // Parallel and serial runs share the chunk layout, so they agree exactly,
  // including for trial counts that leave a partial chunk.
  for (std::int64_t trials : {1LL, 4095LL, 4097LL, 50000LL}) {
    const McEstimate p = monte_carlo_psucc(biased, trials, 42);
    const McEstimate s = monte_carlo_psucc_serial(biased, trials, 42);
    CHECK(p.correct == s.correct);
    CHECK(p.estimate == s.estimate);
  }
  CHECK(monte_carlo_psucc(biased, 30000, 1).correct != monte_carlo_psucc(biased, 30000, 2).correct);

  const Protocol perfect = [](int h, Rng&) { return OutcomeSample{h, {}, h}; };
  CHECK(monte_carlo_psucc(perfect, 1000, 3).estimate == 1.0);
  CHECK(monte_carlo_psucc(perfect, 1000, 3).std_error == 0.0);

  CHECK_THROWS_AS(monte_carlo_psucc(perfect, 0, 1), NumericError);
  CHECK_THROWS_AS(monte_carlo_psucc_serial(perfect, -5, 1), NumericError);
}
