#include <doctest.h>

#include <cmath>

#include "dampdisc/channel.hpp"
#include "support.hpp"

using namespace dampdisc;
using namespace testing_support;

namespace {

void check_density(const ComplexMatrix& m) {
  CHECK(m.max_asymmetry() <= 1e-12);
  CHECK(std::abs(m.trace() - 1.0) <= 1e-12);
  const Spectrum s = hermitian_eigenvalues(m);
  CHECK(s.values[s.dim - 1] >= -1e-10);
}

// (K_a (x) K_b) rho (K_a (x) K_b)^dag summed over Kraus pairs, built
// independently of apply_local_pair.
ComplexMatrix kraus_pair_map(const DampingChannel& a, const DampingChannel& b, const ComplexMatrix& rho) {
  const KrausPair ka = kraus(a);
  const KrausPair kb = kraus(b);
  ComplexMatrix out(4);
  for (const ComplexMatrix& x : {ka.k0, ka.k1})
    for (const ComplexMatrix& y : {kb.k0, kb.k1}) {
      const ComplexMatrix k = tensor(x, y);
      out += k * rho * k.adjoint();
    }
  return out;
}

}  // namespace

TEST_CASE("channel parameter validation") {
  CHECK_THROWS_AS(DampingChannel{-0.1}, NumericError);
  CHECK_THROWS_AS(DampingChannel{2.0}, NumericError);
  CHECK_NOTHROW(DampingChannel{0.0});
  CHECK_NOTHROW(DampingChannel{kHalfPi});
  CHECK(DampingChannel(kPi / 3.0).decay_probability() == doctest::Approx(0.75));
  CHECK_THROWS_AS(InputState({1.5, 0.0}).state(), NumericError);
}

TEST_CASE("dilation unitary entries") {
  CHECK(max_abs_diff(dilation_unitary(DampingChannel(0.0)), ComplexMatrix::identity(4)) <= 1e-15);

  const ComplexMatrix u = dilation_unitary(DampingChannel(kHalfPi));
  const Complex mi(0.0, -1.0);
  const ComplexMatrix expected(4, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, mi, 0.0, 0.0, mi, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0});
  CHECK(max_abs_diff(u, expected) <= 1e-15);

  Gen g(3);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix v = dilation_unitary(DampingChannel(g.eta()));
    CHECK(max_abs_diff(v.adjoint() * v, ComplexMatrix::identity(4)) <= 1e-12);
  }
}

TEST_CASE("Kraus pair") {
  const KrausPair id = kraus(DampingChannel(0.0));
  CHECK(max_abs_diff(id.k0, ComplexMatrix::identity(2)) == 0.0);
  CHECK(max_abs_diff(id.k1, ComplexMatrix::zero(2)) <= 1e-16);

  const KrausPair full = kraus(DampingChannel(kHalfPi));
  CHECK(max_abs_diff(full.k0, ComplexMatrix::diagonal({1.0, 0.0})) <= 1e-16);
  CHECK(std::abs(full.k1(0, 1) - Complex(0.0, -1.0)) <= 1e-16);
  CHECK(std::abs(full.k1(0, 0)) + std::abs(full.k1(1, 0)) + std::abs(full.k1(1, 1)) == 0.0);

  Gen g(4);
  for (int trial = 0; trial < 50; ++trial) {
    const KrausPair k = kraus(DampingChannel(g.eta()));
    CHECK(max_abs_diff(k.k0.adjoint() * k.k0 + k.k1.adjoint() * k.k1, ComplexMatrix::identity(2)) <= 1e-12);
  }
}

TEST_CASE("apply: fixed points and closed cases") {
  const DensityMatrix ground(ComplexMatrix::diagonal({1.0, 0.0}));
  const DensityMatrix excited(ComplexMatrix::diagonal({0.0, 1.0}));
  Gen g(21);
  for (int trial = 0; trial < 20; ++trial) {
    const double eta = g.eta();
    CHECK(max_abs_diff(apply(DampingChannel(eta), ground).mat(), ground.mat()) <= 1e-15);
    const double s = std::sin(eta);
    CHECK(max_abs_diff(apply(DampingChannel(eta), excited).mat(),
                       ComplexMatrix::diagonal({s * s, 1.0 - s * s})) <= 1e-15);
    const DensityMatrix rho(g.density(2));
    CHECK(max_abs_diff(apply(DampingChannel(kHalfPi), rho).mat(), ground.mat()) <= 1e-15);
  }
}

TEST_CASE("dilation and Kraus routes agree on random states") {
  Gen g(100);
  for (int trial = 0; trial < 100; ++trial) {
    const DampingChannel ch(g.eta());
    const DensityMatrix rho(g.density(2, trial % 2 == 0 ? 1 : 2));
    const DensityMatrix a = apply(ch, rho);
    const DensityMatrix b = apply_via_dilation(ch, rho);
    CHECK(max_abs_diff(a.mat(), b.mat()) <= 1e-12);
    check_density(a.mat());
    // Composition stays a valid state.
    check_density(apply(DampingChannel(g.eta()), a).mat());
  }
}

TEST_CASE("output_state matches its closed form on a 20x20 grid") {
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const InputState in{i / 19.0, 0.0};
      const DampingChannel ch(kHalfPi * j / 19.0);
      const DensityMatrix out = output_state(ch, in);
      CHECK(max_abs_diff(out.mat(), output_state_closed_form(ch, in)) <= 1e-12);
      CHECK(max_abs_diff(out.mat(), apply(ch, DensityMatrix(in.state())).mat()) <= 1e-12);
      check_density(out.mat());
    }
  }
  // Nonzero phase only touches the off-diagonals.
  const InputState phased{0.3, 1.1};
  const DampingChannel ch(0.7);
  CHECK(max_abs_diff(output_state(ch, phased).mat(), output_state_closed_form(ch, phased)) <= 1e-12);
  CHECK(std::abs(output_state(ch, phased).mat()(0, 0) - output_state(ch, {0.3, 0.0}).mat()(0, 0)) <= 1e-15);
}

TEST_CASE("output_state examples") {
  CHECK(max_abs_diff(output_state(DampingChannel(0.9), {0.0, 0.0}).mat(), ComplexMatrix::diagonal({1.0, 0.0})) <= 1e-15);
  CHECK(max_abs_diff(output_state(DampingChannel(kPi / 3.0), {1.0, 0.0}).mat(),
                     ComplexMatrix::diagonal({0.75, 0.25})) <= 1e-15);
  CHECK(max_abs_diff(output_state(DampingChannel(0.0), {0.5, 0.0}).mat(),
                     ComplexMatrix(2, {0.5, 0.5, 0.5, 0.5})) <= 1e-15);
}

TEST_CASE("side-entangled output") {
  Gen g(8);
  for (int trial = 0; trial < 40; ++trial) {
    const DampingChannel ch(g.eta());
    const SideEntangledInput in{g.uniform()};
    const DensityMatrix out = side_entangled_output(ch, in);
    check_density(out.mat());
    CHECK(max_abs_diff(out.mat(), side_entangled_output_closed_form(ch, in)) <= 1e-12);
    const ComplexMatrix expected = kraus_pair_map(DampingChannel(0.0), ch, in.state().projector());
    CHECK(max_abs_diff(out.mat(), expected) <= 1e-12);
  }

  const double eta = 0.8;
  const double s2 = std::pow(std::sin(eta), 2);
  CHECK(max_abs_diff(side_entangled_output(DampingChannel(eta), {0.0}).mat(),
                     ComplexMatrix::diagonal({s2, 1.0 - s2, 0.0, 0.0})) <= 1e-15);
  CHECK(max_abs_diff(side_entangled_output(DampingChannel(eta), {1.0}).mat(),
                     ComplexMatrix::diagonal({0.0, 0.0, 1.0, 0.0})) <= 1e-15);
  const SideEntangledInput mid{0.4};
  CHECK(max_abs_diff(side_entangled_output(DampingChannel(0.0), mid).mat(), mid.state().projector()) <= 1e-15);
}

TEST_CASE("two-shot entangled outputs") {
  Gen g(9);
  for (int trial = 0; trial < 40; ++trial) {
    const DampingChannel ch(g.eta());
    const double x = g.uniform();
    for (TwoShotVariant v : {TwoShotVariant::Odd, TwoShotVariant::Even}) {
      const DensityMatrix out = two_shot_entangled_output(ch, v, x);
      check_density(out.mat());
      const ComplexMatrix expected = kraus_pair_map(ch, ch, two_shot_entangled_input(v, x).projector());
      CHECK(max_abs_diff(out.mat(), expected) <= 1e-12);
      CHECK(max_abs_diff(out.mat(), two_shot_entangled_closed_form(ch, v, x)) <= 1e-12);
    }
  }

  const PureState odd = two_shot_entangled_input(TwoShotVariant::Odd, 0.3);
  CHECK(max_abs_diff(two_shot_entangled_output(DampingChannel(0.0), TwoShotVariant::Odd, 0.3).mat(),
                     odd.projector()) <= 1e-15);

  const double eta = 1.1;
  const double s2 = std::pow(std::sin(eta), 2);
  CHECK(max_abs_diff(two_shot_entangled_output(DampingChannel(eta), TwoShotVariant::Odd, 1.0).mat(),
                     ComplexMatrix::diagonal({s2, 0.0, 1.0 - s2, 0.0})) <= 1e-15);
  CHECK(max_abs_diff(two_shot_entangled_output(DampingChannel(eta), TwoShotVariant::Even, 0.0).mat(),
                     ComplexMatrix::diagonal({1.0, 0.0, 0.0, 0.0})) <= 1e-15);
}

TEST_CASE("the even two-shot |00><00| weight carries no extra eta factor") {
  // ((1-x) + x sin^4 eta) is a probability; a stray factor eta would break
  // the unit trace for most eta.
  const double eta = 0.6;
  const double x = 0.7;
  const ComplexMatrix out = two_shot_entangled_output(DampingChannel(eta), TwoShotVariant::Even, x).mat();
  const double s = std::sin(eta);
  CHECK(out(0, 0).real() == doctest::Approx((1.0 - x) + x * std::pow(s, 4)).epsilon(1e-14));
  CHECK(std::abs(out(0, 0).real() - ((1.0 - x) + x * std::pow(s, 4)) * eta) > 1e-2);
}
