#include <doctest.h>

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "dampdisc/channel.hpp"
#include "dampdisc/qmat.hpp"
#include "support.hpp"

using namespace dampdisc;
using namespace testing_support;

namespace {

ComplexMatrix reconstruct(const EigenDecomposition& e) {
  ComplexMatrix m(static_cast<int>(e.eigenvalues.size()));
  for (std::size_t i = 0; i < e.eigenvalues.size(); ++i) m += e.eigenvalues[i] * e.eigenvectors[i].projector();
  return m;
}

void check_decomposition(const ComplexMatrix& m) {
  const EigenDecomposition e = hermitian_eig(m);
  REQUIRE(e.eigenvalues.size() == static_cast<std::size_t>(m.dim()));
  CHECK(max_abs_diff(reconstruct(e), m) <= kReconTol);
  for (std::size_t i = 0; i < e.eigenvectors.size(); ++i) {
    // Values within the tie tolerance are ordered by eigenvector instead.
    if (i > 0) CHECK(e.eigenvalues[i - 1] >= e.eigenvalues[i] - 1e-12 * std::max(1.0, std::abs(e.eigenvalues[i])));
    for (std::size_t j = 0; j < e.eigenvectors.size(); ++j) {
      const double expect = i == j ? 1.0 : 0.0;
      CHECK(std::abs(inner(e.eigenvectors[i], e.eigenvectors[j]) - expect) <= 1e-10);
    }
  }
}

}  // namespace

TEST_CASE("matrix construction rejects bad shapes") {
  CHECK_THROWS_AS(ComplexMatrix(3), NumericError);
  CHECK_THROWS_AS(ComplexMatrix(2, {1.0, 2.0, 3.0}), NumericError);
  CHECK_THROWS_AS(ComplexMatrix(2) + ComplexMatrix(4), NumericError);
}

TEST_CASE("hermitian_eig on textbook matrices") {
  SUBCASE("already diagonal") {
    const EigenDecomposition e = hermitian_eig(ComplexMatrix::diagonal({1.0, -1.0}));
    CHECK(e.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(e.eigenvalues[1] == doctest::Approx(-1.0));
    CHECK(std::abs(e.eigenvectors[0][0] - 1.0) < 1e-15);
    CHECK(std::abs(e.eigenvectors[1][1] - 1.0) < 1e-15);
  }
  SUBCASE("zero matrix") {
    const EigenDecomposition e = hermitian_eig(ComplexMatrix::zero(2));
    CHECK(e.eigenvalues[0] == 0.0);
    CHECK(e.eigenvalues[1] == 0.0);
  }
  SUBCASE("pauli x") {
    const EigenDecomposition e = hermitian_eig(ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}));
    const double h = 1.0 / std::sqrt(2.0);
    CHECK(e.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(e.eigenvalues[1] == doctest::Approx(-1.0));
    CHECK(std::abs(e.eigenvectors[0][0] - h) < 1e-14);
    CHECK(std::abs(e.eigenvectors[0][1] - h) < 1e-14);
    CHECK(std::abs(e.eigenvectors[1][0] - h) < 1e-14);
    CHECK(std::abs(e.eigenvectors[1][1] + h) < 1e-14);
  }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input and names the asymmetry") {
  const ComplexMatrix m(2, {1.0, 0.5, 0.0, 1.0});
  try {
    hermitian_eig(m);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }
  CHECK_THROWS_AS(trace_norm(m), NumericError);
  CHECK_THROWS_AS(matrix_exp_skew(m), NumericError);
}

TEST_CASE("eigenvectors are phase-fixed and degenerate ties are ordered deterministically") {
  // Threefold degenerate eigenvalue: basis vectors come back in index order.
  const ComplexMatrix m = ComplexMatrix::diagonal({2.0, 2.0, 2.0, -1.0});
  const EigenDecomposition e = hermitian_eig(m);
  for (const PureState& v : e.eigenvectors) {
    int first = 0;
    while (std::abs(v[first]) < 1e-12) ++first;
    CHECK(std::abs(v[first].imag()) < 1e-14);
    CHECK(v[first].real() > 0.0);
  }
  CHECK(std::abs(e.eigenvectors[0][0] - 1.0) < 1e-14);
  CHECK(std::abs(e.eigenvectors[1][1] - 1.0) < 1e-14);
  CHECK(std::abs(e.eigenvectors[2][2] - 1.0) < 1e-14);

  Gen g(7);
  const ComplexMatrix h = g.hermitian(4);
  const EigenDecomposition a = hermitian_eig(h);
  const EigenDecomposition b = hermitian_eig(h);
  for (int i = 0; i < 4; ++i) {
    CHECK(a.eigenvalues[i] == b.eigenvalues[i]);
    for (int k = 0; k < 4; ++k) CHECK(a.eigenvectors[i][k] == b.eigenvectors[i][k]);
  }
}

TEST_CASE("hermitian_eig agrees with the Eigen reference on random matrices") {
  Gen g(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = trial % 2 == 0 ? 2 : 4;
    const ComplexMatrix m = g.hermitian(dim);
    check_decomposition(m);
    const Eigen::VectorXd ref = oracle_eigenvalues(m);
    const EigenDecomposition e = hermitian_eig(m);
    for (int i = 0; i < dim; ++i) CHECK(std::abs(e.eigenvalues[i] - ref(i)) <= 1e-10);
    const Spectrum s = hermitian_eigenvalues(m);
    for (int i = 0; i < dim; ++i) CHECK(std::abs(s.values[i] - ref(i)) <= 1e-10);
  }
}

TEST_CASE("hermitian_eig handles near-degenerate and rank-deficient input") {
  Gen g(99);
  for (int trial = 0; trial < 50; ++trial) {
    const PureState v = g.pure(4);
    ComplexMatrix m = v.projector();
    m += 1e-9 * g.density(4, 1);
    check_decomposition(m);
  }
}

TEST_CASE("trace_norm") {
  CHECK(trace_norm(ComplexMatrix::diagonal({1.0, -1.0})) == doctest::Approx(2.0));
  CHECK(trace_norm(ComplexMatrix::diagonal({1.0, 0.0}) - ComplexMatrix::diagonal({0.75, 0.25})) ==
        doctest::Approx(0.5).epsilon(1e-15));

  Gen g(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = trial % 2 == 0 ? 2 : 4;
    CHECK(trace_norm(g.density(dim)) == doctest::Approx(1.0).epsilon(1e-12));
    const ComplexMatrix h = g.hermitian(dim);
    CHECK(std::abs(trace_norm(h) - oracle_trace_norm(h)) <= 1e-10);
    const Spectrum s = hermitian_eigenvalues(h);
    double sum = 0.0;
    for (int i = 0; i < dim; ++i) sum += std::abs(s.values[i]);
    CHECK(trace_norm(h) == doctest::Approx(sum).epsilon(1e-14));
  }
}

TEST_CASE("tensor products") {
  CHECK(max_abs_diff(tensor(ComplexMatrix::identity(2), ComplexMatrix::identity(2)),
                     ComplexMatrix::identity(4)) == 0.0);
  CHECK(max_abs_diff(tensor(ComplexMatrix::diagonal({1.0, 0.0}), ComplexMatrix::diagonal({0.0, 1.0})),
                     ComplexMatrix::diagonal({0.0, 1.0, 0.0, 0.0})) == 0.0);
  CHECK_THROWS_AS(tensor(ComplexMatrix(4), ComplexMatrix(2)), NumericError);

  Gen g(11);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix a = g.hermitian(2);
    const ComplexMatrix b = g.hermitian(2);
    const ComplexMatrix t = tensor(a, b);
    CHECK(std::abs(t.trace() - a.trace() * b.trace()) <= 1e-12);
    // Eigen's Kronecker product, written out.
    const EigenMatrix ea = to_eigen(a);
    const EigenMatrix eb = to_eigen(b);
    EigenMatrix kron(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) kron.block(2 * i, 2 * j, 2, 2) = ea(i, j) * eb;
    CHECK(max_abs_diff(t, from_eigen(kron)) <= 1e-14);
  }
}

TEST_CASE("partial trace recovers tensor factors") {
  Gen g(13);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix rho = g.density(2);
    const ComplexMatrix sigma = g.density(2);
    const ComplexMatrix t = tensor(rho, sigma);
    CHECK(max_abs_diff(partial_trace(t, Subsystem::Second), rho) <= 1e-14);
    CHECK(max_abs_diff(partial_trace(t, Subsystem::First), sigma) <= 1e-14);
    const ComplexMatrix m = g.hermitian(4);
    CHECK(std::abs(partial_trace(m, Subsystem::First).trace() - m.trace()) <= 1e-12);
    CHECK(std::abs(partial_trace(m, Subsystem::Second).trace() - m.trace()) <= 1e-12);
  }
  CHECK(max_abs_diff(partial_trace(0.25 * ComplexMatrix::identity(4), Subsystem::First),
                     0.5 * ComplexMatrix::identity(2)) == 0.0);
  CHECK_THROWS_AS(partial_trace(ComplexMatrix(2), Subsystem::First), NumericError);
}

TEST_CASE("matrix_exp_skew") {
  CHECK(max_abs_diff(matrix_exp_skew(ComplexMatrix::zero(4)), ComplexMatrix::identity(4)) <= 1e-15);

  const ComplexMatrix d = ComplexMatrix::diagonal({0.3, -1.2, 2.0, 0.0});
  const ComplexMatrix u = matrix_exp_skew(d);
  CHECK(std::abs(u(0, 0) - std::exp(Complex(0.0, -0.3))) <= 1e-14);
  CHECK(std::abs(u(2, 2) - std::exp(Complex(0.0, -2.0))) <= 1e-14);
  CHECK(std::abs(u(0, 1)) <= 1e-15);

  Gen g(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = trial % 2 == 0 ? 2 : 4;
    const ComplexMatrix h = g.hermitian(dim);
    const ComplexMatrix ex = matrix_exp_skew(h);
    const EigenMatrix ref = (Complex(0.0, -1.0) * to_eigen(h)).exp();
    CHECK(max_abs_diff(ex, from_eigen(ref)) <= 1e-10);
    CHECK(max_abs_diff(ex.adjoint() * ex, ComplexMatrix::identity(dim)) <= 1e-10);
  }
}

TEST_CASE("matrix_exp_skew of the coupling reproduces the closed-form unitary") {
  for (int k = 0; k < 20; ++k) {
    const double eta = kHalfPi * k / 19.0;
    const DampingChannel ch(eta);
    const ComplexMatrix u = matrix_exp_skew(dilation_hamiltonian(ch));
    const Complex mi(0.0, -1.0);
    const ComplexMatrix expected(4, {1.0, 0.0, 0.0, 0.0,
                                     0.0, std::cos(eta), mi * std::sin(eta), 0.0,
                                     0.0, mi * std::sin(eta), std::cos(eta), 0.0,
                                     0.0, 0.0, 0.0, 1.0});
    CHECK(max_abs_diff(u, expected) <= 1e-10);
  }
}

TEST_CASE("density matrix validation") {
  CHECK_NOTHROW(DensityMatrix(ComplexMatrix::diagonal({0.5, 0.5})));
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::diagonal({0.6, 0.5})), NumericError);
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::diagonal({1.5, -0.5})), NumericError);
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix(2, {0.5, 0.1, 0.2, 0.5})), NumericError);
  CHECK_THROWS_AS(PureState({1.0, 1.0}), NumericError);
  CHECK_NOTHROW(PureState({0.6, Complex(0.0, 0.8)}));
}

TEST_CASE("product-state test") {
  const PureState a = PureState::normalized({1.0, 2.0});
  const PureState b = PureState::normalized({Complex(0.0, 1.0), 0.5});
  CHECK(is_product_state(tensor(a, b)));
  const double h = 1.0 / std::sqrt(2.0);
  CHECK_FALSE(is_product_state(PureState({h, 0.0, 0.0, h})));
}
