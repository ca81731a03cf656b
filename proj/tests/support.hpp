#pragma once

// Shared test helpers: seeded random generators for property tests and
// conversion to Eigen, which serves as the reference implementation.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "dampdisc/qmat.hpp"

namespace testing_support {

using dampdisc::Complex;
using dampdisc::ComplexMatrix;
using dampdisc::PureState;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

using EigenMatrix = Eigen::MatrixXcd;

inline EigenMatrix to_eigen(const ComplexMatrix& m) {
  EigenMatrix e(m.dim(), m.dim());
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c < m.dim(); ++c) e(r, c) = m(r, c);
  return e;
}

inline ComplexMatrix from_eigen(const EigenMatrix& e) {
  ComplexMatrix m(static_cast<int>(e.rows()));
  for (int r = 0; r < e.rows(); ++r)
    for (int c = 0; c < e.cols(); ++c) m(r, c) = e(r, c);
  return m;
}

/// Eigenvalues in descending order from Eigen's self-adjoint solver.
inline Eigen::VectorXd oracle_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<EigenMatrix> es(to_eigen(m));
  Eigen::VectorXd v = es.eigenvalues();
  return v.reverse().eval();
}

inline double oracle_trace_norm(const ComplexMatrix& m) {
  return oracle_eigenvalues(m).cwiseAbs().sum();
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  Complex complex_normal() { return {normal(), normal()}; }

  double eta() { return uniform(0.0, kHalfPi); }

  /// (eta0, eta1) with eta0 > eta1.
  std::pair<double, double> ordered_pair() {
    double a = eta();
    double b = eta();
    if (a < b) std::swap(a, b);
    return {a, b};
  }

  ComplexMatrix hermitian(int dim) {
    ComplexMatrix m(dim);
    for (int r = 0; r < dim; ++r) {
      m(r, r) = normal();
      for (int c = r + 1; c < dim; ++c) {
        m(r, c) = complex_normal();
        m(c, r) = std::conj(m(r, c));
      }
    }
    return m;
  }

  PureState pure(int dim) {
    std::vector<Complex> v(static_cast<std::size_t>(dim));
    for (auto& z : v) z = complex_normal();
    return PureState::normalized(v);
  }

  /// Random full-rank or low-rank density matrix: G G^dag / Tr.
  ComplexMatrix density(int dim, int rank = -1) {
    if (rank < 0) rank = dim;
    ComplexMatrix g(dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < rank; ++c) g(r, c) = complex_normal();
    ComplexMatrix rho = g * g.adjoint();
    rho *= 1.0 / rho.trace().real();
    // Exact Hermitian symmetry.
    for (int r = 0; r < dim; ++r) {
      rho(r, r) = rho(r, r).real();
      for (int c = r + 1; c < dim; ++c) rho(c, r) = std::conj(rho(r, c));
    }
    return rho;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing_support
