#pragma once

// Small fixed-dimension complex linear algebra for one- and two-qubit objects.
//
// Every matrix here is either 2x2 or 4x4. Two-qubit objects use the basis
// ordering |00>, |01>, |10>, |11> with the first tensor factor most
// significant.

#include <array>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace dampdisc {

using Complex = std::complex<double>;

inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kReconTol = 1e-10;
inline constexpr double kUnitTraceTol = 1e-12;
inline constexpr double kNegativeEigenTol = 1e-10;
inline constexpr double kUnitNormTol = 1e-12;

/// Raised when an input violates a numeric precondition (non-Hermitian,
/// not unit trace, wrong dimension, ...).
class NumericError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ComplexMatrix {
 public:
  static constexpr int kMaxDim = 4;

  ComplexMatrix() : ComplexMatrix(2) {}
  explicit ComplexMatrix(int dim);
  /// Row-major entries; the list must hold exactly dim*dim values.
  ComplexMatrix(int dim, std::initializer_list<Complex> row_major);

  static ComplexMatrix identity(int dim);
  static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }
  static ComplexMatrix diagonal(std::initializer_list<double> diag);

  int dim() const { return dim_; }

  Complex& operator()(int r, int c) { return a_[r * kMaxDim + c]; }
  const Complex& operator()(int r, int c) const { return a_[r * kMaxDim + c]; }

  ComplexMatrix adjoint() const;
  Complex trace() const;

  /// Largest |m(r,c) - conj(m(c,r))|.
  double max_asymmetry() const;
  bool is_hermitian(double tol = kHermiticityTol) const { return max_asymmetry() <= tol; }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);
  ComplexMatrix& operator*=(double s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= s; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  int dim_;
  std::array<Complex, kMaxDim * kMaxDim> a_{};
};

/// Largest entrywise modulus of a - b. Dimensions must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Re Tr[a b] without forming the product.
double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b);

/// Unit-norm state vector of dimension 2 or 4.
class PureState {
 public:
  /// |0>.
  PureState() : PureState({Complex(1.0, 0.0), Complex(0.0, 0.0)}) {}
  /// Throws NumericError unless the amplitudes have unit norm.
  PureState(std::initializer_list<Complex> amplitudes);
  explicit PureState(const std::vector<Complex>& amplitudes);

  /// Normalizes an arbitrary nonzero vector.
  static PureState normalized(const std::vector<Complex>& v);
  static PureState basis(int dim, int index);

  int dim() const { return dim_; }
  const Complex& operator[](int i) const { return v_[i]; }

  /// |psi><psi|.
  ComplexMatrix projector() const;
  std::vector<Complex> amplitudes() const { return {v_.begin(), v_.begin() + dim_}; }

 private:
  int dim_ = 2;
  std::array<Complex, ComplexMatrix::kMaxDim> v_{};
};

/// <a|b>.
Complex inner(const PureState& a, const PureState& b);

/// Positive semidefinite, unit-trace Hermitian matrix.
class DensityMatrix {
 public:
  /// Validates hermiticity, unit trace and positivity; throws NumericError.
  explicit DensityMatrix(const ComplexMatrix& m);
  explicit DensityMatrix(const PureState& psi) : DensityMatrix(psi.projector()) {}

  int dim() const { return m_.dim(); }
  const ComplexMatrix& mat() const { return m_; }
  operator const ComplexMatrix&() const { return m_; }

 private:
  ComplexMatrix m_;
};

/// Eigenpairs sorted by descending eigenvalue.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  std::vector<PureState> eigenvectors;
};

/// Eigenvalues only, descending; no allocation. Entries past dim are zero.
struct Spectrum {
  int dim = 0;
  std::array<double, ComplexMatrix::kMaxDim> values{};
};

/// Hermitian eigendecomposition. 2x2 uses the closed-form quadratic
/// solution, 4x4 cyclic Jacobi. Eigenvectors are phase-fixed so their first
/// nonzero component is real positive; equal eigenvalues are ordered by a
/// lexicographic comparison of component real parts (largest first).
EigenDecomposition hermitian_eig(const ComplexMatrix& m);

Spectrum hermitian_eigenvalues(const ComplexMatrix& m);

/// Sum of |eigenvalues| of a Hermitian matrix.
double trace_norm(const ComplexMatrix& m);

/// Kronecker product of two 2x2 matrices.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
PureState tensor(const PureState& a, const PureState& b);

enum class Subsystem { First, Second };

/// Traces out `traced` from a 4x4 two-qubit operator.
ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem traced);

/// exp(-i h) for Hermitian h, via the eigendecomposition of h.
ComplexMatrix matrix_exp_skew(const ComplexMatrix& h);

/// True when a two-qubit state has Schmidt rank one, i.e. |a d - b c| <= tol.
bool is_product_state(const PureState& psi, double tol = 1e-8);

}  // namespace dampdisc
