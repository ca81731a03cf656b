#pragma once

// Minimum-error discrimination of two hypotheses.

#include <vector>

#include "dampdisc/qmat.hpp"

namespace dampdisc {

/// Eigenvalues of p0 rho0 - p1 rho1 above -kZeroEigenTol count as
/// nonnegative and go to the "guess 0" projector.
inline constexpr double kZeroEigenTol = 1e-13;

struct PriorPair {
  double p0 = 0.5;
  double p1 = 0.5;

  PriorPair() = default;
  /// Throws NumericError unless both are nonnegative and sum to 1 within 1e-12.
  PriorPair(double p0, double p1);

  static PriorPair equal() { return {}; }
};

struct HelstromResult {
  double psucc = 0.5;
  ComplexMatrix projector_plus;   // guess 0
  ComplexMatrix projector_minus;  // guess 1
};

/// Projects onto the nonnegative / negative eigenspaces of p0 rho0 - p1 rho1
/// and evaluates p0 Tr[rho0 P+] + p1 Tr[rho1 P-].
HelstromResult helstrom(const DensityMatrix& rho0, const DensityMatrix& rho1,
                        PriorPair priors = PriorPair::equal());

/// 1/2 (1 + 1/2 ||rho0 - rho1||_1).
double helstrom_psucc_equal_priors(const ComplexMatrix& rho0, const ComplexMatrix& rho1);

/// Best joint probability of a correct guess when hypothesis j occurs with
/// (sub-normalized) weight w_j and state rho_j:
/// max_P w0 Tr[rho0 P] + w1 Tr[rho1 (I - P)] = 1/2 (w0 + w1 + ||w0 rho0 - w1 rho1||_1).
double weighted_guess_value(double w0, const ComplexMatrix& rho0, double w1,
                            const ComplexMatrix& rho1);

/// Projector onto the nonnegative eigenspace of a Hermitian operator.
ComplexMatrix nonnegative_projector(const ComplexMatrix& gamma);

/// 1/2 (1 + sqrt(1 - |<a|b>|^2)).
double pure_state_psucc(const PureState& a, const PureState& b);

/// Generalized measurement: Hermitian effects 0 <= E <= I summing to I.
struct Povm {
  std::vector<ComplexMatrix> effects;

  /// Throws NumericError when an effect leaves [0, I] or the sum is not I
  /// (both within 1e-10).
  void validate() const;
};

/// Two-outcome qubit POVM {M, I - M}.
struct BinaryPovm {
  ComplexMatrix effect;

  ComplexMatrix complement() const { return ComplexMatrix::identity(effect.dim()) - effect; }
  Povm povm() const { return Povm{{effect, complement()}}; }
};

/// M = l1 |u><u| + l2 |u_perp><u_perp| with u = (cos theta, exp(i chi) sin theta).
BinaryPovm binary_povm(double l1, double l2, double theta, double chi);

}  // namespace dampdisc
