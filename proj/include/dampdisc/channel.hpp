#pragma once

// Qubit amplitude damping channel with a vacuum qubit environment.
//
// The system-environment coupling exp(-i eta (a^dag b + a b^dag)) acts on
// |system, environment>; the decay probability is sin^2(eta).

#include "dampdisc/qmat.hpp"

namespace dampdisc {

class DampingChannel {
 public:
  /// eta in [0, pi/2]; throws NumericError otherwise.
  explicit DampingChannel(double eta);

  double eta() const { return eta_; }
  double decay_probability() const;

 private:
  double eta_;
};

struct KrausPair {
  ComplexMatrix k0;
  ComplexMatrix k1;
};

/// sqrt(1-x)|0> + exp(-i phi) sqrt(x)|1>.
struct InputState {
  double x = 1.0;
  double phi = 0.0;

  /// Throws NumericError for x outside [0, 1].
  PureState state() const;
};

/// sqrt(1-y)|01> + sqrt(y)|10>, reference qubit first.
struct SideEntangledInput {
  double y = 0.0;

  PureState state() const;
};

/// Two-copy entangled inputs: Odd = sqrt(1-x)|01> + sqrt(x)|10>,
/// Even = sqrt(1-x)|00> + sqrt(x)|11>.
enum class TwoShotVariant { Odd, Even };

PureState two_shot_entangled_input(TwoShotVariant variant, double x);

/// 4x4 joint unitary on |system, environment>: identity on |00> and |11>,
/// [[cos, -i sin], [-i sin, cos]] on the |01>, |10> block.
ComplexMatrix dilation_unitary(const DampingChannel& ch);

/// The coupling Hamiltonian eta (|01><10| + |10><01|).
ComplexMatrix dilation_hamiltonian(const DampingChannel& ch);

/// K0 = diag(1, cos eta), K1 = -i sin eta |0><1|.
KrausPair kraus(const DampingChannel& ch);

/// K0 rho K0^dag + K1 rho K1^dag.
DensityMatrix apply(const DampingChannel& ch, const DensityMatrix& rho);

/// Tr_E[U (rho (x) |0><0|) U^dag]; the dilation route to apply().
DensityMatrix apply_via_dilation(const DampingChannel& ch, const DensityMatrix& rho);

/// Channel output for a single-qubit input state, from the Kraus map.
DensityMatrix output_state(const DampingChannel& ch, const InputState& inp);

/// The four-entry closed form of the single-qubit output (phi = 0 form
/// extended with the phase on the off-diagonals).
ComplexMatrix output_state_closed_form(const DampingChannel& ch, const InputState& inp);

/// (id (x) N)(|Psi><Psi|), the channel acting on the second qubit.
DensityMatrix side_entangled_output(const DampingChannel& ch, const SideEntangledInput& inp);
ComplexMatrix side_entangled_output_closed_form(const DampingChannel& ch,
                                                const SideEntangledInput& inp);

/// (N (x) N)(|in><in|) for the two-copy entangled inputs.
DensityMatrix two_shot_entangled_output(const DampingChannel& ch, TwoShotVariant variant, double x);

/// Closed forms of the two-copy outputs. The even form carries no extra
/// factor on its |00><00| weight; it is ((1-x) + x sin^4 eta).
ComplexMatrix two_shot_entangled_closed_form(const DampingChannel& ch, TwoShotVariant variant,
                                             double x);

/// (N_a (x) N_b)(rho) for a two-qubit operator.
ComplexMatrix apply_local_pair(const DampingChannel& first, const DampingChannel& second,
                               const ComplexMatrix& rho);

}  // namespace dampdisc
