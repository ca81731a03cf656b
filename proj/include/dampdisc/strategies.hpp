#pragma once

// Strategies for telling apart two amplitude damping channels eta0 > eta1,
// each acting with probability 1/2.
//
// Where a closed form exists it is exposed next to a numeric construction
// from channel outputs and Helstrom measurements. The numeric construction is
// the reference; closed forms are checked against it.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "dampdisc/channel.hpp"
#include "dampdisc/discrimination.hpp"

namespace dampdisc {

class ChannelPair {
 public:
  /// Both parameters in [0, pi/2]. If eta0 < eta1 they are swapped and
  /// swapped() reports it.
  ChannelPair(double eta0, double eta1);

  double eta0() const { return eta0_; }
  double eta1() const { return eta1_; }
  bool swapped() const { return swapped_; }
  bool degenerate() const { return eta0_ == eta1_; }

  /// cos(eta1) + cos(eta0), in [0, 2].
  double gamma() const;

  DampingChannel channel(int hypothesis) const { return DampingChannel(hypothesis == 0 ? eta0_ : eta1_); }

 private:
  double eta0_;
  double eta1_;
  bool swapped_ = false;
};

struct LabeledOperator {
  std::string label;
  ComplexMatrix op;
};

struct StrategyResult {
  double psucc = 0.5;
  std::map<std::string, double> params;
  std::vector<LabeledOperator> measurement;
};

// ---------------------------------------------------------------- one shot

/// Closed form 1/2 {1 + (cos eta1 - cos eta0) sqrt(x [1 - x (1 - gamma^2)])}.
double one_shot_psucc(const ChannelPair& pair, double x);

/// Helstrom on the two Kraus outputs.
double one_shot_psucc_numeric(const ChannelPair& pair, double x);

/// Optimal input population, closed form: x* = 1 / (2 (1 - gamma^2)) below
/// gamma = 1/sqrt(2), otherwise x* = 1. params: "x". The measurement holds
/// the Helstrom projectors at x*.
StrategyResult one_shot_optimal(const ChannelPair& pair);

/// Same quantity from maximize_scalar over one_shot_psucc_numeric.
StrategyResult one_shot_optimal_numeric(const ChannelPair& pair);

struct PolarCurvePoint {
  double theta = 0.0;   // arcsin(sqrt(x))
  double radius = 0.0;  // || |0><0| - rho1(x) ||_1
};

/// theta uniform on [0, pi/2], n_points >= 2.
std::vector<PolarCurvePoint> damping_polar_curve(double eta1, int n_points);

// --------------------------------------------------------- side entanglement

/// Trace-norm success probability for the reference + channel outputs of
/// sqrt(1-y)|01> + sqrt(y)|10>.
double side_ent_psucc(const ChannelPair& pair, double y);

/// (cos eta1 - cos eta0) {(1-y) gamma + sqrt((1-y) [4 y + (1-y) gamma^2])}.
/// This is ||rho0 - rho1||_1 of the two outputs, so
/// side_ent_psucc = 1/2 + side_ent_trace_norm_closed_form / 4.
double side_ent_trace_norm_closed_form(const ChannelPair& pair, double y);

/// max{0, (gamma - 1) / (gamma - 2)}.
double side_ent_optimal_y(const ChannelPair& pair);

/// params: "y" = side_ent_optimal_y, psucc evaluated numerically there.
StrategyResult side_ent_optimal(const ChannelPair& pair);

/// params: "y" from maximize_scalar over side_ent_psucc.
StrategyResult side_ent_optimal_numeric(const ChannelPair& pair);

// ---------------------------------------------------------------- feedback

/// Conditional system state after the environment is found in
/// |alpha+> = cos a|0> + sin a|1> or |alpha-> = -sin a|0> + cos a|1>.
struct FeedbackBranch {
  PureState state;     // normalized; |0> placeholder when null
  double norm = 0.0;   // sqrt of the outcome probability
  bool null = false;   // zero-probability outcome
};

struct FeedbackConditionalStates {
  FeedbackBranch plus;
  FeedbackBranch minus;
};

/// Input sqrt(1-x)|0> + sqrt(x)|1>; alpha in [0, pi/2].
FeedbackConditionalStates feedback_conditional_states(const DampingChannel& ch, double x,
                                                      double alpha);

struct FeedbackTerms {
  double chi = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;
};

FeedbackTerms feedback_terms(const ChannelPair& pair, double x, double alpha);

/// Decision rule for one environment outcome. Returns -1 when the
/// conditional states are told apart by the equal-prior Helstrom
/// measurement. When the outcome carries no state information (one branch is
/// impossible, or both conditional states coincide) returns the fixed guess:
/// the hypothesis more likely to produce the outcome, ties going to 0.
int feedback_branch_guess(const FeedbackBranch& b0, const FeedbackBranch& b1);

/// Sum over environment outcomes e of P(e) * pure_state_psucc(phi0^e, phi1^e),
/// except that a branch with a fixed guess j contributes P(e | j) / 2.
double feedback_psucc(const ChannelPair& pair, double x, double alpha);

/// Closed form in chi, mu, nu, c0, c1. NaN where a denominator
/// c0 c1 or (1-c0)(1-c1) vanishes.
double feedback_psucc_closed_form(const ChannelPair& pair, double x, double alpha);

/// (1 + sin(eta0 - eta1)) / 2 at x = 1, alpha = pi/4.
StrategyResult feedback_optimal(const ChannelPair& pair);

/// maximize_2d over (x, alpha) in [0,1] x [0, pi/2]; ties keep the
/// smallest alpha.
StrategyResult feedback_optimal_numeric(const ChannelPair& pair);

// ------------------------------------------------------------- two copies

/// Trace-norm success probability for (N (x) N) of the entangled inputs.
double two_shot_entangled_psucc(const ChannelPair& pair, TwoShotVariant variant, double x);

/// 1/2 (1 + sin^2 eta0 - sin^2 eta1), independent of x.
double two_shot_odd_closed_form(const ChannelPair& pair);

/// 1/2 {1 + x/4 |cos^2 2eta0 - cos^2 2eta1| + sqrt(x)/2 |cos 2eta0 - cos 2eta1|}.
double two_shot_even_closed_form(const ChannelPair& pair, double x);

/// 1/2 (1 + 1/2 ||rho0 (x) rho0 - rho1 (x) rho1||_1).
double two_shot_product_psucc(const ChannelPair& pair, double x);

/// True when every eigenvector of rho0 (x) rho0 - rho1 (x) rho1 is a
/// product state (Schmidt test at 1e-8).
bool two_shot_helstrom_is_local(const ChannelPair& pair, double x);

struct TwoShotProductResult {
  StrategyResult result;  // params: "x"
  bool local_measurement = true;
};

/// Max over x with a 513-point initial grid.
TwoShotProductResult two_shot_product_optimal(const ChannelPair& pair);

// ------------------------------------------------------ adaptive (forward)

/// p0 = <v0|rho0|v0>, q0 = <v0|rho1|v0>, p1 = <v1|rho1|v1>, q1 = <v1|rho0|v1>
/// with v0, v1 the eigenvectors of rho0 - rho1 (descending eigenvalue).
struct PosteriorWeights {
  double p0 = 0.0;
  double q0 = 0.0;
  double p1 = 0.0;
  double q1 = 0.0;
};

PosteriorWeights posterior_weights(const ChannelPair& pair, double x);

/// Projective first-copy measurement on v0, v1 followed by the
/// prior-reweighted Helstrom measurement on the second copy.
double adaptive_forward_psucc(const ChannelPair& pair, double x);

StrategyResult adaptive_forward_optimal(const ChannelPair& pair);

/// Value of a two-copy adaptive strategy: hypothesis j occurs with weight
/// a_j, its first copy is sigma_j and second copy tau_j. The first copy is
/// measured with `first_effects`; after outcome k the second copy gets the
/// Helstrom measurement for weights a_j Tr[sigma_j E_k].
double adaptive_two_step_value(std::span<const ComplexMatrix> first_effects, double a0,
                               double a1, const ComplexMatrix& sigma0, const ComplexMatrix& sigma1,
                               const ComplexMatrix& tau0, const ComplexMatrix& tau1);

// -------------------------------------------- adaptive with environment feedback

/// Input |1>, environment measured in |+-> on both copies, adaptive
/// pure-state discrimination across the two copies.
double adaptive_feedback_psucc(const ChannelPair& pair);

/// 1/2 [1 + sin(eta0 - eta1) sqrt(1 + cos^2(eta0 - eta1))].
double adaptive_feedback_closed_form(const ChannelPair& pair);

// --------------------------------------------------- adaptive (backward)

/// r0 = Tr[rho0 M], s0 = Tr[rho1 M], r1 = 1 - s0, s1 = 1 - r0.
struct BackwardWeights {
  double r0 = 0.0;
  double s0 = 0.0;
  double r1 = 0.0;
  double s1 = 0.0;
};

BackwardWeights backward_weights(const ComplexMatrix& rho0, const ComplexMatrix& rho1,
                                 const BinaryPovm& first);

/// Success probability with first measurement {M, I - M} and Helstrom
/// measurements on the second copy weighted by the BackwardWeights.
double backward_objective(const ComplexMatrix& rho0, const ComplexMatrix& rho1,
                          const BinaryPovm& first);

struct BackwardResult {
  double psucc = 0.5;
  BinaryPovm first{ComplexMatrix::identity(2)};
  BackwardWeights weights;
};

/// Maximizes backward_objective over M with maximize_povm_2x2, seeded with
/// the forward strategy's projective measurement.
BackwardResult backward_adaptive(const ChannelPair& pair, double x);
double backward_adaptive_psucc(const ChannelPair& pair, double x);

/// Max over x with a 33-point initial grid (each point is a POVM search).
StrategyResult backward_adaptive_optimal(const ChannelPair& pair);

/// max_x forward - max_x backward.
double fwd_bwd_difference(const ChannelPair& pair);

// -------------------------------------------------------------- sequential

/// Both channel uses in sequence: Helstrom on N_eta(N_eta(|psi><psi|)).
double sequential_two_shot_psucc(const ChannelPair& pair, double x);

StrategyResult sequential_optimal(const ChannelPair& pair);

}  // namespace dampdisc
