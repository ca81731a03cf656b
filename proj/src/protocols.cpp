#include "dampdisc/protocols.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <numbers>

namespace dampdisc {

namespace {

ComplexMatrix output(const ChannelPair& pair, int h, double x) {
  return output_state(pair.channel(h), InputState{x, 0.0}).mat();
}

Povm two_outcome(const ComplexMatrix& guess0) {
  return Povm{{guess0, ComplexMatrix::identity(guess0.dim()) - guess0}};
}

// Helstrom measurement for hypothesis weights w0, w1 (not necessarily
// normalized). Outcome 0 means "guess 0".
Povm weighted_helstrom(double w0, const ComplexMatrix& rho0, double w1, const ComplexMatrix& rho1) {
  const double total = w0 + w1;
  if (total <= 0.0) return two_outcome(ComplexMatrix::identity(rho0.dim()));
  const double p0 = std::max(0.0, w0 / total);
  return two_outcome(nonnegative_projector(p0 * rho0 - (1.0 - p0) * rho1));
}

// Both hypotheses prepare a fixed state and one Helstrom measurement decides.
Protocol single_measurement(std::array<ComplexMatrix, 2> states) {
  auto povm = std::make_shared<const Povm>(weighted_helstrom(0.5, states[0], 0.5, states[1]));
  auto rho = std::make_shared<const std::array<ComplexMatrix, 2>>(std::move(states));
  return [povm, rho](int h, Rng& rng) {
    OutcomeSample s;
    s.true_hypothesis = h;
    const int k = sample_measurement((*rho)[h], *povm, rng);
    s.outcomes = {k};
    s.guessed = k;
    return s;
  };
}

// Environment outcome e = 0 for |alpha+>, 1 for |alpha->, drawn from the
// joint system-environment state U (psi (x) |0>).
struct EnvironmentStage {
  std::array<ComplexMatrix, 2> joint;  // per hypothesis, 4x4
  Povm env_povm;
  // branch[h][e]
  std::array<std::array<FeedbackBranch, 2>, 2> branch;
};

EnvironmentStage environment_stage(const ChannelPair& pair, double x, double alpha) {
  EnvironmentStage st;
  const PureState psi = InputState{x, 0.0}.state();
  const PureState env0 = PureState::basis(2, 0);
  for (int h = 0; h < 2; ++h) {
    const ComplexMatrix u = dilation_unitary(pair.channel(h));
    const ComplexMatrix in = tensor(psi, env0).projector();
    st.joint[h] = u * in * u.adjoint();
    const FeedbackConditionalStates c = feedback_conditional_states(pair.channel(h), x, alpha);
    st.branch[h] = {c.plus, c.minus};
  }
  const PureState plus({std::cos(alpha), std::sin(alpha)});
  const PureState minus({-std::sin(alpha), std::cos(alpha)});
  const ComplexMatrix id = ComplexMatrix::identity(2);
  st.env_povm = Povm{{tensor(id, plus.projector()), tensor(id, minus.projector())}};
  return st;
}

Protocol feedback_protocol(const ChannelPair& pair, double x, double alpha) {
  auto st = std::make_shared<const EnvironmentStage>(environment_stage(pair, x, alpha));
  // Per environment outcome: fixed guess when the outcome carries no state
  // information, otherwise the equal-prior Helstrom measurement.
  auto system_povm = std::make_shared<std::array<Povm, 2>>();
  for (int e = 0; e < 2; ++e) {
    const FeedbackBranch& b0 = st->branch[0][e];
    const FeedbackBranch& b1 = st->branch[1][e];
    const int fixed = feedback_branch_guess(b0, b1);
    if (fixed >= 0) {
      (*system_povm)[e] = two_outcome(fixed == 1 ? ComplexMatrix::zero(2) : ComplexMatrix::identity(2));
    } else {
      (*system_povm)[e] = weighted_helstrom(0.5, b0.state.projector(), 0.5, b1.state.projector());
    }
  }
  std::shared_ptr<const std::array<Povm, 2>> povms = system_povm;
  return [st, povms](int h, Rng& rng) {
    OutcomeSample s;
    s.true_hypothesis = h;
    const int e = sample_measurement(st->joint[h], st->env_povm, rng);
    const FeedbackBranch& mine = st->branch[h][e];
    const ComplexMatrix sys = mine.null ? ComplexMatrix::diagonal({1.0, 0.0}) : mine.state.projector();
    const int k = sample_measurement(sys, (*povms)[e], rng);
    s.outcomes = {e, k};
    s.guessed = k;
    return s;
  };
}

// First copy measured with `first`, second copy with the Helstrom
// measurement for the weights that outcome leaves behind.
Protocol two_step(std::array<ComplexMatrix, 2> rho, Povm first, std::array<Povm, 2> second) {
  auto r = std::make_shared<const std::array<ComplexMatrix, 2>>(std::move(rho));
  auto f = std::make_shared<const Povm>(std::move(first));
  auto g = std::make_shared<const std::array<Povm, 2>>(std::move(second));
  return [r, f, g](int h, Rng& rng) {
    OutcomeSample s;
    s.true_hypothesis = h;
    const int k1 = sample_measurement((*r)[h], *f, rng);
    const int k2 = sample_measurement((*r)[h], (*g)[k1], rng);
    s.outcomes = {k1, k2};
    s.guessed = k2;
    return s;
  };
}

Protocol forward_protocol(const ChannelPair& pair, double x) {
  const ComplexMatrix r0 = output(pair, 0, x);
  const ComplexMatrix r1 = output(pair, 1, x);
  const EigenDecomposition eig = hermitian_eig(r0 - r1);
  const PosteriorWeights w = posterior_weights(pair, x);
  return two_step({r0, r1},
                  Povm{{eig.eigenvectors[0].projector(), eig.eigenvectors[1].projector()}},
                  {weighted_helstrom(w.p0, r0, w.q0, r1), weighted_helstrom(w.q1, r0, w.p1, r1)});
}

Protocol backward_protocol(const ChannelPair& pair, double x) {
  const ComplexMatrix r0 = output(pair, 0, x);
  const ComplexMatrix r1 = output(pair, 1, x);
  const BackwardResult b = backward_adaptive(pair, x);
  const BackwardWeights& w = b.weights;
  return two_step({r0, r1}, b.first.povm(),
                  {weighted_helstrom(w.r0, r0, w.s0, r1), weighted_helstrom(w.s1, r0, w.r1, r1)});
}

Protocol adaptive_feedback_protocol(const ChannelPair& pair) {
  constexpr double kAlpha = std::numbers::pi / 4.0;
  auto st = std::make_shared<const EnvironmentStage>(environment_stage(pair, 1.0, kAlpha));

  struct Plan {
    std::array<Povm, 2> first;                   // by e1
    std::array<std::array<std::array<Povm, 2>, 2>, 2> second;  // by e1, e2, k
  };
  auto plan = std::make_shared<Plan>();
  for (int e1 = 0; e1 < 2; ++e1) {
    const ComplexMatrix s0 = st->branch[0][e1].state.projector();
    const ComplexMatrix s1 = st->branch[1][e1].state.projector();
    const EigenDecomposition eig = hermitian_eig(s0 - s1);
    plan->first[e1] = Povm{{eig.eigenvectors[0].projector(), eig.eigenvectors[1].projector()}};
    for (int e2 = 0; e2 < 2; ++e2) {
      const double a0 = std::pow(st->branch[0][e1].norm * st->branch[0][e2].norm, 2);
      const double a1 = std::pow(st->branch[1][e1].norm * st->branch[1][e2].norm, 2);
      for (int k = 0; k < 2; ++k) {
        const ComplexMatrix& ek = plan->first[e1].effects[k];
        plan->second[e1][e2][k] =
            weighted_helstrom(a0 * trace_product_real(s0, ek), st->branch[0][e2].state.projector(),
                              a1 * trace_product_real(s1, ek), st->branch[1][e2].state.projector());
      }
    }
  }
  std::shared_ptr<const Plan> fixed = plan;
  return [st, fixed](int h, Rng& rng) {
    OutcomeSample s;
    s.true_hypothesis = h;
    const int e1 = sample_measurement(st->joint[h], st->env_povm, rng);
    const int e2 = sample_measurement(st->joint[h], st->env_povm, rng);
    const int k1 = sample_measurement(st->branch[h][e1].state.projector(), fixed->first[e1], rng);
    const int k2 =
        sample_measurement(st->branch[h][e2].state.projector(), fixed->second[e1][e2][k1], rng);
    s.outcomes = {e1, e2, k1, k2};
    s.guessed = k2;
    return s;
  };
}

}  // namespace

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::OneShot: return "one-shot";
    case StrategyKind::SideEnt: return "side-ent";
    case StrategyKind::Feedback: return "feedback";
    case StrategyKind::TwoShotEntangled: return "two-shot-entangled";
    case StrategyKind::TwoShotProduct: return "two-shot-product";
    case StrategyKind::AdaptiveForward: return "adaptive";
    case StrategyKind::AdaptiveFeedback: return "adaptive-fb";
    case StrategyKind::Backward: return "backward";
    case StrategyKind::Sequential: return "sequential";
  }
  return "unknown";
}

double analytic_psucc(const StrategyDescriptor& d) {
  const ChannelPair pair(d.eta0, d.eta1);
  switch (d.kind) {
    case StrategyKind::OneShot: return one_shot_psucc_numeric(pair, d.x);
    case StrategyKind::SideEnt: return side_ent_psucc(pair, d.y);
    case StrategyKind::Feedback: return feedback_psucc(pair, d.x, d.alpha);
    case StrategyKind::TwoShotEntangled: return two_shot_entangled_psucc(pair, d.variant, d.x);
    case StrategyKind::TwoShotProduct: return two_shot_product_psucc(pair, d.x);
    case StrategyKind::AdaptiveForward: return adaptive_forward_psucc(pair, d.x);
    case StrategyKind::AdaptiveFeedback: return adaptive_feedback_psucc(pair);
    case StrategyKind::Backward: return backward_adaptive_psucc(pair, d.x);
    case StrategyKind::Sequential: return sequential_two_shot_psucc(pair, d.x);
  }
  throw NumericError("analytic_psucc: unknown strategy");
}

Protocol make_protocol(const StrategyDescriptor& d) {
  const ChannelPair pair(d.eta0, d.eta1);
  switch (d.kind) {
    case StrategyKind::OneShot:
      return single_measurement({output(pair, 0, d.x), output(pair, 1, d.x)});
    case StrategyKind::SideEnt: {
      const SideEntangledInput in{d.y};
      return single_measurement({side_entangled_output(pair.channel(0), in).mat(),
                                 side_entangled_output(pair.channel(1), in).mat()});
    }
    case StrategyKind::Feedback:
      return feedback_protocol(pair, d.x, d.alpha);
    case StrategyKind::TwoShotEntangled:
      return single_measurement({two_shot_entangled_output(pair.channel(0), d.variant, d.x).mat(),
                                 two_shot_entangled_output(pair.channel(1), d.variant, d.x).mat()});
    case StrategyKind::TwoShotProduct: {
      const ComplexMatrix r0 = output(pair, 0, d.x);
      const ComplexMatrix r1 = output(pair, 1, d.x);
      return single_measurement({tensor(r0, r0), tensor(r1, r1)});
    }
    case StrategyKind::AdaptiveForward:
      return forward_protocol(pair, d.x);
    case StrategyKind::AdaptiveFeedback:
      return adaptive_feedback_protocol(pair);
    case StrategyKind::Backward:
      return backward_protocol(pair, d.x);
    case StrategyKind::Sequential: {
      const DensityMatrix once0(output(pair, 0, d.x));
      const DensityMatrix once1(output(pair, 1, d.x));
      return single_measurement(
          {apply(pair.channel(0), once0).mat(), apply(pair.channel(1), once1).mat()});
    }
  }
  throw NumericError("make_protocol: unknown strategy");
}

McEstimate monte_carlo_psucc(const StrategyDescriptor& d, std::int64_t trials, std::uint64_t seed) {
  return monte_carlo_psucc(make_protocol(d), trials, seed);
}

}  // namespace dampdisc
