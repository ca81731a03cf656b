#include "dampdisc/strategies.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dampdisc/optimize.hpp"

namespace dampdisc {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr int kTwoShotGrid = 513;
// Every backward evaluation is a full POVM search, so the outer x scan is coarse.
constexpr int kBackwardGrid = 33;

// Squared norm below which a conditional state counts as a null projection.
constexpr double kNullBranchNorm2 = 1e-24;
// sqrt(1 - |<a|b>|^2) at or below this counts as the same state.
constexpr double kSameStateGap = 1e-12;

ComplexMatrix output(const ChannelPair& pair, int h, double x) {
  return output_state(pair.channel(h), InputState{x, 0.0}).mat();
}

StrategyResult with_x(double psucc, double x) {
  StrategyResult r;
  r.psucc = psucc;
  r.params["x"] = x;
  return r;
}

}  // namespace

ChannelPair::ChannelPair(double eta0, double eta1) : eta0_(eta0), eta1_(eta1) {
  // Validates both.
  static_cast<void>(DampingChannel{eta0});
  static_cast<void>(DampingChannel{eta1});
  if (eta0_ < eta1_) {
    std::swap(eta0_, eta1_);
    swapped_ = true;
  }
}

double ChannelPair::gamma() const { return std::cos(eta1_) + std::cos(eta0_); }

// ---------------------------------------------------------------- one shot

double one_shot_psucc(const ChannelPair& pair, double x) {
  const double g = pair.gamma();
  const double inner = x * (1.0 - x * (1.0 - g * g));
  return 0.5 * (1.0 + (std::cos(pair.eta1()) - std::cos(pair.eta0())) * std::sqrt(std::max(0.0, inner)));
}

double one_shot_psucc_numeric(const ChannelPair& pair, double x) {
  return helstrom_psucc_equal_priors(output(pair, 0, x), output(pair, 1, x));
}

StrategyResult one_shot_optimal(const ChannelPair& pair) {
  const double g = pair.gamma();
  const double d = std::cos(pair.eta1()) - std::cos(pair.eta0());
  double x;
  double p;
  if (pair.degenerate()) {
    x = 1.0;
    p = 0.5;
  } else if (g < 1.0 / std::numbers::sqrt2) {
    x = 1.0 / (2.0 * (1.0 - g * g));
    p = 0.25 * (2.0 + d / std::sqrt(1.0 - g * g));
  } else {
    x = 1.0;
    const double s0 = std::sin(pair.eta0());
    const double c1 = std::cos(pair.eta1());
    p = 0.5 * (s0 * s0 + c1 * c1);
  }
  StrategyResult r = with_x(p, x);
  const HelstromResult h = helstrom(DensityMatrix(output(pair, 0, x)), DensityMatrix(output(pair, 1, x)));
  r.measurement = {{"guess 0", h.projector_plus}, {"guess 1", h.projector_minus}};
  return r;
}

StrategyResult one_shot_optimal_numeric(const ChannelPair& pair) {
  if (pair.degenerate()) return with_x(0.5, 1.0);
  const ScalarMax m = maximize_scalar([&](double x) { return one_shot_psucc_numeric(pair, x); }, 0.0, 1.0);
  return with_x(m.value, m.argmax);
}

std::vector<PolarCurvePoint> damping_polar_curve(double eta1, int n_points) {
  if (n_points < 2) throw NumericError("damping_polar_curve needs at least two points");
  const DampingChannel ch(eta1);
  const ComplexMatrix ground = ComplexMatrix::diagonal({1.0, 0.0});
  std::vector<PolarCurvePoint> out;
  out.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double theta = i == n_points - 1 ? kHalfPi : kHalfPi * i / (n_points - 1);
    const double s = std::sin(theta);
    const double x = std::min(1.0, s * s);
    const ComplexMatrix rho1 = output_state(ch, InputState{x, 0.0}).mat();
    out.push_back({theta, trace_norm(ground - rho1)});
  }
  return out;
}

// --------------------------------------------------------- side entanglement

double side_ent_psucc(const ChannelPair& pair, double y) {
  const SideEntangledInput in{y};
  return helstrom_psucc_equal_priors(side_entangled_output(pair.channel(0), in).mat(),
                                     side_entangled_output(pair.channel(1), in).mat());
}

double side_ent_trace_norm_closed_form(const ChannelPair& pair, double y) {
  const double g = pair.gamma();
  const double d = std::cos(pair.eta1()) - std::cos(pair.eta0());
  const double u = 1.0 - y;
  return d * (u * g + std::sqrt(std::max(0.0, u * (4.0 * y + u * g * g))));
}

double side_ent_optimal_y(const ChannelPair& pair) {
  const double g = pair.gamma();
  if (g >= 1.0) return 0.0;
  return (g - 1.0) / (g - 2.0);
}

StrategyResult side_ent_optimal(const ChannelPair& pair) {
  const double y = side_ent_optimal_y(pair);
  StrategyResult r;
  r.psucc = side_ent_psucc(pair, y);
  r.params["y"] = y;
  return r;
}

StrategyResult side_ent_optimal_numeric(const ChannelPair& pair) {
  const ScalarMax m = maximize_scalar([&](double y) { return side_ent_psucc(pair, y); }, 0.0, 1.0);
  StrategyResult r;
  r.psucc = m.value;
  r.params["y"] = m.argmax;
  return r;
}

// ---------------------------------------------------------------- feedback

FeedbackConditionalStates feedback_conditional_states(const DampingChannel& ch, double x,
                                                      double alpha) {
  if (!(x >= 0.0 && x <= 1.0)) throw NumericError("feedback: x must lie in [0, 1]");
  if (!(alpha >= 0.0 && alpha <= kHalfPi)) throw NumericError("feedback: alpha must lie in [0, pi/2]");

  // U|psi>|0> = sqrt(1-x)|00> + sqrt(x)(-i sin|01> + cos|10>), system first.
  const double s = std::sin(ch.eta());
  const double c = std::cos(ch.eta());
  const double a0 = std::sqrt(1.0 - x);
  const double a1 = std::sqrt(x);
  const Complex mi(0.0, -1.0);
  const double ca = std::cos(alpha);
  const double sa = std::sin(alpha);

  auto branch = [](Complex v0, Complex v1) {
    FeedbackBranch b;
    const double n2 = std::norm(v0) + std::norm(v1);
    b.norm = std::sqrt(n2);
    if (n2 < kNullBranchNorm2) {
      b.null = true;
      return b;
    }
    b.state = PureState::normalized({v0, v1});
    return b;
  };

  FeedbackConditionalStates out;
  out.plus = branch(a0 * ca + mi * a1 * s * sa, a1 * c * ca);
  out.minus = branch(-a0 * sa + mi * a1 * s * ca, -a1 * c * sa);
  return out;
}

FeedbackTerms feedback_terms(const ChannelPair& pair, double x, double alpha) {
  const double s0 = std::sin(pair.eta0());
  const double s1 = std::sin(pair.eta1());
  const double c0 = std::cos(pair.eta0());
  const double c1 = std::cos(pair.eta1());
  const double c2a = std::cos(2.0 * alpha);
  FeedbackTerms t;
  t.chi = 0.5 - 0.5 * c2a * (1.0 - x * (s0 * s0 + s1 * s1));
  t.mu = 1.0 + (2.0 * x - 1.0) * c0 * c1 + s0 * s1;
  t.nu = c2a * ((2.0 * x - 1.0) + c0 * c1 + (2.0 * x - 1.0) * s0 * s1);
  t.c0 = 0.5 - 0.5 * c2a * (1.0 - 2.0 * x * s0 * s0);
  t.c1 = 0.5 - 0.5 * c2a * (1.0 - 2.0 * x * s1 * s1);
  return t;
}

int feedback_branch_guess(const FeedbackBranch& b0, const FeedbackBranch& b1) {
  if (b0.null && b1.null) return 0;
  const bool uninformative =
      b0.null || b1.null || 2.0 * (pure_state_psucc(b0.state, b1.state) - 0.5) <= kSameStateGap;
  if (!uninformative) return -1;
  return b1.norm > b0.norm ? 1 : 0;
}

double feedback_psucc(const ChannelPair& pair, double x, double alpha) {
  const FeedbackConditionalStates h0 = feedback_conditional_states(pair.channel(0), x, alpha);
  const FeedbackConditionalStates h1 = feedback_conditional_states(pair.channel(1), x, alpha);
  double total = 0.0;
  for (const auto& [b0, b1] : {std::pair{&h0.plus, &h1.plus}, std::pair{&h0.minus, &h1.minus}}) {
    const double n0 = b0->norm * b0->norm;
    const double n1 = b1->norm * b1->norm;
    switch (feedback_branch_guess(*b0, *b1)) {
      case 0: total += 0.5 * n0; break;
      case 1: total += 0.5 * n1; break;
      default: total += 0.5 * (n0 + n1) * pure_state_psucc(b0->state, b1->state);
    }
  }
  return total;
}

double feedback_psucc_closed_form(const ChannelPair& pair, double x, double alpha) {
  const FeedbackTerms t = feedback_terms(pair, x, alpha);
  const double den_a = t.c0 * t.c1;
  const double den_b = (1.0 - t.c0) * (1.0 - t.c1);
  if (den_a <= 0.0 || den_b <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double sd = std::sin(0.5 * (pair.eta0() - pair.eta1()));
  const double ra = std::sqrt(std::max(0.0, x * (t.mu + t.nu) / den_a));
  const double rb = std::sqrt(std::max(0.0, x * (t.mu - t.nu) / den_b));
  return 0.5 * t.chi * (1.0 + std::sin(alpha) * sd * ra) +
         0.5 * (1.0 - t.chi) * (1.0 + std::cos(alpha) * sd * rb);
}

StrategyResult feedback_optimal(const ChannelPair& pair) {
  StrategyResult r;
  r.psucc = 0.5 * (1.0 + std::sin(pair.eta0() - pair.eta1()));
  r.params["x"] = 1.0;
  r.params["alpha"] = kQuarterPi;
  return r;
}

StrategyResult feedback_optimal_numeric(const ChannelPair& pair) {
  StrategyResult r;
  if (pair.degenerate()) {
    r.psucc = 0.5;
    r.params["x"] = 1.0;
    r.params["alpha"] = 0.0;
    return r;
  }
  const PlanarMax m = maximize_2d([&](double x, double a) { return feedback_psucc(pair, x, a); },
                                  0.0, 1.0, 0.0, kHalfPi);
  r.psucc = m.value;
  r.params["x"] = m.x;
  r.params["alpha"] = m.y;
  return r;
}

// ------------------------------------------------------------- two copies

double two_shot_entangled_psucc(const ChannelPair& pair, TwoShotVariant variant, double x) {
  return helstrom_psucc_equal_priors(two_shot_entangled_output(pair.channel(0), variant, x).mat(),
                                     two_shot_entangled_output(pair.channel(1), variant, x).mat());
}

double two_shot_odd_closed_form(const ChannelPair& pair) {
  const double s0 = std::sin(pair.eta0());
  const double s1 = std::sin(pair.eta1());
  return 0.5 * (1.0 + s0 * s0 - s1 * s1);
}

double two_shot_even_closed_form(const ChannelPair& pair, double x) {
  const double a = std::cos(2.0 * pair.eta0());
  const double b = std::cos(2.0 * pair.eta1());
  return 0.5 * (1.0 + 0.25 * x * std::abs(a * a - b * b) + 0.5 * std::sqrt(x) * std::abs(a - b));
}

namespace {

ComplexMatrix two_copy_difference(const ChannelPair& pair, double x) {
  const ComplexMatrix r0 = output(pair, 0, x);
  const ComplexMatrix r1 = output(pair, 1, x);
  return tensor(r0, r0) - tensor(r1, r1);
}

}  // namespace

double two_shot_product_psucc(const ChannelPair& pair, double x) {
  return 0.5 * (1.0 + 0.5 * trace_norm(two_copy_difference(pair, x)));
}

bool two_shot_helstrom_is_local(const ChannelPair& pair, double x) {
  const EigenDecomposition eig = hermitian_eig(two_copy_difference(pair, x));
  for (const PureState& v : eig.eigenvectors) {
    if (!is_product_state(v)) return false;
  }
  return true;
}

TwoShotProductResult two_shot_product_optimal(const ChannelPair& pair) {
  TwoShotProductResult out;
  double x = 1.0;
  double p = 0.5;
  if (!pair.degenerate()) {
    const ScalarMax m = maximize_scalar([&](double v) { return two_shot_product_psucc(pair, v); },
                                        0.0, 1.0, kTwoShotGrid);
    x = m.argmax;
    p = m.value;
  }
  out.result = with_x(p, x);
  out.local_measurement = two_shot_helstrom_is_local(pair, x);
  const EigenDecomposition eig = hermitian_eig(two_copy_difference(pair, x));
  for (std::size_t i = 0; i < eig.eigenvectors.size(); ++i) {
    out.result.measurement.push_back(
        {eig.eigenvalues[i] > -kZeroEigenTol ? "guess 0" : "guess 1", eig.eigenvectors[i].projector()});
  }
  return out;
}

// ------------------------------------------------------ adaptive (forward)

PosteriorWeights posterior_weights(const ChannelPair& pair, double x) {
  const ComplexMatrix r0 = output(pair, 0, x);
  const ComplexMatrix r1 = output(pair, 1, x);
  const EigenDecomposition eig = hermitian_eig(r0 - r1);
  const ComplexMatrix v0 = eig.eigenvectors[0].projector();
  const ComplexMatrix v1 = eig.eigenvectors[1].projector();
  PosteriorWeights w;
  w.p0 = (r0 * v0).trace().real();
  w.q0 = (r1 * v0).trace().real();
  w.p1 = (r1 * v1).trace().real();
  w.q1 = (r0 * v1).trace().real();
  return w;
}

double adaptive_forward_psucc(const ChannelPair& pair, double x) {
  const ComplexMatrix r0 = output(pair, 0, x);
  const ComplexMatrix r1 = output(pair, 1, x);
  const PosteriorWeights w = posterior_weights(pair, x);
  // (p0+q0)/2 * 1/2 {1 + ||(p0 r0 - q0 r1)/(p0+q0)||} and its v1 counterpart.
  return 0.5 * weighted_guess_value(w.p0, r0, w.q0, r1) + 0.5 * weighted_guess_value(w.q1, r0, w.p1, r1);
}

StrategyResult adaptive_forward_optimal(const ChannelPair& pair) {
  if (pair.degenerate()) return with_x(0.5, 1.0);
  const ScalarMax m = maximize_scalar([&](double x) { return adaptive_forward_psucc(pair, x); }, 0.0, 1.0);
  StrategyResult r = with_x(m.value, m.argmax);
  const EigenDecomposition eig = hermitian_eig(output(pair, 0, m.argmax) - output(pair, 1, m.argmax));
  r.measurement = {{"first copy: guess 0", eig.eigenvectors[0].projector()},
                   {"first copy: guess 1", eig.eigenvectors[1].projector()}};
  return r;
}

double adaptive_two_step_value(std::span<const ComplexMatrix> first_effects, double a0,
                               double a1, const ComplexMatrix& sigma0, const ComplexMatrix& sigma1,
                               const ComplexMatrix& tau0, const ComplexMatrix& tau1) {
  double total = 0.0;
  for (const ComplexMatrix& e : first_effects) {
    const double w0 = a0 * (sigma0 * e).trace().real();
    const double w1 = a1 * (sigma1 * e).trace().real();
    total += weighted_guess_value(w0, tau0, w1, tau1);
  }
  return total;
}

// -------------------------------------------- adaptive with environment feedback

double adaptive_feedback_psucc(const ChannelPair& pair) {
  const FeedbackConditionalStates h0 = feedback_conditional_states(pair.channel(0), 1.0, kQuarterPi);
  const FeedbackConditionalStates h1 = feedback_conditional_states(pair.channel(1), 1.0, kQuarterPi);
  const std::array<const FeedbackBranch*, 2> b0{&h0.plus, &h0.minus};
  const std::array<const FeedbackBranch*, 2> b1{&h1.plus, &h1.minus};

  double total = 0.0;
  for (int e1 = 0; e1 < 2; ++e1) {
    const ComplexMatrix sigma0 = b0[e1]->state.projector();
    const ComplexMatrix sigma1 = b1[e1]->state.projector();
    const EigenDecomposition eig = hermitian_eig(sigma0 - sigma1);
    const std::array<ComplexMatrix, 2> first{eig.eigenvectors[0].projector(),
                                             eig.eigenvectors[1].projector()};
    for (int e2 = 0; e2 < 2; ++e2) {
      const double a0 = 0.5 * std::pow(b0[e1]->norm * b0[e2]->norm, 2);
      const double a1 = 0.5 * std::pow(b1[e1]->norm * b1[e2]->norm, 2);
      total += adaptive_two_step_value(first, a0, a1, sigma0, sigma1, b0[e2]->state.projector(),
                                       b1[e2]->state.projector());
    }
  }
  return total;
}

double adaptive_feedback_closed_form(const ChannelPair& pair) {
  const double d = pair.eta0() - pair.eta1();
  const double c = std::cos(d);
  return 0.5 * (1.0 + std::sin(d) * std::sqrt(1.0 + c * c));
}

// --------------------------------------------------- adaptive (backward)

BackwardWeights backward_weights(const ComplexMatrix& rho0, const ComplexMatrix& rho1,
                                 const BinaryPovm& first) {
  BackwardWeights w;
  w.r0 = trace_product_real(rho0, first.effect);
  w.s0 = trace_product_real(rho1, first.effect);
  w.r1 = 1.0 - w.s0;
  w.s1 = 1.0 - w.r0;
  return w;
}

double backward_objective(const ComplexMatrix& rho0, const ComplexMatrix& rho1,
                          const BinaryPovm& first) {
  const BackwardWeights w = backward_weights(rho0, rho1, first);
  // Outcome M: rho0 with weight r0, rho1 with s0. Outcome I - M: rho0 with
  // s1 = Tr[rho0 (I-M)], rho1 with r1 = Tr[rho1 (I-M)].
  return 0.5 * weighted_guess_value(w.r0, rho0, w.s0, rho1) +
         0.5 * weighted_guess_value(w.s1, rho0, w.r1, rho1);
}

BackwardResult backward_adaptive(const ChannelPair& pair, double x) {
  const ComplexMatrix r0 = output(pair, 0, x);
  const ComplexMatrix r1 = output(pair, 1, x);
  const EigenDecomposition eig = hermitian_eig(r0 - r1);
  const BinaryPovm forward{eig.eigenvectors[0].projector()};
  const std::array<BinaryPovm, 2> seeds{forward, BinaryPovm{forward.complement()}};
  const PovmMax m = maximize_povm_2x2(
      [&](const BinaryPovm& povm) { return backward_objective(r0, r1, povm); }, seeds);
  BackwardResult out;
  out.psucc = m.value;
  out.first = m.povm;
  out.weights = backward_weights(r0, r1, m.povm);
  return out;
}

double backward_adaptive_psucc(const ChannelPair& pair, double x) {
  return backward_adaptive(pair, x).psucc;
}

StrategyResult backward_adaptive_optimal(const ChannelPair& pair) {
  if (pair.degenerate()) return with_x(0.5, 1.0);
  const ScalarMax m = maximize_scalar([&](double x) { return backward_adaptive_psucc(pair, x); },
                                      0.0, 1.0, kBackwardGrid, 1e-7);
  StrategyResult r = with_x(m.value, m.argmax);
  const BackwardResult b = backward_adaptive(pair, m.argmax);
  r.measurement = {{"first copy: M", b.first.effect}, {"first copy: I - M", b.first.complement()}};
  return r;
}

double fwd_bwd_difference(const ChannelPair& pair) {
  return adaptive_forward_optimal(pair).psucc - backward_adaptive_optimal(pair).psucc;
}

// -------------------------------------------------------------- sequential

double sequential_two_shot_psucc(const ChannelPair& pair, double x) {
  const DensityMatrix once0 = output_state(pair.channel(0), InputState{x, 0.0});
  const DensityMatrix once1 = output_state(pair.channel(1), InputState{x, 0.0});
  return helstrom_psucc_equal_priors(apply(pair.channel(0), once0).mat(),
                                     apply(pair.channel(1), once1).mat());
}

StrategyResult sequential_optimal(const ChannelPair& pair) {
  if (pair.degenerate()) return with_x(0.5, 1.0);
  const ScalarMax m = maximize_scalar([&](double x) { return sequential_two_shot_psucc(pair, x); }, 0.0, 1.0);
  return with_x(m.value, m.argmax);
}

}  // namespace dampdisc
