#pragma once

// Run-by-run simulation of the discrimination strategies.
//
// A protocol is built once from fixed parameters: every measurement it will
// use is precomputed, and a run only samples outcomes and applies the
// decision rule. The simulated success rate is then compared against the
// analytic value of the same strategy at the same parameters.

#include <cstdint>
#include <string>

#include "dampdisc/monte_carlo.hpp"
#include "dampdisc/strategies.hpp"

namespace dampdisc {

enum class StrategyKind {
  OneShot,
  SideEnt,
  Feedback,
  TwoShotEntangled,
  TwoShotProduct,
  AdaptiveForward,
  AdaptiveFeedback,
  Backward,
  Sequential,
};

struct StrategyDescriptor {
  StrategyKind kind = StrategyKind::OneShot;
  double eta0 = 0.0;
  double eta1 = 0.0;
  double x = 1.0;
  double y = 0.0;
  double alpha = 0.0;
  TwoShotVariant variant = TwoShotVariant::Odd;
};

std::string to_string(StrategyKind kind);

/// Success probability of the strategy at exactly the descriptor's
/// parameters (no optimization). AdaptiveFeedback ignores x and alpha.
double analytic_psucc(const StrategyDescriptor& d);

/// Simulates one run. The returned callable owns all precomputed state and
/// may be invoked concurrently.
Protocol make_protocol(const StrategyDescriptor& d);

McEstimate monte_carlo_psucc(const StrategyDescriptor& d, std::int64_t trials, std::uint64_t seed);

}  // namespace dampdisc
