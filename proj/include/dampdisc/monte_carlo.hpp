#pragma once

// Monte Carlo simulation of discrimination protocols.
//
// Trials are split into fixed-size chunks; chunk k draws from a generator
// seeded with derive_seed(seed, k). The estimate therefore depends only on
// (protocol, trials, seed), never on how many threads run the chunks.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "dampdisc/discrimination.hpp"

namespace dampdisc {

inline constexpr std::int64_t kMonteCarloChunk = 4096;

/// splitmix64 of (base, stream).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return std::generate_canonical<double, 53>(engine_); }
  int bit() { return static_cast<int>(engine_() >> 63); }

 private:
  std::mt19937_64 engine_;
};

/// Draws k with probability probs[k]; throws NumericError when the
/// probabilities do not sum to 1 within 1e-9.
int sample_index(std::span<const double> probs, Rng& rng);

/// Outcome k of measuring `rho` with `povm`, drawn with probability Tr[rho E_k].
int sample_measurement(const ComplexMatrix& rho, const Povm& povm, Rng& rng);

/// One simulated run of a protocol.
struct OutcomeSample {
  int true_hypothesis = 0;
  std::vector<int> outcomes;
  int guessed = 0;

  bool correct() const { return guessed == true_hypothesis; }
};

/// A protocol simulates one run given the hypothesis that actually holds.
/// Implementations must be safe to call concurrently.
using Protocol = std::function<OutcomeSample(int true_hypothesis, Rng& rng)>;

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;  // sqrt(e (1 - e) / trials)
  std::int64_t trials = 0;
  std::int64_t correct = 0;
};

/// Fraction of correct guesses with the hypothesis drawn uniformly per
/// trial. OpenMP-parallel over chunks; throws NumericError if trials < 1.
McEstimate monte_carlo_psucc(const Protocol& protocol, std::int64_t trials, std::uint64_t seed);

/// Single-threaded reference with the identical chunk/seed layout.
McEstimate monte_carlo_psucc_serial(const Protocol& protocol, std::int64_t trials,
                                    std::uint64_t seed);

}  // namespace dampdisc
