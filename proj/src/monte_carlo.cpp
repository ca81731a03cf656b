#include "dampdisc/monte_carlo.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include <omp.h>

namespace dampdisc {

namespace {

std::int64_t run_chunk(const Protocol& protocol, std::int64_t chunk, std::int64_t trials,
                       std::uint64_t seed) {
  const std::int64_t begin = chunk * kMonteCarloChunk;
  const std::int64_t end = std::min(trials, begin + kMonteCarloChunk);
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(chunk)));
  std::int64_t correct = 0;
  for (std::int64_t t = begin; t < end; ++t) {
    const int h = rng.bit();
    if (protocol(h, rng).correct()) ++correct;
  }
  return correct;
}

McEstimate summarize(std::int64_t correct, std::int64_t trials) {
  McEstimate r;
  r.trials = trials;
  r.correct = correct;
  r.estimate = static_cast<double>(correct) / static_cast<double>(trials);
  r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(trials));
  return r;
}

void require_trials(std::int64_t trials) {
  if (trials < 1) throw NumericError("Monte Carlo needs at least one trial");
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

int sample_index(std::span<const double> probs, Rng& rng) {
  double total = 0.0;
  for (double p : probs) total += p;
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "outcome probabilities sum to " << total << ", expected 1";
    throw NumericError(os.str());
  }
  const double u = rng.uniform() * total;
  double acc = 0.0;
  int last_nonzero = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    last_nonzero = static_cast<int>(k);
    acc += probs[k];
    if (u < acc) return static_cast<int>(k);
  }
  return last_nonzero;
}

int sample_measurement(const ComplexMatrix& rho, const Povm& povm, Rng& rng) {
  std::array<double, 8> buf{};
  std::vector<double> heap;
  std::span<double> probs;
  if (povm.effects.size() <= buf.size()) {
    probs = std::span<double>(buf.data(), povm.effects.size());
  } else {
    heap.resize(povm.effects.size());
    probs = heap;
  }
  for (std::size_t k = 0; k < povm.effects.size(); ++k) {
    probs[k] = std::max(0.0, (rho * povm.effects[k]).trace().real());
  }
  return sample_index(probs, rng);
}

McEstimate monte_carlo_psucc_serial(const Protocol& protocol, std::int64_t trials,
                                    std::uint64_t seed) {
  require_trials(trials);
  const std::int64_t chunks = (trials + kMonteCarloChunk - 1) / kMonteCarloChunk;
  std::int64_t correct = 0;
  for (std::int64_t c = 0; c < chunks; ++c) correct += run_chunk(protocol, c, trials, seed);
  return summarize(correct, trials);
}

McEstimate monte_carlo_psucc(const Protocol& protocol, std::int64_t trials, std::uint64_t seed) {
  require_trials(trials);
  const std::int64_t chunks = (trials + kMonteCarloChunk - 1) / kMonteCarloChunk;
  std::int64_t correct = 0;
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) reduction(+ : correct)
  for (std::int64_t c = 0; c < chunks; ++c) {
    try {
      correct += run_chunk(protocol, c, trials, seed);
    } catch (...) {
#pragma omp critical(dampdisc_mc_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return summarize(correct, trials);
}

}  // namespace dampdisc
