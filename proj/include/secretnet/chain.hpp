#pragma once

// One-dimensional relay chain: n biased links between A_0 and A_n. Every
// intermediate node announces the XOR of its two bits, A_n recovers a_1, and
// the end points run the optimal conversion conditioned on the announcements.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "secretnet/common.hpp"
#include "secretnet/rng.hpp"

namespace secretnet::chain {

struct ChainSpec {
  int n;
  double p;

  ChainSpec(int links, double bias) : n(links), p(bias) {
    require(links >= 1, "a chain needs at least one link");
    require(std::isfinite(bias) && bias >= 0.0 && bias <= 0.5, "chain bias must lie in [0, 1/2]");
  }
};

struct SimulationResult {
  double frequency;
  double standard_error;
  std::uint64_t successes;
  std::uint64_t trials;
};

namespace detail {

// log C(n, k)
inline double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// C(n, k) p^(n-k) (1-p)^k, exact products for small n, logarithms otherwise.
inline double binomial_term(int n, int k, double p) {
  const double q = 1.0 - p;
  if (n <= 60) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c * std::pow(p, n - k) * std::pow(q, k);
  }
  if (p == 0.0) return 0.0;  // n - k >= 1 whenever this is called
  return std::exp(log_choose(n, k) + (n - k) * std::log(p) + k * std::log(q));
}

}  // namespace detail

/// p_n = sum over a in {0,1}^n of min(P(a), P(complement a)), in O(n):
/// 2 * sum_{k < n/2} C(n,k) p^(n-k) (1-p)^k, plus the middle term once for even n.
inline double exact_success_probability(const ChainSpec& spec) {
  const int n = spec.n;
  double total = 0.0;
  for (int k = 0; 2 * k < n; ++k) total += 2.0 * detail::binomial_term(n, k, spec.p);
  if (n % 2 == 0) total += detail::binomial_term(n, n / 2, spec.p);
  return std::min(total, 1.0);
}

/// (2 sqrt(p(1-p)))^n
inline double success_upper_bound(const ChainSpec& spec) {
  return std::pow(2.0 * std::sqrt(spec.p * (1.0 - spec.p)), spec.n);
}

/// Convert every link separately and relay along the chain: (2p)^n.
inline double naive_success_probability(const ChainSpec& spec) { return std::pow(2.0 * spec.p, spec.n); }

/// Samples the protocol. Trial t uses stream t of the seed, so the result is
/// identical for any thread count.
inline SimulationResult simulate(const ChainSpec& spec, std::uint64_t trials, std::uint64_t seed,
                                 unsigned threads = 1) {
  require(trials >= 1, "simulation needs at least one trial");
  const CounterRng master(seed, 0);
  const int n = spec.n;
  const double p = spec.p;

  std::vector<std::uint8_t> outcome(trials, 0);
  for_each_trial(trials, threads, [&](std::size_t t) {
    CounterRng rng = master.split(t);
    std::vector<int> bits(n);
    for (int i = 0; i < n; ++i) bits[i] = rng.uniform() < p ? 1 : 0;
    // Public transcript z_i = a_i ^ a_{i+1}. The candidates consistent with it
    // are the vector with a_1 = 0 and its complement.
    int candidate_bit = 0;
    int candidate_weight = 0;
    for (int i = 0; i + 1 < n; ++i) {
      candidate_bit ^= bits[i] ^ bits[i + 1];
      candidate_weight += candidate_bit;
    }
    const double p0 = std::pow(p, candidate_weight) * std::pow(1.0 - p, n - candidate_weight);
    const double p1 = std::pow(p, n - candidate_weight) * std::pow(1.0 - p, candidate_weight);
    const double keep = 2.0 * std::min(p0, p1) / (p0 + p1);
    outcome[t] = rng.uniform() < keep ? 1 : 0;
  });

  std::uint64_t successes = 0;
  for (auto o : outcome) successes += o;
  const double f = static_cast<double>(successes) / static_cast<double>(trials);
  return {f, std::sqrt(f * (1.0 - f) / static_cast<double>(trials)), successes, trials};
}

}  // namespace secretnet::chain
