#pragma once

// Pure classical secret correlations shared by two parties, with Eve's
// variable factored out. A state is the distribution of the common symbol.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "secretnet/common.hpp"

namespace secretnet {

class SecretState {
 public:
  /// Throws ValidationError unless the entries are non-negative and sum to 1.
  explicit SecretState(std::vector<double> probs) : probs_(std::move(probs)) {
    require(!probs_.empty(), "secret state needs at least one outcome");
    double total = 0.0;
    for (double v : probs_) {
      require(std::isfinite(v) && v >= 0.0 && v <= 1.0, "probabilities must lie in [0, 1]");
      total += v;
    }
    require(std::abs(total - 1.0) <= kTolerance, "probabilities must sum to 1");
  }

  SecretState(std::initializer_list<double> probs) : SecretState(std::vector<double>(probs)) {}

  static SecretState uniform(std::size_t outcomes) {
    require(outcomes >= 1, "uniform state needs at least one outcome");
    return SecretState(std::vector<double>(outcomes, 1.0 / static_cast<double>(outcomes)));
  }

  /// The perfect secret bit (sbit).
  static SecretState sbit() { return SecretState({0.5, 0.5}); }

  [[nodiscard]] std::span<const double> probs() const noexcept { return probs_; }
  [[nodiscard]] std::size_t size() const noexcept { return probs_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return probs_.at(i); }

  /// Entries sorted in non-increasing order, zero-padded to `length`.
  [[nodiscard]] std::vector<double> sorted_descending(std::size_t length = 0) const {
    std::vector<double> out(probs_);
    std::sort(out.begin(), out.end(), std::greater<>());
    if (out.size() < length) out.resize(length, 0.0);
    return out;
  }

  friend bool operator==(const SecretState&, const SecretState&) = default;

 private:
  std::vector<double> probs_;
};

/// A perfectly correlated bit equal to 1 with probability p <= 1/2.
class BiasedLink {
 public:
  /// Values above 1/2 are relabeled to 1 - p.
  explicit BiasedLink(double p) {
    require(std::isfinite(p) && p >= 0.0 && p <= 1.0, "link bias must lie in [0, 1]");
    p_ = p > 0.5 ? 1.0 - p : p;
  }

  [[nodiscard]] double p() const noexcept { return p_; }

  /// Distribution over the shared bit value (index 0 -> bit 0).
  [[nodiscard]] SecretState state() const { return SecretState({1.0 - p_, p_}); }

  friend bool operator==(const BiasedLink&, const BiasedLink&) = default;

 private:
  double p_ = 0.5;
};

struct PosteriorBranch {
  int announcement;
  double weight;
  SecretState posterior;
};

struct ParallelLinkSuccess {
  double value;
  /// p > 1 - 1/sqrt(2): the OR-merge value saturates at 1 and is no longer
  /// claimed optimal.
  bool beyond_optimality_range;
};

/// True iff q majorizes p: every descending prefix sum of q dominates that of p.
inline bool majorizes(const SecretState& q, const SecretState& p) {
  const std::size_t n = std::max(q.size(), p.size());
  const auto qs = q.sorted_descending(n);
  const auto ps = p.sorted_descending(n);
  double q_prefix = 0.0;
  double p_prefix = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    q_prefix += qs[k];
    p_prefix += ps[k];
    if (q_prefix < p_prefix - kTolerance) return false;
  }
  return true;
}

/// Optimal probability of turning `from` into `to` with local operations and
/// public communication: min_k (1 - P_k(from)) / (1 - P_k(to)) over
/// descending prefix sums P_k, clamped to [0, 1].
///
/// Prefixes where the target tail is exhausted (denominator zero) impose no
/// constraint and are skipped.
inline double conversion_probability(const SecretState& from, const SecretState& to) {
  if (majorizes(to, from)) return 1.0;
  const std::size_t n = std::max(from.size(), to.size());
  const auto fs = from.sorted_descending(n);
  const auto ts = to.sorted_descending(n);
  double best = 1.0;
  double from_prefix = 0.0;
  double to_prefix = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    from_prefix += fs[k];
    to_prefix += ts[k];
    const double denominator = 1.0 - to_prefix;
    if (denominator <= kTolerance) continue;
    const double numerator = std::max(0.0, 1.0 - from_prefix);
    best = std::min(best, numerator / denominator);
  }
  return std::clamp(best, 0.0, 1.0);
}

/// Probability of distilling one sbit from `from`.
inline double sbit_probability(const SecretState& from) {
  require(from.size() >= 2, "a secret bit needs a state with at least two outcomes");
  return conversion_probability(from, SecretState::sbit());
}

inline double sbit_probability(const BiasedLink& link) { return sbit_probability(link.state()); }

/// Joint distribution of two independent states over the pair alphabet;
/// pair (i, j) sits at index i * b.size() + j.
inline SecretState product(const SecretState& a, const SecretState& b) {
  std::vector<double> out;
  out.reserve(a.size() * b.size());
  for (double x : a.probs())
    for (double y : b.probs()) out.push_back(x * y);
  // Products of normalized vectors can drift by a few ulps.
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& v : out) v /= total;
  return SecretState(std::move(out));
}

/// Relabel symbol i as labeling[i]; merged symbols have their probabilities summed.
inline SecretState coarse_grain(const SecretState& s, std::span<const std::size_t> labeling) {
  require(labeling.size() == s.size(), "labeling must assign a symbol to every outcome");
  const std::size_t width = *std::max_element(labeling.begin(), labeling.end()) + 1;
  std::vector<double> out(width, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) out[labeling[i]] += s[i];
  return SecretState(std::move(out));
}

/// Two parallel links with bias p merged by OR and converted: min(1, 2p(2 - p)).
inline ParallelLinkSuccess parallel_link_success(double p) {
  require(std::isfinite(p) && p >= 0.0 && p <= 0.5, "parallel link bias must lie in [0, 1/2]");
  const double boundary = 1.0 - 1.0 / std::sqrt(2.0);
  return {std::min(1.0, 2.0 * p * (2.0 - p)), p > boundary};
}

/// One-time pad relay across a middle node holding bits b1 (shared with A, bias
/// a.p()) and b2 (shared with C, bias b.p()). The middle node announces
/// z = b1 ^ b2; C flips its bit when z = 1. Returns the branches z = 0 and z = 1
/// with the posterior of A's bit.
///
/// A branch of zero weight (only possible when a bias is 0) gets the point
/// mass on bit 0 as posterior.
inline std::array<PosteriorBranch, 2> otp_compose(const BiasedLink& a, const BiasedLink& b) {
  const double p = a.p();
  const double q = b.p();
  auto branch = [](int z, double zero, double one) {
    const double weight = zero + one;
    if (weight <= 0.0) return PosteriorBranch{z, 0.0, SecretState({1.0, 0.0})};
    return PosteriorBranch{z, weight, SecretState({zero / weight, one / weight})};
  };
  return {branch(0, (1.0 - p) * (1.0 - q), p * q), branch(1, (1.0 - p) * q, p * (1.0 - q))};
}

/// Average sbit yield of the one-time pad relay followed by optimal conversion.
inline double otp_success(const BiasedLink& a, const BiasedLink& b) {
  double total = 0.0;
  for (const auto& br : otp_compose(a, b)) total += br.weight * sbit_probability(br.posterior);
  return total;
}

}  // namespace secretnet
