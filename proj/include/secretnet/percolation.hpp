#pragma once

// Bond-percolation Monte Carlo on NetworkGraph: cluster sampling, left-right
// crossing frequencies, two-point connection, and threshold estimation from
// Newman-Ziff edge-insertion sweeps.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "secretnet/common.hpp"
#include "secretnet/lattice.hpp"
#include "secretnet/rng.hpp"
#include "secretnet/union_find.hpp"

namespace secretnet::lattice {

struct ClusterStats {
  std::vector<std::size_t> sizes;  // descending
  double largest_fraction = 0.0;
  bool spanning = false;
};

struct CrossingResult {
  double frequency = 0.0;
  double standard_error = 0.0;
  std::uint64_t crossings = 0;
  std::uint64_t trials = 0;
  double mean_largest_fraction = 0.0;
};

struct SweepPoint {
  int size;
  double p;
  double crossing;
};

struct ThresholdEstimate {
  double p_c_hat = 0.0;
  double half_width = 0.0;
  std::vector<int> sizes;
  std::uint64_t trials = 0;
  /// Crossing points of successive size pairs' curves, when they intersect.
  std::vector<std::pair<int, double>> size_crossings;
  std::vector<SweepPoint> sweep;
};

namespace detail {

inline double binomial_standard_error(double f, std::uint64_t n) {
  return std::sqrt(std::max(f * (1.0 - f), 0.0) / static_cast<double>(n));
}

// Two extra union-find slots: node_count is the left terminal, node_count + 1 the right.
inline DisjointSets with_terminals(const NetworkGraph& g) {
  DisjointSets sets(g.node_count() + 2);
  const std::size_t left = g.node_count();
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (g.tags()[i] & tag::left) sets.unite(left, i);
    if (g.tags()[i] & tag::right) sets.unite(left + 1, i);
  }
  return sets;
}

inline void require_resolved(const NetworkGraph& g) {
  require(g.fully_resolved(), "every edge needs an open probability before sampling");
}

inline void open_edges(const NetworkGraph& g, DisjointSets& sets, CounterRng& rng) {
  for (const auto& e : g.edges())
    if (rng.uniform() < *e.open_probability) sets.unite(e.u, e.v);
}

}  // namespace detail

/// One bond-percolation sample: every edge opens independently with its own probability.
inline ClusterStats sample_clusters(const NetworkGraph& g, CounterRng& rng) {
  detail::require_resolved(g);
  require(g.node_count() > 0, "cannot sample an empty graph");
  DisjointSets sets(g.node_count());
  detail::open_edges(g, sets, rng);

  ClusterStats stats;
  std::vector<std::size_t> count(g.node_count(), 0);
  std::vector<std::uint8_t> reach(g.node_count(), 0);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const std::size_t root = sets.find(i);
    ++count[root];
    reach[root] |= g.tags()[i];
  }
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (count[i] > 0) stats.sizes.push_back(count[i]);
    if ((reach[i] & tag::left) && (reach[i] & tag::right)) stats.spanning = true;
  }
  std::sort(stats.sizes.begin(), stats.sizes.end(), std::greater<>());
  stats.largest_fraction = static_cast<double>(stats.sizes.front()) / static_cast<double>(g.node_count());
  return stats;
}

inline ClusterStats sample_clusters(const NetworkGraph& g, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  return sample_clusters(g, rng);
}

/// Fraction of samples with an open left-right crossing. Trial t uses stream t.
inline CrossingResult crossing_probability(const NetworkGraph& g, std::uint64_t trials, std::uint64_t seed,
                                           unsigned threads = 1) {
  require(trials >= 1, "crossing estimate needs at least one trial");
  detail::require_resolved(g);
  require(!g.nodes_with(tag::left).empty() && !g.nodes_with(tag::right).empty(),
          "crossing needs tagged left and right boundaries");
  const CounterRng master(seed, 1);
  std::vector<std::uint8_t> crossed(trials, 0);
  for_each_trial(trials, threads, [&](std::size_t t) {
    CounterRng rng = master.split(t);
    auto sets = detail::with_terminals(g);
    detail::open_edges(g, sets, rng);
    crossed[t] = sets.same(g.node_count(), g.node_count() + 1) ? 1 : 0;
  });
  CrossingResult out;
  out.trials = trials;
  for (auto c : crossed) out.crossings += c;
  out.frequency = static_cast<double>(out.crossings) / static_cast<double>(trials);
  out.standard_error = detail::binomial_standard_error(out.frequency, trials);
  return out;
}

/// Crossing frequency plus mean largest-cluster fraction, from full cluster samples.
inline CrossingResult crossing_with_clusters(const NetworkGraph& g, std::uint64_t trials, std::uint64_t seed,
                                             unsigned threads = 1, std::vector<ClusterStats>* per_trial = nullptr) {
  require(trials >= 1, "crossing estimate needs at least one trial");
  const CounterRng master(seed, 1);
  std::vector<ClusterStats> stats(trials);
  for_each_trial(trials, threads, [&](std::size_t t) {
    CounterRng rng = master.split(t);
    stats[t] = sample_clusters(g, rng);
  });
  CrossingResult out;
  out.trials = trials;
  double largest = 0.0;
  for (const auto& s : stats) {
    out.crossings += s.spanning ? 1 : 0;
    largest += s.largest_fraction;
  }
  out.frequency = static_cast<double>(out.crossings) / static_cast<double>(trials);
  out.standard_error = detail::binomial_standard_error(out.frequency, trials);
  out.mean_largest_fraction = largest / static_cast<double>(trials);
  if (per_trial) *per_trial = std::move(stats);
  return out;
}

/// Crossing frequency for family f at size L with every edge open with probability p_edge.
inline CrossingResult crossing_probability(Family f, int size, double p_edge, std::uint64_t trials,
                                           std::uint64_t seed, unsigned threads = 1) {
  return crossing_probability(with_open_probability(build_family(f, size), p_edge), trials, seed, threads);
}

/// Fraction of samples in which nodes a and b end up in the same open cluster.
inline double connection_probability(const NetworkGraph& g, std::size_t a, std::size_t b, std::uint64_t trials,
                                     std::uint64_t seed, unsigned threads = 1) {
  require(a < g.node_count() && b < g.node_count(), "unknown node");
  require(a != b, "connection needs two distinct nodes");
  require(trials >= 1, "connection estimate needs at least one trial");
  detail::require_resolved(g);
  const CounterRng master(seed, 2);
  std::vector<std::uint8_t> joined(trials, 0);
  for_each_trial(trials, threads, [&](std::size_t t) {
    CounterRng rng = master.split(t);
    DisjointSets sets(g.node_count());
    detail::open_edges(g, sets, rng);
    joined[t] = sets.same(a, b) ? 1 : 0;
  });
  std::uint64_t hits = 0;
  for (auto j : joined) hits += j;
  return static_cast<double>(hits) / static_cast<double>(trials);
}

/// Newman-Ziff sweep: for each sample, insert the edges in a uniformly random
/// order and record how many were open when the left and right boundaries
/// first joined. Edge probabilities are ignored; the sweep covers all p at once.
inline std::vector<std::uint32_t> spanning_onsets(const NetworkGraph& g, std::uint64_t samples, std::uint64_t seed,
                                                  unsigned threads = 1) {
  require(samples >= 1, "sweep needs at least one sample");
  require(!g.nodes_with(tag::left).empty() && !g.nodes_with(tag::right).empty(),
          "crossing needs tagged left and right boundaries");
  const CounterRng master(seed, 3);
  const std::size_t edge_total = g.edge_count();
  std::vector<std::uint32_t> onset(samples, 0);
  for_each_trial(samples, threads, [&](std::size_t s) {
    CounterRng rng = master.split(s);
    std::vector<std::uint32_t> order(edge_total);
    for (std::size_t i = 0; i < edge_total; ++i) order[i] = static_cast<std::uint32_t>(i);
    auto sets = detail::with_terminals(g);
    const std::size_t left = g.node_count();
    // Fisher-Yates, drawn lazily so the sweep stops at the onset.
    std::uint32_t k = static_cast<std::uint32_t>(edge_total) + 1;
    if (sets.same(left, left + 1)) k = 0;
    for (std::size_t i = 0; k > edge_total && i < edge_total; ++i) {
      const std::size_t j = i + rng.below(edge_total - i);
      std::swap(order[i], order[j]);
      const auto& e = g.edges()[order[i]];
      if (sets.unite(e.u, e.v) && sets.same(left, left + 1)) k = static_cast<std::uint32_t>(i + 1);
    }
    onset[s] = k;
  });
  return onset;
}

/// Canonical crossing curve R(p) = sum_k Binomial(E, k; p) F(k), where F(k) is
/// the fraction of sweeps that had crossed once k edges were open.
class CrossingCurve {
 public:
  CrossingCurve(std::size_t edge_total, const std::vector<std::uint32_t>& onsets)
      : edge_total_(edge_total), samples_(onsets.size()), cumulative_(edge_total + 1, 0.0) {
    require(!onsets.empty(), "crossing curve needs at least one sweep");
    std::vector<std::uint64_t> hist(edge_total + 2, 0);
    for (auto k : onsets) ++hist[std::min<std::size_t>(k, edge_total + 1)];
    std::uint64_t running = 0;
    for (std::size_t k = 0; k <= edge_total; ++k) {
      running += hist[k];
      cumulative_[k] = static_cast<double>(running) / static_cast<double>(samples_);
    }
  }

  [[nodiscard]] double operator()(double p) const {
    const std::size_t n = edge_total_;
    if (n == 0 || p <= 0.0) return cumulative_[0];
    if (p >= 1.0) return cumulative_[n];
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    const std::size_t mode = std::min(n, static_cast<std::size_t>(std::floor((n + 1) * p)));
    const double log_mode = std::lgamma(n + 1.0) - std::lgamma(mode + 1.0) - std::lgamma(n - mode + 1.0) +
                            mode * log_p + (n - mode) * log_q;
    const double ratio = p / (1.0 - p);
    double weight_total = 0.0;
    double value = 0.0;
    double pmf = std::exp(log_mode);
    for (std::size_t k = mode;; ++k) {
      weight_total += pmf;
      value += pmf * cumulative_[k];
      if (k == n) break;
      pmf *= static_cast<double>(n - k) / static_cast<double>(k + 1) * ratio;
      if (pmf < 1e-18) break;
    }
    pmf = std::exp(log_mode);
    for (std::size_t k = mode; k > 0;) {
      pmf *= static_cast<double>(k) / (static_cast<double>(n - k + 1) * ratio);
      --k;
      if (pmf < 1e-18) break;
      weight_total += pmf;
      value += pmf * cumulative_[k];
    }
    return value / weight_total;
  }

  [[nodiscard]] double standard_error(double p) const {
    return detail::binomial_standard_error((*this)(p), samples_);
  }

  [[nodiscard]] std::size_t samples() const noexcept { return samples_; }

 private:
  std::size_t edge_total_;
  std::size_t samples_;
  std::vector<double> cumulative_;
};

inline CrossingCurve crossing_curve(Family f, int size, std::uint64_t samples, std::uint64_t seed,
                                    unsigned threads = 1) {
  const auto g = build_family(f, size);
  return CrossingCurve(g.edge_count(), spanning_onsets(g, samples, seed, threads));
}

namespace detail {

// Root of a nondecreasing function on [lo, hi] by bisection; expects f(lo) <= 0 <= f(hi).
template <typename F>
double bisect(F&& f, double lo, double hi, double tolerance, std::vector<double>* visited = nullptr) {
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (visited) visited->push_back(mid);
    if (f(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Bond-percolation threshold of family f: the p_edge at which the crossing
/// frequency on the largest size equals 1/2, found by bisection on the
/// sweep-derived crossing curve. Smaller sizes locate where successive curves
/// intersect; the spread between that point and the estimate enters the
/// half-width together with the bracket width and two standard errors of the
/// crossing frequency converted through the curve's slope.
inline ThresholdEstimate estimate_threshold(Family f, std::vector<int> sizes, std::uint64_t trials,
                                            std::uint64_t seed, unsigned threads = 1,
                                            std::pair<double, double> bracket = {0.0, 1.0}) {
  require(!sizes.empty(), "threshold estimate needs at least one size");
  require(trials >= 100, "threshold estimate needs at least 100 trials per point");
  require(bracket.first < bracket.second, "bracket must be an increasing interval");
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  std::vector<CrossingCurve> curves;
  curves.reserve(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i)
    curves.push_back(crossing_curve(f, sizes[i], trials, seed + 0x9e3779b9ULL * i, threads));
  const auto& top = curves.back();

  const double at_lo = top(bracket.first);
  const double at_hi = top(bracket.second);
  require(at_lo <= 0.5 && at_hi >= 0.5, "initial interval does not bracket crossing frequency 1/2");

  ThresholdEstimate est;
  est.sizes = sizes;
  est.trials = trials;
  constexpr double kBisectTolerance = 1e-6;
  std::vector<double> visited;
  est.p_c_hat = detail::bisect([&](double p) { return top(p) - 0.5; }, bracket.first, bracket.second,
                               kBisectTolerance, &visited);
  for (double p : visited) est.sweep.push_back({sizes.back(), p, top(p)});

  // Statistical error through the local slope of the crossing curve.
  const double h = 2e-3;
  const double slope = (top(std::min(1.0, est.p_c_hat + h)) - top(std::max(0.0, est.p_c_hat - h))) / (2 * h);
  double statistical = 0.0;
  if (slope > 0.0) statistical = 2.0 * top.standard_error(est.p_c_hat) / slope;

  double systematic = 0.0;
  for (std::size_t i = 0; i + 1 < curves.size(); ++i) {
    const auto& small = curves[i];
    const auto& large = curves[i + 1];
    const double lo = std::max(bracket.first, est.p_c_hat - 0.05);
    const double hi = std::min(bracket.second, est.p_c_hat + 0.05);
    auto diff = [&](double p) { return large(p) - small(p); };
    if (!(diff(lo) < 0.0 && diff(hi) > 0.0)) continue;
    const double cross = detail::bisect(diff, lo, hi, kBisectTolerance);
    est.size_crossings.emplace_back(sizes[i + 1], cross);
    if (i + 2 == curves.size()) systematic = std::abs(cross - est.p_c_hat);
  }

  // Coarse plot-ready table around the estimate for every size.
  for (std::size_t i = 0; i < curves.size(); ++i)
    for (int step = -20; step <= 20; ++step) {
      const double p = std::clamp(est.p_c_hat + step * 0.005, 0.0, 1.0);
      est.sweep.push_back({sizes[i], p, curves[i](p)});
    }

  est.half_width = kBisectTolerance + statistical + systematic;
  return est;
}

struct WindowRow {
  int size;
  double naive_edge_probability;
  double transformed_edge_probability;
  CrossingResult naive;
  CrossingResult transformed;
  [[nodiscard]] double gap() const { return transformed.frequency - naive.frequency; }
};

/// Honeycomb of size L with doubled edges: crossing under the naive strategy
/// (every bundle converted on its own) against crossing after the transform to
/// a triangular lattice, both over the same region.
inline WindowRow window_comparison(double p, int size, std::uint64_t trials, std::uint64_t seed,
                                   unsigned threads = 1) {
  const auto hex = build_family(Family::honeycomb, size, 2);
  const auto naive = with_naive_strategy(hex, p);
  const auto transformed = transform_to_triangular(hex, p);
  WindowRow row{size, naive_edge_probability(p, 2), transformed.edges().front().open_probability.value(), {}, {}};
  row.naive = crossing_probability(naive, trials, seed, threads);
  row.transformed = crossing_probability(transformed, trials, seed ^ 0x5851f42d4c957f2dULL, threads);
  return row;
}

}  // namespace secretnet::lattice
