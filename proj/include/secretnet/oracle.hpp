#pragma once

// Exhaustive verification in exact rational arithmetic. Protocols are
// enumerated over every link assignment; private coin flips (the conversion
// filter) become explicit success/abort branches with rational weights.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "secretnet/common.hpp"

namespace secretnet::oracle {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Parses "num/den" or an integer.
inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  auto parse_int = [&](const std::string& part) {
    require(!part.empty(), "malformed rational '" + text + "'");
    std::size_t start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    require(start < part.size(), "malformed rational '" + text + "'");
    for (std::size_t i = start; i < part.size(); ++i)
      require(part[i] >= '0' && part[i] <= '9', "malformed rational '" + text + "'");
    return Integer(part);
  };
  if (slash == std::string::npos) return Rational(parse_int(text));
  const Integer num = parse_int(text.substr(0, slash));
  const Integer den = parse_int(text.substr(slash + 1));
  require(den != 0, "rational with zero denominator");
  return Rational(num, den);
}

inline std::string to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

enum class Outcome { success0, success1, abort };

struct JointEntry {
  std::vector<int> assignment;  // one bit per link
  std::vector<int> transcript;  // public announcements
  Outcome outcome;
  Rational weight;
};

struct JointDistribution {
  std::vector<JointEntry> entries;

  [[nodiscard]] Rational total_weight() const {
    Rational total = 0;
    for (const auto& e : entries) total += e.weight;
    return total;
  }

  [[nodiscard]] Rational success_probability() const {
    Rational total = 0;
    for (const auto& e : entries)
      if (e.outcome != Outcome::abort) total += e.weight;
    return total;
  }
};

struct SecrecyReport {
  bool secret = true;
  /// Largest |P(bit = 0 | transcript, success) - 1/2| over transcripts.
  Rational max_bias = 0;
};

/// Perfect secrecy: for every transcript that can end in success, the final
/// shared bit is exactly uniform given that transcript and success.
inline SecrecyReport verify_secrecy(const JointDistribution& joint) {
  std::map<std::vector<int>, std::array<Rational, 2>> by_transcript;
  for (const auto& e : joint.entries) {
    if (e.outcome == Outcome::abort) continue;
    by_transcript[e.transcript][e.outcome == Outcome::success1 ? 1 : 0] += e.weight;
  }
  SecrecyReport report;
  const Rational half(1, 2);
  for (const auto& [transcript, w] : by_transcript) {
    const Rational success = w[0] + w[1];
    if (success == 0) continue;
    Rational bias = w[0] / success - half;
    if (bias < 0) bias = -bias;
    report.max_bias = std::max(report.max_bias, bias);
  }
  report.secret = report.max_bias == 0;
  return report;
}

namespace detail {

inline void require_bias(const Rational& p) {
  require(p >= 0 && p <= Rational(1, 2), "link bias must lie in [0, 1/2]");
}

inline Rational power(const Rational& base, int exponent) {
  Rational out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

inline Rational bit_weight(int bit, const Rational& p) { return bit ? p : Rational(1) - p; }

// Optimal bit filter: the candidate for the observed bit value has weight
// `observed`, the complementary candidate `other`. Keep the lighter always and
// the heavier with probability lighter / heavier; appends success and abort
// entries with the given joint weight.
inline void append_filtered(JointDistribution& joint, std::vector<int> assignment, std::vector<int> transcript,
                            int bit, const Rational& weight, const Rational& observed, const Rational& other) {
  if (weight == 0) return;
  const Rational keep = observed <= other ? Rational(1) : other / observed;
  const Rational kept = weight * keep;
  if (kept != 0)
    joint.entries.push_back({assignment, transcript, bit ? Outcome::success1 : Outcome::success0, kept});
  if (kept != weight)
    joint.entries.push_back({std::move(assignment), std::move(transcript), Outcome::abort, weight - kept});
}

}  // namespace detail

struct ChainEnumeration {
  JointDistribution joint;
  Rational success_probability;
};

inline constexpr int kMaxChainLinks = 16;

/// Every assignment of an n-link chain under the XOR relay protocol followed
/// by the optimal conversion between the end points.
inline ChainEnumeration enumerate_chain(int n, const Rational& p) {
  require(n >= 1, "a chain needs at least one link");
  require(n <= kMaxChainLinks, "exact enumeration is limited to 16 links");
  detail::require_bias(p);
  const Rational q = Rational(1) - p;
  // P(a) depends only on the Hamming weight.
  std::vector<Rational> by_weight(n + 1);
  for (int w = 0; w <= n; ++w) by_weight[w] = detail::power(p, w) * detail::power(q, n - w);

  ChainEnumeration out;
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    std::vector<int> a(n);
    int w = 0;
    for (int i = 0; i < n; ++i) {
      a[i] = static_cast<int>((mask >> i) & 1UL);
      w += a[i];
    }
    std::vector<int> z(n - 1);
    for (int i = 0; i + 1 < n; ++i) z[i] = a[i] ^ a[i + 1];
    const Rational& mine = by_weight[w];
    const Rational& complement = by_weight[n - w];
    const int bit = a[0];
    detail::append_filtered(out.joint, std::move(a), std::move(z), bit, mine, mine, complement);
  }
  out.success_probability = out.joint.success_probability();
  return out;
}

/// Deliberately broken two-link relay: the middle node announces a_1 itself.
inline JointDistribution enumerate_announce_first_bit(const Rational& p) {
  detail::require_bias(p);
  JointDistribution joint;
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2) {
      const Rational w = detail::bit_weight(a1, p) * detail::bit_weight(a2, p);
      if (w == 0) continue;
      joint.entries.push_back({{a1, a2}, {a1}, a1 ? Outcome::success1 : Outcome::success0, w});
    }
  return joint;
}

/// Two parallel links merged by OR (0 only when both bits are 0), then filtered.
inline JointDistribution enumerate_parallel_or_merge(const Rational& p) {
  detail::require_bias(p);
  const Rational q = Rational(1) - p;
  const Rational zero_weight = q * q;
  const Rational one_weight = Rational(1) - zero_weight;
  JointDistribution joint;
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2) {
      const Rational w = detail::bit_weight(a1, p) * detail::bit_weight(a2, p);
      const int merged = a1 | a2;
      const Rational& observed = merged ? one_weight : zero_weight;
      const Rational& other = merged ? zero_weight : one_weight;
      detail::append_filtered(joint, {a1, a2}, {}, merged, w, observed, other);
    }
  return joint;
}

/// Local step of the honeycomb transform: a removed node holds two links to
/// each of three neighbors and relays one pair of links per neighbor pair.
/// Links 0..5 are (n1, n1, n2, n2, n3, n3); pair (n1,n2) uses links 0 and 2,
/// (n1,n3) links 1 and 4, (n2,n3) links 3 and 5. Every pair's distribution
/// carries all three announcements as its transcript.
inline std::array<JointDistribution, 3> enumerate_relay_star(const Rational& p) {
  detail::require_bias(p);
  constexpr std::array<std::pair<int, int>, 3> pairs{{{0, 2}, {1, 4}, {3, 5}}};
  std::array<JointDistribution, 3> out;
  for (unsigned mask = 0; mask < 64; ++mask) {
    std::vector<int> a(6);
    Rational w = 1;
    for (int i = 0; i < 6; ++i) {
      a[i] = static_cast<int>((mask >> i) & 1U);
      w *= detail::bit_weight(a[i], p);
    }
    std::vector<int> z;
    for (const auto& [x, y] : pairs) z.push_back(a[x] ^ a[y]);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [x, y] = pairs[k];
      const int bit = a[x];
      // Candidates for the first neighbor's bit given z: (bit, bit ^ z) and its complement.
      const Rational observed = detail::bit_weight(bit, p) * detail::bit_weight(bit ^ z[k], p);
      const Rational other = detail::bit_weight(1 - bit, p) * detail::bit_weight(1 - (bit ^ z[k]), p);
      detail::append_filtered(out[k], a, z, bit, w, observed, other);
    }
  }
  return out;
}

/// Exact optimal conversion probability between pure states,
/// min_k (1 - P_k(from)) / (1 - P_k(to)) over descending prefix sums, capped at 1.
inline Rational conversion_probability(std::vector<Rational> from, std::vector<Rational> to) {
  const std::size_t n = std::max(from.size(), to.size());
  from.resize(n, 0);
  to.resize(n, 0);
  std::sort(from.begin(), from.end(), std::greater<>());
  std::sort(to.begin(), to.end(), std::greater<>());
  Rational best = 1;
  Rational from_prefix = 0;
  Rational to_prefix = 0;
  for (std::size_t k = 0; k < n; ++k) {
    from_prefix += from[k];
    to_prefix += to[k];
    const Rational denominator = Rational(1) - to_prefix;
    if (denominator == 0) continue;
    best = std::min(best, (Rational(1) - from_prefix) / denominator);
  }
  return best;
}

inline std::vector<Rational> coarse_grain(const std::vector<Rational>& state, const std::vector<std::size_t>& labeling) {
  require(labeling.size() == state.size(), "labeling must assign a symbol to every outcome");
  std::vector<Rational> out(*std::max_element(labeling.begin(), labeling.end()) + 1, 0);
  for (std::size_t i = 0; i < state.size(); ++i) out[labeling[i]] += state[i];
  return out;
}

inline Rational sbit_conversion(const std::vector<Rational>& state) {
  return conversion_probability(state, {Rational(1, 2), Rational(1, 2)});
}

struct StrategySearch {
  Rational best;
  std::vector<std::size_t> best_labeling;
  std::size_t labelings_checked = 0;
};

inline constexpr std::size_t kMaxSearchAlphabet = 4;

/// Best sbit yield over every deterministic relabeling of the alphabet
/// followed by optimal conversion.
inline StrategySearch exhaustive_strategy_search(const std::vector<Rational>& state) {
  require(!state.empty(), "state needs at least one outcome");
  require(state.size() <= kMaxSearchAlphabet, "exhaustive search is limited to 4 outcomes");
  Rational total = 0;
  for (const auto& v : state) {
    require(v >= 0, "probabilities must be non-negative");
    total += v;
  }
  require(total == 1, "probabilities must sum to exactly 1");

  const std::size_t m = state.size();
  std::size_t combos = 1;
  for (std::size_t i = 0; i < m; ++i) combos *= m;
  StrategySearch out;
  out.best = -1;
  std::vector<std::size_t> labeling(m, 0);
  for (std::size_t code = 0; code < combos; ++code) {
    std::size_t rest = code;
    for (std::size_t i = 0; i < m; ++i) {
      labeling[i] = rest % m;
      rest /= m;
    }
    ++out.labelings_checked;
    const Rational value = sbit_conversion(coarse_grain(state, labeling));
    if (value > out.best) {
      out.best = value;
      out.best_labeling = labeling;
    }
  }
  return out;
}

struct FunctionVerdict {
  /// table[a1 * 2 + a2] = f(a1, a2)
  std::array<int, 4> table;
  /// f(0, a2) != f(1, a2) for both a2: the far node can undo the announcement.
  bool decodable;
  /// sum_{a2} f(0, a2) == sum_{a2} f(1, a2): announcement counts do not depend on a1.
  bool balanced;
  /// P(z = 1 | a1 = 0) == P(z = 1 | a1 = 1) under the link bias.
  bool weighted_independent;
};

struct UniquenessReport {
  std::vector<FunctionVerdict> functions;
  std::vector<std::array<int, 4>> survivors;  // decodable and balanced
  bool degenerate = false;                    // p = 0: a2 is deterministic
};

inline constexpr std::array<int, 4> kXorTable{0, 1, 1, 0};
inline constexpr std::array<int, 4> kXnorTable{1, 0, 0, 1};

/// All 16 announcement functions f(a1, a2) for a two-link relay, checked for
/// decodability and for balance in a1.
inline UniquenessReport xor_uniqueness_check(const Rational& p) {
  detail::require_bias(p);
  UniquenessReport report;
  report.degenerate = p == 0;
  for (int code = 0; code < 16; ++code) {
    FunctionVerdict v{};
    for (int i = 0; i < 4; ++i) v.table[i] = (code >> i) & 1;
    auto f = [&](int a1, int a2) { return v.table[a1 * 2 + a2]; };
    v.decodable = f(0, 0) != f(1, 0) && f(0, 1) != f(1, 1);
    v.balanced = f(0, 0) + f(0, 1) == f(1, 0) + f(1, 1);
    Rational given0 = 0, given1 = 0;
    for (int a2 = 0; a2 < 2; ++a2) {
      given0 += detail::bit_weight(a2, p) * f(0, a2);
      given1 += detail::bit_weight(a2, p) * f(1, a2);
    }
    v.weighted_independent = given0 == given1;
    if (v.decodable && v.balanced) report.survivors.push_back(v.table);
    report.functions.push_back(v);
  }
  return report;
}

}  // namespace secretnet::oracle
