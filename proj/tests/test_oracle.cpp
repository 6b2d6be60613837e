#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "secretnet/chain.hpp"
#include "secretnet/oracle.hpp"
#include "secretnet/secret_state.hpp"

namespace {

namespace orc = secretnet::oracle;
using orc::Rational;
using secretnet::ValidationError;

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(orc::parse_rational("1/4"), Rational(1, 4));
  EXPECT_EQ(orc::parse_rational("2/8"), Rational(1, 4));
  EXPECT_EQ(orc::parse_rational("3"), Rational(3));
  EXPECT_EQ(orc::to_string(Rational(6, 8)), "3/4");
  EXPECT_THROW(orc::parse_rational("1/0"), ValidationError);
  EXPECT_THROW(orc::parse_rational("0.25"), ValidationError);
  EXPECT_THROW(orc::parse_rational("/4"), ValidationError);
}

TEST(EnumerateChain, Examples) {
  EXPECT_EQ(orc::enumerate_chain(3, Rational(1, 4)).success_probability, Rational(5, 16));
  EXPECT_EQ(orc::enumerate_chain(1, Rational(1, 4)).success_probability, Rational(1, 2));
  EXPECT_EQ(orc::enumerate_chain(2, Rational(1, 2)).success_probability, Rational(1));
  EXPECT_THROW(orc::enumerate_chain(17, Rational(1, 4)), ValidationError);
  EXPECT_THROW(orc::enumerate_chain(0, Rational(1, 4)), ValidationError);
  EXPECT_THROW(orc::enumerate_chain(3, Rational(3, 4)), ValidationError);
}

TEST(EnumerateChain, WeightsSumExactlyToOne) {
  for (int n = 1; n <= 10; ++n)
    for (const auto& p : {Rational(0), Rational(1, 10), Rational(1, 4), Rational(2, 5), Rational(1, 2)})
      EXPECT_EQ(orc::enumerate_chain(n, p).joint.total_weight(), Rational(1)) << n;
}

TEST(EnumerateChain, TranscriptIsXorOfNeighbors) {
  const auto run = orc::enumerate_chain(5, Rational(1, 3));
  for (const auto& e : run.joint.entries) {
    ASSERT_EQ(e.transcript.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(e.transcript[i], e.assignment[i] ^ e.assignment[i + 1]);
    if (e.outcome != orc::Outcome::abort)
      EXPECT_EQ(e.outcome == orc::Outcome::success1 ? 1 : 0, e.assignment[0]);
  }
}

TEST(EnumerateChain, MatchesClosedFormAndBruteForce) {
  for (int n = 1; n <= 12; ++n)
    for (const auto& p : {Rational(1, 10), Rational(1, 4), Rational(2, 5)}) {
      const double exact = orc::to_double(orc::enumerate_chain(n, p).success_probability);
      const double pd = orc::to_double(p);
      EXPECT_NEAR(exact, secretnet::chain::exact_success_probability({n, pd}), 1e-12);
      EXPECT_NEAR(exact, secretnet::testing::chain_success_brute_force(n, pd), 1e-12);
    }
}

TEST(VerifySecrecy, ChainProtocols) {
  for (int n = 1; n <= 10; ++n)
    for (const auto& p : {Rational(1, 4), Rational(1, 2), Rational(1, 7)}) {
      const auto report = orc::verify_secrecy(orc::enumerate_chain(n, p).joint);
      EXPECT_TRUE(report.secret) << n;
      EXPECT_EQ(report.max_bias, Rational(0));
    }
}

TEST(VerifySecrecy, BrokenProtocolLeaks) {
  const auto report = orc::verify_secrecy(orc::enumerate_announce_first_bit(Rational(1, 4)));
  EXPECT_FALSE(report.secret);
  EXPECT_EQ(report.max_bias, Rational(1, 2));
}

TEST(VerifySecrecy, ParallelMergeAndRelayStar) {
  for (const auto& p : {Rational(1, 10), Rational(1, 4), Rational(1, 2)}) {
    const auto merge = orc::enumerate_parallel_or_merge(p);
    EXPECT_EQ(merge.total_weight(), Rational(1));
    EXPECT_TRUE(orc::verify_secrecy(merge).secret);
    for (const auto& pair : orc::enumerate_relay_star(p)) {
      EXPECT_EQ(pair.total_weight(), Rational(1));
      EXPECT_TRUE(orc::verify_secrecy(pair).secret);
      EXPECT_EQ(pair.success_probability(), 2 * p);
    }
  }
  // Below 1 - 1/sqrt(2) the merge attains 2p(2 - p).
  const Rational p(1, 4);
  EXPECT_EQ(orc::enumerate_parallel_or_merge(p).success_probability(), 2 * p * (2 - p));
}

TEST(ConversionProbability, ExactAgreesWithFloatingPoint) {
  const std::vector<Rational> from{Rational(9, 16), Rational(3, 16), Rational(3, 16), Rational(1, 16)};
  EXPECT_EQ(orc::sbit_conversion(from), Rational(7, 8));
  EXPECT_EQ(orc::sbit_conversion({Rational(3, 4), Rational(1, 4)}), Rational(1, 2));
  EXPECT_EQ(orc::conversion_probability({Rational(1, 2), Rational(1, 2)}, {Rational(3, 4), Rational(1, 4)}),
            Rational(1));
}

TEST(ExhaustiveStrategySearch, Examples) {
  const Rational p(1, 4), q(3, 4);
  const auto product = orc::exhaustive_strategy_search({q * q, q * p, p * q, p * p});
  EXPECT_EQ(product.best, Rational(7, 8));
  EXPECT_EQ(product.best, 2 * p * (2 - p));
  EXPECT_EQ(product.labelings_checked, 256u);
  const std::vector<std::size_t> or_merge{0, 1, 1, 1};
  EXPECT_EQ(orc::sbit_conversion(orc::coarse_grain({q * q, q * p, p * q, p * p}, or_merge)), product.best);

  EXPECT_EQ(orc::exhaustive_strategy_search({Rational(1, 2), Rational(1, 2)}).best, Rational(1));
  EXPECT_EQ(orc::exhaustive_strategy_search({Rational(1)}).best, Rational(0));
  EXPECT_THROW(orc::exhaustive_strategy_search(std::vector<Rational>(5, Rational(1, 5))), ValidationError);
  EXPECT_THROW(orc::exhaustive_strategy_search({Rational(1, 2), Rational(1, 4)}), ValidationError);
}

TEST(ExhaustiveStrategySearch, DominatesEveryFixedLabeling) {
  for (const auto& p : {Rational(1, 10), Rational(1, 4), Rational(2, 5)}) {
    const Rational q = 1 - p;
    const std::vector<Rational> state{q * q, q * p, p * q, p * p};
    const auto best = orc::exhaustive_strategy_search(state).best;
    for (int code = 0; code < 256; ++code) {
      std::vector<std::size_t> labeling(4);
      for (int i = 0; i < 4; ++i) labeling[i] = (code >> (2 * i)) & 3;
      EXPECT_LE(orc::sbit_conversion(orc::coarse_grain(state, labeling)), best);
    }
    // The floating-point module agrees with the exact value on the product state.
    const double pd = orc::to_double(p);
    const auto fstate = secretnet::product(secretnet::BiasedLink(pd).state(), secretnet::BiasedLink(pd).state());
    EXPECT_NEAR(secretnet::sbit_probability(fstate), orc::to_double(best), 1e-12);
  }
}

TEST(XorUniqueness, Examples) {
  const std::vector<std::array<int, 4>> expected{orc::kXorTable, orc::kXnorTable};
  for (const auto& p : {Rational(1, 4), Rational(1, 2)}) {
    const auto report = orc::xor_uniqueness_check(p);
    EXPECT_EQ(report.functions.size(), 16u);
    auto survivors = report.survivors;
    std::sort(survivors.begin(), survivors.end());
    auto want = expected;
    std::sort(want.begin(), want.end());
    EXPECT_EQ(survivors, want);
    EXPECT_FALSE(report.degenerate);
  }
  EXPECT_TRUE(orc::xor_uniqueness_check(Rational(0)).degenerate);
  EXPECT_THROW(orc::xor_uniqueness_check(Rational(3, 4)), ValidationError);
}

TEST(XorUniqueness, WeightedIndependenceOnlyForUnbiasedLinks) {
  // The announcement distribution itself depends on a1 unless p = 1/2; secrecy
  // of the final bit comes from the conversion step.
  auto xor_verdict = [](const Rational& p) {
    for (const auto& f : orc::xor_uniqueness_check(p).functions)
      if (f.table == orc::kXorTable) return f.weighted_independent;
    return false;
  };
  EXPECT_FALSE(xor_verdict(Rational(1, 4)));
  EXPECT_TRUE(xor_verdict(Rational(1, 2)));
}

}  // namespace
