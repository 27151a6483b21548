#include <gtest/gtest.h>

#include <map>
#include <random>

#include "idnc/baselines.hpp"
#include "idnc/solvers.hpp"
#include "support.hpp"

using namespace idnc;
using support::three_users;

TEST(SchemeNames, RoundTrip) {
  for (auto s : all_schemes)
    EXPECT_EQ(parse_scheme(scheme_name(s)), s);
  EXPECT_EQ(parse_scheme("cope-like"), scheme::cope_like);
  EXPECT_EQ(parse_scheme("exact"), scheme::exact_oracle);
  EXPECT_EQ(parse_scheme("nope"), std::nullopt);
}

TEST(BestRepetition, Examples) {
  auto d = best_repetition(three_users());
  ASSERT_TRUE(d);
  EXPECT_EQ(d->packet, coded_packet{3});
  EXPECT_EQ(d->beneficiary_count, 3u);

  d = best_repetition(side_info_matrix::from_rows({"111", "111"}));
  EXPECT_EQ(d->packet, coded_packet{0});
  EXPECT_EQ(d->beneficiary_count, 2u);

  side_info_matrix lone(3, 6);
  lone = side_info_matrix::from_rows({"000000", "000010", "000000"});
  d = best_repetition(lone);
  EXPECT_EQ(d->packet, coded_packet{4});
  EXPECT_EQ(d->beneficiary_count, 1u);

  EXPECT_EQ(best_repetition(side_info_matrix(2, 3)), std::nullopt);
}

TEST(RandomRepetition, DeterministicAndUniformOverWantedColumns) {
  const auto a = three_users();
  EXPECT_EQ(random_repetition(a, 99)->packet, random_repetition(a, 99)->packet);
  std::map<packet_index, int> counts;
  for (std::uint64_t s = 0; s < 6000; ++s) {
    const auto d = random_repetition(a, s);
    ASSERT_EQ(d->beneficiary_count, a.column_sum(d->packet.packets()[0]));
    ++counts[d->packet.packets()[0]];
  }
  ASSERT_EQ(counts.size(), 6u);
  for (const auto &[j, c] : counts)
    EXPECT_NEAR(c, 1000, 150) << j;
}

TEST(RandomRepetition, SingleWantedColumn) {
  const auto a = side_info_matrix::from_rows({"0010", "0010"});
  for (std::uint64_t s = 0; s < 20; ++s)
    EXPECT_EQ(random_repetition(a, s)->packet, coded_packet{2});
  EXPECT_EQ(random_repetition(side_info_matrix(2, 2), 1), std::nullopt);
}

TEST(CopeLike, ThreeUserFixtureOrders) {
  const auto a = three_users();
  auto d = cope_like(a, {0, 1, 2, 3, 4, 5});
  EXPECT_EQ(d->packet, (coded_packet{0, 2}));
  EXPECT_EQ(d->beneficiary_count, 3u);

  d = cope_like(a, {3, 0, 1, 2, 4, 5});
  EXPECT_EQ(d->packet, coded_packet{3});
  EXPECT_EQ(d->beneficiary_count, 3u);

  d = cope_like(a, {5});
  EXPECT_EQ(d->packet, coded_packet{5});
  EXPECT_EQ(d->beneficiary_count, 2u);
}

TEST(CopeLike, RejectsBadOrders) {
  const auto a = side_info_matrix::from_rows({"110", "010"});
  EXPECT_THROW(cope_like(a, {0, 0}), std::invalid_argument);
  EXPECT_THROW(cope_like(a, {0, 2}), std::invalid_argument); // column 3 wanted by nobody
  EXPECT_THROW(cope_like(a, {0, 7}), std::invalid_argument);
  EXPECT_EQ(cope_like(a, std::span<const packet_index>{}), std::nullopt);
  EXPECT_EQ(cope_like(side_info_matrix(2, 2), 5), std::nullopt);
}

// Every user sees at most one wanted component, every component is wanted
// by someone, and the exact search never does worse.
TEST(CopeLike, InvariantsOnRandomMatrices) {
  std::mt19937_64 gen(41);
  for (int t = 0; t < 500; ++t) {
    const double p = 0.05 + 0.9 * (t % 19) / 18.0;
    const auto raw = oracle::random_raw(1 + gen() % 12, 1 + gen() % 10, p, gen);
    const auto a = support::to_matrix(raw);
    const auto d = cope_like(a, gen());
    if (!d) {
      ASSERT_EQ(a.ones(), 0u);
      continue;
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
      int seen = 0;
      for (auto j : d->packet.packets())
        seen += raw[i][j];
      ASSERT_LE(seen, 1);
    }
    const auto ben = beneficiaries(a, d->packet);
    ASSERT_TRUE(ben.all_components_wanted);
    ASSERT_EQ(ben.size(), d->beneficiary_count);
    ASSERT_LE(d->beneficiary_count, max_clique_exact(a).size());
    ASSERT_LE(best_repetition(a)->beneficiary_count, max_clique_exact(a).size());
  }
}
