#pragma once

// Comparison schemes: resend the most-wanted plain packet, resend a random
// wanted packet, or greedily XOR packets while every user still sees at most
// one wanted component.
//
// A nullopt decision means no packet is needed (nobody wants anything).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rng.hpp"
#include "side_info.hpp"

namespace idnc {

enum class scheme { max_clique, best_repetition, random_repetition, cope_like, exact_oracle };

inline constexpr scheme all_schemes[] = {scheme::max_clique, scheme::best_repetition,
                                         scheme::random_repetition, scheme::cope_like,
                                         scheme::exact_oracle};

inline std::string_view scheme_name(scheme s) {
  switch (s) {
  case scheme::max_clique: return "max_clique";
  case scheme::best_repetition: return "best_repetition";
  case scheme::random_repetition: return "random_repetition";
  case scheme::cope_like: return "cope_like";
  case scheme::exact_oracle: return "exact_oracle";
  }
  return "unknown";
}

/// Accepts both "cope_like" and "cope-like" spellings.
inline std::optional<scheme> parse_scheme(std::string_view text) {
  std::string norm(text);
  for (auto &ch : norm)
    if (ch == '-')
      ch = '_';
  if (norm == "exact")
    return scheme::exact_oracle;
  for (auto s : all_schemes)
    if (scheme_name(s) == norm)
      return s;
  return std::nullopt;
}

struct scheme_decision {
  coded_packet packet;
  std::size_t beneficiary_count;
  scheme kind;
};

inline scheme_decision score(const side_info_matrix &a, coded_packet c, scheme kind) {
  const auto n = beneficiaries(a, c).size();
  return {std::move(c), n, kind};
}

/// Columns wanted by at least one user, ascending.
inline std::vector<packet_index> wanted_columns(const side_info_matrix &a) {
  std::vector<packet_index> out;
  for (packet_index j = 0; j < a.packets(); ++j)
    if (a.column_sum(j) > 0)
      out.push_back(j);
  return out;
}

/// Column with the largest sum; ties go to the smallest index.
inline std::optional<scheme_decision> best_repetition(const side_info_matrix &a) {
  std::size_t best_sum = 0;
  packet_index best = 0;
  for (packet_index j = 0; j < a.packets(); ++j) {
    const auto s = a.column_sum(j);
    if (s > best_sum) {
      best_sum = s;
      best = j;
    }
  }
  if (best_sum == 0)
    return std::nullopt;
  return scheme_decision{coded_packet{best}, best_sum, scheme::best_repetition};
}

/// Random permutation of the wanted columns.
inline std::vector<packet_index> random_order(const side_info_matrix &a, counter_rng &rng) {
  auto cols = wanted_columns(a);
  rng.shuffle(std::span<packet_index>(cols));
  return cols;
}

/// Uniform choice among wanted columns: the head of a random order, so a
/// generator state shared with cope_like resends that scheme's first packet.
inline std::optional<scheme_decision> random_repetition(const side_info_matrix &a,
                                                        counter_rng &rng) {
  const auto order = random_order(a, rng);
  if (order.empty())
    return std::nullopt;
  const auto j = order.front();
  return scheme_decision{coded_packet{j}, a.column_sum(j), scheme::random_repetition};
}

inline std::optional<scheme_decision> random_repetition(const side_info_matrix &a,
                                                        std::uint64_t seed) {
  counter_rng rng(derive_key(seed, {}));
  return random_repetition(a, rng);
}

/// Greedy XOR in the given order. A packet joins only if afterwards no user
/// has two or more wanted components. `order` lists distinct wanted columns.
inline std::optional<scheme_decision> cope_like(const side_info_matrix &a,
                                                std::span<const packet_index> order) {
  if (order.empty())
    return std::nullopt;
  std::vector<std::uint8_t> seen(a.packets(), 0);
  for (auto j : order) {
    a.check_packet(j);
    if (seen[j]++)
      throw std::invalid_argument("cope_like: order repeats packet " + std::to_string(j));
    if (a.column_sum(j) == 0)
      throw std::invalid_argument("cope_like: packet " + std::to_string(j) +
                                  " is wanted by nobody");
  }
  // hit[i]: number of wanted components user i sees in the current packet.
  std::vector<std::uint8_t> hit(a.users(), 0);
  std::vector<packet_index> chosen;
  for (auto j : order) {
    bool ok = true;
    for (user_index i = 0; i < a.users() && ok; ++i)
      ok = !(hit[i] && a.wants(i, j));
    if (!ok)
      continue;
    chosen.push_back(j);
    for (user_index i = 0; i < a.users(); ++i)
      hit[i] += a.wants(i, j);
  }
  return score(a, coded_packet(std::move(chosen)), scheme::cope_like);
}

inline std::optional<scheme_decision> cope_like(const side_info_matrix &a,
                                                std::initializer_list<packet_index> order) {
  return cope_like(a, std::span<const packet_index>(order.begin(), order.size()));
}

inline std::optional<scheme_decision> cope_like(const side_info_matrix &a, std::uint64_t seed) {
  counter_rng rng(derive_key(seed, {}));
  const auto order = random_order(a, rng);
  return cope_like(a, order);
}

} // namespace idnc
