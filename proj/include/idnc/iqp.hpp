#pragma once

// Integer quadratic program behind maximum clique:
//
//   maximize   V = r^T A c
//   subject to r_i * sum_j c_j a_ij <= 1  for every row i,  r, c binary.
//
// Also the exact-cover-by-3-sets instances that reduce to it.

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "side_info.hpp"

namespace idnc {

struct iqp_solution {
  std::vector<std::uint8_t> r; // row selector, length n
  std::vector<std::uint8_t> c; // column selector, length m
  std::size_t value = 0;

  friend bool operator==(const iqp_solution &, const iqp_solution &) = default;
};

struct iqp_evaluation {
  bool feasible;
  std::size_t value;
};

inline iqp_evaluation evaluate(const side_info_matrix &a, std::span<const std::uint8_t> r,
                               std::span<const std::uint8_t> c) {
  if (r.size() != a.users() || c.size() != a.packets())
    throw std::invalid_argument("evaluate: selector lengths must match matrix dimensions");
  iqp_evaluation out{true, 0};
  for (user_index i = 0; i < a.users(); ++i) {
    if (r[i] > 1)
      throw std::invalid_argument("evaluate: selectors must be binary");
    std::size_t selected = 0;
    for (packet_index j = 0; j < a.packets(); ++j) {
      if (c[j] > 1)
        throw std::invalid_argument("evaluate: selectors must be binary");
      selected += c[j] && a.wants(i, j);
    }
    if (r[i]) {
      out.value += selected;
      if (selected > 1)
        out.feasible = false;
    }
  }
  return out;
}

inline iqp_evaluation evaluate(const side_info_matrix &a, const iqp_solution &s) {
  return evaluate(a, s.r, s.c);
}

/// r = indicator of the clique's users, c = indicator of its packets.
inline iqp_solution clique_to_solution(const idnc_graph &g, const clique &cl) {
  if (!is_clique(g, cl))
    throw std::invalid_argument("clique_to_solution: vertex set is not a clique");
  const auto &a = g.matrix();
  iqp_solution s{std::vector<std::uint8_t>(a.users(), 0),
                 std::vector<std::uint8_t>(a.packets(), 0), 0};
  for (const auto &v : cl.vertices()) {
    s.r[v.user] = 1;
    s.c[v.packet] = 1;
  }
  s.value = evaluate(a, s).value;
  return s;
}

/// { v_ij : r_i = c_j = a_ij = 1 }.
inline clique solution_to_clique(const idnc_graph &g, const iqp_solution &s) {
  const auto &a = g.matrix();
  if (!evaluate(a, s).feasible)
    throw std::invalid_argument("solution_to_clique: solution is infeasible");
  std::vector<vertex> out;
  for (user_index i = 0; i < a.users(); ++i)
    if (s.r[i])
      for (packet_index j = 0; j < a.packets(); ++j)
        if (s.c[j] && a.wants(i, j))
          out.push_back({i, j});
  return clique(std::move(out));
}

inline constexpr std::size_t exhaustive_size_limit = 24;

/// Maximum-V feasible solution by enumerating every column selector. For a
/// fixed c the best r selects exactly the rows with one selected 1, so only
/// 2^m selectors are visited. Ties keep the lexicographically smallest c.
inline iqp_solution solve_exhaustive(const side_info_matrix &a) {
  const auto n = a.users();
  const auto m = a.packets();
  if (n + m > exhaustive_size_limit)
    throw resource_limit_error("solve_exhaustive: n + m = " + std::to_string(n + m) +
                               " exceeds " + std::to_string(exhaustive_size_limit));
  // m <= 23 here, so every row is a single word.
  std::vector<word> rows(n);
  for (user_index i = 0; i < n; ++i)
    rows[i] = a.row(i)[0];

  iqp_solution best{std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(m, 0), 0};
  word best_mask = 0;
  const word total = word{1} << m;
  for (word x = 0; x < total; ++x) {
    // c_1 is the most significant bit of x, so x ascends lexicographically.
    word mask = 0;
    for (std::size_t j = 0; j < m; ++j)
      if ((x >> (m - 1 - j)) & 1U)
        mask |= word{1} << j;
    std::size_t value = 0;
    for (word row : rows)
      value += std::popcount(row & mask) == 1;
    if (value > best.value) {
      best.value = value;
      best_mask = mask;
    }
  }
  for (packet_index j = 0; j < m; ++j)
    best.c[j] = (best_mask >> j) & 1U;
  for (user_index i = 0; i < n; ++i)
    best.r[i] = std::popcount(rows[i] & best_mask) == 1;
  return best;
}

/// Exact cover by 3-sets: 3k elements, l > k subsets of size exactly 3.
/// Elements are 0-based. Duplicate sets are allowed.
class x3c_instance {
public:
  using triple = std::array<std::size_t, 3>;

  x3c_instance(std::size_t k, std::vector<triple> sets) : k_(k), sets_(std::move(sets)) {
    if (k_ == 0)
      throw std::invalid_argument("x3c_instance: k must be positive");
    if (sets_.size() <= k_)
      throw std::invalid_argument("x3c_instance: need more than k sets");
    for (auto &s : sets_) {
      std::sort(s.begin(), s.end());
      if (s[0] == s[1] || s[1] == s[2])
        throw std::invalid_argument("x3c_instance: set elements must be distinct");
      if (s[2] >= 3 * k_)
        throw std::invalid_argument("x3c_instance: element outside [1, 3k]");
    }
  }

  std::size_t k() const noexcept { return k_; }
  std::size_t elements() const noexcept { return 3 * k_; }
  std::span<const triple> sets() const noexcept { return sets_; }

private:
  std::size_t k_;
  std::vector<triple> sets_;
};

/// a_ij = 1 iff element i belongs to set j.
inline side_info_matrix x3c_to_matrix(const x3c_instance &x) {
  const auto n = x.elements();
  const auto m = x.sets().size();
  std::vector<std::uint8_t> entries(n * m, 0);
  for (std::size_t j = 0; j < m; ++j)
    for (auto e : x.sets()[j])
      entries[e * m + j] = 1;
  return side_info_matrix(n, m, entries);
}

/// Brute force over all k-subsets of the collection.
inline bool exact_cover_exists(const x3c_instance &x) {
  const auto sets = x.sets();
  const auto k = x.k();
  const std::uint64_t full = (std::uint64_t{1} << x.elements()) - 1;
  std::vector<std::uint64_t> masks;
  for (const auto &s : sets)
    masks.push_back((std::uint64_t{1} << s[0]) | (std::uint64_t{1} << s[1]) |
                    (std::uint64_t{1} << s[2]));

  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  const auto l = sets.size();
  while (true) {
    std::uint64_t u = 0;
    for (auto idx : pick)
      u |= masks[idx];
    if (u == full)
      return true;
    std::size_t pos = k;
    while (pos > 0 && pick[pos - 1] == l - k + pos - 1)
      --pos;
    if (pos == 0)
      return false;
    ++pick[pos - 1];
    for (std::size_t t = pos; t < k; ++t)
      pick[t] = pick[t - 1] + 1;
  }
}

struct reduction_check {
  bool x3c_answer;
  bool diqp_answer;
};

inline reduction_check check_reduction(const x3c_instance &x) {
  if (x.elements() > 12 || x.sets().size() > 12)
    throw resource_limit_error("check_reduction: instance exceeds 3k <= 12, l <= 12");
  const auto sol = solve_exhaustive(x3c_to_matrix(x));
  return {exact_cover_exists(x), sol.value == x.elements()};
}

// Text format: "k l" then l lines of three 1-based element indices.

inline x3c_instance parse_x3c(std::istream &in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        return true;
    }
    return false;
  };
  if (!next_line())
    throw parse_error(line_no + 1, "missing header \"k l\"");
  long long k = 0, l = 0;
  std::string extra;
  {
    std::istringstream header(line);
    if (!(header >> k >> l) || (header >> extra) || k <= 0 || l <= 0)
      throw parse_error(line_no, "header must be two positive integers \"k l\"");
  }
  std::vector<x3c_instance::triple> sets;
  for (long long s = 0; s < l; ++s) {
    if (!next_line())
      throw parse_error(line_no + 1, "expected " + std::to_string(l) + " sets, got " +
                                         std::to_string(s));
    std::istringstream row(line);
    long long e[3];
    if (!(row >> e[0] >> e[1] >> e[2]) || (row >> extra))
      throw parse_error(line_no, "set line must hold exactly three element indices");
    x3c_instance::triple t{};
    for (int q = 0; q < 3; ++q) {
      if (e[q] < 1 || e[q] > 3 * k)
        throw parse_error(line_no, "element " + std::to_string(e[q]) + " outside [1, 3k]");
      t[q] = static_cast<std::size_t>(e[q] - 1);
    }
    sets.push_back(t);
  }
  if (next_line())
    throw parse_error(line_no, "trailing content after sets");
  try {
    return x3c_instance(static_cast<std::size_t>(k), std::move(sets));
  } catch (const std::invalid_argument &err) {
    throw parse_error(line_no, err.what());
  }
}

inline x3c_instance read_x3c_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open X3C file: " + path);
  return parse_x3c(in);
}

} // namespace idnc
