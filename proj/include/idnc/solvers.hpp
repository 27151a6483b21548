#pragma once

/*
 * Maximum clique search on IDNC graphs.
 *
 * A row is "good" for a column set S when it has exactly one 1 inside S. The
 * good rows of S, each paired with its lone column, always form a clique, and
 * every clique is contained in the good-row set of its own column support. So
 * scanning column sets yields maximum cliques; for i.i.d. loss p the best
 * support size concentrates at j* = argmax_j j p (1-p)^(j-1), and only sizes
 * within delta of j* are scanned.
 *
 * Also here: the surjection counts B^j_k and the concentration bounds used to
 * check the clique-number behaviour empirically.
 */

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"
#include "graph.hpp"
#include "side_info.hpp"

namespace idnc {

inline void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("loss probability must lie in (0, 1)");
}

/// Probability that a row is good for a fixed set of j columns.
inline double good_row_probability(std::size_t j, double p) {
  if (j == 0)
    throw std::invalid_argument("good_row_probability: j must be >= 1");
  check_probability(p);
  return static_cast<double>(j) * p * std::pow(1.0 - p, static_cast<double>(j - 1));
}

/// Absolute tolerance for deciding f(j) == f(j+1) when p is a double.
inline constexpr double tie_tolerance = 1e-12;

/// Smallest maximizer of f, clamped to m. f is unimodal: f(j+1) >= f(j)
/// iff (j+1) q >= j, so the scan stops at the first non-increase.
inline std::size_t j_star(double p, std::size_t m) {
  check_probability(p);
  if (m == 0)
    throw std::invalid_argument("j_star: m must be >= 1");
  const double q = 1.0 - p;
  std::size_t j = 1;
  while (j < m && static_cast<double>(j + 1) * q - static_cast<double>(j) > tie_tolerance)
    ++j;
  return j;
}

/// Exact variant for p = num / den.
inline std::size_t j_star(std::uint64_t num, std::uint64_t den, std::size_t m) {
  if (num == 0 || num >= den)
    throw std::invalid_argument("j_star: need 0 < num < den");
  if (m == 0)
    throw std::invalid_argument("j_star: m must be >= 1");
  using big = boost::multiprecision::cpp_int;
  std::size_t j = 1;
  while (j < m && big(j + 1) * (den - num) > big(j) * den)
    ++j;
  return j;
}

/// Inclusive range of column-set sizes to scan.
struct column_window {
  std::size_t lo;
  std::size_t hi;
};

struct clique_search_params {
  double p;
  std::size_t delta = 3;
  std::size_t j_star = 1;

  static clique_search_params make(double p, std::size_t delta, std::size_t m) {
    return {p, delta, idnc::j_star(p, m)};
  }

  /// [max(1, j* - delta), min(m, j* + delta)].
  column_window window(std::size_t m) const {
    const auto lo = j_star > delta ? j_star - delta : std::size_t{1};
    return {std::max<std::size_t>(1, std::min(lo, m)), std::min(m, j_star + delta)};
  }
};

struct search_options {
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 1;
};

namespace detail {

/// Column-major bit view: one packed row-bitset per column.
class column_view {
public:
  explicit column_view(const side_info_matrix &a)
      : rows_(a.users()), cols_(a.packets()), stride_(words_for(a.users())),
        bits_(cols_ * stride_, 0) {
    for (user_index i = 0; i < rows_; ++i)
      for (packet_index j = 0; j < cols_; ++j)
        if (a.wants(i, j))
          bits_[j * stride_ + i / word_bits] |= word{1} << (i % word_bits);
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t stride() const noexcept { return stride_; }
  const word *column(packet_index j) const noexcept { return bits_.data() + j * stride_; }

private:
  std::size_t rows_, cols_, stride_;
  std::vector<word> bits_;
};

struct search_best {
  std::size_t size = 0;
  std::vector<packet_index> columns;
};

/// Depth-first lexicographic scan of all j-column sets whose first column is
/// `first`. Tracks rows hit exactly once (`once`) and more than once
/// (`multi`); a subtree is skipped when n - |multi| cannot beat the best.
class combination_scan {
public:
  combination_scan(const column_view &cv, std::size_t j)
      : cv_(cv), j_(j), once_((j + 1) * cv.stride(), 0), multi_((j + 1) * cv.stride(), 0),
        pick_(j) {}

  /// `local` is updated on strictly larger good-row counts. `shared` is a
  /// lower bound from other work items; it only prunes strictly smaller
  /// subtrees so tie-breaking is unaffected.
  void run(packet_index first, search_best &local, const std::atomic<std::size_t> *shared) {
    local_ = &local;
    shared_ = shared;
    std::fill(once_.begin(), once_.begin() + static_cast<std::ptrdiff_t>(cv_.stride()), 0);
    std::fill(multi_.begin(), multi_.begin() + static_cast<std::ptrdiff_t>(cv_.stride()), 0);
    descend(0, first, first + 1);
  }

private:
  void descend(std::size_t depth, packet_index from, packet_index to) {
    const auto s = cv_.stride();
    for (packet_index col = from; col < to; ++col) {
      const word *c = cv_.column(col);
      const word *o = &once_[depth * s];
      const word *mu = &multi_[depth * s];
      word *no = &once_[(depth + 1) * s];
      word *nm = &multi_[(depth + 1) * s];
      std::size_t multi_count = 0, once_count = 0;
      for (std::size_t w = 0; w < s; ++w) {
        nm[w] = mu[w] | (o[w] & c[w]);
        no[w] = (o[w] ^ c[w]) & ~nm[w];
        multi_count += static_cast<std::size_t>(std::popcount(nm[w]));
        once_count += static_cast<std::size_t>(std::popcount(no[w]));
      }
      pick_[depth] = col;
      if (depth + 1 == j_) {
        if (once_count > local_->size) {
          local_->size = once_count;
          local_->columns.assign(pick_.begin(), pick_.end());
        }
        continue;
      }
      const auto bound = cv_.rows() - multi_count;
      if (bound <= local_->size)
        continue;
      if (shared_ && bound < shared_->load(std::memory_order_relaxed))
        continue;
      descend(depth + 1, col + 1, cv_.cols() - (j_ - depth - 2));
    }
  }

  const column_view &cv_;
  std::size_t j_;
  std::vector<word> once_, multi_;
  std::vector<packet_index> pick_;
  search_best *local_ = nullptr;
  const std::atomic<std::size_t> *shared_ = nullptr;
};

inline clique good_row_clique(const side_info_matrix &a, const std::vector<packet_index> &cols) {
  std::vector<vertex> out;
  for (user_index i = 0; i < a.users(); ++i) {
    std::size_t hits = 0;
    packet_index at = 0;
    for (auto j : cols)
      if (a.wants(i, j)) {
        ++hits;
        at = j;
      }
    if (hits == 1)
      out.push_back({i, at});
  }
  return clique(std::move(out));
}

} // namespace detail

/// Largest good-row clique over every column set whose size lies in `win`.
/// Among equal sizes the first one in (size ascending, lexicographic) order
/// wins, so the result does not depend on the thread count.
inline clique max_clique_in_window(const side_info_matrix &a, column_window win,
                                   search_options opts = {}) {
  const auto m = a.packets();
  win.lo = std::max<std::size_t>(win.lo, 1);
  win.hi = std::min(win.hi, m);
  if (win.lo > win.hi || a.ones() == 0)
    return {};

  // Work items in canonical order: (j, first column).
  struct item {
    std::size_t j;
    packet_index first;
  };
  std::vector<item> items;
  for (std::size_t j = win.lo; j <= win.hi; ++j)
    for (packet_index first = 0; first + j <= m; ++first)
      items.push_back({j, first});

  const detail::column_view cv(a);
  unsigned threads = opts.threads ? opts.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, items.size()));

  detail::search_best best;
  if (threads <= 1) {
    // A single running best over the canonical order reproduces the
    // strictly-greater update rule exactly.
    std::optional<detail::combination_scan> scan;
    std::size_t scan_j = 0;
    for (const auto &it : items) {
      if (!scan || scan_j != it.j) {
        scan.emplace(cv, it.j);
        scan_j = it.j;
      }
      scan->run(it.first, best, nullptr);
    }
  } else {
    std::vector<detail::search_best> results(items.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> shared{0};
    auto worker = [&] {
      for (std::size_t k = next.fetch_add(1); k < items.size(); k = next.fetch_add(1)) {
        detail::combination_scan scan(cv, items[k].j);
        scan.run(items[k].first, results[k], &shared);
        auto seen = shared.load();
        while (results[k].size > seen && !shared.compare_exchange_weak(seen, results[k].size)) {
        }
      }
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(worker);
    pool.clear();
    for (auto &r : results)
      if (r.size > best.size)
        best = std::move(r);
  }
  if (best.size == 0)
    return {};
  return detail::good_row_clique(a, best.columns);
}

/// Max Clique search for random IDNC graphs: scan column-set sizes within
/// delta of j*. Always returns a valid clique; maximum with high probability.
inline clique max_clique_algorithm1(const side_info_matrix &a, const clique_search_params &params,
                                    search_options opts = {}) {
  return max_clique_in_window(a, params.window(a.packets()), opts);
}

inline constexpr double default_combination_budget = 5e8;

/// Scan work estimate C(m, ceil(m/2)) * n * m.
inline double exact_search_cost(const side_info_matrix &a) {
  const auto m = a.packets();
  const auto half = (m + 1) / 2;
  double binom = 1.0;
  for (std::size_t t = 1; t <= half; ++t)
    binom = binom * static_cast<double>(m - half + t) / static_cast<double>(t);
  return binom * static_cast<double>(a.users()) * static_cast<double>(m);
}

/// Maximum clique: the same scan over every support size 1..m.
inline clique max_clique_exact(const side_info_matrix &a,
                               double budget = default_combination_budget,
                               search_options opts = {}) {
  const auto cost = exact_search_cost(a);
  if (cost > budget)
    throw resource_limit_error("max_clique_exact: estimated cost " + std::to_string(cost) +
                               " exceeds budget " + std::to_string(budget));
  return max_clique_in_window(a, {1, a.packets()}, opts);
}

// ---------------------------------------------------------------------------
// Surjection counts B^j_k: ways to place one 1 in each of k rows over j
// columns so every column is hit.

using big_int = boost::multiprecision::cpp_int;

template <class Int = big_int>
Int binomial(std::size_t n, std::size_t r) {
  if (r > n)
    return Int(0);
  r = std::min(r, n - r);
  Int out(1);
  for (std::size_t t = 1; t <= r; ++t)
    out = out * Int(n - r + t) / Int(t);
  return out;
}

template <class Int = big_int>
Int int_pow(std::size_t base, std::size_t exp) {
  Int out(1);
  for (std::size_t t = 0; t < exp; ++t)
    out *= Int(base);
  return out;
}

/// Inclusion-exclusion: sum_{i=0}^{j-1} (-1)^i C(j,i) (j-i)^k.
template <class Int = big_int>
Int surjections_closed_form(std::size_t j, std::size_t k) {
  Int sum(0);
  for (std::size_t i = 0; i < j; ++i) {
    Int term = binomial<Int>(j, i) * int_pow<Int>(j - i, k);
    if (i % 2)
      sum -= term;
    else
      sum += term;
  }
  return sum;
}

/// B^j_k = j^k - sum_{t=1}^{j-1} C(j,t) B^{j-t}_k, with B^1_k = 1.
template <class Int = big_int>
Int surjections_recurrence(std::size_t j, std::size_t k) {
  std::vector<Int> b(j + 1, Int(0));
  for (std::size_t s = 1; s <= j; ++s) {
    Int v = int_pow<Int>(s, k);
    for (std::size_t t = 1; t < s; ++t)
      v -= binomial<Int>(s, t) * b[s - t];
    b[s] = v;
  }
  return b[j];
}

inline big_int count_surjective_placements(std::size_t j, std::size_t k) {
  if (j == 0 || j > k)
    throw std::invalid_argument("count_surjective_placements: need 1 <= j <= k");
  return surjections_closed_form<big_int>(j, k);
}

/// sum_{i=2}^{j-1} (-1)^i C(j,i) (j-i)^k: the part of B^j_k beyond
/// j^k - j (j-1)^k.
inline big_int surjection_tail(std::size_t j, std::size_t k) {
  big_int sum(0);
  for (std::size_t i = 2; i < j; ++i) {
    big_int term = binomial<big_int>(j, i) * int_pow<big_int>(j - i, k);
    if (i % 2)
      sum -= term;
    else
      sum += term;
  }
  return sum;
}

/// Smallest k >= 1 with a nonnegative surjection tail.
inline std::size_t min_tail_nonnegative_k(std::size_t j, std::size_t max_k = 4096) {
  if (j == 0)
    throw std::invalid_argument("min_tail_nonnegative_k: j must be >= 1");
  for (std::size_t k = 1; k <= max_k; ++k)
    if (surjection_tail(j, k) >= 0)
      return k;
  throw resource_limit_error("min_tail_nonnegative_k: not found up to k = " +
                             std::to_string(max_k));
}

// ---------------------------------------------------------------------------
// Concentration of the clique size around n f(j).

struct concentration {
  double mu;        // n f(j)
  double mu_delta;  // mu * sqrt(3 c ln n / (n f(j)))
  double bound;     // upper bound on Pr[|X - mu| >= mu_delta]
  bool vacuous;     // bound >= 1 or mu - mu_delta <= 0
};

namespace detail {

inline void check_concentration_args(std::size_t n, std::size_t j, double p, double c) {
  if (n < 2)
    throw std::invalid_argument("concentration_bound: n must be >= 2");
  if (j == 0)
    throw std::invalid_argument("concentration_bound: j must be >= 1");
  check_probability(p);
  if (!(c > 1.0))
    throw std::invalid_argument("concentration_bound: c must exceed 1");
}

/// j (1 - 1/j)^(mu - mu_delta), taken as 0 for j = 1.
inline double miss_term(std::size_t j, double exponent) {
  if (j == 1)
    return 0.0;
  const double jd = static_cast<double>(j);
  return jd * std::pow(1.0 - 1.0 / jd, exponent);
}

} // namespace detail

/// Fixed column set of size j.
inline concentration concentration_bound(std::size_t n, std::size_t j, double p, double c) {
  detail::check_concentration_args(n, j, p, c);
  const double nd = static_cast<double>(n);
  const double fj = good_row_probability(j, p);
  const double mu = nd * fj;
  const double delta = std::sqrt(3.0 * c * std::log(nd) / (nd * fj));
  const double md = mu * delta;
  const double bound = 2.0 / std::pow(nd, c) + 2.0 * md * detail::miss_term(j, mu - md);
  return {mu, md, bound, bound >= 1.0 || mu - md <= 0.0};
}

/// Union bound over every j-subset of m = d n columns; needs c > j.
inline concentration union_concentration_bound(std::size_t n, std::size_t m, std::size_t j,
                                               double p, double c) {
  detail::check_concentration_args(n, j, p, c);
  if (!(c > static_cast<double>(j)))
    throw std::invalid_argument("union_concentration_bound: c must exceed j");
  const double nd = static_cast<double>(n);
  const double jd = static_cast<double>(j);
  const double d = static_cast<double>(m) / nd;
  const auto base = concentration_bound(n, j, p, c);
  const double dj = std::pow(d, jd);
  const double bound = 2.0 * dj / std::pow(nd, c - jd) +
                       2.0 * dj * std::pow(nd, jd) * base.mu_delta *
                           detail::miss_term(j, base.mu - base.mu_delta);
  return {base.mu, base.mu_delta, bound, bound >= 1.0 || base.mu - base.mu_delta <= 0.0};
}

} // namespace idnc
