#pragma once

/*
 * Monte Carlo experiments on random side-information matrices.
 *
 * Every (p, trial) cell draws one matrix and scores each enabled scheme on it
 * (paired design). Randomness comes from counter_rng streams keyed by
 * (seed, p, trial, purpose), so a cell's numbers do not depend on the grid,
 * the scheme subset, or the thread schedule.
 */

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "baselines.hpp"
#include "rng.hpp"
#include "side_info.hpp"
#include "solvers.hpp"

namespace idnc {

/// Each entry 1 independently with probability p.
inline side_info_matrix generate_matrix(std::size_t n, std::size_t m, double p, counter_rng &rng) {
  check_probability(p);
  std::vector<std::uint8_t> entries(n * m);
  for (auto &e : entries)
    e = rng.bernoulli(p);
  return side_info_matrix(n, m, entries);
}

inline side_info_matrix generate_matrix(std::size_t n, std::size_t m, double p,
                                        std::uint64_t seed) {
  counter_rng rng(derive_key(seed, {}));
  return generate_matrix(n, m, p, rng);
}

/// 0.01, 0.02, ..., 0.99.
inline std::vector<double> default_loss_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 99; ++k)
    grid.push_back(k / 100.0);
  return grid;
}

/// Six significant digits, the number format of every CSV this module writes.
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct experiment_config {
  std::size_t n = 20;
  std::size_t m = 20;
  std::vector<double> loss_grid = default_loss_grid();
  std::size_t trials = 100;
  std::size_t delta = 3;
  std::uint64_t seed = 0;
  std::vector<scheme> schemes = {scheme::max_clique, scheme::best_repetition,
                                 scheme::random_repetition, scheme::cope_like};
  /// Extend the max-clique window down to single columns when j* - delta > 1.
  bool widen_to_single_column = false;
  double exact_budget = default_combination_budget;
  unsigned threads = 1;

  void validate() const {
    if (n == 0 || m == 0)
      throw std::invalid_argument("experiment_config: n and m must be positive");
    if (trials == 0)
      throw std::invalid_argument("experiment_config: trials must be >= 1");
    if (loss_grid.empty())
      throw std::invalid_argument("experiment_config: empty loss grid");
    for (double p : loss_grid)
      check_probability(p);
    if (schemes.empty())
      throw std::invalid_argument("experiment_config: no schemes selected");
  }
};

struct trial_score {
  double value = 0;
  std::string packet; // "1+3"; empty when no packet was needed
  bool failed = false;
};

struct cell_result {
  scheme kind;
  double p;
  std::vector<trial_score> trials;
  double mean = 0;
  double stddev = 0; // population deviation over trials
  bool failed = false;
};

struct experiment_result {
  experiment_config config;
  std::vector<cell_result> cells; // scheme-major, then p ascending

  const cell_result &cell(scheme s, double p) const {
    for (const auto &c : cells)
      if (c.kind == s && c.p == p)
        return c;
    throw std::out_of_range("experiment_result: no cell for " + std::string(scheme_name(s)) +
                            " at p = " + format_number(p));
  }
  double mean(scheme s, double p) const { return cell(s, p).mean; }
};

namespace detail {

// Both stochastic baselines read the same order stream: random repetition
// resends the head of the permutation COPE-like walks (common random numbers).
enum stream : std::uint64_t { matrix_stream = 0, order_stream = 1 };

inline std::uint64_t cell_key(std::uint64_t seed, double p, std::size_t trial, stream purpose) {
  return derive_key(seed, {std::bit_cast<std::uint64_t>(p), trial, purpose});
}

inline trial_score to_score(const std::optional<scheme_decision> &d) {
  if (!d)
    return {};
  return {static_cast<double>(d->beneficiary_count), format_packet(d->packet), false};
}

inline trial_score clique_score(const side_info_matrix &a, const clique &c, scheme kind) {
  if (c.empty())
    return {};
  return to_score(score(a, coded_packet(c.columns()), kind));
}

} // namespace detail

/// Score one scheme on one matrix. `seed`/`p`/`trial` select the random
/// streams of the stochastic baselines.
inline trial_score run_scheme(scheme s, const side_info_matrix &a, const experiment_config &cfg,
                              double p, std::size_t trial) {
  switch (s) {
  case scheme::max_clique: {
    auto params = clique_search_params::make(p, cfg.delta, a.packets());
    auto win = params.window(a.packets());
    if (cfg.widen_to_single_column)
      win.lo = 1;
    return detail::clique_score(a, max_clique_in_window(a, win), s);
  }
  case scheme::best_repetition:
    return detail::to_score(best_repetition(a));
  case scheme::random_repetition: {
    counter_rng rng(detail::cell_key(cfg.seed, p, trial, detail::order_stream));
    return detail::to_score(random_repetition(a, rng));
  }
  case scheme::cope_like: {
    counter_rng rng(detail::cell_key(cfg.seed, p, trial, detail::order_stream));
    const auto order = random_order(a, rng);
    return detail::to_score(cope_like(a, order));
  }
  case scheme::exact_oracle:
    try {
      return detail::clique_score(a, max_clique_exact(a, cfg.exact_budget), s);
    } catch (const resource_limit_error &) {
      return {0, {}, true};
    }
  }
  throw std::logic_error("run_scheme: unknown scheme");
}

inline side_info_matrix cell_matrix(const experiment_config &cfg, double p, std::size_t trial) {
  counter_rng rng(detail::cell_key(cfg.seed, p, trial, detail::matrix_stream));
  return generate_matrix(cfg.n, cfg.m, p, rng);
}

inline experiment_result run_sweep(const experiment_config &cfg) {
  cfg.validate();
  auto grid = cfg.loss_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const auto ns = cfg.schemes.size();
  const auto cells = grid.size() * cfg.trials;
  // scores[(cell * ns) + scheme]
  std::vector<trial_score> scores(cells * ns);
  auto work = [&](std::size_t cell) {
    const double p = grid[cell / cfg.trials];
    const std::size_t trial = cell % cfg.trials;
    const auto a = cell_matrix(cfg, p, trial);
    for (std::size_t s = 0; s < ns; ++s)
      scores[cell * ns + s] = run_scheme(cfg.schemes[s], a, cfg, p, trial);
  };

  const unsigned threads =
      cfg.threads ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
  if (threads <= 1) {
    for (std::size_t c = 0; c < cells; ++c)
      work(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (auto c = next.fetch_add(1); c < cells; c = next.fetch_add(1))
          work(c);
      });
  }

  experiment_result out{cfg, {}};
  out.config.loss_grid = grid;
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t g = 0; g < grid.size(); ++g) {
      cell_result cell{cfg.schemes[s], grid[g], {}, 0, 0, false};
      double sum = 0;
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        const auto &sc = scores[(g * cfg.trials + t) * ns + s];
        cell.trials.push_back(sc);
        cell.failed = cell.failed || sc.failed;
        sum += sc.value;
      }
      const double k = static_cast<double>(cfg.trials);
      cell.mean = sum / k;
      double ss = 0;
      for (const auto &sc : cell.trials)
        ss += (sc.value - cell.mean) * (sc.value - cell.mean);
      cell.stddev = std::sqrt(ss / k);
      if (cell.failed)
        cell.mean = cell.stddev = std::nan("");
      out.cells.push_back(std::move(cell));
    }
  return out;
}

/// `scheme,p,n,m,trials,mean,stddev`; failed cells print NA.
inline void write_csv(std::ostream &out, const experiment_result &r) {
  out << "scheme,p,n,m,trials,mean,stddev\n";
  for (const auto &c : r.cells) {
    out << scheme_name(c.kind) << ',' << format_number(c.p) << ',' << r.config.n << ','
        << r.config.m << ',' << r.config.trials << ',';
    if (c.failed)
      out << "NA,NA\n";
    else
      out << format_number(c.mean) << ',' << format_number(c.stddev) << '\n';
  }
}

inline nlohmann::json to_json(const experiment_result &r) {
  nlohmann::json cfg = {{"n", r.config.n},         {"m", r.config.m},
                        {"trials", r.config.trials}, {"delta", r.config.delta},
                        {"seed", r.config.seed},     {"loss_grid", r.config.loss_grid}};
  nlohmann::json cells = nlohmann::json::array();
  for (const auto &c : r.cells) {
    nlohmann::json trials = nlohmann::json::array();
    for (const auto &t : c.trials)
      trials.push_back({{"beneficiaries", t.value}, {"packet", t.packet}, {"failed", t.failed}});
    nlohmann::json cell = {{"scheme", scheme_name(c.kind)}, {"p", c.p}, {"failed", c.failed}};
    if (c.failed) {
      cell["mean"] = nullptr;
      cell["stddev"] = nullptr;
    } else {
      cell["mean"] = c.mean;
      cell["stddev"] = c.stddev;
    }
    cell["trials"] = std::move(trials);
    cells.push_back(std::move(cell));
  }
  return {{"config", cfg}, {"cells", cells}};
}

// ---------------------------------------------------------------------------

struct fj_row {
  double p;
  std::size_t j_star;
  double f_j_star;
};

/// (p, j*, f(j*)) with j* unclamped.
inline std::vector<fj_row> emit_fj_table(std::span<const double> p_grid) {
  std::vector<fj_row> out;
  for (double p : p_grid) {
    const auto j = j_star(p, std::numeric_limits<std::size_t>::max());
    out.push_back({p, j, good_row_probability(j, p)});
  }
  return out;
}

inline void write_fj_csv(std::ostream &out, std::span<const fj_row> rows) {
  out << "p,j_star,f_j_star\n";
  for (const auto &r : rows)
    out << format_number(r.p) << ',' << r.j_star << ',' << format_number(r.f_j_star) << '\n';
}

// ---------------------------------------------------------------------------

struct clique_stats {
  std::size_t n = 0, m = 0, trials = 0;
  double p = 0;
  std::size_t j_star = 0;
  double mu = 0;       // n f(j*)
  double mu_delta = 0; // concentration half-width at c = 2
  bool used_exact = false;
  std::vector<std::size_t> sizes;   // clique size per trial
  std::vector<std::size_t> touched; // columns touched per trial
  double mean_size = 0;
  double stddev_size = 0;
  std::map<std::size_t, std::size_t> touched_histogram;
  std::size_t modal_touched = 0;
  double fraction_within = 0;    // |size - mu| < mu_delta
  double fraction_touch_j_star = 0;
};

/// Empirical clique numbers of random matrices. Uses the exact search when
/// its cost estimate fits `budget`, else Max Clique with `delta` (flagged by
/// used_exact = false).
inline clique_stats clique_number_experiment(std::size_t n, std::size_t m, double p,
                                             std::size_t trials, std::uint64_t seed,
                                             std::size_t delta = 3,
                                             double budget = default_combination_budget) {
  check_probability(p);
  if (n < 2 || m == 0 || trials == 0)
    throw std::invalid_argument("clique_number_experiment: need n >= 2, m >= 1, trials >= 1");
  clique_stats st;
  st.n = n;
  st.m = m;
  st.p = p;
  st.trials = trials;
  st.j_star = j_star(p, m);
  const auto conc = concentration_bound(n, st.j_star, p, 2.0);
  st.mu = conc.mu;
  st.mu_delta = conc.mu_delta;
  st.used_exact = exact_search_cost(side_info_matrix(n, m)) <= budget;
  const auto params = clique_search_params::make(p, delta, m);

  double sum = 0;
  std::size_t within = 0, at_j_star = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    counter_rng rng(derive_key(seed, {std::bit_cast<std::uint64_t>(p), t}));
    const auto a = generate_matrix(n, m, p, rng);
    const auto c = st.used_exact ? max_clique_exact(a, budget) : max_clique_algorithm1(a, params);
    const auto cols = c.columns().size();
    st.sizes.push_back(c.size());
    st.touched.push_back(cols);
    ++st.touched_histogram[cols];
    sum += static_cast<double>(c.size());
    within += std::abs(static_cast<double>(c.size()) - st.mu) < st.mu_delta;
    at_j_star += cols == st.j_star;
  }
  const double k = static_cast<double>(trials);
  st.mean_size = sum / k;
  double ss = 0;
  for (auto s : st.sizes)
    ss += (static_cast<double>(s) - st.mean_size) * (static_cast<double>(s) - st.mean_size);
  st.stddev_size = std::sqrt(ss / k);
  st.fraction_within = static_cast<double>(within) / k;
  st.fraction_touch_j_star = static_cast<double>(at_j_star) / k;
  std::size_t best = 0;
  for (const auto &[cols, count] : st.touched_histogram)
    if (count > best) {
      best = count;
      st.modal_touched = cols;
    }
  return st;
}

} // namespace idnc
