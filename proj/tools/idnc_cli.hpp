#pragma once

// Command-line front end. Parsing, dispatch and formatting only; every
// computation lives in the library headers.
//
// Exit codes: 0 success, 2 usage or input errors, 3 resource limits.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "idnc/idnc.hpp"

namespace idnc::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_resource = 3;

namespace detail {

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void print_decision(std::ostream &out, const std::optional<scheme_decision> &d,
                           const std::string &prefix) {
  out << prefix;
  if (!d)
    out << "no packet needed\n";
  else
    out << "packet=" << format_packet(d->packet) << " beneficiaries=" << d->beneficiary_count
        << '\n';
}

inline std::optional<scheme_decision> clique_decision(const side_info_matrix &a, const clique &c,
                                                      scheme kind) {
  if (c.empty())
    return std::nullopt;
  return score(a, coded_packet(c.columns()), kind);
}

/// Density of ones, pulled into (0, 1) so j* is defined.
inline double matrix_density(const side_info_matrix &a) {
  const double d = static_cast<double>(a.ones()) /
                   static_cast<double>(a.users() * a.packets());
  return std::clamp(d, 1e-6, 1.0 - 1e-6);
}

inline std::vector<scheme> parse_scheme_list(const std::vector<std::string> &names) {
  std::vector<scheme> out;
  for (const auto &name : names) {
    if (name == "all") {
      out.assign(std::begin(all_schemes), std::end(all_schemes));
      continue;
    }
    auto s = parse_scheme(name);
    if (!s)
      throw usage_error("unknown scheme: " + name);
    if (std::find(out.begin(), out.end(), *s) == out.end())
      out.push_back(*s);
  }
  return out;
}

/// Writes to --out when given, else to `fallback`.
class sink {
public:
  sink(const std::string &path, std::ostream &fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_)
        throw usage_error("cannot open output file: " + path);
      out_ = &file_;
    }
  }
  std::ostream &stream() { return *out_; }

private:
  std::ofstream file_;
  std::ostream *out_;
};

} // namespace detail

/// Runs one invocation. Output goes to `out` (or --out), diagnostics to `err`.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Instantly decodable network coding toolkit", "idnc"};
  app.require_subcommand(1, 1);

  std::string matrix_path, x3c_path, out_path, format = "csv";
  std::vector<std::string> scheme_names;
  std::vector<double> p_values;
  std::size_t n = 20, m = 20, trials = 100, delta = 3;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;

  auto *solve = app.add_subcommand("solve", "best packet per scheme for a matrix file");
  solve->add_option("--matrix", matrix_path, "side-information matrix file")->required();
  solve->add_option("--scheme", scheme_names,
                    "max-clique | exact | best-repetition | random-repetition | cope-like | all")
      ->required()
      ->delimiter(',');
  solve->add_option("--p", p_values, "loss probability for j* (default: matrix density)");
  solve->add_option("--delta", delta, "window half-width around j*")->capture_default_str();
  solve->add_option("--seed", seed, "seed for the randomized schemes");
  solve->add_option("--out", out_path, "output file");

  auto *graph = app.add_subcommand("graph", "IDNC graph of a matrix file as Graphviz DOT");
  graph->add_option("--matrix", matrix_path, "side-information matrix file")->required();
  graph->add_option("--out", out_path, "output file");

  auto *reduce = app.add_subcommand("reduce", "X3C instance to matrix plus both decisions");
  reduce->add_option("--x3c", x3c_path, "X3C instance file")->required();
  reduce->add_option("--out", out_path, "output file");

  auto *sweep = app.add_subcommand("sweep", "Monte Carlo comparison over a loss grid");
  sweep->add_option("--n", n, "users")->capture_default_str();
  sweep->add_option("--m", m, "packets")->capture_default_str();
  sweep->add_option("--trials", trials, "matrices per loss rate")->capture_default_str();
  sweep->add_option("--delta", delta, "window half-width around j*")->capture_default_str();
  sweep->add_option("--p", p_values, "loss rates (default 0.01..0.99)")->delimiter(',');
  sweep->add_option("--scheme", scheme_names, "schemes (default: all but exact)")->delimiter(',');
  sweep->add_option("--seed", seed, "master seed")->required();
  sweep->add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sweep->add_option("--threads", threads, "worker threads, 0 = all cores")->capture_default_str();
  sweep->add_option("--out", out_path, "output file");

  auto *fj = app.add_subcommand("fj", "table of j* and f(j*) per loss rate");
  fj->add_option("--p", p_values, "loss rates")->required()->delimiter(',');
  fj->add_option("--out", out_path, "output file");

  auto *stats = app.add_subcommand("clique-stats", "empirical clique numbers of random matrices");
  stats->add_option("--n", n, "users")->capture_default_str();
  stats->add_option("--m", m, "packets")->capture_default_str();
  stats->add_option("--p", p_values, "loss rate")->required()->expected(1);
  stats->add_option("--trials", trials, "matrices")->capture_default_str();
  stats->add_option("--delta", delta, "window half-width for the fallback search")
      ->capture_default_str();
  stats->add_option("--seed", seed, "master seed")->required();
  stats->add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  stats->add_option("--out", out_path, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    if (solve->parsed()) {
      const auto a = read_matrix_file(matrix_path);
      const auto schemes = detail::parse_scheme_list(scheme_names);
      detail::sink s(out_path, out);
      const bool labelled = schemes.size() > 1;
      for (auto kind : schemes) {
        std::optional<scheme_decision> d;
        switch (kind) {
        case scheme::max_clique: {
          const double p = p_values.empty() ? detail::matrix_density(a) : p_values.front();
          d = detail::clique_decision(
              a, max_clique_algorithm1(a, clique_search_params::make(p, delta, a.packets())),
              kind);
          break;
        }
        case scheme::exact_oracle:
          d = detail::clique_decision(a, max_clique_exact(a), kind);
          break;
        case scheme::best_repetition:
          d = best_repetition(a);
          break;
        case scheme::random_repetition:
        case scheme::cope_like:
          if (!seed)
            throw detail::usage_error("--seed is required for " +
                                      std::string(scheme_name(kind)));
          d = kind == scheme::cope_like ? cope_like(a, *seed) : random_repetition(a, *seed);
          break;
        }
        detail::print_decision(s.stream(), d,
                               labelled ? std::string(scheme_name(kind)) + " " : std::string());
      }
    } else if (graph->parsed()) {
      const auto g = build_graph(read_matrix_file(matrix_path));
      detail::sink s(out_path, out);
      write_dot(s.stream(), g);
    } else if (reduce->parsed()) {
      const auto x = read_x3c_file(x3c_path);
      const auto a = x3c_to_matrix(x);
      const auto check = check_reduction(x);
      const auto best = solve_exhaustive(a);
      detail::sink s(out_path, out);
      write_matrix(s.stream(), a);
      s.stream() << "x3c=" << (check.x3c_answer ? "yes" : "no")
                 << " diqp=" << (check.diqp_answer ? "yes" : "no") << " max_value=" << best.value
                 << " target=" << x.elements() << '\n';
    } else if (sweep->parsed()) {
      experiment_config cfg;
      cfg.n = n;
      cfg.m = m;
      cfg.trials = trials;
      cfg.delta = delta;
      cfg.seed = *seed;
      cfg.threads = threads;
      if (!p_values.empty())
        cfg.loss_grid = p_values;
      if (!scheme_names.empty())
        cfg.schemes = detail::parse_scheme_list(scheme_names);
      const auto result = run_sweep(cfg);
      detail::sink s(out_path, out);
      if (format == "json")
        s.stream() << to_json(result).dump(2) << '\n';
      else
        write_csv(s.stream(), result);
    } else if (fj->parsed()) {
      const auto rows = emit_fj_table(p_values);
      detail::sink s(out_path, out);
      write_fj_csv(s.stream(), rows);
    } else if (stats->parsed()) {
      const auto st = clique_number_experiment(n, m, p_values.front(), trials, *seed, delta);
      detail::sink s(out_path, out);
      if (format == "json") {
        nlohmann::json hist = nlohmann::json::object();
        for (const auto &[cols, count] : st.touched_histogram)
          hist[std::to_string(cols)] = count;
        s.stream() << nlohmann::json{{"n", st.n},
                                     {"m", st.m},
                                     {"p", st.p},
                                     {"trials", st.trials},
                                     {"method", st.used_exact ? "exact" : "max_clique"},
                                     {"j_star", st.j_star},
                                     {"mu", st.mu},
                                     {"mu_delta", st.mu_delta},
                                     {"mean_size", st.mean_size},
                                     {"stddev_size", st.stddev_size},
                                     {"fraction_within", st.fraction_within},
                                     {"fraction_touch_j_star", st.fraction_touch_j_star},
                                     {"modal_touched", st.modal_touched},
                                     {"touched_histogram", hist},
                                     {"sizes", st.sizes}}
                              .dump(2)
                       << '\n';
      } else {
        auto &o = s.stream();
        o << "n,m,p,trials,method,j_star,mu,mu_delta,mean_size,stddev_size,fraction_within,"
             "fraction_touch_j_star,modal_touched\n";
        o << st.n << ',' << st.m << ',' << format_number(st.p) << ',' << st.trials << ','
          << (st.used_exact ? "exact" : "max_clique") << ',' << st.j_star << ','
          << format_number(st.mu) << ',' << format_number(st.mu_delta) << ','
          << format_number(st.mean_size) << ',' << format_number(st.stddev_size) << ','
          << format_number(st.fraction_within) << ',' << format_number(st.fraction_touch_j_star)
          << ',' << st.modal_touched << '\n';
      }
    }
  } catch (const resource_limit_error &e) {
    err << "error: " << e.what() << '\n';
    return exit_resource;
  } catch (const parse_error &e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const detail::usage_error &e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_ok;
}

} // namespace idnc::cli
