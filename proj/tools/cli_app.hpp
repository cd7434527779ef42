#pragma once

// The `secretary` command line: subcommands bounds, exact, simulate, sweep,
// iid, tradeoff and combined-check. Exit status 0 on success, 2 on usage
// errors, 3 when an exact computation exceeds its budget.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "secretary/secretary.hpp"
#include "sweep.hpp"

namespace secretary::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

namespace detail {

struct Common {
  std::uint64_t seed = 1;
  std::string format = "json";
  std::size_t threads = 0;
};

struct InstanceArgs {
  std::vector<double> values;
  std::size_t h = 0;
  std::string instance_file;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--values", values, "Candidate values, comma separated")->delimiter(',');
    cmd->add_option("--h", h, "History size");
    cmd->add_option("--instance", instance_file, "JSON file {\"values\": [...], \"h\": k}");
  }

  Instance build() const {
    if (!instance_file.empty()) {
      std::ifstream in(instance_file);
      if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + instance_file);
      return instance_from_json(nlohmann::json::parse(in));
    }
    return make_instance(values, h);
  }
};

struct PolicyArgs {
  std::string algorithm = "alg3";
  std::optional<std::size_t> q_rounds;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--algorithm,--policy", algorithm, "alg1 | alg2 | alg3 | combined | never");
    cmd->add_option("--q-rounds", q_rounds, "alg3: number of sampling rounds");
  }
  PolicySpec build() const { return parse_policy(algorithm, q_rounds); }
};

inline nlohmann::json estimate_json(const RatioEstimate& e) {
  return {{"mean_alg", e.mean_alg}, {"mean_opt", e.mean_opt},         {"ratio", e.ratio},
          {"std_err", e.alg_std_err}, {"ratio_std_err", e.ratio_std_err}, {"trials", e.trials},
          {"seed", e.seed}};
}

inline void emit_estimate(std::ostream& out, const std::string& format, const RatioEstimate& e) {
  if (format == "csv") {
    out << "mean_alg,mean_opt,ratio,std_err,ratio_std_err,trials,seed\n"
        << format_number(e.mean_alg) << ',' << format_number(e.mean_opt) << ','
        << format_number(e.ratio) << ',' << format_number(e.alg_std_err) << ','
        << format_number(e.ratio_std_err) << ',' << e.trials << ',' << e.seed << '\n';
    return;
  }
  out << estimate_json(e).dump() << '\n';
}

}  // namespace detail

/// Runs the CLI on `args` (without the program name).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secretary problem with a revealed sample: bounds, exact values, simulation"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();

  detail::Common common;
  app.add_option("--seed", common.seed, "Random seed");
  app.add_option("--format", common.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", common.threads, "Worker threads (default: SECRETARY_THREADS or all)");

  // bounds
  std::size_t b_n = 0, b_h = 0;
  auto* bounds = app.add_subcommand("bounds", "Closed-form bounds for one (n, h)");
  bounds->add_option("--n", b_n)->required();
  bounds->add_option("--h", b_h)->required();
  bool want_json = false, want_csv = false;
  bounds->add_flag("--json", want_json);
  bounds->add_flag("--csv", want_csv);

  // exact
  detail::InstanceArgs e_inst;
  detail::PolicyArgs e_pol;
  std::string e_model = "ros";
  std::string e_order = "exhaustive";
  double e_budget = 1e8;
  auto* exact = app.add_subcommand("exact", "Exact expectation by enumeration");
  e_inst.add_to(exact);
  e_pol.add_to(exact);
  exact->add_option("--model", e_model)->check(CLI::IsMember({"ros", "aos"}));
  exact->add_option("--order", e_order)
      ->check(CLI::IsMember({"exhaustive", "increasing-unseen", "eps-zero"}));
  exact->add_option("--budget", e_budget, "Maximum number of enumerated leaves");

  // simulate
  detail::InstanceArgs s_inst;
  detail::PolicyArgs s_pol;
  std::string s_model = "ros";
  std::string s_order = "random";
  std::uint64_t s_trials = 100000;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate on one instance");
  s_inst.add_to(simulate);
  s_pol.add_to(simulate);
  simulate->add_option("--model", s_model)->check(CLI::IsMember({"ros", "aos"}));
  simulate->add_option("--order", s_order)
      ->check(CLI::IsMember({"random", "increasing-unseen", "eps-zero", "exhaustive"}));
  simulate->add_option("--trials", s_trials);

  // sweep
  std::size_t w_n = 0;
  std::string w_grid;
  std::uint64_t w_trials = 0;
  std::string w_policy = "alg3";
  auto* sweep = app.add_subcommand("sweep", "Bound curves over a grid of h, as CSV");
  sweep->add_option("--n", w_n)->required();
  sweep->add_option("--h-grid", w_grid, "start:step:end")->required();
  sweep->add_option("--mc-trials", w_trials, "Add Monte Carlo columns with this many trials");
  sweep->add_option("--policy", w_policy);

  // iid
  std::string i_dist = "uniform";
  double i_param = 1.0;
  std::size_t i_n = 0, i_h = 0;
  detail::PolicyArgs i_pol;
  std::uint64_t i_trials = 200000;
  auto* iid = app.add_subcommand("iid", "i.i.d. values from a known family");
  iid->add_option("--dist", i_dist)->check(CLI::IsMember({"uniform", "exponential", "pareto"}));
  iid->add_option("--param", i_param, "Exponential rate or Pareto shape");
  iid->add_option("--n", i_n)->required();
  iid->add_option("--h", i_h);
  i_pol.add_to(iid);
  iid->add_option("--trials", i_trials);

  // tradeoff
  std::size_t t_n = 0, t_h = 0;
  double t_eps = 0.01;
  detail::PolicyArgs t_pol;
  t_pol.algorithm = "alg2";
  std::uint64_t t_trials = 100000;
  auto* tradeoff = app.add_subcommand("tradeoff", "Random-order ratio on the epsilon/zero instance");
  tradeoff->add_option("--n", t_n)->required();
  tradeoff->add_option("--h", t_h)->required();
  tradeoff->add_option("--epsilon", t_eps);
  t_pol.add_to(tradeoff);
  tradeoff->add_option("--trials", t_trials);

  // combined-check
  std::size_t c_n = 0;
  std::uint64_t c_trials = 100000;
  auto* combined = app.add_subcommand("combined-check", "Partition-threshold policy, both models");
  combined->add_option("--n", c_n)->required();
  combined->add_option("--trials", c_trials);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  TrialOptions trial_options;
  trial_options.threads = common.threads;
  const std::string& format = common.format;

  try {
    if (*bounds) {
      const BoundReport r = bound_report(b_n, b_h);
      const bool csv = want_csv || (format == "csv" && !want_json);
      if (csv) {
        out << "n,h,aos_lower,aos_upper,ros_lower,ros_upper,q,q_rounds\n"
            << r.n << ',' << r.h << ',' << format_number(r.aos_lower) << ','
            << format_number(r.aos_upper) << ',' << format_number(r.ros_lower) << ','
            << format_number(r.ros_upper) << ',' << format_number(r.q) << ',' << r.q_rounds << '\n';
      } else {
        out << nlohmann::json{{"n", r.n},
                              {"h", r.h},
                              {"aos_lower", r.aos_lower},
                              {"aos_upper", r.aos_upper},
                              {"ros_lower", r.ros_lower},
                              {"ros_upper", r.ros_upper},
                              {"q", r.q},
                              {"q_rounds", r.q_rounds}}
                   .dump()
            << '\n';
      }
    } else if (*exact) {
      const Instance instance = e_inst.build();
      const PolicySpec spec = e_pol.build();
      OracleOptions options;
      options.budget = e_budget;
      options.threads = common.threads == 0 ? threads_from_env() : common.threads;
      ExactResult r;
      if (e_model == "ros") {
        r = exact_ros(instance, spec, options);
      } else if (e_order == "exhaustive") {
        r = exact_aos(instance, spec, options);
      } else {
        r = exact_fixed_adversary(instance, spec, parse_order_model(e_order) ==
                                                          OrderModel::EpsZero
                                                      ? AdversaryOrderKind::EpsZeroOrder
                                                      : AdversaryOrderKind::IncreasingUnseenFirst,
                                  options);
      }
      out << nlohmann::json{{"algorithm", to_string(spec.kind)},
                            {"model", e_model},
                            {"expected_alg", r.expected_alg},
                            {"expected_opt", r.expected_opt},
                            {"ratio", r.ratio},
                            {"per_round_profit", r.per_round_profit},
                            {"enumerated_worlds", r.enumerated_worlds}}
                 .dump()
          << '\n';
    } else if (*simulate) {
      const Instance instance = s_inst.build();
      const PolicySpec spec = s_pol.build();
      OrderModel model = OrderModel::Random;
      if (s_model == "aos") {
        model = parse_order_model(s_order == "random" ? "increasing-unseen" : s_order);
      }
      detail::emit_estimate(out, format,
                            run_trials(instance, spec, model, s_trials, common.seed, trial_options));
    } else if (*sweep) {
      const auto grid = parse_grid(w_grid);
      if (!grid || w_n == 0) {
        err << "sweep: expected --n >= 1 and --h-grid start:step:end\n";
        return kExitUsage;
      }
      std::optional<SweepMonteCarlo> mc;
      if (w_trials > 0) {
        mc = SweepMonteCarlo{w_trials, common.seed, parse_policy(w_policy), trial_options};
      }
      out << sweep_csv(sweep_rows(w_n, *grid, mc));
    } else if (*iid) {
      const DistSpec dist = parse_dist(i_dist, i_param);
      detail::emit_estimate(out, format,
                            iid_prophet_trials(dist, i_n, i_h, i_pol.build(), i_trials,
                                               common.seed, trial_options));
    } else if (*tradeoff) {
      detail::emit_estimate(out, format,
                            tradeoff_experiment(t_n, t_h, t_pol.build(), t_eps, t_trials,
                                                common.seed, trial_options));
    } else if (*combined) {
      const CombinedCheck r = combined_policy_check(c_n, c_trials, common.seed, {}, trial_options);
      if (format == "csv") {
        out << "side,mean_alg,mean_opt,ratio,std_err,ratio_std_err,trials,seed\n";
        for (const auto& [label, e] : {std::pair{"ros", r.ros}, std::pair{"aos", r.aos}}) {
          out << label << ',' << format_number(e.mean_alg) << ',' << format_number(e.mean_opt)
              << ',' << format_number(e.ratio) << ',' << format_number(e.alg_std_err) << ','
              << format_number(e.ratio_std_err) << ',' << e.trials << ',' << e.seed << '\n';
        }
      } else {
        out << nlohmann::json{{"ros", detail::estimate_json(r.ros)},
                              {"aos", detail::estimate_json(r.aos)}}
                   .dump()
            << '\n';
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::BudgetExceeded:
      case ErrorCode::TooLarge:
      case ErrorCode::RandomnessNotEnumerable:
        return kExitBudget;
      default:
        return kExitUsage;
    }
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace secretary::cli
