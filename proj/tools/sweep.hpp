#pragma once

// Bound curves over a grid of history sizes, as CSV.
//
// Columns: n,h,h_over_n,aos_lower,aos_upper,ros_lower,ros_upper,analytic_total
// and, when Monte Carlo is requested, mc_ratio,mc_std_err. Comma separated,
// '.' decimal point, LF line endings, numbers printed with %.17g so they
// parse back to the same doubles.

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "secretary/bounds.hpp"
#include "secretary/montecarlo.hpp"
#include "secretary/policies.hpp"

namespace secretary::cli {

struct SweepRow {
  std::size_t n = 0;
  std::size_t h = 0;
  double h_over_n = 0.0;
  double aos_lower = 0.0;
  double aos_upper = 0.0;
  double ros_lower = 0.0;
  double ros_upper = 0.0;
  double analytic_total = 0.0;
  std::optional<double> mc_ratio;
  std::optional<double> mc_std_err;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct HGrid {
  std::size_t start = 0;
  std::size_t step = 1;
  std::size_t end = 0;
};

/// Parses "start:step:end" (inclusive end, step >= 1, start <= end).
inline std::optional<HGrid> parse_grid(const std::string& text) {
  HGrid grid;
  unsigned long long a = 0, b = 0, c = 0;
  int used = 0;
  if (std::sscanf(text.c_str(), "%llu:%llu:%llu%n", &a, &b, &c, &used) != 3 ||
      used != static_cast<int>(text.size()) || text.find('-') != std::string::npos) {
    return std::nullopt;
  }
  if (b == 0 || a > c) return std::nullopt;
  grid.start = a;
  grid.step = b;
  grid.end = c;
  return grid;
}

struct SweepMonteCarlo {
  std::uint64_t trials = 0;
  std::uint64_t seed = 1;
  PolicySpec policy{PolicyKind::Ros, std::nullopt, false};
  TrialOptions options{};
};

/// One row per grid point. Monte Carlo columns, when requested, use the
/// geometric value profile in random order: a stress profile with large
/// gaps between consecutive values, not a worst case.
inline std::vector<SweepRow> sweep_rows(std::size_t n, const HGrid& grid,
                                        const std::optional<SweepMonteCarlo>& mc = std::nullopt) {
  std::vector<SweepRow> rows;
  for (std::size_t h = grid.start; h <= grid.end; h += grid.step) {
    const BoundReport b = bound_report(n, h);
    SweepRow row{n, h, static_cast<double>(h) / static_cast<double>(n), b.aos_lower, b.aos_upper,
                 b.ros_lower, b.ros_upper, analytic_total(n, h, b.q_rounds), {}, {}};
    if (mc && mc->trials > 0) {
      const Instance instance = make_instance(geometric_profile(n + h), h);
      const RatioEstimate est =
          run_trials(instance, mc->policy, OrderModel::Random, mc->trials, mc->seed, mc->options);
      row.mc_ratio = est.ratio;
      row.mc_std_err = est.alg_std_err / est.mean_opt;
    }
    rows.push_back(row);
    if (grid.end - h < grid.step) break;
  }
  return rows;
}

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  const bool with_mc = !rows.empty() && rows.front().mc_ratio.has_value();
  std::string out = "n,h,h_over_n,aos_lower,aos_upper,ros_lower,ros_upper,analytic_total";
  if (with_mc) out += ",mc_ratio,mc_std_err";
  out += '\n';
  for (const SweepRow& r : rows) {
    out += std::to_string(r.n) + ',' + std::to_string(r.h);
    for (double v : {r.h_over_n, r.aos_lower, r.aos_upper, r.ros_lower, r.ros_upper,
                     r.analytic_total}) {
      out += ',' + format_number(v);
    }
    if (with_mc) out += ',' + format_number(*r.mc_ratio) + ',' + format_number(*r.mc_std_err);
    out += '\n';
  }
  return out;
}

/// Inverse of sweep_csv; returns nullopt on any malformed line.
inline std::optional<std::vector<SweepRow>> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) return std::nullopt;
  const std::string base = "n,h,h_over_n,aos_lower,aos_upper,ros_lower,ros_upper,analytic_total";
  bool with_mc = false;
  if (line == base + ",mc_ratio,mc_std_err") {
    with_mc = true;
  } else if (line != base) {
    return std::nullopt;
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream cs(line);
    for (std::string cell; std::getline(cs, cell, ',');) cells.push_back(cell);
    if (cells.size() != (with_mc ? 10u : 8u)) return std::nullopt;
    try {
      std::size_t used = 0;
      auto num = [&](const std::string& s) {
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      };
      auto count = [&](const std::string& s) {
        const auto v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return static_cast<std::size_t>(v);
      };
      SweepRow r;
      r.n = count(cells[0]);
      r.h = count(cells[1]);
      r.h_over_n = num(cells[2]);
      r.aos_lower = num(cells[3]);
      r.aos_upper = num(cells[4]);
      r.ros_lower = num(cells[5]);
      r.ros_upper = num(cells[6]);
      r.analytic_total = num(cells[7]);
      if (with_mc) {
        r.mc_ratio = num(cells[8]);
        r.mc_std_err = num(cells[9]);
      }
      rows.push_back(r);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return rows;
}

}  // namespace secretary::cli
